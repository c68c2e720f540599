//! Random graph generation shared by the integration tests.

#![allow(dead_code)]

use oncograph::graph::{DiagnosisEdge, GdaAssociation, GeneticEdge, TargetEdge, TreatmentEdge};
use oncograph::{DiseaseNode, DrugNode, Effectiveness, KnowledgeGraph, MutationKey, PatientRecord, Rational};
use proptest::prelude::*;

/// Construction plan for a small graph; indices refer to the node lists.
#[derive(Debug, Clone)]
pub struct GraphPlan {
    pub patients: Vec<(u32, bool)>,
    pub mutations: Vec<(u8, u64)>,
    pub diseases: usize,
    pub drugs: Vec<i64>,
    pub genetic: Vec<(usize, usize, Option<i64>)>,
    pub diagnosis: Vec<(usize, usize)>,
    pub treatment: Vec<(usize, usize, u32, u8)>,
    pub gda: Vec<(usize, usize, i64)>,
    pub target: Vec<(usize, usize)>,
}

pub fn patient_id(i: usize) -> String {
    format!("P{i:02}")
}

pub fn disease_id(i: usize) -> String {
    format!("D{i}")
}

pub fn drug_id(i: usize) -> String {
    format!("drug{i}")
}

pub fn gene_name(g: u8) -> String {
    format!("G{g}")
}

impl GraphPlan {
    pub fn mutation(&self, i: usize) -> MutationKey {
        let (gene, pos) = self.mutations[i];
        MutationKey::new(gene_name(gene), "1", pos, pos)
    }

    pub fn node_count(&self) -> usize {
        self.patients.len() + self.mutations.len() + self.diseases + self.drugs.len()
    }

    /// Builds the graph through the checked API, skipping edges it rejects
    /// (duplicates). Returns the graph and how many inserts were accepted.
    pub fn build(&self) -> (KnowledgeGraph, usize) {
        let mut g = KnowledgeGraph::new();
        for (i, &(months, alive)) in self.patients.iter().enumerate() {
            g.add_node(PatientRecord::new(patient_id(i), months, alive)).unwrap();
        }
        for i in 0..self.mutations.len() {
            g.add_node(self.mutation(i)).unwrap();
        }
        for d in 0..self.diseases {
            g.add_node(DiseaseNode::new(disease_id(d))).unwrap();
        }
        for (i, &w) in self.drugs.iter().enumerate() {
            g.add_node(DrugNode::new(drug_id(i)).with_weight(Rational::from_integer(w))).unwrap();
        }
        let mut accepted = 0;
        for &(p, m, vaf) in &self.genetic {
            accepted += g
                .add_edge(GeneticEdge {
                    patient_id: patient_id(p),
                    mutation: self.mutation(m),
                    vaf: vaf.map(|v| Rational::new(v, 100)),
                })
                .is_ok() as usize;
        }
        for &(d, p) in &self.diagnosis {
            accepted += g
                .add_edge(DiagnosisEdge {
                    disease_id: disease_id(d),
                    patient_id: patient_id(p),
                })
                .is_ok() as usize;
        }
        for &(p, d, order, e) in &self.treatment {
            let effectiveness = [
                Effectiveness::Positive,
                Effectiveness::Unaltered,
                Effectiveness::Reduced,
                Effectiveness::Negative,
            ][e as usize % 4];
            accepted += g
                .add_edge(TreatmentEdge {
                    patient_id: patient_id(p),
                    drug_id: drug_id(d),
                    order,
                    effectiveness,
                })
                .is_ok() as usize;
        }
        for &(d, m, score) in &self.gda {
            accepted += g
                .add_edge(GdaAssociation {
                    disease_id: disease_id(d),
                    mutation: self.mutation(m),
                    gda_score: Rational::new(score, 10),
                })
                .is_ok() as usize;
        }
        for &(m, d) in &self.target {
            accepted += g
                .add_edge(TargetEdge {
                    mutation: self.mutation(m),
                    drug_id: drug_id(d),
                })
                .is_ok() as usize;
        }
        (g, accepted)
    }
}

/// Graphs of at most 50 nodes with every partition non-empty.
pub fn graph_plan() -> impl Strategy<Value = GraphPlan> {
    (1usize..=14, 1usize..=14, 1usize..=4, 1usize..=6)
        .prop_flat_map(|(np, nm, nd, ndr)| {
            (
                prop::collection::vec((0u32..60, any::<bool>()), np),
                // Distinct positions keep mutation keys unique.
                (prop::collection::vec(0u8..5, nm), Just(nm)),
                Just(nd),
                prop::collection::vec(0i64..5, ndr),
                prop::collection::vec((0..np, 0..nm, prop::option::of(0i64..=100)), 0..40),
                prop::collection::vec((0..nd, 0..np), 0..20),
                prop::collection::vec((0..np, 0..ndr, 1u32..4, 0u8..4), 0..10),
                prop::collection::vec((0..nd, 0..nm, 0i64..=10), 0..20),
                prop::collection::vec((0..nm, 0..ndr), 0..20),
            )
        })
        .prop_map(
            |(patients, (genes, nm), diseases, drugs, genetic, diagnosis, treatment, gda, target)| GraphPlan {
                patients,
                mutations: genes.into_iter().zip(0..nm as u64).map(|(g, i)| (g, 1000 + i)).collect(),
                diseases,
                drugs,
                genetic,
                diagnosis,
                treatment,
                gda,
                target,
            },
        )
}
