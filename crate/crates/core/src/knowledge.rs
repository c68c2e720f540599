//! Medical knowledge versus data evidence, per disease.
//!
//! For a disease `d`, the red edges give its patients `Pa(d)`; their green
//! neighborhoods give the mutations present in at least one patient (union)
//! and in every patient (intersection); the magenta edges with a GDA score
//! at or above a threshold give the mutations known to be involved in `d`.
//! Comparing the known set with the intersection yields the verdict.

use std::collections::BTreeSet;

use crate::graph::{ColorFilter, EdgeColor, EdgeLabel, Granularity, KnowledgeGraph, NodeRef, Partition};
use crate::rational::{format_rational, is_unit_interval, Rational};

/// Default cut for "GDA score close to 1".
pub fn default_gda_threshold() -> Rational {
    Rational::new(4, 5)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CheckError {
    #[error("unknown disease {0:?}")]
    UnknownDisease(String),
    #[error("GDA threshold {0} outside [0,1]")]
    InvalidThreshold(String),
}

fn disease_node(graph: &KnowledgeGraph, disease: &str) -> Result<NodeRef, CheckError> {
    graph
        .disease_ref(disease)
        .ok_or_else(|| CheckError::UnknownDisease(disease.to_string()))
}

/// Patients diagnosed with `disease`.
pub fn patients_of(graph: &KnowledgeGraph, disease: &str) -> Result<BTreeSet<NodeRef>, CheckError> {
    let d = disease_node(graph, disease)?;
    Ok(graph
        .neighbors_in(d, ColorFilter::RED, Partition::Patient)
        .expect("disease node exists"))
}

fn mutations_of(graph: &KnowledgeGraph, patient: NodeRef) -> BTreeSet<NodeRef> {
    graph
        .neighbors_in(patient, ColorFilter::GREEN, Partition::Mutation)
        .expect("patient node exists")
}

/// Mutations carried by at least one patient of `disease`.
pub fn mutation_union(graph: &KnowledgeGraph, disease: &str) -> Result<BTreeSet<NodeRef>, CheckError> {
    let patients = patients_of(graph, disease)?;
    Ok(patients.iter().flat_map(|&p| mutations_of(graph, p)).collect())
}

/// Mutations carried by every patient of `disease`; empty when the disease
/// has no patients.
pub fn mutation_intersection(graph: &KnowledgeGraph, disease: &str) -> Result<BTreeSet<NodeRef>, CheckError> {
    let patients = patients_of(graph, disease)?;
    Ok(intersect_all(patients.iter().map(|&p| mutations_of(graph, p))))
}

fn intersect_all<T: Ord + Clone>(mut sets: impl Iterator<Item = BTreeSet<T>>) -> BTreeSet<T> {
    let Some(mut acc) = sets.next() else {
        return BTreeSet::new();
    };
    for set in sets {
        acc.retain(|x| set.contains(x));
        if acc.is_empty() {
            break;
        }
    }
    acc
}

/// Mutations associated with `disease` by a GDA score `>= threshold`.
pub fn known_mutations(
    graph: &KnowledgeGraph,
    disease: &str,
    threshold: Rational,
) -> Result<BTreeSet<NodeRef>, CheckError> {
    if !is_unit_interval(&threshold) {
        return Err(CheckError::InvalidThreshold(format_rational(&threshold)));
    }
    let d = disease_node(graph, disease)?;
    Ok(graph
        .incident_edges(d, EdgeColor::Magenta)
        .filter_map(|e| match e.label {
            EdgeLabel::Gda { score } if score >= threshold => Some(e.other(d)),
            _ => None,
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConsistencyStatus {
    PerfectMatch,
    IncompleteKnowledge,
    InconsistentEvidence,
    Combination,
}

impl ConsistencyStatus {
    /// `missing`: present in every patient but not known. `unsupported`: known
    /// but not present in every patient.
    pub fn classify(missing_empty: bool, unsupported_empty: bool) -> Self {
        match (missing_empty, unsupported_empty) {
            (true, true) => ConsistencyStatus::PerfectMatch,
            (false, true) => ConsistencyStatus::IncompleteKnowledge,
            (true, false) => ConsistencyStatus::InconsistentEvidence,
            (false, false) => ConsistencyStatus::Combination,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ConsistencyStatus::PerfectMatch => "perfect_match",
            ConsistencyStatus::IncompleteKnowledge => "incomplete_knowledge",
            ConsistencyStatus::InconsistentEvidence => "inconsistent_evidence",
            ConsistencyStatus::Combination => "combination",
        }
    }
}

/// The three feature sets of one disease, at one granularity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiseaseEvidence {
    pub disease_id: String,
    pub granularity: Granularity,
    pub gda_threshold: Rational,
    pub patients: BTreeSet<String>,
    pub union_features: BTreeSet<String>,
    pub common_features: BTreeSet<String>,
    pub known_features: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyVerdict {
    pub status: ConsistencyStatus,
    /// Common to all patients but absent from knowledge.
    pub missing_from_knowledge: BTreeSet<String>,
    /// Known but not common to all patients.
    pub unsupported_knowledge: BTreeSet<String>,
    /// Known but carried by no patient at all.
    pub coverage_violations: BTreeSet<String>,
}

impl ConsistencyVerdict {
    pub fn from_sets(
        common: &BTreeSet<String>,
        known: &BTreeSet<String>,
        union: &BTreeSet<String>,
    ) -> Self {
        let missing_from_knowledge: BTreeSet<_> = common.difference(known).cloned().collect();
        let unsupported_knowledge: BTreeSet<_> = known.difference(common).cloned().collect();
        let coverage_violations = known.difference(union).cloned().collect();
        ConsistencyVerdict {
            status: ConsistencyStatus::classify(missing_from_knowledge.is_empty(), unsupported_knowledge.is_empty()),
            missing_from_knowledge,
            unsupported_knowledge,
            coverage_violations,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiseaseCheck {
    pub evidence: DiseaseEvidence,
    /// `None` when the disease has no patients: there is no evidence to
    /// classify against.
    pub verdict: Option<ConsistencyVerdict>,
}

impl DiseaseCheck {
    pub fn status_name(&self) -> &'static str {
        self.verdict.as_ref().map_or("no_evidence", |v| v.status.name())
    }
}

/// Computes the evidence sets and the verdict for one disease.
///
/// At gene granularity each patient's mutations are downgraded to genes
/// before the union and intersection are taken, so a gene mutated in every
/// patient counts as common even when the loci differ.
pub fn check_consistency(
    graph: &KnowledgeGraph,
    disease: &str,
    threshold: Rational,
    granularity: Granularity,
) -> Result<DiseaseCheck, CheckError> {
    let known = known_mutations(graph, disease, threshold)?;
    let patients = patients_of(graph, disease)?;

    let feature = |m: NodeRef| granularity.feature(graph.mutation(m).expect("mutation exists"));
    let profiles: Vec<BTreeSet<String>> = patients
        .iter()
        .map(|&p| mutations_of(graph, p).into_iter().map(feature).collect())
        .collect();
    let union_features: BTreeSet<String> = profiles.iter().flatten().cloned().collect();
    let common_features = intersect_all(profiles.into_iter());
    let known_features: BTreeSet<String> = known.into_iter().map(feature).collect();

    let verdict = (!patients.is_empty())
        .then(|| ConsistencyVerdict::from_sets(&common_features, &known_features, &union_features));
    Ok(DiseaseCheck {
        evidence: DiseaseEvidence {
            disease_id: disease.to_string(),
            granularity,
            gda_threshold: threshold,
            patients: patients.into_iter().map(|p| graph.node_label(p)).collect(),
            union_features,
            common_features,
            known_features,
        },
        verdict,
    })
}

/// [`check_consistency`] for every disease, ordered by disease id.
pub fn check_all(
    graph: &KnowledgeGraph,
    threshold: Rational,
    granularity: Granularity,
) -> Result<Vec<DiseaseCheck>, CheckError> {
    let mut ids: Vec<&str> = graph.diseases().map(|(_, d)| d.disease_id.as_str()).collect();
    ids.sort_unstable();
    ids.into_iter()
        .map(|id| check_consistency(graph, id, threshold, granularity))
        .collect()
}

pub const CHECK_TSV_HEADER: &str = "disease\tpatients\tunion_size\tcommon\tknown\tstatus\tmissing_from_knowledge\tunsupported_knowledge\tcoverage_violations";

fn join(set: &BTreeSet<String>) -> String {
    set.iter().map(String::as_str).collect::<Vec<_>>().join(",")
}

/// One row per disease. Set columns list feature ids comma-separated; the
/// union is given by size only since it can be large.
pub fn checks_to_tsv(checks: &[DiseaseCheck]) -> String {
    let mut out = String::from(CHECK_TSV_HEADER);
    out.push('\n');
    let none = BTreeSet::new();
    for c in checks {
        let e = &c.evidence;
        let (missing, unsupported, coverage) = c.verdict.as_ref().map_or((&none, &none, &none), |v| {
            (
                &v.missing_from_knowledge,
                &v.unsupported_knowledge,
                &v.coverage_violations,
            )
        });
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            e.disease_id,
            e.patients.len(),
            e.union_features.len(),
            join(&e.common_features),
            join(&e.known_features),
            c.status_name(),
            join(missing),
            join(unsupported),
            join(coverage)
        ));
    }
    out
}
