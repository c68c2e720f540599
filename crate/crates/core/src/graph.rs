//! The typed 4-partite knowledge graph.
//!
//! Nodes live in four partitions (patients, mutations, diseases, drugs) and
//! edges in three colored sets:
//!
//! * green: patient–mutation, labeled with the variant allele frequency;
//! * red: disease–patient diagnoses and patient–drug treatments;
//! * magenta: disease–mutation associations (GDA score) and mutation–drug
//!   targets.
//!
//! Every edge kind has a fixed pair of endpoint partitions, so a graph built
//! through [`KnowledgeGraph::add_node`] and [`KnowledgeGraph::add_edge`] is
//! 4-partite with pairwise disjoint color sets by construction.
//! [`KnowledgeGraph::validate`] re-checks all of this from raw storage.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed};

use crate::rational::{format_rational, is_unit_interval, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Partition {
    Patient,
    Mutation,
    Disease,
    Drug,
}

impl Partition {
    pub const ALL: [Partition; 4] = [
        Partition::Patient,
        Partition::Mutation,
        Partition::Disease,
        Partition::Drug,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Partition::Patient => "patient",
            Partition::Mutation => "mutation",
            Partition::Disease => "disease",
            Partition::Drug => "drug",
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Handle to a node: its partition plus its insertion index within it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeRef {
    pub partition: Partition,
    pub index: u32,
}

impl NodeRef {
    pub fn new(partition: Partition, index: u32) -> Self {
        NodeRef { partition, index }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeColor {
    Green,
    Red,
    Magenta,
}

impl EdgeColor {
    pub const ALL: [EdgeColor; 3] = [EdgeColor::Green, EdgeColor::Red, EdgeColor::Magenta];

    fn slot(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            EdgeColor::Green => "green",
            EdgeColor::Red => "red",
            EdgeColor::Magenta => "magenta",
        }
    }
}

impl fmt::Display for EdgeColor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

bitflags::bitflags! {
    /// Which colored edge sets a neighborhood query walks.
    #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
    pub struct ColorFilter: u8 {
        const GREEN = 1;
        const RED = 1 << 1;
        const MAGENTA = 1 << 2;
    }
}

impl ColorFilter {
    pub fn contains_color(self, color: EdgeColor) -> bool {
        self.contains(ColorFilter::from(color))
    }
}

impl From<EdgeColor> for ColorFilter {
    fn from(color: EdgeColor) -> Self {
        match color {
            EdgeColor::Green => ColorFilter::GREEN,
            EdgeColor::Red => ColorFilter::RED,
            EdgeColor::Magenta => ColorFilter::MAGENTA,
        }
    }
}

// ---------------------------------------------------------------------------
// Nodes

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatientRecord {
    /// Pseudonymized identifier, unique within the graph.
    pub patient_id: String,
    /// Survival period in whole months.
    pub survival_months: u32,
    pub alive: bool,
}

impl PatientRecord {
    pub fn new(patient_id: impl Into<String>, survival_months: u32, alive: bool) -> Self {
        PatientRecord {
            patient_id: patient_id.into(),
            survival_months,
            alive,
        }
    }
}

/// Structured identity of a gene mutation.
///
/// The underscore-joined form `GENE_CHROM_START_END` produced by `Display` is a
/// rendering only; it is never parsed back.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MutationKey {
    pub gene: String,
    pub chromosome: String,
    pub start: u64,
    pub end: u64,
}

impl MutationKey {
    pub fn new(gene: impl Into<String>, chromosome: impl Into<String>, start: u64, end: u64) -> Self {
        MutationKey {
            gene: gene.into(),
            chromosome: chromosome.into(),
            start,
            end,
        }
    }

    /// The gene carrying this mutation.
    pub fn downgrade_to_gene(&self) -> &str {
        &self.gene
    }

    fn check(&self) -> Result<(), String> {
        if self.gene.is_empty() {
            return Err("mutation has an empty gene symbol".into());
        }
        if self.start > self.end {
            return Err(format!("mutation {self} has start > end"));
        }
        Ok(())
    }
}

impl fmt::Display for MutationKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}_{}_{}", self.gene, self.chromosome, self.start, self.end)
    }
}

/// Free-function form of [`MutationKey::downgrade_to_gene`].
pub fn downgrade_to_gene(mutation: &MutationKey) -> &str {
    mutation.downgrade_to_gene()
}

/// Level at which mutations are compared: exact mutation or its gene.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Granularity {
    #[default]
    Mutation,
    Gene,
}

impl Granularity {
    /// Canonical feature id of a mutation at this granularity.
    pub fn feature(self, mutation: &MutationKey) -> String {
        match self {
            Granularity::Mutation => mutation.to_string(),
            Granularity::Gene => mutation.gene.clone(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Granularity::Mutation => "mutation",
            Granularity::Gene => "gene",
        }
    }
}

impl FromStr for Granularity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mutation" => Ok(Granularity::Mutation),
            "gene" => Ok(Granularity::Gene),
            other => Err(format!("unknown granularity {other:?} (expected mutation or gene)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiseaseNode {
    pub disease_id: String,
    pub display_name: String,
}

impl DiseaseNode {
    pub fn new(disease_id: impl Into<String>) -> Self {
        let disease_id = disease_id.into();
        DiseaseNode {
            display_name: disease_id.clone(),
            disease_id,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DrugNode {
    pub drug_id: String,
    pub adverse_effects: Option<String>,
    /// Non-negative toxicity weight; 1 unless stated otherwise.
    pub toxicity_weight: Rational,
}

impl DrugNode {
    pub fn new(drug_id: impl Into<String>) -> Self {
        DrugNode {
            drug_id: drug_id.into(),
            adverse_effects: None,
            toxicity_weight: Rational::one(),
        }
    }

    pub fn with_weight(mut self, weight: Rational) -> Self {
        self.toxicity_weight = weight;
        self
    }

    pub fn with_adverse_effects(mut self, effects: impl Into<String>) -> Self {
        self.adverse_effects = Some(effects.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Patient(PatientRecord),
    Mutation(MutationKey),
    Disease(DiseaseNode),
    Drug(DrugNode),
}

impl Node {
    pub fn partition(&self) -> Partition {
        match self {
            Node::Patient(_) => Partition::Patient,
            Node::Mutation(_) => Partition::Mutation,
            Node::Disease(_) => Partition::Disease,
            Node::Drug(_) => Partition::Drug,
        }
    }
}

impl From<PatientRecord> for Node {
    fn from(p: PatientRecord) -> Self {
        Node::Patient(p)
    }
}
impl From<MutationKey> for Node {
    fn from(m: MutationKey) -> Self {
        Node::Mutation(m)
    }
}
impl From<DiseaseNode> for Node {
    fn from(d: DiseaseNode) -> Self {
        Node::Disease(d)
    }
}
impl From<DrugNode> for Node {
    fn from(d: DrugNode) -> Self {
        Node::Drug(d)
    }
}

// ---------------------------------------------------------------------------
// Edges

/// Effectiveness of one administered drug.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Effectiveness {
    Positive,
    Unaltered,
    Reduced,
    Negative,
}

impl Effectiveness {
    pub fn code(self) -> char {
        match self {
            Effectiveness::Positive => 'p',
            Effectiveness::Unaltered => 'u',
            Effectiveness::Reduced => 'r',
            Effectiveness::Negative => 'n',
        }
    }
}

impl FromStr for Effectiveness {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "p" | "positive" => Ok(Effectiveness::Positive),
            "u" | "unaltered" => Ok(Effectiveness::Unaltered),
            "r" | "reduced" => Ok(Effectiveness::Reduced),
            "n" | "negative" => Ok(Effectiveness::Negative),
            other => Err(format!("unknown effectiveness {other:?} (expected p, u, r or n)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EdgeLabel {
    /// Patient–mutation. `None` when the source did not report a VAF.
    Genetic { vaf: Option<Rational> },
    /// Disease–patient.
    Diagnosis,
    /// Patient–drug. `order` counts the treatments that preceded this one.
    Treatment { order: u32, effectiveness: Effectiveness },
    /// Disease–mutation.
    Gda { score: Rational },
    /// Mutation–drug.
    Target,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeKind {
    Genetic,
    Diagnosis,
    Treatment,
    Gda,
    Target,
}

impl EdgeKind {
    pub fn color(self) -> EdgeColor {
        match self {
            EdgeKind::Genetic => EdgeColor::Green,
            EdgeKind::Diagnosis | EdgeKind::Treatment => EdgeColor::Red,
            EdgeKind::Gda | EdgeKind::Target => EdgeColor::Magenta,
        }
    }

    /// Endpoint partitions in stored orientation.
    pub fn endpoints(self) -> (Partition, Partition) {
        use Partition::*;
        match self {
            EdgeKind::Genetic => (Patient, Mutation),
            EdgeKind::Diagnosis => (Disease, Patient),
            EdgeKind::Treatment => (Patient, Drug),
            EdgeKind::Gda => (Disease, Mutation),
            EdgeKind::Target => (Mutation, Drug),
        }
    }

    /// Kinds allowing at most one edge per endpoint pair. Treatments may
    /// repeat (the same drug in several lines of therapy).
    pub fn pairwise_unique(self) -> bool {
        !matches!(self, EdgeKind::Treatment)
    }

    pub fn name(self) -> &'static str {
        match self {
            EdgeKind::Genetic => "genetic",
            EdgeKind::Diagnosis => "diagnosis",
            EdgeKind::Treatment => "treatment",
            EdgeKind::Gda => "gda",
            EdgeKind::Target => "target",
        }
    }
}

impl EdgeLabel {
    pub fn kind(&self) -> EdgeKind {
        match self {
            EdgeLabel::Genetic { .. } => EdgeKind::Genetic,
            EdgeLabel::Diagnosis => EdgeKind::Diagnosis,
            EdgeLabel::Treatment { .. } => EdgeKind::Treatment,
            EdgeLabel::Gda { .. } => EdgeKind::Gda,
            EdgeLabel::Target => EdgeKind::Target,
        }
    }

    fn check(&self) -> Result<(), String> {
        match self {
            EdgeLabel::Genetic { vaf: Some(vaf) } if !is_unit_interval(vaf) => {
                Err(format!("VAF {} outside [0,1]", format_rational(vaf)))
            }
            EdgeLabel::Gda { score } if !is_unit_interval(score) => {
                Err(format!("GDA score {} outside [0,1]", format_rational(score)))
            }
            _ => Ok(()),
        }
    }
}

/// A stored edge, oriented as in [`EdgeKind::endpoints`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub source: NodeRef,
    pub target: NodeRef,
    pub label: EdgeLabel,
}

impl Edge {
    pub fn other(&self, node: NodeRef) -> NodeRef {
        if self.source == node {
            self.target
        } else {
            self.source
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeRef {
    pub color: EdgeColor,
    pub index: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneticEdge {
    pub patient_id: String,
    pub mutation: MutationKey,
    pub vaf: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagnosisEdge {
    pub disease_id: String,
    pub patient_id: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreatmentEdge {
    pub patient_id: String,
    pub drug_id: String,
    pub order: u32,
    pub effectiveness: Effectiveness,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GdaAssociation {
    pub disease_id: String,
    pub mutation: MutationKey,
    pub gda_score: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetEdge {
    pub mutation: MutationKey,
    pub drug_id: String,
}

/// Any edge, addressed by node identifiers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NewEdge {
    Genetic(GeneticEdge),
    Diagnosis(DiagnosisEdge),
    Treatment(TreatmentEdge),
    Gda(GdaAssociation),
    Target(TargetEdge),
}

macro_rules! new_edge_from {
    ($($ty:ident => $variant:ident),*) => {
        $(impl From<$ty> for NewEdge {
            fn from(edge: $ty) -> Self {
                NewEdge::$variant(edge)
            }
        })*
    };
}
new_edge_from!(GeneticEdge => Genetic, DiagnosisEdge => Diagnosis, TreatmentEdge => Treatment,
    GdaAssociation => Gda, TargetEdge => Target);

// ---------------------------------------------------------------------------
// Errors and validation

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("duplicate {partition} node {id:?}")]
    DuplicateNode { partition: Partition, id: String },
    #[error("invalid {partition} node {id:?}: {reason}")]
    InvalidNode {
        partition: Partition,
        id: String,
        reason: String,
    },
    #[error("{kind} edge references missing {partition} node {id:?}")]
    MissingEndpoint {
        kind: &'static str,
        partition: Partition,
        id: String,
    },
    #[error("{kind} edge cannot join a {found} node where a {expected} node is required")]
    WrongPartition {
        kind: &'static str,
        expected: Partition,
        found: Partition,
    },
    #[error("invalid {kind} edge label: {reason}")]
    InvalidLabel { kind: &'static str, reason: String },
    #[error("duplicate {kind} edge between {source_id:?} and {target_id:?}")]
    DuplicateEdge {
        kind: &'static str,
        source_id: String,
        target_id: String,
    },
    #[error("unknown {} node #{}", .0.partition, .0.index)]
    UnknownNode(NodeRef),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ViolationKind {
    /// Endpoints not in the partitions declared for the edge kind (includes
    /// edges joining two nodes of one partition).
    Partition,
    /// Edge recorded in a color set other than its kind's color, so the color
    /// sets are no longer disjoint.
    Disjointness,
    /// Label outside its admissible range.
    LabelRange,
    /// Edge endpoint that does not exist.
    DanglingEndpoint,
    /// Second edge for a pairwise-unique kind and endpoint pair.
    DuplicateEdge,
    /// Node field violating its type invariant.
    NodeInvariant,
}

impl ViolationKind {
    pub fn name(self) -> &'static str {
        match self {
            ViolationKind::Partition => "partition",
            ViolationKind::Disjointness => "disjointness",
            ViolationKind::LabelRange => "label_range",
            ViolationKind::DanglingEndpoint => "dangling_endpoint",
            ViolationKind::DuplicateEdge => "duplicate_edge",
            ViolationKind::NodeInvariant => "node_invariant",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub edge: Option<EdgeRef>,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PartitionSizes {
    pub patients: usize,
    pub mutations: usize,
    pub diseases: usize,
    pub drugs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EdgeCounts {
    pub green: usize,
    pub red: usize,
    pub magenta: usize,
}

// ---------------------------------------------------------------------------
// The graph

/// The knowledge graph H = G ∪ R ∪ M.
///
/// Construction is single-writer (`&mut self`); every query takes `&self`, so
/// a built graph can be shared freely across threads.
#[derive(Debug, Clone, Default)]
pub struct KnowledgeGraph {
    patients: Vec<PatientRecord>,
    mutations: Vec<MutationKey>,
    diseases: Vec<DiseaseNode>,
    drugs: Vec<DrugNode>,

    patient_ids: HashMap<String, u32>,
    mutation_ids: HashMap<MutationKey, u32>,
    disease_ids: HashMap<String, u32>,
    drug_ids: HashMap<String, u32>,

    edges: [Vec<Edge>; 3],
    // Per color: node -> indices into `edges[color]`.
    adjacency: [HashMap<NodeRef, Vec<u32>>; 3],
    pairs: HashSet<(EdgeKind, NodeRef, NodeRef)>,
}

impl KnowledgeGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, node: impl Into<Node>) -> Result<NodeRef, GraphError> {
        let node = node.into();
        let partition = node.partition();
        let duplicate = |id: String| GraphError::DuplicateNode { partition, id };
        let invalid = |id: String, reason: String| GraphError::InvalidNode {
            partition,
            id,
            reason,
        };
        let index = match node {
            Node::Patient(p) => {
                if self.patient_ids.contains_key(&p.patient_id) {
                    return Err(duplicate(p.patient_id));
                }
                let index = self.patients.len() as u32;
                self.patient_ids.insert(p.patient_id.clone(), index);
                self.patients.push(p);
                index
            }
            Node::Mutation(m) => {
                m.check().map_err(|reason| invalid(m.to_string(), reason))?;
                if self.mutation_ids.contains_key(&m) {
                    return Err(duplicate(m.to_string()));
                }
                let index = self.mutations.len() as u32;
                self.mutation_ids.insert(m.clone(), index);
                self.mutations.push(m);
                index
            }
            Node::Disease(d) => {
                if self.disease_ids.contains_key(&d.disease_id) {
                    return Err(duplicate(d.disease_id));
                }
                let index = self.diseases.len() as u32;
                self.disease_ids.insert(d.disease_id.clone(), index);
                self.diseases.push(d);
                index
            }
            Node::Drug(d) => {
                if d.toxicity_weight.is_negative() {
                    let reason = format!(
                        "toxicity weight {} is negative",
                        format_rational(&d.toxicity_weight)
                    );
                    return Err(invalid(d.drug_id, reason));
                }
                if self.drug_ids.contains_key(&d.drug_id) {
                    return Err(duplicate(d.drug_id));
                }
                let index = self.drugs.len() as u32;
                self.drug_ids.insert(d.drug_id.clone(), index);
                self.drugs.push(d);
                index
            }
        };
        Ok(NodeRef::new(partition, index))
    }

    /// Adds an edge addressed by node identifiers.
    pub fn add_edge(&mut self, edge: impl Into<NewEdge>) -> Result<EdgeRef, GraphError> {
        let (source, target, label) = match edge.into() {
            NewEdge::Genetic(e) => (
                self.require_patient(&e.patient_id, "genetic")?,
                self.require_mutation(&e.mutation, "genetic")?,
                EdgeLabel::Genetic { vaf: e.vaf },
            ),
            NewEdge::Diagnosis(e) => (
                self.require_disease(&e.disease_id, "diagnosis")?,
                self.require_patient(&e.patient_id, "diagnosis")?,
                EdgeLabel::Diagnosis,
            ),
            NewEdge::Treatment(e) => (
                self.require_patient(&e.patient_id, "treatment")?,
                self.require_drug(&e.drug_id, "treatment")?,
                EdgeLabel::Treatment {
                    order: e.order,
                    effectiveness: e.effectiveness,
                },
            ),
            NewEdge::Gda(e) => (
                self.require_disease(&e.disease_id, "gda")?,
                self.require_mutation(&e.mutation, "gda")?,
                EdgeLabel::Gda { score: e.gda_score },
            ),
            NewEdge::Target(e) => (
                self.require_mutation(&e.mutation, "target")?,
                self.require_drug(&e.drug_id, "target")?,
                EdgeLabel::Target,
            ),
        };
        self.connect(source, target, label)
    }

    /// Adds an edge between existing handles, checking partitions, label
    /// ranges and pairwise uniqueness.
    pub fn connect(
        &mut self,
        source: NodeRef,
        target: NodeRef,
        label: EdgeLabel,
    ) -> Result<EdgeRef, GraphError> {
        let kind = label.kind();
        let (want_source, want_target) = kind.endpoints();
        for (node, want) in [(source, want_source), (target, want_target)] {
            if node.partition != want {
                return Err(GraphError::WrongPartition {
                    kind: kind.name(),
                    expected: want,
                    found: node.partition,
                });
            }
            if !self.contains(node) {
                return Err(GraphError::UnknownNode(node));
            }
        }
        label.check().map_err(|reason| GraphError::InvalidLabel {
            kind: kind.name(),
            reason,
        })?;
        if kind.pairwise_unique() && self.pairs.contains(&(kind, source, target)) {
            return Err(GraphError::DuplicateEdge {
                kind: kind.name(),
                source_id: self.node_label(source),
                target_id: self.node_label(target),
            });
        }
        Ok(self.insert_raw(
            kind.color(),
            Edge {
                source,
                target,
                label,
            },
        ))
    }

    /// Stores an edge in the given color set without any check. Only meant for
    /// building corrupted graphs that exercise [`KnowledgeGraph::validate`].
    #[doc(hidden)]
    pub fn force_edge(&mut self, color: EdgeColor, edge: Edge) -> EdgeRef {
        self.insert_raw(color, edge)
    }

    /// Replaces a stored label without any check. Test support, like
    /// [`KnowledgeGraph::force_edge`].
    #[doc(hidden)]
    pub fn force_label(&mut self, edge: EdgeRef, label: EdgeLabel) {
        self.edges[edge.color.slot()][edge.index as usize].label = label;
    }

    fn insert_raw(&mut self, color: EdgeColor, edge: Edge) -> EdgeRef {
        let slot = color.slot();
        let index = self.edges[slot].len() as u32;
        self.pairs.insert((edge.label.kind(), edge.source, edge.target));
        self.adjacency[slot].entry(edge.source).or_default().push(index);
        if edge.target != edge.source {
            self.adjacency[slot].entry(edge.target).or_default().push(index);
        }
        self.edges[slot].push(edge);
        EdgeRef { color, index }
    }

    /// Raises the VAF on an existing green edge to `vaf` when larger. A known
    /// VAF always replaces an unknown one.
    pub fn merge_vaf(&mut self, edge: EdgeRef, vaf: Option<Rational>) {
        if let EdgeLabel::Genetic { vaf: current } =
            &mut self.edges[edge.color.slot()][edge.index as usize].label
        {
            if let Some(new) = vaf {
                if current.map_or(true, |old| new > old) {
                    *current = Some(new);
                }
            }
        }
    }

    fn require_patient(&self, id: &str, kind: &'static str) -> Result<NodeRef, GraphError> {
        self.patient_ref(id).ok_or_else(|| GraphError::MissingEndpoint {
            kind,
            partition: Partition::Patient,
            id: id.to_string(),
        })
    }

    fn require_mutation(&self, key: &MutationKey, kind: &'static str) -> Result<NodeRef, GraphError> {
        self.mutation_ref(key).ok_or_else(|| GraphError::MissingEndpoint {
            kind,
            partition: Partition::Mutation,
            id: key.to_string(),
        })
    }

    fn require_disease(&self, id: &str, kind: &'static str) -> Result<NodeRef, GraphError> {
        self.disease_ref(id).ok_or_else(|| GraphError::MissingEndpoint {
            kind,
            partition: Partition::Disease,
            id: id.to_string(),
        })
    }

    fn require_drug(&self, id: &str, kind: &'static str) -> Result<NodeRef, GraphError> {
        self.drug_ref(id).ok_or_else(|| GraphError::MissingEndpoint {
            kind,
            partition: Partition::Drug,
            id: id.to_string(),
        })
    }

    // -- lookups -----------------------------------------------------------

    pub fn patient_ref(&self, id: &str) -> Option<NodeRef> {
        self.patient_ids.get(id).map(|&i| NodeRef::new(Partition::Patient, i))
    }

    pub fn mutation_ref(&self, key: &MutationKey) -> Option<NodeRef> {
        self.mutation_ids.get(key).map(|&i| NodeRef::new(Partition::Mutation, i))
    }

    pub fn disease_ref(&self, id: &str) -> Option<NodeRef> {
        self.disease_ids.get(id).map(|&i| NodeRef::new(Partition::Disease, i))
    }

    pub fn drug_ref(&self, id: &str) -> Option<NodeRef> {
        self.drug_ids.get(id).map(|&i| NodeRef::new(Partition::Drug, i))
    }

    /// Finds a mutation by its rendered `GENE_CHROM_START_END` form.
    pub fn mutation_by_display(&self, display: &str) -> Option<NodeRef> {
        self.mutations
            .iter()
            .position(|m| m.to_string() == display)
            .map(|i| NodeRef::new(Partition::Mutation, i as u32))
    }

    pub fn contains(&self, node: NodeRef) -> bool {
        (node.index as usize) < self.partition_len(node.partition)
    }

    fn partition_len(&self, partition: Partition) -> usize {
        match partition {
            Partition::Patient => self.patients.len(),
            Partition::Mutation => self.mutations.len(),
            Partition::Disease => self.diseases.len(),
            Partition::Drug => self.drugs.len(),
        }
    }

    pub fn patient(&self, node: NodeRef) -> Option<&PatientRecord> {
        (node.partition == Partition::Patient)
            .then(|| self.patients.get(node.index as usize))
            .flatten()
    }

    pub fn mutation(&self, node: NodeRef) -> Option<&MutationKey> {
        (node.partition == Partition::Mutation)
            .then(|| self.mutations.get(node.index as usize))
            .flatten()
    }

    pub fn disease(&self, node: NodeRef) -> Option<&DiseaseNode> {
        (node.partition == Partition::Disease)
            .then(|| self.diseases.get(node.index as usize))
            .flatten()
    }

    pub fn drug(&self, node: NodeRef) -> Option<&DrugNode> {
        (node.partition == Partition::Drug)
            .then(|| self.drugs.get(node.index as usize))
            .flatten()
    }

    /// Identifier of a node: patient/disease/drug id or rendered mutation.
    pub fn node_label(&self, node: NodeRef) -> String {
        let label = match node.partition {
            Partition::Patient => self.patient(node).map(|p| p.patient_id.clone()),
            Partition::Mutation => self.mutation(node).map(|m| m.to_string()),
            Partition::Disease => self.disease(node).map(|d| d.disease_id.clone()),
            Partition::Drug => self.drug(node).map(|d| d.drug_id.clone()),
        };
        label.unwrap_or_else(|| format!("<missing {} #{}>", node.partition, node.index))
    }

    pub fn patients(&self) -> impl ExactSizeIterator<Item = (NodeRef, &PatientRecord)> {
        self.patients
            .iter()
            .enumerate()
            .map(|(i, p)| (NodeRef::new(Partition::Patient, i as u32), p))
    }

    pub fn mutations(&self) -> impl ExactSizeIterator<Item = (NodeRef, &MutationKey)> {
        self.mutations
            .iter()
            .enumerate()
            .map(|(i, m)| (NodeRef::new(Partition::Mutation, i as u32), m))
    }

    pub fn diseases(&self) -> impl ExactSizeIterator<Item = (NodeRef, &DiseaseNode)> {
        self.diseases
            .iter()
            .enumerate()
            .map(|(i, d)| (NodeRef::new(Partition::Disease, i as u32), d))
    }

    pub fn drugs(&self) -> impl ExactSizeIterator<Item = (NodeRef, &DrugNode)> {
        self.drugs
            .iter()
            .enumerate()
            .map(|(i, d)| (NodeRef::new(Partition::Drug, i as u32), d))
    }

    pub fn partition_sizes(&self) -> PartitionSizes {
        PartitionSizes {
            patients: self.patients.len(),
            mutations: self.mutations.len(),
            diseases: self.diseases.len(),
            drugs: self.drugs.len(),
        }
    }

    pub fn edge_counts(&self) -> EdgeCounts {
        EdgeCounts {
            green: self.edges[EdgeColor::Green.slot()].len(),
            red: self.edges[EdgeColor::Red.slot()].len(),
            magenta: self.edges[EdgeColor::Magenta.slot()].len(),
        }
    }

    pub fn edges(&self, color: EdgeColor) -> &[Edge] {
        &self.edges[color.slot()]
    }

    pub fn edge(&self, edge: EdgeRef) -> Option<&Edge> {
        self.edges[edge.color.slot()].get(edge.index as usize)
    }

    /// Edges of `color` incident to `node`, in insertion order.
    pub fn incident_edges(&self, node: NodeRef, color: EdgeColor) -> impl Iterator<Item = &Edge> {
        let slot = color.slot();
        self.adjacency[slot]
            .get(&node)
            .into_iter()
            .flatten()
            .map(move |&i| &self.edges[slot][i as usize])
    }

    /// The green edge between a patient and a mutation, if any.
    pub fn genetic_edge(&self, patient: NodeRef, mutation: NodeRef) -> Option<EdgeRef> {
        let slot = EdgeColor::Green.slot();
        self.adjacency[slot].get(&patient)?.iter().copied().find_map(|i| {
            let edge = &self.edges[slot][i as usize];
            (edge.target == mutation && edge.label.kind() == EdgeKind::Genetic).then_some(EdgeRef {
                color: EdgeColor::Green,
                index: i,
            })
        })
    }

    /// Nodes adjacent to `node` through edges of the selected colors.
    pub fn neighbors(&self, node: NodeRef, colors: ColorFilter) -> Result<BTreeSet<NodeRef>, GraphError> {
        if !self.contains(node) {
            return Err(GraphError::UnknownNode(node));
        }
        let mut out = BTreeSet::new();
        for color in EdgeColor::ALL {
            if colors.contains_color(color) {
                out.extend(self.incident_edges(node, color).map(|e| e.other(node)));
            }
        }
        Ok(out)
    }

    /// [`KnowledgeGraph::neighbors`] restricted to one partition.
    pub fn neighbors_in(
        &self,
        node: NodeRef,
        colors: ColorFilter,
        partition: Partition,
    ) -> Result<BTreeSet<NodeRef>, GraphError> {
        let mut all = self.neighbors(node, colors)?;
        all.retain(|n| n.partition == partition);
        Ok(all)
    }

    /// Re-checks every structural invariant from raw storage.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let mut push = |kind, edge, message| report.violations.push(Violation { kind, edge, message });

        for (i, m) in self.mutations.iter().enumerate() {
            if let Err(reason) = m.check() {
                push(ViolationKind::NodeInvariant, None, format!("mutation #{i}: {reason}"));
            }
        }
        for d in &self.drugs {
            if d.toxicity_weight.is_negative() {
                push(
                    ViolationKind::NodeInvariant,
                    None,
                    format!("drug {:?} has negative toxicity weight", d.drug_id),
                );
            }
        }

        for color in EdgeColor::ALL {
            let mut seen = HashSet::new();
            for (i, edge) in self.edges[color.slot()].iter().enumerate() {
                let at = Some(EdgeRef {
                    color,
                    index: i as u32,
                });
                let kind = edge.label.kind();
                let describe = || {
                    format!(
                        "{color} {} edge #{i} ({} -- {})",
                        kind.name(),
                        self.node_label(edge.source),
                        self.node_label(edge.target)
                    )
                };

                let dangling: Vec<_> = [edge.source, edge.target]
                    .into_iter()
                    .filter(|n| !self.contains(*n))
                    .collect();
                if !dangling.is_empty() {
                    push(ViolationKind::DanglingEndpoint, at, format!("{} has a dangling endpoint", describe()));
                    continue;
                }

                let (want_source, want_target) = kind.endpoints();
                if edge.source.partition != want_source || edge.target.partition != want_target {
                    let message = if edge.source.partition == edge.target.partition {
                        format!("{} joins two {} nodes", describe(), edge.source.partition)
                    } else {
                        format!("{} must join {want_source} and {want_target} nodes", describe())
                    };
                    push(ViolationKind::Partition, at, message);
                    continue;
                }

                if kind.color() != color {
                    push(
                        ViolationKind::Disjointness,
                        at,
                        format!("{} belongs to the {} set", describe(), kind.color()),
                    );
                    continue;
                }

                if let Err(reason) = edge.label.check() {
                    push(ViolationKind::LabelRange, at, format!("{}: {reason}", describe()));
                }

                if kind.pairwise_unique() && !seen.insert((kind, edge.source, edge.target)) {
                    push(ViolationKind::DuplicateEdge, at, format!("{} is a duplicate", describe()));
                }
            }
        }
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kras() -> MutationKey {
        MutationKey::new("KRAS", "12", 25398284, 25398284)
    }

    /// P1, P2 diagnosed with D1; P3 with D2.
    fn diagnosis_fixture() -> KnowledgeGraph {
        let mut g = KnowledgeGraph::new();
        for p in ["P1", "P2", "P3"] {
            g.add_node(PatientRecord::new(p, 12, true)).unwrap();
        }
        g.add_node(DiseaseNode::new("D1")).unwrap();
        g.add_node(DiseaseNode::new("D2")).unwrap();
        for (d, p) in [("D1", "P1"), ("D1", "P2"), ("D2", "P3")] {
            g.add_edge(DiagnosisEdge {
                disease_id: d.into(),
                patient_id: p.into(),
            })
            .unwrap();
        }
        g
    }

    #[test]
    fn adds_single_patient() {
        let mut g = KnowledgeGraph::new();
        g.add_node(PatientRecord::new("P1", 40, true)).unwrap();
        assert_eq!(g.partition_sizes().patients, 1);
    }

    #[test]
    fn rejects_duplicate_patient() {
        let mut g = KnowledgeGraph::new();
        g.add_node(PatientRecord::new("P1", 40, true)).unwrap();
        let err = g.add_node(PatientRecord::new("P1", 3, false)).unwrap_err();
        assert!(matches!(err, GraphError::DuplicateNode { partition: Partition::Patient, .. }));
    }

    #[test]
    fn counts_partitions() {
        let mut g = KnowledgeGraph::new();
        for p in ["P1", "P2", "P3"] {
            g.add_node(PatientRecord::new(p, 1, true)).unwrap();
        }
        g.add_node(kras()).unwrap();
        g.add_node(MutationKey::new("TP53", "17", 7578406, 7578406)).unwrap();
        g.add_node(DiseaseNode::new("LUAD")).unwrap();
        g.add_node(DrugNode::new("sotorasib")).unwrap();
        assert_eq!(
            g.partition_sizes(),
            PartitionSizes {
                patients: 3,
                mutations: 2,
                diseases: 1,
                drugs: 1
            }
        );
    }

    #[test]
    fn rejects_malformed_mutation_nodes() {
        let mut g = KnowledgeGraph::new();
        assert!(matches!(
            g.add_node(MutationKey::new("KRAS", "12", 10, 9)),
            Err(GraphError::InvalidNode { .. })
        ));
        assert!(matches!(
            g.add_node(MutationKey::new("", "12", 1, 1)),
            Err(GraphError::InvalidNode { .. })
        ));
    }

    #[test]
    fn genetic_edge_checks_vaf() {
        let mut g = KnowledgeGraph::new();
        g.add_node(PatientRecord::new("P1", 1, true)).unwrap();
        g.add_node(kras()).unwrap();
        let edge = |vaf| GeneticEdge {
            patient_id: "P1".into(),
            mutation: kras(),
            vaf: Some(vaf),
        };
        assert!(matches!(
            g.add_edge(edge(Rational::new(3, 2))),
            Err(GraphError::InvalidLabel { .. })
        ));
        g.add_edge(edge(Rational::new(3, 10))).unwrap();
        assert!(matches!(
            g.add_edge(edge(Rational::new(1, 10))),
            Err(GraphError::DuplicateEdge { .. })
        ));
        assert_eq!(g.edge_counts().green, 1);
    }

    #[test]
    fn gda_rejects_negative_score() {
        let mut g = KnowledgeGraph::new();
        g.add_node(DiseaseNode::new("LUAD")).unwrap();
        g.add_node(kras()).unwrap();
        let err = g
            .add_edge(GdaAssociation {
                disease_id: "LUAD".into(),
                mutation: kras(),
                gda_score: Rational::new(-1, 10),
            })
            .unwrap_err();
        assert!(matches!(err, GraphError::InvalidLabel { kind: "gda", .. }));
    }

    #[test]
    fn diagnosis_to_unknown_disease_is_missing_endpoint() {
        let mut g = KnowledgeGraph::new();
        g.add_node(PatientRecord::new("P1", 1, true)).unwrap();
        let err = g
            .add_edge(DiagnosisEdge {
                disease_id: "LUAD".into(),
                patient_id: "P1".into(),
            })
            .unwrap_err();
        assert!(matches!(
            err,
            GraphError::MissingEndpoint {
                partition: Partition::Disease,
                ..
            }
        ));
    }

    #[test]
    fn connect_refuses_same_partition() {
        let mut g = KnowledgeGraph::new();
        let a = g.add_node(PatientRecord::new("P1", 1, true)).unwrap();
        let b = g.add_node(PatientRecord::new("P2", 1, true)).unwrap();
        assert!(matches!(
            g.connect(a, b, EdgeLabel::Genetic { vaf: None }),
            Err(GraphError::WrongPartition { .. })
        ));
    }

    #[test]
    fn treatments_may_repeat() {
        let mut g = KnowledgeGraph::new();
        g.add_node(PatientRecord::new("P1", 1, true)).unwrap();
        g.add_node(DrugNode::new("osimertinib")).unwrap();
        for order in [0, 0, 1] {
            g.add_edge(TreatmentEdge {
                patient_id: "P1".into(),
                drug_id: "osimertinib".into(),
                order,
                effectiveness: Effectiveness::Reduced,
            })
            .unwrap();
        }
        assert_eq!(g.edge_counts().red, 3);
        assert!(g.validate().is_empty());
    }

    #[test]
    fn empty_neighborhood() {
        let mut g = KnowledgeGraph::new();
        let d = g.add_node(DiseaseNode::new("D1")).unwrap();
        assert!(g.neighbors(d, ColorFilter::RED).unwrap().is_empty());
    }

    #[test]
    fn diagnosis_neighborhood() {
        let g = diagnosis_fixture();
        let d1 = g.disease_ref("D1").unwrap();
        let got: Vec<_> = g
            .neighbors(d1, ColorFilter::RED)
            .unwrap()
            .into_iter()
            .map(|n| g.node_label(n))
            .collect();
        assert_eq!(got, ["P1", "P2"]);
        assert!(g.neighbors(d1, ColorFilter::GREEN | ColorFilter::MAGENTA).unwrap().is_empty());
    }

    #[test]
    fn unknown_node_errors() {
        let g = diagnosis_fixture();
        let ghost = NodeRef::new(Partition::Drug, 0);
        assert_eq!(g.neighbors(ghost, ColorFilter::all()), Err(GraphError::UnknownNode(ghost)));
    }

    #[test]
    fn magenta_drug_neighbors_of_mutation() {
        let mut g = KnowledgeGraph::new();
        let m = g.add_node(kras()).unwrap();
        g.add_node(DiseaseNode::new("LUAD")).unwrap();
        for d in ["d1", "d2"] {
            g.add_node(DrugNode::new(d)).unwrap();
            g.add_edge(TargetEdge {
                mutation: kras(),
                drug_id: d.into(),
            })
            .unwrap();
        }
        g.add_edge(GdaAssociation {
            disease_id: "LUAD".into(),
            mutation: kras(),
            gda_score: Rational::one(),
        })
        .unwrap();
        let drugs: Vec<_> = g
            .neighbors_in(m, ColorFilter::MAGENTA, Partition::Drug)
            .unwrap()
            .into_iter()
            .map(|n| g.node_label(n))
            .collect();
        assert_eq!(drugs, ["d1", "d2"]);
        assert_eq!(g.neighbors(m, ColorFilter::MAGENTA).unwrap().len(), 3);
    }

    #[test]
    fn downgrade_matches_table_rendering() {
        let kras = kras();
        assert_eq!(kras.to_string(), "KRAS_12_25398284_25398284");
        assert_eq!(downgrade_to_gene(&kras), "KRAS");
        let tert = MutationKey::new("TERT", "5", 1295228, 1295228);
        assert_eq!(tert.downgrade_to_gene(), "TERT");
        let a = MutationKey::new("TP53", "17", 7578406, 7578406);
        let b = MutationKey::new("TP53", "17", 7577120, 7577120);
        assert_eq!(a.downgrade_to_gene(), b.downgrade_to_gene());
    }

    #[test]
    fn well_formed_graph_validates_clean() {
        assert!(diagnosis_fixture().validate().is_empty());
    }

    #[test]
    fn forged_patient_patient_edge_is_one_partition_violation() {
        let mut g = diagnosis_fixture();
        let p1 = g.patient_ref("P1").unwrap();
        let p2 = g.patient_ref("P2").unwrap();
        g.force_edge(
            EdgeColor::Green,
            Edge {
                source: p1,
                target: p2,
                label: EdgeLabel::Genetic { vaf: None },
            },
        );
        let report = g.validate();
        assert_eq!(report.len(), 1);
        assert_eq!(report.violations[0].kind, ViolationKind::Partition);
    }

    #[test]
    fn forged_gda_score_is_one_label_violation() {
        let mut g = KnowledgeGraph::new();
        let d = g.add_node(DiseaseNode::new("LUAD")).unwrap();
        let m = g.add_node(kras()).unwrap();
        g.force_edge(
            EdgeColor::Magenta,
            Edge {
                source: d,
                target: m,
                label: EdgeLabel::Gda {
                    score: Rational::new(6, 5),
                },
            },
        );
        let report = g.validate();
        assert_eq!(report.len(), 1);
        assert_eq!(report.violations[0].kind, ViolationKind::LabelRange);
    }
}
