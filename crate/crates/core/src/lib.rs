//! Four-partite oncology knowledge graph (patients, mutations, diseases,
//! drugs) with ingestion from TSV exports and the analyses built on it:
//! knowledge-vs-evidence checks, cohort partitioning and treatment
//! selection as a minimum hitting set.

pub mod cohort;
pub mod graph;
pub mod hitting_set;
pub mod ingest;
pub mod knowledge;
pub mod rational;

pub use graph::{
    ColorFilter, DiseaseNode, DrugNode, Edge, EdgeColor, EdgeLabel, Effectiveness, Granularity, GraphError,
    KnowledgeGraph, MutationKey, Node, NodeRef, Partition, PatientRecord, ValidationReport, Violation,
    ViolationKind,
};
pub use hitting_set::{HittingSetError, HittingSetInstance, Objective, TreatmentSolution};
pub use ingest::{build_graph, Build, BuildOptions, BuildReport, Dataset};
pub use knowledge::{check_all, check_consistency, ConsistencyStatus, DiseaseCheck};
pub use rational::Rational;
