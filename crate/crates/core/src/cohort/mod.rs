//! Patient cohorts: survival bands, profile distances and grouping,
//! coexisting mutation sets and frequency tables.

use std::collections::BTreeSet;

use crate::graph::{ColorFilter, Granularity, KnowledgeGraph, MutationKey, NodeRef, Partition};

pub mod distance;
pub mod grouping;
pub mod itemsets;
pub mod survival;
pub mod tables;

pub use distance::{hamming_distance, jaccard_distance, Metric};
pub use grouping::{group_by_threshold, groups_to_tsv, GroupingMode};
pub use itemsets::{coexistence_to_tsv, coexisting_mutation_sets, CoexistenceSet};
pub use survival::{survival_partition, SurvivalBand, SurvivalPartition, SurvivalThresholds};
pub use tables::{
    co_mutation_survival_table, combined_frequency_tsv, frequency_table, CoMutationRow, CoMutationTable,
    FrequencyMode, FrequencyRow, FrequencyTable,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CohortError {
    #[error("survival thresholds need short < long (got short={short}, long={long})")]
    InvalidThresholds { long: u32, short: u32 },
    #[error("k must lie in (0, 100], got {0}")]
    InvalidPercent(String),
    #[error("empty population: {0}")]
    EmptyPopulation(String),
    #[error("gene {0:?} does not occur in the graph")]
    UnknownGene(String),
    #[error("unknown disease {0:?}")]
    UnknownDisease(String),
}

/// The green neighbourhood of one patient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutationProfile {
    pub patient_id: String,
    pub mutations: BTreeSet<MutationKey>,
}

impl MutationProfile {
    /// Projects the profile to rendered feature ids at `granularity`. At gene
    /// level several mutations collapse into one feature.
    pub fn features(&self, granularity: Granularity) -> FeatureProfile {
        FeatureProfile {
            patient_id: self.patient_id.clone(),
            features: self.mutations.iter().map(|m| granularity.feature(m)).collect(),
        }
    }
}

/// A profile reduced to opaque feature ids; what distances and itemset
/// mining operate on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureProfile {
    pub patient_id: String,
    pub features: BTreeSet<String>,
}

/// Profiles of the given patients, sorted by patient id.
pub fn mutation_profiles(graph: &KnowledgeGraph, patients: &[NodeRef]) -> Vec<MutationProfile> {
    let mut out: Vec<MutationProfile> = patients
        .iter()
        .filter_map(|&p| {
            let record = graph.patient(p)?;
            let mutations = graph
                .neighbors_in(p, ColorFilter::GREEN, Partition::Mutation)
                .ok()?
                .into_iter()
                .filter_map(|m| graph.mutation(m).cloned())
                .collect();
            Some(MutationProfile {
                patient_id: record.patient_id.clone(),
                mutations,
            })
        })
        .collect();
    out.sort_by(|a, b| a.patient_id.cmp(&b.patient_id));
    out.dedup_by(|a, b| a.patient_id == b.patient_id);
    out
}

pub fn feature_profiles(profiles: &[MutationProfile], granularity: Granularity) -> Vec<FeatureProfile> {
    profiles.iter().map(|p| p.features(granularity)).collect()
}

/// Restricts a population by diagnosis and survival band. Empty filter
/// selects every patient.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PopulationFilter {
    pub disease: Option<String>,
    pub band: Option<SurvivalBand>,
    pub thresholds: SurvivalThresholds,
}

impl PopulationFilter {
    /// Short human-readable description, used as the table population label.
    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        if let Some(d) = &self.disease {
            parts.push(format!("disease={d}"));
        }
        if let Some(b) = self.band {
            parts.push(format!("band={}", b.name()));
        }
        if parts.is_empty() {
            "all".to_string()
        } else {
            parts.join(",")
        }
    }
}

/// Patients matching `filter`, in patient-id order.
pub fn select_patients(graph: &KnowledgeGraph, filter: &PopulationFilter) -> Result<Vec<NodeRef>, CohortError> {
    filter.thresholds.check()?;
    let diagnosed: Option<BTreeSet<NodeRef>> = match &filter.disease {
        Some(d) => {
            let node = graph
                .disease_ref(d)
                .ok_or_else(|| CohortError::UnknownDisease(d.clone()))?;
            Some(
                graph
                    .neighbors_in(node, ColorFilter::RED, Partition::Patient)
                    .expect("disease node exists"),
            )
        }
        None => None,
    };
    let mut selected: Vec<(&str, NodeRef)> = graph
        .patients()
        .filter(|(p, _)| diagnosed.as_ref().is_none_or(|set| set.contains(p)))
        .filter(|(_, record)| filter.band.is_none_or(|b| filter.thresholds.classify(record) == b))
        .map(|(p, record)| (record.patient_id.as_str(), p))
        .collect();
    selected.sort();
    Ok(selected.into_iter().map(|(_, p)| p).collect())
}
