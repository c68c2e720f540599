//! Survival-period partition of the patient set.

use std::collections::BTreeSet;
use std::str::FromStr;

use super::CohortError;
use crate::graph::{KnowledgeGraph, PatientRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SurvivalThresholds {
    /// Long survivors have at least this many months.
    pub long: u32,
    /// Deceased patients with at most this many months form the short group.
    pub short: u32,
}

impl Default for SurvivalThresholds {
    fn default() -> Self {
        SurvivalThresholds { long: 36, short: 6 }
    }
}

impl SurvivalThresholds {
    pub fn new(long: u32, short: u32) -> Result<Self, CohortError> {
        let t = SurvivalThresholds { long, short };
        t.check()?;
        Ok(t)
    }

    pub(crate) fn check(&self) -> Result<(), CohortError> {
        if self.short < self.long {
            Ok(())
        } else {
            Err(CohortError::InvalidThresholds {
                long: self.long,
                short: self.short,
            })
        }
    }

    /// Which band a patient falls in. The alive flag matters only for the
    /// short group.
    pub fn classify(&self, patient: &PatientRecord) -> SurvivalBand {
        if patient.survival_months >= self.long {
            SurvivalBand::Long
        } else if patient.survival_months <= self.short && !patient.alive {
            SurvivalBand::ShortDeceased
        } else {
            SurvivalBand::Rest
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SurvivalBand {
    Long,
    ShortDeceased,
    Rest,
}

impl SurvivalBand {
    pub fn name(self) -> &'static str {
        match self {
            SurvivalBand::Long => "long",
            SurvivalBand::ShortDeceased => "short",
            SurvivalBand::Rest => "rest",
        }
    }
}

impl FromStr for SurvivalBand {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "long" => Ok(SurvivalBand::Long),
            "short" => Ok(SurvivalBand::ShortDeceased),
            "rest" => Ok(SurvivalBand::Rest),
            other => Err(format!("unknown survival band {other:?} (expected long, short or rest)")),
        }
    }
}

/// Patient ids per band. The three sets are disjoint and cover the patients.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SurvivalPartition {
    pub long_survivors: BTreeSet<String>,
    pub short_deceased: BTreeSet<String>,
    pub rest: BTreeSet<String>,
}

impl SurvivalPartition {
    pub fn band_of(&self, patient_id: &str) -> Option<SurvivalBand> {
        if self.long_survivors.contains(patient_id) {
            Some(SurvivalBand::Long)
        } else if self.short_deceased.contains(patient_id) {
            Some(SurvivalBand::ShortDeceased)
        } else if self.rest.contains(patient_id) {
            Some(SurvivalBand::Rest)
        } else {
            None
        }
    }

    pub fn len(&self) -> usize {
        self.long_survivors.len() + self.short_deceased.len() + self.rest.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `patient\tsurvival_months\talive\tband`, one line per patient in id order.
    pub fn to_tsv(&self, graph: &KnowledgeGraph) -> String {
        let mut rows: Vec<(&PatientRecord, SurvivalBand)> = graph
            .patients()
            .filter_map(|(_, r)| Some((r, self.band_of(&r.patient_id)?)))
            .collect();
        rows.sort_by(|a, b| a.0.patient_id.cmp(&b.0.patient_id));
        let mut out = String::from("patient\tsurvival_months\talive\tband\n");
        for (r, band) in rows {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                r.patient_id,
                r.survival_months,
                r.alive,
                band.name()
            ));
        }
        out
    }
}

pub fn survival_partition(
    graph: &KnowledgeGraph,
    thresholds: SurvivalThresholds,
) -> Result<SurvivalPartition, CohortError> {
    thresholds.check()?;
    let mut partition = SurvivalPartition::default();
    for (_, record) in graph.patients() {
        let id = record.patient_id.clone();
        match thresholds.classify(record) {
            SurvivalBand::Long => partition.long_survivors.insert(id),
            SurvivalBand::ShortDeceased => partition.short_deceased.insert(id),
            SurvivalBand::Rest => partition.rest.insert(id),
        };
    }
    Ok(partition)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundaries() {
        let t = SurvivalThresholds::default();
        assert_eq!(t.classify(&PatientRecord::new("a", 36, true)), SurvivalBand::Long);
        assert_eq!(t.classify(&PatientRecord::new("a", 36, false)), SurvivalBand::Long);
        assert_eq!(t.classify(&PatientRecord::new("a", 35, true)), SurvivalBand::Rest);
        assert_eq!(t.classify(&PatientRecord::new("a", 6, false)), SurvivalBand::ShortDeceased);
        assert_eq!(t.classify(&PatientRecord::new("a", 6, true)), SurvivalBand::Rest);
        assert_eq!(t.classify(&PatientRecord::new("a", 7, false)), SurvivalBand::Rest);
        assert_eq!(t.classify(&PatientRecord::new("a", 0, false)), SurvivalBand::ShortDeceased);
    }

    #[test]
    fn rejects_inverted_thresholds() {
        assert!(SurvivalThresholds::new(36, 6).is_ok());
        assert_eq!(
            SurvivalThresholds::new(6, 6),
            Err(CohortError::InvalidThresholds { long: 6, short: 6 })
        );
        let g = KnowledgeGraph::new();
        assert!(survival_partition(&g, SurvivalThresholds { long: 5, short: 9 }).is_err());
    }

    #[test]
    fn partition_covers_patients() {
        let mut g = KnowledgeGraph::new();
        for (id, m, a) in [("A", 40, false), ("B", 2, false), ("C", 2, true), ("D", 20, false)] {
            g.add_node(PatientRecord::new(id, m, a)).unwrap();
        }
        let p = survival_partition(&g, SurvivalThresholds::default()).unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(p.band_of("A"), Some(SurvivalBand::Long));
        assert_eq!(p.band_of("B"), Some(SurvivalBand::ShortDeceased));
        assert_eq!(p.band_of("C"), Some(SurvivalBand::Rest));
        assert_eq!(p.band_of("D"), Some(SurvivalBand::Rest));
        assert_eq!(
            p.to_tsv(&g),
            "patient\tsurvival_months\talive\tband\nA\t40\tfalse\tlong\nB\t2\tfalse\tshort\nC\t2\ttrue\trest\nD\t20\tfalse\trest\n"
        );
    }
}
