//! Distances between genetic profiles.

use std::collections::BTreeSet;
use std::str::FromStr;

use crate::rational::Rational;

/// Number of features present in exactly one of the two profiles.
pub fn hamming_distance<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> usize {
    let common = a.intersection(b).count();
    a.len() + b.len() - 2 * common
}

/// Hamming distance normalized by the size of the union. Two empty profiles
/// are at distance 0.
pub fn jaccard_distance<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> Rational {
    let common = a.intersection(b).count();
    let union = a.len() + b.len() - common;
    if union == 0 {
        return Rational::from_integer(0);
    }
    Rational::new((union - common) as i64, union as i64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Metric {
    #[default]
    Hamming,
    Jaccard,
}

impl Metric {
    pub fn distance<T: Ord>(self, a: &BTreeSet<T>, b: &BTreeSet<T>) -> Rational {
        match self {
            Metric::Hamming => Rational::from_integer(hamming_distance(a, b) as i64),
            Metric::Jaccard => jaccard_distance(a, b),
        }
    }

    /// Lower bound on the distance between profiles of sizes `small <= large`.
    pub(crate) fn size_bound(self, small: usize, large: usize) -> Rational {
        match self {
            Metric::Hamming => Rational::from_integer((large - small) as i64),
            Metric::Jaccard if large == 0 => Rational::from_integer(0),
            Metric::Jaccard => Rational::new((large - small) as i64, large as i64),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Metric::Hamming => "hamming",
            Metric::Jaccard => "jaccard",
        }
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "hamming" => Ok(Metric::Hamming),
            "jaccard" => Ok(Metric::Jaccard),
            other => Err(format!("unknown metric {other:?} (expected hamming or jaccard)")),
        }
    }
}
