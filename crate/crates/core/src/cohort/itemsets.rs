//! Maximal coexisting feature sets (maximal frequent itemsets).
//!
//! Level-wise candidate generation over tidset bitsets, pruned by
//! anti-monotonicity of support, followed by a maximality filter.

use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;

use super::{CohortError, FeatureProfile};
use crate::rational::{format_percent, percent, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoexistenceSet {
    pub mutations: BTreeSet<String>,
    pub support_percent: Rational,
    pub supporting_patients: BTreeSet<String>,
}

/// Patient bitset.
#[derive(Clone, PartialEq, Eq)]
struct Tidset(Vec<u64>);

impl Tidset {
    fn empty(n: usize) -> Self {
        Tidset(vec![0; n.div_ceil(64)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &Tidset) -> Tidset {
        Tidset(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &bits)| {
            (0..64).filter(move |b| bits & (1 << b) != 0).map(move |b| w * 64 + b)
        })
    }
}

/// Smallest patient count reaching `k_percent` of `n`: `ceil(k * n / 100)`.
fn min_support(k_percent: Rational, n: usize) -> usize {
    let needed = k_percent * Rational::from_integer(n as i64) / Rational::from_integer(100);
    needed.ceil().to_integer().max(0) as usize
}

/// Every maximal feature set carried by at least `k_percent` of the profiles.
///
/// The empty set is never reported. Output is ordered by support descending,
/// then by the sorted feature list.
pub fn coexisting_mutation_sets(
    profiles: &[FeatureProfile],
    k_percent: Rational,
) -> Result<Vec<CoexistenceSet>, CohortError> {
    if k_percent <= Rational::from_integer(0) || k_percent > Rational::from_integer(100) {
        return Err(CohortError::InvalidPercent(crate::rational::format_rational(&k_percent)));
    }
    let n = profiles.len();
    if n == 0 {
        return Err(CohortError::EmptyPopulation("no patient profiles".into()));
    }
    let threshold = min_support(k_percent, n).max(1);

    let items: Vec<&String> = profiles
        .iter()
        .flat_map(|p| &p.features)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut singles: Vec<Tidset> = vec![Tidset::empty(n); items.len()];
    for (pi, p) in profiles.iter().enumerate() {
        for f in &p.features {
            let idx = items.binary_search(&f).expect("item indexed");
            singles[idx].insert(pi);
        }
    }

    // Each level holds (sorted item indices, tidset), in lexicographic order.
    let mut level: Vec<(Vec<usize>, Tidset)> = singles
        .into_iter()
        .enumerate()
        .filter(|(_, t)| t.count() >= threshold)
        .map(|(i, t)| (vec![i], t))
        .collect();
    let mut maximal: Vec<(Vec<usize>, Tidset)> = Vec::new();

    while !level.is_empty() {
        let known: HashSet<&[usize]> = level.iter().map(|(s, _)| s.as_slice()).collect();
        // Join pairs sharing all but the last item.
        let next: Vec<(Vec<usize>, Tidset)> = (0..level.len())
            .into_par_iter()
            .flat_map_iter(|a| {
                let (sa, ta) = &level[a];
                let prefix = &sa[..sa.len() - 1];
                let level = &level;
                let known = &known;
                level[a + 1..]
                    .iter()
                    .take_while(move |(sb, _)| &sb[..sb.len() - 1] == prefix)
                    .filter_map(move |(sb, tb)| {
                        let mut cand = sa.clone();
                        cand.push(*sb.last().expect("non-empty"));
                        let all_subsets_frequent = (0..cand.len() - 2).all(|drop| {
                            let sub: Vec<usize> = cand
                                .iter()
                                .enumerate()
                                .filter(|&(i, _)| i != drop)
                                .map(|(_, &x)| x)
                                .collect();
                            known.contains(sub.as_slice())
                        });
                        if !all_subsets_frequent {
                            return None;
                        }
                        let t = ta.and(tb);
                        (t.count() >= threshold).then_some((cand, t))
                    })
            })
            .collect();

        let covered: HashSet<Vec<usize>> = next
            .iter()
            .flat_map(|(s, _)| {
                (0..s.len()).map(move |drop| {
                    s.iter()
                        .enumerate()
                        .filter(|&(i, _)| i != drop)
                        .map(|(_, &x)| x)
                        .collect::<Vec<usize>>()
                })
            })
            .collect();
        maximal.extend(level.into_iter().filter(|(s, _)| !covered.contains(s)));
        level = next;
    }

    let mut out: Vec<CoexistenceSet> = maximal
        .into_iter()
        .map(|(set, tids)| {
            let supporting: BTreeSet<String> = tids.members().map(|i| profiles[i].patient_id.clone()).collect();
            CoexistenceSet {
                mutations: set.iter().map(|&i| items[i].clone()).collect(),
                support_percent: percent(tids.count(), n),
                supporting_patients: supporting,
            }
        })
        .collect();
    out.sort_by(|a, b| {
        b.support_percent
            .cmp(&a.support_percent)
            .then_with(|| a.mutations.iter().cmp(b.mutations.iter()))
    });
    Ok(out)
}

/// `mutations\tsize\tsupport_percent\tpatients`; list cells comma-separated.
pub fn coexistence_to_tsv(sets: &[CoexistenceSet]) -> String {
    let mut out = String::from("mutations\tsize\tsupport_percent\tpatients\n");
    for s in sets {
        let items: Vec<&str> = s.mutations.iter().map(String::as_str).collect();
        let patients: Vec<&str> = s.supporting_patients.iter().map(String::as_str).collect();
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            items.join(","),
            items.len(),
            format_percent(&s.support_percent),
            patients.join(",")
        ));
    }
    out
}
