//! Threshold grouping of patients by profile distance.
//!
//! Two patients are linked when their distance is at most `k`. Groups are
//! either the connected components of that threshold graph (chaining) or
//! its maximal cliques (every pair within `k`).

use std::collections::BTreeSet;

use rayon::prelude::*;

use super::distance::Metric;
use super::FeatureProfile;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum GroupingMode {
    /// Connected components: a patient joins a group when it is within `k`
    /// of at least one member.
    #[default]
    Components,
    /// Maximal cliques: every pair of members is within `k`. Groups may
    /// overlap. Exponential in the worst case.
    Cliques,
}

/// Pairs `(i, j)`, `i < j`, at distance `<= k`, in lexicographic order.
pub fn threshold_edges(profiles: &[FeatureProfile], metric: Metric, k: Rational) -> Vec<(usize, usize)> {
    // Visit partners in order of profile size so the size lower bound can cut
    // the scan short.
    let mut by_size: Vec<usize> = (0..profiles.len()).collect();
    by_size.sort_by_key(|&i| (profiles[i].features.len(), i));

    let mut edges: Vec<(usize, usize)> = by_size
        .par_iter()
        .enumerate()
        .flat_map_iter(|(rank, &i)| {
            let small = profiles[i].features.len();
            by_size[rank + 1..]
                .iter()
                .take_while(move |&&j| metric.size_bound(small, profiles[j].features.len()) <= k)
                .filter(move |&&j| metric.distance(&profiles[i].features, &profiles[j].features) <= k)
                .map(move |&j| (i.min(j), i.max(j)))
        })
        .collect();
    edges.sort_unstable();
    edges
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Groups patients whose profiles lie within `k` of each other.
///
/// Each group lists patient ids in ascending order; groups are ordered by
/// their smallest id (then by the remaining ids, for overlapping cliques).
/// Singletons are included.
pub fn group_by_threshold(
    profiles: &[FeatureProfile],
    metric: Metric,
    k: Rational,
    mode: GroupingMode,
) -> Vec<Vec<String>> {
    let edges = threshold_edges(profiles, metric, k);
    let n = profiles.len();
    let mut groups: Vec<Vec<String>> = match mode {
        GroupingMode::Components => {
            let mut sets = DisjointSets::new(n);
            for &(a, b) in &edges {
                sets.union(a, b);
            }
            let mut members: Vec<Vec<String>> = vec![Vec::new(); n];
            for i in 0..n {
                let root = sets.find(i);
                members[root].push(profiles[i].patient_id.clone());
            }
            members.into_iter().filter(|m| !m.is_empty()).collect()
        }
        GroupingMode::Cliques => {
            let mut adjacency = vec![BTreeSet::new(); n];
            for &(a, b) in &edges {
                adjacency[a].insert(b);
                adjacency[b].insert(a);
            }
            let mut cliques = Vec::new();
            bron_kerbosch(
                &adjacency,
                &mut Vec::new(),
                (0..n).collect(),
                BTreeSet::new(),
                &mut cliques,
            );
            cliques
                .into_iter()
                .map(|c| c.into_iter().map(|i| profiles[i].patient_id.clone()).collect())
                .collect()
        }
    };
    for g in &mut groups {
        g.sort();
    }
    groups.sort();
    groups
}

/// `group\tsize\tpatients`, groups numbered from 1, members comma-separated.
pub fn groups_to_tsv(groups: &[Vec<String>]) -> String {
    let mut out = String::from("group\tsize\tpatients\n");
    for (i, g) in groups.iter().enumerate() {
        out.push_str(&format!("{}\t{}\t{}\n", i + 1, g.len(), g.join(",")));
    }
    out
}

/// Bron–Kerbosch with pivoting; reports every maximal clique.
fn bron_kerbosch(
    adjacency: &[BTreeSet<usize>],
    current: &mut Vec<usize>,
    mut candidates: BTreeSet<usize>,
    mut excluded: BTreeSet<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if candidates.is_empty() {
        if excluded.is_empty() {
            out.push(current.clone());
        }
        return;
    }
    let pivot = candidates
        .iter()
        .chain(excluded.iter())
        .copied()
        .max_by_key(|&u| (adjacency[u].intersection(&candidates).count(), std::cmp::Reverse(u)))
        .expect("candidates non-empty");
    let branch: Vec<usize> = candidates.difference(&adjacency[pivot]).copied().collect();
    for v in branch {
        current.push(v);
        bron_kerbosch(
            adjacency,
            current,
            candidates.intersection(&adjacency[v]).copied().collect(),
            excluded.intersection(&adjacency[v]).copied().collect(),
            out,
        );
        current.pop();
        candidates.remove(&v);
        excluded.insert(v);
    }
}
