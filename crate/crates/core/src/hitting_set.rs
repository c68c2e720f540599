//! Drug selection as an exact minimum (weight) hitting set.
//!
//! Each target mutation contributes the set of drugs acting on it; a
//! treatment must contain at least one drug from every such set.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};

use crate::graph::{ColorFilter, KnowledgeGraph, MutationKey, Partition};
use crate::rational::{format_rational, parse_rational, Rational};

/// Largest universe the exhaustive oracle accepts.
pub const ORACLE_MAX_UNIVERSE: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HittingSetError {
    #[error("family set {origin:?} is empty")]
    EmptySet { origin: String },
    #[error("family set {origin:?} names drug {drug:?} outside the universe")]
    UnknownDrug { origin: String, drug: String },
    #[error("drug {drug:?} has negative weight {weight}")]
    NegativeWeight { drug: String, weight: String },
    #[error("unknown patient {0:?}")]
    UnknownPatient(String),
    #[error("unknown mutation {0:?}")]
    UnknownMutation(String),
    #[error("patient {patient:?} does not carry mutation {mutation:?}")]
    NotPatientMutation { patient: String, mutation: String },
    #[error("untargetable mutation {0}")]
    Untargetable(String),
    #[error("universe of {0} drugs exceeds the oracle limit of {ORACLE_MAX_UNIVERSE}")]
    UniverseTooLarge(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Objective {
    /// Fewest drugs; ties broken by the sorted drug-id list.
    #[default]
    Cardinality,
    /// Least total weight; ties broken by cardinality, then drug ids.
    Weight,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HittingSetInstance {
    universe: Vec<String>,
    family: Vec<BTreeSet<String>>,
    weights: BTreeMap<String, Rational>,
    origin: Vec<String>,
}

impl HittingSetInstance {
    /// Validates and builds an instance. Drugs missing from `weights` get
    /// weight 1. `origin[i]` labels `family[i]`; missing labels become `S<i+1>`.
    pub fn new(
        universe: impl IntoIterator<Item = String>,
        family: Vec<BTreeSet<String>>,
        weights: BTreeMap<String, Rational>,
        origin: Vec<String>,
    ) -> Result<Self, HittingSetError> {
        let universe: Vec<String> = universe.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let origin: Vec<String> = (0..family.len())
            .map(|i| origin.get(i).cloned().unwrap_or_else(|| format!("S{}", i + 1)))
            .collect();
        for (set, label) in family.iter().zip(&origin) {
            if set.is_empty() {
                return Err(HittingSetError::EmptySet { origin: label.clone() });
            }
            if let Some(d) = set.iter().find(|d| universe.binary_search(d).is_err()) {
                return Err(HittingSetError::UnknownDrug {
                    origin: label.clone(),
                    drug: d.clone(),
                });
            }
        }
        let mut full = BTreeMap::new();
        for d in &universe {
            let w = weights.get(d).copied().unwrap_or_else(Rational::one);
            if w.is_negative() {
                return Err(HittingSetError::NegativeWeight {
                    drug: d.clone(),
                    weight: format_rational(&w),
                });
            }
            full.insert(d.clone(), w);
        }
        Ok(HittingSetInstance {
            universe,
            family,
            weights: full,
            origin,
        })
    }

    /// Universe is the union of the family sets.
    pub fn from_family(family: Vec<BTreeSet<String>>, weights: BTreeMap<String, Rational>) -> Result<Self, HittingSetError> {
        let universe: BTreeSet<String> = family.iter().flatten().cloned().collect();
        HittingSetInstance::new(universe, family, weights, Vec::new())
    }

    /// Drug ids in sorted order.
    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn family(&self) -> &[BTreeSet<String>] {
        &self.family
    }

    pub fn origin(&self) -> &[String] {
        &self.origin
    }

    pub fn weight(&self, drug: &str) -> Option<Rational> {
        self.weights.get(drug).copied()
    }

    pub fn weights(&self) -> &BTreeMap<String, Rational> {
        &self.weights
    }

    /// Copy with every weight set to `w`.
    pub fn with_uniform_weight(&self, w: Rational) -> Self {
        let mut out = self.clone();
        for v in out.weights.values_mut() {
            *v = w;
        }
        out
    }

    pub fn is_hitting_set(&self, drugs: &BTreeSet<String>) -> bool {
        self.family.iter().all(|s| !s.is_disjoint(drugs))
    }

    /// Parses the text format: one comma-separated family set per line,
    /// `drug<TAB>weight` lines (decimal or `n/d`), `#` comments and blank lines ignored.
    pub fn parse(text: &str) -> Result<Self, HittingSetError> {
        let mut family = Vec::new();
        let mut weights = BTreeMap::new();
        let mut declared = BTreeSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let parse_err = |message: String| HittingSetError::Parse { line: line_no, message };
            if let Some((drug, weight)) = line.split_once('\t') {
                let drug = drug.trim();
                if drug.is_empty() {
                    return Err(parse_err("empty drug id".into()));
                }
                let w = parse_rational(weight).map_err(|e| parse_err(e.to_string()))?;
                if weights.insert(drug.to_string(), w).is_some() {
                    return Err(parse_err(format!("weight for {drug:?} given twice")));
                }
                declared.insert(drug.to_string());
            } else {
                let set: BTreeSet<String> = line
                    .split(',')
                    .map(str::trim)
                    .filter(|d| !d.is_empty())
                    .map(str::to_string)
                    .collect();
                if set.is_empty() {
                    return Err(parse_err("family line lists no drug".into()));
                }
                family.push(set);
            }
        }
        let universe: BTreeSet<String> = family.iter().flatten().cloned().chain(declared).collect();
        HittingSetInstance::new(universe, family, weights, Vec::new())
    }

    /// Inverse of [`HittingSetInstance::parse`] (origin labels go into comments).
    pub fn to_text(&self) -> String {
        let mut out = String::from("# one family set per line\n");
        for (set, label) in self.family.iter().zip(&self.origin) {
            let ids: Vec<&str> = set.iter().map(String::as_str).collect();
            let _ = writeln!(out, "# {label}");
            out.push_str(&ids.join(","));
            out.push('\n');
        }
        out.push_str("# drug\tweight\n");
        for (d, w) in &self.weights {
            let _ = writeln!(out, "{d}\t{}", format_rational(w));
        }
        out
    }
}

/// Drugs targeting `mutation`.
pub fn drugs_for_mutation(graph: &KnowledgeGraph, mutation: &MutationKey) -> Result<BTreeSet<String>, HittingSetError> {
    let m = graph
        .mutation_ref(mutation)
        .ok_or_else(|| HittingSetError::UnknownMutation(mutation.to_string()))?;
    Ok(graph
        .neighbors_in(m, ColorFilter::MAGENTA, Partition::Drug)
        .expect("mutation node exists")
        .into_iter()
        .filter_map(|d| graph.drug(d).map(|n| n.drug_id.clone()))
        .collect())
}

/// One family set per target mutation (given by rendered id), universe
/// restricted to the drugs that appear, weights from the drug nodes.
pub fn build_instance(
    graph: &KnowledgeGraph,
    patient_id: &str,
    targets: &[String],
) -> Result<HittingSetInstance, HittingSetError> {
    let p = graph
        .patient_ref(patient_id)
        .ok_or_else(|| HittingSetError::UnknownPatient(patient_id.to_string()))?;
    let carried = graph
        .neighbors_in(p, ColorFilter::GREEN, Partition::Mutation)
        .expect("patient node exists");
    let mut seen = BTreeSet::new();
    let mut family = Vec::new();
    let mut origin = Vec::new();
    let mut weights = BTreeMap::new();
    for target in targets {
        if !seen.insert(target.as_str()) {
            continue;
        }
        let m = graph
            .mutation_by_display(target)
            .ok_or_else(|| HittingSetError::UnknownMutation(target.clone()))?;
        if !carried.contains(&m) {
            return Err(HittingSetError::NotPatientMutation {
                patient: patient_id.to_string(),
                mutation: target.clone(),
            });
        }
        let drugs: BTreeSet<String> = graph
            .neighbors_in(m, ColorFilter::MAGENTA, Partition::Drug)
            .expect("mutation node exists")
            .into_iter()
            .filter_map(|d| graph.drug(d))
            .map(|d| {
                weights.insert(d.drug_id.clone(), d.toxicity_weight);
                d.drug_id.clone()
            })
            .collect();
        if drugs.is_empty() {
            return Err(HittingSetError::Untargetable(target.clone()));
        }
        family.push(drugs);
        origin.push(target.clone());
    }
    let universe: Vec<String> = weights.keys().cloned().collect();
    HittingSetInstance::new(universe, family, weights, origin)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreatmentSolution {
    pub drugs: BTreeSet<String>,
    pub total_weight: Rational,
    pub optimal: bool,
    /// Family label to the chosen drugs in that set.
    pub hits: BTreeMap<String, BTreeSet<String>>,
}

impl TreatmentSolution {
    fn assemble(instance: &HittingSetInstance, chosen: &[usize]) -> Self {
        let drugs: BTreeSet<String> = chosen.iter().map(|&i| instance.universe[i].clone()).collect();
        assert!(
            instance.is_hitting_set(&drugs),
            "solver returned a set that misses a family member"
        );
        let total_weight = drugs.iter().map(|d| instance.weights[d]).sum();
        let hits = instance
            .family
            .iter()
            .zip(&instance.origin)
            .map(|(set, label)| (label.clone(), set.intersection(&drugs).cloned().collect()))
            .collect();
        TreatmentSolution {
            drugs,
            total_weight,
            optimal: true,
            hits,
        }
    }

    /// `family\tdrugs` per family set followed by a summary line.
    pub fn to_tsv(&self, instance: &HittingSetInstance) -> String {
        let mut out = String::from("target\tcandidates\tchosen\n");
        for (set, label) in instance.family.iter().zip(&instance.origin) {
            let cand: Vec<&str> = set.iter().map(String::as_str).collect();
            let chosen: Vec<&str> = self.hits[label].iter().map(String::as_str).collect();
            let _ = writeln!(out, "{label}\t{}\t{}", cand.join(","), chosen.join(","));
        }
        let drugs: Vec<&str> = self.drugs.iter().map(String::as_str).collect();
        let _ = writeln!(
            out,
            "# treatment\t{}\tsize={}\tweight={}\toptimal={}",
            drugs.join(","),
            self.drugs.len(),
            format_rational(&self.total_weight),
            self.optimal
        );
        out
    }
}

/// Index form of an instance. Drug indices follow the sorted universe, so
/// comparing sorted index lists compares sorted id lists.
struct Indexed {
    sets: Vec<Vec<usize>>,
    covers: Vec<Vec<usize>>,
    weight: Vec<Rational>,
}

impl Indexed {
    fn new(instance: &HittingSetInstance, objective: Objective) -> Self {
        let index = |d: &String| instance.universe.binary_search(d).expect("validated");
        let sets: Vec<Vec<usize>> = instance.family.iter().map(|s| s.iter().map(index).collect()).collect();
        let mut covers = vec![Vec::new(); instance.universe.len()];
        for (si, s) in sets.iter().enumerate() {
            for &d in s {
                covers[d].push(si);
            }
        }
        let weight = instance
            .universe
            .iter()
            .map(|d| match objective {
                Objective::Cardinality => Rational::one(),
                Objective::Weight => instance.weights[d],
            })
            .collect();
        Indexed { sets, covers, weight }
    }
}

/// Lexicographic objective: weight, then size, then sorted drug indices.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Key {
    weight: Rational,
    size: usize,
    drugs: Vec<usize>,
}

fn key_of(ix: &Indexed, chosen: &[usize]) -> Key {
    let mut drugs = chosen.to_vec();
    drugs.sort_unstable();
    Key {
        weight: chosen.iter().map(|&d| ix.weight[d]).sum(),
        size: chosen.len(),
        drugs,
    }
}

/// Greedy cover by best coverage per unit weight, then redundant drugs dropped.
fn greedy(ix: &Indexed) -> Vec<usize> {
    let mut covered = vec![false; ix.sets.len()];
    let mut chosen = Vec::new();
    while covered.iter().any(|c| !c) {
        let gain = |d: usize| ix.covers[d].iter().filter(|&&s| !covered[s]).count();
        let best = (0..ix.weight.len())
            .filter(|&d| gain(d) > 0)
            .max_by(|&a, &b| {
                // gain_a / w_a vs gain_b / w_b, zero weight ranking first.
                let (ga, gb) = (Rational::from_integer(gain(a) as i64), Rational::from_integer(gain(b) as i64));
                let lhs = ga * ix.weight[b];
                let rhs = gb * ix.weight[a];
                lhs.cmp(&rhs).then_with(|| gain(a).cmp(&gain(b))).then_with(|| b.cmp(&a))
            })
            .expect("every set is non-empty");
        for &s in &ix.covers[best] {
            covered[s] = true;
        }
        chosen.push(best);
    }
    // Drop drugs whose sets are all covered by others, heaviest first.
    let mut order = chosen.clone();
    order.sort_by(|&a, &b| ix.weight[b].cmp(&ix.weight[a]).then_with(|| b.cmp(&a)));
    for d in order {
        let others: Vec<usize> = chosen.iter().copied().filter(|&x| x != d).collect();
        let still_hits = ix.sets.iter().all(|s| s.iter().any(|x| others.contains(x)));
        if still_hits {
            chosen = others;
        }
    }
    chosen
}

struct Search<'a> {
    ix: &'a Indexed,
    best: Key,
    chosen: Vec<usize>,
    excluded: Vec<bool>,
    /// Number of chosen drugs hitting each set.
    hit_count: Vec<u32>,
}

impl Search<'_> {
    fn allowed(&self, d: usize) -> bool {
        !self.excluded[d] && !self.chosen.contains(&d)
    }

    /// Lower bound on the weight and size still to add: a greedy packing of
    /// pairwise-disjoint uncovered sets, each needing its own drug. `None`
    /// when some uncovered set has no allowed drug left.
    fn bound(&self) -> Option<(Rational, usize)> {
        let mut uncovered: Vec<(usize, usize)> = Vec::new();
        for (si, s) in self.ix.sets.iter().enumerate() {
            if self.hit_count[si] == 0 {
                let avail = s.iter().filter(|&&d| self.allowed(d)).count();
                if avail == 0 {
                    return None;
                }
                uncovered.push((avail, si));
            }
        }
        uncovered.sort_unstable();
        let mut used = vec![false; self.ix.weight.len()];
        let mut weight = Rational::zero();
        let mut size = 0;
        for (_, si) in uncovered {
            let avail: Vec<usize> = self.ix.sets[si].iter().copied().filter(|&d| self.allowed(d)).collect();
            if avail.iter().any(|&d| used[d]) {
                continue;
            }
            weight += avail.iter().map(|&d| self.ix.weight[d]).min().expect("non-empty");
            size += 1;
            for d in avail {
                used[d] = true;
            }
        }
        Some((weight, size))
    }

    fn run(&mut self) {
        let Some((lb_w, lb_s)) = self.bound() else {
            return;
        };
        let w: Rational = self.chosen.iter().map(|&d| self.ix.weight[d]).sum();
        let partial = (w + lb_w, self.chosen.len() + lb_s);
        if partial > (self.best.weight, self.best.size) {
            return;
        }
        // Branch on the uncovered set with fewest allowed drugs.
        let pick = self
            .ix
            .sets
            .iter()
            .enumerate()
            .filter(|&(si, _)| self.hit_count[si] == 0)
            .map(|(si, s)| (s.iter().filter(|&&d| self.allowed(d)).count(), si))
            .min();
        let Some((_, si)) = pick else {
            let key = key_of(self.ix, &self.chosen);
            if key < self.best {
                self.best = key;
            }
            return;
        };
        let mut options: Vec<usize> = self.ix.sets[si].iter().copied().filter(|&d| self.allowed(d)).collect();
        options.sort_by(|&a, &b| {
            self.ix.weight[a]
                .cmp(&self.ix.weight[b])
                .then_with(|| self.ix.covers[b].len().cmp(&self.ix.covers[a].len()))
                .then_with(|| a.cmp(&b))
        });
        let mut newly_excluded = Vec::new();
        for d in options {
            self.chosen.push(d);
            for &s in &self.ix.covers[d] {
                self.hit_count[s] += 1;
            }
            self.run();
            for &s in &self.ix.covers[d] {
                self.hit_count[s] -= 1;
            }
            self.chosen.pop();
            // Later branches must not contain `d`: those sets were all explored.
            self.excluded[d] = true;
            newly_excluded.push(d);
        }
        for d in newly_excluded {
            self.excluded[d] = false;
        }
    }
}

fn branch_and_bound(instance: &HittingSetInstance, objective: Objective) -> TreatmentSolution {
    let ix = Indexed::new(instance, objective);
    let start = greedy(&ix);
    let mut search = Search {
        best: key_of(&ix, &start),
        ix: &ix,
        chosen: Vec::new(),
        excluded: vec![false; instance.universe.len()],
        hit_count: vec![0; instance.family.len()],
    };
    search.run();
    TreatmentSolution::assemble(instance, &search.best.drugs)
}

/// Minimum number of drugs hitting every family set.
pub fn solve_min_cardinality(instance: &HittingSetInstance) -> TreatmentSolution {
    branch_and_bound(instance, Objective::Cardinality)
}

/// Minimum total weight hitting every family set.
pub fn solve_min_weight(instance: &HittingSetInstance) -> TreatmentSolution {
    branch_and_bound(instance, Objective::Weight)
}

pub fn solve(instance: &HittingSetInstance, objective: Objective) -> TreatmentSolution {
    branch_and_bound(instance, objective)
}

/// Exhaustive search over every subset of the universe.
pub fn oracle_solve(instance: &HittingSetInstance, objective: Objective) -> Result<TreatmentSolution, HittingSetError> {
    let n = instance.universe.len();
    if n > ORACLE_MAX_UNIVERSE {
        return Err(HittingSetError::UniverseTooLarge(n));
    }
    let ix = Indexed::new(instance, objective);
    let set_masks: Vec<u32> = ix
        .sets
        .iter()
        .map(|s| s.iter().fold(0u32, |m, &d| m | (1 << d)))
        .collect();
    let mut best: Option<Key> = None;
    for mask in 0u32..(1u32 << n) {
        if set_masks.iter().any(|&s| s & mask == 0) {
            continue;
        }
        let chosen: Vec<usize> = (0..n).filter(|&d| mask & (1 << d) != 0).collect();
        let key = key_of(&ix, &chosen);
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
    }
    let best = best.expect("the full universe hits every non-empty set");
    Ok(TreatmentSolution::assemble(instance, &best.drugs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{DrugNode, GeneticEdge, PatientRecord, TargetEdge};

    fn set(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    fn inst(family: &[&[&str]], weights: &[(&str, Rational)]) -> HittingSetInstance {
        HittingSetInstance::from_family(
            family.iter().map(|s| set(s)).collect(),
            weights.iter().map(|(d, w)| (d.to_string(), *w)).collect(),
        )
        .unwrap()
    }

    fn r(v: i64) -> Rational {
        Rational::from_integer(v)
    }

    #[test]
    fn empty_family() {
        let i = inst(&[], &[]);
        for objective in [Objective::Cardinality, Objective::Weight] {
            let s = solve(&i, objective);
            assert!(s.drugs.is_empty());
            assert_eq!(s.total_weight, r(0));
            assert_eq!(oracle_solve(&i, objective).unwrap(), s);
        }
    }

    #[test]
    fn shared_drug_wins() {
        let i = inst(&[&["d1", "d2"], &["d2", "d3"]], &[]);
        assert_eq!(solve_min_cardinality(&i).drugs, set(&["d2"]));
        assert_eq!(oracle_solve(&i, Objective::Cardinality).unwrap().drugs, set(&["d2"]));
    }

    #[test]
    fn disjoint_singletons_need_each() {
        let i = inst(&[&["a"], &["b"], &["c"]], &[]);
        let s = solve_min_cardinality(&i);
        assert_eq!(s.drugs, set(&["a", "b", "c"]));
        assert_eq!(s.total_weight, r(3));
    }

    #[test]
    fn weighted_avoids_heavy_drug() {
        let i = inst(&[&["d1", "d2"], &["d2", "d3"]], &[("d2", r(5)), ("d1", r(1)), ("d3", r(1))]);
        let s = solve_min_weight(&i);
        assert_eq!(s.drugs, set(&["d1", "d3"]));
        assert_eq!(s.total_weight, r(2));
        assert_eq!(s.hits["S1"], set(&["d1"]));
        assert_eq!(s.hits["S2"], set(&["d3"]));
        // Cardinality ignores weights but still reports them.
        let c = solve_min_cardinality(&i);
        assert_eq!(c.drugs, set(&["d2"]));
        assert_eq!(c.total_weight, r(5));
    }

    #[test]
    fn zero_weight_forced() {
        let i = inst(&[&["d1"]], &[("d1", r(0))]);
        let s = solve_min_weight(&i);
        assert_eq!(s.drugs, set(&["d1"]));
        assert_eq!(s.total_weight, r(0));
    }

    #[test]
    fn zero_weight_extra_drug_not_taken() {
        // {z} costs nothing but {a} alone already hits both sets.
        let i = inst(&[&["a", "z"], &["a"]], &[("a", r(1)), ("z", r(0))]);
        assert_eq!(solve_min_weight(&i).drugs, set(&["a"]));
    }

    #[test]
    fn lexicographic_tie_break() {
        let i = inst(&[&["c", "a", "b"]], &[]);
        assert_eq!(solve_min_cardinality(&i).drugs, set(&["a"]));
        let i = inst(&[&["b", "c"], &["a", "d"]], &[]);
        assert_eq!(solve_min_cardinality(&i).drugs, set(&["a", "b"]));
        assert_eq!(oracle_solve(&i, Objective::Cardinality).unwrap().drugs, set(&["a", "b"]));
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            HittingSetInstance::from_family(vec![BTreeSet::new()], BTreeMap::new()),
            Err(HittingSetError::EmptySet { .. })
        ));
        assert!(matches!(
            HittingSetInstance::new(vec!["a".to_string()], vec![set(&["b"])], BTreeMap::new(), vec![]),
            Err(HittingSetError::UnknownDrug { .. })
        ));
        let neg = [("a".to_string(), r(-1))].into_iter().collect();
        assert!(matches!(
            HittingSetInstance::from_family(vec![set(&["a"])], neg),
            Err(HittingSetError::NegativeWeight { .. })
        ));
    }

    #[test]
    fn oracle_limit() {
        let big: Vec<BTreeSet<String>> = (0..21).map(|i| set(&[&format!("d{i:02}")])).collect();
        let i = HittingSetInstance::from_family(big, BTreeMap::new()).unwrap();
        assert_eq!(
            oracle_solve(&i, Objective::Cardinality),
            Err(HittingSetError::UniverseTooLarge(21))
        );
        assert_eq!(solve_min_cardinality(&i).drugs.len(), 21);
    }

    #[test]
    fn text_round_trip() {
        let text = "# treatment\nd1,d2\n d2 , d3\n\nd1\t1\nd2\t2.5\nd4\t0\n";
        let i = HittingSetInstance::parse(text).unwrap();
        assert_eq!(i.universe(), ["d1", "d2", "d3", "d4"]);
        assert_eq!(i.weight("d2"), Some(Rational::new(5, 2)));
        assert_eq!(i.weight("d3"), Some(r(1)));
        assert_eq!(HittingSetInstance::parse(&i.to_text()).unwrap(), i);
        assert!(matches!(
            HittingSetInstance::parse("d1\nd1\tx\n"),
            Err(HittingSetError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            HittingSetInstance::parse(",,\n"),
            Err(HittingSetError::Parse { line: 1, .. })
        ));
    }

    fn graph() -> KnowledgeGraph {
        let mut g = KnowledgeGraph::new();
        g.add_node(PatientRecord::new("P1", 12, true)).unwrap();
        let m1 = MutationKey::new("KRAS", "12", 1, 1);
        let m2 = MutationKey::new("EGFR", "7", 2, 2);
        let m3 = MutationKey::new("TP53", "17", 3, 3);
        let m4 = MutationKey::new("ALK", "2", 4, 4);
        for m in [&m1, &m2, &m3, &m4] {
            g.add_node(m.clone()).unwrap();
        }
        g.add_node(DrugNode::new("d1")).unwrap();
        g.add_node(DrugNode::new("d2").with_weight(r(3))).unwrap();
        g.add_node(DrugNode::new("d3")).unwrap();
        for m in [&m1, &m2, &m3] {
            g.add_edge(GeneticEdge {
                patient_id: "P1".into(),
                mutation: m.clone(),
                vaf: None,
            })
            .unwrap();
        }
        for (m, d) in [(&m1, "d1"), (&m1, "d2"), (&m2, "d2"), (&m2, "d3"), (&m4, "d1")] {
            g.add_edge(TargetEdge {
                mutation: m.clone(),
                drug_id: d.into(),
            })
            .unwrap();
        }
        g
    }

    #[test]
    fn instance_from_graph() {
        let g = graph();
        let m1 = MutationKey::new("KRAS", "12", 1, 1);
        assert_eq!(drugs_for_mutation(&g, &m1).unwrap(), set(&["d1", "d2"]));
        assert!(drugs_for_mutation(&g, &MutationKey::new("TP53", "17", 3, 3)).unwrap().is_empty());

        let targets = vec!["KRAS_12_1_1".to_string(), "EGFR_7_2_2".to_string()];
        let i = build_instance(&g, "P1", &targets).unwrap();
        assert_eq!(i.family(), [set(&["d1", "d2"]), set(&["d2", "d3"])]);
        assert_eq!(i.universe(), ["d1", "d2", "d3"]);
        assert_eq!(i.origin(), targets.as_slice());
        assert_eq!(solve_min_cardinality(&i).drugs, set(&["d2"]));
        assert_eq!(solve_min_weight(&i).drugs, set(&["d1", "d3"]));

        let empty = build_instance(&g, "P1", &[]).unwrap();
        assert!(empty.family().is_empty());
    }

    #[test]
    fn instance_errors() {
        let g = graph();
        let t = |s: &str| vec![s.to_string()];
        assert_eq!(
            build_instance(&g, "P1", &t("TP53_17_3_3")),
            Err(HittingSetError::Untargetable("TP53_17_3_3".into()))
        );
        assert!(matches!(
            build_instance(&g, "P1", &t("ALK_2_4_4")),
            Err(HittingSetError::NotPatientMutation { .. })
        ));
        assert!(matches!(
            build_instance(&g, "P1", &t("NOPE_1_1_1")),
            Err(HittingSetError::UnknownMutation(_))
        ));
        assert!(matches!(
            build_instance(&g, "P9", &[]),
            Err(HittingSetError::UnknownPatient(_))
        ));
        assert_eq!(
            HittingSetError::Untargetable("TP53_17_3_3".into()).to_string(),
            "untargetable mutation TP53_17_3_3"
        );
    }
}
