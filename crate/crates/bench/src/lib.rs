//! Seeded workload generators for the benchmarks.

use std::collections::{BTreeMap, BTreeSet};

use oncograph::cohort::FeatureProfile;
use oncograph::{HittingSetInstance, Rational};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Hitting-set instance with `drugs` candidates and `sets` targets of up to
/// `max_set` drugs each. Weights are small rationals.
pub fn hitting_set_instance(seed: u64, drugs: usize, sets: usize, max_set: usize) -> HittingSetInstance {
    let mut rng = StdRng::seed_from_u64(seed);
    let name = |d: usize| format!("drug{d:03}");
    let family: Vec<BTreeSet<String>> = (0..sets)
        .map(|_| (0..rng.gen_range(1..=max_set)).map(|_| name(rng.gen_range(0..drugs))).collect())
        .collect();
    let weights: BTreeMap<String, Rational> =
        (0..drugs).map(|d| (name(d), Rational::new(rng.gen_range(1..10), rng.gen_range(1..4)))).collect();
    let universe: Vec<String> = weights.keys().cloned().collect();
    HittingSetInstance::new(universe, family, weights, Vec::new())
        .expect("generated instance is valid")
}

/// `patients` profiles over an alphabet of `alphabet` mutations. Item `i` is
/// carried with probability decaying in `i`, so a few items are common and
/// most are rare, as in real cohorts.
pub fn profiles(seed: u64, patients: usize, alphabet: usize) -> Vec<FeatureProfile> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..patients)
        .map(|p| FeatureProfile {
            patient_id: format!("P{p:05}"),
            features: (0..alphabet)
                .filter(|&i| rng.gen_bool(0.6 / (1.0 + i as f64 / 2.0)))
                .map(|i| format!("m{i:03}"))
                .collect(),
        })
        .collect()
}
