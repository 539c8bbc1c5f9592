//! Shared random-instance generation for the integration tests.

use policy_tree::Dataset;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub struct Instance {
    pub ds: Dataset,
    pub units: Vec<u32>,
    pub depth: usize,
}

/// A seeded random instance mixing discrete and continuous covariates.
/// Roughly half the instances use small-integer rewards (exact float
/// arithmetic, many ties) and half continuous rewards.
pub fn random_instance(seed: u64, max_n: usize, max_p: usize, max_depth: usize) -> Instance {
    let mut rng = StdRng::seed_from_u64(seed);
    let n = rng.random_range(2..=max_n);
    let p = rng.random_range(1..=max_p);
    let m = [2usize, 3, 5][rng.random_range(0..3)];
    let depth = rng.random_range(0..=max_depth);
    let integer_rewards = rng.random_range(0..2) == 0;

    let column_kinds: Vec<usize> = (0..p).map(|_| rng.random_range(0..4)).collect();
    let covariates: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            column_kinds
                .iter()
                .map(|&kind| match kind {
                    0 => rng.random_range(0..2) as f64,
                    1 => rng.random_range(0..5) as f64,
                    2 => rng.random_range(-8..=8) as f64,
                    _ => rng.random_range(-1.0..1.0),
                })
                .collect()
        })
        .collect();
    let rewards: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            (0..m)
                .map(|_| {
                    if integer_rewards {
                        rng.random_range(-8..=8) as f64
                    } else {
                        rng.random_range(-1.0..1.0)
                    }
                })
                .collect()
        })
        .collect();

    let ds = Dataset::build(covariates, rewards).unwrap();
    let units = ds.all_units();
    Instance { ds, units, depth }
}
