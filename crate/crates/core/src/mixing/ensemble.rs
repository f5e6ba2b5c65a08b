use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::GroupFunction;
use crate::group::GroupTable;

/// Families of seeded random test functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleKind {
    /// Independent uniform ±1 values.
    Rademacher,
    /// Independent uniform points on the unit circle.
    Unimodular,
    /// 0/1 values, each 1 with probability `p`.
    Indicator(f64),
    /// Rademacher, centered, then divided by `1 + |mean|`.
    MeanZeroRademacher,
    /// Unimodular, centered, then divided by `1 + |mean|`.
    MeanZeroUnimodular,
}

/// Seed for trial `t` of a run seeded with `seed` (SplitMix64 finalizer).
pub fn trial_seed(seed: u64, t: u64) -> u64 {
    let mut z = seed ^ t.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// `count` functions drawn from one ChaCha8 stream seeded by `seed`.
pub fn random_ensemble(
    group: &GroupTable,
    kind: EnsembleKind,
    seed: u64,
    count: usize,
) -> Result<Vec<GroupFunction>> {
    if let EnsembleKind::Indicator(p) = kind {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Precondition(format!("indicator density {p} outside [0, 1]")));
        }
    }
    let n = group.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sign = |rng: &mut ChaCha8Rng| {
        Complex64::new(if rng.gen::<bool>() { 1.0 } else { -1.0 }, 0.0)
    };
    let phase = |rng: &mut ChaCha8Rng| Complex64::from_polar(1.0, rng.gen_range(0.0..TAU));

    (0..count)
        .map(|_| {
            let values: Vec<Complex64> = match kind {
                EnsembleKind::Rademacher => (0..n).map(|_| sign(&mut rng)).collect(),
                EnsembleKind::Unimodular => (0..n).map(|_| phase(&mut rng)).collect(),
                EnsembleKind::Indicator(p) => (0..n)
                    .map(|_| Complex64::new(if rng.gen_bool(p) { 1.0 } else { 0.0 }, 0.0))
                    .collect(),
                EnsembleKind::MeanZeroRademacher => {
                    center((0..n).map(|_| sign(&mut rng)).collect())
                }
                EnsembleKind::MeanZeroUnimodular => {
                    center((0..n).map(|_| phase(&mut rng)).collect())
                }
            };
            GroupFunction::new(group, values)
        })
        .collect()
}

fn center(mut values: Vec<Complex64>) -> Vec<Complex64> {
    let m = values.iter().sum::<Complex64>() / values.len() as f64;
    let scale = 1.0 + m.norm();
    for v in values.iter_mut() {
        *v = (*v - m) / scale;
    }
    values
}
