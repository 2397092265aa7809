//! Seeded generators of random monotone structures, used by property sweeps.
//!
//! Numbers are drawn on coarse dyadic grids so the same draw is cheap to
//! represent in both numeric backends.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::lattice::{up_closure, CoinVector, Ground, MonotoneFamily, SetFunction, Subset};
use crate::scalar::Scalar;

/// Weights are multiples of `1/WEIGHT_DENOMINATOR` in `[0, MAX_WEIGHT]`.
pub const WEIGHT_DENOMINATOR: u64 = 16;
pub const MAX_WEIGHT: u64 = 10;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `f(S) = Σ_{T ⊆ S} w_T` for `weight_count` random nonnegative weights on random subsets `T`.
pub fn random_increasing<T: Scalar>(seed: u64, ground: &Ground, weight_count: usize) -> SetFunction<T> {
    random_increasing_with(&mut rng_from_seed(seed), ground, weight_count)
}

pub fn random_increasing_with<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    ground: &Ground,
    weight_count: usize,
) -> SetFunction<T> {
    let size = ground.power_set_size() as u32;
    let mut moebius = vec![0u64; size as usize];
    for _ in 0..weight_count {
        let t = rng.gen_range(0..size);
        moebius[t as usize] += rng.gen_range(0..=MAX_WEIGHT * WEIGHT_DENOMINATOR);
    }
    from_moebius(ground, &moebius)
}

/// Like [`random_increasing_with`] but every singleton carries a positive
/// weight, which makes the result strictly increasing.
pub fn random_strictly_increasing_with<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    ground: &Ground,
    weight_count: usize,
) -> SetFunction<T> {
    let size = ground.power_set_size() as u32;
    let mut moebius = vec![0u64; size as usize];
    for i in 0..ground.len() {
        moebius[1 << i] = rng.gen_range(1..=MAX_WEIGHT * WEIGHT_DENOMINATOR);
    }
    for _ in 0..weight_count {
        let t = rng.gen_range(0..size);
        moebius[t as usize] += rng.gen_range(0..=MAX_WEIGHT * WEIGHT_DENOMINATOR);
    }
    from_moebius(ground, &moebius)
}

/// Sums integer weights over subsets (zeta transform) and rescales by the grid.
fn from_moebius<T: Scalar>(ground: &Ground, weights: &[u64]) -> SetFunction<T> {
    let mut table = weights.to_vec();
    for h in 0..ground.len() {
        for s in ground.subsets() {
            if s.contains(h) {
                table[s.index()] += table[s.without(h).index()];
            }
        }
    }
    SetFunction::from_fn(ground, |s| {
        T::from_ratio(table[s.index()] as i64, WEIGHT_DENOMINATOR)
    })
}

/// Random increasing 0/1 function: indicator of the up-closure of random seeds.
pub fn random_monotone_family<R: Rng + ?Sized>(
    rng: &mut R,
    ground: &Ground,
    seed_count: usize,
) -> MonotoneFamily {
    let size = ground.power_set_size() as u32;
    let seeds: Vec<Subset> = (0..seed_count).map(|_| Subset(rng.gen_range(0..size))).collect();
    up_closure(ground, &seeds)
}

/// Independent probabilities drawn uniformly from `{0, 1/d, ..., 1}`.
pub fn random_grid_coins<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    ground: &Ground,
    denominator: u64,
) -> CoinVector<T> {
    let p = (0..ground.len())
        .map(|_| T::from_ratio(rng.gen_range(0..=denominator) as i64, denominator))
        .collect();
    CoinVector::new(ground, p).expect("grid values lie in [0, 1]")
}

/// Independent probabilities drawn uniformly from `[0, 1)`.
pub fn random_uniform_coins<T: Scalar, R: Rng + ?Sized>(rng: &mut R, ground: &Ground) -> CoinVector<T> {
    let p = (0..ground.len()).map(|_| T::from_float(rng.gen::<f64>())).collect();
    CoinVector::new(ground, p).expect("uniform draws lie in [0, 1)")
}
