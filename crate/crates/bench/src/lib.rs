//! Shared fixtures for the criterion benchmarks.

use pooling_core::lattice::{CoinVector, GroundSet, SetFunction};
use pooling_core::partition_game::GameSpec;
use pooling_core::random::{random_grid_coins, random_increasing_with, random_strictly_increasing_with, rng_from_seed};
use pooling_core::scalar::Scalar;
use pooling_core::Subset;

/// Two random increasing functions and grid coins on `n` numbered elements.
pub fn convolution_inputs<T: Scalar>(n: usize, seed: u64) -> (SetFunction<T>, SetFunction<T>, CoinVector<T>) {
    let ground = GroundSet::numbered(n).expect("benchmark sizes are within the cap");
    let mut rng = rng_from_seed(seed);
    let f = random_increasing_with(&mut rng, &ground, 2 * n);
    let g = random_increasing_with(&mut rng, &ground, 2 * n);
    let p = random_grid_coins(&mut rng, &ground, 4);
    (f, g, p)
}

/// Every supplier holds every commodity; strictly increasing payoffs.
pub fn full_supply_game<T: Scalar>(commodities: usize, suppliers: usize, seed: u64) -> GameSpec<T> {
    let k = GroundSet::numbered(commodities).expect("benchmark sizes are within the cap");
    let h = GroundSet::numbered(suppliers).expect("benchmark sizes are within the cap");
    let mut rng = rng_from_seed(seed);
    let coins = random_grid_coins(&mut rng, &h, 4);
    let payoffs = (0..suppliers)
        .map(|_| (0..commodities).map(|_| random_strictly_increasing_with(&mut rng, &h, 2)).collect())
        .collect();
    GameSpec::new(&k, vec![Subset::full(commodities); suppliers], coins, payoffs).expect("fixture game is valid")
}
