//! Seeded sampling estimates of payoffs and convolution values.
//!
//! Randomness comes from ChaCha8. A run with seed `s` is split into chunks of
//! [`CHUNK`] samples; chunk `c` draws from `ChaCha8Rng::seed_from_u64(s)` on
//! stream `c`. Chunks run in parallel and their running moments are merged
//! in chunk order, so a report depends only on `(seed, samples)`.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::convolution::MAX_CONVOLVE;
use crate::error::{Error, Result};
use crate::lattice::{CoinVector, SetFunction, Subset};
use crate::partition_game::{GameSpec, StrategyProfile, SuccessTuple};
use crate::scalar::Scalar;

pub const CHUNK: u64 = 1 << 14;
pub const MIN_SAMPLES: u64 = 2;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub mean: f64,
    /// Sample standard deviation (unbiased variance) over `sqrt(samples)`.
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

impl EstimateReport {
    /// `|mean - exact| <= k * stderr`.
    pub fn agrees_with(&self, exact: f64, k: f64) -> bool {
        (self.mean - exact).abs() <= k * self.stderr
    }
}

/// Generator for chunk `chunk` of a run seeded with `seed`.
pub fn substream(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Welford running moments.
#[derive(Clone, Copy, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        Moments {
            n,
            mean: self.mean + d * other.n as f64 / n as f64,
            m2: self.m2 + other.m2 + d * d * (self.n as f64 * other.n as f64 / n as f64),
        }
    }
}

fn estimate(samples: u64, seed: u64, draw: impl Fn(&mut ChaCha8Rng) -> f64 + Sync) -> Result<EstimateReport> {
    if samples < MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            min: MIN_SAMPLES,
            got: samples,
        });
    }
    let chunks = samples.div_ceil(CHUNK);
    let parts: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = substream(seed, c);
            let mut m = Moments::default();
            for _ in 0..CHUNK.min(samples - c * CHUNK) {
                m.push(draw(&mut rng));
            }
            m
        })
        .collect();
    let total = parts.into_iter().fold(Moments::default(), Moments::merge);
    let variance = (total.m2 / (total.n - 1) as f64).max(0.0);
    Ok(EstimateReport {
        mean: total.mean,
        stderr: (variance / total.n as f64).sqrt(),
        samples,
        seed,
    })
}

/// Bernoulli draw comparing a raw 64-bit word against `p · 2^64`.
#[derive(Clone, Copy)]
struct Coin {
    threshold: u64,
    certain: bool,
}

impl Coin {
    fn new(p: f64) -> Coin {
        Coin {
            threshold: (p * 18_446_744_073_709_551_616.0) as u64,
            certain: p >= 1.0,
        }
    }

    fn toss<R: RngCore + ?Sized>(self, rng: &mut R) -> bool {
        self.certain || rng.next_u64() < self.threshold
    }
}

struct FloatShipments {
    ships: Vec<(usize, Subset, Coin)>,
    commodities: usize,
}

impl FloatShipments {
    fn new<T: Scalar>(spec: &GameSpec<T>, profile: &StrategyProfile) -> Result<Self> {
        let profile = StrategyProfile::new(spec, profile.strategies().to_vec())?;
        let ships = profile
            .strategies()
            .iter()
            .enumerate()
            .flat_map(|(h, s)| {
                let coin = Coin::new(spec.coins().prob(h).to_float());
                s.blocks().iter().map(move |&b| (h, b, coin))
            })
            .collect();
        Ok(FloatShipments {
            ships,
            commodities: spec.commodities().len(),
        })
    }

    fn draw_into<R: RngCore + ?Sized>(&self, rng: &mut R, tuple: &mut [Subset]) {
        tuple.fill(Subset::EMPTY);
        for &(h, block, coin) in &self.ships {
            if coin.toss(rng) {
                for k in block.elements() {
                    tuple[k] = tuple[k].with(h);
                }
            }
        }
    }
}

/// One joint draw of every shipment of `profile`.
pub fn sample_success<T: Scalar, R: Rng + ?Sized>(
    spec: &GameSpec<T>,
    profile: &StrategyProfile,
    rng: &mut R,
) -> Result<SuccessTuple> {
    let ships = FloatShipments::new(spec, profile)?;
    let mut tuple = vec![Subset::EMPTY; ships.commodities];
    ships.draw_into(rng, &mut tuple);
    Ok(SuccessTuple::new(tuple))
}

/// Estimates supplier `h`'s expected payoff, scale factor included.
pub fn estimate_payoff<T: Scalar>(
    spec: &GameSpec<T>,
    profile: &StrategyProfile,
    h: usize,
    samples: u64,
    seed: u64,
) -> Result<EstimateReport> {
    if h >= spec.suppliers().len() {
        return Err(Error::InvalidProfile(format!("supplier index {h} out of range")));
    }
    let ships = FloatShipments::new(spec, profile)?;
    let tables: Vec<Vec<f64>> = (0..ships.commodities)
        .map(|k| spec.payoff_function(h, k).values().iter().map(T::to_float).collect())
        .collect();
    let scale = spec.scale(h).to_float();
    estimate(samples, seed, |rng| {
        let mut tuple = [Subset::EMPTY; crate::partition_game::MAX_COMMODITIES];
        let tuple = &mut tuple[..ships.commodities];
        ships.draw_into(rng, tuple);
        tuple
            .iter()
            .zip(&tables)
            .fold(scale, |acc, (s, t)| acc * t[s.index()])
    })
}

/// Estimates `(f⋆g)(s)` by drawing `(S₁, S₂)` from the coupled pair measure.
pub fn estimate_convolution<T: Scalar>(
    f: &SetFunction<T>,
    g: &SetFunction<T>,
    p: &CoinVector<T>,
    s: Subset,
    samples: u64,
    seed: u64,
) -> Result<EstimateReport> {
    let ground = f.ground();
    g.check_ground(ground)?;
    p.check_ground(ground)?;
    if ground.len() > MAX_CONVOLVE {
        return Err(Error::TooLarge {
            what: "ground set",
            size: ground.len(),
            cap: MAX_CONVOLVE,
        });
    }
    if !s.is_subset_of(ground.full()) {
        return Err(Error::InvalidScenario(format!("{s:?} is not a subset of the ground set")));
    }
    let ft: Vec<f64> = f.values().iter().map(T::to_float).collect();
    let gt: Vec<f64> = g.values().iter().map(T::to_float).collect();
    let coins: Vec<Coin> = p.probabilities().iter().map(|x| Coin::new(x.to_float())).collect();
    estimate(samples, seed, |rng| {
        let (mut s1, mut s2) = (0u32, 0u32);
        for (i, coin) in coins.iter().enumerate() {
            let bit = 1u32 << i;
            if s.contains(i) {
                if coin.toss(rng) {
                    s1 |= bit;
                    s2 |= bit;
                }
            } else {
                if coin.toss(rng) {
                    s1 |= bit;
                }
                if coin.toss(rng) {
                    s2 |= bit;
                }
            }
        }
        ft[s1 as usize] * gt[s2 as usize]
    })
}
