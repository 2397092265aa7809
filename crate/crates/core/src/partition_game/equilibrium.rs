use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::{coarser, enumerate_partitions, expected_payoff, expected_payoffs, GameSpec, PartitionStrategy, StrategyProfile};

/// Largest number of strategy profiles tabulated at once.
pub const MAX_PROFILES: usize = 1_000_000;

/// Expected payoffs of every supplier at every strategy profile.
///
/// Profiles are indexed in mixed radix, supplier 0 varying fastest.
#[derive(Clone, Debug)]
pub struct PayoffTable<T> {
    strategies: Vec<Vec<PartitionStrategy>>,
    strides: Vec<usize>,
    payoffs: Vec<Vec<T>>,
}

impl<T: Scalar> PayoffTable<T> {
    pub fn build(spec: &GameSpec<T>) -> Result<Self> {
        let n = spec.suppliers().len();
        let strategies = (0..n)
            .map(|h| enumerate_partitions(h, spec.supply(h)))
            .collect::<Result<Vec<_>>>()?;
        let mut strides = Vec::with_capacity(n);
        let mut count = 1usize;
        for s in &strategies {
            strides.push(count);
            count = count.saturating_mul(s.len());
        }
        if count > MAX_PROFILES {
            return Err(Error::TooLarge {
                what: "strategy profile count",
                size: count,
                cap: MAX_PROFILES,
            });
        }
        let mut table = PayoffTable {
            strategies,
            strides,
            payoffs: Vec::new(),
        };
        table.payoffs = (0..count)
            .into_par_iter()
            .map(|idx| expected_payoffs(spec, &table.profile(idx)))
            .collect::<Result<_>>()?;
        Ok(table)
    }

    pub fn len(&self) -> usize {
        self.payoffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.payoffs.is_empty()
    }

    pub fn strategies(&self, h: usize) -> &[PartitionStrategy] {
        &self.strategies[h]
    }

    fn coord(&self, idx: usize, h: usize) -> usize {
        idx / self.strides[h] % self.strategies[h].len()
    }

    fn with_coord(&self, idx: usize, h: usize, c: usize) -> usize {
        idx - self.coord(idx, h) * self.strides[h] + c * self.strides[h]
    }

    pub fn profile(&self, idx: usize) -> StrategyProfile {
        let strategies = (0..self.strategies.len())
            .map(|h| self.strategies[h][self.coord(idx, h)].clone())
            .collect();
        StrategyProfile { strategies }
    }

    pub fn index_of(&self, profile: &StrategyProfile) -> Option<usize> {
        if profile.strategies().len() != self.strategies.len() {
            return None;
        }
        profile.strategies().iter().enumerate().try_fold(0, |idx, (h, s)| {
            let c = self.strategies[h].iter().position(|t| t == s)?;
            Some(idx + c * self.strides[h])
        })
    }

    pub fn payoffs(&self, idx: usize) -> &[T] {
        &self.payoffs[idx]
    }

    pub fn payoff(&self, idx: usize, h: usize) -> &T {
        &self.payoffs[idx][h]
    }

    /// Own strategies of `h` attaining the best payoff against the rest of profile `idx`.
    pub fn best_replies(&self, idx: usize, h: usize) -> Vec<&PartitionStrategy> {
        let values: Vec<&T> = (0..self.strategies[h].len())
            .map(|c| self.payoff(self.with_coord(idx, h, c), h))
            .collect();
        let best = values
            .iter()
            .copied()
            .fold(values[0], |m, v| if v > m { v } else { m });
        values
            .iter()
            .enumerate()
            .filter(|(_, v)| T::at_least(v, best))
            .map(|(c, _)| &self.strategies[h][c])
            .collect()
    }

    pub fn is_nash(&self, idx: usize) -> bool {
        (0..self.strategies.len()).all(|h| {
            let current = self.payoff(idx, h);
            (0..self.strategies[h].len()).all(|c| T::at_least(current, self.payoff(self.with_coord(idx, h, c), h)))
        })
    }

    pub fn nash_equilibria(&self) -> Vec<StrategyProfile> {
        (0..self.len())
            .filter(|&idx| self.is_nash(idx))
            .map(|idx| self.profile(idx))
            .collect()
    }

    /// Checks, against every opponent profile, that each strategy of `h` pays
    /// at least as much as every strategy it is coarser than.
    pub fn dominance(&self, h: usize) -> DominanceCertificate<T> {
        let own = &self.strategies[h];
        let coarse = own
            .iter()
            .position(PartitionStrategy::is_coarse)
            .expect("the single-shipment strategy is always enumerated");
        let mut pairs = Vec::new();
        for (a, pa) in own.iter().enumerate() {
            for (b, pb) in own.iter().enumerate() {
                if a != b && coarser(pa, pb).expect("same owner and supply") {
                    pairs.push((a, b));
                }
            }
        }

        let mut cert = DominanceCertificate {
            player: h,
            opponent_profiles: 0,
            comparisons: 0,
            coarse_always_best: true,
            coarse_always_unique_best: true,
            counterexample: None,
        };
        for idx in (0..self.len()).filter(|&idx| self.coord(idx, h) == 0) {
            cert.opponent_profiles += 1;
            let value = |c: usize| self.payoff(self.with_coord(idx, h, c), h);
            for &(a, b) in &pairs {
                cert.comparisons += 1;
                if !T::at_least(value(a), value(b)) && cert.counterexample.is_none() {
                    cert.counterexample = Some(DominanceCounterexample {
                        profile: self.profile(self.with_coord(idx, h, a)),
                        coarser: own[a].clone(),
                        finer: own[b].clone(),
                        coarser_payoff: value(a).clone(),
                        finer_payoff: value(b).clone(),
                    });
                }
            }
            for c in (0..own.len()).filter(|&c| c != coarse) {
                if !T::at_least(value(coarse), value(c)) {
                    cert.coarse_always_best = false;
                }
                if T::at_least(value(c), value(coarse)) {
                    cert.coarse_always_unique_best = false;
                }
            }
        }
        cert.coarse_always_unique_best &= cert.coarse_always_best;
        cert
    }
}

#[derive(Clone, Debug)]
pub struct DominanceCounterexample<T> {
    /// The full profile with the coarser strategy in place.
    pub profile: StrategyProfile,
    pub coarser: PartitionStrategy,
    pub finer: PartitionStrategy,
    pub coarser_payoff: T,
    pub finer_payoff: T,
}

#[derive(Clone, Debug)]
pub struct DominanceCertificate<T> {
    pub player: usize,
    pub opponent_profiles: usize,
    pub comparisons: usize,
    pub coarse_always_best: bool,
    pub coarse_always_unique_best: bool,
    pub counterexample: Option<DominanceCounterexample<T>>,
}

impl<T> DominanceCertificate<T> {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

pub fn check_dominance<T: Scalar>(spec: &GameSpec<T>, h: usize) -> Result<DominanceCertificate<T>> {
    if h >= spec.suppliers().len() {
        return Err(Error::InvalidProfile(format!("supplier index {h} out of range")));
    }
    Ok(PayoffTable::build(spec)?.dominance(h))
}

pub fn find_nash<T: Scalar>(spec: &GameSpec<T>) -> Result<Vec<StrategyProfile>> {
    Ok(PayoffTable::build(spec)?.nash_equilibria())
}

/// Strategies of `h` maximizing its payoff with the other suppliers held at `profile`.
pub fn best_replies<T: Scalar>(
    spec: &GameSpec<T>,
    profile: &StrategyProfile,
    h: usize,
) -> Result<Vec<PartitionStrategy>> {
    if h >= spec.suppliers().len() {
        return Err(Error::InvalidProfile(format!("supplier index {h} out of range")));
    }
    let own = enumerate_partitions(h, spec.supply(h))?;
    let values = own
        .iter()
        .map(|s| expected_payoff(spec, &profile.with(s.clone()), h))
        .collect::<Result<Vec<T>>>()?;
    let best = values
        .iter()
        .fold(&values[0], |m, v| if v > m { v } else { m })
        .clone();
    Ok(own
        .into_iter()
        .zip(&values)
        .filter(|(_, v)| T::at_least(v, &best))
        .map(|(s, _)| s)
        .collect())
}

/// Multiplies supplier `h`'s payoff by `kappa[h] > 0`.
pub fn scaled_spec<T: Scalar>(spec: &GameSpec<T>, kappa: &[T]) -> Result<GameSpec<T>> {
    if kappa.len() != spec.suppliers().len() {
        return Err(Error::InvalidScenario(format!(
            "{} scale factors for {} suppliers",
            kappa.len(),
            spec.suppliers().len()
        )));
    }
    if let Some(h) = kappa.iter().position(|k| *k <= T::zero() || !k.is_finite()) {
        return Err(Error::NonPositiveScale(spec.suppliers().label(h).to_string()));
    }
    let mut out = spec.clone();
    for (s, k) in out.scale.iter_mut().zip(kappa) {
        *s = s.clone() * k.clone();
    }
    Ok(out)
}
