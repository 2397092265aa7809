//! Multi-commodity shipping game.
//!
//! Supplier `h` holds the commodities `K^h` and chooses a partition of them
//! into shipments; each shipment arrives independently with probability
//! `p_h`. The success tuple records, for every commodity `k`, the set `S_k`
//! of suppliers whose shipment containing `k` arrived. Supplier `h` is paid
//! `κ^h ∏_k F_k^h(S_k)` with every `F_k^h` nonnegative and increasing.

mod equilibrium;
mod partition;
mod payoff;

pub use equilibrium::{
    best_replies, check_dominance, find_nash, scaled_spec, DominanceCertificate,
    DominanceCounterexample, PayoffTable, MAX_PROFILES,
};
pub use partition::{
    bell_number, coarse_strategy, coarser, enumerate_partitions, PartitionStrategy, BELL,
    MAX_PARTITIONED,
};
pub use payoff::{
    conditional_payoffs, ex_post_sweep, expected_output, expected_payoff, expected_payoffs,
    success_distribution, BlockOutcomes, ConditionalPayoffs, ExPostCounterexample, ExPostReport,
    MAX_BLOCKS,
};

use crate::error::{Error, Result};
use crate::lattice::{CoinVector, Ground, SetFunction, Subset};
use crate::scalar::Scalar;

pub const MAX_COMMODITIES: usize = 8;
pub const MAX_SUPPLIERS: usize = 6;

#[derive(Clone, Debug)]
pub struct GameSpec<T> {
    commodities: Ground,
    suppliers: Ground,
    supply: Vec<Subset>,
    coins: CoinVector<T>,
    /// `payoffs[h][k]` is `F_k^h`, a function of the subset `S_k` of suppliers.
    payoffs: Vec<Vec<SetFunction<T>>>,
    scale: Vec<T>,
    symmetric: bool,
}

impl<T: Scalar> GameSpec<T> {
    /// `supply[h]` is `K^h` as a subset of `commodities`; `coins` is indexed by supplier.
    pub fn new(
        commodities: &Ground,
        supply: Vec<Subset>,
        coins: CoinVector<T>,
        payoffs: Vec<Vec<SetFunction<T>>>,
    ) -> Result<Self> {
        let suppliers = coins.ground().clone();
        if commodities.len() > MAX_COMMODITIES {
            return Err(Error::TooLarge {
                what: "commodity set",
                size: commodities.len(),
                cap: MAX_COMMODITIES,
            });
        }
        if suppliers.len() > MAX_SUPPLIERS {
            return Err(Error::TooLarge {
                what: "supplier set",
                size: suppliers.len(),
                cap: MAX_SUPPLIERS,
            });
        }
        if suppliers.is_empty() {
            return Err(Error::InvalidScenario("a game needs at least one supplier".into()));
        }
        if supply.len() != suppliers.len() {
            return Err(Error::InvalidScenario(format!(
                "{} supply sets for {} suppliers",
                supply.len(),
                suppliers.len()
            )));
        }
        if let Some(h) = supply.iter().position(|s| !s.is_subset_of(commodities.full())) {
            return Err(Error::InvalidScenario(format!(
                "supply set of `{}` names an unknown commodity",
                suppliers.label(h)
            )));
        }
        if payoffs.len() != suppliers.len() {
            return Err(Error::InvalidScenario(format!(
                "payoff functions given for {} suppliers, expected {}",
                payoffs.len(),
                suppliers.len()
            )));
        }
        for (h, row) in payoffs.iter().enumerate() {
            if row.len() != commodities.len() {
                return Err(Error::InvalidScenario(format!(
                    "supplier `{}` has {} payoff functions for {} commodities",
                    suppliers.label(h),
                    row.len(),
                    commodities.len()
                )));
            }
            for (k, f) in row.iter().enumerate() {
                f.check_ground(&suppliers)?;
                let name = || format!("payoff of `{}` for commodity `{}`", suppliers.label(h), commodities.label(k));
                if !f.is_nonnegative() {
                    return Err(Error::Negative(name()));
                }
                if !f.is_increasing() {
                    return Err(Error::NotIncreasing(name()));
                }
            }
        }
        let symmetric = payoffs.windows(2).all(|w| w[0] == w[1]);
        Ok(GameSpec {
            commodities: commodities.clone(),
            scale: vec![T::one(); suppliers.len()],
            suppliers,
            supply,
            coins,
            payoffs,
            symmetric,
        })
    }

    /// Every supplier is paid by the same functions `F_k`.
    pub fn symmetric(
        commodities: &Ground,
        supply: Vec<Subset>,
        coins: CoinVector<T>,
        per_commodity: Vec<SetFunction<T>>,
    ) -> Result<Self> {
        let n = coins.ground().len();
        Self::new(commodities, supply, coins, vec![per_commodity; n])
    }

    pub fn commodities(&self) -> &Ground {
        &self.commodities
    }

    pub fn suppliers(&self) -> &Ground {
        &self.suppliers
    }

    pub fn supply(&self, h: usize) -> Subset {
        self.supply[h]
    }

    pub fn coins(&self) -> &CoinVector<T> {
        &self.coins
    }

    pub fn payoff_function(&self, h: usize, k: usize) -> &SetFunction<T> {
        &self.payoffs[h][k]
    }

    pub fn scale(&self, h: usize) -> &T {
        &self.scale[h]
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Strictly increasing payoffs for every supplier and commodity.
    pub fn is_strict(&self) -> bool {
        self.payoffs.iter().flatten().all(|f| f.is_strictly_increasing())
    }

    pub fn describe_commodities(&self, s: Subset) -> String {
        self.commodities.describe(s)
    }

    /// `scale_h · ∏_k F_k^h(S_k)`.
    pub(crate) fn realized_payoff(&self, h: usize, tuple: &[Subset]) -> T {
        tuple
            .iter()
            .zip(&self.payoffs[h])
            .fold(self.scale[h].clone(), |acc, (s, f)| acc * f[*s].clone())
    }
}

/// One partition strategy per supplier.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StrategyProfile {
    strategies: Vec<PartitionStrategy>,
}

impl StrategyProfile {
    pub fn new<T: Scalar>(spec: &GameSpec<T>, strategies: Vec<PartitionStrategy>) -> Result<Self> {
        if strategies.len() != spec.suppliers.len() {
            return Err(Error::InvalidProfile(format!(
                "{} strategies for {} suppliers",
                strategies.len(),
                spec.suppliers.len()
            )));
        }
        for (h, s) in strategies.iter().enumerate() {
            if s.owner() != h {
                return Err(Error::InvalidProfile(format!(
                    "strategy at position {h} belongs to supplier {}",
                    s.owner()
                )));
            }
            if s.support() != spec.supply[h] {
                return Err(Error::InvalidProfile(format!(
                    "strategy of `{}` partitions {} but the supplier holds {}",
                    spec.suppliers.label(h),
                    spec.describe_commodities(s.support()),
                    spec.describe_commodities(spec.supply[h])
                )));
            }
        }
        Ok(StrategyProfile { strategies })
    }

    /// Every supplier ships everything in one shipment.
    pub fn coarse<T: Scalar>(spec: &GameSpec<T>) -> Self {
        StrategyProfile {
            strategies: (0..spec.suppliers.len())
                .map(|h| coarse_strategy(h, spec.supply[h]))
                .collect(),
        }
    }

    pub fn strategies(&self) -> &[PartitionStrategy] {
        &self.strategies
    }

    pub fn strategy(&self, h: usize) -> &PartitionStrategy {
        &self.strategies[h]
    }

    /// The same profile with supplier `h` switched to `strategy`.
    pub fn with(&self, strategy: PartitionStrategy) -> Self {
        let mut strategies = self.strategies.clone();
        let h = strategy.owner();
        strategies[h] = strategy;
        StrategyProfile { strategies }
    }

    pub fn total_blocks(&self) -> usize {
        self.strategies.iter().map(|s| s.blocks().len()).sum()
    }

    pub fn is_coarse(&self) -> bool {
        self.strategies.iter().all(PartitionStrategy::is_coarse)
    }
}

/// `S_k` for every commodity `k`, each a subset of the suppliers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SuccessTuple {
    sets: Vec<Subset>,
}

impl SuccessTuple {
    pub fn new(sets: Vec<Subset>) -> Self {
        SuccessTuple { sets }
    }

    pub fn sets(&self) -> &[Subset] {
        &self.sets
    }

    pub fn get(&self, k: usize) -> Subset {
        self.sets[k]
    }

    /// `h ∈ S_k` only when `k ∈ K^h`.
    pub fn is_consistent_with<T: Scalar>(&self, spec: &GameSpec<T>) -> bool {
        self.sets.len() == spec.commodities.len()
            && self
                .sets
                .iter()
                .enumerate()
                .all(|(k, s)| s.elements().all(|h| spec.supply[h].contains(k)))
    }
}
