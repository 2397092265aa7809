//! Two-action pooling decisions: production with two inputs, attacks on two
//! networks, and a merger vote in two companies.
//!
//! Each scenario has an `S`-strategy for every subset `S` of the ground set:
//! act jointly (one shared coin) at elements of `S` and separately (two
//! independent coins) elsewhere. The `*_payoff`/`*_outcomes`/`*_probability`
//! functions evaluate one strategy by enumerating the coin outcomes of the
//! model; the `*_table` functions compute all strategies at once through
//! [`convolve`].

use crate::convolution::convolve;
use crate::error::{Error, Result};
use crate::lattice::{
    for_each_coupled_pair, indicator, up_closure, CoinVector, Ground, MonotoneFamily,
    SetFunction, Subset,
};
use crate::scalar::Scalar;

/// Suppliers each holding `x_h` units of one input and `y_h` of another,
/// feeding a Cobb-Douglas technology `x^α y^β`.
#[derive(Clone, Debug)]
pub struct TwoInputProduction<T> {
    ground: Ground,
    x: Vec<f64>,
    y: Vec<f64>,
    alpha: f64,
    beta: f64,
    coins: CoinVector<T>,
    x_output: SetFunction<T>,
    y_output: SetFunction<T>,
}

impl<T: Scalar> TwoInputProduction<T> {
    pub fn new(
        ground: &Ground,
        x: Vec<f64>,
        y: Vec<f64>,
        alpha: f64,
        beta: f64,
        coins: CoinVector<T>,
    ) -> Result<Self> {
        coins.check_ground(ground)?;
        for (name, amounts) in [("x", &x), ("y", &y)] {
            if amounts.len() != ground.len() {
                return Err(Error::InvalidScenario(format!(
                    "{name} has {} amounts for {} suppliers",
                    amounts.len(),
                    ground.len()
                )));
            }
            if let Some(i) = amounts.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
                return Err(Error::InvalidScenario(format!(
                    "{name} amount of supplier `{}` must be a nonnegative number",
                    ground.label(i)
                )));
            }
        }
        for (name, e) in [("alpha", alpha), ("beta", beta)] {
            if !(e.is_finite() && e > 0.0) {
                return Err(Error::InvalidScenario(format!("{name} must be strictly positive")));
            }
        }
        let x_output = power_of_total(ground, &x, alpha);
        let y_output = power_of_total(ground, &y, beta);
        Ok(TwoInputProduction {
            ground: ground.clone(),
            x,
            y,
            alpha,
            beta,
            coins,
            x_output,
            y_output,
        })
    }

    pub fn ground(&self) -> &Ground {
        &self.ground
    }

    pub fn coins(&self) -> &CoinVector<T> {
        &self.coins
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn exponents(&self) -> (f64, f64) {
        (self.alpha, self.beta)
    }

    /// `T ↦ (Σ_{h∈T} x_h)^α`.
    pub fn x_factor(&self) -> &SetFunction<T> {
        &self.x_output
    }

    /// `T ↦ (Σ_{h∈T} y_h)^β`.
    pub fn y_factor(&self) -> &SetFunction<T> {
        &self.y_output
    }
}

// 0^a = 0 for a > 0: nothing delivered, nothing produced.
fn power_of_total<T: Scalar>(ground: &Ground, amounts: &[f64], exponent: f64) -> SetFunction<T> {
    SetFunction::from_fn(ground, |s| {
        let total: f64 = s.elements().map(|h| amounts[h]).sum();
        if total == 0.0 {
            T::zero()
        } else {
            T::from_float(total.powf(exponent))
        }
    })
}

/// Expected output when suppliers in `s` ship both inputs together.
pub fn production_payoff<T: Scalar>(sc: &TwoInputProduction<T>, s: Subset) -> T {
    let mut total = T::zero();
    for_each_coupled_pair(&sc.coins, s, |x_arrived, y_arrived, w| {
        total = total.clone() + w * sc.x_output[x_arrived].clone() * sc.y_output[y_arrived].clone();
    });
    total
}

pub fn production_table<T: Scalar>(sc: &TwoInputProduction<T>) -> Result<SetFunction<T>> {
    convolve(&sc.x_output, &sc.y_output, &sc.coins)
}

/// Two networks, each disabled when the destroyed hub sites contain one of its critical sets.
#[derive(Clone, Debug)]
pub struct MilitaryScenario<T> {
    ground: Ground,
    red: MonotoneFamily,
    blue: MonotoneFamily,
    coins: CoinVector<T>,
}

impl<T: Scalar> MilitaryScenario<T> {
    pub fn new(red: MonotoneFamily, blue: MonotoneFamily, coins: CoinVector<T>) -> Result<Self> {
        let ground = coins.ground().clone();
        if *red.ground() != ground || *blue.ground() != ground {
            return Err(Error::GroundMismatch);
        }
        Ok(MilitaryScenario {
            ground,
            red,
            blue,
            coins,
        })
    }

    pub fn ground(&self) -> &Ground {
        &self.ground
    }

    pub fn red(&self) -> &MonotoneFamily {
        &self.red
    }

    pub fn blue(&self) -> &MonotoneFamily {
        &self.blue
    }

    pub fn coins(&self) -> &CoinVector<T> {
        &self.coins
    }
}

/// Critical family of a network whose hubs sit at `hubs`: every set of
/// destroyed sites whose hub part contains one of `critical`.
pub fn network_family(ground: &Ground, hubs: Subset, critical: &[Subset]) -> Result<MonotoneFamily> {
    if let Some(c) = critical.iter().find(|c| !c.is_subset_of(hubs)) {
        return Err(Error::InvalidScenario(format!(
            "critical set {} contains sites without a hub",
            ground.describe(*c)
        )));
    }
    Ok(up_closure(ground, critical))
}

#[derive(Clone, Debug, PartialEq)]
pub struct MilitaryOutcome<T> {
    /// Probability that both networks are disabled.
    pub both: T,
    /// Probability that neither network is disabled.
    pub neither: T,
    /// Probability that exactly one network is disabled.
    pub exactly_one: T,
}

pub fn military_outcomes<T: Scalar>(sc: &MilitaryScenario<T>, s: Subset) -> MilitaryOutcome<T> {
    let mut both = T::zero();
    let mut neither = T::zero();
    let mut exactly_one = T::zero();
    for_each_coupled_pair(&sc.coins, s, |red_hit, blue_hit, w| {
        match (sc.red.contains(red_hit), sc.blue.contains(blue_hit)) {
            (true, true) => both = both.clone() + w,
            (false, false) => neither = neither.clone() + w,
            _ => exactly_one = exactly_one.clone() + w,
        }
    });
    MilitaryOutcome {
        both,
        neither,
        exactly_one,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MilitaryTables<T> {
    pub both: SetFunction<T>,
    pub neither: SetFunction<T>,
    pub exactly_one: SetFunction<T>,
}

/// `both = f⋆g`, `neither = (1-f)⋆(1-g)`, `exactly_one = 1 - both - neither`
/// with `f, g` the indicators of the two critical families.
pub fn military_tables<T: Scalar>(sc: &MilitaryScenario<T>) -> Result<MilitaryTables<T>> {
    let f: SetFunction<T> = indicator(&sc.red);
    let g: SetFunction<T> = indicator(&sc.blue);
    let both = convolve(&f, &g, &sc.coins)?;
    let neither = convolve(&f.one_minus(), &g.one_minus(), &sc.coins)?;
    let exactly_one = both.zip_with(&neither, |a, b| T::one() - a.clone() - b.clone())?;
    Ok(MilitaryTables {
        both,
        neither,
        exactly_one,
    })
}

/// Shareholders voting in two companies; the merger needs a winning coalition in both.
#[derive(Clone, Debug)]
pub struct MergerScenario<T> {
    ground: Ground,
    vote_a: SetFunction<T>,
    vote_b: SetFunction<T>,
    coins: CoinVector<T>,
}

impl<T: Scalar> MergerScenario<T> {
    pub fn new(vote_a: SetFunction<T>, vote_b: SetFunction<T>, coins: CoinVector<T>) -> Result<Self> {
        let ground = coins.ground().clone();
        for (name, f) in [("company A", &vote_a), ("company B", &vote_b)] {
            f.check_ground(&ground)?;
            validate_simple_game(name, f)?;
        }
        Ok(MergerScenario {
            ground,
            vote_a,
            vote_b,
            coins,
        })
    }

    pub fn ground(&self) -> &Ground {
        &self.ground
    }

    pub fn vote_a(&self) -> &SetFunction<T> {
        &self.vote_a
    }

    pub fn vote_b(&self) -> &SetFunction<T> {
        &self.vote_b
    }

    pub fn coins(&self) -> &CoinVector<T> {
        &self.coins
    }
}

fn validate_simple_game<T: Scalar>(name: &str, f: &SetFunction<T>) -> Result<()> {
    if !f.is_boolean() {
        return Err(Error::InvalidScenario(format!("{name} voting function must take values in {{0, 1}}")));
    }
    if !f.is_increasing() {
        return Err(Error::NotIncreasing(format!("{name} voting function")));
    }
    if !f[Subset::EMPTY].is_zero() {
        return Err(Error::InvalidScenario(format!("{name}: the empty coalition must be losing")));
    }
    if !f[f.ground().full()].is_one() {
        return Err(Error::InvalidScenario(format!("{name}: the grand coalition must be winning")));
    }
    Ok(())
}

/// Merger probability when shareholders in `s` receive one joint ballot.
pub fn merger_probability<T: Scalar>(sc: &MergerScenario<T>, s: Subset) -> T {
    let mut total = T::zero();
    for_each_coupled_pair(&sc.coins, s, |returned_a, returned_b, w| {
        if sc.vote_a[returned_a].is_one() && sc.vote_b[returned_b].is_one() {
            total = total.clone() + w;
        }
    });
    total
}

pub fn merger_table<T: Scalar>(sc: &MergerScenario<T>) -> Result<SetFunction<T>> {
    convolve(&sc.vote_a, &sc.vote_b, &sc.coins)
}

/// One vote per share: a coalition wins when its total weight reaches the quota.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedVotingSpec<T> {
    weights: Vec<T>,
    quota: T,
}

impl<T: Scalar> WeightedVotingSpec<T> {
    pub fn new(weights: Vec<T>, quota: T) -> Result<Self> {
        if weights.iter().any(|w| !(w.is_finite() && *w >= T::zero())) {
            return Err(Error::InvalidScenario("voting weights must be nonnegative".into()));
        }
        let total = weights.iter().cloned().fold(T::zero(), |a, b| a + b);
        if !(quota > T::zero() && quota <= total) {
            return Err(Error::InvalidScenario(format!(
                "quota {} must lie in (0, {}]",
                quota.render(),
                total.render()
            )));
        }
        Ok(WeightedVotingSpec { weights, quota })
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn quota(&self) -> &T {
        &self.quota
    }
}

pub fn weighted_voting<T: Scalar>(spec: &WeightedVotingSpec<T>, ground: &Ground) -> Result<SetFunction<T>> {
    if spec.weights.len() != ground.len() {
        return Err(Error::InvalidScenario(format!(
            "{} voting weights for {} shareholders",
            spec.weights.len(),
            ground.len()
        )));
    }
    Ok(SetFunction::from_fn(ground, |s| {
        let weight = s
            .elements()
            .fold(T::zero(), |acc, h| acc + spec.weights[h].clone());
        if weight >= spec.quota {
            T::one()
        } else {
            T::zero()
        }
    }))
}

/// Every strategy attaining the maximum of `table` (within tolerance in floating mode).
pub fn optimal_strategies<T: Scalar>(table: &SetFunction<T>) -> Vec<Subset> {
    let Some(best) = table
        .values()
        .iter()
        .fold(None::<&T>, |acc, v| match acc {
            Some(a) if a >= v => Some(a),
            _ => Some(v),
        })
    else {
        return Vec::new();
    };
    table
        .ground()
        .subsets()
        .filter(|s| T::at_least(&table[*s], best))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::GroundSet;
    use crate::scalar::Rational;

    fn q(n: i64, d: u64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn single_supplier() -> TwoInputProduction<Rational> {
        let g = GroundSet::numbered(1).unwrap();
        let p = CoinVector::uniform(&g, q(1, 2)).unwrap();
        TwoInputProduction::new(&g, vec![4.0], vec![9.0], 0.5, 0.5, p).unwrap()
    }

    #[test]
    fn single_supplier_production() {
        let sc = single_supplier();
        assert_eq!(production_payoff(&sc, Subset(1)), q(3, 1));
        assert_eq!(production_payoff(&sc, Subset::EMPTY), q(3, 2));
        let table = production_table(&sc).unwrap();
        assert_eq!(table.values(), &[q(3, 2), q(3, 1)]);
        assert_eq!(optimal_strategies(&table), vec![Subset(1)]);
    }

    #[test]
    fn certain_delivery_makes_production_flat() {
        let g = GroundSet::numbered(3).unwrap();
        let p = CoinVector::uniform(&g, q(1, 1)).unwrap();
        let sc = TwoInputProduction::new(&g, vec![1.0, 2.0, 0.5], vec![3.0, 0.0, 1.0], 0.3, 0.6, p).unwrap();
        let table = production_table(&sc).unwrap();
        assert!(table.values().iter().all(|v| *v == table[Subset::EMPTY]));
        assert_eq!(optimal_strategies(&table).len(), 8);
    }

    #[test]
    fn production_rejects_bad_parameters() {
        let g = GroundSet::numbered(1).unwrap();
        let p = CoinVector::uniform(&g, 0.5).unwrap();
        assert!(TwoInputProduction::new(&g, vec![1.0], vec![1.0], 0.0, 1.0, p.clone()).is_err());
        assert!(TwoInputProduction::new(&g, vec![-1.0], vec![1.0], 1.0, 1.0, p.clone()).is_err());
        assert!(TwoInputProduction::new(&g, vec![1.0, 2.0], vec![1.0], 1.0, 1.0, p).is_err());
    }

    fn contains_first(g: &Ground) -> MonotoneFamily {
        up_closure(g, &[Subset(1)])
    }

    #[test]
    fn military_single_site() {
        let g = GroundSet::numbered(1).unwrap();
        let p = CoinVector::uniform(&g, q(1, 2)).unwrap();
        let sc = MilitaryScenario::new(contains_first(&g), contains_first(&g), p).unwrap();

        let apart = military_outcomes(&sc, Subset::EMPTY);
        assert_eq!((apart.both, apart.neither, apart.exactly_one), (q(1, 4), q(1, 4), q(1, 2)));
        let joint = military_outcomes(&sc, Subset(1));
        assert_eq!((joint.both, joint.neither, joint.exactly_one), (q(1, 2), q(1, 2), q(0, 1)));

        let t = military_tables(&sc).unwrap();
        assert_eq!(t.both.values(), &[q(1, 4), q(1, 2)]);
        assert_eq!(t.neither.values(), &[q(1, 4), q(1, 2)]);
        assert_eq!(t.exactly_one.values(), &[q(1, 2), q(0, 1)]);
    }

    #[test]
    fn military_disjoint_networks_decouple() {
        let g = GroundSet::numbered(4).unwrap();
        let p = CoinVector::new(&g, vec![q(1, 3), q(1, 2), q(3, 4), q(1, 5)]).unwrap();
        let red = network_family(&g, Subset(0b0011), &[Subset(0b0001), Subset(0b0010)]).unwrap();
        let blue = network_family(&g, Subset(0b1100), &[Subset(0b1100)]).unwrap();
        let sc = MilitaryScenario::new(red, blue, p).unwrap();
        let both = military_tables(&sc).unwrap().both;
        assert!(both.values().iter().all(|v| *v == both[Subset::EMPTY]));
    }

    #[test]
    fn network_family_rejects_sets_outside_hubs() {
        let g = GroundSet::numbered(3).unwrap();
        assert!(network_family(&g, Subset(0b011), &[Subset(0b100)]).is_err());
    }

    #[test]
    fn merger_examples() {
        let g = GroundSet::numbered(2).unwrap();
        let nonempty = SetFunction::from_fn(&g, |s| if s.is_empty() { q(0, 1) } else { q(1, 1) });
        let p = CoinVector::uniform(&g, q(1, 2)).unwrap();
        let sc = MergerScenario::new(nonempty.clone(), nonempty, p).unwrap();
        assert_eq!(merger_probability(&sc, Subset::EMPTY), q(9, 16));
        assert_eq!(merger_probability(&sc, g.full()), q(3, 4));
        let table = merger_table(&sc).unwrap();
        assert_eq!(table[Subset::EMPTY], q(9, 16));
        assert_eq!(table[g.full()], q(3, 4));
    }

    #[test]
    fn merger_dictator() {
        let g = GroundSet::numbered(3).unwrap();
        let dictator = SetFunction::from_fn(&g, |s| if s.contains(1) { q(1, 1) } else { q(0, 1) });
        let p = CoinVector::new(&g, vec![q(1, 2), q(2, 7), q(1, 3)]).unwrap();
        let sc = MergerScenario::new(dictator.clone(), dictator, p).unwrap();
        assert_eq!(merger_probability(&sc, Subset::EMPTY), q(4, 49));
        assert_eq!(merger_probability(&sc, Subset(0b010)), q(2, 7));
    }

    #[test]
    fn merger_rejects_trivial_games() {
        let g = GroundSet::numbered(2).unwrap();
        let p = CoinVector::uniform(&g, 0.5).unwrap();
        let always = SetFunction::constant(&g, 1.0);
        let unanimity = SetFunction::from_fn(&g, |s| if s == g.full() { 1.0 } else { 0.0 });
        assert!(MergerScenario::new(always, unanimity.clone(), p.clone()).is_err());
        let half = unanimity.map(|v| v / 2.0);
        assert!(MergerScenario::new(half, unanimity.clone(), p.clone()).is_err());
        let first_decides = SetFunction::new(&g, vec![0.0, 1.0, 0.0, 1.0]).unwrap();
        assert!(MergerScenario::new(first_decides, unanimity, p).is_ok());

        let g3 = GroundSet::numbered(3).unwrap();
        let p3 = CoinVector::uniform(&g3, 0.5).unwrap();
        let mut table = vec![0.0; 8];
        table[0b001] = 1.0;
        table[0b111] = 1.0;
        let not_monotone = SetFunction::new(&g3, table).unwrap();
        let unanimity3 = SetFunction::from_fn(&g3, |s| if s == g3.full() { 1.0 } else { 0.0 });
        assert!(matches!(
            MergerScenario::new(not_monotone, unanimity3, p3),
            Err(Error::NotIncreasing(_))
        ));
    }

    #[test]
    fn weighted_voting_examples() {
        let g2 = GroundSet::numbered(2).unwrap();
        let any = weighted_voting(&WeightedVotingSpec::new(vec![1.0, 1.0], 1.0).unwrap(), &g2).unwrap();
        assert_eq!(any.values(), &[0.0, 1.0, 1.0, 1.0]);
        let all = weighted_voting(&WeightedVotingSpec::new(vec![1.0, 1.0], 2.0).unwrap(), &g2).unwrap();
        assert_eq!(all.values(), &[0.0, 0.0, 0.0, 1.0]);

        let g3 = GroundSet::numbered(3).unwrap();
        let f = weighted_voting(&WeightedVotingSpec::new(vec![2.0, 1.0, 1.0], 3.0).unwrap(), &g3).unwrap();
        let winning: Vec<Subset> = g3.subsets().filter(|s| f[*s] == 1.0).collect();
        assert_eq!(winning, vec![Subset(0b011), Subset(0b101), Subset(0b111)]);
        assert!(f.is_increasing());
    }

    #[test]
    fn weighted_voting_rejects_bad_quota() {
        assert!(WeightedVotingSpec::new(vec![1.0, 1.0], 0.0).is_err());
        assert!(WeightedVotingSpec::new(vec![1.0, 1.0], 2.5).is_err());
        assert!(WeightedVotingSpec::new(vec![-1.0, 3.0], 1.0).is_err());
        let g = GroundSet::numbered(3).unwrap();
        let spec = WeightedVotingSpec::new(vec![1.0, 1.0], 1.0).unwrap();
        assert!(weighted_voting(&spec, &g).is_err());
    }

    #[test]
    fn optimal_strategies_examples() {
        let g = GroundSet::numbered(2).unwrap();
        assert_eq!(optimal_strategies(&SetFunction::constant(&g, 1.0)).len(), 4);
        let strict = SetFunction::new(&g, vec![0.0, 1.0, 1.5, 2.0]).unwrap();
        assert_eq!(optimal_strategies(&strict), vec![g.full()]);
        let near_tie = SetFunction::new(&g, vec![0.0, 1.0, 2.0 - 1e-13, 2.0]).unwrap();
        assert_eq!(optimal_strategies(&near_tie), vec![Subset(0b10), g.full()]);
    }
}
