use crate::error::{Error, Result};
use crate::lattice::Subset;
use crate::scalar::{complement, Scalar};

use super::{GameSpec, StrategyProfile, SuccessTuple};

/// Largest total number of shipments whose joint outcomes are enumerated.
pub const MAX_BLOCKS: usize = 22;

/// `outcomes[h][b]` is whether shipment `b` of supplier `h` arrived; `None` marks a free shipment.
pub type BlockOutcomes = Vec<Vec<Option<bool>>>;

struct Shipment<T> {
    owner: usize,
    block: Subset,
    arrive: T,
    lost: T,
}

fn check_profile<T: Scalar>(spec: &GameSpec<T>, profile: &StrategyProfile) -> Result<()> {
    StrategyProfile::new(spec, profile.strategies().to_vec()).map(|_| ())
}

fn shipments<T: Scalar>(spec: &GameSpec<T>, profile: &StrategyProfile) -> Result<Vec<Shipment<T>>> {
    check_profile(spec, profile)?;
    let total = profile.total_blocks();
    if total > MAX_BLOCKS {
        return Err(Error::TooLarge {
            what: "shipment count",
            size: total,
            cap: MAX_BLOCKS,
        });
    }
    let mut out = Vec::with_capacity(total);
    for (h, s) in profile.strategies().iter().enumerate() {
        let p = spec.coins().prob(h);
        for &block in s.blocks() {
            out.push(Shipment {
                owner: h,
                block,
                arrive: p.clone(),
                lost: complement(p),
            });
        }
    }
    Ok(out)
}

/// Depth-first over shipment outcomes, skipping zero-probability branches.
fn walk<T: Scalar>(
    ships: &[Shipment<T>],
    tuple: &mut [Subset],
    prob: T,
    visit: &mut impl FnMut(&[Subset], &T),
) {
    let Some((first, rest)) = ships.split_first() else {
        visit(tuple, &prob);
        return;
    };
    if !first.lost.is_zero() {
        walk(rest, tuple, prob.clone() * first.lost.clone(), visit);
    }
    if !first.arrive.is_zero() {
        for k in first.block.elements() {
            tuple[k] = tuple[k].with(first.owner);
        }
        walk(rest, tuple, prob * first.arrive.clone(), visit);
        for k in first.block.elements() {
            tuple[k] = tuple[k].without(first.owner);
        }
    }
}

fn for_each_outcome<T: Scalar>(
    spec: &GameSpec<T>,
    profile: &StrategyProfile,
    mut visit: impl FnMut(&[Subset], &T),
) -> Result<()> {
    let ships = shipments(spec, profile)?;
    let mut tuple = vec![Subset::EMPTY; spec.commodities().len()];
    walk(&ships, &mut tuple, T::one(), &mut visit);
    Ok(())
}

/// Success tuples with positive probability, with their probabilities.
pub fn success_distribution<T: Scalar>(
    spec: &GameSpec<T>,
    profile: &StrategyProfile,
) -> Result<Vec<(SuccessTuple, T)>> {
    let mut out = Vec::new();
    for_each_outcome(spec, profile, |tuple, prob| {
        out.push((SuccessTuple::new(tuple.to_vec()), prob.clone()));
    })?;
    Ok(out)
}

pub fn expected_payoffs<T: Scalar>(spec: &GameSpec<T>, profile: &StrategyProfile) -> Result<Vec<T>> {
    let n = spec.suppliers().len();
    let mut acc = vec![T::zero(); n];
    for_each_outcome(spec, profile, |tuple, prob| {
        for (h, a) in acc.iter_mut().enumerate() {
            *a = a.clone() + prob.clone() * spec.realized_payoff(h, tuple);
        }
    })?;
    Ok(acc)
}

pub fn expected_payoff<T: Scalar>(spec: &GameSpec<T>, profile: &StrategyProfile, h: usize) -> Result<T> {
    check_supplier(spec, h)?;
    let mut acc = T::zero();
    for_each_outcome(spec, profile, |tuple, prob| {
        acc = acc.clone() + prob.clone() * spec.realized_payoff(h, tuple);
    })?;
    Ok(acc)
}

/// `E ∏_k F_k(S_k)` for a symmetric game, ignoring per-supplier scale factors.
pub fn expected_output<T: Scalar>(spec: &GameSpec<T>, profile: &StrategyProfile) -> Result<T> {
    if !spec.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let mut acc = T::zero();
    for_each_outcome(spec, profile, |tuple, prob| {
        let out = tuple
            .iter()
            .enumerate()
            .fold(T::one(), |v, (k, s)| v * spec.payoff_function(0, k)[*s].clone());
        acc = acc.clone() + prob.clone() * out;
    })?;
    Ok(acc)
}

fn check_supplier<T: Scalar>(spec: &GameSpec<T>, h: usize) -> Result<()> {
    if h >= spec.suppliers().len() {
        return Err(Error::InvalidProfile(format!(
            "supplier index {h} out of range for {} suppliers",
            spec.suppliers().len()
        )));
    }
    Ok(())
}

/// Payoff of one supplier given every shipment outcome except two of its own,
/// shipped separately or together.
///
/// `a0, a1` are `∏_{k∈K_i} F_k^h(S_k)` without and with `h` in every `S_k`,
/// `b0, b1` the same over `K_j`, and `c` the scale factor times the product
/// over the remaining commodities.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionalPayoffs<T> {
    pub p: T,
    pub separate: T,
    pub merged: T,
    pub a0: T,
    pub a1: T,
    pub b0: T,
    pub b1: T,
    pub c: T,
}

impl<T: Scalar> ConditionalPayoffs<T> {
    pub fn gap(&self) -> T {
        self.merged.clone() - self.separate.clone()
    }

    /// `p(1-p)(a1-a0)(b1-b0)c`.
    pub fn predicted_gap(&self) -> T {
        self.p.clone()
            * complement(&self.p)
            * (self.a1.clone() - self.a0.clone())
            * (self.b1.clone() - self.b0.clone())
            * self.c.clone()
    }

    pub fn merging_helps(&self) -> bool {
        T::at_least(&self.merged, &self.separate)
    }

    pub fn identity_holds(&self) -> bool {
        T::approx_eq(&self.gap(), &self.predicted_gap())
    }
}

pub fn conditional_payoffs<T: Scalar>(
    spec: &GameSpec<T>,
    profile: &StrategyProfile,
    h: usize,
    i: usize,
    j: usize,
    outcomes: &BlockOutcomes,
) -> Result<ConditionalPayoffs<T>> {
    check_profile(spec, profile)?;
    check_supplier(spec, h)?;
    let own = profile.strategy(h).blocks();
    if i == j || i >= own.len() || j >= own.len() {
        return Err(Error::InvalidConditioning(format!(
            "supplier `{}` has {} shipments, cannot free shipments {i} and {j}",
            spec.suppliers().label(h),
            own.len()
        )));
    }
    if outcomes.len() != profile.strategies().len() {
        return Err(Error::InvalidConditioning(format!(
            "outcomes given for {} suppliers, expected {}",
            outcomes.len(),
            profile.strategies().len()
        )));
    }
    let mut base = vec![Subset::EMPTY; spec.commodities().len()];
    for (owner, (row, strategy)) in outcomes.iter().zip(profile.strategies()).enumerate() {
        if row.len() != strategy.blocks().len() {
            return Err(Error::InvalidConditioning(format!(
                "supplier `{}` has {} shipments but {} outcomes were given",
                spec.suppliers().label(owner),
                strategy.blocks().len(),
                row.len()
            )));
        }
        for (b, (outcome, block)) in row.iter().zip(strategy.blocks()).enumerate() {
            let free = owner == h && (b == i || b == j);
            match (free, outcome) {
                (true, None) => {}
                (false, Some(arrived)) => {
                    if *arrived {
                        for k in block.elements() {
                            base[k] = base[k].with(owner);
                        }
                    }
                }
                (true, Some(_)) => {
                    return Err(Error::InvalidConditioning(format!("shipment {b} of the deviating supplier must be free")))
                }
                (false, None) => {
                    return Err(Error::InvalidConditioning(format!(
                        "shipment {b} of `{}` has no outcome",
                        spec.suppliers().label(owner)
                    )))
                }
            }
        }
    }

    let (ki, kj) = (own[i], own[j]);
    let realized = |xi: bool, xj: bool| {
        let mut tuple = base.clone();
        for (block, arrived) in [(ki, xi), (kj, xj)] {
            if arrived {
                for k in block.elements() {
                    tuple[k] = tuple[k].with(h);
                }
            }
        }
        spec.realized_payoff(h, &tuple)
    };
    let block_product = |block: Subset, arrived: bool| {
        block.elements().fold(T::one(), |acc, k| {
            let s = if arrived { base[k].with(h) } else { base[k] };
            acc * spec.payoff_function(h, k)[s].clone()
        })
    };
    let rest = spec.commodities().full().difference(ki.union(kj));
    let c = rest
        .elements()
        .fold(spec.scale(h).clone(), |acc, k| acc * spec.payoff_function(h, k)[base[k]].clone());

    let p = spec.coins().prob(h).clone();
    let q = complement(&p);
    let (v00, v01, v10, v11) = (realized(false, false), realized(false, true), realized(true, false), realized(true, true));
    let separate = q.clone() * q.clone() * v00.clone()
        + p.clone() * q.clone() * (v01 + v10)
        + p.clone() * p.clone() * v11.clone();
    let merged = q * v00 + p.clone() * v11;
    Ok(ConditionalPayoffs {
        p,
        separate,
        merged,
        a0: block_product(ki, false),
        a1: block_product(ki, true),
        b0: block_product(kj, false),
        b1: block_product(kj, true),
        c,
    })
}

#[derive(Clone, Debug)]
pub struct ExPostCounterexample<T> {
    pub supplier: usize,
    pub shipments: (usize, usize),
    pub outcomes: BlockOutcomes,
    pub payoffs: ConditionalPayoffs<T>,
}

#[derive(Clone, Debug)]
pub struct ExPostReport<T> {
    pub checks: usize,
    pub violations: usize,
    pub identity_mismatches: usize,
    pub counterexample: Option<ExPostCounterexample<T>>,
}

impl<T> ExPostReport<T> {
    pub fn holds(&self) -> bool {
        self.violations == 0 && self.identity_mismatches == 0
    }
}

/// Merging any two shipments of any supplier, under every realization of the other shipments.
pub fn ex_post_sweep<T: Scalar>(spec: &GameSpec<T>, profile: &StrategyProfile) -> Result<ExPostReport<T>> {
    check_profile(spec, profile)?;
    let total = profile.total_blocks();
    if total > MAX_BLOCKS {
        return Err(Error::TooLarge {
            what: "shipment count",
            size: total,
            cap: MAX_BLOCKS,
        });
    }
    let shape: Vec<usize> = profile.strategies().iter().map(|s| s.blocks().len()).collect();
    let mut report = ExPostReport {
        checks: 0,
        violations: 0,
        identity_mismatches: 0,
        counterexample: None,
    };
    for h in 0..shape.len() {
        for i in 0..shape[h] {
            for j in i + 1..shape[h] {
                let fixed: Vec<(usize, usize)> = shape
                    .iter()
                    .enumerate()
                    .flat_map(|(o, &n)| (0..n).map(move |b| (o, b)))
                    .filter(|&(o, b)| !(o == h && (b == i || b == j)))
                    .collect();
                for bits in 0u64..1 << fixed.len() {
                    let mut outcomes: BlockOutcomes = shape.iter().map(|&n| vec![None; n]).collect();
                    for (t, &(o, b)) in fixed.iter().enumerate() {
                        outcomes[o][b] = Some(bits >> t & 1 == 1);
                    }
                    let payoffs = conditional_payoffs(spec, profile, h, i, j, &outcomes)?;
                    report.checks += 1;
                    let bad_order = !payoffs.merging_helps();
                    let bad_identity = !payoffs.identity_holds();
                    report.violations += bad_order as usize;
                    report.identity_mismatches += bad_identity as usize;
                    if (bad_order || bad_identity) && report.counterexample.is_none() {
                        report.counterexample = Some(ExPostCounterexample {
                            supplier: h,
                            shipments: (i, j),
                            outcomes,
                            payoffs,
                        });
                    }
                }
            }
        }
    }
    Ok(report)
}
