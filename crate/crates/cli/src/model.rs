//! Turns configuration bodies into core objects.

use anyhow::{anyhow, bail, Context, Result};
use pooling_core::lattice::{indicator, up_closure, CoinVector, Ground, GroundSet, MonotoneFamily, SetFunction, Subset};
use pooling_core::partition_game::{scaled_spec, GameSpec, PartitionStrategy, StrategyProfile};
use pooling_core::scalar::Scalar;
use pooling_core::scenarios::{weighted_voting, MergerScenario, MilitaryScenario, TwoInputProduction, WeightedVotingSpec};

use crate::config::{
    ConvolutionBody, FamilySpec, GameBody, MergerBody, MilitaryBody, Number, Payoffs, Probabilities, ProductionBody,
    SetFunctionSpec,
};

pub fn number<T: Scalar>(n: &Number) -> Result<T> {
    let value = match n {
        Number::Int(i) => T::from_ratio(*i, 1),
        // shortest decimal form, so 0.1 stays one tenth in exact mode
        Number::Float(f) => T::parse(&format!("{f}"))?,
        Number::Text(s) => T::parse(s)?,
    };
    Ok(value)
}

fn numbers<T: Scalar>(ns: &[Number]) -> Result<Vec<T>> {
    ns.iter().map(number).collect()
}

pub fn ground(labels: &[String], max_ground: Option<usize>) -> Result<Ground> {
    if let Some(cap) = max_ground {
        if labels.len() > cap {
            bail!("ground set has {} elements, --max-ground is {cap}", labels.len());
        }
    }
    Ok(GroundSet::new(labels.iter().cloned())?)
}

pub fn coins<T: Scalar>(ground: &Ground, p: &Probabilities) -> Result<CoinVector<T>> {
    let values = match p {
        Probabilities::Uniform(v) => vec![number(v)?; ground.len()],
        Probabilities::PerElement(vs) => {
            if vs.len() != ground.len() {
                bail!("{} probabilities for {} elements", vs.len(), ground.len());
            }
            numbers(vs)?
        }
    };
    Ok(CoinVector::new(ground, values)?)
}

fn subset(ground: &Ground, labels: &[String]) -> Result<Subset> {
    Ok(ground.subset(labels)?)
}

pub fn family(ground: &Ground, spec: &FamilySpec) -> Result<MonotoneFamily> {
    let sets = spec.sets.iter().map(|s| subset(ground, s)).collect::<Result<Vec<_>>>()?;
    if spec.up_close {
        Ok(up_closure(ground, &sets))
    } else {
        Ok(MonotoneFamily::from_sets(ground, &sets)?)
    }
}

fn per_element<T: Scalar>(ground: &Ground, weights: &[Number], what: &str) -> Result<Vec<T>> {
    if weights.len() != ground.len() {
        bail!("{what} has {} weights for {} elements", weights.len(), ground.len());
    }
    numbers(weights)
}

pub fn set_function<T: Scalar>(ground: &Ground, spec: &SetFunctionSpec) -> Result<SetFunction<T>> {
    let f = match spec {
        SetFunctionSpec::Table { entries } => {
            let mut values: Vec<Option<T>> = vec![None; ground.power_set_size()];
            for e in entries {
                let s = subset(ground, &e.set)?;
                if values[s.index()].replace(number(&e.value)?).is_some() {
                    bail!("table lists {} twice", ground.describe(s));
                }
            }
            let values = values
                .into_iter()
                .enumerate()
                .map(|(i, v)| v.ok_or_else(|| anyhow!("table has no entry for {}", ground.describe(Subset(i as u32)))))
                .collect::<Result<Vec<_>>>()?;
            SetFunction::new(ground, values)?
        }
        SetFunctionSpec::Indicator { family: spec } => indicator(&family(ground, spec)?),
        SetFunctionSpec::Additive { weights, constant } => {
            let w: Vec<T> = per_element(ground, weights, "additive function")?;
            let c = constant.as_ref().map(number).transpose()?.unwrap_or_else(T::zero);
            SetFunction::from_fn(ground, |s| s.elements().fold(c.clone(), |acc, i| acc + w[i].clone()))
        }
        SetFunctionSpec::PowerSum { weights, exponent } => {
            if weights.len() != ground.len() {
                bail!("power sum has {} weights for {} elements", weights.len(), ground.len());
            }
            if !(exponent.is_finite() && *exponent > 0.0) || weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
                bail!("power sum needs nonnegative weights and a positive exponent");
            }
            SetFunction::from_fn(ground, |s| {
                let total: f64 = s.elements().map(|i| weights[i]).sum();
                if total == 0.0 {
                    T::zero()
                } else {
                    T::from_float(total.powf(*exponent))
                }
            })
        }
        SetFunctionSpec::WeightedVoting { weights, quota } => {
            let w = per_element(ground, weights, "weighted voting rule")?;
            weighted_voting(&WeightedVotingSpec::new(w, number(quota)?)?, ground)?
        }
        SetFunctionSpec::Moebius { terms } => {
            let mut weights = vec![T::zero(); ground.power_set_size()];
            for t in terms {
                let s = subset(ground, &t.set)?;
                weights[s.index()] = weights[s.index()].clone() + number(&t.weight)?;
            }
            SetFunction::from_fn(ground, |s| {
                s.submasks().fold(T::zero(), |acc, t| acc + weights[t.index()].clone())
            })
        }
    };
    Ok(f)
}

pub fn production<T: Scalar>(body: &ProductionBody, max_ground: Option<usize>) -> Result<TwoInputProduction<T>> {
    let g = ground(&body.ground, max_ground)?;
    let c = coins(&g, &body.p).context("p")?;
    Ok(TwoInputProduction::new(&g, body.x.clone(), body.y.clone(), body.alpha, body.beta, c)?)
}

pub fn military<T: Scalar>(body: &MilitaryBody, max_ground: Option<usize>) -> Result<MilitaryScenario<T>> {
    let g = ground(&body.ground, max_ground)?;
    let red = family(&g, &body.red).context("red critical family")?;
    let blue = family(&g, &body.blue).context("blue critical family")?;
    Ok(MilitaryScenario::new(red, blue, coins(&g, &body.p).context("p")?)?)
}

pub fn merger<T: Scalar>(body: &MergerBody, max_ground: Option<usize>) -> Result<MergerScenario<T>> {
    let g = ground(&body.ground, max_ground)?;
    let a = set_function(&g, &body.vote_a).context("vote_a")?;
    let b = set_function(&g, &body.vote_b).context("vote_b")?;
    Ok(MergerScenario::new(a, b, coins(&g, &body.p).context("p")?)?)
}

pub struct ConvolutionInput<T> {
    pub f: SetFunction<T>,
    pub g: SetFunction<T>,
    pub p: CoinVector<T>,
}

pub fn convolution<T: Scalar>(body: &ConvolutionBody, max_ground: Option<usize>) -> Result<ConvolutionInput<T>> {
    let g = ground(&body.ground, max_ground)?;
    Ok(ConvolutionInput {
        f: set_function(&g, &body.f).context("f")?,
        g: set_function(&g, &body.g).context("g")?,
        p: coins(&g, &body.p).context("p")?,
    })
}

pub fn game<T: Scalar>(body: &GameBody, max_ground: Option<usize>) -> Result<GameSpec<T>> {
    let commodities = ground(&body.commodities, max_ground).context("commodities")?;
    let suppliers = ground(&body.suppliers, max_ground).context("suppliers")?;
    let supply = body
        .supply
        .iter()
        .map(|s| subset(&commodities, s))
        .collect::<Result<Vec<_>>>()
        .context("supply")?;
    let p = coins(&suppliers, &body.p).context("p")?;
    let build_row = |row: &[SetFunctionSpec]| -> Result<Vec<SetFunction<T>>> {
        row.iter().map(|f| set_function(&suppliers, f)).collect()
    };
    let spec = match &body.payoffs {
        Payoffs::Symmetric(row) => GameSpec::symmetric(&commodities, supply, p, build_row(row).context("payoffs")?)?,
        Payoffs::PerSupplier(rows) => {
            let payoffs = rows.iter().map(|r| build_row(r)).collect::<Result<Vec<_>>>().context("payoffs")?;
            GameSpec::new(&commodities, supply, p, payoffs)?
        }
    };
    match &body.scale {
        Some(kappa) => Ok(scaled_spec(&spec, &numbers(kappa).context("scale")?)?),
        None => Ok(spec),
    }
}

/// The configured profile, or every supplier shipping everything at once.
pub fn profile<T: Scalar>(spec: &GameSpec<T>, body: &GameBody) -> Result<StrategyProfile> {
    let Some(rows) = &body.profile else {
        return Ok(StrategyProfile::coarse(spec));
    };
    let strategies = rows
        .iter()
        .enumerate()
        .map(|(h, blocks)| {
            let blocks = blocks
                .iter()
                .map(|b| subset(spec.commodities(), b))
                .collect::<Result<Vec<_>>>()?;
            let support = if h < spec.suppliers().len() { spec.supply(h) } else { Subset::EMPTY };
            Ok(PartitionStrategy::new(h, support, blocks)?)
        })
        .collect::<Result<Vec<_>>>()
        .context("profile")?;
    StrategyProfile::new(spec, strategies).context("profile")
}
