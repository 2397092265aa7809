//! Randomized property sweeps behind `pooling verify`.

use anyhow::Result;
use pooling_core::convolution::{convolve, convolve_bruteforce, harris_gap};
use pooling_core::lattice::{expectation, CoinVector, Ground, GroundSet, SetFunction, Subset};
use pooling_core::montecarlo::{estimate_convolution, estimate_payoff};
use pooling_core::partition_game::{enumerate_partitions, ex_post_sweep, expected_payoff, GameSpec, PayoffTable, StrategyProfile};
use pooling_core::random::{random_grid_coins, random_increasing_with, random_monotone_family, random_uniform_coins, rng_from_seed};
use pooling_core::scalar::{Rational, Scalar};
use pooling_core::scenarios::{merger_table, military_tables, optimal_strategies, weighted_voting, MergerScenario, MilitaryScenario, WeightedVotingSpec};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::report::{SweepResult, VerifyReport};

pub struct Settings {
    pub seed: u64,
    pub max_ground: usize,
    pub cases: usize,
    pub samples: u64,
}

/// Largest ground set `verify` accepts.
pub const MAX_GROUND: usize = 12;

/// Largest ground set swept in exact arithmetic, where brute force gets slow.
const MAX_EXACT_GROUND: usize = 5;

type Case = Box<dyn Fn(&mut ChaCha8Rng, usize) -> Result<Option<String>>>;

fn sweep(name: &str, seed: u64, cases: usize, case: Case) -> Result<SweepResult> {
    let mut rng = rng_from_seed(seed);
    let mut failures = 0;
    let mut counterexample = None;
    for i in 0..cases {
        if let Some(msg) = case(&mut rng, i)? {
            failures += 1;
            counterexample.get_or_insert(format!("case {i}: {msg}"));
        }
    }
    Ok(SweepResult {
        name: name.to_string(),
        cases,
        failures,
        counterexample,
    })
}

fn ground(n: usize) -> Ground {
    GroundSet::numbered(n).expect("numbered ground sets within the cap are valid")
}

fn exact_pair(rng: &mut ChaCha8Rng, n: usize) -> (SetFunction<Rational>, SetFunction<Rational>, CoinVector<Rational>) {
    let g = ground(n);
    let f = random_increasing_with(rng, &g, 2 * n + 1);
    let h = random_increasing_with(rng, &g, 2 * n + 1);
    let p = random_grid_coins(rng, &g, 8);
    (f, h, p)
}

fn random_game(rng: &mut ChaCha8Rng, commodities: usize, suppliers: usize) -> GameSpec<Rational> {
    let k = ground(commodities);
    let h = ground(suppliers);
    let supply = (0..suppliers).map(|_| Subset(rng.gen_range(0..1u32 << commodities))).collect();
    let coins = random_grid_coins(rng, &h, 4);
    let payoffs = (0..suppliers)
        .map(|_| (0..commodities).map(|_| random_increasing_with(rng, &h, 3)).collect())
        .collect();
    GameSpec::new(&k, supply, coins, payoffs).expect("random games are valid")
}

fn random_profile(rng: &mut ChaCha8Rng, spec: &GameSpec<Rational>) -> Result<StrategyProfile> {
    let strategies = (0..spec.suppliers().len())
        .map(|h| Ok(enumerate_partitions(h, spec.supply(h))?.choose(rng).expect("nonempty").clone()))
        .collect::<Result<Vec<_>>>()?;
    Ok(StrategyProfile::new(spec, strategies)?)
}

pub fn run(settings: &Settings) -> Result<VerifyReport> {
    let max_n = settings.max_ground;
    let exact_n = max_n.min(MAX_EXACT_GROUND);
    let cases = settings.cases;
    let samples = settings.samples;
    let seed = settings.seed;
    let size = move |i: usize, cap: usize| 1 + i % cap.max(1);

    let mut sweeps = Vec::new();
    sweeps.push(sweep(
        "convolution of increasing functions is increasing (float)",
        seed,
        cases,
        Box::new(move |rng, i| {
            let g = ground(size(i, max_n));
            let f: SetFunction<f64> = random_increasing_with(rng, &g, 2 * g.len());
            let h: SetFunction<f64> = random_increasing_with(rng, &g, 2 * g.len());
            let p = random_uniform_coins(rng, &g);
            let t = convolve(&f, &h, &p)?;
            Ok(t.increasing_violation().map(|(s, e)| format!("decreases when adding element {e} to {:?}", s.without(e))))
        }),
    )?);
    sweeps.push(sweep(
        "convolution of increasing functions is increasing (exact)",
        seed.wrapping_add(1),
        cases,
        Box::new(move |rng, i| {
            let (f, h, p) = exact_pair(rng, size(i, exact_n));
            Ok((!convolve(&f, &h, &p)?.is_increasing()).then(|| "not increasing".to_string()))
        }),
    )?);
    sweeps.push(sweep(
        "fast convolution equals the direct sum (exact)",
        seed.wrapping_add(2),
        cases,
        Box::new(move |rng, i| {
            let (f, h, p) = exact_pair(rng, size(i, exact_n.min(4)));
            let t = convolve(&f, &h, &p)?;
            for s in f.ground().subsets() {
                if convolve_bruteforce(&f, &h, &p, s)? != t[s] {
                    return Ok(Some(format!("differs at {}", f.ground().describe(s))));
                }
            }
            Ok(None)
        }),
    )?);
    sweeps.push(sweep(
        "correlation gap and endpoint identities (exact)",
        seed.wrapping_add(3),
        cases,
        Box::new(move |rng, i| {
            let (f, h, p) = exact_pair(rng, size(i, exact_n));
            let t = convolve(&f, &h, &p)?;
            let g = f.ground();
            if harris_gap(&f, &h, &p)? < Rational::from_ratio(0, 1) {
                return Ok(Some("negative correlation gap".into()));
            }
            if t[g.full()] != expectation(&f.product(&h)?, &p)? || t[Subset::EMPTY] != expectation(&f, &p)? * expectation(&h, &p)? {
                return Ok(Some("endpoint identity fails".into()));
            }
            Ok(None)
        }),
    )?);
    sweeps.push(sweep(
        "military outcome probabilities (exact)",
        seed.wrapping_add(4),
        cases,
        Box::new(move |rng, i| {
            let g = ground(size(i, exact_n));
            let (a, b) = (rng.gen_range(0..=3), rng.gen_range(0..=3));
            let red = random_monotone_family(rng, &g, a);
            let blue = random_monotone_family(rng, &g, b);
            let sc = MilitaryScenario::new(red, blue, random_grid_coins::<Rational, _>(rng, &g, 8))?;
            let t = military_tables(&sc)?;
            let ok = t.both.is_increasing()
                && t.neither.is_increasing()
                && t.exactly_one.is_decreasing()
                && optimal_strategies(&t.both).contains(&g.full())
                && g.subsets().all(|s| t.both[s].clone() + t.neither[s].clone() + t.exactly_one[s].clone() == Rational::from_ratio(1, 1));
            Ok((!ok).then(|| "military tables violate monotonicity or normalization".to_string()))
        }),
    )?);
    sweeps.push(sweep(
        "merger approval is increasing (exact)",
        seed.wrapping_add(5),
        cases,
        Box::new(move |rng, i| {
            let g = ground(size(i, exact_n));
            let vote = |rng: &mut ChaCha8Rng| -> Result<SetFunction<Rational>> {
                let w: Vec<i64> = (0..g.len()).map(|_| rng.gen_range(1..=4)).collect();
                let total: i64 = w.iter().sum();
                let spec = WeightedVotingSpec::new(
                    w.iter().map(|&x| Rational::from_ratio(x, 1)).collect(),
                    Rational::from_ratio(rng.gen_range(1..=total), 1),
                )?;
                Ok(weighted_voting(&spec, &g)?)
            };
            let (a, b) = (vote(rng)?, vote(rng)?);
            let sc = MergerScenario::new(a, b, random_grid_coins::<Rational, _>(rng, &g, 8))?;
            let t = merger_table(&sc)?;
            Ok((!t.is_increasing() || !optimal_strategies(&t).contains(&g.full())).then(|| "merger approval not maximized by pooling".to_string()))
        }),
    )?);
    sweeps.push(sweep(
        "coarse shipments dominate and form an equilibrium (exact)",
        seed.wrapping_add(6),
        cases.div_ceil(4),
        Box::new(move |rng, i| {
            let spec = random_game(rng, 1 + i % 3, 1 + i % 2);
            let table = PayoffTable::build(&spec)?;
            let dominated = (0..spec.suppliers().len()).all(|h| table.dominance(h).holds());
            let coarse = table.nash_equilibria().contains(&StrategyProfile::coarse(&spec));
            Ok((!dominated || !coarse).then(|| "coarse strategy dominance fails".to_string()))
        }),
    )?);
    sweeps.push(sweep(
        "merging two shipments helps under every realization (exact)",
        seed.wrapping_add(7),
        cases.div_ceil(4),
        Box::new(move |rng, i| {
            let spec = random_game(rng, 2 + i % 2, 1 + i % 3);
            let profile = random_profile(rng, &spec)?;
            let r = ex_post_sweep(&spec, &profile)?;
            Ok((!r.holds()).then(|| format!("{} losses, {} identity mismatches", r.violations, r.identity_mismatches)))
        }),
    )?);
    sweeps.push(sweep(
        "Monte Carlo estimates within 4 standard errors",
        seed.wrapping_add(8),
        6,
        Box::new(move |rng, i| {
            if i % 2 == 0 {
                let spec = random_game(rng, 2, 2);
                let profile = random_profile(rng, &spec)?;
                let exact = expected_payoff(&spec, &profile, 0)?.to_float();
                let seed = rng.gen();
                let r = estimate_payoff(&spec, &profile, 0, samples, seed)?;
                Ok((!r.agrees_with(exact, 4.0)).then(|| format!("estimate {} vs exact {exact}", r.mean)))
            } else {
                let (f, h, p) = exact_pair(rng, size(i, exact_n));
                let s = Subset(rng.gen_range(0..f.ground().power_set_size() as u32));
                let exact = convolve(&f, &h, &p)?[s].to_float();
                let seed = rng.gen();
                let r = estimate_convolution(&f, &h, &p, s, samples, seed)?;
                Ok((!r.agrees_with(exact, 4.0)).then(|| format!("estimate {} vs exact {exact}", r.mean)))
            }
        }),
    )?);

    let passed = sweeps.iter().all(|s| s.failures == 0);
    Ok(VerifyReport {
        kind: "verify".into(),
        seed,
        max_ground: max_n,
        sweeps,
        passed,
    })
}
