//! Acceptance gate. Runs every criterion, prints one line each, and exits
//! non-zero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use pooling_core::convolution::{convolve, convolve_bruteforce, harris_gap};
use pooling_core::lattice::{
    expectation, monotone_boolean_functions, up_closure, CoinVector, Ground, GroundSet, SetFunction, Subset,
};
use pooling_core::montecarlo::{estimate_convolution, estimate_payoff};
use pooling_core::partition_game::{
    best_replies, enumerate_partitions, ex_post_sweep, expected_payoff, scaled_spec, GameSpec, PayoffTable,
    StrategyProfile,
};
use pooling_core::random::{
    random_grid_coins, random_increasing_with, random_strictly_increasing_with, random_uniform_coins, rng_from_seed,
};
use pooling_core::scalar::{magnitude, Rational, Scalar};
use pooling_core::scenarios::{
    merger_probability, merger_table, military_outcomes, military_tables, optimal_strategies, production_payoff,
    production_table, weighted_voting, MergerScenario, MilitaryScenario, TwoInputProduction, WeightedVotingSpec,
};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn q(n: i64, d: u64) -> Rational {
    Rational::from_ratio(n, d)
}

/// Every vector in `{1/4, 1/2, 3/4}^n`.
fn quarter_grid(ground: &Ground) -> Vec<CoinVector<Rational>> {
    let n = ground.len();
    (0..3usize.pow(n as u32))
        .map(|mut code| {
            let p = (0..n)
                .map(|_| {
                    let k = code % 3;
                    code /= 3;
                    q(k as i64 + 1, 4)
                })
                .collect();
            CoinVector::new(ground, p).unwrap()
        })
        .collect()
}

fn exhaustive_monotone_pairs() -> Outcome {
    let (mut checked, mut violations, mut mismatches) = (0, 0, 0);
    for n in 0..=3 {
        let ground = GroundSet::numbered(n).unwrap();
        let functions = monotone_boolean_functions::<Rational>(&ground).unwrap();
        for p in quarter_grid(&ground) {
            for f in &functions {
                for g in &functions {
                    let table = convolve(f, g, &p).unwrap();
                    checked += 1;
                    violations += !table.is_increasing() as usize;
                    if n <= 2 {
                        mismatches += ground
                            .subsets()
                            .filter(|&s| convolve_bruteforce(f, g, &p, s).unwrap() != table[s])
                            .count();
                    }
                }
            }
        }
    }
    outcome(
        violations == 0 && mismatches == 0,
        format!("{checked} exact convolutions of monotone 0/1 pairs, {violations} non-increasing, {mismatches} oracle mismatches"),
    )
}

struct FloatTriple {
    f: SetFunction<f64>,
    g: SetFunction<f64>,
    p: CoinVector<f64>,
}

fn float_corpus() -> Vec<FloatTriple> {
    let mut rng = rng_from_seed(2);
    (0..10_000)
        .map(|i| {
            let ground = GroundSet::numbered(1 + i % 6).unwrap();
            let count = rng.gen_range(1..=2 * ground.len() + 2);
            FloatTriple {
                f: random_increasing_with(&mut rng, &ground, count),
                g: random_increasing_with(&mut rng, &ground, count),
                p: random_uniform_coins(&mut rng, &ground),
            }
        })
        .collect()
}

fn random_monotone_sweep(corpus: &[FloatTriple]) -> Outcome {
    let violations = corpus
        .iter()
        .filter(|t| !convolve(&t.f, &t.g, &t.p).unwrap().is_increasing())
        .count();
    outcome(
        violations == 0,
        format!("{} float triples on n<=6, {violations} non-increasing beyond 1e-9 relative", corpus.len()),
    )
}

fn correlation_gap(corpus: &[FloatTriple]) -> Outcome {
    let mut float_violations = 0;
    let mut worst = f64::INFINITY;
    for t in corpus {
        let gap = harris_gap(&t.f, &t.g, &t.p).unwrap();
        let scale = magnitude(&[expectation(&t.f.product(&t.g).unwrap(), &t.p).unwrap()]);
        worst = worst.min(gap / scale);
        float_violations += (gap < -1e-9 * scale) as usize;
    }
    let (mut exact_checked, mut exact_violations) = (0, 0);
    for n in 0..=3 {
        let ground = GroundSet::numbered(n).unwrap();
        let functions = monotone_boolean_functions::<Rational>(&ground).unwrap();
        for p in quarter_grid(&ground) {
            for f in &functions {
                for g in &functions {
                    exact_checked += 1;
                    exact_violations += (harris_gap(f, g, &p).unwrap() < q(0, 1)) as usize;
                }
            }
        }
    }
    outcome(
        float_violations == 0 && exact_violations == 0,
        format!(
            "float: {} triples, {float_violations} gaps below -1e-9 (min relative gap {worst:.3e}); exact: {exact_checked} pairs, {exact_violations} negative",
            corpus.len()
        ),
    )
}

fn oracle_equivalence() -> Outcome {
    let mut rng = rng_from_seed(4);
    let mut float_mismatches = 0;
    for i in 0..1000 {
        let ground = GroundSet::numbered(1 + i % 8).unwrap();
        let f: SetFunction<f64> = random_increasing_with(&mut rng, &ground, 2 * ground.len());
        let g: SetFunction<f64> = random_increasing_with(&mut rng, &ground, 2 * ground.len());
        let p = random_uniform_coins(&mut rng, &ground);
        let table = convolve(&f, &g, &p).unwrap();
        float_mismatches += ground
            .subsets()
            .filter(|&s| !f64::approx_eq(&table[s], &convolve_bruteforce(&f, &g, &p, s).unwrap()))
            .count();
    }
    let mut exact_mismatches = 0;
    let sizes = (0..1000).map(|i| 1 + i % 5).chain([6, 6, 6, 7]);
    let mut exact_instances = 0;
    for n in sizes {
        let ground = GroundSet::numbered(n).unwrap();
        let f: SetFunction<Rational> = random_increasing_with(&mut rng, &ground, 2 * n);
        let g: SetFunction<Rational> = random_increasing_with(&mut rng, &ground, 2 * n);
        let p = random_grid_coins(&mut rng, &ground, 8);
        let table = convolve(&f, &g, &p).unwrap();
        exact_mismatches += ground
            .subsets()
            .filter(|&s| convolve_bruteforce(&f, &g, &p, s).unwrap() != table[s])
            .count();
        exact_instances += 1;
    }
    outcome(
        float_mismatches == 0 && exact_mismatches == 0,
        format!(
            "1000 float instances n<=8 ({float_mismatches} entries off by >1e-9 relative); {exact_instances} exact instances n<=7 ({exact_mismatches} unequal entries)"
        ),
    )
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    q(rng.gen_range(-60..=60), rng.gen_range(1..=24))
}

fn single_element_identity() -> Outcome {
    let mut rng = rng_from_seed(5);
    let ground = GroundSet::numbered(1).unwrap();
    let full = ground.full();
    let mut failures = 0;
    for _ in 0..1000 {
        let (a, a1, b, b1) = (
            random_rational(&mut rng),
            random_rational(&mut rng),
            random_rational(&mut rng),
            random_rational(&mut rng),
        );
        let d: u64 = rng.gen_range(1..=64);
        let p = q(rng.gen_range(0..=d as i64), d);
        let f = SetFunction::new(&ground, vec![a.clone(), a1.clone()]).unwrap();
        let g = SetFunction::new(&ground, vec![b.clone(), b1.clone()]).unwrap();
        let coins = CoinVector::new(&ground, vec![p.clone()]).unwrap();
        let table = convolve(&f, &g, &coins).unwrap();
        let lhs = table[full].clone() - table[Subset::EMPTY].clone();
        let rhs = p.clone() * (q(1, 1) - p) * (a1 - a) * (b1 - b);
        failures += (lhs != rhs) as usize;
    }
    outcome(failures == 0, format!("1000 exact rational instances, {failures} unequal"))
}

fn scenario_models() -> Outcome {
    let mut rng = rng_from_seed(6);
    let mut failures: Vec<String> = Vec::new();
    let mut fail = |what: String| {
        if failures.len() < 5 {
            failures.push(what);
        }
    };
    let mut counts = [0usize; 3];

    for i in 0..500 {
        let ground = GroundSet::numbered(1 + i % 5).unwrap();
        let n = ground.len();
        let amounts = |rng: &mut ChaCha8Rng| (0..n).map(|_| rng.gen_range(0..=20) as f64 / 4.0).collect::<Vec<_>>();
        let (x, y) = (amounts(&mut rng), amounts(&mut rng));
        let (alpha, beta) = (rng.gen_range(1..=16) as f64 / 8.0, rng.gen_range(1..=16) as f64 / 8.0);
        let coins: CoinVector<Rational> = random_grid_coins(&mut rng, &ground, 8);
        let sc = TwoInputProduction::new(&ground, x, y, alpha, beta, coins).unwrap();
        let table = production_table(&sc).unwrap();
        counts[0] += 1;
        if !table.is_increasing() {
            fail(format!("production {i}: payoff not increasing"));
        }
        if !optimal_strategies(&table).contains(&ground.full()) {
            fail(format!("production {i}: full pooling not optimal"));
        }
        if ground.subsets().any(|s| production_payoff(&sc, s) != table[s]) {
            fail(format!("production {i}: table disagrees with direct enumeration"));
        }
    }

    for i in 0..500 {
        let ground = GroundSet::numbered(1 + i % 5).unwrap();
        let size = ground.power_set_size() as u32;
        let family = |rng: &mut ChaCha8Rng| {
            let seeds: Vec<Subset> = (0..rng.gen_range(0..=3)).map(|_| Subset(rng.gen_range(0..size))).collect();
            up_closure(&ground, &seeds)
        };
        let (red, blue) = (family(&mut rng), family(&mut rng));
        let coins: CoinVector<Rational> = random_grid_coins(&mut rng, &ground, 8);
        let sc = MilitaryScenario::new(red, blue, coins).unwrap();
        let t = military_tables(&sc).unwrap();
        counts[1] += 1;
        if !t.both.is_increasing() || !t.neither.is_increasing() || !t.exactly_one.is_decreasing() {
            fail(format!("military {i}: monotonicity"));
        }
        if !optimal_strategies(&t.both).contains(&ground.full()) {
            fail(format!("military {i}: full pooling not optimal"));
        }
        for s in ground.subsets() {
            let direct = military_outcomes(&sc, s);
            if direct.both != t.both[s]
                || direct.neither != t.neither[s]
                || t.both[s].clone() + t.neither[s].clone() + t.exactly_one[s].clone() != q(1, 1)
            {
                fail(format!("military {i}: outcome probabilities at {s:?}"));
            }
        }
    }

    for i in 0..500 {
        let ground = GroundSet::numbered(1 + i % 5).unwrap();
        let n = ground.len();
        let size = ground.power_set_size() as u32;
        let vote = |rng: &mut ChaCha8Rng| -> SetFunction<Rational> {
            if rng.gen_bool(0.5) {
                let mut weights: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=4)).collect();
                if weights.iter().all(|&w| w == 0) {
                    weights[0] = 1;
                }
                let total: u32 = weights.iter().sum();
                let quota = q(rng.gen_range(1..=4 * total as i64), 4);
                let spec = WeightedVotingSpec::new(weights.iter().map(|&w| q(w as i64, 1)).collect(), quota).unwrap();
                weighted_voting(&spec, &ground).unwrap()
            } else {
                let seeds: Vec<Subset> = (0..rng.gen_range(1..=3)).map(|_| Subset(rng.gen_range(1..size))).collect();
                pooling_core::lattice::indicator(&up_closure(&ground, &seeds))
            }
        };
        let (a, b) = (vote(&mut rng), vote(&mut rng));
        let coins: CoinVector<Rational> = random_grid_coins(&mut rng, &ground, 8);
        let sc = MergerScenario::new(a, b, coins).unwrap();
        let table = merger_table(&sc).unwrap();
        counts[2] += 1;
        if !table.is_increasing() {
            fail(format!("merger {i}: approval probability not increasing"));
        }
        if !optimal_strategies(&table).contains(&ground.full()) {
            fail(format!("merger {i}: full pooling not optimal"));
        }
        if ground.subsets().any(|s| merger_probability(&sc, s) != table[s]) {
            fail(format!("merger {i}: table disagrees with direct enumeration"));
        }
    }

    outcome(
        failures.is_empty(),
        format!(
            "{} production, {} military, {} merger instances (exact, n<=5){}",
            counts[0],
            counts[1],
            counts[2],
            if failures.is_empty() { String::new() } else { format!("; failures: {}", failures.join("; ")) }
        ),
    )
}

/// Random increasing payoffs; strict ones are also positive so every factor matters.
fn random_game<T: Scalar>(
    rng: &mut ChaCha8Rng,
    commodities: usize,
    supply: &[u32],
    p: Vec<T>,
    strict: bool,
) -> GameSpec<T> {
    let k = GroundSet::numbered(commodities).unwrap();
    let h = GroundSet::numbered(supply.len()).unwrap();
    let coins = CoinVector::new(&h, p).unwrap();
    let payoffs = (0..supply.len())
        .map(|_| {
            (0..commodities)
                .map(|_| {
                    if strict {
                        let f: SetFunction<T> = random_strictly_increasing_with(rng, &h, 2);
                        let floor = T::from_ratio(rng.gen_range(1..=16), 16);
                        f.map(|v| v.clone() + floor.clone())
                    } else {
                        random_increasing_with(rng, &h, 3)
                    }
                })
                .collect()
        })
        .collect();
    GameSpec::new(&k, supply.iter().map(|&m| Subset(m)).collect(), coins, payoffs).unwrap()
}

fn quarter<T: Scalar>(rng: &mut ChaCha8Rng, n: usize) -> Vec<T> {
    (0..n).map(|_| T::from_ratio(rng.gen_range(1..=3), 4)).collect()
}

fn all_supplies(commodities: usize, suppliers: usize) -> Vec<Vec<u32>> {
    let per = 1u32 << commodities;
    (0..per.pow(suppliers as u32))
        .map(|mut code| {
            (0..suppliers)
                .map(|_| {
                    let m = code % per;
                    code /= per;
                    m
                })
                .collect()
        })
        .collect()
}

fn game_dominance() -> Outcome {
    let mut rng = rng_from_seed(7);
    let (mut specs, mut strict_specs, mut failures) = (0, 0, Vec::new());
    for commodities in 1..=4 {
        for suppliers in 1..=3 {
            let mut supplies = all_supplies(commodities, suppliers);
            supplies.shuffle(&mut rng);
            supplies.truncate(256);
            let everything = vec![(1u32 << commodities) - 1; suppliers];
            if !supplies.contains(&everything) {
                supplies.push(everything);
            }
            for (idx, supply) in supplies.iter().enumerate() {
                let strict = idx % 2 == 1;
                let p = quarter::<f64>(&mut rng, suppliers);
                let spec = random_game(&mut rng, commodities, supply, p, strict);
                let table = PayoffTable::build(&spec).unwrap();
                specs += 1;
                let coarse = StrategyProfile::coarse(&spec);
                let nash = table.nash_equilibria();
                let label = format!("|K|={commodities} |H|={suppliers} supply={supply:?}");
                for h in 0..suppliers {
                    let cert = table.dominance(h);
                    if !cert.holds() {
                        failures.push(format!("{label}: dominance fails for supplier {h}"));
                    }
                    if strict && !cert.coarse_always_unique_best {
                        failures.push(format!("{label}: coarse not the unique best reply for supplier {h}"));
                    }
                }
                if !nash.contains(&coarse) {
                    failures.push(format!("{label}: coarse profile is not an equilibrium"));
                }
                if strict {
                    strict_specs += 1;
                    if nash != vec![coarse] {
                        failures.push(format!("{label}: {} equilibria under strict payoffs", nash.len()));
                    }
                }
            }
        }
    }
    // a few in exact arithmetic as well
    for i in 0..24 {
        let supply: Vec<u32> = (0..2).map(|_| rng.gen_range(0..8)).collect();
        let p = quarter::<Rational>(&mut rng, 2);
        let spec = random_game(&mut rng, 3, &supply, p, i % 2 == 1);
        let table = PayoffTable::build(&spec).unwrap();
        specs += 1;
        if (0..2).any(|h| !table.dominance(h).holds()) || !table.nash_equilibria().contains(&StrategyProfile::coarse(&spec)) {
            failures.push(format!("exact spec {i} supply={supply:?}"));
        }
    }
    let n_fail = failures.len();
    failures.truncate(5);
    outcome(
        n_fail == 0,
        format!(
            "{specs} games with |K|<=4, |H|<=3 ({strict_specs} strict), {n_fail} failures{}",
            if failures.is_empty() { String::new() } else { format!(": {}", failures.join("; ")) }
        ),
    )
}

fn random_profile<T: Scalar>(rng: &mut ChaCha8Rng, spec: &GameSpec<T>) -> StrategyProfile {
    let strategies = (0..spec.suppliers().len())
        .map(|h| enumerate_partitions(h, spec.supply(h)).unwrap().choose(rng).unwrap().clone())
        .collect();
    StrategyProfile::new(spec, strategies).unwrap()
}

fn ex_post_merging() -> Outcome {
    let mut rng = rng_from_seed(8);
    let (mut checks, mut violations, mut mismatches) = (0, 0, 0);
    for i in 0..200 {
        let commodities = 2 + i % 3;
        let suppliers = 1 + (i / 3) % 3;
        let supply: Vec<u32> = (0..suppliers).map(|_| rng.gen_range(0..1u32 << commodities)).collect();
        let p: Vec<Rational> = (0..suppliers).map(|_| q(rng.gen_range(0..=8), 8)).collect();
        let spec = random_game(&mut rng, commodities, &supply, p, false);
        let finest: Vec<_> = (0..suppliers)
            .map(|h| enumerate_partitions(h, spec.supply(h)).unwrap().pop().unwrap())
            .collect();
        for profile in [StrategyProfile::new(&spec, finest).unwrap(), random_profile(&mut rng, &spec)] {
            let report = ex_post_sweep(&spec, &profile).unwrap();
            checks += report.checks;
            violations += report.violations;
            mismatches += report.identity_mismatches;
        }
    }
    outcome(
        violations == 0 && mismatches == 0 && checks > 0,
        format!("200 exact games, {checks} conditional comparisons, {violations} where merging lost, {mismatches} identity mismatches"),
    )
}

fn scaling_invariance() -> Outcome {
    let mut rng = rng_from_seed(9);
    let mut failures = 0;
    for i in 0..100 {
        let commodities = 1 + i % 3;
        let suppliers = 1 + (i / 3) % 3;
        let supply: Vec<u32> = (0..suppliers).map(|_| rng.gen_range(0..1u32 << commodities)).collect();
        let p = quarter::<Rational>(&mut rng, suppliers);
        let spec = random_game(&mut rng, commodities, &supply, p, i % 2 == 0);
        let kappa: Vec<Rational> = (0..suppliers)
            .map(|_| <Rational as Scalar>::from_float(10.0 - rng.gen_range(0.0..10.0)))
            .collect();
        let scaled = scaled_spec(&spec, &kappa).unwrap();
        let table = PayoffTable::build(&spec).unwrap();
        let scaled_table = PayoffTable::build(&scaled).unwrap();
        let mut same = table.nash_equilibria() == scaled_table.nash_equilibria();
        for profile in [StrategyProfile::coarse(&spec), random_profile(&mut rng, &spec)] {
            for h in 0..suppliers {
                same &= best_replies(&spec, &profile, h).unwrap() == best_replies(&scaled, &profile, h).unwrap();
            }
        }
        failures += !same as usize;
    }
    outcome(failures == 0, format!("100 exact games with random scale factors in (0, 10], {failures} changed answers"))
}

fn monte_carlo_consistency() -> Outcome {
    let mut rng = rng_from_seed(10);
    const SAMPLES: u64 = 100_000;
    const SEEDS: u64 = 100;
    let mut worst = (usize::MAX, String::new());
    let mut record = |name: String, hits: usize| {
        if hits < worst.0 {
            worst = (hits, name);
        }
    };
    for i in 0..25 {
        let commodities = 1 + i % 3;
        let suppliers = 1 + i % 2;
        let supply: Vec<u32> = (0..suppliers).map(|_| rng.gen_range(1..1u32 << commodities)).collect();
        let p = quarter::<Rational>(&mut rng, suppliers);
        let spec = random_game(&mut rng, commodities, &supply, p, false);
        let profile = random_profile(&mut rng, &spec);
        let exact = expected_payoff(&spec, &profile, 0).unwrap().to_float();
        let hits = (0..SEEDS)
            .filter(|&seed| estimate_payoff(&spec, &profile, 0, SAMPLES, seed).unwrap().agrees_with(exact, 4.0))
            .count();
        record(format!("game {i}"), hits);
    }
    for i in 0..25 {
        let ground = GroundSet::numbered(1 + i % 6).unwrap();
        let f: SetFunction<Rational> = random_increasing_with(&mut rng, &ground, 4);
        let g: SetFunction<Rational> = random_increasing_with(&mut rng, &ground, 4);
        let p = random_grid_coins(&mut rng, &ground, 8);
        let s = Subset(rng.gen_range(0..ground.power_set_size() as u32));
        let exact = convolve(&f, &g, &p).unwrap()[s].to_float();
        let hits = (0..SEEDS)
            .filter(|&seed| estimate_convolution(&f, &g, &p, s, SAMPLES, seed).unwrap().agrees_with(exact, 4.0))
            .count();
        record(format!("convolution {i}"), hits);
    }
    outcome(
        worst.0 >= 99,
        format!("50 instances x {SEEDS} seeds x {SAMPLES} samples; fewest seeds within 4 stderr: {}/{SEEDS} ({})", worst.0, worst.1),
    )
}

fn single_supplier_closed_form() -> Outcome {
    let ground = GroundSet::numbered(1).unwrap();
    let mut checked = 0;
    let mut failures = 0;
    let cases: Vec<(f64, f64, f64, f64, Rational, Rational)> = {
        let mut v = Vec::new();
        for x in 1..=6 {
            for y in 1..=6 {
                for (alpha, beta) in [(1, 1), (1, 2), (2, 1), (3, 2)] {
                    let xa = q((x as i64).pow(alpha), 1);
                    let yb = q((y as i64).pow(beta), 1);
                    v.push((x as f64, y as f64, alpha as f64, beta as f64, xa, yb));
                }
            }
        }
        for (x, y) in [(4, 9), (1, 16), (25, 4)] {
            let root = |v: i64| q((v as f64).sqrt() as i64, 1);
            v.push((x as f64, y as f64, 0.5, 0.5, root(x), root(y)));
        }
        v
    };
    for (x, y, alpha, beta, xa, yb) in cases {
        for k in 0..=16 {
            let p = q(k, 16);
            let coins = CoinVector::new(&ground, vec![p.clone()]).unwrap();
            let sc = TwoInputProduction::new(&ground, vec![x], vec![y], alpha, beta, coins).unwrap();
            let pooled = p.clone() * xa.clone() * yb.clone();
            let split = p.clone() * p * xa.clone() * yb.clone();
            checked += 1;
            if production_payoff(&sc, ground.full()) != pooled || production_payoff(&sc, Subset::EMPTY) != split {
                failures += 1;
            }
        }
    }
    outcome(failures == 0, format!("{checked} exact cases of pooled p*x^a*y^b and split p^2*x^a*y^b, {failures} unequal"))
}

fn main() -> ExitCode {
    let started = Instant::now();
    let corpus = float_corpus();
    type Criterion<'a> = (u32, &'a str, Box<dyn Fn() -> Outcome + 'a>);
    let criteria: Vec<Criterion> = vec![
        (1, "exhaustive monotone 0/1 pairs, exact", Box::new(exhaustive_monotone_pairs)),
        (2, "random increasing triples, float", Box::new(|| random_monotone_sweep(&corpus))),
        (3, "nonnegative correlation gap", Box::new(|| correlation_gap(&corpus))),
        (4, "fast convolution equals direct sum", Box::new(oracle_equivalence)),
        (5, "one-element increment identity", Box::new(single_element_identity)),
        (6, "production, military and merger models", Box::new(scenario_models)),
        (7, "coarse shipping dominance and equilibria", Box::new(game_dominance)),
        (8, "merging two shipments under every realization", Box::new(ex_post_merging)),
        (9, "invariance under payoff rescaling", Box::new(scaling_invariance)),
        (10, "Monte Carlo agrees with exact values", Box::new(monte_carlo_consistency)),
        (11, "single-supplier closed forms", Box::new(single_supplier_closed_form)),
    ];
    let mut failed = 0;
    for (id, name, run) in &criteria {
        let t = Instant::now();
        let result = run();
        failed += !result.pass as usize;
        println!(
            "criterion {id:>2} {} {name} ({:.1} s): {}",
            if result.pass { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64(),
            result.detail
        );
    }
    println!(
        "acceptance: {} of {} criteria passed in {:.1} s",
        criteria.len() - failed,
        criteria.len(),
        started.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
