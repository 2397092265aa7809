use anyhow::{bail, Result};
use pooling_core::convolution::convolve;
use pooling_core::lattice::SetFunction;
use pooling_core::montecarlo::estimate_payoff;
use pooling_core::partition_game::{
    enumerate_partitions, expected_payoff, ex_post_sweep, GameSpec, PayoffTable, StrategyProfile, MAX_BLOCKS,
};
use pooling_core::scalar::Scalar;
use pooling_core::scenarios::{
    merger_table, military_tables, optimal_strategies, production_table, MergerScenario, MilitaryScenario,
    TwoInputProduction,
};

use crate::config::{Body, ConvolutionBody, GameBody};
use crate::model;
use crate::report::{
    entries_csv, labels, named_table, profile_key, profile_labels, strategy_labels, table, violation, Check,
    ConditionalFailure, ConvolutionReport, CsvTable, DominanceFailure, DominanceRow, ExPostSummary, GameReport, Num,
    ProfileRow, ScenarioReport, SimulationReport, SimulationRow,
};

/// Sweeping every realization costs `2^(blocks - 2)` per pair of shipments.
const MAX_EX_POST_BLOCKS: usize = 16;

pub struct Output<R> {
    pub report: R,
    pub tables: Vec<CsvTable>,
    pub passed: bool,
}

pub fn convolution<T: Scalar>(body: &ConvolutionBody, max_ground: Option<usize>) -> Result<Output<ConvolutionReport>> {
    let input = model::convolution::<T>(body, max_ground)?;
    let result = convolve(&input.f, &input.g, &input.p)?;
    let inputs_increasing = input.f.is_increasing() && input.g.is_increasing();
    let increasing = result.is_increasing();
    let passed = !inputs_increasing || increasing;
    let entries = table(&result);
    let tables = vec![entries_csv("convolution", &[("value", &entries)])];
    Ok(Output {
        report: ConvolutionReport {
            kind: "convolution".into(),
            mode: T::MODE,
            ground: input.f.ground().labels().to_vec(),
            inputs_increasing,
            increasing,
            violation: if inputs_increasing { violation(&result) } else { None },
            table: entries,
            passed,
        },
        tables,
        passed,
    })
}

fn scenario_output<T: Scalar>(
    kind: &str,
    objective: (&str, &SetFunction<T>),
    others: &[(&str, &SetFunction<T>)],
    mut checks: Vec<Check>,
) -> Output<ScenarioReport> {
    let (name, f) = objective;
    let ground = f.ground();
    let optimal = optimal_strategies(f);
    let mut optimal_labels: Vec<Vec<String>> = optimal.iter().map(|s| labels(ground, *s)).collect();
    optimal_labels.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    checks.insert(0, Check::new(&format!("{name} increasing"), f.is_increasing()));
    checks.push(Check::new("pooling everyone is optimal", optimal.contains(&ground.full())));
    let tables: Vec<_> = std::iter::once((name, f))
        .chain(others.iter().copied())
        .map(|(n, t)| named_table(n, t))
        .collect();
    let columns: Vec<(&str, &[_])> = tables.iter().map(|t| (t.name.as_str(), t.table.as_slice())).collect();
    let csv = vec![entries_csv(kind, &columns)];
    let passed = checks.iter().all(|c| c.passed);
    Output {
        report: ScenarioReport {
            kind: kind.into(),
            mode: T::MODE,
            ground: ground.labels().to_vec(),
            tables,
            optimal: optimal_labels,
            checks,
            violation: violation(f),
            passed,
        },
        tables: csv,
        passed,
    }
}

pub fn production<T: Scalar>(sc: &TwoInputProduction<T>) -> Result<Output<ScenarioReport>> {
    let table = production_table(sc)?;
    Ok(scenario_output("production", ("expected_output", &table), &[], vec![]))
}

pub fn military<T: Scalar>(sc: &MilitaryScenario<T>) -> Result<Output<ScenarioReport>> {
    let t = military_tables(sc)?;
    let sums_to_one = sc
        .ground()
        .subsets()
        .all(|s| T::approx_eq(&(t.both[s].clone() + t.neither[s].clone() + t.exactly_one[s].clone()), &T::one()));
    let checks = vec![
        Check::new("neither_disabled increasing", t.neither.is_increasing()),
        Check::new("exactly_one_disabled decreasing", t.exactly_one.is_decreasing()),
        Check::new("outcome probabilities sum to one", sums_to_one),
    ];
    Ok(scenario_output(
        "military",
        ("both_disabled", &t.both),
        &[("neither_disabled", &t.neither), ("exactly_one_disabled", &t.exactly_one)],
        checks,
    ))
}

pub fn merger<T: Scalar>(sc: &MergerScenario<T>) -> Result<Output<ScenarioReport>> {
    let table = merger_table(sc)?;
    Ok(scenario_output("merger", ("approval", &table), &[], vec![]))
}

pub fn scenario<T: Scalar>(body: &Body, max_ground: Option<usize>) -> Result<Output<ScenarioReport>> {
    match body {
        Body::Production(b) => production(&model::production::<T>(b, max_ground)?),
        Body::Military(b) => military(&model::military::<T>(b, max_ground)?),
        Body::Merger(b) => merger(&model::merger::<T>(b, max_ground)?),
        other => bail!("`scenario` takes a production, military or merger config, not `{}`", other.kind()),
    }
}

fn finest_profile<T: Scalar>(spec: &GameSpec<T>) -> Result<StrategyProfile> {
    let strategies = (0..spec.suppliers().len())
        .map(|h| Ok(enumerate_partitions(h, spec.supply(h))?.pop().expect("at least one partition")))
        .collect::<Result<Vec<_>>>()?;
    Ok(StrategyProfile::new(spec, strategies)?)
}

pub fn analyze<T: Scalar>(body: &GameBody, max_ground: Option<usize>) -> Result<Output<GameReport>> {
    let spec = model::game::<T>(body, max_ground)?;
    let commodities = spec.commodities();
    let suppliers = spec.suppliers();
    let payoff_table = PayoffTable::build(&spec)?;
    let coarse = StrategyProfile::coarse(&spec);

    let mut rows: Vec<ProfileRow> = (0..payoff_table.len())
        .map(|idx| ProfileRow {
            profile: profile_labels(commodities, &payoff_table.profile(idx)),
            payoffs: payoff_table.payoffs(idx).iter().map(Num::of).collect(),
            nash: payoff_table.is_nash(idx),
        })
        .collect();
    rows.sort_by(|a, b| a.profile.cmp(&b.profile));
    let mut nash: Vec<_> = rows.iter().filter(|r| r.nash).map(|r| r.profile.clone()).collect();
    nash.sort();
    let coarse_is_nash = payoff_table.index_of(&coarse).is_some_and(|idx| payoff_table.is_nash(idx));

    let dominance: Vec<DominanceRow> = (0..suppliers.len())
        .map(|h| {
            let cert = payoff_table.dominance(h);
            DominanceRow {
                supplier: suppliers.label(h).to_string(),
                holds: cert.holds(),
                coarse_always_best: cert.coarse_always_best,
                coarse_always_unique_best: cert.coarse_always_unique_best,
                opponent_profiles: cert.opponent_profiles,
                comparisons: cert.comparisons,
                counterexample: cert.counterexample.map(|c| DominanceFailure {
                    profile: profile_labels(commodities, &c.profile),
                    coarser: strategy_labels(commodities, &c.coarser),
                    finer: strategy_labels(commodities, &c.finer),
                    coarser_payoff: Num::of(&c.coarser_payoff),
                    finer_payoff: Num::of(&c.finer_payoff),
                }),
            }
        })
        .collect();

    let finest = finest_profile(&spec)?;
    let ex_post = if finest.total_blocks() <= MAX_EX_POST_BLOCKS.min(MAX_BLOCKS) {
        let r = ex_post_sweep(&spec, &finest)?;
        Some(ExPostSummary {
            profile: profile_labels(commodities, &finest),
            checks: r.checks,
            violations: r.violations,
            identity_mismatches: r.identity_mismatches,
            counterexample: r.counterexample.map(|c| {
                let blocks = finest.strategy(c.supplier).blocks();
                ConditionalFailure {
                    supplier: suppliers.label(c.supplier).to_string(),
                    shipments: (labels(commodities, blocks[c.shipments.0]), labels(commodities, blocks[c.shipments.1])),
                    outcomes: c.outcomes,
                    separate: Num::of(&c.payoffs.separate),
                    merged: Num::of(&c.payoffs.merged),
                    predicted_gap: Num::of(&c.payoffs.predicted_gap()),
                }
            }),
        })
    } else {
        None
    };

    let strict = spec.is_strict();
    let mut checks = vec![
        Check::new("coarser shipments weakly dominate finer ones", dominance.iter().all(|d| d.holds)),
        Check::new("all-coarse profile is an equilibrium", coarse_is_nash),
    ];
    if strict {
        checks.push(Check::with_detail(
            "all-coarse profile is the only equilibrium",
            nash.len() == 1 && coarse_is_nash,
            format!("{} equilibria", nash.len()),
        ));
    }
    match &ex_post {
        Some(e) => checks.push(Check::with_detail(
            "merging two shipments helps under every realization",
            e.violations == 0 && e.identity_mismatches == 0,
            format!("{} conditional comparisons", e.checks),
        )),
        None => checks.push(Check::with_detail(
            "merging two shipments helps under every realization",
            true,
            format!("skipped: finest profile has more than {MAX_EX_POST_BLOCKS} shipments"),
        )),
    }
    let passed = checks.iter().all(|c| c.passed);

    let mut header = vec!["profile".to_string()];
    header.extend(suppliers.labels().iter().cloned());
    header.push("nash".into());
    let csv_rows = rows
        .iter()
        .map(|r| {
            let mut row = vec![profile_key(&r.profile)];
            row.extend(r.payoffs.iter().map(Num::text));
            row.push(r.nash.to_string());
            row
        })
        .collect();
    let tables = vec![CsvTable {
        name: "payoffs".into(),
        header,
        rows: csv_rows,
    }];

    Ok(Output {
        report: GameReport {
            kind: "game".into(),
            mode: T::MODE,
            commodities: commodities.labels().to_vec(),
            suppliers: suppliers.labels().to_vec(),
            strict,
            profiles: rows,
            dominance,
            nash,
            coarse_is_nash,
            ex_post,
            checks,
            passed,
        },
        tables,
        passed,
    })
}

pub fn simulate<T: Scalar>(
    body: &GameBody,
    max_ground: Option<usize>,
    samples: u64,
    seed: u64,
) -> Result<Output<SimulationReport>> {
    let spec = model::game::<T>(body, max_ground)?;
    let profile = model::profile(&spec, body)?;
    let exact_available = profile.total_blocks() <= MAX_BLOCKS;
    let rows = (0..spec.suppliers().len())
        .map(|h| {
            let estimate = estimate_payoff(&spec, &profile, h, samples, seed)?;
            let exact = if exact_available { Some(expected_payoff(&spec, &profile, h)?) } else { None };
            Ok(SimulationRow {
                supplier: spec.suppliers().label(h).to_string(),
                within_four_stderr: exact.as_ref().map(|e| estimate.agrees_with(e.to_float(), 4.0)),
                exact: exact.as_ref().map(Num::of),
                estimate,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let tables = vec![CsvTable {
        name: "estimates".into(),
        header: ["supplier", "mean", "stderr", "exact"].map(String::from).to_vec(),
        rows: rows
            .iter()
            .map(|r| {
                vec![
                    r.supplier.clone(),
                    format!("{:?}", r.estimate.mean),
                    format!("{:?}", r.estimate.stderr),
                    r.exact.as_ref().map_or(String::new(), Num::text),
                ]
            })
            .collect(),
    }];
    Ok(Output {
        report: SimulationReport {
            kind: "game_simulation".into(),
            mode: T::MODE,
            profile: profile_labels(spec.commodities(), &profile),
            samples,
            seed,
            suppliers: rows,
        },
        tables,
        passed: true,
    })
}
