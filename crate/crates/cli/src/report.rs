//! Report schema and writers.
//!
//! Subsets are written as sorted label lists and tables are sorted by
//! (size, labels), so reports do not depend on the order labels were declared.

use std::path::Path;

use anyhow::{Context, Result};
use pooling_core::lattice::{Ground, SetFunction, Subset};
use pooling_core::montecarlo::EstimateReport;
use pooling_core::partition_game::{PartitionStrategy, StrategyProfile};
use pooling_core::scalar::{NumericMode, Scalar};
use serde::{Deserialize, Serialize};

/// A float in float mode, an `"n/d"` string in exact mode.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Float(f64),
    Exact(String),
}

impl Num {
    pub fn of<T: Scalar>(v: &T) -> Num {
        match T::MODE {
            NumericMode::Exact => Num::Exact(v.render()),
            NumericMode::Float => Num::Float(v.to_float()),
        }
    }

    pub fn text(&self) -> String {
        match self {
            Num::Float(v) => format!("{v:?}"),
            Num::Exact(s) => s.clone(),
        }
    }
}

pub fn labels(ground: &Ground, s: Subset) -> Vec<String> {
    ground.sorted_labels(s)
}

/// Subsets of `ground` in report order.
pub fn ordered_subsets(ground: &Ground) -> Vec<Subset> {
    let mut all: Vec<(usize, Vec<String>, Subset)> =
        ground.subsets().map(|s| (s.len(), labels(ground, s), s)).collect();
    all.sort();
    all.into_iter().map(|(_, _, s)| s).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub set: Vec<String>,
    pub value: Num,
}

pub fn table<T: Scalar>(f: &SetFunction<T>) -> Vec<Entry> {
    ordered_subsets(f.ground())
        .into_iter()
        .map(|s| Entry {
            set: labels(f.ground(), s),
            value: Num::of(&f[s]),
        })
        .collect()
}

/// A pair `smaller ⊂ larger` where an increasing function went down.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityViolation {
    pub smaller: Vec<String>,
    pub larger: Vec<String>,
    pub smaller_value: Num,
    pub larger_value: Num,
}

pub fn violation<T: Scalar>(f: &SetFunction<T>) -> Option<MonotonicityViolation> {
    f.increasing_violation().map(|(s, i)| {
        let smaller = s.without(i);
        MonotonicityViolation {
            smaller: labels(f.ground(), smaller),
            larger: labels(f.ground(), s),
            smaller_value: Num::of(&f[smaller]),
            larger_value: Num::of(&f[s]),
        }
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(name: &str, passed: bool) -> Check {
        Check {
            name: name.to_string(),
            passed,
            detail: None,
        }
    }

    pub fn with_detail(name: &str, passed: bool, detail: impl Into<String>) -> Check {
        Check {
            name: name.to_string(),
            passed,
            detail: Some(detail.into()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvolutionReport {
    pub kind: String,
    pub mode: NumericMode,
    pub ground: Vec<String>,
    pub inputs_increasing: bool,
    pub increasing: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violation: Option<MonotonicityViolation>,
    pub table: Vec<Entry>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedTable {
    pub name: String,
    pub increasing: bool,
    pub decreasing: bool,
    pub table: Vec<Entry>,
}

pub fn named_table<T: Scalar>(name: &str, f: &SetFunction<T>) -> NamedTable {
    NamedTable {
        name: name.to_string(),
        increasing: f.is_increasing(),
        decreasing: f.is_decreasing(),
        table: table(f),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub kind: String,
    pub mode: NumericMode,
    pub ground: Vec<String>,
    /// The table being maximized comes first.
    pub tables: Vec<NamedTable>,
    pub optimal: Vec<Vec<String>>,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violation: Option<MonotonicityViolation>,
    pub passed: bool,
}

/// Shipments of every supplier, each a sorted list of commodity labels.
pub type ProfileLabels = Vec<Vec<Vec<String>>>;

pub fn strategy_labels(commodities: &Ground, s: &PartitionStrategy) -> Vec<Vec<String>> {
    s.blocks().iter().map(|b| labels(commodities, *b)).collect()
}

pub fn profile_labels(commodities: &Ground, p: &StrategyProfile) -> ProfileLabels {
    p.strategies().iter().map(|s| strategy_labels(commodities, s)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub profile: ProfileLabels,
    pub payoffs: Vec<Num>,
    pub nash: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DominanceFailure {
    pub profile: ProfileLabels,
    pub coarser: Vec<Vec<String>>,
    pub finer: Vec<Vec<String>>,
    pub coarser_payoff: Num,
    pub finer_payoff: Num,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DominanceRow {
    pub supplier: String,
    pub holds: bool,
    pub coarse_always_best: bool,
    pub coarse_always_unique_best: bool,
    pub opponent_profiles: usize,
    pub comparisons: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<DominanceFailure>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionalFailure {
    pub supplier: String,
    pub shipments: (Vec<String>, Vec<String>),
    /// Arrival of every other shipment, in profile order.
    pub outcomes: Vec<Vec<Option<bool>>>,
    pub separate: Num,
    pub merged: Num,
    pub predicted_gap: Num,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExPostSummary {
    pub profile: ProfileLabels,
    pub checks: usize,
    pub violations: usize,
    pub identity_mismatches: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<ConditionalFailure>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameReport {
    pub kind: String,
    pub mode: NumericMode,
    pub commodities: Vec<String>,
    pub suppliers: Vec<String>,
    pub strict: bool,
    pub profiles: Vec<ProfileRow>,
    pub dominance: Vec<DominanceRow>,
    pub nash: Vec<ProfileLabels>,
    pub coarse_is_nash: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ex_post: Option<ExPostSummary>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationRow {
    pub supplier: String,
    pub estimate: EstimateReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub within_four_stderr: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub kind: String,
    pub mode: NumericMode,
    pub profile: ProfileLabels,
    pub samples: u64,
    pub seed: u64,
    pub suppliers: Vec<SimulationRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub kind: String,
    pub seed: u64,
    pub max_ground: usize,
    pub sweeps: Vec<SweepResult>,
    pub passed: bool,
}

/// Rows of one CSV file.
pub struct CsvTable {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// CSV key of a subset: sorted labels joined by `;`, empty for the empty set.
pub fn set_key(set: &[String]) -> String {
    set.join(";")
}

pub fn profile_key(p: &ProfileLabels) -> String {
    p.iter()
        .map(|blocks| blocks.iter().map(|b| set_key(b)).collect::<Vec<_>>().join("|"))
        .collect::<Vec<_>>()
        .join(" / ")
}

pub fn entries_csv(name: &str, columns: &[(&str, &[Entry])]) -> CsvTable {
    let mut header = vec!["set".to_string()];
    header.extend(columns.iter().map(|(c, _)| c.to_string()));
    let rows = (0..columns.first().map_or(0, |(_, t)| t.len()))
        .map(|i| {
            let mut row = vec![set_key(&columns[0].1[i].set)];
            row.extend(columns.iter().map(|(_, t)| t[i].value.text()));
            row
        })
        .collect();
    CsvTable {
        name: name.to_string(),
        header,
        rows,
    }
}

/// Writes `report.json` (and CSV tables when asked) into `out`, or prints the JSON.
pub fn emit<R: Serialize>(report: &R, tables: &[CsvTable], out: Option<&Path>, csv: bool) -> Result<()> {
    let json = serde_json::to_string_pretty(report)? + "\n";
    let Some(dir) = out else {
        print!("{json}");
        return Ok(());
    };
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let path = dir.join("report.json");
    std::fs::write(&path, json).with_context(|| format!("cannot write {}", path.display()))?;
    if csv {
        for t in tables {
            let path = dir.join(format!("{}.csv", t.name));
            let mut w = csv::Writer::from_path(&path).with_context(|| format!("cannot write {}", path.display()))?;
            w.write_record(&t.header)?;
            for row in &t.rows {
                w.write_record(row)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use pooling_core::lattice::GroundSet;
    use pooling_core::scalar::Rational;

    #[test]
    fn numbers_render_by_mode() {
        assert_eq!(Num::of(&0.5f64), Num::Float(0.5));
        assert_eq!(Num::of(&Rational::from_ratio(3, 1)), Num::Exact("3/1".into()));
        let json = serde_json::to_string(&vec![Num::Float(1.5), Num::Exact("1/3".into())]).unwrap();
        assert_eq!(json, r#"[1.5,"1/3"]"#);
        let back: Vec<Num> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, vec![Num::Float(1.5), Num::Exact("1/3".into())]);
    }

    #[test]
    fn subset_order_ignores_declaration_order() {
        let a = GroundSet::new(["b", "a"]).unwrap();
        let b = GroundSet::new(["a", "b"]).unwrap();
        let la: Vec<_> = ordered_subsets(&a).into_iter().map(|s| labels(&a, s)).collect();
        let lb: Vec<_> = ordered_subsets(&b).into_iter().map(|s| labels(&b, s)).collect();
        assert_eq!(la, lb);
        assert_eq!(la[0], Vec::<String>::new());
        assert_eq!(la[3], vec!["a".to_string(), "b".to_string()]);
    }
}
