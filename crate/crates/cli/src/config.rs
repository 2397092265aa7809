//! JSON configuration files.

use std::path::Path;

use anyhow::{anyhow, Context, Result};
use pooling_core::NumericMode;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::value::RawValue;

#[derive(Clone, Debug)]
pub struct Config {
    pub mode: Option<NumericMode>,
    pub body: Body,
}

#[derive(Clone, Debug)]
pub enum Body {
    Production(ProductionBody),
    Military(MilitaryBody),
    Merger(MergerBody),
    Game(GameBody),
    Convolution(ConvolutionBody),
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Production,
    Military,
    Merger,
    Game,
    Convolution,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope<'a> {
    kind: Kind,
    #[serde(default)]
    mode: Option<NumericMode>,
    #[serde(borrow)]
    body: &'a RawValue,
}

impl Body {
    pub fn kind(&self) -> &'static str {
        match self {
            Body::Production(_) => "production",
            Body::Military(_) => "military",
            Body::Merger(_) => "merger",
            Body::Game(_) => "game",
            Body::Convolution(_) => "convolution",
        }
    }
}

/// A number written as a JSON integer, a JSON float, or a string such as `"1/3"`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Int(i64),
    Float(f64),
    Text(String),
}

/// One probability for every element, or one per element in ground-set order.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Probabilities {
    PerElement(Vec<Number>),
    Uniform(Number),
}

/// Explicit member sets, optionally closed upward.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub sets: Vec<Vec<String>>,
    #[serde(default)]
    pub up_close: bool,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SetFunctionSpec {
    /// Every subset listed exactly once.
    Table { entries: Vec<TableEntry> },
    /// 1 on the family, 0 elsewhere.
    Indicator { family: FamilySpec },
    /// `constant + Σ_{i∈S} weights[i]`.
    Additive {
        weights: Vec<Number>,
        #[serde(default)]
        constant: Option<Number>,
    },
    /// `(Σ_{i∈S} weights[i])^exponent`, zero on sets of total zero.
    PowerSum { weights: Vec<f64>, exponent: f64 },
    /// 1 when the weights in `S` reach the quota.
    WeightedVoting { weights: Vec<Number>, quota: Number },
    /// `Σ_{T⊆S} w_T` over the listed terms.
    Moebius { terms: Vec<MoebiusTerm> },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    pub set: Vec<String>,
    pub value: Number,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoebiusTerm {
    pub set: Vec<String>,
    pub weight: Number,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductionBody {
    pub ground: Vec<String>,
    pub p: Probabilities,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MilitaryBody {
    pub ground: Vec<String>,
    pub p: Probabilities,
    pub red: FamilySpec,
    pub blue: FamilySpec,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MergerBody {
    pub ground: Vec<String>,
    pub p: Probabilities,
    pub vote_a: SetFunctionSpec,
    pub vote_b: SetFunctionSpec,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvolutionBody {
    pub ground: Vec<String>,
    pub p: Probabilities,
    pub f: SetFunctionSpec,
    pub g: SetFunctionSpec,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameBody {
    pub commodities: Vec<String>,
    pub suppliers: Vec<String>,
    pub p: Probabilities,
    /// Commodities held by each supplier, in supplier order.
    pub supply: Vec<Vec<String>>,
    pub payoffs: Payoffs,
    #[serde(default)]
    pub scale: Option<Vec<Number>>,
    /// Shipments of each supplier for `game simulate`; all-coarse when absent.
    #[serde(default)]
    pub profile: Option<Vec<Vec<Vec<String>>>>,
}

/// Payoff functions over the supplier set, per commodity.
#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Payoffs {
    /// The same functions for every supplier.
    Symmetric(Vec<SetFunctionSpec>),
    /// `per_supplier[h][k]`.
    PerSupplier(Vec<Vec<SetFunctionSpec>>),
}

/// `base` is the path prefix and `(line, column)` the position of `text` within the file.
fn parse_at<T: DeserializeOwned>(text: &str, base: &str, origin: (usize, usize)) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|err| {
        let path = match err.path().to_string() {
            p if p == "." => base.to_string(),
            p if base.is_empty() => p,
            p => format!("{base}.{p}"),
        };
        let inner = err.into_inner();
        let (line, column) = if inner.line() <= 1 {
            (origin.0, origin.1 + inner.column().saturating_sub(1))
        } else {
            (origin.0 + inner.line() - 1, inner.column())
        };
        anyhow!("at `{path}` (line {line}, column {column}): {}", message(&inner))
    })
}

/// serde_json's message without its own ` at line L column C` suffix.
fn message(err: &serde_json::Error) -> String {
    let text = err.to_string();
    match text.rsplit_once(" at line ") {
        Some((head, _)) if err.line() > 0 => head.to_string(),
        _ => text,
    }
}

pub fn parse_config(text: &str) -> Result<Config> {
    let envelope: Envelope = {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|err| {
            let path = err.path().to_string();
            let inner = err.into_inner();
            anyhow!("at `{path}` (line {}, column {}): {}", inner.line(), inner.column(), message(&inner))
        })?
    };
    let raw = envelope.body.get();
    let offset = raw.as_ptr() as usize - text.as_ptr() as usize;
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = offset - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    let origin = (line, column);
    let body = match envelope.kind {
        Kind::Production => Body::Production(parse_at(raw, "body", origin)?),
        Kind::Military => Body::Military(parse_at(raw, "body", origin)?),
        Kind::Merger => Body::Merger(parse_at(raw, "body", origin)?),
        Kind::Game => Body::Game(parse_at(raw, "body", origin)?),
        Kind::Convolution => Body::Convolution(parse_at(raw, "body", origin)?),
    };
    Ok(Config {
        mode: envelope.mode,
        body,
    })
}

pub fn load_config(path: &Path) -> Result<Config> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
    parse_config(&text).with_context(|| format!("invalid config {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_production() {
        let c = parse_config(
            r#"{"kind":"production","mode":"exact","body":{"ground":["1"],"p":0.5,"x":[1],"y":[1],"alpha":1,"beta":1}}"#,
        )
        .unwrap();
        assert_eq!(c.mode, Some(NumericMode::Exact));
        assert!(matches!(c.body, Body::Production(_)));
    }

    #[test]
    fn errors_name_the_field() {
        let err = parse_config(r#"{"kind":"production","body":{"ground":["1"],"p":0.5,"x":[1],"y":"oops","alpha":1,"beta":1}}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("body.y"), "{err}");
        assert!(err.contains("line 1"), "{err}");

        let multi = "{\n  \"kind\": \"production\",\n  \"body\": {\n    \"ground\": [\"1\"],\n    \"p\": 0.5,\n    \"x\": [1],\n    \"y\": [1],\n    \"alpha\": \"one\",\n    \"beta\": 1\n  }\n}";
        let err = parse_config(multi).unwrap_err().to_string();
        assert!(err.contains("body.alpha"), "{err}");
        assert!(err.contains("line 8"), "{err}");
    }

    #[test]
    fn set_function_forms() {
        let text = r#"[
            {"type":"table","entries":[{"set":[],"value":0},{"set":["a"],"value":"1/2"}]},
            {"type":"indicator","family":{"sets":[["a"]],"up_close":true}},
            {"type":"additive","weights":[1,2]},
            {"type":"power_sum","weights":[1,2],"exponent":0.5},
            {"type":"weighted_voting","weights":[2,1,1],"quota":3},
            {"type":"moebius","terms":[{"set":["a","b"],"weight":1.5}]}
        ]"#;
        let specs: Vec<SetFunctionSpec> = serde_json::from_str(text).unwrap();
        assert_eq!(specs.len(), 6);
    }

    #[test]
    fn rejects_unknown_kind() {
        assert!(parse_config(r#"{"kind":"lottery","body":{}}"#).is_err());
    }
}
