//! Subcommand bodies. Each returns the text to print on success.

use std::fs;
use std::path::Path;

use num_rational::BigRational;
use serde_json::{json, Value};

use valcone_core::audit::{exact_checks, oracle_checks};
use valcone_core::classify::classify_at_infinity;
use valcone_core::cones::{curve_cone_generators, dual_cone_generators};
use valcone_core::invariants::{
    abc_values, configuration_from_mcv, maximal_contact_values, McvSequence, RequestedIncidences,
};
use valcone_core::oracle::{
    realize_model, realize_model_with, witness_search, LocalModel, Poly, Vars, WitnessMode,
    WitnessOutcome,
};
use valcone_core::{Code, Configuration, Error, PointKind};

use crate::render;
use crate::{ChartArg, Command, Format, KindArg, ModeArg};

/// Why a command did not succeed, mapped to exit codes 1 and 2.
#[derive(Debug)]
pub enum Failure {
    /// Unreadable or invalid input.
    Invalid(String),
    /// A well-defined negative answer, with an optional report for stdout.
    Negative {
        stdout: Option<String>,
        stderr: String,
    },
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

pub fn run(command: Command) -> Outcome {
    match command {
        Command::Classify { config, format } => {
            let cfg = load(&config)?;
            emit(&classify_at_infinity(&cfg), format)
        }
        Command::FromMcv {
            delta,
            point_kind,
            mcv,
            f1,
            m0,
            m1,
            output,
        } => {
            let kind = match point_kind {
                Some(KindArg::Special) => PointKind::Special,
                Some(KindArg::General) => PointKind::General,
                None => PointKind::None,
            };
            let seq = McvSequence::parse(&mcv)?;
            let cfg =
                configuration_from_mcv(delta, kind, &seq, RequestedIncidences { f1, m0, m1 })?;
            let file = serde_json::to_value(cfg.to_file())
                .map_err(|e| Failure::Invalid(format!("cannot serialize configuration: {e}")))?;
            let text = render::json(&file);
            match output {
                Some(path) => {
                    fs::write(&path, &text).map_err(|e| {
                        Failure::Invalid(format!("cannot write {}: {e}", path.display()))
                    })?;
                    Ok(String::new())
                }
                None => Ok(text),
            }
        }
        Command::Cone { config, format } => {
            let cfg = load(&config)?;
            match curve_cone_generators(&cfg) {
                Ok(set) => emit(&set, format),
                Err(e) if e.has(Code::NotNpi) => Err(Failure::Negative {
                    stdout: None,
                    stderr: e.to_string(),
                }),
                Err(e) => Err(e.into()),
            }
        }
        Command::DualCone { config, format } => {
            let cfg = load(&config)?;
            emit(&dual_cone_generators(&cfg)?, format)
        }
        Command::DualGraph { config } => Ok(load(&config)?.dual_graph().to_dot()),
        Command::Invariants { config, format } => invariants(&load(&config)?, format),
        Command::Value {
            config,
            poly,
            chart,
            seed,
            model,
            format,
        } => {
            let cfg = load(&config)?;
            let model = match model {
                Some(path) => model_from_file(&cfg, &path)?,
                None => realize_model(&cfg, seed)?,
            };
            value(&model, &poly, chart, format)
        }
        Command::Witness {
            config,
            mode,
            max_multiple,
            max_bidegree,
            seed,
            format,
        } => {
            let cfg = load(&config)?;
            let model = realize_model(&cfg, seed)?;
            let mode = match mode {
                ModeArg::Positive => WitnessMode::Positive,
                ModeArg::Zero => WitnessMode::Zero,
            };
            let outcome = witness_search(&model, mode, max_multiple, max_bidegree);
            let report = emit(&outcome, format)?;
            match outcome {
                WitnessOutcome::Found(_) => Ok(report),
                WitnessOutcome::NotFound { candidates, .. } => Err(Failure::Negative {
                    stdout: Some(report),
                    stderr: format!("NotFound: no witness among {candidates} candidates"),
                }),
            }
        }
        Command::Check {
            config,
            seed,
            format,
        } => {
            let cfg = load(&config)?;
            let mut checks = exact_checks(&cfg);
            checks.extend(oracle_checks(&cfg, seed));
            let failed: Vec<&str> = checks
                .iter()
                .filter(|c| !c.passed)
                .map(|c| c.name.as_str())
                .collect();
            let summary = json!({
                "checks": checks,
                "failed": failed.len(),
                "passed": checks.len() - failed.len(),
            });
            let report = render_value(&summary, format);
            if failed.is_empty() {
                Ok(report)
            } else {
                Err(Failure::Negative {
                    stdout: Some(report),
                    stderr: format!("failed checks: {}", failed.join(", ")),
                })
            }
        }
    }
}

fn load(path: &Path) -> Result<Configuration, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Invalid(format!("E_PARSE: cannot read {}: {e}", path.display())))?;
    Ok(Configuration::from_json(&text)?)
}

fn emit<T: serde::Serialize>(report: &T, format: Format) -> Outcome {
    let v = serde_json::to_value(report)
        .map_err(|e| Failure::Invalid(format!("cannot serialize report: {e}")))?;
    Ok(render_value(&v, format))
}

fn render_value(v: &Value, format: Format) -> String {
    if format.text {
        render::text(v)
    } else {
        render::json(v)
    }
}

fn invariants(cfg: &Configuration, format: Format) -> Outcome {
    let n = cfg.n();
    let abc = abc_values(cfg, n);
    let mcv = maximal_contact_values(cfg)?;
    let v = json!({
        "a": render::big(&abc.a),
        "b": render::big(&abc.b),
        "c": render::big(&abc.c),
        "delta": cfg.delta(),
        "m": render::bigs(&cfg.multiplicity_vector(n)),
        "mcv": render::bigs(&mcv.values()),
        "n": n,
        "vol_inverse": render::big(&abc.vol_inverse),
    });
    Ok(render_value(&v, format))
}

fn value(model: &LocalModel, poly: &str, chart: ChartArg, format: Format) -> Outcome {
    let (vars, name) = match chart {
        ChartArg::Infinity => (Vars::XY, "infinity"),
        ChartArg::Local => (Vars::UV, "local"),
    };
    let f = Poly::parse(poly, vars)?;
    if f.is_zero() {
        return Err(Failure::Invalid(
            "E_PARSE: the zero polynomial has no value".into(),
        ));
    }
    let value = match chart {
        ChartArg::Infinity => model.infinity_value(&f),
        ChartArg::Local => model.local_value(&f),
    };
    let model_json = serde_json::to_value(model)
        .map_err(|e| Failure::Invalid(format!("cannot serialize model: {e}")))?;
    let v = json!({
        "chart": name,
        "model": model_json,
        "poly": f.to_string(),
        "value": render::big(&value),
    });
    Ok(render_value(&v, format))
}

/// Rebuild a model from a file in the format `value` prints under `model`:
/// the `t` of every step whose placement is `free`, in order, fixes the free points.
fn model_from_file(cfg: &Configuration, path: &Path) -> Result<LocalModel, Failure> {
    let bad = |msg: String| Failure::Invalid(format!("E_REALIZE: {}: {msg}", path.display()));
    let text = fs::read_to_string(path).map_err(|e| bad(format!("cannot read: {e}")))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
    if let Some(n) = v.get("n").and_then(Value::as_u64) {
        if n != cfg.n() as u64 {
            return Err(bad(format!(
                "model has {n} points, configuration has {}",
                cfg.n()
            )));
        }
    }
    if let Some(d) = v.get("delta").and_then(Value::as_u64) {
        if d != u64::from(cfg.delta()) {
            return Err(bad(format!(
                "model has delta {d}, configuration has {}",
                cfg.delta()
            )));
        }
    }
    let steps = v
        .get("steps")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing `steps` array".into()))?;
    let mut params = Vec::new();
    for step in steps {
        if step.get("placement").and_then(Value::as_str) != Some("free") {
            continue;
        }
        let t = match step.get("t") {
            Some(Value::String(s)) => s.trim().parse::<BigRational>().ok(),
            Some(Value::Number(n)) => n.to_string().parse::<BigRational>().ok(),
            _ => None,
        }
        .ok_or_else(|| bad(format!("free step without a rational `t`: {step}")))?;
        params.push(t);
    }
    Ok(realize_model_with(cfg, &params)?)
}
