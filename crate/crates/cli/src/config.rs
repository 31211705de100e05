//! Config file schema, function-flag parsing, and small value parsers.

use std::path::PathBuf;

use serde::Deserialize;

use nlsl2_core::CharFunc;

use crate::{CliError, EXIT_SCHEMA};

/// Optional JSON config; flags always win over config values.
/// Unknown keys are rejected.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub function: Option<CharFunc>,
    pub d: Option<usize>,
    pub interval: Option<[f64; 2]>,
    pub alpha_j: Option<f64>,
    pub mode: Option<String>,
    pub q: Option<f64>,
    pub j: Option<String>,
    pub s: Option<f64>,
    pub x0: Option<f64>,
    pub steps: Option<usize>,
    pub t: Option<String>,
    pub r: Option<String>,
    pub sweep_s: Option<String>,
    pub jobs: Option<usize>,
    pub output: Option<PathBuf>,
    pub tolerance: Option<f64>,
}

impl RunConfig {
    pub fn load(path: Option<&PathBuf>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(RunConfig::default());
        };
        let text = std::fs::read_to_string(path)?;
        let config: RunConfig = serde_json::from_str(&text)
            .map_err(|err| CliError::new(EXIT_SCHEMA, format!("config {path:?}: {err}")))?;
        if let Some(f) = &config.function {
            f.validate()
                .map_err(|err| CliError::new(EXIT_SCHEMA, format!("config {path:?}: {err}")))?;
        }
        Ok(config)
    }
}

/// Parses `key=value` tokens against an expected key set.
fn parse_kv(tokens: &[String], keys: &[&str], flag: &str) -> Result<Vec<f64>, CliError> {
    let mut values: Vec<Option<f64>> = vec![None; keys.len()];
    for token in tokens {
        let (key, value) = token.split_once('=').ok_or_else(|| {
            CliError::new(
                EXIT_SCHEMA,
                format!("--{flag}: expected key=value, got {token:?}"),
            )
        })?;
        let slot = keys.iter().position(|k| *k == key.trim()).ok_or_else(|| {
            CliError::new(
                EXIT_SCHEMA,
                format!("--{flag}: unknown key {key:?} (expected one of {keys:?})"),
            )
        })?;
        let parsed: f64 = value.trim().parse().map_err(|_| {
            CliError::new(EXIT_SCHEMA, format!("--{flag}: bad number in {token:?}"))
        })?;
        if values[slot].replace(parsed).is_some() {
            return Err(CliError::new(
                EXIT_SCHEMA,
                format!("--{flag}: duplicate key {key:?}"),
            ));
        }
    }
    let missing: Vec<&str> = keys
        .iter()
        .zip(&values)
        .filter(|(_, v)| v.is_none())
        .map(|(k, _)| *k)
        .collect();
    if !missing.is_empty() {
        return Err(CliError::new(
            EXIT_SCHEMA,
            format!("--{flag}: missing {missing:?}"),
        ));
    }
    Ok(values.into_iter().map(|v| v.unwrap()).collect())
}

/// Resolves the characteristic function from flags, then the config file.
pub fn resolve_function(
    linear: Option<&Vec<String>>,
    quadratic: Option<&Vec<String>>,
    polynomial: Option<&String>,
    function: Option<&String>,
    config: &RunConfig,
) -> Result<CharFunc, CliError> {
    let picked = [
        linear.is_some(),
        quadratic.is_some(),
        polynomial.is_some(),
        function.is_some(),
    ]
    .iter()
    .filter(|&&p| p)
    .count();
    if picked > 1 {
        return Err(CliError::new(
            EXIT_SCHEMA,
            "give exactly one of --linear, --quadratic, --polynomial, --function".into(),
        ));
    }
    let f = if let Some(tokens) = linear {
        let v = parse_kv(tokens, &["r", "s"], "linear")?;
        CharFunc::linear(v[0], v[1])
    } else if let Some(tokens) = quadratic {
        let v = parse_kv(tokens, &["t", "r", "s"], "quadratic")?;
        CharFunc::quadratic(v[0], v[1], v[2])
            .map_err(|err| CliError::new(EXIT_SCHEMA, err.to_string()))?
    } else if let Some(list) = polynomial {
        let coeffs: Result<Vec<f64>, _> =
            list.split(',').map(|c| c.trim().parse::<f64>()).collect();
        let coeffs = coeffs.map_err(|_| {
            CliError::new(EXIT_SCHEMA, format!("--polynomial: bad coefficient in {list:?}"))
        })?;
        CharFunc::polynomial(coeffs).map_err(|err| CliError::new(EXIT_SCHEMA, err.to_string()))?
    } else if let Some(spec) = function {
        let text = if let Some(path) = spec.strip_prefix('@') {
            std::fs::read_to_string(path)?
        } else {
            spec.clone()
        };
        charfunc_from_json_strict(&text)?
    } else if let Some(f) = &config.function {
        f.clone()
    } else {
        return Err(CliError::new(
            EXIT_SCHEMA,
            "no characteristic function given (flag or config)".into(),
        ));
    };
    Ok(f)
}

/// Parses a function JSON object and rejects unknown keys (the tagged-enum
/// deserializer alone would silently drop them).
pub fn charfunc_from_json_strict(text: &str) -> Result<CharFunc, CliError> {
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|err| CliError::new(EXIT_SCHEMA, format!("function JSON: {err}")))?;
    let object = value
        .as_object()
        .ok_or_else(|| CliError::new(EXIT_SCHEMA, "function JSON must be an object".into()))?;
    let kind = object
        .get("kind")
        .and_then(|k| k.as_str())
        .ok_or_else(|| CliError::new(EXIT_SCHEMA, "function JSON needs a \"kind\" key".into()))?;
    let allowed: &[&str] = match kind {
        "linear" => &["kind", "r", "s"],
        "quadratic" => &["kind", "t", "r", "s"],
        "polynomial" => &["kind", "coeffs"],
        other => {
            return Err(CliError::new(
                EXIT_SCHEMA,
                format!("unknown function kind {other:?}"),
            ))
        }
    };
    for key in object.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(CliError::new(
                EXIT_SCHEMA,
                format!("function JSON: unknown key {key:?} for kind {kind:?}"),
            ));
        }
    }
    let f: CharFunc = serde_json::from_value(value)
        .map_err(|err| CliError::new(EXIT_SCHEMA, format!("function JSON: {err}")))?;
    f.validate()
        .map_err(|err| CliError::new(EXIT_SCHEMA, err.to_string()))?;
    Ok(f)
}

/// Parses `lo,hi` into an interval.
pub fn parse_interval(text: &str) -> Result<(f64, f64), CliError> {
    let bad = || CliError::new(EXIT_SCHEMA, format!("--interval: expected lo,hi, got {text:?}"));
    let (lo, hi) = text.split_once(',').ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    Ok((lo, hi))
}

/// Grid axis: either a single value or `start:stop:step` (inclusive stop).
pub fn parse_range(text: &str, flag: &str) -> Result<Vec<f64>, CliError> {
    let bad = |detail: &str| {
        CliError::new(
            EXIT_SCHEMA,
            format!("--{flag}: {detail} (expected VALUE or START:STOP:STEP, got {text:?})"),
        )
    };
    let parts: Vec<&str> = text.split(':').collect();
    match parts.len() {
        1 => {
            let v: f64 = parts[0].trim().parse().map_err(|_| bad("bad number"))?;
            Ok(vec![v])
        }
        3 => {
            let start: f64 = parts[0].trim().parse().map_err(|_| bad("bad start"))?;
            let stop: f64 = parts[1].trim().parse().map_err(|_| bad("bad stop"))?;
            let step: f64 = parts[2].trim().parse().map_err(|_| bad("bad step"))?;
            if step <= 0.0 || stop < start {
                return Err(bad("need step > 0 and stop >= start"));
            }
            let count = ((stop - start) / step + 1.5).floor() as usize;
            Ok((0..count)
                .map(|i| start + step * i as f64)
                .filter(|v| *v <= stop + step * 1e-9)
                .collect())
        }
        _ => Err(bad("wrong number of ':' parts")),
    }
}

/// Tolerance resolution: flag, then NLSL2_TOL, then config, then default.
pub fn resolve_tolerance(flag: Option<f64>, config: &RunConfig) -> Result<f64, CliError> {
    if let Some(t) = flag {
        return Ok(t);
    }
    if let Ok(text) = std::env::var("NLSL2_TOL") {
        return text.trim().parse().map_err(|_| {
            CliError::new(EXIT_SCHEMA, format!("NLSL2_TOL: bad number {text:?}"))
        });
    }
    Ok(config.tolerance.unwrap_or(nlsl2_core::tol::RELATION_PASS))
}
