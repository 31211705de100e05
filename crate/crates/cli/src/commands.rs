//! Subcommand handlers. Every handler writes machine-first JSON or CSV and
//! returns the process exit code.

use std::io::{Read, Write};
use std::path::PathBuf;

use serde_json::json;

use nlsl2_core::hwsolver;
use nlsl2_core::jsonio::BuildDocument;
use nlsl2_core::qmap::{self, HalfInt, QDeformParams};
use nlsl2_core::repbuilder::{self, BuildMode};
use nlsl2_core::{algver, dynsys, tol, CharFunc};

use crate::config::RunConfig;
use crate::{CliError, EXIT_OK, EXIT_SCHEMA, EXIT_SOLVER, EXIT_VERIFY};

fn emit(output: Option<&PathBuf>, content: &str) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, content)?,
        None => {
            std::io::stdout().write_all(content.as_bytes())?;
        }
    }
    Ok(())
}

fn to_pretty(value: &serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable value");
    text.push('\n');
    text
}

pub fn analyze(f: &CharFunc, output: Option<&PathBuf>) -> Result<u8, CliError> {
    let is_upward_quadratic = matches!(f, CharFunc::Quadratic { t, .. } if *t > 0.0)
        || (f.degree() == 2 && f.coeffs()[2] > 0.0);
    let (classification, region) = if is_upward_quadratic {
        (
            Some(dynsys::classify_delta(f)?),
            dynsys::allowed_region(f)?,
        )
    } else {
        (None, None)
    };
    let fixed_points = dynsys::fixed_points(f)?;
    let value = json!({
        "function": f,
        "classification": classification,
        "fixed_points": fixed_points,
        "allowed_region": region,
    });
    emit(output, &to_pretty(&value))?;
    Ok(EXIT_OK)
}

pub fn cycles(f: &CharFunc, d: usize, output: Option<&PathBuf>) -> Result<u8, CliError> {
    let cycles = dynsys::find_cycles(f, d)?;
    let value = json!({
        "function": f,
        "d": d,
        "cycles": cycles,
    });
    emit(output, &to_pretty(&value))?;
    Ok(EXIT_OK)
}

pub fn cut(
    f: &CharFunc,
    d: usize,
    interval: Option<(f64, f64)>,
    output: Option<&PathBuf>,
) -> Result<u8, CliError> {
    let interval = interval.unwrap_or_else(|| hwsolver::default_interval(f));
    let closed_form = match f {
        CharFunc::Linear { r, s } => hwsolver::solve_cut_linear(*r, *s, d).ok(),
        _ => None,
    };
    let solutions = hwsolver::solve_cut_general(f, d, interval)?;
    let value = json!({
        "function": f,
        "d": d,
        "interval": [interval.0, interval.1],
        "closed_form": closed_form,
        "solutions": solutions,
    });
    emit(output, &to_pretty(&value))?;
    Ok(EXIT_OK)
}

pub enum LadderSource {
    AlphaJ(f64),
    CutIndex(usize),
    CycleIndex(usize),
}

#[allow(clippy::too_many_arguments)]
pub fn build(
    f: &CharFunc,
    d: usize,
    source: LadderSource,
    mode: BuildMode,
    interval: Option<(f64, f64)>,
    pretty: bool,
    output: Option<&PathBuf>,
) -> Result<u8, CliError> {
    let ladder = match source {
        LadderSource::AlphaJ(alpha) => {
            let fd = f.iterate_last(alpha, d)?;
            let scale = 1.0 + alpha.abs();
            if (alpha + fd + 1.0).abs() < tol::TERMINATION * scale {
                hwsolver::ladder_from_cut(f, alpha, d)?
            } else if (fd - alpha).abs() < tol::TERMINATION * scale {
                let mut points = f.iterate(alpha, d - 1)?;
                let top = points
                    .iter()
                    .cloned()
                    .fold(f64::NEG_INFINITY, f64::max);
                while (points[0] - top).abs() > 0.0 {
                    points.rotate_left(1);
                }
                let multiplier: f64 = points.iter().map(|&p| f.derivative(p)).product();
                let cycle = dynsys::CycleReport {
                    period: d,
                    points,
                    multiplier,
                    stability: dynsys::Stability::from_multiplier(multiplier),
                };
                hwsolver::ladder_from_cycle(&cycle, f)?
            } else {
                return Err(CliError::new(
                    EXIT_SOLVER,
                    format!(
                        "alpha_j = {alpha} closes no d = {d} ladder: cut residual {:.3e}, cycle residual {:.3e}",
                        (alpha + fd + 1.0).abs(),
                        (fd - alpha).abs()
                    ),
                ));
            }
        }
        LadderSource::CutIndex(index) => {
            let interval = interval.unwrap_or_else(|| hwsolver::default_interval(f));
            let solutions = hwsolver::solve_cut_general(f, d, interval)?;
            let sol = solutions.get(index).ok_or_else(|| {
                CliError::new(
                    EXIT_SOLVER,
                    format!(
                        "cut index {index} out of range: {} solutions in [{}, {}]",
                        solutions.len(),
                        interval.0,
                        interval.1
                    ),
                )
            })?;
            hwsolver::ladder_from_cut(f, sol.alpha_j, d)?
        }
        LadderSource::CycleIndex(index) => {
            let cycles = dynsys::find_cycles(f, d)?;
            let cycle = cycles.get(index).ok_or_else(|| {
                CliError::new(
                    EXIT_SOLVER,
                    format!("cycle index {index} out of range: {} cycles", cycles.len()),
                )
            })?;
            hwsolver::ladder_from_cycle(cycle, f)?
        }
    };
    let rep = repbuilder::build(&ladder, mode)?;
    let doc = BuildDocument::new(&ladder, &rep);
    let text = if pretty {
        let mut dump = String::new();
        for (name, matrix) in [
            ("J0", &rep.j0),
            ("J+", &rep.jplus),
            ("J-", &rep.jminus),
            ("C", &rep.casimir),
        ] {
            dump.push_str(name);
            dump.push_str(" =\n");
            dump.push_str(&repbuilder::format_matrix(matrix));
            dump.push_str("\n\n");
        }
        dump
    } else {
        serde_json::to_string_pretty(&doc).expect("serializable document") + "\n"
    };
    emit(output, &text)?;
    Ok(EXIT_OK)
}

pub fn verify(
    input: Option<&PathBuf>,
    tolerance: f64,
    output: Option<&PathBuf>,
) -> Result<u8, CliError> {
    let text = match input {
        Some(path) => std::fs::read_to_string(path)?,
        None => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf)?;
            buf
        }
    };
    let doc: BuildDocument = serde_json::from_str(&text)
        .map_err(|err| CliError::new(EXIT_SCHEMA, format!("build document: {err}")))?;
    doc.function
        .validate()
        .map_err(|err| CliError::new(EXIT_SCHEMA, err.to_string()))?;
    let rep = doc.to_representation()?;
    let report = algver::check_relations_with(&rep, &doc.function, tolerance)?;

    let mut value = serde_json::to_value(&report).expect("serializable report");
    value["mode"] = serde_json::to_value(doc.mode).unwrap();
    value["d"] = json!(rep.d);
    emit(output, &to_pretty(&value))?;
    if report.passed {
        Ok(EXIT_OK)
    } else {
        eprintln!("verification failed (tolerance {tolerance:e})");
        Ok(EXIT_VERIFY)
    }
}

pub fn qmap_cmd(
    q: f64,
    j: &str,
    s: f64,
    alpha_j: Option<f64>,
    output: Option<&PathBuf>,
) -> Result<u8, CliError> {
    let j: HalfInt = j
        .parse()
        .map_err(|err: nlsl2_core::Error| CliError::new(EXIT_SCHEMA, err.to_string()))?;
    let d = j.dimension();
    let alpha = match alpha_j {
        Some(a) => a,
        None => hwsolver::solve_cut_linear(q * q, s, d)?,
    };
    let params = QDeformParams::new(q, j, s, alpha)?;
    let residuals = qmap::verify_map(&params)?;
    let slq = qmap::build_slq2(j, q)?;
    let (raising, lowering, commutator) = qmap::slq2_relation_residuals(&slq, q);
    let value = json!({
        "q": q,
        "j": j.to_string(),
        "d": d,
        "s": s,
        "alpha_j": alpha,
        "r": q * q,
        "map_residuals": residuals,
        "slq2_relations": {
            "raising": raising,
            "lowering": lowering,
            "commutator": commutator,
        },
    });
    emit(output, &to_pretty(&value))?;
    Ok(EXIT_OK)
}

pub fn cobweb(
    f: &CharFunc,
    x0: f64,
    steps: usize,
    output: Option<&PathBuf>,
) -> Result<u8, CliError> {
    let segments = dynsys::cobweb_trace(f, x0, steps)?;
    let mut buf = Vec::new();
    dynsys::cobweb_csv(&mut buf, x0, &segments)?;
    let text = String::from_utf8(buf).expect("csv is utf-8");
    emit(output, &text)?;
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
pub fn sweep(
    ts: &[f64],
    rs: &[f64],
    ss: &[f64],
    d: usize,
    jobs: Option<usize>,
    config: &RunConfig,
    output: Option<&PathBuf>,
) -> Result<u8, CliError> {
    let _ = config;
    let grid: Vec<(f64, f64, f64)> = ts
        .iter()
        .flat_map(|&t| {
            rs.iter()
                .flat_map(move |&r| ss.iter().map(move |&s| (t, r, s)))
        })
        .collect();

    let solve_point = |&(t, r, s): &(f64, f64, f64)| -> Vec<String> {
        let f = if t == 0.0 {
            CharFunc::linear(r, s)
        } else {
            match CharFunc::quadratic(t, r, s) {
                Ok(f) => f,
                Err(_) => return Vec::new(),
            }
        };
        let interval = hwsolver::default_interval(&f);
        match hwsolver::solve_cut_general(&f, d, interval) {
            Ok(solutions) => solutions
                .iter()
                .map(|sol| format!("{t},{r},{s},{d},{},{}", sol.alpha_j, sol.unitary))
                .collect(),
            Err(_) => Vec::new(),
        }
    };

    // Deterministic output: rows are collected in grid order no matter how
    // the pool schedules the points.
    let rows: Vec<Vec<String>> = match jobs {
        Some(jobs) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.max(1))
                .build()
                .map_err(|err| CliError::new(EXIT_SOLVER, err.to_string()))?;
            pool.install(|| {
                use rayon::prelude::*;
                grid.par_iter().map(solve_point).collect()
            })
        }
        None => grid.iter().map(solve_point).collect(),
    };

    let mut text = String::from("t,r,s,d,alpha_j,unitary\n");
    for group in rows {
        for row in group {
            text.push_str(&row);
            text.push('\n');
        }
    }
    emit(output, &text)?;
    Ok(EXIT_OK)
}
