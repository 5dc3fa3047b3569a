//! `analyze-canal`: classification, length and the 2π bound, for one path
//! or for a seeded batch of random paths.

use std::f64::consts::TAU;

use desitter::canal::{
    classify, envelope_mesh, random_path, verify_2pi_bound, BoundVerdict, CanalPath, Verdict,
};
use desitter::lorentz::DEFAULT_CAUSAL_TOL;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::config::{Filter, Options};
use crate::error::CliError;
use crate::generators::{batch_seed, canal_path, random_family, GenSpec};
use crate::report::{emit, envelope, to_value, write_csv, write_file, Measure, Outcome, Status};

const BOUND_TOL: f64 = 1e-9;
const LENGTH_TOL: f64 = 1e-12;

#[derive(Serialize)]
struct SampleRow {
    t: f64,
    tangent_quad: f64,
    kg_quad: Option<f64>,
}

#[derive(Serialize)]
struct BatchRow {
    index: usize,
    seed: u64,
    classification: Verdict,
    length: Option<f64>,
    margin: Option<f64>,
    verdict: BoundVerdict,
}

pub fn run(opts: &Options) -> Result<Outcome, CliError> {
    let is_batch = opts
        .generator
        .as_deref()
        .map(|g| GenSpec::parse(g).map(|s| s.name == "random"))
        .transpose()?
        .unwrap_or(false);
    if is_batch && opts.input.is_none() {
        batch(opts)
    } else {
        single(opts)
    }
}

fn single(opts: &Options) -> Result<Outcome, CliError> {
    let tol = opts.tol_or(BOUND_TOL)?;
    let (path, source) = canal_path(opts)?;
    let class = classify(&path, DEFAULT_CAUSAL_TOL);
    let bound = verify_2pi_bound(&path, tol);
    let length = path.length()?;

    let mut result = json!({
        "source": source,
        "classification": class,
        "length": Measure::info(length, LENGTH_TOL),
        "bound": {
            "verdict": bound.verdict,
            "length": match bound.verdict {
                BoundVerdict::NotApplicable => Measure::info(length, LENGTH_TOL),
                _ => Measure::at_least(length, TAU, tol),
            },
            "equality_family_detected": bound.equality_family_detected,
            "direction_deviation": bound.direction_deviation,
        },
    });
    if let Some(obj) = &opts.out_obj {
        let m = envelope_mesh(&path, opts.nt.unwrap_or(96), opts.ntheta.unwrap_or(64))?;
        write_file(obj, &m.mesh.to_obj())?;
        result["mesh"] = json!({
            "path": obj.display().to_string(),
            "vertices": m.mesh.vertices.len(),
            "triangles": m.mesh.triangles.len(),
            "degenerate": m.degenerate,
        });
    }
    if opts.per_sample {
        result["per_sample"] = to_value(&sample_rows(&path));
    }
    if let Some(csv) = &opts.out_csv {
        write_csv(csv, &sample_rows(&path))?;
    }
    let status = if bound.verdict == BoundVerdict::Fail {
        Status::VerificationFailed
    } else {
        Status::Ok
    };
    emit(&envelope("analyze-canal", status, opts, result), opts)?;
    Ok(Outcome { status })
}

fn sample_rows(path: &CanalPath) -> Vec<SampleRow> {
    path.samples()
        .iter()
        .map(|s| SampleRow {
            t: s.t,
            tangent_quad: s.tangent.quad(),
            kg_quad: s.kg.map(|k| k.quad()),
        })
        .collect()
}

fn batch_row(index: usize, seed: u64, opts: &Options, tol: f64) -> Result<BatchRow, CliError> {
    let grid = opts.samples_or(256)?;
    let p = random_path(seed, random_family(opts)?);
    Ok(match CanalPath::from_path(p, grid) {
        Ok(c) => {
            let b = verify_2pi_bound(&c, tol);
            BatchRow {
                index,
                seed,
                classification: b.classification,
                length: b.length,
                margin: b.margin,
                verdict: b.verdict,
            }
        }
        Err(_) => BatchRow {
            index,
            seed,
            classification: Verdict::NotCanal,
            length: None,
            margin: None,
            verdict: BoundVerdict::NotApplicable,
        },
    })
}

fn batch(opts: &Options) -> Result<Outcome, CliError> {
    let spec = GenSpec::parse(opts.generator.as_deref().unwrap_or("random"))?;
    if !spec.params.is_empty() {
        return Err(CliError::parse(
            "generator `random` takes no parameters; use --seed, --count, --family",
        ));
    }
    let tol = opts.tol_or(BOUND_TOL)?;
    let count = opts.count.unwrap_or(100);
    let seed = opts.seed.unwrap_or(0);
    let keep = |r: &BatchRow| match opts.filter.unwrap_or(Filter::All) {
        Filter::All => true,
        Filter::AlmostRegular => r.classification.is_almost_regular(),
    };

    // Draw in parallel chunks until `count` rows pass the filter.
    let mut rows = Vec::with_capacity(count);
    let mut next = 0usize;
    let max_draws = count.saturating_mul(100).max(1000);
    while rows.len() < count && next < max_draws {
        let chunk = (count - rows.len()).max(64);
        let drawn: Vec<BatchRow> = (next..next + chunk)
            .into_par_iter()
            .map(|i| batch_row(i, batch_seed(seed, i), opts, tol))
            .collect::<Result<_, _>>()?;
        next += chunk;
        rows.extend(drawn.into_iter().filter(|r| keep(r)));
    }
    rows.truncate(count);
    if rows.len() < count {
        return Err(CliError::precondition(format!(
            "only {} of {count} paths passed the filter after {next} draws",
            rows.len()
        )));
    }

    let bounded: Vec<&BatchRow> = rows
        .iter()
        .filter(|r| r.verdict != BoundVerdict::NotApplicable)
        .collect();
    let min_length = bounded
        .iter()
        .filter_map(|r| r.length)
        .fold(f64::INFINITY, f64::min);
    let failures = bounded
        .iter()
        .filter(|r| r.verdict == BoundVerdict::Fail)
        .count();
    let mut verdicts = std::collections::BTreeMap::new();
    for r in &rows {
        *verdicts
            .entry(
                to_value(&r.classification)
                    .as_str()
                    .unwrap_or("")
                    .to_string(),
            )
            .or_insert(0usize) += 1;
    }
    if let Some(csv) = &opts.out_csv {
        write_csv(csv, &rows)?;
    }
    let mut result = json!({
        "source": { "kind": "generator", "spec": spec, "samples": opts.samples_or(256)? },
        "count": rows.len(),
        "draws": next,
        "classifications": verdicts,
        "bound_checked": bounded.len(),
        "bound_failures": failures,
        "min_length": if bounded.is_empty() {
            serde_json::Value::Null
        } else {
            to_value(&Measure::at_least(min_length, TAU, tol))
        },
    });
    if opts.per_sample {
        result["paths"] = to_value(&rows);
    }
    let status = if failures > 0 {
        Status::VerificationFailed
    } else {
        Status::Ok
    };
    emit(&envelope("analyze-canal", status, opts, result), opts)?;
    Ok(Outcome { status })
}
