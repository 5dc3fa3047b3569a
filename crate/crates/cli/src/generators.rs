//! Built-in generators and curve input.
//!
//! A generator spec is `name[:key=value,...]`, for example
//! `torus-knot:p=3,q=2,R=3,r=1` or `constant-angle:R=3,r=1,p=2,q=3`.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use desitter::canal::{
    dupin_cyclide_canal, minimal_drill, pencil_geodesic, random_path, CanalPath, RandomFamily,
};
use desitter::conformal::constant_angle_curve;
use desitter::curves::generators::{
    circle, ellipse, random_curve, spherical_curve, torus_knot, trefoil,
};
use desitter::curves::{CurveData, PeriodicCurve};
use desitter::LorentzVector;
use serde::Serialize;

use crate::config::{Family, Options};
use crate::error::CliError;

pub const CURVE_GENERATORS: [&str; 7] = [
    "trefoil",
    "torus-knot",
    "circle",
    "ellipse",
    "spherical",
    "random",
    "constant-angle",
];
pub const CANAL_GENERATORS: [&str; 4] = ["cyclide", "minimal-drill", "geodesic", "random-path"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenSpec {
    pub name: String,
    pub params: BTreeMap<String, f64>,
}

impl GenSpec {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut params = BTreeMap::new();
        for kv in rest.split(',').filter(|kv| !kv.trim().is_empty()) {
            let (k, v) = kv.split_once('=').ok_or_else(|| {
                CliError::parse(format!("generator parameter `{kv}` is not key=value"))
            })?;
            let v: f64 = v.trim().parse().map_err(|_| {
                CliError::parse(format!("generator parameter `{kv}` is not numeric"))
            })?;
            params.insert(k.trim().to_string(), v);
        }
        Ok(Self {
            name: name.trim().to_string(),
            params,
        })
    }

    fn check_keys(&self, allowed: &[&str]) -> Result<(), CliError> {
        match self.params.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(CliError::parse(format!(
                "generator `{}` has no parameter `{k}` (expected one of {allowed:?})",
                self.name
            ))),
            None => Ok(()),
        }
    }

    fn get(&self, key: &str, default: f64) -> f64 {
        self.params.get(key).copied().unwrap_or(default)
    }

    fn int(&self, key: &str, default: i64) -> Result<i64, CliError> {
        let v = self.get(key, default as f64);
        if v.fract() != 0.0 {
            return Err(CliError::parse(format!(
                "`{key}` must be an integer, got {v}"
            )));
        }
        Ok(v as i64)
    }
}

fn unsigned(v: i64, key: &str) -> Result<u32, CliError> {
    u32::try_from(v).map_err(|_| CliError::precondition(format!("`{key}` must be non-negative")))
}

/// Space curve from a generator spec, sampled on `n` points.
pub fn curve_from_spec(spec: &GenSpec, n: usize, seed: u64) -> Result<PeriodicCurve, CliError> {
    let curve = match spec.name.as_str() {
        "trefoil" => {
            spec.check_keys(&[])?;
            trefoil(n)?
        }
        "torus-knot" => {
            spec.check_keys(&["p", "q", "R", "r"])?;
            torus_knot(
                unsigned(spec.int("p", 2)?, "p")?,
                unsigned(spec.int("q", 3)?, "q")?,
                spec.get("R", 2.0),
                spec.get("r", 1.0),
                n,
            )?
        }
        "circle" => {
            spec.check_keys(&["radius"])?;
            circle(spec.get("radius", 1.0), n)?
        }
        "ellipse" => {
            spec.check_keys(&["a", "b"])?;
            ellipse(spec.get("a", 2.0), spec.get("b", 1.0), n)?
        }
        "spherical" => {
            spec.check_keys(&["radius", "a", "b"])?;
            spherical_curve(
                spec.get("radius", 1.0),
                spec.get("a", 0.3),
                spec.get("b", 0.2),
                n,
            )?
        }
        "random" => {
            spec.check_keys(&["seed", "degree"])?;
            let seed = spec.int("seed", seed as i64)?;
            let degree = spec.int("degree", 3)?;
            if seed < 0 || degree < 1 {
                return Err(CliError::precondition("need seed >= 0 and degree >= 1"));
            }
            random_curve(seed as u64, degree as usize, n)?
        }
        "constant-angle" => {
            spec.check_keys(&["R", "r", "p", "q"])?;
            constant_angle_curve(
                spec.get("R", 3.0),
                spec.get("r", 1.0),
                spec.int("p", 2)?,
                spec.int("q", 3)?,
                n,
            )?
        }
        other => {
            return Err(CliError::parse(format!(
                "unknown curve generator `{other}` (expected one of {CURVE_GENERATORS:?})"
            )))
        }
    };
    Ok(curve)
}

pub fn read_curve(path: &std::path::PathBuf) -> Result<PeriodicCurve, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let data: CurveData = serde_json::from_str(&text)
        .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
    Ok(PeriodicCurve::from_data(data)?)
}

/// Where a curve or path came from, for reports.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Source {
    Input { path: String, samples: usize },
    Generator { spec: GenSpec, samples: usize },
}

/// The space curve selected by `--input` or `--generator` (default trefoil).
///
/// Input curves are resampled when `--samples` is given.
pub fn space_curve(opts: &Options) -> Result<(PeriodicCurve, Source), CliError> {
    if let Some(path) = &opts.input {
        let mut x = read_curve(path)?;
        if x.dim() != 3 {
            return Err(CliError::precondition(format!(
                "expected a space curve (dimension 3), got dimension {}",
                x.dim()
            )));
        }
        if opts.samples.is_some() {
            x = x.resampled(opts.samples_or(x.len())?)?;
        }
        let samples = x.len();
        return Ok((
            x,
            Source::Input {
                path: path.display().to_string(),
                samples,
            },
        ));
    }
    let spec = GenSpec::parse(opts.generator.as_deref().unwrap_or("trefoil"))?;
    let n = opts.samples_or(256)?;
    let x = curve_from_spec(&spec, n, opts.seed.unwrap_or(0))?;
    Ok((x, Source::Generator { spec, samples: n }))
}

/// Cyclide centre from `--x KIND VALUE`; the plane directions are `e₁, e₂`.
pub fn cyclide_centre(x: &Option<Vec<String>>) -> Result<LorentzVector, CliError> {
    let Some(v) = x else {
        return Ok(LorentzVector::basis(4));
    };
    let [kind, value] = v.as_slice() else {
        return Err(CliError::parse("--x takes KIND VALUE"));
    };
    let a: f64 = value
        .parse()
        .map_err(|_| CliError::parse(format!("--x value `{value}` is not numeric")))?;
    let e = LorentzVector::basis;
    match kind.as_str() {
        "timelike" => Ok(e(4) * a),
        "spacelike" => Ok(e(2) * a),
        "lightlike" => Ok((e(2) + e(4)) * a),
        other => Err(CliError::parse(format!(
            "--x kind `{other}` (expected timelike, spacelike or lightlike)"
        ))),
    }
}

/// Rewrites bare `sin` and `cos` as `sin(s)` and `cos(s)`.
fn expand_shorthand(expr: &str) -> String {
    let mut out = String::with_capacity(expr.len());
    let mut rest = expr;
    while let Some(i) = rest.find(|c: char| c.is_ascii_alphabetic() || c == '_') {
        out.push_str(&rest[..i]);
        rest = &rest[i..];
        let end = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(rest.len());
        let (word, tail) = rest.split_at(end);
        out.push_str(word);
        if matches!(word, "sin" | "cos") && !tail.trim_start().starts_with('(') {
            out.push_str("(s)");
        }
        rest = tail;
    }
    out.push_str(rest);
    out
}

/// Samples `λ(s)` given as an arithmetic expression in `s`; bare `sin` and
/// `cos` stand for `sin(s)` and `cos(s)`.
pub fn lambda_profile(expr: &str, n: usize) -> Result<PeriodicCurve, CliError> {
    use exmex::Express;
    let err = |e: &dyn std::fmt::Display| CliError::parse(format!("--lambda `{expr}`: {e}"));
    let parsed = exmex::parse::<f64>(&expand_shorthand(expr)).map_err(|e| err(&e))?;
    let uses_s = match parsed.var_names() {
        [] => false,
        [v] if v == "s" => true,
        other => {
            return Err(err(&format!(
                "unknown variables {other:?}, only `s` is allowed"
            )))
        }
    };
    let rows = (0..n)
        .map(|j| {
            let s = TAU * j as f64 / n as f64;
            let args: &[f64] = if uses_s { &[s] } else { &[] };
            parsed.eval(args).map(|v| vec![v]).map_err(|e| err(&e))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PeriodicCurve::from_samples(rows, TAU)?)
}

pub fn random_family(opts: &Options) -> Result<RandomFamily, CliError> {
    match opts.family {
        None | Some(Family::PerturbedCyclide) => Ok(RandomFamily::PerturbedCyclide),
        Some(Family::Fourier) => Ok(RandomFamily::Fourier),
        Some(f) => Err(CliError::parse(format!(
            "--family {f:?} does not describe random paths"
        ))),
    }
}

/// Seed of the `i`-th path of a batch started at `seed`.
pub fn batch_seed(seed: u64, i: usize) -> u64 {
    (seed << 32) | i as u64
}

/// A single path in Λ⁴ from `--input` (dimension 5) or a canal generator.
pub fn canal_path(opts: &Options) -> Result<(CanalPath, Source), CliError> {
    if let Some(path) = &opts.input {
        let x = read_curve(path)?;
        if x.dim() != 5 {
            return Err(CliError::precondition(format!(
                "expected a path in R^5 (dimension 5), got dimension {}",
                x.dim()
            )));
        }
        let samples = x.len();
        return Ok((
            CanalPath::from_curve(x)?,
            Source::Input {
                path: path.display().to_string(),
                samples,
            },
        ));
    }
    let spec = GenSpec::parse(opts.generator.as_deref().unwrap_or("cyclide"))?;
    spec.check_keys(&[])?;
    let grid = opts.samples_or(512)?;
    let e = LorentzVector::basis;
    let path = match spec.name.as_str() {
        "cyclide" => CanalPath::from_path(
            dupin_cyclide_canal(cyclide_centre(&opts.x)?, [e(0), e(1)])?,
            grid,
        )?,
        "minimal-drill" => {
            let lambda = lambda_profile(opts.lambda.as_deref().unwrap_or("2+sin"), 256)?;
            CanalPath::from_path(minimal_drill(lambda, e(3) + e(4), e(0), e(1))?, grid)?
        }
        "geodesic" => CanalPath::from_path(pencil_geodesic(e(0), e(1))?, grid)?,
        "random-path" => CanalPath::from_path(
            random_path(opts.seed.unwrap_or(0), random_family(opts)?),
            grid,
        )?,
        other => {
            return Err(CliError::parse(format!(
                "unknown canal generator `{other}` (expected one of {CANAL_GENERATORS:?} or `random` for batches)"
            )))
        }
    };
    Ok((
        path,
        Source::Generator {
            spec,
            samples: grid,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shorthand() {
        assert_eq!(expand_shorthand("2+sin"), "2+sin(s)");
        assert_eq!(
            expand_shorthand("2 + 0.5*cos (3*s) - sin"),
            "2 + 0.5*cos (3*s) - sin(s)"
        );
        assert_eq!(expand_shorthand("sinh(s)+1"), "sinh(s)+1");
    }

    #[test]
    fn profiles() {
        let p = lambda_profile("2+sin", 64).unwrap();
        assert!((p.eval(TAU / 4.0)[0] - 3.0).abs() < 1e-12);
        assert!((lambda_profile("3", 64).unwrap().eval(1.0)[0] - 3.0).abs() < 1e-12);
        assert!(lambda_profile("2+t", 64).is_err());
        assert!(lambda_profile("2+", 64).is_err());
    }
}
