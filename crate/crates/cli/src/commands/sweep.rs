//! `sweep`: conformal invariants tabulated over generator parameters.

use desitter::conformal::{
    conformal_invariants, constant_angle_curve, detect_spherical_points, mod_two_pi,
    osculating_canal, SPHERICAL_TOL, VERTEX_TOL,
};
use desitter::curves::generators::random_curve;
use desitter::curves::{detect_vertices, frenet_apparatus, PeriodicCurve};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::config::{Family, Options};
use crate::error::CliError;
use crate::generators::batch_seed;
use crate::report::{emit, envelope, to_value, write_csv, Outcome, Status};

#[derive(Debug, Clone, Serialize)]
struct Row {
    index: usize,
    family: &'static str,
    params: String,
    vertex_free: Option<bool>,
    margin: Option<f64>,
    spherical_points: Option<usize>,
    omega_total: Option<f64>,
    t_total: Option<f64>,
    total_torsion: Option<f64>,
    congruence_residual: Option<f64>,
    error: Option<String>,
}

enum Job {
    ConstantAngle {
        big_r: f64,
        small_r: f64,
        p: i64,
        q: i64,
    },
    Random {
        seed: u64,
    },
}

impl Job {
    fn family(&self) -> &'static str {
        match self {
            Job::ConstantAngle { .. } => "constant-angle",
            Job::Random { .. } => "random",
        }
    }

    fn params(&self) -> String {
        match self {
            Job::ConstantAngle {
                big_r,
                small_r,
                p,
                q,
            } => {
                format!("R={big_r};r={small_r};p={p};q={q}")
            }
            Job::Random { seed } => format!("seed={seed};degree=3"),
        }
    }

    fn curve(&self, n: usize) -> desitter::Result<PeriodicCurve> {
        match *self {
            Job::ConstantAngle {
                big_r,
                small_r,
                p,
                q,
            } => constant_angle_curve(big_r, small_r, p, q, n),
            Job::Random { seed } => random_curve(seed, 3, n),
        }
    }
}

fn evaluate(index: usize, job: &Job, n: usize) -> Row {
    let mut row = Row {
        index,
        family: job.family(),
        params: job.params(),
        vertex_free: None,
        margin: None,
        spherical_points: None,
        omega_total: None,
        t_total: None,
        total_torsion: None,
        congruence_residual: None,
        error: None,
    };
    let run = |row: &mut Row| -> desitter::Result<()> {
        let x = job.curve(n)?;
        let vr = detect_vertices(&frenet_apparatus(&x)?, VERTEX_TOL);
        row.vertex_free = Some(vr.vertex_free);
        row.margin = Some(vr.margin);
        if !vr.vertex_free {
            return Ok(());
        }
        let sp = detect_spherical_points(&osculating_canal(&x)?, SPHERICAL_TOL);
        row.spherical_points = Some(sp.points.len());
        let inv = conformal_invariants(&x)?;
        row.omega_total = Some(inv.total_abs_t);
        row.t_total = Some(inv.total_t);
        row.total_torsion = Some(inv.total_torsion);
        row.congruence_residual = Some(mod_two_pi(inv.total_t - inv.total_torsion).1);
        Ok(())
    };
    if let Err(e) = run(&mut row) {
        row.error = Some(e.to_string());
    }
    row
}

fn jobs(opts: &Options) -> Result<Vec<Job>, CliError> {
    match opts.family.unwrap_or(Family::ConstantAngle) {
        Family::ConstantAngle => {
            let big = opts.big_r.clone().unwrap_or_else(|| vec![2.0, 3.0, 4.0]);
            let small = opts.small_r.clone().unwrap_or_else(|| vec![1.0]);
            let ps = opts.p.clone().unwrap_or_else(|| vec![1, 2, 3]);
            let qs = opts.q.clone().unwrap_or_else(|| vec![1, 2, 3, 4, 5]);
            let mut out = Vec::new();
            for &big_r in &big {
                for &small_r in &small {
                    for &p in &ps {
                        for &q in &qs {
                            out.push(Job::ConstantAngle {
                                big_r,
                                small_r,
                                p,
                                q,
                            });
                        }
                    }
                }
            }
            Ok(out)
        }
        Family::Random => {
            let seed = opts.seed.unwrap_or(0);
            Ok((0..opts.count.unwrap_or(20))
                .map(|i| Job::Random {
                    seed: batch_seed(seed, i),
                })
                .collect())
        }
        f => Err(CliError::parse(format!(
            "--family {f:?} is not a curve family (expected constant-angle or random)"
        ))),
    }
}

pub fn run(opts: &Options) -> Result<Outcome, CliError> {
    let n = opts.samples_or(if opts.quick { 128 } else { 256 })?;
    let jobs = jobs(opts)?;
    let rows: Vec<Row> = jobs
        .par_iter()
        .enumerate()
        .map(|(i, j)| evaluate(i, j, n))
        .collect();
    if let Some(csv) = &opts.out_csv {
        write_csv(csv, &rows)?;
    }
    let mut result = json!({
        "samples": n,
        "count": rows.len(),
        "vertex_free": rows.iter().filter(|r| r.vertex_free == Some(true)).count(),
        "errors": rows.iter().filter(|r| r.error.is_some()).count(),
        "min_omega_total": rows.iter().filter_map(|r| r.omega_total).reduce(f64::min),
    });
    result["rows"] = to_value(&rows);
    emit(&envelope("sweep", Status::Ok, opts, result), opts)?;
    Ok(Outcome { status: Status::Ok })
}
