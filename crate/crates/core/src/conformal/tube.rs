use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::canal::mesh::{CircleSweep, MeshReport};
use crate::curves::{lightcone_jet, PeriodicCurve};
use crate::error::{GeomError, Result};
use crate::spheremodel::{project_null, CircleFrame};

/// Surface swept by the osculating circles of a space curve.
///
/// Row `j = 0` of the grid is the curve itself, where the surface folds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureTube {
    pub report: MeshReport,
    pub n_t: usize,
    pub n_theta: usize,
    /// Mean `|P_t × P_θ|` over each circle angle row.
    pub jacobian_rows: Vec<f64>,
    /// Row with the smallest mean Jacobian.
    pub singular_row: usize,
    /// Largest distance from a row-0 vertex to the curve sample.
    pub curve_residual: f64,
    /// Fraction of circles whose smallest Jacobian sits on the curve point.
    pub fold_fraction: f64,
    /// Largest Jacobian on the curve relative to the median over the grid.
    pub fold_jacobian: f64,
    /// Mesh vertex indices along the singular locus.
    pub singular_vertices: Vec<usize>,
}

fn frame(x: &PeriodicCurve, t: f64) -> Result<CircleFrame> {
    let g = lightcone_jet(x, t, 2)?;
    Ok(CircleFrame::from_span(&g)?.anchored_at(&g[0]))
}

fn surface(x: &PeriodicCurve, t: f64, theta: f64) -> Result<[f64; 3]> {
    project_null(&frame(x, t)?.point(theta))
        .point()
        .ok_or(GeomError::PointAtInfinity)
}

/// Meshes the curvature tube on an `n_t × n_θ` grid and locates its singular row.
pub fn curvature_tube_mesh(x: &PeriodicCurve, n_t: usize, n_theta: usize) -> Result<CurvatureTube> {
    if n_t < 3 || n_theta < 4 {
        return Err(GeomError::TooFewSamples {
            min: 4,
            got: n_t.min(n_theta),
        });
    }
    let period = x.period();
    let params: Vec<f64> = (0..n_t).map(|i| period * i as f64 / n_t as f64).collect();
    let frames = params
        .iter()
        .map(|&t| frame(x, t))
        .collect::<Result<Vec<_>>>()?;
    let report = CircleSweep::from_frames(params.clone(), frames).mesh(n_theta);
    if report.culled_vertices > 0 {
        return Err(GeomError::PointAtInfinity);
    }

    let (ht, hth) = (1e-5 * period, 1e-5);
    let mut jacobian = vec![vec![0.0; n_theta]; n_t];
    for (i, &t) in params.iter().enumerate() {
        for j in 0..n_theta {
            let th = TAU * j as f64 / n_theta as f64;
            let (a, b) = (surface(x, t + ht, th)?, surface(x, t - ht, th)?);
            let (c, d) = (surface(x, t, th + hth)?, surface(x, t, th - hth)?);
            let pt: Vec<f64> = (0..3).map(|k| (a[k] - b[k]) / (2.0 * ht)).collect();
            let pth: Vec<f64> = (0..3).map(|k| (c[k] - d[k]) / (2.0 * hth)).collect();
            let n = [
                pt[1] * pth[2] - pt[2] * pth[1],
                pt[2] * pth[0] - pt[0] * pth[2],
                pt[0] * pth[1] - pt[1] * pth[0],
            ];
            jacobian[i][j] = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        }
    }
    let jacobian_rows: Vec<f64> = (0..n_theta)
        .map(|j| jacobian.iter().map(|r| r[j]).sum::<f64>() / n_t as f64)
        .collect();
    let fold_fraction = jacobian
        .iter()
        .filter(|r| (1..n_theta).all(|j| r[0] < r[j]))
        .count() as f64
        / n_t as f64;
    let mut all: Vec<f64> = jacobian.iter().flatten().copied().collect();
    all.sort_by(f64::total_cmp);
    let median = all[all.len() / 2];
    let fold_jacobian = jacobian.iter().map(|r| r[0]).fold(0.0, f64::max) / median;
    let singular_row = (0..n_theta)
        .min_by(|&a, &b| jacobian_rows[a].total_cmp(&jacobian_rows[b]))
        .unwrap_or(0);

    let mesh = &report.mesh;
    let singular_vertices: Vec<usize> = (0..n_t).map(|i| i * n_theta).collect();
    let curve_residual = params
        .iter()
        .zip(&singular_vertices)
        .map(|(&t, &v)| {
            let p = x.eval(t);
            let q = mesh.vertices[v];
            ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt()
        })
        .fold(0.0, f64::max);

    Ok(CurvatureTube {
        report,
        n_t,
        n_theta,
        jacobian_rows,
        singular_row,
        curve_residual,
        fold_fraction,
        fold_jacobian,
        singular_vertices,
    })
}

/// Singular-locus annotation: one `t index x y z` line per curve vertex.
pub fn singular_locus_text(tube: &CurvatureTube) -> String {
    let mut s = String::from("# t_index vertex x y z\n");
    for (i, &v) in tube.singular_vertices.iter().enumerate() {
        let p = tube.report.mesh.vertices[v];
        s.push_str(&format!(
            "{i} {} {:.12} {:.12} {:.12}\n",
            v + 1,
            p[0],
            p[1],
            p[2]
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::generators::trefoil;

    #[test]
    fn trefoil_tube_folds_along_the_curve() {
        let x = trefoil(128).unwrap();
        let tube = curvature_tube_mesh(&x, 48, 24).unwrap();
        assert_eq!(tube.singular_row, 0);
        assert!(tube.curve_residual < 1e-9, "{}", tube.curve_residual);
        assert_eq!(tube.fold_fraction, 1.0);
        assert!(tube.fold_jacobian < 1e-6, "{}", tube.fold_jacobian);
        assert!(!tube.report.degenerate);
    }
}
