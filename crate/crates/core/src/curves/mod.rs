//! Closed space curves: spectral representation, Frenet apparatus, vertices,
//! osculating circles and spheres, contact oracles and light-cone lifts.

pub mod contact;
pub mod frenet;
pub mod generators;
pub mod periodic;

pub use contact::{bouquet_contact_oracle, ContactEstimate, ContactTarget};
pub use frenet::{
    arclength_reparametrize, curve_length, detect_vertices, frenet_apparatus, frenet_at,
    frenet_from_jet, osculating_circle, osculating_sphere, vertex_function, ArcLengthTable,
    EuclideanCircle, FrenetData, FrenetPoint, VertexReport,
};
pub use periodic::{curve_from_samples, CurveData, PeriodicCurve};

use crate::error::{GeomError, Result};
use crate::lorentz::LorentzVector;
use crate::spheremodel::{inverse_stereographic, null_lift};

/// Lift to the section `x₅ = 1` of the light cone through inverse stereographic projection.
pub fn lift_to_lightcone(c: &PeriodicCurve) -> Result<PeriodicCurve> {
    if c.dim() != 3 {
        return Err(GeomError::Dimension {
            expected: 3,
            got: c.dim(),
        });
    }
    c.map_samples(|p| {
        inverse_stereographic(&[p[0], p[1], p[2]])
            .gamma()
            .0
            .to_vec()
    })
}

fn binomial_row(n: usize) -> Vec<f64> {
    let mut row = vec![1.0];
    for k in 1..=n {
        row.push(row[k - 1] * (n + 1 - k) as f64 / k as f64);
    }
    row
}

/// Derivatives of orders `0..=max_order` of the null curve `(2x, |x|²−1, |x|²+1)`.
///
/// This section is polynomial in `x`, so its derivatives are exact products of
/// the spectral derivatives of `x`.
pub fn lightcone_jet(c: &PeriodicCurve, t: f64, max_order: usize) -> Result<Vec<LorentzVector>> {
    let x = c.jet3(t, max_order)?;
    Ok((0..=max_order)
        .map(|n| {
            let binom = binomial_row(n);
            let s: f64 = (0..=n).map(|i| binom[i] * x[i].dot(&x[n - i])).sum();
            if n == 0 {
                null_lift(&[x[0].x, x[0].y, x[0].z])
            } else {
                LorentzVector::new(2.0 * x[n].x, 2.0 * x[n].y, 2.0 * x[n].z, s, s)
            }
        })
        .collect())
}
