use super::CanalPath;
use crate::error::Result;
use crate::lorentz::{causal_type, CausalType, LorentzVector};

/// `φ_t(s) = cos(s+t)σ(s) − sin(s+t)σ̇(s)` along the arc length `s` of a canal.
///
/// Not periodic in general, since the canal length need not be a multiple of 2π.
#[derive(Debug, Clone)]
pub struct Involute {
    path: CanalPath,
    offset: f64,
    total_length: f64,
}

pub fn involute(path: &CanalPath, t_offset: f64) -> Result<Involute> {
    let total_length = path.length()?;
    Ok(Involute {
        path: path.clone(),
        offset: t_offset,
        total_length,
    })
}

impl Involute {
    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Arc length of the underlying canal, the natural domain of `s`.
    pub fn domain_length(&self) -> f64 {
        self.total_length
    }

    pub fn eval(&self, s: f64) -> Result<LorentzVector> {
        let t = self.path.param_at_arclength(s)?;
        let [sigma, dsigma, _] = self.path.unit_speed_jet(t)?;
        let (sn, cs) = (s + self.offset).sin_cos();
        Ok(sigma * cs - dsigma * sn)
    }

    /// `φ'_t(s) = −sin(s+t)·k_g(s)`.
    pub fn derivative(&self, s: f64) -> Result<LorentzVector> {
        let t = self.path.param_at_arclength(s)?;
        Ok(self.path.kg_at_param(t)? * -(s + self.offset).sin())
    }

    /// Five-point central difference of [`Involute::eval`].
    pub fn derivative_fd(&self, s: f64, h: f64) -> Result<LorentzVector> {
        let f = |x: f64| self.eval(x);
        Ok((f(s - 2.0 * h)? - f(s + 2.0 * h)? + (f(s + h)? - f(s - h)?) * 8.0) / (12.0 * h))
    }

    /// Causal type of `φ'_t` at `n` uniform arc-length samples.
    pub fn causal_profile(&self, n: usize, tol: f64) -> Result<Vec<CausalType>> {
        (0..n)
            .map(|i| {
                let s = self.total_length * i as f64 / n as f64;
                Ok(causal_type(&self.derivative(s)?, tol))
            })
            .collect()
    }
}
