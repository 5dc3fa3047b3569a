//! Numerical toolkit for the Lorentz model of conformal 3-sphere geometry.
//!
//! Oriented 2-spheres of S³ are the unit space-like vectors of ℝ⁵ with the
//! form of signature (4,1) (de Sitter space Λ⁴); points of S³ are null lines.
//! On top of that model the crate provides
//!
//! - [`lorentz`]: the form, causal classification, the Lorentz exterior
//!   product of four vectors, orthonormal frames and random Möbius maps;
//! - [`spheremodel`]: centre/radius data, stereographic projection,
//!   euclidean spheres, angles, contact orders and circles;
//! - [`curves`]: closed space curves as trigonometric interpolants, their
//!   Frenet apparatus, vertices, osculating spheres and contact oracles;
//! - [`canal`]: closed paths in Λ⁴ (canals), their length, geodesic curvature
//!   vector, classification, envelopes, involutes and example families;
//! - [`conformal`]: the osculating-sphere canal of a space curve, conformal
//!   arc-length and conformal torsion;
//! - [`suite`]: the numerical verification suite shared by the test target
//!   and the command-line tool.

pub mod canal;
pub mod conformal;
pub mod curves;
pub mod error;
pub mod lorentz;
pub mod quadrature;
pub mod spheremodel;
pub mod suite;

pub use error::{GeomError, Result};
pub use lorentz::{causal_type, inner, wedge4, CausalType, LorentzTransform, LorentzVector};
