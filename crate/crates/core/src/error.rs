use thiserror::Error;

/// Errors raised by the geometric routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("degenerate span: step {step} produced a null direction (|<v,v>| = {norm:.3e})")]
    DegenerateSpan { step: usize, norm: f64 },

    #[error("rank deficiency: expected rank {expected}, found {found}")]
    RankDeficient { expected: usize, found: usize },

    #[error("radius {0} outside the open interval (0, pi)")]
    InvalidRadius(f64),

    #[error("vector is not a unit space-like vector: <x,x> = {0}")]
    NotOnDeSitter(f64),

    #[error("sphere passes through the projection pole (it is a plane)")]
    PlaneSphere,

    #[error("span is not space-like (signature {positive} positive, {negative} negative)")]
    NotSpacelike { positive: usize, negative: usize },

    #[error("tangent is not space-like at parameter {t}")]
    NonSpacelikeTangent { t: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("need an even sample count >= {min}, got {got}")]
    TooFewSamples { min: usize, got: usize },

    #[error("curve is not regular near parameter {t} (speed {speed:.3e})")]
    IrregularCurve { t: f64, speed: f64 },

    #[error("curve has an inflection near parameter {t} (k = {curvature:.3e})")]
    Inflection { t: f64, curvature: f64 },

    #[error("vertex near parameter {t} (k'^2 + k^2 tau^2 = {margin:.3e} relative)")]
    Vertex { t: f64, margin: f64 },

    #[error("torsion vanishes near parameter {t}; euclidean sphere centre undefined")]
    ZeroTorsion { t: f64 },

    #[error("osculating spheres cannot be oriented coherently: sigma(L) = -sigma(0)")]
    OrientationIncoherent,

    #[error("affine plane does not meet de Sitter space: <x,x> = {0} >= 1")]
    EmptyIntersection(f64),

    #[error("point at infinity")]
    PointAtInfinity,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("non-finite input")]
    NonFinite,
}

pub type Result<T, E = GeomError> = std::result::Result<T, E>;
