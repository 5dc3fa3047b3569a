//! Errors with exit codes and a machine-readable error block.

use std::path::Path;

use desitter::GeomError;
use serde_json::{json, Value};

/// 1: internal error.
pub const EXIT_INTERNAL: u8 = 1;
/// 2: precondition or parse error.
pub const EXIT_PRECONDITION: u8 = 2;
/// 3: verification failure.
pub const EXIT_VERIFICATION: u8 = 3;

#[derive(Debug)]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
    pub exit_code: u8,
    pub detail: Option<Value>,
}

impl CliError {
    pub fn parse(message: impl Into<String>) -> Self {
        Self {
            kind: "parse",
            message: message.into(),
            exit_code: EXIT_PRECONDITION,
            detail: None,
        }
    }

    pub fn precondition(message: impl Into<String>) -> Self {
        Self {
            kind: "precondition",
            message: message.into(),
            exit_code: EXIT_PRECONDITION,
            detail: None,
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        Self {
            kind: "io",
            message: format!("{}: {err}", path.display()),
            exit_code: EXIT_INTERNAL,
            detail: None,
        }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self {
            kind: "internal",
            message: message.into(),
            exit_code: EXIT_INTERNAL,
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: Value) -> Self {
        self.detail = Some(detail);
        self
    }

    pub fn block(&self, command: &str) -> Value {
        json!({
            "schema": crate::report::SCHEMA_ID,
            "command": command,
            "status": "error",
            "error": {
                "kind": self.kind,
                "message": self.message,
                "exit_code": self.exit_code,
                "detail": self.detail,
            }
        })
    }
}

fn geom_kind(e: &GeomError) -> &'static str {
    match e {
        GeomError::DegenerateSpan { .. } => "degenerate_span",
        GeomError::RankDeficient { .. } => "rank_deficient",
        GeomError::InvalidRadius(_) => "invalid_radius",
        GeomError::NotOnDeSitter(_) => "not_on_de_sitter",
        GeomError::PlaneSphere => "plane_sphere",
        GeomError::NotSpacelike { .. } => "not_spacelike",
        GeomError::NonSpacelikeTangent { .. } => "non_spacelike_tangent",
        GeomError::Precondition(_) => "precondition",
        GeomError::TooFewSamples { .. } => "too_few_samples",
        GeomError::IrregularCurve { .. } => "irregular_curve",
        GeomError::Inflection { .. } => "inflection",
        GeomError::Vertex { .. } => "vertex",
        GeomError::ZeroTorsion { .. } => "zero_torsion",
        GeomError::OrientationIncoherent => "orientation_incoherent",
        GeomError::EmptyIntersection(_) => "empty_intersection",
        GeomError::PointAtInfinity => "point_at_infinity",
        GeomError::Dimension { .. } => "dimension",
        GeomError::NonFinite => "non_finite",
    }
}

impl From<GeomError> for CliError {
    fn from(e: GeomError) -> Self {
        let detail = match &e {
            GeomError::Vertex { t, margin } => Some(json!({ "t": t, "margin": margin })),
            GeomError::Inflection { t, curvature } => {
                Some(json!({ "t": t, "curvature": curvature }))
            }
            _ => None,
        };
        Self {
            kind: geom_kind(&e),
            message: e.to_string(),
            exit_code: EXIT_PRECONDITION,
            detail,
        }
    }
}
