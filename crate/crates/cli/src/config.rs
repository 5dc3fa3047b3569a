//! Command-line and config-file options.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "desitter",
    version,
    about = "Canal paths in de Sitter space and conformal invariants of closed space curves"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Frenet data, vertices, spherical points and conformal invariants of a closed space curve.
    AnalyzeCurve(Options),
    /// Classification, length and the 2π bound for closed paths in Λ⁴.
    AnalyzeCanal(Options),
    /// OBJ mesh of a canal envelope or of the curvature tube of a space curve.
    Mesh(Options),
    /// Runs every acceptance criterion and prints a summary table.
    VerifySuite(Options),
    /// Tabulates conformal invariants over generator parameters. Produces data, never a verdict.
    Sweep(Options),
    /// Prints the JSON schema of the reports.
    Schema,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Filter {
    All,
    AlmostRegular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    PerturbedCyclide,
    Fourier,
    ConstantAngle,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    None,
    /// Flips the sign of the conformal torsion.
    NegateTorsion,
}

/// Options shared by every command. A `--config` JSON file supplies defaults
/// under the same (snake_case) names; flags given on the command line win.
#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Options {
    /// JSON file with default option values.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Curve JSON `{dimension, period, samples}`: dimension 3 for space curves, 5 for paths in Λ⁴.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Built-in generator, `name[:key=value,...]`.
    #[arg(long)]
    pub generator: Option<String>,
    /// Sample count (even, at least 64).
    #[arg(long)]
    pub samples: Option<usize>,
    /// Tolerance of the inequality being verified.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Seed of random generators and batches.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Also write the JSON report here.
    #[arg(long)]
    pub out_json: Option<PathBuf>,
    /// Per-sample or per-row CSV table.
    #[arg(long)]
    pub out_csv: Option<PathBuf>,
    /// OBJ mesh output (stdout when omitted).
    #[arg(long)]
    pub out_obj: Option<PathBuf>,
    /// Singular-locus annotation of a curvature tube (default: `<out-obj>.singular.txt`).
    #[arg(long)]
    pub out_annotation: Option<PathBuf>,
    /// Reduced sample counts.
    #[arg(long)]
    pub quick: bool,
    /// Include per-sample arrays in the JSON report.
    #[arg(long)]
    pub per_sample: bool,
    /// Cyclide centre `KIND VALUE` with KIND one of timelike, spacelike, lightlike.
    #[arg(long, num_args = 2, value_names = ["KIND", "VALUE"])]
    pub x: Option<Vec<String>>,
    /// Minimal-drill profile λ(s), e.g. `2+sin` or `2+0.5*cos(3*s)`.
    #[arg(long)]
    pub lambda: Option<String>,
    /// Number of random paths or curves.
    #[arg(long)]
    pub count: Option<usize>,
    /// Keep only paths of this class in a random batch.
    #[arg(long, value_enum)]
    pub filter: Option<Filter>,
    /// Random path family, or curve family of a sweep.
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    /// Circles along the path in a mesh.
    #[arg(long)]
    pub nt: Option<usize>,
    /// Points per circle in a mesh.
    #[arg(long)]
    pub ntheta: Option<usize>,
    /// Deliberate defect for negative-control suite runs.
    #[arg(long, value_enum)]
    pub mutate: Option<Mutation>,
    /// Sweep values of the torus radius R.
    #[arg(long, value_delimiter = ',')]
    pub big_r: Option<Vec<f64>>,
    /// Sweep values of the tube radius r.
    #[arg(long, value_delimiter = ',')]
    pub small_r: Option<Vec<f64>>,
    /// Sweep values of the longitudinal winding p.
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<i64>>,
    /// Sweep values of the meridional winding q.
    #[arg(long, value_delimiter = ',')]
    pub q: Option<Vec<i64>>,
}

impl Options {
    /// Fills unset options from the `--config` file, if any.
    pub fn resolve(self) -> Result<Self, CliError> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))?;
        let file: Options = serde_json::from_str(&text)
            .map_err(|e| CliError::parse(format!("config {}: {e}", path.display())))?;
        Ok(self.merge(file))
    }

    fn merge(self, file: Options) -> Self {
        Self {
            config: self.config,
            input: self.input.or(file.input),
            generator: self.generator.or(file.generator),
            samples: self.samples.or(file.samples),
            tol: self.tol.or(file.tol),
            seed: self.seed.or(file.seed),
            out_json: self.out_json.or(file.out_json),
            out_csv: self.out_csv.or(file.out_csv),
            out_obj: self.out_obj.or(file.out_obj),
            out_annotation: self.out_annotation.or(file.out_annotation),
            quick: self.quick || file.quick,
            per_sample: self.per_sample || file.per_sample,
            x: self.x.or(file.x),
            lambda: self.lambda.or(file.lambda),
            count: self.count.or(file.count),
            filter: self.filter.or(file.filter),
            family: self.family.or(file.family),
            nt: self.nt.or(file.nt),
            ntheta: self.ntheta.or(file.ntheta),
            mutate: self.mutate.or(file.mutate),
            big_r: self.big_r.or(file.big_r),
            small_r: self.small_r.or(file.small_r),
            p: self.p.or(file.p),
            q: self.q.or(file.q),
        }
    }

    /// Sample count for analysis commands.
    pub fn samples_or(&self, default: usize) -> Result<usize, CliError> {
        let n = self.samples.unwrap_or(default);
        if n < 64 || n % 2 != 0 {
            return Err(CliError::precondition(format!(
                "--samples must be even and at least 64, got {n}"
            )));
        }
        Ok(n)
    }

    pub fn tol_or(&self, default: f64) -> Result<f64, CliError> {
        let t = self.tol.unwrap_or(default);
        if !(t > 0.0 && t.is_finite()) {
            return Err(CliError::precondition(format!(
                "--tol must be positive, got {t}"
            )));
        }
        Ok(t)
    }
}
