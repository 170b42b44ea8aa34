//! Declarative experiment configuration (TOML).

use std::path::PathBuf;

use clap::Subcommand;
use nalgebra::{DMatrix, DVector};
use serde::Deserialize;

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

pub type Rows = Vec<Vec<f64>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Subcommand)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    /// Gain constants, small-gain verdict, T(n) table and rho sweeps.
    Certify,
    /// Sampled LTI interconnection runs.
    Simulate,
    /// Plant driven by the exact QP minimiser at every sample.
    MpcClosedform,
    /// Plant driven by n gradient iterations per sample.
    MpcSuboptimal,
    /// Reduced-model log-norm field over a state grid, one file per penalty weight.
    Contour,
    /// Scalar loop whose stability is lost at large sampling periods.
    Example1,
    /// Divergence counts over a list of sampling periods.
    Sweep,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Certify => "certify",
            Kind::Simulate => "simulate",
            Kind::MpcClosedform => "mpc-closedform",
            Kind::MpcSuboptimal => "mpc-suboptimal",
            Kind::Contour => "contour",
            Kind::Example1 => "example1",
            Kind::Sweep => "sweep",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub kind: Option<Kind>,
    pub seed: Option<u64>,
    pub system: Option<SystemSpec>,
    #[serde(default)]
    pub run: RunSpec,
    #[serde(default)]
    pub certify: CertifySpec,
    #[serde(default)]
    pub contour: ContourSpec,
    #[serde(default)]
    pub sweep: SweepSpec,
    #[serde(default)]
    pub example1: Example1Spec,
    #[serde(default)]
    pub output: OutputSpec,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            kind: None,
            seed: None,
            system: None,
            run: RunSpec::default(),
            certify: CertifySpec::default(),
            contour: ContourSpec::default(),
            sweep: SweepSpec::default(),
            example1: Example1Spec::default(),
            output: OutputSpec::default(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SystemSpec {
    /// `ẋ = Ax + Bz`, `z⁺ = Cx + Dz`.
    Lti { a: Rows, b: Rows, c: Rows, d: Rows },
    Scalar { a: f64, b: f64, c: f64, d: f64 },
    /// Constants supplied directly.
    Gains {
        lip_x_f: f64,
        lip_z_f: f64,
        oslip_x_f: f64,
        lip_x_g: f64,
        lip_z_g: f64,
        rm_rate: Option<f64>,
    },
    Mpc(MpcSpec),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MpcSpec {
    pub a: Rows,
    pub b: Rows,
    /// Prediction step Δ of the ZOH model.
    pub dt: f64,
    pub horizon: usize,
    pub q: Rows,
    pub r: Rows,
    /// Terminal weight; the DARE solution when absent.
    pub p: Option<Rows>,
    #[serde(default)]
    pub gamma: f64,
    pub lb: Option<Vec<f64>>,
    pub ub: Option<Vec<f64>>,
    /// Gradient step; `min(1/ℓ, 1.9μ/ℓ²)` when absent.
    pub step: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RecordingSpec {
    Full,
    #[default]
    Samples,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InitialSpec {
    /// Points of length `nx` (paired with `z0`) or `nx + nz`.
    List { points: Rows },
    /// Uniform in (0,1) per coordinate of `(x, z)`, scaled to unit ℓ2 norm.
    Random { count: usize },
    /// Boundary grid of the box `[lo, hi]`, paired with `z0`.
    BoundaryGrid { lo: Vec<f64>, hi: Vec<f64>, per_edge: usize },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxSpec {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSpec {
    pub n: u32,
    /// Sampling period T in seconds.
    pub period: Option<f64>,
    pub t_end: f64,
    pub substeps: usize,
    pub update_at_zero: bool,
    pub recording: RecordingSpec,
    pub initial: Option<InitialSpec>,
    pub z0: Option<Vec<f64>>,
    /// Box `X`; runs that leave it are reported in `invariance.csv`.
    pub state_box: Option<BoxSpec>,
}

impl Default for RunSpec {
    fn default() -> Self {
        Self {
            n: 1,
            period: None,
            t_end: 20.0,
            substeps: 100,
            update_at_zero: false,
            recording: RecordingSpec::Samples,
            initial: None,
            z0: None,
            state_box: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateWeight {
    Identity,
    /// The MPC terminal weight `P`.
    Terminal,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CertifySpec {
    pub n_list: Vec<u32>,
    pub periods: Vec<f64>,
    pub state_weight: StateWeight,
}

impl Default for CertifySpec {
    fn default() -> Self {
        Self {
            n_list: vec![1, 2, 5, 10, 20, 50],
            periods: Vec::new(),
            state_weight: StateWeight::Identity,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ContourSpec {
    pub x1: [f64; 2],
    pub x2: [f64; 2],
    pub n1: usize,
    pub n2: usize,
    pub gammas: Vec<f64>,
    pub weight: StateWeight,
}

impl Default for ContourSpec {
    fn default() -> Self {
        Self {
            x1: [-20.0, 20.0],
            x2: [-6.0, 6.0],
            n1: 101,
            n2: 101,
            gammas: vec![1.0, 10.0, 100.0],
            weight: StateWeight::Terminal,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSpec {
    pub periods: Vec<f64>,
    /// Stop after the first period with a diverging run.
    pub stop_at_first: bool,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            periods: vec![0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0],
            stop_at_first: false,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Example1Spec {
    pub periods: Vec<f64>,
    /// Sampling intervals simulated per period.
    pub intervals: usize,
}

impl Default for Example1Spec {
    fn default() -> Self {
        Self {
            periods: vec![0.3, 0.6, 0.9, 2.5f64.ln(), 1.2, 1.5],
            intervals: 6,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: Option<PathBuf>,
    /// Write one CSV per run.
    pub trajectories: bool,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self { dir: None, trajectories: true }
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: Self = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "schema_version: unsupported version {} (expected {SCHEMA_VERSION})",
                cfg.schema_version
            )));
        }
        Ok(cfg)
    }

    pub fn system(&self) -> Result<&SystemSpec, CliError> {
        self.system.as_ref().ok_or_else(|| CliError::Config("system: missing table".into()))
    }

    pub fn period(&self) -> Result<f64, CliError> {
        match self.run.period {
            Some(t) if t.is_finite() && t > 0.0 => Ok(t),
            Some(t) => Err(CliError::Config(format!("run.period: must be positive, got {t}"))),
            None => Err(CliError::Config("run.period: missing".into())),
        }
    }
}

pub fn matrix(rows: &Rows, field: &str) -> Result<DMatrix<f64>, CliError> {
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || ncols == 0 {
        return Err(CliError::Config(format!("{field}: empty matrix")));
    }
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(CliError::Config(format!("{field}: rows have different lengths")));
    }
    Ok(DMatrix::from_row_iterator(rows.len(), ncols, rows.iter().flatten().copied()))
}

pub fn vector(v: &[f64], len: usize, field: &str) -> Result<DVector<f64>, CliError> {
    if v.len() != len {
        return Err(CliError::Config(format!("{field}: expected {len} entries, got {}", v.len())));
    }
    Ok(DVector::from_column_slice(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_takes_defaults() {
        let cfg = ExperimentConfig::parse("schema_version = 1").unwrap();
        assert_eq!(cfg.run.n, 1);
        assert_eq!(cfg.run.substeps, 100);
        assert!(!cfg.run.update_at_zero);
        assert_eq!(cfg.contour.n1, 101);
    }

    #[test]
    fn unknown_fields_and_versions_are_rejected() {
        let err = ExperimentConfig::parse("schema_version = 1\n[run]\nperiodd = 0.1").unwrap_err();
        assert!(err.to_string().contains("periodd"), "{err}");
        assert!(ExperimentConfig::parse("schema_version = 2").is_err());
        assert!(ExperimentConfig::parse("kind = \"certify\"").is_err());
    }

    #[test]
    fn tagged_tables_parse() {
        let cfg = ExperimentConfig::parse(
            r#"
schema_version = 1
kind = "mpc-suboptimal"
[system]
type = "mpc"
a = [[0.0, 1.0], [0.0, 0.0]]
b = [[0.0], [1.0]]
dt = 0.2
horizon = 5
q = [[1.0, 0.0], [0.0, 1.0]]
r = [[1.0]]
[run.initial]
type = "boundary-grid"
lo = [-10.0, -3.0]
hi = [10.0, 3.0]
per_edge = 21
"#,
        )
        .unwrap();
        assert_eq!(cfg.kind, Some(Kind::MpcSuboptimal));
        assert!(matches!(cfg.system, Some(SystemSpec::Mpc(ref m)) if m.horizon == 5));
        assert!(matches!(cfg.run.initial, Some(InitialSpec::BoundaryGrid { per_edge: 21, .. })));
    }

    #[test]
    fn ragged_matrix_is_a_config_error() {
        let err = matrix(&vec![vec![1.0, 2.0], vec![3.0]], "system.a").unwrap_err();
        assert!(err.to_string().contains("system.a"));
    }
}
