//! Scenario configuration: one JSON document per run, overridable from the
//! command line.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use squeezejc::dynamics::{DEFAULT_TIME_POINTS, DEFAULT_T_MAX};
use squeezejc::field::FieldParams;
use squeezejc::fock::DEFAULT_TAIL_TOL;
use squeezejc::observables::PhaseSpaceSpec;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Pscs,
    Mscs,
}

impl Kind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::Pscs => "pscs",
            Kind::Mscs => "mscs",
        }
    }
}

/// How the MSCS coherent weight is chosen: `"derived"` from equal overlap
/// with the PSCS, or `{"fixed": 0.8}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum QMode {
    #[default]
    Derived,
    Fixed(f64),
}

impl std::str::FromStr for QMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("derived") {
            return Ok(QMode::Derived);
        }
        s.parse::<f64>()
            .map(QMode::Fixed)
            .map_err(|_| format!("expected 'derived' or a number, got '{s}'"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputKind {
    Pcd,
    Inversion,
    Negativity,
    Quadratures,
    MandelQ,
    Wigner,
    Qweight,
}

impl OutputKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            OutputKind::Pcd => "pcd",
            OutputKind::Inversion => "inversion",
            OutputKind::Negativity => "negativity",
            OutputKind::Quadratures => "quadratures",
            OutputKind::MandelQ => "mandel_q",
            OutputKind::Wigner => "wigner",
            OutputKind::Qweight => "qweight",
        }
    }

    /// Kinds that produce one file for the whole N_s list rather than one per value.
    pub fn is_sweep(&self) -> bool {
        matches!(
            self,
            OutputKind::Quadratures | OutputKind::MandelQ | OutputKind::Qweight
        )
    }
}

/// Phase-space window for Wigner output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub step: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        let d = PhaseSpaceSpec::default();
        Self {
            re_min: d.re_range.0,
            re_max: d.re_range.1,
            im_min: d.im_range.0,
            im_max: d.im_range.1,
            step: d.step,
        }
    }
}

impl From<GridConfig> for PhaseSpaceSpec {
    fn from(g: GridConfig) -> Self {
        PhaseSpaceSpec {
            re_range: (g.re_min, g.re_max),
            im_range: (g.im_min, g.im_max),
            step: g.step,
        }
    }
}

fn default_time_max() -> f64 {
    DEFAULT_T_MAX
}

fn default_time_points() -> usize {
    DEFAULT_TIME_POINTS
}

fn default_tail_tol() -> f64 {
    DEFAULT_TAIL_TOL
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub kind: Kind,
    pub n_c: f64,
    pub n_s_list: Vec<f64>,
    #[serde(default)]
    pub q_mode: QMode,
    #[serde(default = "default_time_max")]
    pub time_max: f64,
    #[serde(default = "default_time_points")]
    pub time_points: usize,
    #[serde(default)]
    pub n_max_override: Option<usize>,
    #[serde(default = "default_tail_tol")]
    pub tail_tol: f64,
    pub outputs: Vec<OutputKind>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub wigner_grid: GridConfig,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            kind: Kind::Mscs,
            n_c: 20.0,
            n_s_list: vec![0.0, 1.0, 2.0, 5.0, 8.0, 10.0],
            q_mode: QMode::Derived,
            time_max: DEFAULT_T_MAX,
            time_points: DEFAULT_TIME_POINTS,
            n_max_override: None,
            tail_tol: DEFAULT_TAIL_TOL,
            outputs: Vec::new(),
            output_dir: default_output_dir(),
            wigner_grid: GridConfig::default(),
        }
    }
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self =
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if !(self.n_c >= 0.0 && self.n_c.is_finite()) {
            return bad(format!("n_c must be a finite value >= 0, got {}", self.n_c));
        }
        if self.n_s_list.is_empty() {
            return bad("n_s_list must not be empty".into());
        }
        if let Some(n_s) = self
            .n_s_list
            .iter()
            .find(|n| !(**n >= 0.0 && n.is_finite()))
        {
            return bad(format!("every n_s must be a finite value >= 0, got {n_s}"));
        }
        if let QMode::Fixed(q) = self.q_mode {
            if !(0.0..=1.0).contains(&q) {
                return bad(format!("fixed q must lie in [0, 1], got {q}"));
            }
        }
        if !(self.time_max > 0.0 && self.time_max.is_finite()) {
            return bad(format!("time_max must be positive, got {}", self.time_max));
        }
        if self.time_points < 2 {
            return bad(format!(
                "time_points must be >= 2, got {}",
                self.time_points
            ));
        }
        if self.n_max_override == Some(0) {
            return bad("n_max_override must be positive".into());
        }
        if !(self.tail_tol > 0.0 && self.tail_tol < 1.0) {
            return bad(format!(
                "tail_tol must lie in (0, 1), got {}",
                self.tail_tol
            ));
        }
        if self.outputs.is_empty() {
            return bad("outputs must name at least one output kind".into());
        }
        if self.kind == Kind::Pscs {
            for o in [OutputKind::Quadratures, OutputKind::Wigner] {
                if self.outputs.contains(&o) {
                    return bad(format!("{} output is defined for MSCS only", o.as_str()));
                }
            }
        }
        let g = &self.wigner_grid;
        if !(g.step > 0.0 && g.re_max > g.re_min && g.im_max > g.im_min) {
            return bad("wigner_grid needs step > 0 and non-empty ranges".into());
        }
        Ok(())
    }

    /// Field parameters for one entry of `n_s_list`.
    pub fn field(&self, n_s: f64) -> squeezejc::Result<FieldParams> {
        match (self.kind, self.q_mode) {
            (Kind::Pscs, _) => FieldParams::pscs(self.n_c, n_s),
            (Kind::Mscs, QMode::Derived) => FieldParams::mscs_derived(self.n_c, n_s),
            (Kind::Mscs, QMode::Fixed(q)) => FieldParams::mscs(self.n_c, n_s, q),
        }
    }
}
