//! JSON experiment configuration: a flat document mirroring the run
//! parameters plus the experiment kind, with strict field checking, filled
//! defaults, and range errors that name the offending field.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use fpe_core::evolution::{DtSpec, InitialData, RunConfig, RunMode, ScanConfig};
use fpe_core::shear::{CoefficientKind, ShearProfile};
use fpe_core::{GridSpec, SymbolScale};

use crate::{validation, CliError, Result};

/// What the configured experiment does.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Dispersion,
    Eigenmode,
    LinearEvolve,
    Simulate,
    CriticalityScan,
    VerifyInequalities,
}

impl ExperimentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::Dispersion => "dispersion",
            ExperimentKind::Eigenmode => "eigenmode",
            ExperimentKind::LinearEvolve => "linear-evolve",
            ExperimentKind::Simulate => "simulate",
            ExperimentKind::CriticalityScan => "criticality-scan",
            ExperimentKind::VerifyInequalities => "verify-inequalities",
        }
    }
}

/// `"auto"` or a fixed positive step.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum DtChoice {
    Fixed(f64),
    Named(DtName),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DtName {
    Auto,
}

impl DtChoice {
    fn to_core(self) -> DtSpec {
        match self {
            DtChoice::Fixed(dt) => DtSpec::Fixed(dt),
            DtChoice::Named(DtName::Auto) => DtSpec::Auto,
        }
    }
}

/// Symbol convention of the horizontal multipliers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SymbolChoice {
    TwoPi,
    One,
}

impl SymbolChoice {
    pub fn to_core(self) -> SymbolScale {
        match self {
            SymbolChoice::TwoPi => SymbolScale::TwoPi,
            SymbolChoice::One => SymbolScale::One,
        }
    }
}

/// Background shear profile (analytic families only; sampled at the grid's
/// vertical resolution).
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, tag = "form", rename_all = "lowercase")]
pub enum ShearConfig {
    Tanh {
        #[serde(default = "default_shear_l")]
        l: f64,
        #[serde(default = "default_one")]
        amplitude: f64,
    },
}

impl ShearConfig {
    pub fn build(&self, nz: usize) -> Result<ShearProfile> {
        match *self {
            ShearConfig::Tanh { l, amplitude } => Ok(ShearProfile::tanh(nz, l, amplitude)?),
        }
    }
}

/// Coefficient law of superposition initial data.
#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(deny_unknown_fields, tag = "law", rename_all = "lowercase")]
pub enum CoeffConfig {
    Sobolev { s: f64 },
    Gevrey { sigma: f64 },
}

impl CoeffConfig {
    fn to_core(self) -> CoefficientKind {
        match self {
            CoeffConfig::Sobolev { s } => CoefficientKind::Sobolev { s },
            CoeffConfig::Gevrey { sigma } => CoefficientKind::Gevrey { sigma },
        }
    }
}

/// Initial state of an evolution run.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, tag = "type", rename_all = "kebab-case")]
pub enum InitialConfig {
    Zero,
    Mode { kx: usize, mz: usize, amp: f64 },
    Eigenmode { n: usize, amp: f64 },
    Superposition { coefficients: CoeffConfig, n_max: usize, amp: f64 },
    RandomTrig { kx_max: usize, mz_max: usize, amp: f64 },
}

impl InitialConfig {
    /// Core initial data; seeded kinds draw their stream from `seed`.
    fn to_core(&self, seed: u64) -> InitialData {
        match *self {
            InitialConfig::Zero => InitialData::Zero,
            InitialConfig::Mode { kx, mz, amp } => InitialData::Mode { kx, mz, amp },
            InitialConfig::Eigenmode { n, amp } => InitialData::Eigenmode { n, amp },
            InitialConfig::Superposition { coefficients, n_max, amp } => {
                InitialData::Superposition { kind: coefficients.to_core(), n_max, amp }
            }
            InitialConfig::RandomTrig { kx_max, mz_max, amp } => {
                InitialData::RandomTrig { seed, kx_max, mz_max, amp }
            }
        }
    }
}

fn default_shear_l() -> f64 {
    20.0
}
fn default_one() -> f64 {
    1.0
}
fn default_dt() -> DtChoice {
    DtChoice::Named(DtName::Auto)
}
fn default_true() -> bool {
    true
}
fn default_cfl() -> f64 {
    0.5
}
fn default_sample_every() -> usize {
    1
}
fn default_energy_levels() -> usize {
    2
}
fn default_symbol() -> SymbolChoice {
    SymbolChoice::TwoPi
}
fn default_shear() -> ShearConfig {
    ShearConfig::Tanh { l: default_shear_l(), amplitude: default_one() }
}
fn default_initial() -> InitialConfig {
    InitialConfig::Mode { kx: 1, mz: 1, amp: 0.01 }
}

/// One experiment, fully specified.  Unknown keys are rejected; omitted
/// optional keys take the defaults echoed back into the output directory.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub nx: usize,
    pub nz: usize,
    pub alpha: f64,
    pub nu_h: f64,
    #[serde(default)]
    pub t_end: Option<f64>,
    #[serde(default = "default_dt")]
    pub dt: DtChoice,
    #[serde(default = "default_cfl")]
    pub cfl_safety: f64,
    #[serde(default = "default_true")]
    pub dealias: bool,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_sample_every")]
    pub sample_every: usize,
    #[serde(default = "default_energy_levels")]
    pub energy_levels: usize,
    /// Defaults to `min(8, nx/2)` when omitted.
    #[serde(default)]
    pub probe_modes: Option<usize>,
    #[serde(default = "default_symbol")]
    pub symbol_scale: SymbolChoice,
    #[serde(default = "default_shear")]
    pub shear: ShearConfig,
    #[serde(default = "default_initial")]
    pub initial: InitialConfig,
    /// Criticality-scan shear strengths (strictly increasing, positive).
    #[serde(default)]
    pub lambdas: Option<Vec<f64>>,
    /// Criticality-scan dissipation coefficients (positive).
    #[serde(default)]
    pub nus: Option<Vec<f64>>,
    /// Growth-rate fit window of scan cells; defaults to the scan's own.
    #[serde(default)]
    pub fit_window: Option<(f64, f64)>,
    /// Horizontal mode probed by scan cells.
    #[serde(default)]
    pub mode_n: Option<usize>,
    /// Also run the full equation per scan cell.
    #[serde(default)]
    pub scan_nonlinear: bool,
    /// Output directory; defaults to `fpe-out-<kind>` under the working
    /// directory (the effective path is always echoed in `config.json`).
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Parse and validate a JSON config file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| validation(format!("cannot read config {}: {e}", path.display())))?;
        let config: ExperimentConfig = serde_json::from_str(&text)
            .map_err(|e| validation(format!("config {}: {e}", path.display())))?;
        config.validate()?;
        Ok(config)
    }

    /// Range checks with field-named messages, beyond what serde enforces.
    pub fn validate(&self) -> Result<()> {
        fn range(field: &str, ok: bool, message: String) -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(validation(format!("invalid `{field}`: {message}")))
            }
        }
        range("nx", self.nx > 0 && self.nx % 2 == 0, format!("must be positive and even, got {}", self.nx))?;
        range("nz", self.nz >= 5 && self.nz % 2 == 1, format!("must be odd and at least 5, got {}", self.nz))?;
        range("alpha", self.alpha > 0.0 && self.alpha <= 2.0, format!("must lie in (0, 2], got {}", self.alpha))?;
        range("nu_h", self.nu_h >= 0.0, format!("must be non-negative, got {}", self.nu_h))?;
        range("cfl_safety", self.cfl_safety > 0.0 && self.cfl_safety <= 1.0, format!("must lie in (0, 1], got {}", self.cfl_safety))?;
        range("sample_every", self.sample_every >= 1, "must be at least 1".into())?;
        if let DtChoice::Fixed(dt) = self.dt {
            range("dt", dt > 0.0, format!("must be \"auto\" or a positive number, got {dt}"))?;
        }
        if let Some(t_end) = self.t_end {
            range("t_end", t_end > 0.0, format!("must be positive, got {t_end}"))?;
        }

        match self.kind {
            ExperimentKind::LinearEvolve | ExperimentKind::Simulate => {
                range("t_end", self.t_end.is_some(), "required for evolution runs".into())?;
            }
            ExperimentKind::CriticalityScan => {
                range("lambdas", self.lambdas.is_some(), "required for criticality scans".into())?;
                range("nus", self.nus.is_some(), "required for criticality scans".into())?;
            }
            _ => {}
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<GridSpec> {
        Ok(GridSpec::with_scale(
            self.nx,
            self.nz,
            self.alpha,
            self.nu_h,
            self.symbol_scale.to_core(),
        )?)
    }

    /// Effective output directory.
    pub fn output_dir(&self) -> PathBuf {
        self.output
            .clone()
            .unwrap_or_else(|| PathBuf::from(format!("fpe-out-{}", self.kind.as_str())))
    }

    /// Assemble the core run configuration for an evolution kind.
    pub fn to_run_config(&self) -> Result<RunConfig> {
        let mode = match self.kind {
            ExperimentKind::LinearEvolve => RunMode::LinearPsi,
            ExperimentKind::Simulate => RunMode::Nonlinear,
            other => {
                return Err(validation(format!(
                    "kind `{}` is not an evolution run",
                    other.as_str()
                )))
            }
        };
        let grid = self.grid()?;
        let t_end = self.t_end.expect("validated");
        let mut run = RunConfig::new(grid, mode, t_end, self.initial.to_core(self.seed));
        run.dt = self.dt.to_core();
        run.cfl_safety = self.cfl_safety;
        run.dealias = self.dealias;
        run.sample_every = self.sample_every;
        run.energy_levels = self.energy_levels;
        if let Some(p) = self.probe_modes {
            run.probe_modes = p;
        }
        run.shear = Some(self.shear.build(self.nz)?);
        Ok(run)
    }

    /// Assemble the core scan configuration.
    pub fn to_scan_config(&self) -> Result<ScanConfig> {
        if self.kind != ExperimentKind::CriticalityScan {
            return Err(validation(format!(
                "kind `{}` is not a criticality scan",
                self.kind.as_str()
            )));
        }
        let grid = self.grid()?;
        let base = self.shear.build(self.nz)?;
        let lambdas = self.lambdas.clone().expect("validated");
        let nus = self.nus.clone().expect("validated");
        let mut scan = ScanConfig::new(grid, base, lambdas, nus);
        if let Some(t_end) = self.t_end {
            scan.t_end = t_end;
        }
        if let Some(w) = self.fit_window {
            scan.fit_window = w;
        }
        if let Some(n) = self.mode_n {
            scan.mode_n = n;
        }
        scan.nonlinear = self.scan_nonlinear;
        Ok(scan)
    }

    /// Guard that a config file drives the subcommand it was written for.
    pub fn expect_kind(&self, kind: ExperimentKind) -> Result<()> {
        if self.kind != kind {
            return Err(validation(format!(
                "config has kind `{}`, but this subcommand runs `{}`",
                self.kind.as_str(),
                kind.as_str()
            )));
        }
        Ok(())
    }
}

impl std::str::FromStr for ExperimentKind {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dispersion" => Ok(ExperimentKind::Dispersion),
            "eigenmode" => Ok(ExperimentKind::Eigenmode),
            "linear-evolve" => Ok(ExperimentKind::LinearEvolve),
            "simulate" => Ok(ExperimentKind::Simulate),
            "criticality-scan" => Ok(ExperimentKind::CriticalityScan),
            "verify-inequalities" => Ok(ExperimentKind::VerifyInequalities),
            other => Err(validation(format!("unknown experiment kind `{other}`"))),
        }
    }
}
