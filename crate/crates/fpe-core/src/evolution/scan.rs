//! Criticality scans over shear strength and dissipation coefficient.
//!
//! At alpha = 1 every horizontal mode shares the growth rate
//! `2 pi (gamma - nu_h)` (two-pi symbol convention), so the stability
//! threshold collapses to the single line `gamma = nu_h` in the
//! (shear-strength, dissipation) plane.  Because the dispersion root scales
//! linearly with the profile, `gamma(lambda U) = lambda gamma(U)`, the
//! predicted critical strength for a base profile U is
//! `lambda* = nu_h / gamma(U)`.  The scan measures growth rates cell by
//! cell from short linearized runs and locates the measured threshold by
//! interpolating the rate's sign change, which is what the prediction is
//! checked against.

use rayon::prelude::*;

use super::fit::fit_growth_rate;
use super::run::{run, InitialData, RunConfig, RunMode};
use crate::error::{CoreError, Result};
use crate::shear::dispersion::find_gamma_default;
use crate::shear::eigen::beta_n_with_scale;
use crate::shear::profile::ShearProfile;
use crate::spectral::grid::GridSpec;

/// Parameters of a criticality scan.
#[derive(Debug, Clone)]
pub struct ScanConfig {
    /// Grid template for every cell; `alpha` must equal 1 and `nu_h` is
    /// replaced by the cell's dissipation value.
    pub grid: GridSpec,
    /// Base profile U, sampled at `grid.nz`; each cell uses `lambda * U`.
    pub base_shear: ShearProfile,
    /// Shear strengths, strictly increasing.
    pub lambdas: Vec<f64>,
    /// Dissipation coefficients, all positive.
    pub nus: Vec<f64>,
    /// Length of each cell's linearized run.
    pub t_end: f64,
    /// Time window of the rate fit.
    pub fit_window: (f64, f64),
    /// Horizontal mode probed for the rate (the rate is mode-independent
    /// at alpha = 1; mode 1 is the cheapest).
    pub mode_n: usize,
    /// Also integrate the full equation per cell, seeded with a small
    /// eigenfunction perturbation, and record its fitted rate.
    pub nonlinear: bool,
    pub nonlinear_amp: f64,
}

impl ScanConfig {
    pub fn new(grid: GridSpec, base_shear: ShearProfile, lambdas: Vec<f64>, nus: Vec<f64>) -> Self {
        ScanConfig {
            grid,
            base_shear,
            lambdas,
            nus,
            t_end: 2.0,
            fit_window: (0.5, 2.0),
            mode_n: 1,
            nonlinear: false,
            nonlinear_amp: 1e-4,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.grid.alpha != 1.0 {
            return Err(CoreError::InvalidParameter {
                name: "alpha",
                message: format!(
                    "criticality scans require alpha = 1, where the threshold is \
                     mode-independent; got {}",
                    self.grid.alpha
                ),
            });
        }
        if self.base_shear.nz != self.grid.nz {
            return Err(CoreError::DimensionMismatch(format!(
                "base shear sampled at nz = {}, grid has nz = {}",
                self.base_shear.nz, self.grid.nz
            )));
        }
        if self.lambdas.len() < 2 {
            return Err(CoreError::InvalidParameter {
                name: "lambdas",
                message: "need at least two shear strengths to bracket a threshold".into(),
            });
        }
        if !self.lambdas.windows(2).all(|w| w[1] > w[0]) {
            return Err(CoreError::InvalidParameter {
                name: "lambdas",
                message: "must be strictly increasing".into(),
            });
        }
        if self.lambdas.iter().any(|&l| !(l > 0.0)) {
            return Err(CoreError::InvalidParameter {
                name: "lambdas",
                message: "must all be positive".into(),
            });
        }
        if self.nus.is_empty() || self.nus.iter().any(|&n| !(n > 0.0)) {
            return Err(CoreError::InvalidParameter {
                name: "nus",
                message: "need at least one positive dissipation coefficient".into(),
            });
        }
        if self.mode_n == 0 || self.mode_n >= self.grid.nx / 2 {
            return Err(CoreError::InvalidParameter {
                name: "mode_n",
                message: format!("need 1 <= mode_n < nx/2 = {}", self.grid.nx / 2),
            });
        }
        Ok(())
    }
}

/// Measured and predicted rates of one (lambda, nu) cell.
#[derive(Debug, Clone, Copy)]
pub struct ScanCell {
    pub lambda: f64,
    pub nu: f64,
    /// Fitted growth rate of the linearized run.
    pub rate: f64,
    /// `beta_n` evaluated with the scaled dispersion root.
    pub predicted_rate: f64,
    /// Fitted rate of the nonlinear companion run, when requested and
    /// fittable (saturated or blown-up runs yield None).
    pub nonlinear_rate: Option<f64>,
}

/// Interpolated stability threshold along the lambda axis for one nu.
#[derive(Debug, Clone, Copy)]
pub struct ThresholdEstimate {
    pub nu: f64,
    /// Shear strength where the fitted rate changes sign, by linear
    /// interpolation between the bracketing cells; None without a sign
    /// change inside the scanned range.
    pub lambda_star: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ScanResult {
    /// Dispersion root of the unscaled base profile.
    pub gamma_base: f64,
    /// Row-major cells: `nus` outer, `lambdas` inner.
    pub cells: Vec<ScanCell>,
    pub thresholds: Vec<ThresholdEstimate>,
}

impl ScanResult {
    pub fn cell(&self, nu_idx: usize, lambda_idx: usize, n_lambda: usize) -> &ScanCell {
        &self.cells[nu_idx * n_lambda + lambda_idx]
    }
}

fn cell_rate(config: &ScanConfig, lambda: f64, nu: f64) -> Result<ScanCell> {
    let grid = GridSpec::with_scale(
        config.grid.nx,
        config.grid.nz,
        config.grid.alpha,
        nu,
        config.grid.symbol_scale,
    )?;
    let shear = config.base_shear.scaled(lambda);
    let root = find_gamma_default(&shear)?;
    let predicted = beta_n_with_scale(
        root.gamma,
        grid.alpha,
        nu,
        config.mode_n,
        grid.symbol_scale,
    );

    let mut rc = RunConfig::new(
        grid,
        RunMode::LinearPsi,
        config.t_end,
        InitialData::Eigenmode { n: config.mode_n, amp: 1.0 },
    );
    rc.shear = Some(shear.clone());
    rc.energy_levels = 0;
    rc.probe_modes = config.mode_n;
    let traj = run(&rc)?;
    let fit = fit_growth_rate(
        &traj.times,
        &traj.probe_series(config.mode_n),
        config.fit_window,
    )?;

    let nonlinear_rate = if config.nonlinear {
        let mut nc = RunConfig::new(
            grid,
            RunMode::Nonlinear,
            config.t_end,
            InitialData::Eigenmode { n: config.mode_n, amp: config.nonlinear_amp },
        );
        nc.shear = Some(shear);
        nc.energy_levels = 0;
        nc.probe_modes = config.mode_n;
        match run(&nc) {
            Ok(t) if !t.blew_up() => {
                fit_growth_rate(&t.times, &t.probe_series(config.mode_n), config.fit_window)
                    .ok()
                    .map(|f| f.rate)
            }
            _ => None,
        }
    } else {
        None
    };

    Ok(ScanCell { lambda, nu, rate: fit.rate, predicted_rate: predicted, nonlinear_rate })
}

/// Run every cell of the scan (in parallel) and interpolate per-nu
/// thresholds from the fitted rates.
pub fn criticality_scan(config: &ScanConfig) -> Result<ScanResult> {
    config.validate()?;
    let gamma_base = find_gamma_default(&config.base_shear)?.gamma;

    let pairs: Vec<(f64, f64)> = config
        .nus
        .iter()
        .flat_map(|&nu| config.lambdas.iter().map(move |&l| (l, nu)))
        .collect();
    let cells: Vec<ScanCell> = pairs
        .par_iter()
        .map(|&(lambda, nu)| cell_rate(config, lambda, nu))
        .collect::<Result<Vec<_>>>()?;

    let n_lambda = config.lambdas.len();
    let thresholds = config
        .nus
        .iter()
        .enumerate()
        .map(|(i, &nu)| {
            let row = &cells[i * n_lambda..(i + 1) * n_lambda];
            let mut lambda_star = None;
            for w in row.windows(2) {
                let (a, b) = (&w[0], &w[1]);
                if a.rate == 0.0 {
                    lambda_star = Some(a.lambda);
                    break;
                }
                if a.rate * b.rate < 0.0 {
                    let frac = a.rate / (a.rate - b.rate);
                    lambda_star = Some(a.lambda + frac * (b.lambda - a.lambda));
                    break;
                }
            }
            ThresholdEstimate { nu, lambda_star }
        })
        .collect();

    Ok(ScanResult { gamma_base, cells, thresholds })
}
