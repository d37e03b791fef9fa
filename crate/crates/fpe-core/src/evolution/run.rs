//! Trajectory runs: configuration, initial data, stepping, sampling.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::linear::LinearPsiSystem;
use super::nonlinear::{apply_dealias_mask, NonlinearSystem};
use super::quad::QuadAccumulator;
use super::stepper::ifrk4_step;
use crate::diagnostics::energy::{energy_snapshot, EnergyReport, MAX_ENERGY_LEVELS};
use crate::error::{CoreError, Result};
use crate::shear::dispersion::find_gamma_default;
use crate::shear::eigen::{CoefficientKind, EigenSolution};
use crate::shear::profile::ShearProfile;
use crate::spectral::fft::XTransform;
use crate::spectral::grid::{Field, GridSpec, SpectralField};
use crate::spectral::norms::{l2_norm_sq_spectral, mode_l2_sq};
use crate::spectral::vertical::{diagnose_w, project_h};

/// Which system a run integrates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunMode {
    /// Linearization around the configured shear, stream-function form.
    LinearPsi,
    /// The full velocity-form equation.
    Nonlinear,
}

/// Time-step selection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DtSpec {
    /// CFL-limited: `cfl_safety * min(dx / max|u|, dz / max|w|)` (advective
    /// speed `max|U|` for linear runs), capped at `t_end / 40`, with the
    /// bounds re-measured every 10 steps.  Dissipation imposes no limit —
    /// it is integrated exactly.
    Auto,
    Fixed(f64),
}

/// Initial state of a run.
#[derive(Debug, Clone)]
pub enum InitialData {
    Zero,
    /// Single product mode with amplitude `amp`: nonlinear runs get
    /// `u = amp sin(2 pi kx x) cos(mz pi z)` (zero vertical mean); linear
    /// runs get the stream function `psi = amp sin(2 pi kx x) sin(mz pi z)`
    /// (vanishing at the walls).
    Mode { kx: usize, mz: usize, amp: f64 },
    /// The unstable eigenfunction of the configured shear at horizontal
    /// mode n: `psi = amp Re(chi e^{2 pi i n x})` for linear runs,
    /// `u = amp Re(chi' e^{2 pi i n x})` for nonlinear ones.
    Eigenmode { n: usize, amp: f64 },
    /// `psi = amp sum_{n<=n_max} a_n Re(chi e^{2 pi i n x})` with the given
    /// coefficient law.
    Superposition { kind: CoefficientKind, n_max: usize, amp: f64 },
    /// Seeded random trigonometric data, normalized to `max|.| = amp`.
    RandomTrig { seed: u64, kx_max: usize, mz_max: usize, amp: f64 },
    /// Explicit samples: `u` for nonlinear runs, `phi = psi_zz` for linear.
    Samples(Field),
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub grid: GridSpec,
    pub mode: RunMode,
    pub dt: DtSpec,
    /// CFL fraction in (0, 1] used by [`DtSpec::Auto`].
    pub cfl_safety: f64,
    pub t_end: f64,
    pub shear: Option<ShearProfile>,
    pub initial: InitialData,
    /// Record a sample every this many steps (>= 1); t = 0 and the final
    /// step are always recorded.
    pub sample_every: usize,
    /// 2/3-rule dealiasing for nonlinear products (ignored by linear runs).
    pub dealias: bool,
    /// Hierarchy depth K of the energy reports.
    pub energy_levels: usize,
    /// Number of per-mode probe amplitudes recorded (modes 0..probe_modes).
    pub probe_modes: usize,
}

impl RunConfig {
    pub fn new(grid: GridSpec, mode: RunMode, t_end: f64, initial: InitialData) -> Self {
        RunConfig {
            grid,
            mode,
            dt: DtSpec::Auto,
            cfl_safety: 0.5,
            t_end,
            shear: None,
            initial,
            sample_every: 1,
            dealias: true,
            energy_levels: 2,
            probe_modes: 8.min(grid.nx / 2),
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.t_end > 0.0) {
            return Err(CoreError::InvalidParameter {
                name: "t_end",
                message: format!("must be positive, got {}", self.t_end),
            });
        }
        if !(self.cfl_safety > 0.0 && self.cfl_safety <= 1.0) {
            return Err(CoreError::InvalidParameter {
                name: "cfl_safety",
                message: format!("must lie in (0, 1], got {}", self.cfl_safety),
            });
        }
        if let DtSpec::Fixed(dt) = self.dt {
            if !(dt > 0.0) {
                return Err(CoreError::InvalidParameter {
                    name: "dt",
                    message: format!("must be positive, got {dt}"),
                });
            }
        }
        if self.sample_every == 0 {
            return Err(CoreError::InvalidParameter {
                name: "sample_every",
                message: "must be at least 1".into(),
            });
        }
        if self.energy_levels > MAX_ENERGY_LEVELS {
            return Err(CoreError::InvalidParameter {
                name: "energy_levels",
                message: format!("at most {MAX_ENERGY_LEVELS}, got {}", self.energy_levels),
            });
        }
        if self.probe_modes > self.grid.nx / 2 {
            return Err(CoreError::InvalidParameter {
                name: "probe_modes",
                message: format!("at most nx/2 = {}, got {}", self.grid.nx / 2, self.probe_modes),
            });
        }
        if let Some(shear) = &self.shear {
            if shear.nz != self.grid.nz {
                return Err(CoreError::DimensionMismatch(format!(
                    "shear sampled at nz = {}, grid has nz = {}",
                    shear.nz, self.grid.nz
                )));
            }
        }
        if matches!(self.mode, RunMode::LinearPsi) && self.shear.is_none() {
            return Err(CoreError::InvalidParameter {
                name: "shear",
                message: "linear runs require a background shear".into(),
            });
        }
        Ok(())
    }
}

/// How a run ended.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RunStatus {
    Completed,
    /// Non-finite values or L2 growth beyond 1e8 of the initial scale.
    Blowup { t: f64 },
}

/// Sampled output of a run.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub reports: Vec<EnergyReport>,
    /// `probes[s][n]`: L2_z amplitude of horizontal mode n at sample s
    /// (of `u` for nonlinear runs, of `phi` for linear ones).
    pub probes: Vec<Vec<f64>>,
    /// Stream-function mode amplitudes (linear runs only, else empty).
    pub psi_probes: Vec<Vec<f64>>,
    /// Horizontal velocity at the end of the run (perturbation velocity for
    /// linear runs).
    pub final_state: Field,
    pub status: RunStatus,
    pub steps: usize,
    /// Dispersion root used to build eigenfunction initial data, if any.
    pub gamma: Option<f64>,
}

impl Trajectory {
    /// Amplitude history of horizontal mode n.
    pub fn probe_series(&self, n: usize) -> Vec<f64> {
        self.probes.iter().map(|p| p[n]).collect()
    }

    pub fn psi_probe_series(&self, n: usize) -> Vec<f64> {
        self.psi_probes.iter().map(|p| p[n]).collect()
    }

    pub fn blew_up(&self) -> bool {
        matches!(self.status, RunStatus::Blowup { .. })
    }
}

/// Shared sampling state: energy reports plus running Y integrals.
struct Sampler {
    levels: usize,
    probe_modes: usize,
    nu: f64,
    y_acc: Vec<QuadAccumulator>,
    times: Vec<f64>,
    reports: Vec<EnergyReport>,
    probes: Vec<Vec<f64>>,
    psi_probes: Vec<Vec<f64>>,
}

impl Sampler {
    fn new(levels: usize, probe_modes: usize, nu: f64) -> Self {
        Sampler {
            levels,
            probe_modes,
            nu,
            y_acc: vec![QuadAccumulator::new(); levels + 1],
            times: Vec::new(),
            reports: Vec::new(),
            probes: Vec::new(),
            psi_probes: Vec::new(),
        }
    }

    fn record(
        &mut self,
        t: f64,
        u: &Field,
        state: &SpectralField,
        psi: Option<&SpectralField>,
    ) -> Result<()> {
        let mut rep = energy_snapshot(u, t, self.levels)?;
        for k in 0..=self.levels {
            self.y_acc[k].push(t, self.nu * rep.etilde[k]);
            rep.y[k] = rep.e[k] + self.y_acc[k].value();
        }
        let amp: Vec<f64> = (0..=self.probe_modes)
            .map(|n| mode_l2_sq(state, n).sqrt())
            .collect();
        if let Some(psi_hat) = psi {
            let pamp: Vec<f64> = (0..=self.probe_modes)
                .map(|n| mode_l2_sq(psi_hat, n).sqrt())
                .collect();
            self.psi_probes.push(pamp);
        }
        self.times.push(t);
        self.reports.push(rep);
        self.probes.push(amp);
        Ok(())
    }
}

/// Integrate the configured system to `t_end` (or until blow-up), sampling
/// along the way.  Nonlinear initial data is projected onto the
/// zero-vertical-mean subspace before the first step.
pub fn run(config: &RunConfig) -> Result<Trajectory> {
    config.validate()?;
    match config.mode {
        RunMode::LinearPsi => run_linear(config),
        RunMode::Nonlinear => run_nonlinear(config),
    }
}

fn eigen_solution(config: &RunConfig, n_table: usize) -> Result<(EigenSolution, f64)> {
    let shear = config.shear.as_ref().ok_or(CoreError::InvalidParameter {
        name: "shear",
        message: "eigenfunction initial data requires a background shear".into(),
    })?;
    let root = find_gamma_default(shear)?;
    let sol = EigenSolution::build(
        shear,
        root.gamma,
        config.grid.alpha,
        config.grid.nu_h,
        config.grid.symbol_scale,
        n_table,
    )?;
    Ok((sol, root.gamma))
}

fn check_mode_bounds(config: &RunConfig, n: usize) -> Result<()> {
    let limit = if matches!(config.mode, RunMode::Nonlinear) && config.dealias {
        config.grid.nx / 3
    } else {
        config.grid.nx / 2 - 1
    };
    if n == 0 || n > limit {
        return Err(CoreError::InvalidParameter {
            name: "n",
            message: format!("mode must satisfy 1 <= n <= {limit}, got {n}"),
        });
    }
    Ok(())
}

/// chi'(z) = U' I + (U - i gamma)^{-1}, from the stored chi = (U - i gamma) I.
fn chi_prime(sol: &EigenSolution, shear: &ShearProfile, gamma: f64) -> Vec<Complex64> {
    (0..shear.nz)
        .map(|i| {
            let d = Complex64::new(shear.u[i], -gamma);
            let integral = sol.chi[i] / d;
            shear.du[i] * integral + d.inv()
        })
        .collect()
}

/// Build the linear-run initial state phi_hat (= psi_zz per mode).
fn initial_phi(config: &RunConfig, xt: &XTransform) -> Result<(SpectralField, Option<f64>)> {
    let grid = config.grid;
    let mut phi = SpectralField::zeros(grid);
    let mut gamma = None;
    match &config.initial {
        InitialData::Zero => {}
        InitialData::Mode { kx, mz, amp } => {
            if *mz == 0 {
                return Err(CoreError::InvalidParameter {
                    name: "mz",
                    message: "vertical mode must be at least 1".into(),
                });
            }
            check_mode_bounds(config, *kx)?;
            // psi = amp sin(2 pi kx x) sin(mz pi z): modes +-kx carry
            // -+ i amp/2 sin(mz pi z); phi = -(mz pi)^2 psi.
            let m = *mz as f64 * std::f64::consts::PI;
            for i in 0..grid.nz {
                let prof = -(m * m) * (m * grid.z(i)).sin() * 0.5 * amp;
                phi.coeffs[[i, *kx]] = Complex64::new(0.0, -prof);
                phi.coeffs[[i, grid.nx - kx]] = Complex64::new(0.0, prof);
            }
        }
        InitialData::Eigenmode { n, amp } => {
            check_mode_bounds(config, *n)?;
            let (sol, g) = eigen_solution(config, config.probe_modes.max(*n))?;
            gamma = Some(g);
            for i in 0..grid.nz {
                let c = 0.5 * amp * sol.chi_zz[i];
                phi.coeffs[[i, *n]] = c;
                phi.coeffs[[i, grid.nx - n]] = c.conj();
            }
        }
        InitialData::Superposition { kind, n_max, amp } => {
            if *n_max == 0 || *n_max > grid.nx / 3 {
                return Err(CoreError::InvalidParameter {
                    name: "n_max",
                    message: format!("need 1 <= n_max <= nx/3 = {}, got {n_max}", grid.nx / 3),
                });
            }
            let (sol, g) = eigen_solution(config, config.probe_modes.max(*n_max))?;
            gamma = Some(g);
            for n in 1..=*n_max {
                let a = kind.coefficient(n);
                for i in 0..grid.nz {
                    let c = 0.5 * amp * a * sol.chi_zz[i];
                    phi.coeffs[[i, n]] = c;
                    phi.coeffs[[i, grid.nx - n]] = c.conj();
                }
            }
        }
        InitialData::RandomTrig { seed, kx_max, mz_max, amp } => {
            let psi = random_wall_respecting_field(grid, *seed, *kx_max, *mz_max, *amp, true);
            // phi = psi_zz computed analytically term by term is already
            // folded into the generator when `as_phi` is true.
            phi = xt.forward(&psi);
        }
        InitialData::Samples(f) => {
            if f.grid != grid {
                return Err(CoreError::DimensionMismatch(
                    "initial samples live on a different grid".into(),
                ));
            }
            phi = xt.forward(f);
        }
    }
    Ok((phi, gamma))
}

/// Build the nonlinear-run initial state u (physical).
fn initial_u(config: &RunConfig) -> Result<(Field, Option<f64>)> {
    let grid = config.grid;
    let mut gamma = None;
    let u = match &config.initial {
        InitialData::Zero => Field::zeros(grid),
        InitialData::Mode { kx, mz, amp } => {
            if *mz == 0 {
                return Err(CoreError::InvalidParameter {
                    name: "mz",
                    message: "vertical mode must be at least 1 (zero vertical mean)".into(),
                });
            }
            if *kx >= 1 {
                check_mode_bounds(config, *kx)?;
            }
            let (kxf, mzf, a) = (*kx as f64, *mz as f64, *amp);
            Field::from_fn(grid, |x, z| {
                a * (2.0 * std::f64::consts::PI * kxf * x).sin()
                    * (mzf * std::f64::consts::PI * z).cos()
            })
        }
        InitialData::Eigenmode { n, amp } => {
            check_mode_bounds(config, *n)?;
            let (sol, g) = eigen_solution(config, config.probe_modes.max(*n))?;
            gamma = Some(g);
            let shear = config.shear.as_ref().unwrap();
            let du = chi_prime(&sol, shear, g);
            let nf = *n as f64;
            let mut f = Field::zeros(grid);
            for i in 0..grid.nz {
                for j in 0..grid.nx {
                    let phase = Complex64::from_polar(
                        1.0,
                        2.0 * std::f64::consts::PI * nf * grid.x(j),
                    );
                    f.values[[i, j]] = amp * (du[i] * phase).re;
                }
            }
            f
        }
        InitialData::Superposition { kind, n_max, amp } => {
            if *n_max == 0 || *n_max > grid.nx / 3 {
                return Err(CoreError::InvalidParameter {
                    name: "n_max",
                    message: format!("need 1 <= n_max <= nx/3 = {}, got {n_max}", grid.nx / 3),
                });
            }
            let (sol, g) = eigen_solution(config, config.probe_modes.max(*n_max))?;
            gamma = Some(g);
            let shear = config.shear.as_ref().unwrap();
            let du = chi_prime(&sol, shear, g);
            let mut f = Field::zeros(grid);
            for n in 1..=*n_max {
                let a = amp * kind.coefficient(n);
                for i in 0..grid.nz {
                    for j in 0..grid.nx {
                        let phase = Complex64::from_polar(
                            1.0,
                            2.0 * std::f64::consts::PI * n as f64 * grid.x(j),
                        );
                        f.values[[i, j]] += a * (du[i] * phase).re;
                    }
                }
            }
            f
        }
        InitialData::RandomTrig { seed, kx_max, mz_max, amp } => {
            random_wall_respecting_field(grid, *seed, *kx_max, *mz_max, *amp, false)
        }
        InitialData::Samples(f) => {
            if f.grid != grid {
                return Err(CoreError::DimensionMismatch(
                    "initial samples live on a different grid".into(),
                ));
            }
            f.clone()
        }
    };
    Ok((project_h(&u), gamma))
}

/// Random band-limited field from a pinned ChaCha8 stream.  For nonlinear
/// data (`as_phi = false`) the vertical structure is `cos(m pi z)` (zero
/// vertical mean); for linear data it is `-(m pi)^2 sin(m pi z)`, i.e. the
/// `psi_zz` of a wall-vanishing stream function.
fn random_wall_respecting_field(
    grid: GridSpec,
    seed: u64,
    kx_max: usize,
    mz_max: usize,
    amp: f64,
    as_phi: bool,
) -> Field {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kx_max = kx_max.min(grid.nx / 3).max(1);
    let mz_max = mz_max.max(1);
    let mut f = Field::zeros(grid);
    for k in 1..=kx_max {
        for m in 1..=mz_max {
            let a: f64 = rng.random_range(-1.0..1.0);
            let b: f64 = rng.random_range(-1.0..1.0);
            let mf = m as f64 * std::f64::consts::PI;
            for i in 0..grid.nz {
                let zprof = if as_phi {
                    -(mf * mf) * (mf * grid.z(i)).sin()
                } else {
                    (mf * grid.z(i)).cos()
                };
                for j in 0..grid.nx {
                    let th = 2.0 * std::f64::consts::PI * k as f64 * grid.x(j);
                    f.values[[i, j]] += (a * th.cos() + b * th.sin()) * zprof;
                }
            }
        }
    }
    let scale = f.max_abs();
    if scale > 0.0 {
        let s = amp / scale;
        f.values.mapv_inplace(|v| s * v);
    }
    f
}

fn run_linear(config: &RunConfig) -> Result<Trajectory> {
    let grid = config.grid;
    let xt = XTransform::new(grid.nx);
    let (mut state, gamma) = initial_phi(config, &xt)?;
    let system = LinearPsiSystem::new(grid, config.shear.clone().unwrap())?;

    let vmax = config.shear.as_ref().map(|s| s.max_abs()).unwrap_or(0.0);
    let auto_dt = |_state: &SpectralField| -> f64 {
        let cap = config.t_end / 40.0;
        if vmax > 0.0 {
            (config.cfl_safety * grid.dx() / vmax).min(cap)
        } else {
            cap
        }
    };

    let mut sampler = Sampler::new(config.energy_levels, config.probe_modes, grid.nu_h);
    let scale0 = l2_norm_sq_spectral(&state).sqrt().max(1e-30);

    let record = |sampler: &mut Sampler, t: f64, state: &SpectralField| -> Result<()> {
        let psi = system.solve_psi(state);
        let (_, u) = system.velocity_of(state, &xt);
        sampler.record(t, &u, state, Some(&psi))
    };
    record(&mut sampler, 0.0, &state)?;

    let mut t = 0.0;
    let mut steps = 0usize;
    let mut status = RunStatus::Completed;
    let mut dt_nominal = match config.dt {
        DtSpec::Fixed(dt) => dt,
        DtSpec::Auto => auto_dt(&state),
    };

    while t < config.t_end * (1.0 - 1e-12) {
        if matches!(config.dt, DtSpec::Auto) && steps % 10 == 0 && steps > 0 {
            dt_nominal = auto_dt(&state);
        }
        let dt = dt_nominal.min(config.t_end - t);
        match ifrk4_step(&system, &state, dt) {
            Ok(next) => state = next,
            Err(CoreError::NonFinite { .. }) => {
                status = RunStatus::Blowup { t };
                break;
            }
            Err(e) => return Err(e),
        }
        t += dt;
        steps += 1;
        if !state.is_finite() || l2_norm_sq_spectral(&state).sqrt() > 1e8 * scale0 {
            status = RunStatus::Blowup { t };
            break;
        }
        if steps % config.sample_every == 0 || t >= config.t_end * (1.0 - 1e-12) {
            record(&mut sampler, t, &state)?;
        }
        if steps > 2_000_000 {
            return Err(CoreError::FitError("step budget exceeded (2e6 steps)".into()));
        }
    }
    if matches!(status, RunStatus::Blowup { .. }) && *sampler.times.last().unwrap() < t {
        // Record the last finite state so the blow-up is visible in outputs.
        if state.is_finite() {
            record(&mut sampler, t, &state)?;
        }
    }

    let (_, u) = system.velocity_of(&state, &xt);
    Ok(Trajectory {
        times: sampler.times,
        reports: sampler.reports,
        probes: sampler.probes,
        psi_probes: sampler.psi_probes,
        final_state: u,
        status,
        steps,
        gamma,
    })
}

fn run_nonlinear(config: &RunConfig) -> Result<Trajectory> {
    let grid = config.grid;
    let system = NonlinearSystem::new(grid, config.dealias);
    let (u0, gamma) = initial_u(config)?;
    let mut state = system.transform().forward(&u0);
    if config.dealias {
        apply_dealias_mask(&mut state);
    }

    let mut sampler = Sampler::new(config.energy_levels, config.probe_modes, grid.nu_h);
    let scale0 = l2_norm_sq_spectral(&state).sqrt().max(1e-30);

    let cfl_bound = |state: &SpectralField| -> f64 {
        let u = system.transform().inverse(state);
        let w = diagnose_w(&u);
        let (umax, wmax) = (u.max_abs(), w.max_abs());
        let cap = config.t_end / 40.0;
        let mut dt = cap;
        if umax > 0.0 {
            dt = dt.min(config.cfl_safety * grid.dx() / umax);
        }
        if wmax > 0.0 {
            dt = dt.min(config.cfl_safety * grid.dz() / wmax);
        }
        dt
    };

    {
        let u = system.transform().inverse(&state);
        sampler.record(0.0, &u, &state, None)?;
    }

    let mut t = 0.0;
    let mut steps = 0usize;
    let mut status = RunStatus::Completed;
    let mut dt_nominal = match config.dt {
        DtSpec::Fixed(dt) => dt,
        DtSpec::Auto => cfl_bound(&state),
    };

    while t < config.t_end * (1.0 - 1e-12) {
        if matches!(config.dt, DtSpec::Auto) && steps % 10 == 0 && steps > 0 {
            dt_nominal = cfl_bound(&state);
        }
        let dt = dt_nominal.min(config.t_end - t);
        match ifrk4_step(&system, &state, dt) {
            Ok(next) => state = next,
            Err(CoreError::NonFinite { .. }) => {
                status = RunStatus::Blowup { t };
                break;
            }
            Err(e) => return Err(e),
        }
        t += dt;
        steps += 1;
        if !state.is_finite() || l2_norm_sq_spectral(&state).sqrt() > 1e8 * scale0 {
            status = RunStatus::Blowup { t };
            break;
        }
        if steps % config.sample_every == 0 || t >= config.t_end * (1.0 - 1e-12) {
            let u = system.transform().inverse(&state);
            sampler.record(t, &u, &state, None)?;
        }
        if steps > 2_000_000 {
            return Err(CoreError::FitError("step budget exceeded (2e6 steps)".into()));
        }
    }
    if matches!(status, RunStatus::Blowup { .. })
        && state.is_finite()
        && *sampler.times.last().unwrap() < t
    {
        let u = system.transform().inverse(&state);
        sampler.record(t, &u, &state, None)?;
    }

    let final_state = system.transform().inverse(&state);
    Ok(Trajectory {
        times: sampler.times,
        reports: sampler.reports,
        probes: sampler.probes,
        psi_probes: sampler.psi_probes,
        final_state,
        status,
        steps,
        gamma,
    })
}
