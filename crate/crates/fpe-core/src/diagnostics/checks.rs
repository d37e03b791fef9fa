//! Trajectory-level monitors: maximum principle on the vorticity sup-norm,
//! the dissipative regularity-criterion integral, and Poincare ratios.

use crate::error::{CoreError, Result};
use crate::evolution::run::Trajectory;
use crate::spectral::grid::Field;
use crate::spectral::norms::{l2_norm, mixed_norm};
use crate::spectral::operators::dx;
use crate::spectral::vertical::{diagnose_w, project_h};

/// Allowed relative overshoot of `max_t |omega|_inf` over `|omega_0|_inf`
/// before a run is flagged; covers time-discretization wiggle on honest
/// runs while still catching resolution artifacts.
pub const MAX_PRINCIPLE_TOLERANCE: f64 = 1e-3;

/// Outcome of [`max_principle_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxPrincipleReport {
    pub initial_omega_inf: f64,
    pub max_omega_inf: f64,
    /// `max_omega_inf / initial_omega_inf`.
    pub overshoot: f64,
    /// Overshoot within `1 + MAX_PRINCIPLE_TOLERANCE`.
    pub pass: bool,
    /// First sample time where the bound was exceeded, if any.
    pub first_violation: Option<f64>,
}

/// Check the vorticity maximum principle over a trajectory: the transport
/// and dissipation structure forbids `|d_z u|_inf` from ever exceeding its
/// initial value, so sustained overshoot signals under-resolution (or a
/// genuine blow-up candidate).
pub fn max_principle_check(traj: &Trajectory) -> Result<MaxPrincipleReport> {
    let initial = traj
        .reports
        .first()
        .ok_or_else(|| CoreError::Internal("trajectory has no samples".into()))?
        .omega_inf;
    if initial == 0.0 {
        return Err(CoreError::UndefinedRatio);
    }
    let mut max = 0.0f64;
    let mut first_violation = None;
    for rep in &traj.reports {
        max = max.max(rep.omega_inf);
        if first_violation.is_none() && rep.omega_inf > initial * (1.0 + MAX_PRINCIPLE_TOLERANCE) {
            first_violation = Some(rep.t);
        }
    }
    let overshoot = max / initial;
    Ok(MaxPrincipleReport {
        initial_omega_inf: initial,
        max_omega_inf: max,
        overshoot,
        pass: overshoot <= 1.0 + MAX_PRINCIPLE_TOLERANCE,
        first_violation,
    })
}

/// Time integral of the regularity-criterion integrand
/// `|Lambda^{(3-alpha)/2} d_z u|_{L^2}^2` over the whole trajectory, by
/// trapezoid over the recorded samples.
pub fn bkm_report(traj: &Trajectory) -> f64 {
    trapezoid(&traj.times, &integrands(traj))
}

/// Same integral restricted to samples with `t0 <= t <= t1`.  Built from
/// identical per-panel terms, so partitions at sample times add up exactly:
/// `range(a, b) + range(b, c) = range(a, c)` to rounding.
pub fn bkm_integral_range(traj: &Trajectory, t0: f64, t1: f64) -> Result<f64> {
    if !(t1 > t0) {
        return Err(CoreError::InvalidParameter {
            name: "window",
            message: format!("need t0 < t1, got ({t0}, {t1})"),
        });
    }
    let span = traj.times.last().copied().unwrap_or(0.0) - traj.times.first().copied().unwrap_or(0.0);
    let slack = 1e-9 * span.max(1.0);
    let vals = integrands(traj);
    let mut ts = Vec::new();
    let mut ys = Vec::new();
    for (i, &t) in traj.times.iter().enumerate() {
        if t >= t0 - slack && t <= t1 + slack {
            ts.push(t);
            ys.push(vals[i]);
        }
    }
    if ts.len() < 2 {
        return Err(CoreError::InvalidParameter {
            name: "window",
            message: format!("fewer than two samples inside [{t0}, {t1}]"),
        });
    }
    Ok(trapezoid(&ts, &ys))
}

fn integrands(traj: &Trajectory) -> Vec<f64> {
    traj.reports.iter().map(|r| r.bkm_integrand).collect()
}

fn trapezoid(ts: &[f64], ys: &[f64]) -> f64 {
    let mut total = 0.0;
    for i in 1..ts.len() {
        total += 0.5 * (ts[i] - ts[i - 1]) * (ys[i] + ys[i - 1]);
    }
    total
}

/// Poincare ratios of a velocity field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoincareRatios {
    /// `|u|_{L^2} / |d_z u|_{L^2}` after removing the vertical mean; the
    /// zero-mean Poincare inequality on [0, 1] bounds it by 1/pi.
    pub z_ratio: f64,
    /// `|w|_{L^2} / |d_x u|_{L^2}`; since `d_z w = -d_x u` and w vanishes
    /// at both walls, the Dirichlet Poincare inequality bounds it by 1/pi.
    pub w_ratio: f64,
}

/// Compute both Poincare ratios.  The input is projected onto the
/// zero-vertical-mean subspace for the z-ratio (the inequality lives there).
pub fn poincare_ratios(u: &Field) -> Result<PoincareRatios> {
    let uh = project_h(u);
    let num_z = l2_norm(&uh);
    let den_z = mixed_norm(&uh, 0.0, 1)?;
    if den_z == 0.0 {
        return Err(CoreError::UndefinedRatio);
    }
    let ux = dx(u);
    let w = diagnose_w(u);
    let den_w = l2_norm(&ux);
    if den_w == 0.0 {
        return Err(CoreError::UndefinedRatio);
    }
    Ok(PoincareRatios {
        z_ratio: num_z / den_z,
        w_ratio: l2_norm(&w) / den_w,
    })
}
