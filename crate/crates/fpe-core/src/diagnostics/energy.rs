//! The dissipation-weighted energy hierarchy and its running integrals.
//!
//! For a state `u` with exponent `alpha`, level k collects
//!
//! ```text
//!     E_k  = sum_{j=0..k} || L_h^{alpha j / 2} d_z^{k-j} u ||^2,
//!     Et_{k+1} = sum_{j=0..k} || L_h^{alpha (j+1) / 2} d_z^{k-j} u ||^2,
//! ```
//!
//! so `E_k = Et_k + || d_z^k u ||^2` holds term by term.  The running
//! quantity `Y_k(t) = E_k(t) + nu_h int_0^t Et_{k+1} ds` tracks the
//! dissipation bookkeeping; the plain L2 balance is
//! `E_0(t) + 2 nu_h int_0^t Et_1 ds = E_0(0)` (note the factor two relative
//! to `Y_0`), exposed here as [`EnergyReport::energy_balance`].

use crate::error::{CoreError, Result};
use crate::spectral::fft::x_forward;
use crate::spectral::grid::Field;
use crate::spectral::norms::weighted_l2_sq;
use crate::spectral::vertical::{diagnose_w, dz};

/// Highest supported hierarchy level (E_0..E_4).
pub const MAX_ENERGY_LEVELS: usize = 4;

/// Energy diagnostics of one state at one time.
#[derive(Debug, Clone)]
pub struct EnergyReport {
    pub t: f64,
    /// `e[k]` = E_k, k = 0..=levels.
    pub e: Vec<f64>,
    /// `etilde[k]` = Et_{k+1}, k = 0..=levels.
    pub etilde: Vec<f64>,
    pub omega_inf: f64,
    pub w_inf: f64,
    pub u_inf: f64,
    /// `|| L_h^{(3-alpha)/2} d_z u ||^2`, the regularity-criterion integrand.
    pub bkm_integrand: f64,
    /// `y[k]` = Y_k, running integrals accumulated by the caller or by
    /// chaining reports through [`energy_report`].
    pub y: Vec<f64>,
}

impl EnergyReport {
    /// `E_0 + 2 nu_h int Et_1 dt`, conserved exactly by the dynamics
    /// (advection and pressure move no L2 energy).  Equals `2 Y_0 - E_0`.
    pub fn energy_balance(&self) -> f64 {
        2.0 * self.y[0] - self.e[0]
    }

    /// Number of hierarchy levels beyond E_0.
    pub fn levels(&self) -> usize {
        self.e.len() - 1
    }
}

/// Energies of a single state, with `y[k] = e[k]` (no history).  `levels`
/// is capped at [`MAX_ENERGY_LEVELS`]; the grid must support `levels`
/// vertical derivatives.
pub fn energy_snapshot(u: &Field, t: f64, levels: usize) -> Result<EnergyReport> {
    if levels > MAX_ENERGY_LEVELS {
        return Err(CoreError::InvalidParameter {
            name: "levels",
            message: format!("at most {MAX_ENERGY_LEVELS}, got {levels}"),
        });
    }
    let alpha = u.grid.alpha;
    // One spectral transform per derivative order, reused across levels.
    let mut hats = Vec::with_capacity(levels + 1);
    hats.push(x_forward(u));
    let mut du = u.clone();
    for _ in 0..levels {
        du = dz(&du, 1)?;
        hats.push(x_forward(&du));
    }

    let mut e = vec![0.0; levels + 1];
    let mut etilde = vec![0.0; levels + 1];
    for k in 0..=levels {
        for j in 0..=k {
            let b = k - j;
            e[k] += weighted_l2_sq(&hats[b], alpha * j as f64 / 2.0);
            etilde[k] += weighted_l2_sq(&hats[b], alpha * (j + 1) as f64 / 2.0);
        }
    }

    let d1 = dz(u, 1)?;
    let omega_inf = d1.max_abs();
    let w_inf = diagnose_w(u).max_abs();
    let u_inf = u.max_abs();
    let bkm_integrand = if levels >= 1 {
        weighted_l2_sq(&hats[1], (3.0 - alpha) / 2.0)
    } else {
        weighted_l2_sq(&x_forward(&d1), (3.0 - alpha) / 2.0)
    };

    let y = e.clone();
    Ok(EnergyReport { t, e, etilde, omega_inf, w_inf, u_inf, bkm_integrand, y })
}

/// Snapshot plus running `Y_k`: the dissipation integrals continue from
/// `prior` by one trapezoid panel of `nu_h * Et_{k+1}`.
pub fn energy_report(
    u: &Field,
    t: f64,
    levels: usize,
    prior: Option<&EnergyReport>,
) -> Result<EnergyReport> {
    let mut rep = energy_snapshot(u, t, levels)?;
    if let Some(p) = prior {
        if p.levels() != levels {
            return Err(CoreError::DimensionMismatch(format!(
                "prior report has {} levels, requested {}",
                p.levels(),
                levels
            )));
        }
        if t <= p.t {
            return Err(CoreError::InvalidParameter {
                name: "t",
                message: format!("must increase along reports: {} -> {}", p.t, t),
            });
        }
        let nu = u.grid.nu_h;
        let dt = t - p.t;
        for k in 0..=levels {
            let integral_prev = p.y[k] - p.e[k];
            let panel = 0.5 * dt * nu * (p.etilde[k] + rep.etilde[k]);
            rep.y[k] = rep.e[k] + integral_prev + panel;
        }
    }
    Ok(rep)
}

/// Relative defect of the decomposition `E_k = Et_k + || d_z^k u ||^2`,
/// recomputed from scratch; a structural self-check used by tests.
pub fn hierarchy_defect(u: &Field, levels: usize) -> Result<f64> {
    let rep = energy_snapshot(u, 0.0, levels)?;
    let mut worst = 0.0f64;
    for k in 1..=levels {
        let dzk = dz(u, k)?;
        let plain = weighted_l2_sq(&x_forward(&dzk), 0.0);
        // Et_k is the previous level's etilde entry.
        let lhs = rep.e[k];
        let rhs = rep.etilde[k - 1] + plain;
        worst = worst.max((lhs - rhs).abs() / lhs.max(1e-300));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::grid::GridSpec;
    use std::f64::consts::PI;

    fn single_mode(alpha: f64) -> Field {
        let g = GridSpec::new(32, 257, alpha, 0.1).unwrap();
        Field::from_fn(g, |x, z| (2.0 * PI * x).sin() * (PI * z).cos())
    }

    #[test]
    fn closed_form_levels_for_single_mode() {
        for alpha in [0.5, 1.0, 1.5] {
            let u = single_mode(alpha);
            let rep = energy_snapshot(&u, 0.0, 2).unwrap();
            assert!((rep.e[0] - 0.25).abs() < 1e-7, "E0 = {}", rep.e[0]);
            let e1_want = (2.0 * PI).powf(alpha) / 4.0 + PI * PI / 4.0;
            assert!(
                (rep.e[1] - e1_want).abs() < 1e-6 * e1_want,
                "alpha={alpha}: E1 = {} vs {e1_want}",
                rep.e[1]
            );
            // BKM integrand: (2 pi)^{3 - alpha} * pi^2 / 4.
            let bkm_want = (2.0 * PI).powf(3.0 - alpha) * PI * PI / 4.0;
            assert!(
                (rep.bkm_integrand - bkm_want).abs() < 1e-6 * bkm_want,
                "alpha={alpha}: bkm {} vs {bkm_want}",
                rep.bkm_integrand
            );
        }
    }

    #[test]
    fn hierarchy_decomposition_holds() {
        let g = GridSpec::new(32, 129, 0.8, 0.05).unwrap();
        let u = Field::from_fn(g, |x, z| {
            (2.0 * PI * x).sin() * (PI * z).cos() + 0.3 * (4.0 * PI * x).cos() * (2.0 * PI * z).cos()
        });
        let defect = hierarchy_defect(&u, 3).unwrap();
        assert!(defect < 1e-10, "hierarchy defect {defect}");
    }

    #[test]
    fn running_y_accumulates_trapezoid_panels() {
        let g = GridSpec::new(16, 65, 1.0, 0.2).unwrap();
        let u0 = Field::from_fn(g, |x, z| (2.0 * PI * x).sin() * (PI * z).cos());
        let r0 = energy_report(&u0, 0.0, 1, None).unwrap();
        assert_eq!(r0.y[0], r0.e[0]);
        let mut u1 = u0.clone();
        u1.values.mapv_inplace(|v| 0.9 * v);
        let r1 = energy_report(&u1, 0.5, 1, Some(&r0)).unwrap();
        let want = r1.e[0] + 0.5 * 0.5 * 0.2 * (r0.etilde[0] + r1.etilde[0]);
        assert!((r1.y[0] - want).abs() < 1e-14 * want.abs().max(1.0));
        // time must advance
        assert!(energy_report(&u1, 0.5, 1, Some(&r1)).is_err());
    }

    #[test]
    fn levels_are_capped() {
        let u = single_mode(1.0);
        assert!(energy_snapshot(&u, 0.0, 5).is_err());
        assert!(energy_snapshot(&u, 0.0, 4).is_ok());
    }
}
