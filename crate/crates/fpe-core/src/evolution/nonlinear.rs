//! Nonlinear tendency for the full equation in velocity form.
//!
//! Given `u` (spectral in x), one evaluation computes the diagnostic
//! vertical velocity `w = -int_0^z u_x dz'`, forms the advection
//! `N = u u_x + w u_z` pseudo-spectrally (2/3-rule dealiasing in x), and
//! returns `-(N - int_0^1 N dz)`.  Subtracting the vertical mean realizes
//! the pressure gradient: integrating the momentum equation in z shows
//! `p_x = -d/dx int_0^1 u^2 dz` for zero-vertical-mean data, so the
//! projected tendency keeps the state in that subspace to rounding error.
//! Dissipation is left to the integrating factor of the time stepper.

use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::spectral::fft::XTransform;
use crate::spectral::grid::{Field, GridSpec, SpectralField};
use crate::spectral::operators::apply_dx;
use crate::spectral::vertical::{cumulative_simpson, dz_samples, vertical_mean};

/// Zero all modes with `|k| > nx/3` (and Nyquist), the classic 2/3 rule for
/// quadratic products.
pub fn apply_dealias_mask(f: &mut SpectralField) {
    let grid = f.grid;
    let keep = grid.nx / 3;
    for idx in 0..grid.nx {
        let k = grid.wavenumber(idx).unsigned_abs() as usize;
        if k > keep {
            for i in 0..grid.nz {
                f.coeffs[[i, idx]] = Complex64::default();
            }
        }
    }
}

/// The nonlinear system: grid, cached transform, dealias switch, and the
/// integrating-factor rates.
pub struct NonlinearSystem {
    pub grid: GridSpec,
    pub dealias: bool,
    xt: XTransform,
    lambda: Vec<f64>,
}

impl NonlinearSystem {
    pub fn new(grid: GridSpec, dealias: bool) -> Self {
        let xt = XTransform::new(grid.nx);
        let lambda = (0..grid.nx)
            .map(|idx| {
                let s = grid.sigma(idx);
                if s == 0.0 { 0.0 } else { grid.nu_h * s.powf(grid.alpha) }
            })
            .collect();
        NonlinearSystem { grid, dealias, xt, lambda }
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn transform(&self) -> &XTransform {
        &self.xt
    }

    /// `-(u u_x + w u_z - vertical mean)` in spectral form.  Non-finite
    /// products raise [`CoreError::NonFinite`], which the run loop converts
    /// into a blow-up flag.
    pub fn tendency(&self, u_hat: &SpectralField) -> Result<SpectralField> {
        let grid = self.grid;
        let (nz, nx) = (grid.nz, grid.nx);

        let mut u_band = u_hat.clone();
        if self.dealias {
            apply_dealias_mask(&mut u_band);
        }
        let mut ux_hat = u_band.clone();
        apply_dx(&mut ux_hat);

        let u = self.xt.inverse(&u_band);
        let ux = self.xt.inverse(&ux_hat);

        // w = -cumint_z(u_x), u_z by fourth-order differences, per column.
        let h = grid.dz();
        let mut col = vec![0.0; nz];
        let mut acc = vec![0.0; nz];
        let mut n_field = Field::zeros(grid);
        let mut uz_col = vec![0.0; nz];
        for j in 0..nx {
            for i in 0..nz {
                col[i] = ux.values[[i, j]];
            }
            cumulative_simpson(&col, h, &mut acc);
            for i in 0..nz {
                uz_col[i] = u.values[[i, j]];
            }
            // reuse col for u_z
            dz_samples(&uz_col, h, &mut col);
            for i in 0..nz {
                let w = -acc[i];
                n_field.values[[i, j]] = u.values[[i, j]] * ux.values[[i, j]] + w * col[i];
            }
        }
        if !n_field.is_finite() {
            return Err(CoreError::NonFinite { t: f64::NAN });
        }

        // Pressure projection: remove the vertical mean, then negate.
        let mean = vertical_mean(&n_field);
        for j in 0..nx {
            for i in 0..nz {
                n_field.values[[i, j]] = -(n_field.values[[i, j]] - mean[j]);
            }
        }

        let mut out = self.xt.forward(&n_field);
        if self.dealias {
            apply_dealias_mask(&mut out);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::norms::l2_norm;
    use crate::spectral::vertical::project_h;
    use crate::spectral::x_forward;
    use std::f64::consts::PI;

    #[test]
    fn tendency_has_zero_vertical_mean() {
        let grid = GridSpec::new(32, 65, 1.0, 0.05).unwrap();
        let u = Field::from_fn(grid, |x, z| {
            0.8 * (2.0 * PI * x).sin() * (PI * z).cos()
                + 0.3 * (4.0 * PI * x).cos() * (2.0 * PI * z).cos()
        });
        let sys = NonlinearSystem::new(grid, true);
        let tend_hat = sys.tendency(&x_forward(&u)).unwrap();
        let tend = sys.transform().inverse(&tend_hat);
        let mean = vertical_mean(&tend);
        let worst = mean.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(worst <= 1e-13, "tendency vertical mean {worst}");
    }

    #[test]
    fn single_mode_tendency_matches_hand_computation() {
        // u = sin(2 pi x) cos(pi z):
        //   u_x = 2 pi cos(2 pi x) cos(pi z)
        //   w   = -2 cos(2 pi x) sin(pi z)
        //   u_z = -pi sin(2 pi x) sin(pi z)
        //   N   = pi sin(4 pi x) [cos^2 + sin^2](pi z) = pi sin(4 pi x)
        // so N equals its own vertical mean and the projected tendency
        // vanishes: this datum is a steady state of the inviscid dynamics.
        let grid = GridSpec::new(64, 129, 1.0, 0.0).unwrap();
        let u = Field::from_fn(grid, |x, z| (2.0 * PI * x).sin() * (PI * z).cos());
        let sys = NonlinearSystem::new(grid, true);
        let tend_hat = sys.tendency(&x_forward(&u)).unwrap();
        let tend = sys.transform().inverse(&tend_hat);
        assert!(tend.max_abs() < 1e-6, "steady-state tendency {}", tend.max_abs());
    }

    #[test]
    fn energy_flux_of_projected_tendency_is_zero() {
        // <u, tendency> = 0: advection + pressure moves no L2 energy.
        let grid = GridSpec::new(48, 129, 1.0, 0.0).unwrap();
        let u = project_h(&Field::from_fn(grid, |x, z| {
            (2.0 * PI * x).sin() * (PI * z).cos()
                + 0.4 * (6.0 * PI * x).cos() * (2.0 * PI * z).cos()
                + 0.2 * (4.0 * PI * x).sin() * (3.0 * PI * z).cos()
        }));
        let sys = NonlinearSystem::new(grid, true);
        let tend_hat = sys.tendency(&x_forward(&u)).unwrap();
        let tend = sys.transform().inverse(&tend_hat);
        let flux = crate::spectral::l2_inner(&u, &tend).unwrap();
        let scale = l2_norm(&u) * l2_norm(&tend) + 1e-300;
        assert!(
            flux.abs() / scale < 1e-5,
            "energy flux {flux} vs scale {scale}"
        );
    }

    #[test]
    fn nan_input_is_reported_as_nonfinite() {
        let grid = GridSpec::new(16, 17, 1.0, 0.0).unwrap();
        let mut u = Field::from_fn(grid, |x, _| (2.0 * PI * x).sin());
        u.values[[3, 4]] = f64::NAN;
        let sys = NonlinearSystem::new(grid, true);
        assert!(matches!(
            sys.tendency(&x_forward(&u)),
            Err(CoreError::NonFinite { .. })
        ));
    }
}
