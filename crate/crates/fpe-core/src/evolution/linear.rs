//! Linearized evolution around a shear in stream-function form.
//!
//! The state is, per horizontal mode k, the column `phi_k(z) = d^2
//! psi_k/dz^2`.  One tendency evaluation solves the Dirichlet Poisson
//! problem `d^2 psi_k/dz^2 = phi_k`, `psi_k(0) = psi_k(1) = 0`, then forms
//!
//! ```text
//!     d phi_k/dt = -2 pi i k U phi_k + 2 pi i k U'' psi_k - nu_h sigma(k)^alpha phi_k.
//! ```
//!
//! With `phi = chi'' e^{2 pi i n x}` at a dispersion root this reduces to
//! `n beta_n phi`, the growth the eigenmode tests pin down.

use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::shear::profile::ShearProfile;
use crate::spectral::fft::XTransform;
use crate::spectral::grid::{Field, GridSpec, SpectralField};
use crate::spectral::vertical::dz_samples_complex;

/// Dirichlet Poisson solver on the uniform z grid.  The interior rows use
/// the three-point Laplacian with a Numerov right-hand-side correction
/// `(phi_{i-1} + 10 phi_i + phi_{i+1})/12`, one deferred-correction level
/// that lifts the plain second-order solve to fourth order in a single
/// tridiagonal pass.  Boundary rows enforce `psi = 0` exactly.
pub struct PoissonSolver {
    nz: usize,
    /// Forward-elimination multipliers of the constant tridiagonal matrix.
    cp: Vec<f64>,
    inv_den: Vec<f64>,
    h2: f64,
}

impl PoissonSolver {
    pub fn new(nz: usize) -> Result<Self> {
        if nz < 5 || nz % 2 == 0 {
            return Err(CoreError::InvalidParameter {
                name: "nz",
                message: format!("must be an odd integer >= 5, got {nz}"),
            });
        }
        let h = 1.0 / (nz - 1) as f64;
        let h2 = h * h;
        let m = nz - 2; // interior unknowns
        // Matrix rows: (1, -2, 1)/h^2.  Work in units of 1/h^2: diag -2, off 1.
        let mut cp = vec![0.0; m];
        let mut inv_den = vec![0.0; m];
        let mut den: f64 = -2.0;
        inv_den[0] = 1.0 / den;
        cp[0] = 1.0 / den;
        for i in 1..m {
            den = -2.0 - cp[i - 1];
            if den.abs() < 1e-300 {
                return Err(CoreError::Internal(
                    "singular tridiagonal pivot in Poisson solve".into(),
                ));
            }
            inv_den[i] = 1.0 / den;
            cp[i] = 1.0 / den;
        }
        Ok(PoissonSolver { nz, cp, inv_den, h2 })
    }

    /// Solve for one column: `psi` gets the Dirichlet solution of
    /// `psi'' = phi`; endpoints are set to exactly zero.
    pub fn solve_column(&self, phi: &[Complex64], psi: &mut [Complex64]) {
        let n = self.nz;
        debug_assert_eq!(phi.len(), n);
        debug_assert_eq!(psi.len(), n);
        let m = n - 2;
        // Numerov right-hand side, scaled by h^2 to match the unit-free matrix.
        let mut d = vec![Complex64::default(); m];
        for j in 0..m {
            let i = j + 1;
            d[j] = (phi[i - 1] + 10.0 * phi[i] + phi[i + 1]) * (self.h2 / 12.0);
        }
        // Thomas forward sweep (matrix diag -2, off-diagonals 1).
        d[0] = d[0] * self.inv_den[0];
        for j in 1..m {
            d[j] = (d[j] - d[j - 1]) * self.inv_den[j];
        }
        // Back substitution.
        psi[0] = Complex64::default();
        psi[n - 1] = Complex64::default();
        psi[m] = d[m - 1];
        for j in (0..m - 1).rev() {
            d[j] = d[j] - d[j + 1] * self.cp[j];
            psi[j + 1] = d[j];
        }
    }
}

/// The per-mode linear system: shear samples, Poisson solver, and the
/// integrating-factor rates `lambda_k = nu_h sigma(k)^alpha`.
pub struct LinearPsiSystem {
    pub grid: GridSpec,
    pub shear: ShearProfile,
    poisson: PoissonSolver,
    lambda: Vec<f64>,
}

impl LinearPsiSystem {
    pub fn new(grid: GridSpec, shear: ShearProfile) -> Result<Self> {
        if shear.nz != grid.nz {
            return Err(CoreError::DimensionMismatch(format!(
                "shear sampled at nz = {}, grid has nz = {}",
                shear.nz, grid.nz
            )));
        }
        let poisson = PoissonSolver::new(grid.nz)?;
        let lambda = (0..grid.nx)
            .map(|idx| {
                let s = grid.sigma(idx);
                if s == 0.0 { 0.0 } else { grid.nu_h * s.powf(grid.alpha) }
            })
            .collect();
        Ok(LinearPsiSystem { grid, shear, poisson, lambda })
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    /// Stream function `psi_k` for every mode of the state.
    pub fn solve_psi(&self, phi: &SpectralField) -> SpectralField {
        let (nz, nx) = (self.grid.nz, self.grid.nx);
        let mut psi = SpectralField::zeros(self.grid);
        let mut col = vec![Complex64::default(); nz];
        let mut out = vec![Complex64::default(); nz];
        for idx in 0..nx {
            for i in 0..nz {
                col[i] = phi.coeffs[[i, idx]];
            }
            self.poisson.solve_column(&col, &mut out);
            for i in 0..nz {
                psi.coeffs[[i, idx]] = out[i];
            }
        }
        psi
    }

    /// Advective part of the tendency (dissipation handled by the
    /// integrating factor).  The k = 0 column maps to zero: the system has
    /// no mean-in-x dynamics.  The Nyquist column's advective term is zeroed
    /// like the spectral x-derivative.
    pub fn advective_tendency(&self, phi: &SpectralField) -> Result<SpectralField> {
        let (nz, nx) = (self.grid.nz, self.grid.nx);
        let mut out = SpectralField::zeros(self.grid);
        let mut col = vec![Complex64::default(); nz];
        let mut psi = vec![Complex64::default(); nz];
        for idx in 0..nx {
            let k = self.grid.wavenumber(idx);
            if k == 0 || idx == nx / 2 {
                continue;
            }
            for i in 0..nz {
                col[i] = phi.coeffs[[i, idx]];
            }
            self.poisson.solve_column(&col, &mut psi);
            let ik = Complex64::new(0.0, 2.0 * std::f64::consts::PI * k as f64);
            for i in 0..nz {
                out.coeffs[[i, idx]] =
                    ik * (self.shear.d2u[i] * psi[i] - self.shear.u[i] * col[i]);
            }
        }
        if !out.is_finite() {
            return Err(CoreError::NonFinite { t: f64::NAN });
        }
        Ok(out)
    }

    /// Full linear tendency including the dissipation term; this is the
    /// operator whose eigenpairs are `(n beta_n, chi'' e^{2 pi i n x})`.
    pub fn full_tendency(&self, phi: &SpectralField) -> Result<SpectralField> {
        let mut out = self.advective_tendency(phi)?;
        for idx in 0..self.grid.nx {
            let l = self.lambda[idx];
            if l == 0.0 {
                continue;
            }
            for i in 0..self.grid.nz {
                out.coeffs[[i, idx]] -= l * phi.coeffs[[i, idx]];
            }
        }
        Ok(out)
    }

    /// Recover the horizontal perturbation velocity `u = d psi/dz` as a
    /// physical field (plus its spectral form), for diagnostics.
    pub fn velocity_of(&self, phi: &SpectralField, xt: &XTransform) -> (SpectralField, Field) {
        let psi = self.solve_psi(phi);
        let (nz, nx) = (self.grid.nz, self.grid.nx);
        let h = self.grid.dz();
        let mut u_hat = SpectralField::zeros(self.grid);
        let mut col = vec![Complex64::default(); nz];
        let mut der = vec![Complex64::default(); nz];
        for idx in 0..nx {
            for i in 0..nz {
                col[i] = psi.coeffs[[i, idx]];
            }
            dz_samples_complex(&col, h, &mut der);
            for i in 0..nz {
                u_hat.coeffs[[i, idx]] = der[i];
            }
        }
        let u = xt.inverse(&u_hat);
        (u_hat, u)
    }
}
