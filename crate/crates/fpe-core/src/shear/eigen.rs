//! Unstable eigenfunctions of the linearized system around a shear `U(z)`.
//!
//! Given a dispersion root `gamma` (see [`super::dispersion`]), the
//! stream-function eigenfunction is
//!
//! ```text
//!     chi(z) = (U(z) - i gamma) * int_0^z (U(y) - i gamma)^{-2} dy,
//! ```
//!
//! which vanishes at z = 0 identically and at z = 1 because the integral
//! equals F(gamma) = 0 there.  The mode `psi_n = chi(z) e^{2 pi i n x}`
//! grows like `e^{n beta_n t}` with
//!
//! ```text
//!     beta_n = 2 pi gamma - nu_h sigma(n)^alpha / n,
//! ```
//!
//! i.e. `2 pi gamma - (2 pi)^alpha nu_h n^{-(1-alpha)}` under the default
//! symbol convention; at alpha = 1 this collapses to `2 pi (gamma - nu_h)`
//! for every n, the critical balance.  `chi` satisfies the hydrostatic
//! Orr-Sommerfeld identity `(U - i gamma) chi'' = U'' chi` exactly, which is
//! what [`residual_orr_sommerfeld`] checks with honest finite differences.

use ndarray::Array1;
use num_complex::Complex64;

use super::profile::ShearProfile;
use crate::error::{CoreError, Result};
use crate::spectral::grid::{Field, GridSpec, SymbolScale};
use crate::spectral::vertical::{cumulative_simpson_complex, dz_samples_complex};

/// Growth rate `beta_n` under the default (`TwoPi`) symbol convention.
pub fn beta_n(gamma: f64, alpha: f64, nu_h: f64, n: usize) -> f64 {
    beta_n_with_scale(gamma, alpha, nu_h, n, SymbolScale::TwoPi)
}

/// Growth rate `beta_n = 2 pi gamma - nu_h sigma(n)^alpha / n` under an
/// explicit symbol convention.
pub fn beta_n_with_scale(
    gamma: f64,
    alpha: f64,
    nu_h: f64,
    n: usize,
    scale: SymbolScale,
) -> f64 {
    assert!(n >= 1, "mode index must be positive");
    2.0 * std::f64::consts::PI * gamma - nu_h * scale.sigma(n as i64).powf(alpha) / n as f64
}

/// Eigenfunction `chi` together with the cumulative integral
/// `I(z) = int_0^z (U - i gamma)^{-2} dy` it is built from.
pub fn build_chi(profile: &ShearProfile, gamma: f64) -> Result<(Array1<Complex64>, Array1<Complex64>)> {
    if !(gamma > 0.0) {
        return Err(CoreError::InvalidParameter {
            name: "gamma",
            message: format!("must be positive, got {gamma}"),
        });
    }
    let n = profile.nz;
    let h = 1.0 / (n - 1) as f64;
    let mut integrand = vec![Complex64::default(); n];
    for i in 0..n {
        let d = Complex64::new(profile.u[i], -gamma);
        integrand[i] = (d * d).inv();
    }
    let mut integral = vec![Complex64::default(); n];
    cumulative_simpson_complex(&integrand, h, &mut integral);
    let mut chi = Array1::from_elem(n, Complex64::default());
    for i in 0..n {
        chi[i] = Complex64::new(profile.u[i], -gamma) * integral[i];
    }
    Ok((chi, Array1::from(integral)))
}

/// An assembled eigenpair: the dispersion root, the eigenfunction, its exact
/// second derivative `chi'' = U'' I`, and the growth-rate table.
#[derive(Debug, Clone)]
pub struct EigenSolution {
    pub gamma: f64,
    pub chi: Array1<Complex64>,
    /// `d^2 chi / dz^2` via the Orr-Sommerfeld identity (spectrally clean,
    /// no finite differencing).
    pub chi_zz: Array1<Complex64>,
    pub alpha: f64,
    pub nu_h: f64,
    pub symbol_scale: SymbolScale,
    /// `beta[n-1]` is the growth rate of mode n, n = 1..=beta.len().
    pub beta: Vec<f64>,
}

impl EigenSolution {
    /// Build the eigenpair for a validated dispersion root.  Fails if `chi`
    /// does not vanish at both walls to 1e-8 of its amplitude — the signature
    /// of `gamma` not actually solving the dispersion relation.
    pub fn build(
        profile: &ShearProfile,
        gamma: f64,
        alpha: f64,
        nu_h: f64,
        symbol_scale: SymbolScale,
        n_table: usize,
    ) -> Result<Self> {
        let (chi, integral) = build_chi(profile, gamma)?;
        let nz = profile.nz;
        let amp = chi.iter().fold(0.0f64, |m, c| m.max(c.norm()));
        if amp == 0.0 {
            return Err(CoreError::Internal("eigenfunction is identically zero".into()));
        }
        let defect = chi[0].norm().max(chi[nz - 1].norm());
        if defect > 1e-8 * amp {
            return Err(CoreError::InvalidParameter {
                name: "gamma",
                message: format!(
                    "chi does not vanish on the walls (defect {defect:.3e} vs amplitude {amp:.3e}); \
                     gamma is not a dispersion root at this resolution"
                ),
            });
        }
        let mut chi_zz = Array1::from_elem(nz, Complex64::default());
        for i in 0..nz {
            chi_zz[i] = profile.d2u[i] * integral[i];
        }
        let beta = (1..=n_table.max(1))
            .map(|n| beta_n_with_scale(gamma, alpha, nu_h, n, symbol_scale))
            .collect();
        Ok(EigenSolution { gamma, chi, chi_zz, alpha, nu_h, symbol_scale, beta })
    }

    pub fn beta(&self, n: usize) -> f64 {
        beta_n_with_scale(self.gamma, self.alpha, self.nu_h, n, self.symbol_scale)
    }
}

/// Max-norm residual of the mode-n eigenvalue equation
/// `(n beta_n + 2 pi i n U + nu_h sigma(n)^alpha) chi'' - 2 pi i n U'' chi`,
/// normalized by `max |2 pi n U'' chi|`.  `chi''` is computed with the
/// fourth-order stencils, so the residual measures the discrete fidelity of
/// the supplied eigenfunction, not an algebraic identity.
pub fn residual_orr_sommerfeld(
    profile: &ShearProfile,
    gamma: f64,
    chi: &Array1<Complex64>,
    n: usize,
    alpha: f64,
    nu_h: f64,
    symbol_scale: SymbolScale,
) -> Result<f64> {
    let nz = profile.nz;
    if chi.len() != nz {
        return Err(CoreError::DimensionMismatch(format!(
            "chi has {} samples, profile has {}",
            chi.len(),
            nz
        )));
    }
    if n == 0 {
        return Err(CoreError::InvalidParameter {
            name: "n",
            message: "mode index must be positive".into(),
        });
    }
    let h = 1.0 / (nz - 1) as f64;
    let chi_s = chi.as_slice().expect("contiguous");
    let mut d1 = vec![Complex64::default(); nz];
    let mut d2 = vec![Complex64::default(); nz];
    dz_samples_complex(chi_s, h, &mut d1);
    dz_samples_complex(&d1, h, &mut d2);

    let two_pi_n = 2.0 * std::f64::consts::PI * n as f64;
    let nbeta = n as f64 * beta_n_with_scale(gamma, alpha, nu_h, n, symbol_scale);
    let dissip = nu_h * symbol_scale.sigma(n as i64).powf(alpha);
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for i in 0..nz {
        let coeff = Complex64::new(nbeta + dissip, two_pi_n * profile.u[i]);
        let drive = Complex64::new(0.0, two_pi_n * profile.d2u[i]);
        let r = coeff * d2[i] - drive * chi[i];
        worst = worst.max(r.norm());
        scale = scale.max((drive * chi[i]).norm());
    }
    if scale == 0.0 {
        return Err(CoreError::UndefinedRatio);
    }
    Ok(worst / scale)
}

/// Coefficient law for superposition initial data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoefficientKind {
    /// `a_n = n^{-(s+1)}`: data on the edge of `H^s` regularity in x.
    Sobolev { s: f64 },
    /// `a_n = exp(-n^{1/sigma})`: Gevrey-class data.
    Gevrey { sigma: f64 },
}

impl CoefficientKind {
    pub fn coefficient(&self, n: usize) -> f64 {
        match *self {
            CoefficientKind::Sobolev { s } => (n as f64).powf(-(s + 1.0)),
            CoefficientKind::Gevrey { sigma } => (-((n as f64).powf(1.0 / sigma))).exp(),
        }
    }
}

/// Multi-mode initial data `psi_0 = sum_{n=1}^{N} a_n Re(chi(z) e^{2 pi i n x})`
/// together with the coefficients `a_n`, for growth-superposition studies.
/// Requires `n_max <= nx/3` so the data survives dealiasing untouched.
pub fn superposition_data(
    grid: &GridSpec,
    chi: &Array1<Complex64>,
    kind: CoefficientKind,
    n_max: usize,
) -> Result<(Field, Vec<f64>)> {
    if chi.len() != grid.nz {
        return Err(CoreError::DimensionMismatch(format!(
            "chi has {} samples, grid has nz = {}",
            chi.len(),
            grid.nz
        )));
    }
    if n_max == 0 || n_max > grid.nx / 3 {
        return Err(CoreError::InvalidParameter {
            name: "n_max",
            message: format!("need 1 <= n_max <= nx/3 = {}, got {n_max}", grid.nx / 3),
        });
    }
    let coeffs: Vec<f64> = (1..=n_max).map(|n| kind.coefficient(n)).collect();
    let mut psi = Field::zeros(*grid);
    for i in 0..grid.nz {
        for j in 0..grid.nx {
            let x = grid.x(j);
            let mut acc = 0.0;
            for (idx, &a) in coeffs.iter().enumerate() {
                let n = (idx + 1) as f64;
                let phase = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * n * x);
                acc += a * (chi[i] * phase).re;
            }
            psi.values[[i, j]] = acc;
        }
    }
    Ok((psi, coeffs))
}

/// Analytic prediction for the squared `H^s_x`-weighted growth of a
/// superposition: `sum_n a_n^2 n^{2s} e^{2 n beta_n t}`, normalized by its
/// t = 0 value.
pub fn superposition_growth_factor(
    coeffs: &[f64],
    s: f64,
    gamma: f64,
    alpha: f64,
    nu_h: f64,
    scale: SymbolScale,
    t: f64,
) -> f64 {
    let mut now = 0.0;
    let mut start = 0.0;
    for (idx, &a) in coeffs.iter().enumerate() {
        let n = idx + 1;
        let weight = a * a * (n as f64).powf(2.0 * s);
        let rate = n as f64 * beta_n_with_scale(gamma, alpha, nu_h, n, scale);
        now += weight * (2.0 * rate * t).exp();
        start += weight;
    }
    now / start
}
