//! L2 norms and inner products on the channel: Parseval in x, composite
//! Simpson in z, with fractional weights applied spectrally.

use super::fft::{x_forward, XTransform};
use super::grid::{Field, GridSpec, SpectralField};
use super::vertical::dz;
use crate::error::Result;

/// Squared L2(Omega) norm of a spectral field: `sum_k` of the Simpson
/// z-integral of `|f_hat_k(z)|^2`.
pub fn l2_norm_sq_spectral(f: &SpectralField) -> f64 {
    let w = f.grid.simpson_weights();
    let mut total = 0.0;
    for i in 0..f.grid.nz {
        let mut row = 0.0;
        for idx in 0..f.grid.nx {
            row += f.coeffs[[i, idx]].norm_sqr();
        }
        total += w[i] * row;
    }
    total
}

/// Squared L2(Omega) norm of a physical field (Parseval in x exactly matches
/// the x Riemann sum; Simpson in z).
pub fn l2_norm_sq(f: &Field) -> f64 {
    let w = f.grid.simpson_weights();
    let nx = f.grid.nx as f64;
    let mut total = 0.0;
    for i in 0..f.grid.nz {
        let mut row = 0.0;
        for j in 0..f.grid.nx {
            row += f.values[[i, j]] * f.values[[i, j]];
        }
        total += w[i] * row / nx;
    }
    total
}

/// L2(Omega) norm.
pub fn l2_norm(f: &Field) -> f64 {
    l2_norm_sq(f).sqrt()
}

/// L2(Omega) inner product of two physical fields.
pub fn l2_inner(f: &Field, g: &Field) -> Result<f64> {
    f.check_same_grid(g)?;
    let w = f.grid.simpson_weights();
    let nx = f.grid.nx as f64;
    let mut total = 0.0;
    for i in 0..f.grid.nz {
        let mut row = 0.0;
        for j in 0..f.grid.nx {
            row += f.values[[i, j]] * g.values[[i, j]];
        }
        total += w[i] * row / nx;
    }
    Ok(total)
}

/// Mixed seminorm `|| L_h^a d_z^b f ||_{L2}`: b repeated fourth-order
/// z-derivatives, then the fractional weight `sigma(k)^{2a}` inside the
/// Parseval sum.  `a` must be non-negative; `b = 0` skips differentiation.
pub fn mixed_norm(f: &Field, a: f64, b: usize) -> Result<f64> {
    if !(a >= 0.0) {
        return Err(crate::error::CoreError::InvalidParameter {
            name: "a",
            message: format!("fractional weight must be non-negative, got {a}"),
        });
    }
    let dzb = if b == 0 { f.clone() } else { dz(f, b)? };
    let hat = x_forward(&dzb);
    Ok(weighted_l2_sq(&hat, a).sqrt())
}

/// Squared mixed seminorm straight from a spectral field (no z-derivatives).
pub fn weighted_l2_sq(hat: &SpectralField, a: f64) -> f64 {
    let grid = hat.grid;
    let w = grid.simpson_weights();
    let mut total = 0.0;
    for idx in 0..grid.nx {
        let sigma = grid.sigma(idx);
        let weight = if sigma == 0.0 && a == 0.0 { 1.0 } else { sigma.powf(2.0 * a) };
        if weight == 0.0 {
            continue;
        }
        let mut col = 0.0;
        for i in 0..grid.nz {
            col += w[i] * hat.coeffs[[i, idx]].norm_sqr();
        }
        total += weight * col;
    }
    total
}

/// Squared L2_z norm of a single spectral column (FFT bin `idx`).
pub fn mode_l2_sq(hat: &SpectralField, idx: usize) -> f64 {
    let w = hat.grid.simpson_weights();
    let mut col = 0.0;
    for i in 0..hat.grid.nz {
        col += w[i] * hat.coeffs[[i, idx]].norm_sqr();
    }
    col
}

/// Discrete Parseval defect `|sum_j f_j^2 / nx - sum_k |f_hat_k|^2|`,
/// normalized by the norm itself; used by invariant tests.
pub fn parseval_defect(f: &Field, t: &XTransform) -> f64 {
    let hat = t.forward(f);
    let phys = l2_norm_sq(f);
    let spec = l2_norm_sq_spectral(&hat);
    let scale = phys.max(spec).max(f64::MIN_POSITIVE);
    (phys - spec).abs() / scale
}

/// Helper shared by several diagnostics: grid copy with the same shape but a
/// possibly different dissipation exponent (the norms only read shape and
/// symbol convention).
pub fn require_same_shape(a: &GridSpec, b: &GridSpec) -> Result<()> {
    if a.nx != b.nx || a.nz != b.nz || a.symbol_scale != b.symbol_scale {
        return Err(crate::error::CoreError::DimensionMismatch(format!(
            "grid shapes differ: ({}, {}) vs ({}, {})",
            a.nx, a.nz, b.nx, b.nz
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::grid::SymbolScale;
    use std::f64::consts::PI;

    fn single_mode(nx: usize, nz: usize, scale: SymbolScale, alpha: f64) -> Field {
        let g = GridSpec::with_scale(nx, nz, alpha, 0.0, scale).unwrap();
        Field::from_fn(g, |x, z| (2.0 * PI * x).sin() * (PI * z).cos())
    }

    #[test]
    fn plain_l2_norm_of_single_mode_is_one_half() {
        let f = single_mode(32, 129, SymbolScale::TwoPi, 1.0);
        let n = mixed_norm(&f, 0.0, 0).unwrap();
        assert!((n - 0.5).abs() < 1e-8, "norm {n}");
    }

    #[test]
    fn fractional_weight_of_single_mode() {
        for alpha in [0.5, 1.0, 1.7] {
            let f = single_mode(32, 129, SymbolScale::TwoPi, alpha);
            let n = mixed_norm(&f, alpha / 2.0, 0).unwrap();
            let expect = (2.0 * PI).powf(alpha / 2.0) / 2.0;
            assert!((n - expect).abs() < 1e-8 * expect, "alpha={alpha}: {n} vs {expect}");
        }
        // Same field under the unit-symbol convention: sigma(1) = 1.
        let f = single_mode(32, 129, SymbolScale::One, 0.5);
        let n = mixed_norm(&f, 0.25, 0).unwrap();
        assert!((n - 0.5).abs() < 1e-8);
    }

    #[test]
    fn z_derivative_norm_of_single_mode_is_pi_over_two() {
        let f = single_mode(32, 257, SymbolScale::TwoPi, 1.0);
        let n = mixed_norm(&f, 0.0, 1).unwrap();
        assert!((n - PI / 2.0).abs() < 1e-7, "norm {n}");
    }

    #[test]
    fn parseval_holds_on_sampled_data() {
        let g = GridSpec::new(64, 17, 1.0, 0.0).unwrap();
        let f = Field::from_fn(g, |x, z| {
            (2.0 * PI * x).sin() + 0.25 * (10.0 * PI * x).cos() * z + 0.1
        });
        let t = XTransform::new(g.nx);
        assert!(parseval_defect(&f, &t) < 1e-12);
    }
}
