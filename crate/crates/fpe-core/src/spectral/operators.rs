//! Fourier-multiplier operators in x: fractional Laplacian, Hilbert
//! transform, and the spectral x-derivative.

use num_complex::Complex64;

use super::fft::map_spectral;
use super::grid::{Field, SpectralField};
use crate::error::{CoreError, Result};

/// Fractional horizontal Laplacian `L_h^s` on a spectral field: multiplies
/// mode k by `sigma(k)^s` under the grid's symbol convention.  The k = 0 mode
/// is annihilated for s > 0 (and kept for s = 0, so `L_h^0` is the identity).
/// Negative s is rejected: inverse powers are never materialized, callers
/// needing `H = -d/dx L_h^{-1}` use [`hilbert_h`].
pub fn frac_laplacian_h_spectral(f: &SpectralField, s: f64) -> Result<SpectralField> {
    if !(s >= 0.0) {
        return Err(CoreError::InvalidParameter {
            name: "s",
            message: format!("fractional power must be non-negative, got {s}"),
        });
    }
    let mut out = f.clone();
    apply_frac_laplacian(&mut out, s);
    Ok(out)
}

pub(crate) fn apply_frac_laplacian(f: &mut SpectralField, s: f64) {
    let grid = f.grid;
    for idx in 0..grid.nx {
        let sigma = grid.sigma(idx);
        // 0^0 = 1 keeps s = 0 the identity; for s > 0 the mean mode is zeroed.
        let m = if sigma == 0.0 && s == 0.0 { 1.0 } else { sigma.powf(s) };
        for i in 0..grid.nz {
            f.coeffs[[i, idx]] *= m;
        }
    }
}

/// Physical-space counterpart of [`frac_laplacian_h_spectral`].
pub fn frac_laplacian_h(f: &Field, s: f64) -> Result<Field> {
    if !(s >= 0.0) {
        return Err(CoreError::InvalidParameter {
            name: "s",
            message: format!("fractional power must be non-negative, got {s}"),
        });
    }
    Ok(map_spectral(f, |hat| apply_frac_laplacian(hat, s)))
}

/// Hilbert transform in x: mode k is multiplied by `-i sign(k)`, the mean
/// mode by 0.  Independent of the symbol convention.  On real fields the
/// Nyquist mode is effectively annihilated (its `-i` rotation has no real
/// part on the grid), so `H(H(f)) = -(f - x-mean f)` holds exactly for
/// fields band-limited below Nyquist.
pub fn hilbert_h_spectral(f: &SpectralField) -> SpectralField {
    let mut out = f.clone();
    apply_hilbert(&mut out);
    out
}

pub(crate) fn apply_hilbert(f: &mut SpectralField) {
    let grid = f.grid;
    for idx in 0..grid.nx {
        let k = grid.wavenumber(idx);
        let m = Complex64::new(0.0, -(k.signum() as f64));
        for i in 0..grid.nz {
            f.coeffs[[i, idx]] *= m;
        }
    }
}

/// Physical-space counterpart of [`hilbert_h_spectral`].
pub fn hilbert_h(f: &Field) -> Field {
    map_spectral(f, apply_hilbert)
}

/// Spectral x-derivative: mode k multiplied by `2 pi i k`.  The Nyquist mode
/// is zeroed to keep real fields real (its odd derivative has no consistent
/// sign on the sample grid).
pub fn dx_spectral(f: &SpectralField) -> SpectralField {
    let mut out = f.clone();
    apply_dx(&mut out);
    out
}

pub(crate) fn apply_dx(f: &mut SpectralField) {
    let grid = f.grid;
    let nx = grid.nx;
    for idx in 0..nx {
        let k = grid.wavenumber(idx);
        let m = if idx == nx / 2 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, 2.0 * std::f64::consts::PI * k as f64)
        };
        for i in 0..grid.nz {
            f.coeffs[[i, idx]] *= m;
        }
    }
}

/// Physical-space x-derivative via the spectral multiplier.
pub fn dx(f: &Field) -> Field {
    map_spectral(f, apply_dx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::fft::{x_forward, x_inverse};
    use crate::spectral::grid::{GridSpec, SymbolScale};
    use std::f64::consts::PI;

    #[test]
    fn constant_field_is_killed_for_positive_s() {
        let g = GridSpec::new(16, 5, 1.0, 0.0).unwrap();
        let f = Field::from_fn(g, |_, _| 4.2);
        let out = frac_laplacian_h(&f, 0.7).unwrap();
        assert!(out.max_abs() < 1e-13);
        // s = 0 must be the identity, including on the mean.
        let id = frac_laplacian_h(&f, 0.0).unwrap();
        assert!((id.values[[2, 3]] - 4.2).abs() < 1e-13);
    }

    #[test]
    fn negative_power_is_rejected() {
        let g = GridSpec::new(16, 5, 1.0, 0.0).unwrap();
        let f = Field::zeros(g);
        assert!(matches!(
            frac_laplacian_h(&f, -0.5),
            Err(CoreError::InvalidParameter { name: "s", .. })
        ));
    }

    #[test]
    fn single_mode_scaling_under_both_conventions() {
        for (scale, expect) in [
            (SymbolScale::TwoPi, (2.0 * PI * 3.0).powf(0.6)),
            (SymbolScale::One, 3.0f64.powf(0.6)),
        ] {
            let g = GridSpec::with_scale(32, 5, 1.0, 0.0, scale).unwrap();
            let f = Field::from_fn(g, |x, _| (6.0 * PI * x).cos());
            let out = frac_laplacian_h(&f, 0.6).unwrap();
            let ratio = out.values[[0, 0]] / f.values[[0, 0]];
            assert!((ratio - expect).abs() < 1e-12 * expect);
        }
    }

    #[test]
    fn hilbert_rotates_cosine_to_sine() {
        let g = GridSpec::new(32, 5, 1.0, 0.0).unwrap();
        let f = Field::from_fn(g, |x, _| (2.0 * PI * x).cos());
        let h = hilbert_h(&f);
        let expect = Field::from_fn(g, |x, _| (2.0 * PI * x).sin());
        let err = h
            .values
            .iter()
            .zip(expect.values.iter())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(err < 1e-13, "H cos = sin failed: {err}");
    }

    #[test]
    fn hilbert_squared_is_minus_identity_minus_mean() {
        let g = GridSpec::new(32, 5, 1.0, 0.0).unwrap();
        let f = Field::from_fn(g, |x, _| {
            1.5 + (2.0 * PI * x).cos() + 0.7 * (8.0 * PI * x).sin()
        });
        let hh = hilbert_h(&hilbert_h(&f));
        // -(f - mean): the mean in x is 1.5.
        for j in 0..g.nx {
            let want = -(f.values[[0, j]] - 1.5);
            assert!((hh.values[[0, j]] - want).abs() < 1e-12);
        }
    }

    #[test]
    fn hilbert_spectral_multiplier_is_literal_minus_i_sign() {
        let g = GridSpec::new(8, 5, 1.0, 0.0).unwrap();
        let mut hat = SpectralField::zeros(g);
        for idx in 0..8 {
            hat.coeffs[[0, idx]] = Complex64::new(1.0, 0.0);
        }
        let out = hilbert_h_spectral(&hat);
        assert_eq!(out.coeffs[[0, 0]], Complex64::new(0.0, 0.0));
        assert_eq!(out.coeffs[[0, 1]], Complex64::new(0.0, -1.0));
        assert_eq!(out.coeffs[[0, 7]], Complex64::new(0.0, 1.0)); // k = -1
        assert_eq!(out.coeffs[[0, 4]], Complex64::new(0.0, -1.0)); // Nyquist as +nx/2
    }

    #[test]
    fn dx_differentiates_trig_exactly() {
        let g = GridSpec::new(32, 5, 1.0, 0.0).unwrap();
        let f = Field::from_fn(g, |x, _| (4.0 * PI * x).sin());
        let d = dx(&f);
        let expect = Field::from_fn(g, |x, _| 4.0 * PI * (4.0 * PI * x).cos());
        let err = d
            .values
            .iter()
            .zip(expect.values.iter())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(err < 1e-11, "dx error {err}");
        let _ = x_inverse(&x_forward(&f));
    }
}
