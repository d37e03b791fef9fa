//! Forward and inverse Fourier transforms in x, one z-level at a time.
//!
//! The forward transform returns trapezoid-exact Fourier coefficients of the
//! sampled field, `f_hat_k = (1/nx) sum_j f(x_j) e^{-2 pi i k j / nx}`, so
//! that the discrete Parseval identity `(1/nx) sum_j |f_j|^2 = sum_k
//! |f_hat_k|^2` holds to rounding error.

use ndarray::Array2;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

use super::grid::{Field, SpectralField};

/// Cached FFT plans for one x-resolution.  Construct once per grid and reuse
/// inside loops; the free functions below build a transform on the fly.
pub struct XTransform {
    nx: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl XTransform {
    pub fn new(nx: usize) -> Self {
        let mut planner = FftPlanner::new();
        XTransform {
            nx,
            forward: planner.plan_fft_forward(nx),
            inverse: planner.plan_fft_inverse(nx),
        }
    }

    pub fn forward(&self, f: &Field) -> SpectralField {
        assert_eq!(f.grid.nx, self.nx, "transform planned for different nx");
        let (nz, nx) = (f.grid.nz, f.grid.nx);
        let mut coeffs = Array2::zeros((nz, nx));
        let mut row: Vec<Complex64> = vec![Complex64::default(); nx];
        let scale = 1.0 / nx as f64;
        for i in 0..nz {
            for j in 0..nx {
                row[j] = Complex64::new(f.values[[i, j]], 0.0);
            }
            self.forward.process(&mut row);
            for j in 0..nx {
                coeffs[[i, j]] = row[j] * scale;
            }
        }
        SpectralField { grid: f.grid, coeffs }
    }

    /// Inverse transform; the imaginary part of the reconstruction is
    /// discarded (it vanishes to rounding error for conjugate-symmetric
    /// input).
    pub fn inverse(&self, f: &SpectralField) -> Field {
        assert_eq!(f.grid.nx, self.nx, "transform planned for different nx");
        let (nz, nx) = (f.grid.nz, f.grid.nx);
        let mut values = Array2::zeros((nz, nx));
        let mut row: Vec<Complex64> = vec![Complex64::default(); nx];
        for i in 0..nz {
            for j in 0..nx {
                row[j] = f.coeffs[[i, j]];
            }
            self.inverse.process(&mut row);
            for j in 0..nx {
                values[[i, j]] = row[j].re;
            }
        }
        Field { grid: f.grid, values }
    }

    /// Forward transform of a single complex row (used by the 1D inequality
    /// laboratory and by per-mode solvers).
    pub fn forward_row(&self, row: &mut [Complex64]) {
        assert_eq!(row.len(), self.nx);
        self.forward.process(row);
        let scale = 1.0 / self.nx as f64;
        for c in row.iter_mut() {
            *c *= scale;
        }
    }

    pub fn inverse_row(&self, row: &mut [Complex64]) {
        assert_eq!(row.len(), self.nx);
        self.inverse.process(row);
    }
}

/// Fourier coefficients in x of a physical field.
pub fn x_forward(f: &Field) -> SpectralField {
    XTransform::new(f.grid.nx).forward(f)
}

/// Physical samples from Fourier coefficients in x.
pub fn x_inverse(f: &SpectralField) -> Field {
    XTransform::new(f.grid.nx).inverse(f)
}

/// Convenience: transform, apply `op` to the spectral field, transform back.
pub fn map_spectral(f: &Field, op: impl FnOnce(&mut SpectralField)) -> Field {
    let t = XTransform::new(f.grid.nx);
    let mut hat = t.forward(f);
    op(&mut hat);
    t.inverse(&hat)
}

#[allow(unused)]
fn _assert_send_sync(t: XTransform) -> impl Send + Sync {
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::grid::GridSpec;

    #[test]
    fn forward_matches_analytic_coefficients() {
        let g = GridSpec::new(16, 5, 1.0, 0.0).unwrap();
        // f = 3 + cos(2 pi x) + 2 sin(6 pi x): coefficients 3 at k=0,
        // 1/2 at k=+-1, -i at k=3, +i at k=-3.
        let f = Field::from_fn(g, |x, _| {
            3.0 + (2.0 * std::f64::consts::PI * x).cos()
                + 2.0 * (6.0 * std::f64::consts::PI * x).sin()
        });
        let hat = x_forward(&f);
        for i in 0..g.nz {
            assert!((hat.coeff(i, 0) - Complex64::new(3.0, 0.0)).norm() < 1e-13);
            assert!((hat.coeff(i, 1) - Complex64::new(0.5, 0.0)).norm() < 1e-13);
            assert!((hat.coeff(i, -1) - Complex64::new(0.5, 0.0)).norm() < 1e-13);
            assert!((hat.coeff(i, 3) - Complex64::new(0.0, -1.0)).norm() < 1e-13);
            assert!((hat.coeff(i, -3) - Complex64::new(0.0, 1.0)).norm() < 1e-13);
            assert!(hat.coeff(i, 2).norm() < 1e-13);
        }
    }

    #[test]
    fn round_trip_is_identity() {
        let g = GridSpec::new(32, 9, 1.0, 0.0).unwrap();
        let f = Field::from_fn(g, |x, z| {
            (2.0 * std::f64::consts::PI * x).sin() * (1.0 + z * z)
                + 0.3 * (8.0 * std::f64::consts::PI * x).cos()
        });
        let back = x_inverse(&x_forward(&f));
        let err = f
            .values
            .iter()
            .zip(back.values.iter())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(err < 1e-13, "round-trip error {err}");
    }
}
