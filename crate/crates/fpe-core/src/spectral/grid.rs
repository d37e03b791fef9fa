//! Grid description and the two field representations.
//!
//! Physical fields live on the tensor grid `x_j = j/nx` (periodic, the point
//! x = 1 is identified with x = 0) and `z_i = i/(nz-1)` (endpoints included).
//! Spectral fields store, per z-level, the Fourier coefficients
//! `f_hat_k(z) = int_T f(x,z) e^{-2 pi i k x} dx` for the wavenumbers
//! `k = -nx/2+1, ..., nx/2`, kept in FFT layout (non-negative k first).

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{CoreError, Result};

/// Convention for the symbol of the fractional horizontal Laplacian.
///
/// `L_h^s` multiplies mode k by `sigma(k)^s` with `sigma(k) = 2*pi*|k|`
/// (`TwoPi`, the default — the derivative symbol on a period-1 torus) or
/// `sigma(k) = |k|` (`One`).  The Hilbert transform is unaffected by the
/// choice.  Growth-rate formulas in [`crate::shear`] assume `TwoPi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SymbolScale {
    #[default]
    TwoPi,
    One,
}

impl SymbolScale {
    /// Symbol `sigma(k)` of the first-order operator `L_h` at wavenumber k.
    #[inline]
    pub fn sigma(self, k: i64) -> f64 {
        match self {
            SymbolScale::TwoPi => 2.0 * std::f64::consts::PI * k.unsigned_abs() as f64,
            SymbolScale::One => k.unsigned_abs() as f64,
        }
    }
}

/// Discretization of the channel `T x [0,1]` plus the dissipation parameters
/// carried along with it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// Number of x samples (positive and even).
    pub nx: usize,
    /// Number of z samples including both endpoints (odd, at least 5, so the
    /// composite Simpson rule and 5-point stencils apply).
    pub nz: usize,
    /// Fractional dissipation exponent, in (0, 2].
    pub alpha: f64,
    /// Horizontal viscosity, non-negative.
    pub nu_h: f64,
    /// Symbol convention for `L_h`.
    pub symbol_scale: SymbolScale,
}

impl GridSpec {
    pub fn new(nx: usize, nz: usize, alpha: f64, nu_h: f64) -> Result<Self> {
        Self::with_scale(nx, nz, alpha, nu_h, SymbolScale::TwoPi)
    }

    pub fn with_scale(
        nx: usize,
        nz: usize,
        alpha: f64,
        nu_h: f64,
        symbol_scale: SymbolScale,
    ) -> Result<Self> {
        if nx == 0 || nx % 2 != 0 {
            return Err(CoreError::InvalidParameter {
                name: "nx",
                message: format!("must be a positive even integer, got {nx}"),
            });
        }
        if nz < 5 || nz % 2 == 0 {
            return Err(CoreError::InvalidParameter {
                name: "nz",
                message: format!("must be an odd integer >= 5, got {nz}"),
            });
        }
        if !(alpha > 0.0 && alpha <= 2.0) {
            return Err(CoreError::InvalidParameter {
                name: "alpha",
                message: format!("must lie in (0, 2], got {alpha}"),
            });
        }
        if !(nu_h >= 0.0) {
            return Err(CoreError::InvalidParameter {
                name: "nu_h",
                message: format!("must be non-negative, got {nu_h}"),
            });
        }
        Ok(GridSpec { nx, nz, alpha, nu_h, symbol_scale })
    }

    /// Vertical grid spacing `1/(nz-1)`.
    #[inline]
    pub fn dz(&self) -> f64 {
        1.0 / (self.nz - 1) as f64
    }

    /// Horizontal grid spacing `1/nx`.
    #[inline]
    pub fn dx(&self) -> f64 {
        1.0 / self.nx as f64
    }

    /// x coordinate of sample j.
    #[inline]
    pub fn x(&self, j: usize) -> f64 {
        j as f64 / self.nx as f64
    }

    /// z coordinate of sample i.
    #[inline]
    pub fn z(&self, i: usize) -> f64 {
        i as f64 * self.dz()
    }

    /// Signed wavenumber for FFT bin `idx`, following the convention that the
    /// Nyquist bin (idx = nx/2) counts as +nx/2.
    #[inline]
    pub fn wavenumber(&self, idx: usize) -> i64 {
        if idx <= self.nx / 2 {
            idx as i64
        } else {
            idx as i64 - self.nx as i64
        }
    }

    /// Symbol `sigma(k)` for FFT bin `idx` under this grid's convention.
    #[inline]
    pub fn sigma(&self, idx: usize) -> f64 {
        self.symbol_scale.sigma(self.wavenumber(idx))
    }

    /// Composite Simpson weights on the z grid (they sum to 1 exactly in
    /// exact arithmetic since the interval has length 1).
    pub fn simpson_weights(&self) -> Array1<f64> {
        simpson_weights(self.nz, self.dz())
    }
}

/// Composite Simpson weights for `n` (odd) uniformly spaced nodes, spacing h.
pub fn simpson_weights(n: usize, h: f64) -> Array1<f64> {
    debug_assert!(n >= 3 && n % 2 == 1);
    let mut w = Array1::zeros(n);
    w[0] = h / 3.0;
    w[n - 1] = h / 3.0;
    for i in 1..n - 1 {
        w[i] = if i % 2 == 1 { 4.0 * h / 3.0 } else { 2.0 * h / 3.0 };
    }
    w
}

/// Real-valued field sampled on the physical grid, indexed `[z][x]`.
#[derive(Debug, Clone)]
pub struct Field {
    pub grid: GridSpec,
    pub values: Array2<f64>,
}

impl Field {
    pub fn zeros(grid: GridSpec) -> Self {
        Field { grid, values: Array2::zeros((grid.nz, grid.nx)) }
    }

    /// Build a field by evaluating `f(x, z)` at every grid point.
    pub fn from_fn(grid: GridSpec, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut values = Array2::zeros((grid.nz, grid.nx));
        for i in 0..grid.nz {
            let z = grid.z(i);
            for j in 0..grid.nx {
                values[[i, j]] = f(grid.x(j), z);
            }
        }
        Field { grid, values }
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Pointwise maximum of |f| over all samples (the discrete L-infinity norm).
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub(crate) fn check_same_grid(&self, other: &Field) -> Result<()> {
        if self.grid != other.grid {
            return Err(CoreError::DimensionMismatch(
                "fields live on different grids".into(),
            ));
        }
        Ok(())
    }
}

/// Complex spectral field: per z-level, Fourier coefficients in x in FFT
/// layout (bin idx holds wavenumber [`GridSpec::wavenumber`]).  Real physical
/// fields satisfy the conjugate symmetry `coeff(-k) = conj(coeff(k))`.
#[derive(Debug, Clone)]
pub struct SpectralField {
    pub grid: GridSpec,
    pub coeffs: Array2<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: GridSpec) -> Self {
        SpectralField { grid, coeffs: Array2::zeros((grid.nz, grid.nx)) }
    }

    /// Coefficient for signed wavenumber k at z-level i.
    #[inline]
    pub fn coeff(&self, i: usize, k: i64) -> Complex64 {
        let nx = self.grid.nx as i64;
        let idx = k.rem_euclid(nx) as usize;
        self.coeffs[[i, idx]]
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Largest violation of the conjugate symmetry of a real field.
    pub fn conjugate_symmetry_defect(&self) -> f64 {
        let nx = self.grid.nx;
        let mut worst = 0.0f64;
        for i in 0..self.grid.nz {
            for idx in 1..nx / 2 {
                let d = self.coeffs[[i, idx]] - self.coeffs[[i, nx - idx]].conj();
                worst = worst.max(d.norm());
            }
            worst = worst.max(self.coeffs[[i, 0]].im.abs());
            worst = worst.max(self.coeffs[[i, nx / 2]].im.abs());
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation_rejects_bad_parameters() {
        assert!(matches!(
            GridSpec::new(63, 65, 1.0, 0.1),
            Err(CoreError::InvalidParameter { name: "nx", .. })
        ));
        assert!(matches!(
            GridSpec::new(64, 64, 1.0, 0.1),
            Err(CoreError::InvalidParameter { name: "nz", .. })
        ));
        assert!(matches!(
            GridSpec::new(64, 65, 2.5, 0.1),
            Err(CoreError::InvalidParameter { name: "alpha", .. })
        ));
        assert!(matches!(
            GridSpec::new(64, 65, 0.0, 0.1),
            Err(CoreError::InvalidParameter { name: "alpha", .. })
        ));
        assert!(matches!(
            GridSpec::new(64, 65, 1.0, -0.1),
            Err(CoreError::InvalidParameter { name: "nu_h", .. })
        ));
        assert!(GridSpec::new(64, 65, 2.0, 0.0).is_ok());
    }

    #[test]
    fn simpson_weights_sum_to_interval_length() {
        for nz in [5usize, 9, 65, 129] {
            let g = GridSpec::new(8, nz, 1.0, 0.0).unwrap();
            let total: f64 = g.simpson_weights().sum();
            assert!((total - 1.0).abs() < 1e-14, "nz={nz}: sum={total}");
        }
    }

    #[test]
    fn wavenumber_layout_counts_nyquist_positive() {
        let g = GridSpec::new(8, 5, 1.0, 0.0).unwrap();
        let ks: Vec<i64> = (0..8).map(|i| g.wavenumber(i)).collect();
        assert_eq!(ks, vec![0, 1, 2, 3, 4, -3, -2, -1]);
    }
}
