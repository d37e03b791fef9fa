//! Vertical (z) operations on the uniform grid: fourth-order finite
//! differences, cumulative Simpson integration, the diagnostic vertical
//! velocity, and the zero-vertical-mean projection.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use super::fft::map_spectral;
use super::grid::{Field, GridSpec};
use super::operators::apply_dx;
use crate::error::{CoreError, Result};

/// Fourth-order first derivative of a 1D sample vector (spacing `h`):
/// centered five-point stencil in the interior, one-sided five-point
/// stencils on the two rows nearest each boundary.
pub fn dz_samples(f: &[f64], h: f64, out: &mut [f64]) {
    let n = f.len();
    debug_assert!(n >= 5);
    debug_assert_eq!(out.len(), n);
    let c = 1.0 / (12.0 * h);
    out[0] = c * (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]);
    out[1] = c * (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]);
    for i in 2..n - 2 {
        out[i] = c * (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]);
    }
    let m = n - 1;
    out[m - 1] =
        c * (3.0 * f[m] + 10.0 * f[m - 1] - 18.0 * f[m - 2] + 6.0 * f[m - 3] - f[m - 4]);
    out[m] =
        c * (25.0 * f[m] - 48.0 * f[m - 1] + 36.0 * f[m - 2] - 16.0 * f[m - 3] + 3.0 * f[m - 4]);
}

/// [`dz_samples`] for complex vectors (applied to real and imaginary parts).
pub fn dz_samples_complex(f: &[Complex64], h: f64, out: &mut [Complex64]) {
    let n = f.len();
    debug_assert!(n >= 5);
    let c = 1.0 / (12.0 * h);
    out[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) * c;
    out[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) * c;
    for i in 2..n - 2 {
        out[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) * c;
    }
    let m = n - 1;
    out[m - 1] =
        (3.0 * f[m] + 10.0 * f[m - 1] - 18.0 * f[m - 2] + 6.0 * f[m - 3] - f[m - 4]) * c;
    out[m] =
        (25.0 * f[m] - 48.0 * f[m - 1] + 36.0 * f[m - 2] - 16.0 * f[m - 3] + 3.0 * f[m - 4]) * c;
}

fn check_dz_feasible(grid: &GridSpec, order: usize) -> Result<()> {
    if order == 0 {
        return Err(CoreError::InvalidParameter {
            name: "order",
            message: "derivative order must be at least 1".into(),
        });
    }
    // Repeated one-sided stencils lose accuracy near the boundary; require
    // enough interior points that the order-th application is still meaningful.
    if order > grid.nz - 5 {
        return Err(CoreError::Resolution(format!(
            "derivative order {order} needs nz >= {}, grid has nz = {}",
            order + 5,
            grid.nz
        )));
    }
    Ok(())
}

/// `order`-th z-derivative of a field, by repeated application of the
/// fourth-order first-derivative stencils column by column.
pub fn dz(f: &Field, order: usize) -> Result<Field> {
    check_dz_feasible(&f.grid, order)?;
    let (nz, nx) = (f.grid.nz, f.grid.nx);
    let mut cur = vec![0.0; nz];
    let mut nxt = vec![0.0; nz];
    let mut out = Array2::zeros((nz, nx));
    let h = f.grid.dz();
    for j in 0..nx {
        for i in 0..nz {
            cur[i] = f.values[[i, j]];
        }
        for _ in 0..order {
            dz_samples(&cur, h, &mut nxt);
            std::mem::swap(&mut cur, &mut nxt);
        }
        for i in 0..nz {
            out[[i, j]] = cur[i];
        }
    }
    Ok(Field { grid: f.grid, values: out })
}

/// Cumulative integral `g(z_i) = int_0^{z_i} f dz` on `n` (odd) uniform
/// nodes.  Even nodes get the composite Simpson value; an odd node closes its
/// final panel with the quadratic through the panel and its right neighbour,
/// keeping the local error at O(h^4) so that differentiating the result
/// recovers `f` to fourth order.
pub fn cumulative_simpson(f: &[f64], h: f64, out: &mut [f64]) {
    let n = f.len();
    debug_assert!(n >= 3 && n % 2 == 1);
    out[0] = 0.0;
    for i in 1..n {
        if i % 2 == 0 {
            out[i] = out[i - 2] + h / 3.0 * (f[i - 2] + 4.0 * f[i - 1] + f[i]);
        } else {
            out[i] = out[i - 1] + h / 12.0 * (5.0 * f[i - 1] + 8.0 * f[i] - f[i + 1]);
        }
    }
}

/// Complex counterpart of [`cumulative_simpson`].
pub fn cumulative_simpson_complex(f: &[Complex64], h: f64, out: &mut [Complex64]) {
    let n = f.len();
    debug_assert!(n >= 3 && n % 2 == 1);
    out[0] = Complex64::new(0.0, 0.0);
    for i in 1..n {
        if i % 2 == 0 {
            out[i] = out[i - 2] + (f[i - 2] + 4.0 * f[i - 1] + f[i]) * (h / 3.0);
        } else {
            out[i] = out[i - 1] + (5.0 * f[i - 1] + 8.0 * f[i] - f[i + 1]) * (h / 12.0);
        }
    }
}

/// Cumulative vertical integral of a field: `g(x, z) = int_0^z f(x, z') dz'`,
/// with `g(x, 0) = 0` exactly.
pub fn cumint_z(f: &Field) -> Field {
    let (nz, nx) = (f.grid.nz, f.grid.nx);
    let h = f.grid.dz();
    let mut col = vec![0.0; nz];
    let mut acc = vec![0.0; nz];
    let mut out = Array2::zeros((nz, nx));
    for j in 0..nx {
        for i in 0..nz {
            col[i] = f.values[[i, j]];
        }
        cumulative_simpson(&col, h, &mut acc);
        for i in 0..nz {
            out[[i, j]] = acc[i];
        }
    }
    Field { grid: f.grid, values: out }
}

/// Diagnostic vertical velocity `w = -int_0^z du/dx dz'` with the spectral
/// x-derivative.  `w(x, 0) = 0` exactly; for data with zero vertical mean the
/// top boundary value vanishes to quadrature accuracy (reported by
/// [`top_boundary_defect`], never raised as an error).
pub fn diagnose_w(u: &Field) -> Field {
    let ux = map_spectral(u, apply_dx);
    let mut w = cumint_z(&ux);
    w.values.mapv_inplace(|v| -v);
    w
}

/// Largest |w| on the top boundary row z = 1.
pub fn top_boundary_defect(w: &Field) -> f64 {
    let top = w.grid.nz - 1;
    (0..w.grid.nx).fold(0.0f64, |m, j| m.max(w.values[[top, j]].abs()))
}

/// Vertical mean `m(x) = int_0^1 u(x, z) dz` by Simpson weights.
pub fn vertical_mean(u: &Field) -> Array1<f64> {
    let w = u.grid.simpson_weights();
    let mut m = Array1::zeros(u.grid.nx);
    for j in 0..u.grid.nx {
        let mut acc = 0.0;
        for i in 0..u.grid.nz {
            acc += w[i] * u.values[[i, j]];
        }
        m[j] = acc;
    }
    m
}

/// Projection onto the zero-vertical-mean subspace: `u - int_0^1 u dz`.
/// The projected field has Simpson vertical mean zero to rounding error,
/// making the projection idempotent in practice.
pub fn project_h(u: &Field) -> Field {
    let m = vertical_mean(u);
    let mut out = u.clone();
    for j in 0..u.grid.nx {
        for i in 0..u.grid.nz {
            out.values[[i, j]] -= m[j];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn dz_fourth_order_on_analytic_field() {
        // Empirical convergence order on f = e^z sin(2 pi x) must be >= 3.7.
        let mut errs = Vec::new();
        for nz in [65usize, 129] {
            let g = GridSpec::new(16, nz, 1.0, 0.0).unwrap();
            let f = Field::from_fn(g, |x, z| z.exp() * (2.0 * PI * x).sin());
            let d = dz(&f, 1).unwrap();
            let exact = Field::from_fn(g, |x, z| z.exp() * (2.0 * PI * x).sin());
            let err = d
                .values
                .iter()
                .zip(exact.values.iter())
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            errs.push(err);
        }
        let slope = (errs[0] / errs[1]).log2();
        assert!(slope >= 3.7, "convergence slope {slope}, errors {errs:?}");
    }

    #[test]
    fn dz_second_order_matches_analytic() {
        let g = GridSpec::new(8, 257, 1.0, 0.0).unwrap();
        let f = Field::from_fn(g, |_, z| (PI * z).cos());
        let d2 = dz(&f, 2).unwrap();
        let exact = Field::from_fn(g, |_, z| -PI * PI * (PI * z).cos());
        let err = d2
            .values
            .iter()
            .zip(exact.values.iter())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(err < 1e-6, "second derivative error {err}");
    }

    #[test]
    fn dz_rejects_orders_the_grid_cannot_support() {
        let g = GridSpec::new(8, 7, 1.0, 0.0).unwrap();
        assert!(dz(&Field::zeros(g), 2).is_ok());
        assert!(matches!(dz(&Field::zeros(g), 3), Err(CoreError::Resolution(_))));
        assert!(matches!(
            dz(&Field::zeros(g), 0),
            Err(CoreError::InvalidParameter { name: "order", .. })
        ));
    }

    #[test]
    fn cumint_matches_closed_form_antiderivative() {
        // f = cos(pi z) integrates to sin(pi z)/pi; error must scale like h^4.
        let mut errs = Vec::new();
        for nz in [65usize, 129] {
            let g = GridSpec::new(4, nz, 1.0, 0.0).unwrap();
            let f = Field::from_fn(g, |_, z| (PI * z).cos());
            let gint = cumint_z(&f);
            let mut err = 0.0f64;
            for i in 0..nz {
                let z = g.z(i);
                err = err.max((gint.values[[i, 0]] - (PI * z).sin() / PI).abs());
            }
            errs.push(err);
            // generous absolute bound ~ C h^4 with C = 10
            let h = g.dz();
            assert!(err < 10.0 * h.powi(4), "nz={nz}: err {err}");
        }
        let slope = (errs[0] / errs[1]).log2();
        assert!(slope >= 3.7, "cumint convergence slope {slope}");
    }

    #[test]
    fn cumint_starts_at_exact_zero() {
        let g = GridSpec::new(4, 33, 1.0, 0.0).unwrap();
        let f = Field::from_fn(g, |x, z| (x + 1.0) * (3.0 * z).exp());
        let gint = cumint_z(&f);
        for j in 0..g.nx {
            assert_eq!(gint.values[[0, j]], 0.0);
        }
    }

    #[test]
    fn fundamental_theorem_round_trip() {
        // dz(cumint_z(f)) = f at fourth order; the boundary stencil on the
        // integral dominates with constant ~ |f''''| / 5.
        let mut errs = Vec::new();
        for nz in [257usize, 513] {
            let g = GridSpec::new(8, nz, 1.0, 0.0).unwrap();
            let f =
                Field::from_fn(g, |x, z| (PI * z).cos() * (1.0 + 0.5 * (2.0 * PI * x).sin()));
            let back = dz(&cumint_z(&f), 1).unwrap();
            let err = back
                .values
                .iter()
                .zip(f.values.iter())
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            errs.push(err);
        }
        assert!(errs[0] < 5e-8, "fundamental theorem defect {}", errs[0]);
        let slope = (errs[0] / errs[1]).log2();
        assert!(slope >= 3.5, "round-trip convergence slope {slope}");
    }

    #[test]
    fn projection_has_zero_simpson_mean() {
        let g = GridSpec::new(16, 65, 1.0, 0.0).unwrap();
        let u = Field::from_fn(g, |x, z| (2.0 * PI * x).cos() * (1.3 + z + z * z * z));
        let p = project_h(&u);
        let m = vertical_mean(&p);
        let worst = m.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        assert!(worst <= 1e-14, "projection residual mean {worst}");
    }

    #[test]
    fn w_vanishes_on_both_boundaries_for_mean_free_data() {
        let g = GridSpec::new(32, 129, 1.0, 0.0).unwrap();
        // cos(pi z) has zero vertical mean analytically.
        let u = Field::from_fn(g, |x, z| (2.0 * PI * x).sin() * (PI * z).cos());
        let w = diagnose_w(&u);
        for j in 0..g.nx {
            assert_eq!(w.values[[0, j]], 0.0);
        }
        let ux_inf = super::super::operators::dx(&u).max_abs();
        assert!(top_boundary_defect(&w) <= 1e-8 * ux_inf);
        // Simpson-projected data closes the top boundary to rounding error.
        let up = project_h(&u);
        let wp = diagnose_w(&up);
        let uxp_inf = super::super::operators::dx(&up).max_abs();
        assert!(top_boundary_defect(&wp) <= 1e-13 * uxp_inf.max(1.0));
    }

    #[test]
    fn w_matches_closed_form_for_single_mode() {
        let g = GridSpec::new(32, 129, 1.0, 0.0).unwrap();
        let u = Field::from_fn(g, |x, z| (2.0 * PI * x).sin() * (PI * z).cos());
        // w = -int_0^z 2 pi cos(2 pi x) cos(pi z') dz' = -2 cos(2 pi x) sin(pi z)
        let w = diagnose_w(&u);
        let exact = Field::from_fn(g, |x, z| -2.0 * (2.0 * PI * x).cos() * (PI * z).sin());
        let err = w
            .values
            .iter()
            .zip(exact.values.iter())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(err < 1e-7, "w closed-form error {err}");
    }
}
