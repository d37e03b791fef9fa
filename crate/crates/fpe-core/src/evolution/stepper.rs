//! Classical RK4 in integrating-factor variables.
//!
//! Writing the semi-discrete system as `d u_k/dt = N_k(u) - lambda_k u_k`
//! with `lambda_k = nu_h sigma(k)^alpha`, the substitution
//! `v_k = e^{lambda_k t} u_k` removes the stiff diagonal part, and RK4 on
//! `v` yields the update below.  Pure dissipation (`N = 0`) is integrated
//! exactly: one step multiplies each mode by `e^{-lambda_k dt}`.

use num_complex::Complex64;

use crate::error::Result;
use crate::spectral::grid::SpectralField;

/// A right-hand side `N` paired with per-mode dissipation rates.
pub trait TendencySystem {
    /// Non-stiff part of the tendency (advection, forcing), in spectral form.
    fn tendency(&self, state: &SpectralField) -> Result<SpectralField>;
    /// `lambda_k >= 0` per FFT bin, integrated exactly by the stepper.
    fn lambda(&self) -> &[f64];
}

impl TendencySystem for super::linear::LinearPsiSystem {
    fn tendency(&self, state: &SpectralField) -> Result<SpectralField> {
        self.advective_tendency(state)
    }
    fn lambda(&self) -> &[f64] {
        self.lambda()
    }
}

impl TendencySystem for super::nonlinear::NonlinearSystem {
    fn tendency(&self, state: &SpectralField) -> Result<SpectralField> {
        self.tendency(state)
    }
    fn lambda(&self) -> &[f64] {
        self.lambda()
    }
}

/// Scale each column (FFT bin) of `f` by `factors[idx]`.
fn scale_columns(f: &mut SpectralField, factors: &[f64]) {
    for idx in 0..f.grid.nx {
        let s = factors[idx];
        if s == 1.0 {
            continue;
        }
        for i in 0..f.grid.nz {
            f.coeffs[[i, idx]] *= s;
        }
    }
}

/// `out = scale_cols(a) + c * b` column-wise.
fn combine(a: &SpectralField, factors: &[f64], c: f64, b: &SpectralField) -> SpectralField {
    let mut out = a.clone();
    for idx in 0..out.grid.nx {
        let s = factors[idx];
        for i in 0..out.grid.nz {
            out.coeffs[[i, idx]] = s * a.coeffs[[i, idx]] + Complex64::from(c) * b.coeffs[[i, idx]];
        }
    }
    out
}

/// One integrating-factor RK4 step of size `dt`.
pub fn ifrk4_step<S: TendencySystem>(
    system: &S,
    state: &SpectralField,
    dt: f64,
) -> Result<SpectralField> {
    let lambda = system.lambda();
    let nx = state.grid.nx;
    let mut e_half = vec![1.0; nx];
    let mut e_full = vec![1.0; nx];
    for idx in 0..nx {
        e_half[idx] = (-lambda[idx] * dt * 0.5).exp();
        e_full[idx] = (-lambda[idx] * dt).exp();
    }
    let ones = vec![1.0; nx];

    let a = system.tendency(state)?;

    // b = N( E_half (u + dt/2 a) )
    let mut arg = combine(state, &ones, dt * 0.5, &a);
    scale_columns(&mut arg, &e_half);
    let b = system.tendency(&arg)?;

    // c = N( E_half u + dt/2 b )
    let mut half_state = state.clone();
    scale_columns(&mut half_state, &e_half);
    let arg = combine(&half_state, &ones, dt * 0.5, &b);
    let c = system.tendency(&arg)?;

    // d = N( E_full u + dt E_half c )
    let mut c_scaled = c.clone();
    scale_columns(&mut c_scaled, &e_half);
    let arg = combine(state, &e_full, dt, &c_scaled);
    let d = system.tendency(&arg)?;

    // u' = E_full u + dt/6 (E_full a + 2 E_half (b + c) + d)
    let mut out = state.clone();
    for idx in 0..nx {
        let (ef, eh) = (e_full[idx], e_half[idx]);
        for i in 0..out.grid.nz {
            let incr = ef * a.coeffs[[i, idx]]
                + 2.0 * eh * (b.coeffs[[i, idx]] + c.coeffs[[i, idx]])
                + d.coeffs[[i, idx]];
            out.coeffs[[i, idx]] = ef * state.coeffs[[i, idx]] + (dt / 6.0) * incr;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::grid::{Field, GridSpec};
    use crate::spectral::x_forward;
    use std::f64::consts::PI;

    /// Zero tendency: the stepper must reduce to exact per-mode decay.
    struct PureDecay {
        lambda: Vec<f64>,
    }
    impl TendencySystem for PureDecay {
        fn tendency(&self, state: &SpectralField) -> Result<SpectralField> {
            Ok(SpectralField::zeros(state.grid))
        }
        fn lambda(&self) -> &[f64] {
            &self.lambda
        }
    }

    #[test]
    fn pure_dissipation_is_exact_per_step() {
        let grid = GridSpec::new(16, 9, 0.7, 0.3).unwrap();
        let f = Field::from_fn(grid, |x, z| (2.0 * PI * x).sin() * (1.0 + z));
        let state = x_forward(&f);
        let lambda: Vec<f64> = (0..grid.nx)
            .map(|idx| {
                let s = grid.sigma(idx);
                if s == 0.0 { 0.0 } else { grid.nu_h * s.powf(grid.alpha) }
            })
            .collect();
        let sys = PureDecay { lambda: lambda.clone() };
        let dt = 0.37;
        let next = ifrk4_step(&sys, &state, dt).unwrap();
        for idx in 0..grid.nx {
            let factor = (-lambda[idx] * dt).exp();
            for i in 0..grid.nz {
                let want = factor * state.coeffs[[i, idx]];
                let got = next.coeffs[[i, idx]];
                assert!(
                    (want - got).norm() <= 1e-16 + 1e-15 * want.norm(),
                    "idx={idx}: {got} vs {want}"
                );
            }
        }
    }

    /// Scalar exponential growth through a constant-coefficient "tendency":
    /// checks the classical fourth-order accuracy of the combination.
    struct ScalarGrowth {
        lambda: Vec<f64>,
        rate: f64,
    }
    impl TendencySystem for ScalarGrowth {
        fn tendency(&self, state: &SpectralField) -> Result<SpectralField> {
            let mut out = state.clone();
            for c in out.coeffs.iter_mut() {
                *c *= self.rate;
            }
            Ok(out)
        }
        fn lambda(&self) -> &[f64] {
            &self.lambda
        }
    }

    #[test]
    fn temporal_self_convergence_is_fourth_order() {
        let grid = GridSpec::new(8, 5, 1.0, 0.2).unwrap();
        let mut state = SpectralField::zeros(grid);
        state.coeffs[[2, 1]] = num_complex::Complex64::new(1.0, 0.5);
        let lambda: Vec<f64> = (0..grid.nx)
            .map(|idx| {
                let s = grid.sigma(idx);
                if s == 0.0 { 0.0 } else { grid.nu_h * s.powf(grid.alpha) }
            })
            .collect();
        let sys = ScalarGrowth { lambda, rate: 2.3 };
        let t_end = 1.0;
        let run = |steps: usize| {
            let mut s = state.clone();
            let dt = t_end / steps as f64;
            for _ in 0..steps {
                s = ifrk4_step(&sys, &s, dt).unwrap();
            }
            s.coeffs[[2, 1]]
        };
        let exact = state.coeffs[[2, 1]]
            * ((2.3 - grid.nu_h * grid.sigma(1).powf(grid.alpha)) * t_end).exp();
        let e1 = (run(40) - exact).norm();
        let e2 = (run(80) - exact).norm();
        let order = (e1 / e2).log2();
        assert!(order >= 3.8, "temporal order {order} (errors {e1:.3e}, {e2:.3e})");
    }
}
