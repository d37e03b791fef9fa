//! The dispersion relation `F(gamma) = int_0^1 (U(z) - i gamma)^{-2} dz = 0`
//! and its root `gamma > 0`, which sets the growth rate of the shear
//! instability.
//!
//! For profiles odd about z = 1/2 the function F is real on the positive
//! imaginary axis, so the root is located by a coarse sign scan followed by
//! Brent iteration on Re F.  For asymmetric profiles the eigenvalue acquires
//! a real phase speed; a complex Newton fallback on the full relation
//! `int (U - c)^{-2} dz = 0` recovers it and reports the growth part Im c.

use num_complex::Complex64;

use super::profile::ShearProfile;
use crate::error::{CoreError, Result};
use crate::spectral::grid::simpson_weights;

/// Relative Im F above which a profile is treated as effectively asymmetric.
pub const SYMMETRY_TOL: f64 = 1e-10;

/// `F(gamma)` by composite Simpson over the profile's native nodes.
/// Requires `gamma > 0` (the relation is only meaningful off the real axis).
pub fn dispersion_f(profile: &ShearProfile, gamma: f64) -> Result<Complex64> {
    if !(gamma > 0.0) {
        return Err(CoreError::InvalidParameter {
            name: "gamma",
            message: format!("must be positive, got {gamma}"),
        });
    }
    Ok(dispersion_f_at(profile, Complex64::new(0.0, gamma)))
}

/// `int_0^1 (U - c)^{-2} dz` for a general complex eigenvalue c.
pub fn dispersion_f_at(profile: &ShearProfile, c: Complex64) -> Complex64 {
    let n = profile.nz;
    let w = simpson_weights(n, 1.0 / (n - 1) as f64);
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        let d = Complex64::new(profile.u[i], 0.0) - c;
        acc += w[i] * (d * d).inv();
    }
    acc
}

/// Magnitude scale of F away from its root: `int |U - i gamma|^{-2} dz`.
/// Used to normalize convergence and symmetry tolerances.
pub fn dispersion_scale(profile: &ShearProfile, gamma: f64) -> f64 {
    let n = profile.nz;
    let w = simpson_weights(n, 1.0 / (n - 1) as f64);
    let mut acc = 0.0;
    for i in 0..n {
        acc += w[i] / (profile.u[i] * profile.u[i] + gamma * gamma);
    }
    acc
}

/// Result of a dispersion-root search.
#[derive(Debug, Clone, Copy)]
pub struct GammaRoot {
    /// Growth parameter: the (imaginary) part of the eigenvalue above the
    /// real axis.
    pub gamma: f64,
    /// |F| at the returned root, relative to [`dispersion_scale`].
    pub residual: f64,
    /// Set when the profile failed the odd-symmetry check and the complex
    /// fallback was used.
    pub symmetry_violation: bool,
    /// Full complex eigenvalue `c`; purely imaginary for symmetric profiles.
    pub c: Complex64,
}

/// Number of scan points used to bracket the sign change of Re F inside
/// the user bracket.  Re F is negative at the semicircle bound `max |U|`
/// and can also go negative spuriously as `gamma -> 0` (the quadrature
/// cannot resolve an O(gamma / L) critical layer), so the physical root is
/// taken from the sign change at the largest gamma.
const SCAN_POINTS: usize = 64;

/// Locate the dispersion root on the bracket `(lo, hi)` to tolerance `tol`
/// (bracket width).  A coarse scan of Re F brackets the sign change closest
/// to the upper end; symmetric profiles then refine it by Brent on Re F,
/// asymmetric ones by a complex Newton iteration seeded there (the
/// eigenvalue acquires a real phase speed).
pub fn find_gamma(profile: &ShearProfile, bracket: (f64, f64), tol: f64) -> Result<GammaRoot> {
    let (lo, hi) = bracket;
    if !(lo > 0.0 && hi > lo) {
        return Err(CoreError::InvalidParameter {
            name: "bracket",
            message: format!("need 0 < lo < hi, got ({lo}, {hi})"),
        });
    }
    if !(tol > 0.0) {
        return Err(CoreError::InvalidParameter {
            name: "tol",
            message: format!("must be positive, got {tol}"),
        });
    }

    // Scan from the top down and keep the first (largest-gamma) crossing.
    let point = |i: usize| lo + (hi - lo) * i as f64 / (SCAN_POINTS - 1) as f64;
    let mut sub = None;
    let mut g_hi = point(SCAN_POINTS - 1);
    let mut f_hi = dispersion_f(profile, g_hi)?.re;
    for i in (0..SCAN_POINTS - 1).rev() {
        let g_lo = point(i);
        let f_lo = dispersion_f(profile, g_lo)?.re;
        if f_lo == 0.0 || f_lo.signum() != f_hi.signum() {
            sub = Some((g_lo, g_hi));
            break;
        }
        g_hi = g_lo;
        f_hi = f_lo;
    }
    let (sub_lo, sub_hi) = sub.ok_or(CoreError::NoRoot { lo, hi })?;

    if profile.odd_symmetry_defect() > 1e-12 {
        // Check whether the asymmetry is strong enough to push Im F above
        // noise near the crossing; if so, switch to the complex solver.
        let probe = 0.5 * (sub_lo + sub_hi);
        let f = dispersion_f(profile, probe)?;
        if f.im.abs() > SYMMETRY_TOL * dispersion_scale(profile, probe) {
            let c = complex_newton(profile, Complex64::new(0.0, probe), tol)?;
            if !(c.im > 0.0) {
                return Err(CoreError::NoConvergence(format!(
                    "complex fallback converged to Im c = {} <= 0",
                    c.im
                )));
            }
            let res = dispersion_f_at(profile, c).norm() / dispersion_scale(profile, c.im);
            return Ok(GammaRoot { gamma: c.im, residual: res, symmetry_violation: true, c });
        }
    }

    let f_re = |g: f64| -> Result<f64> { Ok(dispersion_f(profile, g)?.re) };
    let gamma = brent(f_re, sub_lo, sub_hi, tol)?;
    let f = dispersion_f(profile, gamma)?;
    let residual = f.norm() / dispersion_scale(profile, gamma);
    Ok(GammaRoot {
        gamma,
        residual,
        symmetry_violation: false,
        c: Complex64::new(0.0, gamma),
    })
}

/// Default bracket for [`find_gamma`]: `(1e-4, max |U|)`.  The upper end is
/// the semicircle-theorem bound on the growth parameter.
pub fn default_bracket(profile: &ShearProfile) -> (f64, f64) {
    (1e-4, profile.max_abs())
}

/// Convenience: root at the default bracket and tolerance 1e-12.
pub fn find_gamma_default(profile: &ShearProfile) -> Result<GammaRoot> {
    find_gamma(profile, default_bracket(profile), 1e-12)
}

/// Refine a closed-form profile's quadrature until the root stabilizes:
/// doubles the node count from the profile's own resolution until successive
/// roots agree within `tol`.  Returns the root and the resolution that
/// achieved it.
pub fn find_gamma_refined(
    profile: &ShearProfile,
    bracket: (f64, f64),
    tol: f64,
) -> Result<(GammaRoot, usize)> {
    let mut nz = profile.nz.max(257);
    let mut cur = find_gamma(&profile.resampled(nz)?, bracket, tol)?;
    for _ in 0..8 {
        let finer = 2 * (nz - 1) + 1;
        let next = find_gamma(&profile.resampled(finer)?, bracket, tol)?;
        if (next.gamma - cur.gamma).abs() <= tol * next.gamma.max(1.0) {
            return Ok((next, finer));
        }
        nz = finer;
        cur = next;
    }
    Err(CoreError::NoConvergence(
        "dispersion root did not stabilize under quadrature refinement".into(),
    ))
}

/// Classic Brent root finder (inverse quadratic interpolation with secant
/// and bisection safeguards).  Terminates when the bracket width falls
/// below `tol` (plus machine slack) or the function value is exactly zero.
fn brent(mut f: impl FnMut(f64) -> Result<f64>, a0: f64, b0: f64, tol: f64) -> Result<f64> {
    let (mut a, mut b) = (a0, b0);
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(CoreError::NoRoot { lo: a0, hi: b0 });
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // inverse quadratic / secant step
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if d.abs() > tol1 {
            b += d;
        } else {
            b += tol1.copysign(xm);
        }
        fb = f(b)?;
    }
    Err(CoreError::NoConvergence("Brent iteration exceeded 200 steps".into()))
}

/// Complex Newton iteration on `G(c) = int (U - c)^{-2} dz`, using
/// `G'(c) = 2 int (U - c)^{-3} dz`.
fn complex_newton(profile: &ShearProfile, c0: Complex64, tol: f64) -> Result<Complex64> {
    let n = profile.nz;
    let w = simpson_weights(n, 1.0 / (n - 1) as f64);
    let mut c = c0;
    for _ in 0..100 {
        let mut g = Complex64::new(0.0, 0.0);
        let mut dg = Complex64::new(0.0, 0.0);
        let mut scale = 0.0;
        for i in 0..n {
            let d = Complex64::new(profile.u[i], 0.0) - c;
            let inv2 = (d * d).inv();
            g += w[i] * inv2;
            dg += w[i] * 2.0 * inv2 / d;
            scale += w[i] * inv2.norm();
        }
        if dg.norm() == 0.0 {
            return Err(CoreError::NoConvergence("flat dispersion function".into()));
        }
        let step = g / dg;
        c -= step;
        if step.norm() <= tol * c.norm().max(1.0) && g.norm() <= 1e-10 * scale {
            return Ok(c);
        }
    }
    Err(CoreError::NoConvergence("complex Newton exceeded 100 steps".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array1;

    #[test]
    fn dispersion_rejects_nonpositive_gamma() {
        let p = ShearProfile::tanh(65, 20.0, 1.0).unwrap();
        assert!(matches!(
            dispersion_f(&p, 0.0),
            Err(CoreError::InvalidParameter { name: "gamma", .. })
        ));
        assert!(matches!(
            dispersion_f(&p, -0.3),
            Err(CoreError::InvalidParameter { name: "gamma", .. })
        ));
    }

    #[test]
    fn constant_profile_has_closed_form_f() {
        // U = 2: F = (2 - i gamma)^{-2}, and no root exists on the bracket.
        let p = ShearProfile::from_samples(Array1::from_elem(65, 2.0)).unwrap();
        let gamma = 0.7;
        let f = dispersion_f(&p, gamma).unwrap();
        let want = (Complex64::new(2.0, -gamma) * Complex64::new(2.0, -gamma)).inv();
        assert!((f - want).norm() < 1e-12);
        assert!(matches!(
            find_gamma(&p, (1e-4, 2.0), 1e-12),
            Err(CoreError::NoRoot { .. })
        ));
    }

    #[test]
    fn f_is_real_on_odd_profiles() {
        let p = ShearProfile::tanh(257, 20.0, 1.0).unwrap();
        for gamma in [0.1, 0.5, 0.9] {
            let f = dispersion_f(&p, gamma).unwrap();
            let scale = dispersion_scale(&p, gamma);
            assert!(f.im.abs() <= 1e-10 * scale, "gamma={gamma}: Im F = {}", f.im);
        }
    }

    #[test]
    fn root_exists_and_chi_scale_is_sane() {
        let p = ShearProfile::tanh(2049, 20.0, 1.0).unwrap();
        let root = find_gamma_default(&p).unwrap();
        assert!(!root.symmetry_violation);
        assert!(root.gamma > 0.5 && root.gamma < 1.0, "gamma = {}", root.gamma);
        assert!(root.residual < 1e-9, "residual = {}", root.residual);
        // Pinned against an out-of-band bisection of the same quadrature.
        assert!(
            (root.gamma - 0.866884424259519).abs() < 1e-10,
            "gamma = {}",
            root.gamma
        );
    }

    #[test]
    fn root_scales_linearly_with_profile_amplitude() {
        let p = ShearProfile::tanh(1025, 20.0, 1.0).unwrap();
        let base = find_gamma_default(&p).unwrap().gamma;
        for lambda in [0.5, 2.0, 10.0] {
            let q = p.scaled(lambda);
            let g = find_gamma(&q, (1e-4 * lambda.min(1.0), q.max_abs()), 1e-13).unwrap();
            let rel = (g.gamma - lambda * base).abs() / (lambda * base);
            assert!(rel <= 1e-9, "lambda={lambda}: rel error {rel}");
        }
    }

    #[test]
    fn asymmetric_profile_triggers_complex_fallback() {
        // tanh shifted off the midpoint: eigenvalue picks up a phase speed.
        let nz = 1025;
        let h = 1.0 / (nz - 1) as f64;
        let u = Array1::from_iter(
            (0..nz).map(|i| (20.0 * (i as f64 * h - 0.45)).tanh()),
        );
        let p = ShearProfile::from_samples(u).unwrap();
        let root = find_gamma(&p, (1e-4, 1.0), 1e-12).unwrap();
        assert!(root.symmetry_violation);
        assert!(root.gamma > 0.5, "gamma = {}", root.gamma);
        assert!(root.c.re.abs() > 1e-3, "expected nonzero phase speed, c = {}", root.c);
        assert!(root.residual < 1e-8, "residual {}", root.residual);
    }

    #[test]
    fn refined_root_stabilizes() {
        let p = ShearProfile::tanh(257, 20.0, 1.0).unwrap();
        let (root, nz) = find_gamma_refined(&p, (1e-4, 1.0), 1e-11).unwrap();
        assert!(nz > 257);
        let fine = find_gamma_default(&ShearProfile::tanh(8193, 20.0, 1.0).unwrap()).unwrap();
        assert!((root.gamma - fine.gamma).abs() < 1e-9);
    }
}
