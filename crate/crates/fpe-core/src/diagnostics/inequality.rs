//! Empirical laboratory for the fractional product inequalities on the
//! one-dimensional torus (period 1).
//!
//! Two families of ratios are measured over seeded random trigonometric
//! polynomials:
//!
//! * the product rule `|L^s(fg)|_2 <= C (|f|_p1 |L^s g|_q1 +
//!   |L^s f|_p2 |g|_q2)` for Holder pairings `1/p1 + 1/q1 = 1/p2 + 1/q2 =
//!   1/2`, and
//! * its borderline refinement for `s` in (0, 1), `|L^s(fh)|_2 <= C
//!   (|f|_inf |L^s h|_2 + |L^{s+1/2} f|_2 |h|_2)`, which trades the
//!   sup-norm of `L^s f` for half a derivative in L^2.
//!
//! The constants are not asserted against theory; ensemble maxima are
//! recorded as fixtures and regression-tested for stability under
//! refinement.  Discrete conventions, fixed so ratios reproduce
//! bit-for-bit per seed: `L^inf` is the max over samples and `L^p` the
//! Riemann sum `((1/nx) sum |f_j|^p)^{1/p}`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{CoreError, Result};
use crate::spectral::fft::XTransform;
use crate::spectral::grid::SymbolScale;

/// The Holder pairing (inf, 2, inf, 2): sup-norm on the undifferentiated
/// factor, L^2 on the differentiated one.
pub const DEFAULT_EXPONENTS: (f64, f64, f64, f64) =
    (f64::INFINITY, 2.0, f64::INFINITY, 2.0);

/// Discrete L^p norm on the periodic unit interval: max over samples for
/// p = inf, Riemann sum otherwise.  Requires p >= 1.
pub fn lp_norm(f: &[f64], p: f64) -> Result<f64> {
    if f.is_empty() {
        return Err(CoreError::InvalidParameter {
            name: "f",
            message: "empty sample vector".into(),
        });
    }
    if !(p >= 1.0) {
        return Err(CoreError::InvalidParameter {
            name: "p",
            message: format!("exponent must be >= 1 (or inf), got {p}"),
        });
    }
    if p.is_infinite() {
        return Ok(f.iter().fold(0.0f64, |m, &v| m.max(v.abs())));
    }
    // The quadratic case avoids powf entirely: multiplication and sqrt are
    // exactly rounded, so the result cannot depend on whether the optimizer
    // rewrites a constant-exponent powf — bit-stable ratios need that.
    if p == 2.0 {
        let mean = f.iter().map(|&v| v * v).sum::<f64>() / f.len() as f64;
        return Ok(mean.sqrt());
    }
    let mean = f.iter().map(|&v| v.abs().powf(p)).sum::<f64>() / f.len() as f64;
    Ok(mean.powf(1.0 / p))
}

fn row_sigma(idx: usize, nx: usize, scale: SymbolScale) -> f64 {
    let k = if idx <= nx / 2 { idx as i64 } else { idx as i64 - nx as i64 };
    scale.sigma(k)
}

/// Fractional derivative `L^s f` of one periodic row of samples.
pub fn frac_row(f: &[f64], s: f64, scale: SymbolScale, xt: &XTransform) -> Result<Vec<f64>> {
    if s < 0.0 {
        return Err(CoreError::InvalidParameter {
            name: "s",
            message: format!("order must be nonnegative, got {s}"),
        });
    }
    let nx = f.len();
    let mut row: Vec<Complex64> = f.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    xt.forward_row(&mut row);
    for (idx, c) in row.iter_mut().enumerate() {
        let sig = row_sigma(idx, nx, scale);
        let mult = if s == 0.0 { 1.0 } else { sig.powf(s) };
        *c *= mult;
    }
    xt.inverse_row(&mut row);
    Ok(row.iter().map(|c| c.re).collect())
}

fn check_pairing(name: &'static str, p: f64, q: f64) -> Result<()> {
    if !(p >= 1.0) || !(q >= 1.0) {
        return Err(CoreError::InvalidParameter {
            name,
            message: format!("exponents must be >= 1 (or inf), got ({p}, {q})"),
        });
    }
    let sum = 1.0 / p + 1.0 / q;
    if (sum - 0.5).abs() > 1e-12 {
        return Err(CoreError::InvalidParameter {
            name,
            message: format!("1/{p} + 1/{q} = {sum}, need exactly 1/2"),
        });
    }
    Ok(())
}

/// Product-rule ratio `|L^s(fg)|_2 / (|f|_p1 |L^s g|_q1 + |L^s f|_p2
/// |g|_q2)`.
pub fn leibniz_ratio(
    f: &[f64],
    g: &[f64],
    s: f64,
    exponents: (f64, f64, f64, f64),
    scale: SymbolScale,
) -> Result<f64> {
    if f.len() != g.len() {
        return Err(CoreError::DimensionMismatch(format!(
            "f has {} samples, g has {}",
            f.len(),
            g.len()
        )));
    }
    let (p1, q1, p2, q2) = exponents;
    check_pairing("exponents(p1,q1)", p1, q1)?;
    check_pairing("exponents(p2,q2)", p2, q2)?;
    let xt = XTransform::new(f.len());
    let fg: Vec<f64> = f.iter().zip(g).map(|(&a, &b)| a * b).collect();
    let num = lp_norm(&frac_row(&fg, s, scale, &xt)?, 2.0)?;
    let den = lp_norm(f, p1)? * lp_norm(&frac_row(g, s, scale, &xt)?, q1)?
        + lp_norm(&frac_row(f, s, scale, &xt)?, p2)? * lp_norm(g, q2)?;
    if den == 0.0 {
        return Err(CoreError::UndefinedRatio);
    }
    Ok(num / den)
}

/// Borderline ratio `|L^s(fh)|_2 / (|f|_inf |L^s h|_2 + |L^{s+1/2} f|_2
/// |h|_2)` for `s` in (0, 1).
pub fn borderline_ratio(f: &[f64], h: &[f64], s: f64, scale: SymbolScale) -> Result<f64> {
    if f.len() != h.len() {
        return Err(CoreError::DimensionMismatch(format!(
            "f has {} samples, h has {}",
            f.len(),
            h.len()
        )));
    }
    if !(s > 0.0 && s < 1.0) {
        return Err(CoreError::InvalidParameter {
            name: "s",
            message: format!("borderline order must lie in (0, 1), got {s}"),
        });
    }
    let xt = XTransform::new(f.len());
    let fh: Vec<f64> = f.iter().zip(h).map(|(&a, &b)| a * b).collect();
    let num = lp_norm(&frac_row(&fh, s, scale, &xt)?, 2.0)?;
    let den = lp_norm(f, f64::INFINITY)? * lp_norm(&frac_row(h, s, scale, &xt)?, 2.0)?
        + lp_norm(&frac_row(f, s + 0.5, scale, &xt)?, 2.0)? * lp_norm(h, 2.0)?;
    if den == 0.0 {
        return Err(CoreError::UndefinedRatio);
    }
    Ok(num / den)
}

/// Random real trigonometric polynomial of the given degree, coefficients
/// uniform in (-1, 1), sampled on the nx-point grid.
pub fn random_trig_poly<R: rand::Rng>(rng: &mut R, nx: usize, degree: usize) -> Result<Vec<f64>> {
    if nx < 2 {
        return Err(CoreError::InvalidParameter {
            name: "nx",
            message: format!("need at least 2 samples, got {nx}"),
        });
    }
    if degree > nx / 2 {
        return Err(CoreError::InvalidParameter {
            name: "degree",
            message: format!("degree {degree} aliases on {nx} samples (max {})", nx / 2),
        });
    }
    let mut coeffs = Vec::with_capacity(2 * degree + 1);
    for _ in 0..(2 * degree + 1) {
        coeffs.push(rng.random_range(-1.0..1.0));
    }
    let mut out = vec![coeffs[0]; nx];
    for k in 1..=degree {
        let (a, b) = (coeffs[2 * k - 1], coeffs[2 * k]);
        for (j, v) in out.iter_mut().enumerate() {
            let th = 2.0 * std::f64::consts::PI * (k * j) as f64 / nx as f64;
            *v += a * th.cos() + b * th.sin();
        }
    }
    Ok(out)
}

/// One measured ensemble member; serializes as `seed,s,nx,degree,ratio`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleRow {
    pub seed: u64,
    pub s: f64,
    pub nx: usize,
    pub degree: usize,
    pub ratio: f64,
}

impl EnsembleRow {
    /// CSV line using the shortest round-trip float formatting, so stored
    /// fixtures compare exactly.
    pub fn csv_line(&self) -> String {
        format!("{},{},{},{},{}", self.seed, self.s, self.nx, self.degree, self.ratio)
    }
}

fn ensemble<F>(seeds: &[u64], s: f64, nx: usize, degree: usize, eval: F) -> Result<Vec<EnsembleRow>>
where
    F: Fn(&[f64], &[f64]) -> Result<f64> + Sync,
{
    seeds
        .par_iter()
        .map(|&seed| {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let f = random_trig_poly(&mut rng, nx, degree)?;
            let g = random_trig_poly(&mut rng, nx, degree)?;
            Ok(EnsembleRow { seed, s, nx, degree, ratio: eval(&f, &g)? })
        })
        .collect()
}

/// Product-rule ratios over a seeded ensemble (one deterministic ChaCha8
/// stream per seed; rows in seed order regardless of thread schedule).
pub fn leibniz_ensemble(
    seeds: &[u64],
    nx: usize,
    degree: usize,
    s: f64,
    exponents: (f64, f64, f64, f64),
    scale: SymbolScale,
) -> Result<Vec<EnsembleRow>> {
    ensemble(seeds, s, nx, degree, |f, g| leibniz_ratio(f, g, s, exponents, scale))
}

/// Borderline ratios over the same kind of ensemble.
pub fn borderline_ensemble(
    seeds: &[u64],
    nx: usize,
    degree: usize,
    s: f64,
    scale: SymbolScale,
) -> Result<Vec<EnsembleRow>> {
    ensemble(seeds, s, nx, degree, |f, h| borderline_ratio(f, h, s, scale))
}

/// Largest ratio in an ensemble.
pub fn ensemble_max(rows: &[EnsembleRow]) -> f64 {
    rows.iter().fold(0.0f64, |m, r| m.max(r.ratio))
}
