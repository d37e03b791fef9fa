//! Exponential growth-rate extraction from sampled amplitude histories.

use crate::error::{CoreError, Result};

/// Least-squares slope of `ln a(t)` over the window `[t0, t1]`.
///
/// All samples whose time falls inside the window enter the fit; there must
/// be at least 10 of them and every amplitude must be strictly positive
/// (log of a dead or sign-crossing signal is meaningless).  Returns the
/// fitted rate together with the RMS residual of the log fit, which callers
/// can use to reject windows contaminated by transients.
pub fn fit_growth_rate(
    times: &[f64],
    amplitudes: &[f64],
    window: (f64, f64),
) -> Result<GrowthFit> {
    if times.len() != amplitudes.len() {
        return Err(CoreError::DimensionMismatch(format!(
            "times ({}) and amplitudes ({}) differ in length",
            times.len(),
            amplitudes.len()
        )));
    }
    let (t0, t1) = window;
    if !(t1 > t0) {
        return Err(CoreError::InvalidParameter {
            name: "window",
            message: format!("need t0 < t1, got ({t0}, {t1})"),
        });
    }
    let mut ts = Vec::new();
    let mut ys = Vec::new();
    for (&t, &a) in times.iter().zip(amplitudes) {
        if t < t0 || t > t1 {
            continue;
        }
        if !(a > 0.0) || !a.is_finite() {
            return Err(CoreError::FitError(format!(
                "non-positive amplitude {a} at t = {t} inside the fit window"
            )));
        }
        ts.push(t);
        ys.push(a.ln());
    }
    let n = ts.len();
    if n < 10 {
        return Err(CoreError::FitError(format!(
            "only {n} samples in window [{t0}, {t1}]; need at least 10"
        )));
    }
    let nf = n as f64;
    let tm = ts.iter().sum::<f64>() / nf;
    let ym = ys.iter().sum::<f64>() / nf;
    let mut stt = 0.0;
    let mut sty = 0.0;
    for i in 0..n {
        let dt = ts[i] - tm;
        stt += dt * dt;
        sty += dt * (ys[i] - ym);
    }
    if stt == 0.0 {
        return Err(CoreError::FitError("all samples at a single time".into()));
    }
    let rate = sty / stt;
    let intercept = ym - rate * tm;
    let mut ss = 0.0;
    for i in 0..n {
        let r = ys[i] - (intercept + rate * ts[i]);
        ss += r * r;
    }
    Ok(GrowthFit {
        rate,
        log_intercept: intercept,
        rms_residual: (ss / nf).sqrt(),
        samples: n,
    })
}

/// Result of [`fit_growth_rate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthFit {
    /// d/dt ln a.
    pub rate: f64,
    pub log_intercept: f64,
    /// RMS deviation of ln a from the fitted line.
    pub rms_residual: f64,
    pub samples: usize,
}
