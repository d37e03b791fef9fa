//! Incremental time quadrature for running dissipation integrals.

/// Accumulates `int f dt` from streamed samples.  Each new point first adds
/// a trapezoid panel; when the last three points are equally spaced the two
/// trailing panels are replaced by a Simpson panel, so uniformly stepped
/// runs get fourth-order cumulative quadrature (up to one leading panel).

#[derive(Debug, Clone, Default)]
pub struct QuadAccumulator {
    /// (t, f, running integral) at the previous two samples.
    prev: Option<(f64, f64, f64)>,
    prev2: Option<(f64, f64, f64)>,
    total: f64,
}

impl QuadAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, t: f64, f: f64) {
        match self.prev {
            None => {
                self.prev = Some((t, f, 0.0));
                self.total = 0.0;
            }
            Some((tp, fp, ip)) => {
                let h1 = t - tp;
                let mut new_total = ip + 0.5 * h1 * (fp + f);
                if let Some((tpp, fpp, ipp)) = self.prev2 {
                    let h0 = tp - tpp;
                    if (h1 - h0).abs() <= 1e-9 * h1.max(h0) {
                        new_total = ipp + h1 / 3.0 * (fpp + 4.0 * fp + f);
                    }
                }
                self.prev2 = self.prev;
                self.prev = Some((t, f, new_total));
                self.total = new_total;
            }
        }
    }

    pub fn value(&self) -> f64 {
        self.total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_sampling_reaches_fourth_order() {
        let integral = |steps: usize| {
            let mut q = QuadAccumulator::new();
            for i in 0..=steps {
                let t = i as f64 / steps as f64;
                q.push(t, (2.5 * t).exp());
            }
            q.value()
        };
        let exact = ((2.5f64).exp() - 1.0) / 2.5;
        let e1 = (integral(50) - exact).abs();
        let e2 = (integral(100) - exact).abs();
        assert!(e1 / e2 > 10.0, "errors {e1:.3e}, {e2:.3e}");
        assert!(e2 < 1e-8);
    }

    #[test]
    fn irregular_sampling_stays_second_order() {
        let ts = [0.0, 0.1, 0.15, 0.3, 0.32, 0.5];
        let mut q = QuadAccumulator::new();
        for &t in &ts {
            q.push(t, t * t);
        }
        // trapezoid on t^2 over these panels
        let mut want = 0.0;
        for k in 1..ts.len() {
            want += 0.5 * (ts[k] - ts[k - 1]) * (ts[k] * ts[k] + ts[k - 1] * ts[k - 1]);
        }
        assert!((q.value() - want).abs() < 1e-12);
    }
}
