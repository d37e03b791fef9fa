//! Background shear profiles `U(z)` with their first three derivatives.

use ndarray::Array1;

use crate::error::{CoreError, Result};
use crate::spectral::vertical::dz_samples;

/// Closed-form family a profile was built from, when known.  Closed forms
/// allow re-sampling at arbitrary resolution (used by quadrature refinement);
/// purely tabulated profiles are evaluated at their native nodes only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ShearForm {
    /// `U(z) = amplitude * tanh(l * (z - 1/2))`.
    Tanh { l: f64, amplitude: f64 },
    /// Raw samples with no closed form attached; cannot be re-sampled.
    Tabulated,
}

/// A shear profile sampled on the uniform z grid (`nz` odd nodes on [0,1])
/// together with its first three derivatives.
#[derive(Debug, Clone)]
pub struct ShearProfile {
    pub nz: usize,
    pub u: Array1<f64>,
    pub du: Array1<f64>,
    pub d2u: Array1<f64>,
    pub d3u: Array1<f64>,
    pub form: ShearForm,
}

fn check_nz(nz: usize) -> Result<()> {
    if nz < 5 || nz % 2 == 0 {
        return Err(CoreError::InvalidParameter {
            name: "nz",
            message: format!("must be an odd integer >= 5, got {nz}"),
        });
    }
    Ok(())
}

impl ShearProfile {
    /// The reference unstable profile `amplitude * tanh(l (z - 1/2))`, with
    /// analytic derivatives.  It is odd about z = 1/2, so the dispersion
    /// function is real on the positive imaginary axis.
    pub fn tanh(nz: usize, l: f64, amplitude: f64) -> Result<Self> {
        check_nz(nz)?;
        if !(l > 0.0) {
            return Err(CoreError::InvalidParameter {
                name: "l",
                message: format!("steepness must be positive, got {l}"),
            });
        }
        let h = 1.0 / (nz - 1) as f64;
        let mut u = Array1::zeros(nz);
        let mut du = Array1::zeros(nz);
        let mut d2u = Array1::zeros(nz);
        let mut d3u = Array1::zeros(nz);
        for i in 0..nz {
            let xi = l * (i as f64 * h - 0.5);
            let t = xi.tanh();
            let s2 = 1.0 - t * t; // sech^2
            u[i] = amplitude * t;
            du[i] = amplitude * l * s2;
            d2u[i] = amplitude * l * l * (-2.0 * s2 * t);
            d3u[i] = amplitude * l * l * l * (4.0 * s2 * t * t - 2.0 * s2 * s2);
        }
        Ok(ShearProfile { nz, u, du, d2u, d3u, form: ShearForm::Tanh { l, amplitude } })
    }

    /// Build from raw samples; derivatives come from the fourth-order
    /// finite-difference stencils.
    pub fn from_samples(u: Array1<f64>) -> Result<Self> {
        let nz = u.len();
        check_nz(nz)?;
        let h = 1.0 / (nz - 1) as f64;
        let mut du = vec![0.0; nz];
        let mut d2u = vec![0.0; nz];
        let mut d3u = vec![0.0; nz];
        let us = u.as_slice().expect("contiguous");
        dz_samples(us, h, &mut du);
        dz_samples(&du, h, &mut d2u);
        dz_samples(&d2u, h, &mut d3u);
        Ok(ShearProfile {
            nz,
            u,
            du: Array1::from(du),
            d2u: Array1::from(d2u),
            d3u: Array1::from(d3u),
            form: ShearForm::Tabulated,
        })
    }

    /// Profile scaled by a constant factor (derivatives scale with it).
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.u.mapv_inplace(|v| factor * v);
        out.du.mapv_inplace(|v| factor * v);
        out.d2u.mapv_inplace(|v| factor * v);
        out.d3u.mapv_inplace(|v| factor * v);
        out.form = match self.form {
            ShearForm::Tanh { l, amplitude } => ShearForm::Tanh { l, amplitude: factor * amplitude },
            ShearForm::Tabulated => ShearForm::Tabulated,
        };
        out
    }

    /// Re-sample a closed-form profile at a different resolution.
    pub fn resampled(&self, nz: usize) -> Result<Self> {
        match self.form {
            ShearForm::Tanh { l, amplitude } => ShearProfile::tanh(nz, l, amplitude),
            ShearForm::Tabulated => Err(CoreError::InvalidParameter {
                name: "nz",
                message: "tabulated profiles cannot be re-sampled".into(),
            }),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.u.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Largest deviation from odd symmetry about z = 1/2, `max_z |U(z) +
    /// U(1-z)|`, relative to `max |U|`.
    pub fn odd_symmetry_defect(&self) -> f64 {
        let n = self.nz;
        let mut worst = 0.0f64;
        for i in 0..n {
            worst = worst.max((self.u[i] + self.u[n - 1 - i]).abs());
        }
        let scale = self.max_abs();
        if scale == 0.0 {
            0.0
        } else {
            worst / scale
        }
    }
}
