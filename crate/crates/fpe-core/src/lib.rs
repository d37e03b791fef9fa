//! Pseudo-spectral solver and linear-stability laboratory for the 2D
//! hydrostatic primitive equations with fractional horizontal dissipation
//!
//! ```text
//!     du/dt + u du/dx + w du/dz + dp/dx + nu_h * L_h^alpha u = 0,
//!     dp/dz = 0,        du/dx + dw/dz = 0,      w(x,0) = w(x,1) = 0,
//! ```
//!
//! on the periodic channel `T x [0,1]` (x-period 1).  `L_h^alpha` is the
//! fractional horizontal Laplacian, a Fourier multiplier in x.  The vertical
//! velocity is diagnostic, `w = -int_0^z du/dx dz'`, and the natural state
//! space keeps `u` with zero vertical mean at every x.
//!
//! The crate is organised in four layers:
//!
//! * [`spectral`] — grids, FFT transforms in x, fractional/Hilbert
//!   multipliers, finite differences and quadrature in z, mixed norms;
//! * [`shear`] — shear profiles, the dispersion relation
//!   `F(gamma) = int_0^1 (U - i gamma)^{-2} dz = 0`, unstable eigenfunctions
//!   and their growth rates;
//! * [`evolution`] — linearized (stream-function) and nonlinear tendencies,
//!   integrating-factor RK4 stepping, trajectory runs, growth-rate fits and
//!   criticality scans;
//! * [`diagnostics`] — energy hierarchies, maximum-principle and BKM reports,
//!   and an empirical inequality laboratory for product and Poincare
//!   estimates.

pub mod diagnostics;
pub mod error;
pub mod evolution;
pub mod shear;
pub mod spectral;

pub use error::{CoreError, Result};
pub use spectral::{Field, GridSpec, SpectralField, SymbolScale};
