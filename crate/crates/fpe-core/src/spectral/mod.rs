//! Spectral/finite-difference foundation: grids, transforms in x, Fourier
//! multipliers, vertical derivatives and quadrature, and mixed norms.

pub mod fft;
pub mod grid;
pub mod norms;
pub mod operators;
pub mod vertical;

pub use fft::{x_forward, x_inverse, XTransform};
pub use grid::{simpson_weights, Field, GridSpec, SpectralField, SymbolScale};
pub use norms::{
    l2_inner, l2_norm, l2_norm_sq, l2_norm_sq_spectral, mixed_norm, mode_l2_sq, parseval_defect,
    weighted_l2_sq,
};
pub use operators::{
    dx, dx_spectral, frac_laplacian_h, frac_laplacian_h_spectral, hilbert_h, hilbert_h_spectral,
};
pub use vertical::{
    cumint_z, cumulative_simpson, cumulative_simpson_complex, diagnose_w, dz, dz_samples,
    dz_samples_complex, project_h, top_boundary_defect, vertical_mean,
};
