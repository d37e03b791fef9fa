//! Shear profiles, the dispersion relation, and unstable eigenfunctions.

pub mod dispersion;
pub mod eigen;
pub mod profile;

pub use dispersion::{
    default_bracket, dispersion_f, dispersion_f_at, dispersion_scale, find_gamma,
    find_gamma_default, find_gamma_refined, GammaRoot,
};
pub use eigen::{
    beta_n, beta_n_with_scale, build_chi, residual_orr_sommerfeld, superposition_data,
    superposition_growth_factor, CoefficientKind, EigenSolution,
};
pub use profile::{ShearForm, ShearProfile};
