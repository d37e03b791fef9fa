//! Energy hierarchy reports, trajectory monitors, and the empirical
//! inequality laboratory.

pub mod checks;
pub mod energy;
pub mod inequality;

pub use checks::{
    bkm_integral_range, bkm_report, max_principle_check, poincare_ratios, MaxPrincipleReport,
    PoincareRatios, MAX_PRINCIPLE_TOLERANCE,
};
pub use energy::{
    energy_report, energy_snapshot, hierarchy_defect, EnergyReport, MAX_ENERGY_LEVELS,
};
pub use inequality::{
    borderline_ensemble, borderline_ratio, ensemble_max, frac_row, leibniz_ensemble,
    leibniz_ratio, lp_norm, random_trig_poly, EnsembleRow, DEFAULT_EXPONENTS,
};
