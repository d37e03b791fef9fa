//! Time integration: integrating-factor RK4 over the dissipative symbol,
//! the linearized stream-function system, the full nonlinear tendency, and
//! trajectory orchestration (runs, growth-rate fits, criticality scans).

pub mod fit;
pub mod linear;
pub mod nonlinear;
pub mod quad;
pub mod run;
pub mod scan;
pub mod stepper;

pub use fit::{fit_growth_rate, GrowthFit};
pub use linear::{LinearPsiSystem, PoissonSolver};
pub use nonlinear::{apply_dealias_mask, NonlinearSystem};
pub use quad::QuadAccumulator;
pub use run::{run, DtSpec, InitialData, RunConfig, RunMode, RunStatus, Trajectory};
pub use scan::{criticality_scan, ScanCell, ScanConfig, ScanResult, ThresholdEstimate};
pub use stepper::{ifrk4_step, TendencySystem};
