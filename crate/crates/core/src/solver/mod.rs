//! Time evolution: the exact shell cascade, fixed-step integrators for the
//! full quadratic system, and norm diagnostics.

mod cascade;
mod diagnostics;
mod numeric;

pub use cascade::{
    require_null_complement, solve_cascade, solve_linear_mode, ExpPolyTrajectory, ExpTerm, ModeTrajectory, NULL_SPACE_TOL,
    RATE_MERGE_TOL,
};
pub use diagnostics::{check_smallness, diagnostics, smallness_threshold, DiagnosticsRow, SmallnessCheck};
pub use numeric::{integrate_numeric, IntegratorConfig, Method, C1_LIMIT, RK4_STABILITY_BOUND};
