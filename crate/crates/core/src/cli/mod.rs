//! Run configuration, initial data, batch runs and the `verify` suite.

mod config;
mod init;
mod run;
mod verify;

pub use config::{InitialDatum, OutputPaths, RunConfig, DEFAULT_C1};
pub use init::{
    dirac_coefficient, init_example_dirac, init_from_file, init_single_mode, random_perp_state, random_tilde_state, LoadedState,
};
pub use run::{build_initial, run, RunSummary};
pub use verify::{
    check_cascade_vs_numeric, check_coefficient_identities, check_fourier, check_gaunt_exactness, check_trilinear, random_xi,
    verify, A2Finding, CheckResult, Level, VerifyReport,
};
