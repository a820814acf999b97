//! Oracles for the two worked problems: the constant kernel split in two
//! and the driven two-level system behind confluent Heun functions.

pub mod constant;
pub mod heun;
pub mod ode;
pub mod suite;

pub use constant::{constant_exact, constant_f0, constant_f1, constant_f1_printed, constant_t, exprel, ConstantKernelOracle};
pub use heun::{
    heun_build_f, heun_build_kernel, heun_build_kernel_with, heun_compare, heun_sandwich, heun_split_discrepancy,
    heun_volterra_solve, heun_volterra_solve_with, HeunComparison, HeunProblem, HeunSplit, HeunVolterraSolution,
    SplitDiscrepancy,
};
pub use ode::{heun_ode_oracle, OdeSolution, TwoLevelSystem};
pub use suite::{
    default_verify_problem, theta_power_deviation, verify_suite, CheckResult, CheckStatus, VerifyReport,
    CHECKED_ORDERS, THETA_POWER_MAX, THETA_POWER_TOLERANCE,
};
