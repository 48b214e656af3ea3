//! Analysis toolkit for the strict avalanche criterion (SAC) of Boolean
//! functions.
//!
//! A function satisfies SAC when flipping any single input bit flips the
//! output with probability exactly 1/2, equivalently when all weight-1
//! autocorrelations vanish. This crate decides that exactly from spectra,
//! bounds the Hamming distance to the nearest SAC function, and estimates
//! that distance statistically four ways: a classical Monte-Carlo estimator
//! over derivative biases, and three quantum test circuits (a single-qubit
//! probe, a Deutsch-Jozsa style derivative test, and a 3-fold Forrelation
//! test) executed on an embedded dense state-vector simulator.
//!
//! Modules:
//! - [`boolfn`]: truth tables, ANF parsing, Walsh-Hadamard and
//!   autocorrelation spectra, exact SAC verdicts and distance bounds.
//! - [`qsim`]: the state-vector simulator (gates, oracles, sampling).
//! - [`circuits`]: the three SAC test circuits plus a brute-force
//!   Forrelation evaluator.
//! - [`estimators`]: seeded estimation with Hoeffding sample planning and
//!   confidence intervals.
//! - [`complexity`]: per-algorithm cost accounting and its audit against
//!   the circuits actually constructed.

pub mod boolfn;
pub mod circuits;
pub mod complexity;
mod error;
pub mod estimators;
pub mod qsim;

pub use boolfn::{
    all_functions, audit_distance_bound, direction_bits, parse_function, random_function,
    unit_direction, AutocorrSpectrum, BooleanFunction, DistanceBoundAudit, FourierSpectrum,
    FunctionSource, SacReport,
};
pub use complexity::{audit_against_simulation, table1, AuditRecord, ComplexityRow};
pub use error::{Error, Result};
pub use estimators::{
    confidence_interval, plan_samples, run_estimate, Algorithm, EstimateReport, ExperimentConfig,
    PlanVariant, ShotPlan,
};
