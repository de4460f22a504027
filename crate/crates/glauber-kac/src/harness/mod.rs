//! Experiment orchestration: configuration, replica scheduling, statistics and the
//! lattice/continuum comparisons.

pub mod audit;
pub mod compare;
pub mod config;
pub mod experiment;
pub mod io;
pub mod rng;
pub mod stats;

pub use audit::{bracket_audit, covariance_audit, BracketSummary, CovarianceAudit};
pub use compare::{compare_laws, ladder_trend, ComparisonRow, LadderTrend};
pub use config::{ExperimentConfig, InitialSpec, MeasureSpec};
pub use experiment::{build_rung, evaluate_assertions, result_metrics, run_experiment, run_replicas, ResultSet, Rung, System};
