//! Continuous-time Glauber dynamic with Kac interaction.
//!
//! Every site carries an independent rate-one Poisson clock in microscopic time; at a
//! ring the spin is redrawn from `p^{h(x)}(dη) ∝ e^{β⟨h(x),η⟩} ν(dη)`, where `h = κ ∗ σ`.
//! Observables live in macroscopic time `t = α × (microscopic time)` and space `ε Λ_N`.

mod generator;
mod linear;
mod record;
mod sim;
mod state;

pub use generator::{enumerate_generator, ExactGenerator};
pub use linear::{linear_variance, linear_variance_continuum, TestMode, TestShape};
pub use record::{
    local_law, BracketAudit, BracketCheckpoint, Decomposition, DriftMartingaleRecorder, LinearProcessRecorder,
    LocalLaw,
};
pub use sim::{simulate, stopping_norm, Context, Model, NoRecorder, Recorder, Schedule, Snapshot, Trajectory};
pub use state::SpinConfiguration;
