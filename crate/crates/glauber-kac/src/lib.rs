//! Continuous-time Glauber dynamics of Kac-interacting spin systems on the two-dimensional
//! torus, the `Φ^{2n}_2` stochastic quantization equation they approach, and the statistics
//! used to compare the two.
//!
//! - [`measures`]: reference measures, Taylor coefficients of the drift, moment synthesis.
//! - [`renorm`]: Hermite/Wick algebra and the divergent constants `C_γ`, `C_γ(t)`, `𝔠_{γ,t}(s)`.
//! - [`lattice`]: fields, the Kac kernel, the discrete heat semigroup and Besov norms.
//! - [`glauber`]: the event-driven simulator with its stopping rule and recorders.
//! - [`spde`]: the spectral solver for the limit through the linear part plus remainder.
//! - [`harness`]: configs, replica runs, audits, law comparisons and output formats.

pub mod error;
pub mod glauber;
pub mod harness;
pub mod lattice;
pub mod measures;
pub mod params;
pub mod renorm;
pub mod spde;

pub use error::{Error, Result};
pub use params::ModelParams;
