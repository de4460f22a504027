//! Scaling parameters shared by the lattice dynamic and the renormalization constants.

use crate::error::{Error, Result};

/// Geometry and temperature of one rung of the γ-ladder.
///
/// The lattice `Λ_ε = (εZ ∩ (-1,1])²` has side `2N+1` with `ε = 2/(2N+1)`.
/// `N` is chosen so that `ε` is as close as possible to `γⁿ`, after which γ is
/// replaced by `ε^{1/n}` so that `ε = γⁿ`, `α = γ^{2n-2}` and `δ = γ` hold exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub n: usize,
    pub m: usize,
    pub requested_gamma: f64,
    pub gamma: f64,
    pub half_size: usize,
    pub epsilon: f64,
    pub alpha: f64,
    pub delta: f64,
    pub beta: f64,
    /// Regularity exponent of the stopping norm `‖·‖_{C^{-ν}}`.
    pub nu: f64,
    /// Stopping threshold 𝔪.
    pub threshold: f64,
}

impl ModelParams {
    pub fn new(gamma: f64, n: usize, m: usize) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::InvalidParameter(format!("gamma must lie in (0,1), got {gamma}")));
        }
        check_nm(n, m)?;
        let target = gamma.powi(n as i32);
        let guess = ((2.0 / target - 1.0) / 2.0).floor().max(1.0) as usize;
        let err = |h: usize| (2.0 / (2 * h + 1) as f64 - target).abs();
        let half = if err(guess + 1) < err(guess) { guess + 1 } else { guess };
        let mut p = Self::from_half_size(half, n, m)?;
        p.requested_gamma = gamma;
        Ok(p)
    }

    /// Builds the rung whose lattice has half-size `half_size`, with γ = ε^{1/n}.
    pub fn from_half_size(half_size: usize, n: usize, m: usize) -> Result<Self> {
        check_nm(n, m)?;
        if half_size == 0 {
            return Err(Error::InvalidParameter("half_size must be at least 1".into()));
        }
        let epsilon = 2.0 / (2 * half_size + 1) as f64;
        let gamma = epsilon.powf(1.0 / n as f64);
        Ok(Self {
            n,
            m,
            requested_gamma: gamma,
            gamma,
            half_size,
            epsilon,
            alpha: gamma.powi(2 * n as i32 - 2),
            delta: gamma,
            beta: 1.0,
            nu: 0.1,
            threshold: f64::INFINITY,
        })
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    pub fn with_stopping(mut self, nu: f64, threshold: f64) -> Self {
        self.nu = nu;
        self.threshold = threshold;
        self
    }

    pub fn side(&self) -> usize {
        2 * self.half_size + 1
    }

    pub fn sites(&self) -> usize {
        self.side() * self.side()
    }

    /// `ε²/(δ²α)`, equal to one for every snapped rung.
    pub fn noise_prefactor(&self) -> f64 {
        self.epsilon * self.epsilon / (self.delta * self.delta * self.alpha)
    }
}

fn check_nm(n: usize, m: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n must be at least 2, got {n}")));
    }
    if m == 0 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    Ok(())
}
