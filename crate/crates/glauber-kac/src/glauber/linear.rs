use crate::lattice::{coordinates, wrap_index, Kernel, SpectralField};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestShape {
    Cos,
    Sin,
}

/// Real Fourier test function `φ(x) = cos(πω·x)` or `sin(πω·x)` acting on one component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestMode {
    pub component: usize,
    pub omega: (i64, i64),
    pub shape: TestShape,
}

impl TestMode {
    pub fn cos(component: usize, w1: i64, w2: i64) -> Self {
        Self { component, omega: (w1, w2), shape: TestShape::Cos }
    }

    pub fn sin(component: usize, w1: i64, w2: i64) -> Self {
        Self { component, omega: (w1, w2), shape: TestShape::Sin }
    }

    pub fn value(&self, x1: f64, x2: f64) -> f64 {
        let a = PI * (self.omega.0 as f64 * x1 + self.omega.1 as f64 * x2);
        match self.shape {
            TestShape::Cos => a.cos(),
            TestShape::Sin => a.sin(),
        }
    }

    /// Samples on the lattice of the given side, row-major.
    pub fn samples(&self, side: usize) -> Vec<f64> {
        let mut v = vec![0.0; side * side];
        for p1 in 0..side {
            for p2 in 0..side {
                let (x1, x2) = coordinates(p1, p2, side);
                v[p1 * side + p2] = self.value(x1, x2);
            }
        }
        v
    }

    /// Index of `ω` in FFT order.
    pub fn index(&self, side: usize) -> usize {
        wrap_index(self.omega.0, side) * side + wrap_index(self.omega.1, side)
    }

    /// `⟨X, φ⟩` read off the spectrum; zero if `ω` is not resolved on the grid.
    pub fn pair(&self, spec: &SpectralField) -> f64 {
        let side = spec.side;
        if 2 * self.omega.0.unsigned_abs() as usize >= side || 2 * self.omega.1.unsigned_abs() as usize >= side {
            return 0.0;
        }
        let v = spec.component(self.component)[self.index(side)];
        match self.shape {
            TestShape::Cos => v.re,
            TestShape::Sin => -v.im,
        }
    }

    /// `‖φ‖²_{L²(T²)}`.
    pub fn norm_sq(&self) -> f64 {
        match (self.omega == (0, 0), self.shape) {
            (true, TestShape::Cos) => 4.0,
            (true, TestShape::Sin) => 0.0,
            _ => 2.0,
        }
    }
}

/// `2 ∫_0^t ‖K̂ P^γ_{t-s} φ‖² ds`, the variance of `⟨Z_γ(t), φ⟩` when the local jump covariance is `2 I`.
pub fn linear_variance(kernel: &Kernel, mode: &TestMode, t: f64) -> f64 {
    let i = mode.index(kernel.side);
    let k = kernel.spectrum[i];
    let l = kernel.lambda[i];
    2.0 * k * k * mode.norm_sq() * time_factor(2.0 * l, t)
}

/// `2 ∫_0^t ‖P_{t-s} φ‖² ds` for the continuum heat semigroup `e^{tΔ}`.
pub fn linear_variance_continuum(mode: &TestMode, t: f64) -> f64 {
    let w2 = (mode.omega.0 * mode.omega.0 + mode.omega.1 * mode.omega.1) as f64;
    2.0 * mode.norm_sq() * time_factor(-2.0 * PI * PI * w2, t)
}

/// `∫_0^t e^{μ s} ds`.
fn time_factor(mu: f64, t: f64) -> f64 {
    if mu == 0.0 {
        t
    } else {
        (mu * t).exp_m1() / mu
    }
}
