//! Lattice renormalization constants from the kernel spectrum.
//!
//! All sums run over every lattice mode; the zero mode contributes `s/2`.

use crate::lattice::Kernel;

/// `|K̂|² (e^{-2(t-s)μ} - e^{-2tμ}) / (4μ)` with `μ = -λ ≥ 0`, or `s/2` when `μ = 0`.
fn mode_term(zero_mode: bool, khat: f64, lambda: f64, t: f64, s: f64) -> f64 {
    if zero_mode {
        return 0.5 * s;
    }
    let mu = -lambda;
    khat * khat * ((-2.0 * (t - s) * mu).exp() - (-2.0 * t * mu).exp()) / (4.0 * mu)
}

/// `C_γ = Σ_{ω≠0} |K̂|²/(4 ε^{-2}γ²(1 - K̂))`.
pub fn c_gamma(kernel: &Kernel) -> f64 {
    kernel
        .spectrum
        .iter()
        .zip(&kernel.lambda)
        .skip(1)
        .map(|(&k, &l)| k * k / (-4.0 * l))
        .sum()
}

/// `C_γ(t) = 𝔠_{γ,t}(t)`.
pub fn c_gamma_t(kernel: &Kernel, t: f64) -> f64 {
    c_gamma_ts(kernel, t, t)
}

/// `𝔠_{γ,t}(s) = 2∫₀ˢ ‖P^γ_{t-r} K_γ‖² dr`.
pub fn c_gamma_ts(kernel: &Kernel, t: f64, s: f64) -> f64 {
    kernel
        .spectrum
        .iter()
        .zip(&kernel.lambda)
        .enumerate()
        .map(|(i, (&k, &l))| mode_term(i == 0, k, l, t, s))
        .sum()
}

/// `A(t) = C_γ - C_γ(t)`.
pub fn shift_a(kernel: &Kernel, t: f64) -> f64 {
    c_gamma(kernel) - c_gamma_t(kernel, t)
}

/// Constants for one rung, with `C_γ(t)` tabulated on a geometric time grid.
#[derive(Debug, Clone)]
pub struct RenormConstants {
    pub c_gamma: f64,
    times: Vec<f64>,
    values: Vec<f64>,
    t_min: f64,
    zero_mode_slope: f64,
}

impl RenormConstants {
    /// Tabulates `C_γ(t)` on `[t_min, t_max]`, doubling density until midpoints agree to `1e-8`.
    pub fn new(kernel: &Kernel, t_min: f64, t_max: f64) -> Self {
        let c = c_gamma(kernel);
        let mut points = 16usize;
        loop {
            let grid: Vec<f64> = (0..=points)
                .map(|i| t_min * (t_max / t_min).powf(i as f64 / points as f64))
                .collect();
            let vals: Vec<f64> = grid.iter().map(|&t| c_gamma_t(kernel, t)).collect();
            let table = Self { c_gamma: c, times: grid.clone(), values: vals, t_min, zero_mode_slope: 0.5 };
            let worst = grid
                .windows(2)
                .map(|w| {
                    let mid = (w[0] * w[1]).sqrt();
                    (table.c_gamma_t(mid) - c_gamma_t(kernel, mid)).abs()
                })
                .fold(0.0, f64::max);
            if worst <= 1e-8 || points >= 1 << 16 {
                return table;
            }
            points *= 2;
        }
    }

    /// Interpolated `C_γ(t)`; cubic in `log t` between grid points, linear below `t_min`.
    pub fn c_gamma_t(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if t <= self.t_min {
            return self.values[0] * t / self.t_min;
        }
        let last = self.times.len() - 1;
        if t >= self.times[last] {
            return self.values[last] + self.zero_mode_slope * (t - self.times[last]);
        }
        let u = (t / self.t_min).ln() / (self.times[last] / self.t_min).ln() * last as f64;
        let i = (u.floor() as usize).min(last - 1);
        let f = u - i as f64;
        let idx = |j: isize| -> f64 { self.values[j.clamp(0, last as isize) as usize] };
        let (p0, p1, p2, p3) = (idx(i as isize - 1), idx(i as isize), idx(i as isize + 1), idx(i as isize + 2));
        let (m1, m2) = if i == 0 { (p2 - p1, 0.5 * (p3 - p1)) } else if i + 1 == last { (0.5 * (p2 - p0), p2 - p1) } else { (0.5 * (p2 - p0), 0.5 * (p3 - p1)) };
        let f2 = f * f;
        let f3 = f2 * f;
        (2.0 * f3 - 3.0 * f2 + 1.0) * p1 + (f3 - 2.0 * f2 + f) * m1 + (-2.0 * f3 + 3.0 * f2) * p2 + (f3 - f2) * m2
    }

    pub fn shift_a(&self, t: f64) -> f64 {
        self.c_gamma - self.c_gamma_t(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_kac_kernel, RingProfile};
    use crate::params::ModelParams;

    fn kernel(g: f64) -> Kernel {
        build_kac_kernel(&ModelParams::new(g, 2, 1).unwrap(), &RingProfile).unwrap()
    }

    #[test]
    fn running_constant_approaches_stationary_one() {
        let k = kernel(0.2);
        let c = c_gamma(&k);
        let ct = c_gamma_t(&k, 5.0);
        assert!((ct - 2.5 - c).abs() < 1e-6);
        assert!(c_gamma_t(&k, 0.0).abs() < 1e-15);
    }

    #[test]
    fn shift_limits() {
        let k = kernel(0.2);
        let c = c_gamma(&k);
        assert!((shift_a(&k, 0.0) - c).abs() < 1e-14);
        let t = 40.0;
        assert!((shift_a(&k, t) + 0.5 * t).abs() < 1e-9);
    }

    #[test]
    fn endpoint_identity() {
        let k = kernel(0.3);
        for &t in &[0.05, 0.3, 1.0] {
            assert!((c_gamma_ts(&k, t, t) - c_gamma_t(&k, t)).abs() < 1e-14);
            assert!(c_gamma_ts(&k, t, 0.0).abs() < 1e-15);
        }
    }

    #[test]
    fn table_accuracy() {
        let k = kernel(0.25);
        let table = RenormConstants::new(&k, 1e-4, 2.0);
        for i in 0..200 {
            let t = 1e-4 * (2.0f64 / 1e-4).powf(i as f64 / 199.0 * 0.999 + 0.0005);
            assert!((table.c_gamma_t(t) - c_gamma_t(&k, t)).abs() < 5e-8, "t = {t}");
        }
    }

    #[test]
    fn logarithmic_growth() {
        let r: Vec<f64> = [0.4, 0.2, 0.1].iter().map(|&g| c_gamma(&kernel(g)) / (1.0f64 / g).ln()).collect();
        for v in &r {
            assert!(*v > 0.0 && *v < 0.25, "{r:?}");
        }
        assert!(r.windows(2).all(|w| w[1] > w[0]), "{r:?}");
    }
}
