//! The discrete Laplacian `Δ_γ = ε^{-2}γ²(K_γ ∗ · − ·)`, its semigroup `P^γ_t`, and the
//! empirical constants in the Fourier estimates for `K̂_γ` and `P^γ_t`.

use super::{freq_norm_sq, signed_index, Fft2, Field, Kernel};
use rustfft::num_complex::Complex64;
use std::f64::consts::PI;

pub fn laplacian(kernel: &Kernel, x: &Field, fft: &mut Fft2) -> Field {
    let mut s = x.to_spectral(fft);
    s.multiply(&kernel.lambda);
    s.to_real(fft)
}

/// `P^γ_t X`, with `t` in macroscopic time.
pub fn heat_semigroup(kernel: &Kernel, t: f64, x: &Field, fft: &mut Fft2) -> Field {
    let mut s = x.to_spectral(fft);
    s.multiply(&kernel.semigroup_multiplier(t));
    s.to_real(fft)
}

/// `∫₀ᵗ Σ_{ω≠0} |e^{(t-s)λ(ω)} K̂_γ(ω)|² ds`.
pub fn kernel_energy(kernel: &Kernel, t: f64) -> f64 {
    kernel
        .spectrum
        .iter()
        .zip(&kernel.lambda)
        .skip(1)
        .map(|(&k, &l)| k * k * -(2.0 * l * t).exp_m1() / (-2.0 * l))
        .sum()
}

/// `sup_x |P^γ_t K_γ(x)|` for the macroscopic kernel `K_γ = ε^{-2} κ_γ`.
pub fn sup_semigroup_kernel(kernel: &Kernel, t: f64, fft: &mut Fft2) -> f64 {
    let mut buf: Vec<Complex64> =
        kernel.spectrum.iter().zip(&kernel.lambda).map(|(&k, &l)| Complex64::new(k * (t * l).exp(), 0.0)).collect();
    fft.inverse(&mut buf);
    buf.iter().map(|z| 0.25 * z.re.abs()).fold(0.0, f64::max)
}

/// Smallest constants for which the Fourier estimates on `K̂_γ` and its first two derivatives
/// hold on this lattice.
///
/// With `r = εγ^{-1}|ω|`: on `r ≤ 1`, `|∂K̂| ≤ C ε²γ^{-2}|ω|` and `|∂²K̂| ≤ C ε²γ^{-2}`; on `r ≥ 1`,
/// `|K̂| ≤ C r^{-2}`, `|∂K̂| ≤ C εγ^{-1} r^{-2}` and `|∂²K̂| ≤ C ε²γ^{-2} r^{-2}`. `coercivity` is
/// the largest `c` with `1 - K̂ ≥ c (r² ∧ 1)` over all nonzero modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelBounds {
    pub max_abs: f64,
    pub low_d1: f64,
    pub low_d2: f64,
    pub high_d0: f64,
    pub high_d1: f64,
    pub high_d2: f64,
    pub coercivity: f64,
}

pub fn kernel_bounds(kernel: &Kernel) -> KernelBounds {
    let side = kernel.side;
    let eps = kernel.epsilon;
    let scale = eps / kernel.gamma;
    let mut fft = Fft2::new(side);
    let mut moment = |pow: i32| -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = (0..side * side)
            .map(|i| {
                let k1 = signed_index(i / side, side) as f64;
                Complex64::new(kernel.weights[i] * k1.powi(pow), 0.0)
            })
            .collect();
        fft.forward(&mut buf);
        buf
    };
    let d1: Vec<f64> = moment(1).iter().map(|z| PI * eps * z.im).collect();
    let d2: Vec<f64> = moment(2).iter().map(|z| -(PI * eps).powi(2) * z.re).collect();
    let mut b = KernelBounds {
        max_abs: 0.0,
        low_d1: 0.0,
        low_d2: 0.0,
        high_d0: 0.0,
        high_d1: 0.0,
        high_d2: 0.0,
        coercivity: f64::INFINITY,
    };
    for i in 0..side * side {
        let k = kernel.spectrum[i];
        b.max_abs = b.max_abs.max(k.abs());
        if i == 0 {
            continue;
        }
        let w = freq_norm_sq(i / side, i % side, side).sqrt();
        let r = scale * w;
        // Derivatives along the first axis; the kernel is symmetric under swapping axes.
        let swapped = (i % side) * side + i / side;
        let (g1, g2) = (d1[i].abs().max(d1[swapped].abs()), d2[i].abs().max(d2[swapped].abs()));
        if r <= 1.0 {
            b.low_d1 = b.low_d1.max(g1 / (scale * scale * w));
            b.low_d2 = b.low_d2.max(g2 / (scale * scale));
        }
        if r >= 1.0 {
            b.high_d0 = b.high_d0.max(k.abs() * r * r);
            b.high_d1 = b.high_d1.max(g1 * r * r / scale);
            b.high_d2 = b.high_d2.max(g2 * r * r / (scale * scale));
        }
        b.coercivity = b.coercivity.min((1.0 - k) / (r * r).min(1.0));
    }
    b
}
