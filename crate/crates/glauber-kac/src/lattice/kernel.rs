use super::{signed_index, wrap_index, Field, Fft2};
use crate::error::{Error, Result};
use crate::params::ModelParams;
use rustfft::num_complex::Complex64;

/// Radial profile `𝔎` of the Kac interaction, supported in `B(0, support_radius)`.
pub trait KacProfile: Send + Sync {
    fn value(&self, r: f64) -> f64;
    fn support_radius(&self) -> f64 {
        3.0
    }
}

/// `𝔎(x) = c·u²(1-u)³(1 + 2u/3)` with `u = |x|²/9`, `c = 140/(27π)`.
///
/// This is C² with values in `[0,1]`, vanishes outside `B(0,3)`, and satisfies
/// `∫𝔎 = 1` and `∫𝔎|x|² = 4` exactly.
#[derive(Debug, Clone, Copy, Default)]
pub struct RingProfile;

impl KacProfile for RingProfile {
    fn value(&self, r: f64) -> f64 {
        let u = r * r / 9.0;
        if u >= 1.0 {
            return 0.0;
        }
        let c = 140.0 / (27.0 * std::f64::consts::PI);
        c * u * u * (1.0 - u).powi(3) * (1.0 + 2.0 * u / 3.0)
    }
}

/// One row of nonzero kernel weights: offsets `(dy, dx_lo + i)` carry `weights[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StencilRow {
    pub dy: i64,
    pub dx_lo: i64,
    pub weights: Vec<f64>,
}

/// Discrete kernel `κ_γ(k) = 𝔎(γk) / Σ_{k'≠0} 𝔎(γk')` on the box `Λ_N`, with `κ_γ(0) = 0`.
#[derive(Debug, Clone)]
pub struct Kernel {
    pub side: usize,
    pub gamma: f64,
    pub epsilon: f64,
    /// `κ_γ` in FFT order.
    pub weights: Vec<f64>,
    pub stencil: Vec<StencilRow>,
    /// `K̂_γ(ω) = Σ_k κ_γ(k) e^{-iπεk·ω}`, real by symmetry.
    pub spectrum: Vec<f64>,
    /// `λ(ω) = ε^{-2}γ²(K̂_γ(ω) - 1)`.
    pub lambda: Vec<f64>,
}

pub fn build_kac_kernel(params: &ModelParams, profile: &dyn KacProfile) -> Result<Kernel> {
    let side = params.side();
    let n = params.half_size as i64;
    let gamma = params.gamma;
    let mut weights = vec![0.0; side * side];
    let mut total = 0.0;
    for k1 in -n..=n {
        for k2 in -n..=n {
            if k1 == 0 && k2 == 0 {
                continue;
            }
            let r = gamma * ((k1 * k1 + k2 * k2) as f64).sqrt();
            let v = profile.value(r);
            weights[wrap_index(k1, side) * side + wrap_index(k2, side)] = v;
            total += v;
        }
    }
    if !(total > 0.0) {
        return Err(Error::EmptyKernel { gamma, half_size: params.half_size });
    }
    weights.iter_mut().for_each(|w| *w /= total);

    let mut stencil = Vec::new();
    for dy in -n..=n {
        let row: Vec<(i64, f64)> = (-n..=n)
            .map(|dx| (dx, weights[wrap_index(dy, side) * side + wrap_index(dx, side)]))
            .collect();
        let lo = row.iter().position(|&(_, w)| w != 0.0);
        let hi = row.iter().rposition(|&(_, w)| w != 0.0);
        if let (Some(lo), Some(hi)) = (lo, hi) {
            stencil.push(StencilRow {
                dy,
                dx_lo: row[lo].0,
                weights: row[lo..=hi].iter().map(|&(_, w)| w).collect(),
            });
        }
    }

    let mut fft = Fft2::new(side);
    let mut buf: Vec<Complex64> = weights.iter().map(|&w| Complex64::new(w, 0.0)).collect();
    fft.forward(&mut buf);
    let spectrum: Vec<f64> = buf.iter().map(|z| z.re).collect();
    let scale = gamma * gamma / (params.epsilon * params.epsilon);
    let lambda = spectrum.iter().map(|&k| scale * (k - 1.0)).collect();
    Ok(Kernel { side, gamma, epsilon: params.epsilon, weights, stencil, spectrum, lambda })
}

impl Kernel {
    pub fn half_size(&self) -> usize {
        (self.side - 1) / 2
    }

    pub fn weight(&self, k1: i64, k2: i64) -> f64 {
        self.weights[wrap_index(k1, self.side) * self.side + wrap_index(k2, self.side)]
    }

    pub fn support_len(&self) -> usize {
        self.stencil.iter().map(|r| r.weights.len()).sum()
    }

    /// `Σ_k κ(k) |γk|²`.
    pub fn second_moment(&self) -> f64 {
        let s = self.side;
        let mut acc = 0.0;
        for p1 in 0..s {
            for p2 in 0..s {
                let k1 = signed_index(p1, s) as f64;
                let k2 = signed_index(p2, s) as f64;
                acc += self.weights[p1 * s + p2] * (k1 * k1 + k2 * k2);
            }
        }
        acc * self.gamma * self.gamma
    }

    /// `P^γ_t` multiplier `e^{t λ(ω)}`.
    pub fn semigroup_multiplier(&self, t: f64) -> Vec<f64> {
        self.lambda.iter().map(|&l| (t * l).exp()).collect()
    }

    /// `κ ∗ X` on the lattice, computed spectrally.
    pub fn convolve(&self, x: &Field, fft: &mut Fft2) -> Field {
        let mut s = x.to_spectral(fft);
        s.multiply(&self.spectrum);
        s.to_real(fft)
    }

    /// Calls `f(site', κ(site' - site))` for every stencil neighbor of `site`.
    pub fn for_each_neighbor(&self, site: usize, mut f: impl FnMut(usize, f64)) {
        let l = self.side;
        let (p1, p2) = (site / l, site % l);
        for row in &self.stencil {
            let q1 = wrap_index(p1 as i64 + row.dy, l);
            let start = wrap_index(p2 as i64 + row.dx_lo, l);
            let base = q1 * l;
            for (i, &w) in row.weights.iter().enumerate() {
                let mut q2 = start + i;
                if q2 >= l {
                    q2 -= l;
                }
                f(base + q2, w);
            }
        }
    }

    /// `κ ∗ X` at a single site from the stencil, for reference.
    pub fn convolve_at(&self, x: &Field, c: usize, p1: usize, p2: usize) -> f64 {
        let s = self.side as i64;
        let plane = x.plane();
        let mut acc = 0.0;
        for row in &self.stencil {
            let q1 = (p1 as i64 + row.dy).rem_euclid(s) as usize;
            for (i, w) in row.weights.iter().enumerate() {
                let q2 = (p2 as i64 + row.dx_lo + i as i64).rem_euclid(s) as usize;
                acc += w * x.data[c * plane + q1 * self.side + q2];
            }
        }
        acc
    }
}
