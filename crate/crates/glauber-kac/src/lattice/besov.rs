//! Littlewood–Paley blocks built from a fixed dyadic window.
//!
//! `χ(r) = 1` for `r ≤ 1/2`, `χ(r) = 1 - S(2r-1)` on `(1/2, 1)`, `χ(r) = 0` for `r ≥ 1`,
//! with the C¹ quartic spline step `S(u) = 8u⁴` on `[0,1/2]` and `1 - 8(1-u)⁴` on `[1/2,1]`.
//! Block `-1` is `χ(|ω|)` and block `k ≥ 0` is `χ(|ω|/2^{k+1}) - χ(|ω|/2^k)`.
//! A mode with `|ω| = 2^k` therefore sits entirely in block `k`.

use super::{freq_norm_sq, Field, Fft2, SpectralField};

pub fn window_step(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else if u <= 0.5 {
        8.0 * u.powi(4)
    } else {
        1.0 - 8.0 * (1.0 - u).powi(4)
    }
}

pub fn cutoff_window(r: f64) -> f64 {
    if r <= 0.5 {
        1.0
    } else if r >= 1.0 {
        0.0
    } else {
        1.0 - window_step(2.0 * r - 1.0)
    }
}

/// Multiplier of block `k ≥ -1` at frequency radius `r`.
pub fn block_weight(k: i32, r: f64) -> f64 {
    if k < 0 {
        cutoff_window(r)
    } else {
        let s = (2.0f64).powi(k);
        cutoff_window(r / (2.0 * s)) - cutoff_window(r / s)
    }
}

/// Number of nonempty blocks (including block -1) for a grid of side `side`.
pub fn block_count(side: usize) -> usize {
    let n = side.saturating_sub(1) / 2;
    let rmax = (2.0f64).sqrt() * n as f64;
    if rmax < 1.0 {
        return 1;
    }
    (rmax.log2().ceil() as usize) + 2
}

pub fn littlewood_paley_block(spec: &SpectralField, k: i32) -> SpectralField {
    let mut out = spec.clone();
    let side = spec.side;
    let mult: Vec<f64> = (0..side * side)
        .map(|i| block_weight(k, freq_norm_sq(i / side, i % side, side).sqrt()))
        .collect();
    out.multiply(&mult);
    out
}

/// Sum of blocks `-1 ..= k_top`, i.e. the multiplier `χ(|ω|/2^{k_top+1})`.
pub fn low_pass_blocks(spec: &SpectralField, k_top: i32) -> SpectralField {
    let mut out = spec.clone();
    let side = spec.side;
    let scale = (2.0f64).powi(k_top + 1);
    let mult: Vec<f64> = (0..side * side)
        .map(|i| cutoff_window(freq_norm_sq(i / side, i % side, side).sqrt() / scale))
        .collect();
    out.multiply(&mult);
    out
}

/// Evaluates block sup-norms on a grid refined by an integer factor.
pub struct BesovEvaluator {
    side: usize,
    oversample: usize,
    fft: Fft2,
    weights: Vec<Vec<f64>>,
}

impl BesovEvaluator {
    pub fn new(side: usize, oversample: usize) -> Self {
        let oversample = oversample.max(1);
        let blocks = block_count(side);
        let weights = (0..blocks)
            .map(|b| {
                (0..side * side)
                    .map(|i| block_weight(b as i32 - 1, freq_norm_sq(i / side, i % side, side).sqrt()))
                    .collect()
            })
            .collect();
        Self { side, oversample, fft: Fft2::new(side * oversample), weights }
    }

    /// `sup_k 2^{s k} ‖δ_k X‖_{L∞}` with the pointwise Euclidean norm over components.
    pub fn norm(&mut self, spec: &SpectralField, s: f64) -> f64 {
        assert_eq!(spec.side, self.side);
        let mut best: f64 = 0.0;
        for b in 0..self.weights.len() {
            let k = b as i32 - 1;
            let mut blk = spec.clone();
            blk.multiply(&self.weights[b]);
            let fine = if self.oversample > 1 { blk.resize(self.side * self.oversample) } else { blk };
            let sup = fine.to_real(&mut self.fft).sup_norm();
            best = best.max((2.0f64).powf(s * k as f64) * sup);
        }
        best
    }
}

pub fn besov_norm_spectral(spec: &SpectralField, s: f64, oversample: usize) -> f64 {
    BesovEvaluator::new(spec.side, oversample).norm(spec, s)
}

pub fn besov_norm(field: &Field, s: f64, oversample: usize) -> f64 {
    let mut fft = Fft2::new(field.side);
    besov_norm_spectral(&field.to_spectral(&mut fft), s, oversample)
}

/// Trigonometric interpolation of a lattice field onto a grid of side `new_side`.
pub fn extend(field: &Field, new_side: usize) -> Field {
    let mut fft = Fft2::new(field.side);
    let spec = field.to_spectral(&mut fft).resize(new_side);
    spec.to_real(&mut Fft2::new(new_side))
}

/// Splits into `(low, high)` where `low` keeps the blocks with `2^k < threshold`.
pub fn split_high_low(field: &Field, threshold: f64) -> (Field, Field) {
    let mut fft = Fft2::new(field.side);
    let spec = field.to_spectral(&mut fft);
    let mut k_top = -1;
    while (2.0f64).powi(k_top + 1) < threshold {
        k_top += 1;
    }
    let low = low_pass_blocks(&spec, k_top).to_real(&mut fft);
    let mut high = field.clone();
    high.axpy(-1.0, &low);
    (low, high)
}
