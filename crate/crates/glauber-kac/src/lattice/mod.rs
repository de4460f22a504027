//! Discrete tori, fields, Fourier transforms, Kac kernels and Besov norms.
//!
//! A grid of side `L` carries the points `x = (2/L)·k` with `k` the signed
//! representative of an index `p ∈ 0..L` (see [`signed_index`]). Arrays are stored
//! in this FFT order, row-major in `(p₁, p₂)`, one block of `L²` values per component.
//!
//! The Fourier convention is `X̂(ω) = Σ_x h² X(x) e^{-iπ x·ω}` with `h = 2/L`, and
//! `X(x) = ¼ Σ_ω X̂(ω) e^{iπ x·ω}`.

mod besov;
mod fft;
mod field;
mod kernel;
mod semigroup;

pub use besov::{
    besov_norm, besov_norm_spectral, BesovEvaluator, block_count, block_weight, cutoff_window, extend, littlewood_paley_block,
    low_pass_blocks, split_high_low, window_step,
};
pub use fft::Fft2;
pub use field::{Field, SpectralField};
pub use kernel::{build_kac_kernel, KacProfile, Kernel, RingProfile, StencilRow};
pub use semigroup::{heat_semigroup, kernel_bounds, kernel_energy, laplacian, sup_semigroup_kernel, KernelBounds};

/// Signed representative of index `p` on a cycle of length `len`: `p` for `p < len/2` (rounded up), else `p - len`.
pub fn signed_index(p: usize, len: usize) -> i64 {
    if 2 * p < len {
        p as i64
    } else {
        p as i64 - len as i64
    }
}

/// Inverse of [`signed_index`].
pub fn wrap_index(k: i64, len: usize) -> usize {
    k.rem_euclid(len as i64) as usize
}

/// `|ω|²` for the spectral index pair.
pub fn freq_norm_sq(p1: usize, p2: usize, len: usize) -> f64 {
    let a = signed_index(p1, len) as f64;
    let b = signed_index(p2, len) as f64;
    a * a + b * b
}

/// Physical coordinates of site `(p1, p2)` on a grid of side `len`.
pub fn coordinates(p1: usize, p2: usize, len: usize) -> (f64, f64) {
    let h = 2.0 / len as f64;
    (h * signed_index(p1, len) as f64, h * signed_index(p2, len) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trip() {
        for len in [5usize, 6, 13, 72] {
            for p in 0..len {
                assert_eq!(wrap_index(signed_index(p, len), len), p);
            }
        }
        assert_eq!(signed_index(2, 5), 2);
        assert_eq!(signed_index(3, 5), -2);
        assert_eq!(signed_index(3, 6), -3);
    }
}
