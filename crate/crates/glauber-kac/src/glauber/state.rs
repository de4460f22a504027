use crate::lattice::{Fft2, Field, Kernel};
use crate::measures::ReferenceMeasure;
use crate::params::ModelParams;
use rand::Rng;

/// Spins `σ(x) ∈ ℝ^m` and the cached local mean field `h = κ ∗ σ`, both site-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinConfiguration {
    pub side: usize,
    pub m: usize,
    pub spins: Vec<f64>,
    pub field: Vec<f64>,
}

impl SpinConfiguration {
    /// Builds the configuration and computes `h` spectrally.
    pub fn from_spins(side: usize, m: usize, spins: Vec<f64>, kernel: &Kernel) -> Self {
        assert_eq!(spins.len(), side * side * m);
        let mut s = Self { side, m, spins, field: vec![0.0; side * side * m] };
        s.refresh_field(kernel);
        s
    }

    pub fn constant(side: usize, spin: &[f64], kernel: &Kernel) -> Self {
        let spins = (0..side * side).flat_map(|_| spin.iter().cloned()).collect();
        Self::from_spins(side, spin.len(), spins, kernel)
    }

    /// Independent spins drawn from the reference measure.
    pub fn iid<R: Rng + ?Sized>(side: usize, measure: &ReferenceMeasure, kernel: &Kernel, rng: &mut R) -> Self {
        let m = measure.m;
        let zero = vec![0.0; m];
        let mut spins = vec![0.0; side * side * m];
        for chunk in spins.chunks_mut(m) {
            measure.sample_tilted(0.0, &zero, rng, chunk);
        }
        Self::from_spins(side, m, spins, kernel)
    }

    pub fn sites(&self) -> usize {
        self.side * self.side
    }

    pub fn spin(&self, site: usize) -> &[f64] {
        &self.spins[site * self.m..(site + 1) * self.m]
    }

    pub fn local_field(&self, site: usize) -> &[f64] {
        &self.field[site * self.m..(site + 1) * self.m]
    }

    pub fn refresh_field(&mut self, kernel: &Kernel) {
        let sp = self.spin_field();
        let mut fft = Fft2::new(self.side);
        let h = kernel.convolve(&sp, &mut fft);
        let n = self.sites();
        for c in 0..self.m {
            for s in 0..n {
                self.field[s * self.m + c] = h.data[c * n + s];
            }
        }
    }

    /// Largest deviation between the cached `h` and a fresh convolution.
    pub fn field_drift(&self, kernel: &Kernel) -> f64 {
        let mut fresh = self.clone();
        fresh.refresh_field(kernel);
        fresh.field.iter().zip(&self.field).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub fn spin_field(&self) -> Field {
        self.site_major_to_field(&self.spins)
    }

    /// `X_γ = δ^{-1} h` as a component-major field.
    pub fn fluctuation_field(&self, params: &ModelParams) -> Field {
        let mut f = self.site_major_to_field(&self.field);
        f.scale(1.0 / params.delta);
        f
    }

    fn site_major_to_field(&self, v: &[f64]) -> Field {
        let n = self.sites();
        let mut f = Field::zeros(self.side, self.m);
        for s in 0..n {
            for c in 0..self.m {
                f.data[c * n + s] = v[s * self.m + c];
            }
        }
        f
    }

    /// Sets `σ(site) = new` and updates `h` on the kernel stencil.
    #[inline]
    pub fn set_spin(&mut self, site: usize, new: &[f64], kernel: &Kernel) {
        let m = self.m;
        let l = self.side;
        let mut diff = [0.0f64; 8];
        let diff: &mut [f64] = if m <= 8 { &mut diff[..m] } else { return self.set_spin_wide(site, new, kernel) };
        let mut any = false;
        for c in 0..m {
            diff[c] = new[c] - self.spins[site * m + c];
            any |= diff[c] != 0.0;
        }
        if !any {
            return;
        }
        self.spins[site * m..(site + 1) * m].copy_from_slice(new);
        let (p1, p2) = (site / l, site % l);
        for row in &kernel.stencil {
            let q1 = (p1 as i64 + row.dy).rem_euclid(l as i64) as usize;
            let start = (p2 as i64 + row.dx_lo).rem_euclid(l as i64) as usize;
            let len = row.weights.len();
            let first = len.min(l - start);
            let base = q1 * l;
            if m == 1 {
                let d = diff[0];
                let seg = &mut self.field[base + start..base + start + first];
                for (h, w) in seg.iter_mut().zip(&row.weights[..first]) {
                    *h += w * d;
                }
                if first < len {
                    let seg = &mut self.field[base..base + len - first];
                    for (h, w) in seg.iter_mut().zip(&row.weights[first..]) {
                        *h += w * d;
                    }
                }
            } else {
                for (i, &w) in row.weights.iter().enumerate() {
                    let q2 = if i < first { start + i } else { i - first };
                    let off = (base + q2) * m;
                    for c in 0..m {
                        self.field[off + c] += w * diff[c];
                    }
                }
            }
        }
    }

    fn set_spin_wide(&mut self, site: usize, new: &[f64], kernel: &Kernel) {
        let m = self.m;
        let diff: Vec<f64> = (0..m).map(|c| new[c] - self.spins[site * m + c]).collect();
        self.spins[site * m..(site + 1) * m].copy_from_slice(new);
        kernel.for_each_neighbor(site, |y, w| {
            for c in 0..m {
                self.field[y * m + c] += w * diff[c];
            }
        });
    }
}
