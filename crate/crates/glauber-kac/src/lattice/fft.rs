use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

/// Unnormalized two-dimensional FFT on a square grid.
pub struct Fft2 {
    side: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    tmp: Vec<Complex64>,
}

impl Fft2 {
    pub fn new(side: usize) -> Self {
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(side);
        let inv = planner.plan_fft_inverse(side);
        let len = fwd.get_inplace_scratch_len().max(inv.get_inplace_scratch_len());
        Self {
            side,
            fwd,
            inv,
            scratch: vec![Complex64::new(0.0, 0.0); len],
            tmp: vec![Complex64::new(0.0, 0.0); side * side],
        }
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn forward(&mut self, buf: &mut [Complex64]) {
        let plan = self.fwd.clone();
        self.apply(&*plan, buf);
    }

    pub fn inverse(&mut self, buf: &mut [Complex64]) {
        let plan = self.inv.clone();
        self.apply(&*plan, buf);
    }

    fn apply(&mut self, plan: &dyn Fft<f64>, buf: &mut [Complex64]) {
        let n = self.side;
        assert_eq!(buf.len(), n * n);
        plan.process_with_scratch(buf, &mut self.scratch);
        transpose(buf, &mut self.tmp, n);
        plan.process_with_scratch(&mut self.tmp, &mut self.scratch);
        transpose(&self.tmp, buf, n);
    }
}

fn transpose(src: &[Complex64], dst: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in 0..n {
            dst[j * n + i] = src[i * n + j];
        }
    }
}
