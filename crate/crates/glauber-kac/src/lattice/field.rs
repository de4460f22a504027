use super::fft::Fft2;
use rustfft::num_complex::Complex64;

/// Real field on a grid of side `side` with `m` components.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub side: usize,
    pub m: usize,
    pub data: Vec<f64>,
}

/// Fourier coefficients of a [`Field`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    pub side: usize,
    pub m: usize,
    pub data: Vec<Complex64>,
}

impl Field {
    pub fn zeros(side: usize, m: usize) -> Self {
        Self { side, m, data: vec![0.0; side * side * m] }
    }

    pub fn from_fn(side: usize, m: usize, f: impl Fn(usize, f64, f64) -> f64) -> Self {
        let mut out = Self::zeros(side, m);
        for c in 0..m {
            for p1 in 0..side {
                for p2 in 0..side {
                    let (x1, x2) = super::coordinates(p1, p2, side);
                    out.data[c * side * side + p1 * side + p2] = f(c, x1, x2);
                }
            }
        }
        out
    }

    pub fn plane(&self) -> usize {
        self.side * self.side
    }

    pub fn component(&self, c: usize) -> &[f64] {
        let n = self.plane();
        &self.data[c * n..(c + 1) * n]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [f64] {
        let n = self.plane();
        &mut self.data[c * n..(c + 1) * n]
    }

    pub fn spacing(&self) -> f64 {
        2.0 / self.side as f64
    }

    /// `⟨X, φ⟩ = Σ_x h² X(x)·φ(x)`.
    pub fn pair(&self, other: &Field) -> f64 {
        assert_eq!(self.data.len(), other.data.len());
        let h2 = self.spacing().powi(2);
        h2 * self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum::<f64>()
    }

    pub fn sup_norm(&self) -> f64 {
        let n = self.plane();
        (0..n)
            .map(|s| (0..self.m).map(|c| self.data[c * n + s].powi(2)).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    }

    pub fn l2_norm_sq(&self) -> f64 {
        self.pair(self)
    }

    pub fn scale(&mut self, s: f64) {
        self.data.iter_mut().for_each(|v| *v *= s);
    }

    pub fn axpy(&mut self, a: f64, x: &Field) {
        for (y, v) in self.data.iter_mut().zip(&x.data) {
            *y += a * v;
        }
    }

    pub fn to_spectral(&self, fft: &mut Fft2) -> SpectralField {
        assert_eq!(fft.side(), self.side);
        let n = self.plane();
        let h2 = self.spacing().powi(2);
        let mut data = Vec::with_capacity(n * self.m);
        for c in 0..self.m {
            let mut buf: Vec<Complex64> = self.component(c).iter().map(|&v| Complex64::new(v * h2, 0.0)).collect();
            fft.forward(&mut buf);
            data.extend_from_slice(&buf);
        }
        SpectralField { side: self.side, m: self.m, data }
    }
}

impl SpectralField {
    pub fn zeros(side: usize, m: usize) -> Self {
        Self { side, m, data: vec![Complex64::new(0.0, 0.0); side * side * m] }
    }

    pub fn plane(&self) -> usize {
        self.side * self.side
    }

    pub fn component(&self, c: usize) -> &[Complex64] {
        let n = self.plane();
        &self.data[c * n..(c + 1) * n]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [Complex64] {
        let n = self.plane();
        &mut self.data[c * n..(c + 1) * n]
    }

    /// Multiplies every component by a real multiplier indexed by mode.
    pub fn multiply(&mut self, mult: &[f64]) {
        let n = self.plane();
        assert_eq!(mult.len(), n);
        for c in 0..self.m {
            for (v, &f) in self.data[c * n..(c + 1) * n].iter_mut().zip(mult) {
                *v *= f;
            }
        }
    }

    pub fn to_real(&self, fft: &mut Fft2) -> Field {
        assert_eq!(fft.side(), self.side);
        let n = self.plane();
        let mut out = Field::zeros(self.side, self.m);
        for c in 0..self.m {
            let mut buf = self.component(c).to_vec();
            fft.inverse(&mut buf);
            for (o, v) in out.component_mut(c).iter_mut().zip(&buf) {
                *o = 0.25 * v.re;
            }
        }
        let _ = n;
        out
    }

    /// Re-embeds the coefficients on a grid of side `new_side` (zero padding or truncation).
    pub fn resize(&self, new_side: usize) -> SpectralField {
        let mut out = SpectralField::zeros(new_side, self.m);
        let (l, p) = (self.side, new_side);
        let keep = |k: i64, len: usize| -> bool { (2 * k.unsigned_abs() as usize) < len };
        for c in 0..self.m {
            for q1 in 0..l {
                let k1 = super::signed_index(q1, l);
                if !keep(k1, p) {
                    continue;
                }
                for q2 in 0..l {
                    let k2 = super::signed_index(q2, l);
                    if !keep(k2, p) {
                        continue;
                    }
                    let dst = c * p * p + super::wrap_index(k1, p) * p + super::wrap_index(k2, p);
                    out.data[dst] = self.data[c * l * l + q1 * l + q2];
                }
            }
        }
        out
    }
}
