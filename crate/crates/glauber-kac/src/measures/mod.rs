//! Isotropic single-spin reference measures, their tilted laws, and moment synthesis.
//!
//! A measure is stored by its radial part: atoms `r_i ≥ 0` with weights `w_i`,
//! each spread uniformly over the sphere of radius `r_i` in `ℝ^m`. For `m = 1`
//! an atom `r > 0` stands for `δ_{±r}/2`.

mod moments;
mod sphere;
mod table;
mod taylor;

pub use moments::{admissible_leading_bound, hankel_determinant, solve_moment_problem, target_moments, MomentTargets};
pub use sphere::sphere_tilt;
pub use table::TiltTable;
pub use taylor::{cumulants_from_moments, taylor_coefficients, taylor_coefficients_by_cumulants};

use crate::error::{Error, Result};
use rand::Rng;
use rand_distr::{Beta, Distribution, StandardNormal};

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceMeasure {
    pub m: usize,
    pub radii: Vec<f64>,
    pub weights: Vec<f64>,
    pub label: String,
}

/// Radial summary of the tilted law `p^h` at `|h| = ρ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TiltedMoments {
    /// `|Φ(h)|`.
    pub mean: f64,
    /// `E_p[⟨η, ĥ⟩²]`.
    pub parallel: f64,
    /// `E_p[⟨η, e⟩²]` for a unit `e ⊥ ĥ`; zero when `m = 1`.
    pub perpendicular: f64,
}

impl ReferenceMeasure {
    pub fn new(m: usize, radii: Vec<f64>, weights: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if m == 0 || radii.is_empty() || radii.len() != weights.len() {
            return Err(Error::InvalidParameter("radii and weights must be nonempty and of equal length".into()));
        }
        if radii.iter().any(|r| !(r.is_finite() && *r >= 0.0)) || weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidParameter("radii and weights must be finite and nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InvalidParameter("total weight must be positive".into()));
        }
        let weights = weights.iter().map(|w| w / total).collect();
        Ok(Self { m, radii, weights, label: label.into() })
    }

    pub fn ising() -> Self {
        Self::new(1, vec![1.0], vec![1.0], "ising").unwrap()
    }

    /// `ν(0) ∝ 1`, `ν(±1) ∝ e^θ`.
    pub fn blume_capel(theta: f64) -> Self {
        let e = theta.exp();
        Self::new(1, vec![0.0, 1.0], vec![1.0, 2.0 * e], format!("blume-capel({theta})")).unwrap()
    }

    /// Uniform law on the unit sphere of `ℝ^m`.
    pub fn m_vector(m: usize) -> Self {
        Self::new(m, vec![1.0], vec![1.0], format!("m-vector({m})")).unwrap()
    }

    /// Symmetric atoms on the line, given as points and weights.
    pub fn from_points(points: &[f64], weights: &[f64]) -> Result<Self> {
        validate_symmetry(points, weights)?;
        let mut radii: Vec<f64> = Vec::new();
        let mut w: Vec<f64> = Vec::new();
        for (&p, &q) in points.iter().zip(weights) {
            let r = p.abs();
            match radii.iter().position(|&x| (x - r).abs() <= 1e-14 * (1.0 + r)) {
                Some(i) => w[i] += q,
                None => {
                    radii.push(r);
                    w.push(q);
                }
            }
        }
        Self::new(1, radii, w, "custom")
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            m: self.m,
            radii: self.radii.iter().map(|r| r * factor).collect(),
            weights: self.weights.clone(),
            label: format!("{}*{factor}", self.label),
        }
    }

    pub fn max_radius(&self) -> f64 {
        self.radii.iter().cloned().fold(0.0, f64::max)
    }

    /// `E|η|^{2j}`.
    pub fn radial_moment(&self, j: usize) -> f64 {
        self.radii.iter().zip(&self.weights).map(|(r, w)| w * r.powi(2 * j as i32)).sum()
    }

    /// Even moments `E[η₁^{2j}]` of the one-dimensional marginal for `j = 0..=jmax`.
    pub fn marginal_moments(&self, jmax: usize) -> Vec<f64> {
        (0..=jmax).map(|j| self.radial_moment(j) * marginal_factor(self.m, j)).collect()
    }

    /// Radial tilt summary at `|h| = rho` and inverse temperature `beta`.
    pub fn tilted_moments(&self, beta: f64, rho: f64) -> TiltedMoments {
        let m = self.m;
        let mut logs = Vec::with_capacity(self.radii.len());
        let mut stats = Vec::with_capacity(self.radii.len());
        for (&r, &w) in self.radii.iter().zip(&self.weights) {
            if w == 0.0 {
                continue;
            }
            let (lz, a, s) = sphere_tilt(m, beta * r * rho);
            logs.push(w.ln() + lz);
            stats.push((r, a, s));
        }
        let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut norm = 0.0;
        let (mut mean, mut par, mut perp) = (0.0, 0.0, 0.0);
        for (l, (r, a, s)) in logs.iter().zip(&stats) {
            let p = (l - top).exp();
            norm += p;
            mean += p * r * a;
            par += p * r * r * s;
            if m > 1 {
                perp += p * r * r * (1.0 - s) / (m - 1) as f64;
            }
        }
        TiltedMoments { mean: mean / norm, parallel: par / norm, perpendicular: perp / norm }
    }

    /// `Φ(h) = ∫ η p^h(dη)`.
    pub fn phi(&self, beta: f64, h: &[f64]) -> Vec<f64> {
        let rho = norm(h);
        if rho == 0.0 {
            return vec![0.0; h.len()];
        }
        let f = self.tilted_moments(beta, rho).mean / rho;
        h.iter().map(|v| v * f).collect()
    }

    /// Log-partition `log ∫ e^{β⟨h,η⟩} ν(dη)`.
    pub fn log_partition(&self, beta: f64, h: &[f64]) -> f64 {
        let rho = norm(h);
        let logs: Vec<f64> = self
            .radii
            .iter()
            .zip(&self.weights)
            .filter(|(_, &w)| w > 0.0)
            .map(|(&r, &w)| w.ln() + sphere_tilt(self.m, beta * r * rho).0)
            .collect();
        let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        top + logs.iter().map(|l| (l - top).exp()).sum::<f64>().ln()
    }

    /// Draws from `p^h ∝ e^{β⟨h,η⟩} ν(dη)` into `out`.
    pub fn sample_tilted<R: Rng + ?Sized>(&self, beta: f64, h: &[f64], rng: &mut R, out: &mut [f64]) {
        let m = self.m;
        let rho = norm(h);
        let r = self.sample_radius(beta, rho, rng);
        if r == 0.0 {
            out.iter_mut().for_each(|v| *v = 0.0);
            return;
        }
        let kappa = beta * r * rho;
        if m == 1 {
            let dir = if rho == 0.0 { 1.0 } else { h[0].signum() };
            let p_plus = 1.0 / (1.0 + (-2.0 * kappa).exp());
            out[0] = if rng.random::<f64>() < p_plus { r * dir } else { -r * dir };
            return;
        }
        if rho == 0.0 || kappa == 0.0 {
            uniform_sphere(rng, out);
            out.iter_mut().for_each(|v| *v *= r);
            return;
        }
        let w = if m == 3 { tilted_cos_m3(kappa, rng) } else { tilted_cos_wood(m, kappa, rng) };
        let axis: Vec<f64> = h.iter().map(|v| v / rho).collect();
        let mut perp = vec![0.0; m];
        loop {
            for v in perp.iter_mut() {
                *v = rng.sample(StandardNormal);
            }
            let d: f64 = perp.iter().zip(&axis).map(|(a, b)| a * b).sum();
            perp.iter_mut().zip(&axis).for_each(|(p, a)| *p -= d * a);
            let n = norm(&perp);
            if n > 1e-12 {
                perp.iter_mut().for_each(|p| *p /= n);
                break;
            }
        }
        let s = (1.0 - w * w).max(0.0).sqrt();
        for i in 0..m {
            out[i] = r * (w * axis[i] + s * perp[i]);
        }
    }

    fn sample_radius<R: Rng + ?Sized>(&self, beta: f64, rho: f64, rng: &mut R) -> f64 {
        if self.radii.len() == 1 {
            return self.radii[0];
        }
        let logs: Vec<f64> = self
            .radii
            .iter()
            .zip(&self.weights)
            .map(|(&r, &w)| if w > 0.0 { w.ln() + sphere_tilt(self.m, beta * r * rho).0 } else { f64::NEG_INFINITY })
            .collect();
        let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let probs: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
        let total: f64 = probs.iter().sum();
        let mut u = rng.random::<f64>() * total;
        for (i, p) in probs.iter().enumerate() {
            if u < *p {
                return self.radii[i];
            }
            u -= p;
        }
        *self.radii.last().unwrap()
    }
}

/// `(2j-1)!! / (m(m+2)…(m+2j-2))`, the ratio `E[η₁^{2j}] / E|η|^{2j}` for isotropic laws.
pub fn marginal_factor(m: usize, j: usize) -> f64 {
    (0..j).map(|i| (2 * i + 1) as f64 / (m + 2 * i) as f64).product()
}

/// Checks that a one-dimensional atomic law is symmetric under `η ↦ -η`.
pub fn validate_symmetry(points: &[f64], weights: &[f64]) -> Result<()> {
    if points.len() != weights.len() || points.is_empty() {
        return Err(Error::InvalidParameter("points and weights must be nonempty and of equal length".into()));
    }
    let total: f64 = weights.iter().sum();
    for (&p, _) in points.iter().zip(weights) {
        let mass = |x: f64| -> f64 {
            points.iter().zip(weights).filter(|(q, _)| (*q - x).abs() <= 1e-12 * (1.0 + x.abs())).map(|(_, w)| w).sum()
        };
        if (mass(p) - mass(-p)).abs() > 1e-12 * total {
            return Err(Error::NonIsotropic(format!("atom at {p} has no mirror of equal weight")));
        }
    }
    Ok(())
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn uniform_sphere<R: Rng + ?Sized>(rng: &mut R, out: &mut [f64]) {
    loop {
        for v in out.iter_mut() {
            *v = rng.sample(StandardNormal);
        }
        let n = norm(out);
        if n > 1e-12 {
            out.iter_mut().for_each(|v| *v /= n);
            return;
        }
    }
}

/// Inverse CDF of `w = cos θ` with density `∝ e^{κw}` on `[-1,1]`.
fn tilted_cos_m3<R: Rng + ?Sized>(kappa: f64, rng: &mut R) -> f64 {
    let v: f64 = rng.random();
    if kappa < 1e-8 {
        return 2.0 * v - 1.0;
    }
    (1.0 + (v + (1.0 - v) * (-2.0 * kappa).exp()).ln() / kappa).clamp(-1.0, 1.0)
}

/// Wood's rejection sampler for the axial component of a von Mises–Fisher law.
fn tilted_cos_wood<R: Rng + ?Sized>(m: usize, kappa: f64, rng: &mut R) -> f64 {
    let d = (m - 1) as f64;
    let b = d / (2.0 * kappa + (4.0 * kappa * kappa + d * d).sqrt());
    let x0 = (1.0 - b) / (1.0 + b);
    let c = kappa * x0 + d * (1.0 - x0 * x0).ln();
    let beta = Beta::new(d / 2.0, d / 2.0).unwrap();
    loop {
        let z: f64 = beta.sample(rng);
        let w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z);
        let u: f64 = rng.random();
        if kappa * w + d * (1.0 - x0 * w).ln() - c >= u.ln() {
            return w;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn phi_closed_forms() {
        let is = ReferenceMeasure::ising();
        let v = is.phi(1.3, &[0.4]);
        assert!((v[0] - (1.3f64 * 0.4).tanh()).abs() < 1e-15);
        let bc = ReferenceMeasure::blume_capel(0.5);
        let e = 0.5f64.exp();
        let x: f64 = 0.9;
        let expect = 2.0 * e * x.sinh() / (1.0 + 2.0 * e * x.cosh());
        assert!((bc.phi(1.0, &[0.9])[0] - expect).abs() < 1e-14);
        let mv = ReferenceMeasure::m_vector(3);
        let h = [0.3, -0.4, 1.2];
        let rho = norm(&h);
        let lang = 1.0 / rho.tanh() - 1.0 / rho;
        let p = mv.phi(1.0, &h);
        for i in 0..3 {
            assert!((p[i] - lang * h[i] / rho).abs() < 1e-12);
        }
    }

    #[test]
    fn phi_is_gradient_of_log_partition() {
        let meas = ReferenceMeasure::new(2, vec![0.0, 1.5], vec![0.3, 0.7], "test").unwrap();
        let h = [0.2, 0.5];
        let beta = 1.1;
        let p = meas.phi(beta, &h);
        for i in 0..2 {
            let mut hp = h;
            let mut hm = h;
            hp[i] += 1e-5;
            hm[i] -= 1e-5;
            let g = (meas.log_partition(beta, &hp) - meas.log_partition(beta, &hm)) / (2e-5 * beta);
            assert!((g - p[i]).abs() < 1e-8);
        }
    }

    #[test]
    fn rejects_asymmetric_points() {
        assert!(ReferenceMeasure::from_points(&[1.0, -1.0, 2.0], &[0.4, 0.4, 0.2]).is_err());
        let m = ReferenceMeasure::from_points(&[1.0, -1.0, 0.0], &[0.25, 0.25, 0.5]).unwrap();
        assert_eq!(m.radii.len(), 2);
    }

    #[test]
    fn marginal_moments_of_sphere() {
        for m in 1..=4 {
            let mv = ReferenceMeasure::m_vector(m);
            let mm = mv.marginal_moments(2);
            assert!((mm[1] - 1.0 / m as f64).abs() < 1e-15);
            assert!((mm[2] - 3.0 / (m * (m + 2)) as f64).abs() < 1e-15);
        }
    }

    #[test]
    fn tilted_sampler_means() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for m in 1..=4 {
            let meas = ReferenceMeasure::new(m, vec![0.0, 1.0, 2.0], vec![0.2, 0.5, 0.3], "t").unwrap();
            let mut h = vec![0.0; m];
            h[0] = 0.35;
            if m > 1 {
                h[1] = -0.2;
            }
            let beta = 1.2;
            let target = meas.phi(beta, &h);
            let tm = meas.tilted_moments(beta, norm(&h));
            let n = 200_000;
            let mut acc = vec![0.0; m];
            let mut sq = 0.0;
            let mut out = vec![0.0; m];
            for _ in 0..n {
                meas.sample_tilted(beta, &h, &mut rng, &mut out);
                for i in 0..m {
                    acc[i] += out[i];
                }
                sq += out.iter().map(|v| v * v).sum::<f64>();
            }
            for i in 0..m {
                let mean = acc[i] / n as f64;
                assert!((mean - target[i]).abs() < 6.0 * 2.0 / (n as f64).sqrt(), "m={m} i={i}: {mean} vs {}", target[i]);
            }
            let second = tm.parallel + (m as f64 - 1.0) * tm.perpendicular;
            assert!((sq / n as f64 - second).abs() < 0.03, "m={m}");
        }
    }
}
