//! Spectral solver for `∂_t X = ΔX + Σ_k ā_{2k+1} :X|X|^{2k}: + σ√2 ξ` on `T² = [-1, 1)²`
//! through `X = P_t X₀ + Z + V`.
//!
//! `Z` is the linear equation driven by noise truncated to `|ω| ≤ M_c`; each Fourier mode
//! is advanced exactly as an Ornstein–Uhlenbeck process. `V` solves the remainder PDE with
//! the Wick powers of `Z̃ = P_t X₀ + Z` as coefficients, stepped by exponential Euler on a
//! grid that resolves every product of degree `2n - 1` without aliasing.

use crate::error::{Error, Result};
use crate::lattice::{signed_index, Fft2, Field, SpectralField};
use crate::renorm::{hermite_multi, hermite_table, limit_coeffs, radial_monomial_terms, CoefficientVector};
use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuumConfig {
    pub m: usize,
    /// Noise cutoff `M_c`: modes with `|ω| ≤ M_c` are forced.
    pub cutoff: f64,
    /// Band limit of `V`; defaults to `M_c`.
    pub remainder_cutoff: Option<f64>,
    pub dt: f64,
    /// Noise amplitude `σ`.
    pub noise: f64,
    /// `‖V‖_∞` above which a run is aborted.
    pub blowup: f64,
}

impl Default for ContinuumConfig {
    fn default() -> Self {
        Self { m: 1, cutoff: 64.0, remainder_cutoff: None, dt: 1e-3, noise: 1.0, blowup: 1e6 }
    }
}

/// Coefficients and noise amplitude of the limit of the `m`-vector model, for the field of the
/// unit-sphere spins.
pub fn m_vector_limit(m: usize, a1: f64) -> (CoefficientVector, f64) {
    (CoefficientVector::new(m, vec![a1, -(m as f64) / (m as f64 + 2.0)]), 1.0 / (m as f64).sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuumState {
    pub t: f64,
    pub x0: SpectralField,
    pub z: SpectralField,
    pub v: SpectralField,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuumTrajectory {
    pub snapshots: Vec<(f64, SpectralField)>,
}

pub struct ContinuumSolver {
    pub cfg: ContinuumConfig,
    pub abar: CoefficientVector,
    side: usize,
    fft: Fft2,
    freq2: Vec<f64>,
    /// Noise-carrying modes as `(index, index of -ω)`, one per conjugate pair.
    noise_pairs: Vec<(usize, usize)>,
    v_mask: Vec<bool>,
    degree: usize,
}

fn grid_side(degree: usize, band: usize) -> usize {
    let p = (degree + 1) * band + 1;
    p + p % 2
}

impl ContinuumSolver {
    pub fn new(cfg: ContinuumConfig, abar: CoefficientVector) -> Result<Self> {
        if cfg.m != abar.m {
            return Err(Error::InvalidParameter("coefficient dimension differs from the configuration".into()));
        }
        if !(cfg.cutoff >= 0.0 && cfg.dt > 0.0 && cfg.noise >= 0.0) || abar.c.is_empty() {
            return Err(Error::InvalidParameter("cutoff, dt and noise must be nonnegative with dt > 0".into()));
        }
        if abar.c.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite coefficient".into()));
        }
        let mv = cfg.remainder_cutoff.unwrap_or(cfg.cutoff);
        let degree = 2 * abar.c.len() - 1;
        let band = cfg.cutoff.max(mv).floor() as usize;
        let side = grid_side(degree, band.max(1));
        let n = side * side;
        let mut freq2 = vec![0.0; n];
        let mut v_mask = vec![false; n];
        let mut noise_pairs = Vec::new();
        for p1 in 0..side {
            let k1 = signed_index(p1, side);
            for p2 in 0..side {
                let k2 = signed_index(p2, side);
                let i = p1 * side + p2;
                let w2 = (k1 * k1 + k2 * k2) as f64;
                freq2[i] = w2;
                v_mask[i] = w2 <= mv * mv;
                if w2 <= cfg.cutoff * cfg.cutoff && (k1 > 0 || (k1 == 0 && k2 >= 0)) {
                    let j = crate::lattice::wrap_index(-k1, side) * side + crate::lattice::wrap_index(-k2, side);
                    noise_pairs.push((i, j));
                }
            }
        }
        Ok(Self { cfg, abar, side, fft: Fft2::new(side), freq2, noise_pairs, v_mask, degree })
    }

    /// Side of the physical grid.
    pub fn side(&self) -> usize {
        self.side
    }

    fn forced_modes(&self) -> impl Iterator<Item = f64> + '_ {
        self.noise_pairs
            .iter()
            .flat_map(move |&(i, j)| if i == j { vec![self.freq2[i]] } else { vec![self.freq2[i]; 2] })
    }

    /// `𝔠_ε = σ² Σ_{0<|ω|≤M_c} 1/(4π²|ω|²)`.
    pub fn renorm_constant(&self) -> f64 {
        let s2 = self.cfg.noise * self.cfg.noise;
        s2 * self.forced_modes().filter(|&w| w > 0.0).map(|w| 1.0 / (4.0 * PI * PI * w)).sum::<f64>()
    }

    /// `𝔠_ε(t) = E Z(x, t)² = σ² (t/2 + Σ_{0<|ω|≤M_c} (1 - e^{-2π²|ω|²t}) / (4π²|ω|²))`.
    pub fn running_constant(&self, t: f64) -> f64 {
        let s2 = self.cfg.noise * self.cfg.noise;
        let mut acc = 0.0;
        for w in self.forced_modes() {
            acc += if w == 0.0 { t / 2.0 } else { -(-2.0 * PI * PI * w * t).exp_m1() / (4.0 * PI * PI * w) };
        }
        s2 * acc
    }

    /// `A_ε(t) = 𝔠_ε - 𝔠_ε(t)`.
    pub fn shift(&self, t: f64) -> f64 {
        self.renorm_constant() - self.running_constant(t)
    }

    /// State at `t = 0`; `x0` may live on any grid but must be band-limited to `M_c`.
    pub fn initial_state(&self, x0: Option<&SpectralField>) -> Result<ContinuumState> {
        let (side, m) = (self.side, self.cfg.m);
        let x0 = match x0 {
            None => SpectralField::zeros(side, m),
            Some(s) => {
                if s.m != m {
                    return Err(Error::InvalidParameter("initial condition has the wrong dimension".into()));
                }
                let band = self.cfg.cutoff.max(self.cfg.remainder_cutoff.unwrap_or(0.0));
                let scale = s.data.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300);
                for p1 in 0..s.side {
                    for p2 in 0..s.side {
                        let (k1, k2) = (signed_index(p1, s.side), signed_index(p2, s.side));
                        if ((k1 * k1 + k2 * k2) as f64) > band * band {
                            for c in 0..m {
                                if s.component(c)[p1 * s.side + p2].norm() > 1e-12 * scale {
                                    return Err(Error::InvalidParameter(format!(
                                        "initial condition carries mode ({k1}, {k2}) beyond the band limit"
                                    )));
                                }
                            }
                        }
                    }
                }
                s.resize(side)
            }
        };
        Ok(ContinuumState { t: 0.0, x0, z: SpectralField::zeros(side, m), v: SpectralField::zeros(side, m) })
    }

    /// Advances `Z` by `dt`, exactly in law.
    pub fn step_linear<R: Rng + ?Sized>(&self, st: &mut ContinuumState, dt: f64, rng: &mut R) {
        let s2 = self.cfg.noise * self.cfg.noise;
        let n = self.side * self.side;
        for c in 0..self.cfg.m {
            let z = &mut st.z.data[c * n..(c + 1) * n];
            for &(i, j) in &self.noise_pairs {
                let w = self.freq2[i];
                let decay = (-PI * PI * w * dt).exp();
                let var = if w == 0.0 { 8.0 * s2 * dt } else { -8.0 * s2 * (-2.0 * PI * PI * w * dt).exp_m1() / (2.0 * PI * PI * w) };
                if i == j {
                    let g: f64 = rng.sample(StandardNormal);
                    z[i] = z[i] * decay + Complex64::new(g * var.sqrt(), 0.0);
                } else {
                    let (a, b): (f64, f64) = (rng.sample(StandardNormal), rng.sample(StandardNormal));
                    let sd = (var / 2.0).sqrt();
                    z[i] = z[i] * decay + Complex64::new(a * sd, b * sd);
                    z[j] = z[i].conj();
                }
            }
        }
    }

    /// `P_t X₀ + Z(t)`.
    pub fn linear_part(&self, st: &ContinuumState) -> SpectralField {
        let mut out = st.x0.clone();
        let mult: Vec<f64> = self.freq2.iter().map(|w| (-PI * PI * w * st.t).exp()).collect();
        out.multiply(&mult);
        for (o, z) in out.data.iter_mut().zip(&st.z.data) {
            *o += z;
        }
        out
    }

    /// `X(t) = P_t X₀ + Z(t) + V(t)`.
    pub fn solution(&self, st: &ContinuumState) -> SpectralField {
        let mut out = self.linear_part(st);
        for (o, v) in out.data.iter_mut().zip(&st.v.data) {
            *o += v;
        }
        out
    }

    /// `Z^{:k:}(·, t) = H_k(Z(t), 𝔠_ε(t) I)` on the solver grid.
    pub fn wick_power(&mut self, st: &ContinuumState, k: &[usize]) -> Result<Field> {
        let deg: usize = k.iter().sum();
        if deg > self.degree || k.len() != self.cfg.m {
            return Err(Error::InvalidParameter(format!("multi-index of degree {deg} exceeds the resolved degree")));
        }
        let z = st.z.to_real(&mut self.fft);
        let c = self.running_constant(st.t);
        let n = self.side * self.side;
        let mut out = Field::zeros(self.side, 1);
        let mut x = vec![0.0; self.cfg.m];
        for s in 0..n {
            for a in 0..self.cfg.m {
                x[a] = z.data[a * n + s];
            }
            out.data[s] = hermite_multi(k, &x, c);
        }
        Ok(out)
    }

    /// `Ψ̄(t) = Σ b_{a,b}(t) V^a Z̃^{:b:}` on the solver grid, with `Z̃` powers renormalized by `𝔠_ε(t)`.
    pub fn nonlinearity(&mut self, st: &ContinuumState) -> Result<Field> {
        let (m, n, d) = (self.cfg.m, self.side * self.side, self.degree);
        let coeffs = limit_coeffs(&self.abar, self.shift(st.t))?;
        let zt = self.linear_part(st).to_real(&mut self.fft);
        let v = st.v.to_real(&mut self.fft);
        let c = self.running_constant(st.t);
        let mut out = Field::zeros(self.side, m);
        let mut herm = vec![vec![0.0; d + 1]; m];
        let mut vpow = vec![vec![0.0; d + 1]; m];
        for s in 0..n {
            for a in 0..m {
                herm[a] = hermite_table(d, zt.data[a * n + s], c);
                let x = v.data[a * n + s];
                vpow[a][0] = 1.0;
                for e in 1..=d {
                    vpow[a][e] = vpow[a][e - 1] * x;
                }
            }
            for (j, terms) in coeffs.terms.iter().enumerate() {
                let mut acc = 0.0;
                for (av, bv, coef) in terms {
                    let mut prod = *coef;
                    for i in 0..m {
                        prod *= vpow[i][av[i]] * herm[i][bv[i]];
                    }
                    acc += prod;
                }
                out.data[j * n + s] = acc;
            }
        }
        Ok(out)
    }

    /// The same nonlinearity as `Σ_k ā_{2k+1} H(X|X|^{2k}, 𝔠_ε I)` evaluated at `X = Z̃ + V`.
    pub fn nonlinearity_pointwise(&mut self, st: &ContinuumState) -> Field {
        let (m, n) = (self.cfg.m, self.side * self.side);
        let x = self.solution(st).to_real(&mut self.fft);
        let c = self.renorm_constant();
        let mut out = Field::zeros(self.side, m);
        let mut xv = vec![0.0; m];
        let table: Vec<Vec<Vec<(Vec<usize>, f64)>>> =
            (0..m).map(|j| (0..self.abar.c.len()).map(|k| radial_monomial_terms(m, j, k)).collect()).collect();
        for s in 0..n {
            for a in 0..m {
                xv[a] = x.data[a * n + s];
            }
            for j in 0..m {
                let mut acc = 0.0;
                for (k, &ak) in self.abar.c.iter().enumerate() {
                    for (ell, coef) in &table[j][k] {
                        acc += ak * coef * hermite_multi(ell, &xv, c);
                    }
                }
                out.data[j * n + s] = acc;
            }
        }
        out
    }

    /// One exponential Euler step `V ← e^{dtΔ}(V + dt Ψ̄)`, band-limited to the remainder cutoff.
    pub fn step_remainder(&mut self, st: &mut ContinuumState, dt: f64) -> Result<()> {
        let psi = self.nonlinearity(st)?;
        let spec = psi.to_spectral(&mut self.fft);
        let n = self.side * self.side;
        for c in 0..self.cfg.m {
            for i in 0..n {
                let idx = c * n + i;
                st.v.data[idx] = if self.v_mask[i] {
                    (st.v.data[idx] + spec.data[idx] * dt) * (-PI * PI * self.freq2[i] * dt).exp()
                } else {
                    Complex64::new(0.0, 0.0)
                };
            }
        }
        let sup = st.v.to_real(&mut self.fft).sup_norm();
        if !sup.is_finite() || sup > self.cfg.blowup {
            return Err(Error::BlowUp { time: st.t + dt, norm: sup });
        }
        Ok(())
    }

    /// Advances the full decomposition by `cfg.dt`.
    pub fn step<R: Rng + ?Sized>(&mut self, st: &mut ContinuumState, rng: &mut R) -> Result<()> {
        let dt = self.cfg.dt;
        self.step_remainder(st, dt)?;
        self.step_linear(st, dt, rng);
        st.t += dt;
        Ok(())
    }

    /// Largest coefficient of `V` outside the remainder band; zero by construction.
    pub fn remainder_leak(&self, st: &ContinuumState) -> f64 {
        let n = self.side * self.side;
        (0..self.cfg.m)
            .flat_map(|c| (0..n).filter(|&i| !self.v_mask[i]).map(move |i| c * n + i))
            .map(|i| st.v.data[i].norm())
            .fold(0.0, f64::max)
    }
}

/// Solves up to `t_end` and records `X` at the requested times, rounded to the step grid.
pub fn dpd_solve<R: Rng + ?Sized>(
    solver: &mut ContinuumSolver,
    x0: Option<&SpectralField>,
    t_end: f64,
    snapshots: &[f64],
    rng: &mut R,
) -> Result<ContinuumTrajectory> {
    if *solver.abar.c.last().unwrap() >= 0.0 {
        return Err(Error::InvalidParameter("the leading coefficient must be negative".into()));
    }
    let dt = solver.cfg.dt;
    let steps = (t_end / dt).round() as usize;
    let mut marks: Vec<usize> = snapshots.iter().filter(|&&t| t <= t_end + 0.5 * dt).map(|t| (t / dt).round() as usize).collect();
    marks.sort_unstable();
    let mut st = solver.initial_state(x0)?;
    let mut out = Vec::with_capacity(marks.len());
    let mut next = 0;
    for step in 0..=steps {
        while next < marks.len() && marks[next] == step {
            out.push((st.t, solver.solution(&st)));
            next += 1;
        }
        if step < steps {
            solver.step(&mut st, rng)?;
        }
    }
    Ok(ContinuumTrajectory { snapshots: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::glauber::TestMode;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn quiet(m: usize, cutoff: f64, dt: f64) -> ContinuumConfig {
        ContinuumConfig { m, cutoff, dt, noise: 0.0, ..Default::default() }
    }

    #[test]
    fn grid_resolves_products() {
        let s = ContinuumSolver::new(quiet(1, 16.0, 1e-3), CoefficientVector::new(1, vec![0.0, -1.0])).unwrap();
        assert_eq!(s.side(), 66);
        assert!(s.side() > 3 * 16 + 16);
    }

    #[test]
    fn constants_vanish_without_noise_and_at_time_zero() {
        let s = ContinuumSolver::new(ContinuumConfig { cutoff: 8.0, ..Default::default() }, CoefficientVector::new(1, vec![0.0, -1.0]))
            .unwrap();
        assert_eq!(s.running_constant(0.0), 0.0);
        assert!((s.shift(0.0) - s.renorm_constant()).abs() < 1e-15);
        assert!((s.shift(50.0) + 25.0).abs() < 1e-9);
        let q = ContinuumSolver::new(quiet(1, 8.0, 1e-3), CoefficientVector::new(1, vec![0.0, -1.0])).unwrap();
        assert_eq!(q.renorm_constant(), 0.0);
    }

    #[test]
    fn no_noise_keeps_z_at_zero() {
        let mut s = ContinuumSolver::new(quiet(2, 4.0, 0.01), CoefficientVector::new(2, vec![0.0, -1.0])).unwrap();
        let mut st = s.initial_state(None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            s.step(&mut st, &mut rng).unwrap();
        }
        assert!(st.z.data.iter().all(|v| v.norm() == 0.0));
        assert!(st.v.data.iter().all(|v| v.norm() == 0.0));
    }

    fn constant_ode_error(dt: f64) -> f64 {
        let c = 1.5;
        let mut s = ContinuumSolver::new(quiet(1, 2.0, dt), CoefficientVector::new(1, vec![0.0, -1.0])).unwrap();
        let mut x0 = SpectralField::zeros(s.side(), 1);
        x0.data[0] = Complex64::new(4.0 * c, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let tr = dpd_solve(&mut s, Some(&x0), 0.5, &[0.5], &mut rng).unwrap();
        let x = tr.snapshots[0].1.data[0].re / 4.0;
        (x - c / (1.0 + 2.0 * c * c * 0.5).sqrt()).abs()
    }

    #[test]
    fn constant_field_follows_cubic_ode() {
        let e: Vec<f64> = [0.01, 0.005, 0.0025].iter().map(|&dt| constant_ode_error(dt)).collect();
        for w in e.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!((0.8..1.3).contains(&order), "order {order}");
        }
        assert!(e[2] < 5e-3);
    }

    #[test]
    fn linear_mode_response() {
        let a1 = 0.7;
        let mut errs = Vec::new();
        for dt in [4e-3, 2e-3, 1e-3] {
            let mut s = ContinuumSolver::new(quiet(1, 3.0, dt), CoefficientVector::new(1, vec![a1, 0.0])).unwrap();
            let side = s.side();
            let x0 = Field::from_fn(side, 1, |_, x1, _| (PI * x1).cos()).to_spectral(&mut Fft2::new(side));
            let mut st = s.initial_state(Some(&x0)).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            let steps = (0.2 / dt).round() as usize;
            for _ in 0..steps {
                s.step(&mut st, &mut rng).unwrap();
            }
            let mode = TestMode::cos(0, 1, 0);
            let w2 = PI * PI;
            let exact = ((-w2 + a1) * 0.2f64).exp() - (-w2 * 0.2f64).exp();
            let v = mode.pair(&st.v) / mode.norm_sq();
            errs.push((v - exact).abs());
            assert!(s.remainder_leak(&st) == 0.0);
        }
        for w in errs.windows(2) {
            assert!((w[0] / w[1]).log2() > 0.8);
        }
    }

    #[test]
    fn remainder_starts_at_zero() {
        let s = ContinuumSolver::new(ContinuumConfig { cutoff: 4.0, ..Default::default() }, CoefficientVector::new(1, vec![0.0, -1.0]))
            .unwrap();
        let st = s.initial_state(None).unwrap();
        assert!(st.v.data.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn two_routes_to_the_nonlinearity_agree() {
        for m in [1usize, 2] {
            let abar = CoefficientVector::new(m, vec![0.4, -0.3, -0.2]);
            let cfg = ContinuumConfig { m, cutoff: 3.0, dt: 0.01, noise: 0.8, ..Default::default() };
            let mut s = ContinuumSolver::new(cfg, abar).unwrap();
            let mut st = s.initial_state(None).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(4);
            for _ in 0..5 {
                s.step_linear(&mut st, 0.01, &mut rng);
                st.t += 0.01;
            }
            let side = s.side();
            st.v = Field::from_fn(side, m, |c, x1, x2| 0.3 * (PI * x1).sin() + 0.1 * c as f64 * (PI * x2).cos())
                .to_spectral(&mut Fft2::new(side));
            let a = s.nonlinearity(&st).unwrap();
            let b = s.nonlinearity_pointwise(&st);
            let mut d = a.clone();
            d.axpy(-1.0, &b);
            assert!(d.sup_norm() < 1e-9 * (1.0 + b.sup_norm()), "m={m}");
        }
    }

    #[test]
    fn positive_leading_coefficient_blows_up() {
        let mut s = ContinuumSolver::new(
            ContinuumConfig { blowup: 1e3, ..quiet(1, 2.0, 0.01) },
            CoefficientVector::new(1, vec![0.0, 1.0]),
        )
        .unwrap();
        let mut x0 = SpectralField::zeros(s.side(), 1);
        x0.data[0] = Complex64::new(8.0, 0.0);
        let mut st = s.initial_state(Some(&x0)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut res = Ok(());
        for _ in 0..200 {
            res = s.step(&mut st, &mut rng);
            if res.is_err() {
                break;
            }
        }
        assert!(matches!(res, Err(Error::BlowUp { .. })));
        assert!(dpd_solve(&mut s, None, 0.1, &[], &mut rng).is_err());
    }

    #[test]
    fn out_of_band_initial_condition_is_rejected() {
        let s = ContinuumSolver::new(quiet(1, 2.0, 0.01), CoefficientVector::new(1, vec![0.0, -1.0])).unwrap();
        let side = 21;
        let x0 = Field::from_fn(side, 1, |_, x1, _| (5.0 * PI * x1).cos()).to_spectral(&mut Fft2::new(side));
        assert!(s.initial_state(Some(&x0)).is_err());
    }

    #[test]
    fn ou_modes_have_exact_variance() {
        let cfg = ContinuumConfig { m: 2, cutoff: 2.0, dt: 0.05, noise: 1.0, ..Default::default() };
        let s = ContinuumSolver::new(cfg, CoefficientVector::new(2, vec![0.0, -1.0])).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let t = 0.2;
        let reps = 10_000;
        let modes = [TestMode::cos(0, 1, 0), TestMode::sin(1, 1, 1), TestMode::cos(0, 0, 0)];
        let mut sums = [0.0; 3];
        let mut cross = 0.0;
        for _ in 0..reps {
            let mut st = s.initial_state(None).unwrap();
            for _ in 0..4 {
                s.step_linear(&mut st, 0.05, &mut rng);
            }
            let v: Vec<f64> = modes.iter().map(|md| md.pair(&st.z)).collect();
            for i in 0..3 {
                sums[i] += v[i] * v[i];
            }
            cross += v[0] * TestMode::cos(1, 1, 0).pair(&st.z);
        }
        for (i, md) in modes.iter().enumerate() {
            let expect = crate::glauber::linear_variance_continuum(md, t);
            let var = sums[i] / reps as f64;
            assert!((var / expect - 1.0).abs() < 4.0 * (2.0 / reps as f64).sqrt(), "{var} vs {expect}");
        }
        let cov = cross / reps as f64;
        let sd = crate::glauber::linear_variance_continuum(&modes[0], t) / (reps as f64).sqrt();
        assert!(cov.abs() < 4.0 * sd);
    }

    #[test]
    fn wick_square_is_centered() {
        let cfg = ContinuumConfig { m: 1, cutoff: 6.0, dt: 0.01, noise: 1.0, ..Default::default() };
        let mut s = ContinuumSolver::new(cfg, CoefficientVector::new(1, vec![0.0, -1.0])).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let reps = 400;
        let (mut mean, mut sq) = (0.0, 0.0);
        for _ in 0..reps {
            let mut st = s.initial_state(None).unwrap();
            for _ in 0..10 {
                s.step_linear(&mut st, 0.01, &mut rng);
                st.t += 0.01;
            }
            let w = s.wick_power(&st, &[2]).unwrap();
            let avg = w.data.iter().sum::<f64>() / w.data.len() as f64;
            mean += avg;
            sq += avg * avg;
        }
        mean /= reps as f64;
        let sd = ((sq / reps as f64 - mean * mean) / reps as f64).sqrt();
        assert!(mean.abs() < 4.0 * sd);
        let st = s.initial_state(None).unwrap();
        assert!(s.wick_power(&st, &[3]).unwrap().data.iter().all(|&v| v == 0.0));
    }
}
