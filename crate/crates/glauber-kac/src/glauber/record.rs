use super::linear::TestMode;
use super::sim::{Context, Recorder};
use super::state::SpinConfiguration;
use crate::lattice::{Fft2, Field, Kernel};
use crate::measures::{ReferenceMeasure, TiltTable};
use crate::params::ModelParams;
use crate::renorm::{c_gamma_ts, hermite_multi};
use rustfft::num_complex::Complex64;

/// Single-site law of the jump target `η ~ p^h`, tabulated in `|h|`.
#[derive(Debug, Clone)]
pub struct LocalLaw {
    table: TiltTable,
    m: usize,
}

impl LocalLaw {
    pub fn new(measure: &ReferenceMeasure, beta: f64) -> Self {
        let table = TiltTable::new(measure, beta, measure.max_radius(), 4096);
        Self { table, m: measure.m }
    }

    /// Writes `Φ(h)` and, if requested, `Q = E[(η - σ)(η - σ)ᵀ]` (row-major).
    pub fn eval(&self, sigma: &[f64], h: &[f64], phi: &mut [f64], q: Option<&mut [f64]>) {
        let m = self.m;
        let rho = h.iter().map(|v| v * v).sum::<f64>().sqrt();
        let t = self.table.eval(rho);
        let inv = if rho > 0.0 { 1.0 / rho } else { 0.0 };
        for c in 0..m {
            phi[c] = t.mean * h[c] * inv;
        }
        if let Some(q) = q {
            for a in 0..m {
                for b in 0..m {
                    let second = if rho > 0.0 {
                        let uu = h[a] * h[b] * inv * inv;
                        (t.parallel - t.perpendicular) * uu + if a == b { t.perpendicular } else { 0.0 }
                    } else if a == b {
                        t.parallel
                    } else {
                        0.0
                    };
                    q[a * m + b] = second - phi[a] * sigma[b] - sigma[a] * phi[b] + sigma[a] * sigma[b];
                }
            }
        }
    }
}

pub fn local_law(measure: &ReferenceMeasure, beta: f64) -> LocalLaw {
    LocalLaw::new(measure, beta)
}

fn site_major_to_field(side: usize, m: usize, v: &[f64]) -> Field {
    let n = side * side;
    let mut f = Field::zeros(side, m);
    for s in 0..n {
        for c in 0..m {
            f.data[c * n + s] = v[s * m + c];
        }
    }
    f
}

fn affected_sites(kernel: &Kernel, site: usize, out: &mut Vec<usize>) {
    out.clear();
    out.push(site);
    kernel.for_each_neighbor(site, |y, w| {
        if w != 0.0 && y != site {
            out.push(y);
        }
    });
}

/// Exact split of `X_γ(t) - X_γ(0)` into the generator integral and the compensated jumps.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub t: f64,
    pub increment: Field,
    /// `(αδ)^{-1} κ ∗ ∫_0^t (Φ(h) - σ) ds`.
    pub drift: Field,
    /// Sum of the jump increments of `X_γ`, accumulated separately from the state.
    pub jumps: Field,
    pub martingale: Field,
    /// Site average of `∫_0^t Q(s) ds`, row-major `m × m`.
    pub q_integral: Vec<f64>,
}

/// Records the drift/martingale decomposition at every snapshot.
#[derive(Debug, Default)]
pub struct DriftMartingaleRecorder {
    law: Option<LocalLaw>,
    m: usize,
    last: Vec<f64>,
    cur: Vec<f64>,
    cur_q: Vec<f64>,
    int_drift: Vec<f64>,
    int_q: Vec<f64>,
    jumps: Vec<f64>,
    x0: Option<Field>,
    scratch: Vec<usize>,
    pub snapshots: Vec<Decomposition>,
}

impl DriftMartingaleRecorder {
    pub fn new() -> Self {
        Self::default()
    }

    fn refresh(&mut self, state: &SpinConfiguration, x: usize) {
        let m = self.m;
        let law = self.law.as_ref().unwrap();
        let (phi, q) = (&mut self.cur[x * m..(x + 1) * m], &mut self.cur_q[x * m * m..(x + 1) * m * m]);
        law.eval(state.spin(x), state.local_field(x), phi, Some(q));
        for c in 0..m {
            phi[c] -= state.spin(x)[c];
        }
    }

    fn flush(&mut self, x: usize, t: f64) {
        let m = self.m;
        let dt = t - self.last[x];
        if dt > 0.0 {
            for c in 0..m {
                self.int_drift[x * m + c] += dt * self.cur[x * m + c];
            }
            for c in 0..m * m {
                self.int_q[x * m * m + c] += dt * self.cur_q[x * m * m + c];
            }
        }
        self.last[x] = t;
    }

    fn reset_all(&mut self, ctx: &Context, state: &SpinConfiguration, t: f64) {
        for x in 0..state.sites() {
            self.flush(x, t);
        }
        self.law = Some(LocalLaw::new(&ctx.model.measure, ctx.beta));
        for x in 0..state.sites() {
            self.refresh(state, x);
        }
    }
}

impl Recorder for DriftMartingaleRecorder {
    fn start(&mut self, ctx: &Context, state: &SpinConfiguration, t: f64) {
        let (m, n) = (state.m, state.sites());
        self.m = m;
        self.last = vec![t; n];
        self.cur = vec![0.0; n * m];
        self.cur_q = vec![0.0; n * m * m];
        self.int_drift = vec![0.0; n * m];
        self.int_q = vec![0.0; n * m * m];
        self.jumps = vec![0.0; n * m];
        self.x0 = Some(state.fluctuation_field(&ctx.model.params));
        self.snapshots.clear();
        self.reset_all(ctx, state, t);
    }

    fn on_jump(&mut self, ctx: &Context, state: &SpinConfiguration, site: usize, old: &[f64], t: f64) {
        let m = self.m;
        let kernel = &ctx.model.kernel;
        let mut sites = std::mem::take(&mut self.scratch);
        affected_sites(kernel, site, &mut sites);
        for &y in &sites {
            self.flush(y, t);
            self.refresh(state, y);
        }
        self.scratch = sites;
        let inv_delta = 1.0 / ctx.model.params.delta;
        let new = state.spin(site);
        let jumps = &mut self.jumps;
        kernel.for_each_neighbor(site, |y, w| {
            for c in 0..m {
                jumps[y * m + c] += inv_delta * w * (new[c] - old[c]);
            }
        });
    }

    fn on_snapshot(&mut self, ctx: &Context, state: &SpinConfiguration, t: f64) {
        for x in 0..state.sites() {
            self.flush(x, t);
        }
        let p = &ctx.model.params;
        let (side, m, n) = (state.side, self.m, state.sites());
        let mut fft = Fft2::new(side);
        let raw = site_major_to_field(side, m, &self.int_drift);
        let mut drift = ctx.model.kernel.convolve(&raw, &mut fft);
        drift.scale(1.0 / (p.alpha * p.delta));
        let jumps = site_major_to_field(side, m, &self.jumps);
        let mut increment = state.fluctuation_field(p);
        increment.axpy(-1.0, self.x0.as_ref().unwrap());
        let mut martingale = jumps.clone();
        martingale.axpy(-1.0, &drift);
        let mut q_integral = vec![0.0; m * m];
        for x in 0..n {
            for c in 0..m * m {
                q_integral[c] += self.int_q[x * m * m + c] / n as f64;
            }
        }
        self.snapshots.push(Decomposition { t, increment, drift, jumps, martingale, q_integral });
    }

    fn on_beta_change(&mut self, ctx: &Context, state: &SpinConfiguration, t: f64) {
        self.reset_all(ctx, state, t);
    }
}

/// Tracks `⟨Z_γ(t), φ⟩` for Fourier test functions, where `Z_γ` is the mild solution
/// driven by the martingale part of `X_γ` and started from zero.
#[derive(Debug, Default)]
pub struct LinearProcessRecorder {
    pub modes: Vec<TestMode>,
    samples: Vec<Vec<f64>>,
    khat: Vec<f64>,
    lambda: Vec<f64>,
    law: Option<LocalLaw>,
    m: usize,
    cur: Vec<f64>,
    proj: Vec<f64>,
    z: Vec<f64>,
    h2: f64,
    drift_scale: f64,
    jump_scale: f64,
    scratch: Vec<usize>,
    /// `(t, ⟨Z_γ(t), φ_i⟩)` at every snapshot.
    pub values: Vec<(f64, Vec<f64>)>,
}

impl LinearProcessRecorder {
    pub fn new(modes: Vec<TestMode>) -> Self {
        Self { modes, ..Default::default() }
    }

    fn recompute(&mut self, ctx: &Context, state: &SpinConfiguration) {
        let m = self.m;
        let law = LocalLaw::new(&ctx.model.measure, ctx.beta);
        for x in 0..state.sites() {
            law.eval(state.spin(x), state.local_field(x), &mut self.cur[x * m..(x + 1) * m], None);
        }
        self.law = Some(law);
        for (i, mode) in self.modes.iter().enumerate() {
            let c = mode.component;
            self.proj[i] = (0..state.sites())
                .map(|x| (self.cur[x * m + c] - state.spin(x)[c]) * self.samples[i][x])
                .sum::<f64>()
                * self.h2;
        }
    }
}

impl Recorder for LinearProcessRecorder {
    fn start(&mut self, ctx: &Context, state: &SpinConfiguration, _t: f64) {
        let p = &ctx.model.params;
        let k = &ctx.model.kernel;
        let side = state.side;
        self.m = state.m;
        assert!(self.modes.iter().all(|md| md.component < self.m), "test mode component out of range");
        self.samples = self.modes.iter().map(|md| md.samples(side)).collect();
        self.khat = self.modes.iter().map(|md| k.spectrum[md.index(side)]).collect();
        self.lambda = self.modes.iter().map(|md| k.lambda[md.index(side)]).collect();
        self.cur = vec![0.0; state.sites() * self.m];
        self.proj = vec![0.0; self.modes.len()];
        self.z = vec![0.0; self.modes.len()];
        self.h2 = (2.0 / side as f64).powi(2);
        self.drift_scale = 1.0 / (p.alpha * p.delta);
        self.jump_scale = self.h2 / p.delta;
        self.values.clear();
        self.recompute(ctx, state);
    }

    fn advance(&mut self, _ctx: &Context, _state: &SpinConfiguration, from: f64, to: f64) {
        let dt = to - from;
        if dt <= 0.0 {
            return;
        }
        for i in 0..self.z.len() {
            let l = self.lambda[i];
            let e = (l * dt).exp();
            let w = if l == 0.0 { dt } else { (l * dt).exp_m1() / l };
            self.z[i] = e * self.z[i] - w * self.drift_scale * self.khat[i] * self.proj[i];
        }
    }

    fn on_jump(&mut self, ctx: &Context, state: &SpinConfiguration, site: usize, old: &[f64], _t: f64) {
        let m = self.m;
        let new = state.spin(site);
        for (i, mode) in self.modes.iter().enumerate() {
            let c = mode.component;
            let d = new[c] - old[c];
            self.z[i] += self.jump_scale * self.khat[i] * d * self.samples[i][site];
            self.proj[i] -= self.h2 * d * self.samples[i][site];
        }
        let mut sites = std::mem::take(&mut self.scratch);
        affected_sites(&ctx.model.kernel, site, &mut sites);
        let law = self.law.as_ref().unwrap();
        let mut phi = [0.0; 16];
        for &y in &sites {
            law.eval(state.spin(y), state.local_field(y), &mut phi[..m], None);
            for (i, mode) in self.modes.iter().enumerate() {
                let c = mode.component;
                self.proj[i] += self.h2 * (phi[c] - self.cur[y * m + c]) * self.samples[i][y];
            }
            self.cur[y * m..(y + 1) * m].copy_from_slice(&phi[..m]);
        }
        self.scratch = sites;
    }

    fn on_snapshot(&mut self, _ctx: &Context, _state: &SpinConfiguration, t: f64) {
        self.values.push((t, self.z.clone()));
    }

    fn on_beta_change(&mut self, ctx: &Context, state: &SpinConfiguration, _t: f64) {
        self.recompute(ctx, state);
    }
}

/// Sup-norm diagnostics of the martingale approximation `R_{γ,t}(·, s)` at one `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct BracketCheckpoint {
    pub s: f64,
    /// `𝔠_{γ,t}(s)`.
    pub c_ts: f64,
    /// `sup_x max_{a≤b} |[R^a, R^b]_s - ⟨R^a, R^b⟩_s|`.
    pub bracket_vs_predictable: f64,
    /// `sup_x max_a |⟨R^a, R^a⟩_s - 𝔠_{γ,t}(s)|`.
    pub predictable_diagonal: f64,
    /// `sup_x max_{a<b} |⟨R^a, R^b⟩_s|`; zero when `m = 1`.
    pub predictable_cross: f64,
    /// `sup_x |H_k(R, 𝔠_{γ,t}(s)) - R^{:k:}|` per multi-index.
    pub wick: Vec<(Vec<usize>, f64)>,
    pub r_sup: f64,
}

/// Full-field record of `R_{γ,t}(x, s) = ∫_{[0,s)} P^γ_{t-r} dM_γ(x, r)` for one horizon `t`,
/// with its brackets and iterated integrals `R^{:k:}` for `2 ≤ |k| ≤ k_max`.
pub struct BracketAudit {
    pub horizon: f64,
    checkpoints: Vec<f64>,
    next_cp: usize,
    kmax: usize,
    indices: Vec<Vec<usize>>,
    m: usize,
    side: usize,
    r: Vec<f64>,
    wick: Vec<Vec<f64>>,
    bracket: Vec<f64>,
    predictable: Vec<f64>,
    pairs: Vec<(usize, usize)>,
    law: Option<LocalLaw>,
    cur_phi: Vec<f64>,
    cur_q: Vec<f64>,
    d_hat: Vec<Complex64>,
    q_hat: Vec<Complex64>,
    dirty: bool,
    pending_from: f64,
    fft: Option<Fft2>,
    buf: Vec<Complex64>,
    g: Vec<f64>,
    scratch: Vec<usize>,
    params: Option<ModelParams>,
    kernel: Option<Kernel>,
    pub results: Vec<BracketCheckpoint>,
}

fn multi_indices(m: usize, lo: usize, hi: usize) -> Vec<Vec<usize>> {
    fn rec(m: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m - 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in (0..=left).rev() {
            cur.push(k);
            rec(m, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for d in lo..=hi {
        rec(m, d, &mut Vec::new(), &mut out);
    }
    out
}

impl BracketAudit {
    /// `checkpoints` are the values of `s ≤ horizon` at which diagnostics are stored.
    pub fn new(horizon: f64, mut checkpoints: Vec<f64>, kmax: usize) -> Self {
        assert!((1..=3).contains(&kmax), "iterated integrals are limited to degree 3");
        checkpoints.retain(|&s| s > 0.0 && s <= horizon);
        checkpoints.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Self {
            horizon,
            checkpoints,
            next_cp: 0,
            kmax,
            indices: Vec::new(),
            m: 0,
            side: 0,
            r: Vec::new(),
            wick: Vec::new(),
            bracket: Vec::new(),
            predictable: Vec::new(),
            pairs: Vec::new(),
            law: None,
            cur_phi: Vec::new(),
            cur_q: Vec::new(),
            d_hat: Vec::new(),
            q_hat: Vec::new(),
            dirty: true,
            pending_from: 0.0,
            fft: None,
            buf: Vec::new(),
            g: Vec::new(),
            scratch: Vec::new(),
            params: None,
            kernel: None,
            results: Vec::new(),
        }
    }

    fn sites(&self) -> usize {
        self.side * self.side
    }

    /// Current `R_{γ,t}(·, s)`, component-major.
    pub fn r_field(&self) -> Field {
        Field { side: self.side, m: self.m, data: self.r.clone() }
    }

    /// Current bracket `[R^a, R^b]` for `a ≤ b`.
    pub fn bracket(&self, a: usize, b: usize) -> &[f64] {
        let i = self.pair_index(a, b);
        &self.bracket[i * self.sites()..(i + 1) * self.sites()]
    }

    pub fn predictable(&self, a: usize, b: usize) -> &[f64] {
        let i = self.pair_index(a, b);
        &self.predictable[i * self.sites()..(i + 1) * self.sites()]
    }

    /// Current iterated integral `R^{:k:}`.
    pub fn iterated(&self, k: &[usize]) -> Option<Vec<f64>> {
        let deg: usize = k.iter().sum();
        if deg == 1 {
            let i = k.iter().position(|&v| v == 1).unwrap();
            return Some(self.r[i * self.sites()..(i + 1) * self.sites()].to_vec());
        }
        self.indices.iter().position(|j| j == k).map(|p| self.wick[p].clone())
    }

    fn pair_index(&self, a: usize, b: usize) -> usize {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        self.pairs.iter().position(|&p| p == (a, b)).unwrap()
    }

    fn refresh_site(&mut self, state: &SpinConfiguration, x: usize) {
        let m = self.m;
        let law = self.law.as_ref().unwrap();
        law.eval(
            state.spin(x),
            state.local_field(x),
            &mut self.cur_phi[x * m..(x + 1) * m],
            Some(&mut self.cur_q[x * m * m..(x + 1) * m * m]),
        );
        for c in 0..m {
            self.cur_phi[x * m + c] -= state.spin(x)[c];
        }
    }

    fn rebuild_spectra(&mut self) {
        let (m, n) = (self.m, self.sites());
        let p = self.params.as_ref().unwrap();
        let k = self.kernel.as_ref().unwrap();
        let fft = self.fft.as_mut().unwrap();
        let scale = 1.0 / (p.alpha * p.delta);
        for a in 0..m {
            for x in 0..n {
                self.buf[x] = Complex64::new(self.cur_phi[x * m + a], 0.0);
            }
            fft.forward(&mut self.buf);
            for x in 0..n {
                self.d_hat[a * n + x] = self.buf[x] * (k.spectrum[x] * scale);
            }
        }
        for (i, &(a, b)) in self.pairs.iter().enumerate() {
            for x in 0..n {
                self.buf[x] = Complex64::new(self.cur_q[x * m * m + a * m + b], 0.0);
            }
            fft.forward(&mut self.buf);
            self.q_hat[i * n..(i + 1) * n].copy_from_slice(&self.buf);
        }
        self.dirty = false;
    }

    /// `g_τ = P^γ_τ κ` on the microscopic lattice.
    fn propagated_kernel(&mut self, tau: f64) {
        let n = self.sites();
        let k = self.kernel.as_ref().unwrap();
        for x in 0..n {
            self.buf[x] = Complex64::new(k.spectrum[x] * (tau * k.lambda[x]).exp(), 0.0);
        }
        self.fft.as_mut().unwrap().inverse(&mut self.buf);
        for x in 0..n {
            self.g[x] = self.buf[x].re / n as f64;
        }
    }

    fn flush(&mut self, to: f64) {
        let from = self.pending_from;
        let to = to.min(self.horizon);
        if to <= from {
            return;
        }
        if self.dirty {
            self.rebuild_spectra();
        }
        let (m, n) = (self.m, self.sites());
        let dt = to - from;
        let t_star = self.horizon;
        let mut dr = vec![0.0; m * n];
        {
            let k = self.kernel.as_ref().unwrap();
            let fft = self.fft.as_mut().unwrap();
            for a in 0..m {
                for x in 0..n {
                    let l = k.lambda[x];
                    let w = if l == 0.0 { dt } else { ((t_star - to) * l).exp() * (l * dt).exp_m1() / l };
                    self.buf[x] = -self.d_hat[a * n + x] * w;
                }
                fft.inverse(&mut self.buf);
                for x in 0..n {
                    dr[a * n + x] = self.buf[x].re / n as f64;
                }
            }
        }
        self.continuous_wick_update(&dr);
        for (r, d) in self.r.iter_mut().zip(&dr) {
            *r += d;
        }

        let p = self.params.as_ref().unwrap();
        let pre = dt / (p.alpha * p.delta * p.delta);
        self.propagated_kernel(t_star - 0.5 * (from + to));
        let fft = self.fft.as_mut().unwrap();
        let mut g2 = vec![Complex64::new(0.0, 0.0); n];
        for x in 0..n {
            g2[x] = Complex64::new(self.g[x] * self.g[x], 0.0);
        }
        fft.forward(&mut g2);
        for i in 0..self.pairs.len() {
            for x in 0..n {
                self.buf[x] = g2[x] * self.q_hat[i * n + x];
            }
            fft.inverse(&mut self.buf);
            for x in 0..n {
                self.predictable[i * n + x] += pre * self.buf[x].re / n as f64;
            }
        }
        self.pending_from = to;
    }

    fn monomial(&self, k: &[usize], x: usize, shift: Option<&[f64]>) -> f64 {
        let n = self.sites();
        let mut v = 1.0;
        for (a, &ka) in k.iter().enumerate() {
            let mut r = self.r[a * n + x];
            if let Some(s) = shift {
                r += s[a * n + x];
            }
            v *= r.powi(ka as i32);
        }
        v
    }

    /// Increment of `R^{:k:}` over an interval where `R` moves continuously and with finite variation.
    fn continuous_wick_update(&mut self, dr: &[f64]) {
        let (m, n) = (self.m, self.sites());
        let count = self.indices.len();
        let mut inc = vec![0.0; n];
        for p in (0..count).rev() {
            let k = self.indices[p].clone();
            let deg: usize = k.iter().sum();
            for (x, slot) in inc.iter_mut().enumerate() {
                let mut d = self.monomial(&k, x, Some(dr)) - self.monomial(&k, x, None);
                if deg == 3 {
                    for i in 0..m {
                        if k[i] == 0 {
                            continue;
                        }
                        let mut j = k.clone();
                        j[i] -= 1;
                        let q = self.indices.iter().position(|v| *v == j).unwrap();
                        let c = self.wick[q][x] - self.monomial(&j, x, None);
                        d += k[i] as f64 * c * dr[i * n + x];
                    }
                }
                *slot = d;
            }
            for (w, d) in self.wick[p].iter_mut().zip(&inc) {
                *w += d;
            }
        }
    }

    fn record(&mut self, s: f64) {
        let (m, n) = (self.m, self.sites());
        let c = c_gamma_ts(self.kernel.as_ref().unwrap(), self.horizon, s);
        let mut bvp = 0.0f64;
        let mut diag = 0.0f64;
        let mut cross = 0.0f64;
        for (i, &(a, b)) in self.pairs.iter().enumerate() {
            for x in 0..n {
                let pr = self.predictable[i * n + x];
                bvp = bvp.max((self.bracket[i * n + x] - pr).abs());
                if a == b {
                    diag = diag.max((pr - c).abs());
                } else {
                    cross = cross.max(pr.abs());
                }
            }
        }
        let mut wick = Vec::with_capacity(self.indices.len());
        let mut xv = vec![0.0; m];
        for (p, k) in self.indices.iter().enumerate() {
            let mut sup = 0.0f64;
            for x in 0..n {
                for a in 0..m {
                    xv[a] = self.r[a * n + x];
                }
                sup = sup.max((hermite_multi(k, &xv, c) - self.wick[p][x]).abs());
            }
            wick.push((k.clone(), sup));
        }
        let r_sup = self.r.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        self.results.push(BracketCheckpoint {
            s,
            c_ts: c,
            bracket_vs_predictable: bvp,
            predictable_diagonal: diag,
            predictable_cross: cross,
            wick,
            r_sup,
        });
    }

    fn advance_checkpoints(&mut self, to: f64) {
        while self.next_cp < self.checkpoints.len() && self.checkpoints[self.next_cp] <= to {
            let s = self.checkpoints[self.next_cp];
            self.flush(s);
            self.record(s);
            self.next_cp += 1;
        }
    }
}

impl Recorder for BracketAudit {
    fn start(&mut self, ctx: &Context, state: &SpinConfiguration, t: f64) {
        let (m, side) = (state.m, state.side);
        let n = side * side;
        self.m = m;
        self.side = side;
        self.indices = if self.kmax >= 2 { multi_indices(m, 2, self.kmax) } else { Vec::new() };
        self.pairs = (0..m).flat_map(|a| (a..m).map(move |b| (a, b))).collect();
        self.r = vec![0.0; m * n];
        self.wick = vec![vec![0.0; n]; self.indices.len()];
        self.bracket = vec![0.0; self.pairs.len() * n];
        self.predictable = vec![0.0; self.pairs.len() * n];
        self.cur_phi = vec![0.0; m * n];
        self.cur_q = vec![0.0; m * m * n];
        self.d_hat = vec![Complex64::new(0.0, 0.0); m * n];
        self.q_hat = vec![Complex64::new(0.0, 0.0); self.pairs.len() * n];
        self.buf = vec![Complex64::new(0.0, 0.0); n];
        self.g = vec![0.0; n];
        self.fft = Some(Fft2::new(side));
        self.params = Some(ctx.model.params.clone());
        self.kernel = Some(ctx.model.kernel.clone());
        self.law = Some(LocalLaw::new(&ctx.model.measure, ctx.beta));
        self.pending_from = t;
        self.next_cp = 0;
        self.results.clear();
        for x in 0..n {
            self.refresh_site(state, x);
        }
        self.dirty = true;
    }

    fn advance(&mut self, _ctx: &Context, _state: &SpinConfiguration, _from: f64, to: f64) {
        self.advance_checkpoints(to);
    }

    fn on_jump(&mut self, ctx: &Context, state: &SpinConfiguration, site: usize, old: &[f64], t: f64) {
        if t >= self.horizon {
            return;
        }
        self.flush(t);
        let (m, n, side) = (self.m, self.sites(), self.side);
        self.propagated_kernel(self.horizon - t);
        let inv_delta = 1.0 / ctx.model.params.delta;
        let new = state.spin(site);
        let diff: Vec<f64> = (0..m).map(|c| inv_delta * (new[c] - old[c])).collect();
        let (s1, s2) = (site / side, site % side);
        let mut dr = vec![0.0; m * n];
        for p1 in 0..side {
            let d1 = (p1 + side - s1) % side;
            for p2 in 0..side {
                let d2 = (p2 + side - s2) % side;
                let g = self.g[d1 * side + d2];
                let x = p1 * side + p2;
                for a in 0..m {
                    dr[a * n + x] = g * diff[a];
                }
            }
        }
        for p in (0..self.indices.len()).rev() {
            let k = self.indices[p].clone();
            for x in 0..n {
                let mut inc = 0.0;
                for i in 0..m {
                    if k[i] == 0 {
                        continue;
                    }
                    let mut j = k.clone();
                    j[i] -= 1;
                    let lower = if j.iter().sum::<usize>() == 1 {
                        let c = j.iter().position(|&v| v == 1).unwrap();
                        self.r[c * n + x]
                    } else {
                        let q = self.indices.iter().position(|v| *v == j).unwrap();
                        self.wick[q][x]
                    };
                    inc += k[i] as f64 * lower * dr[i * n + x];
                }
                self.wick[p][x] += inc;
            }
        }
        for (i, &(a, b)) in self.pairs.iter().enumerate() {
            for x in 0..n {
                self.bracket[i * n + x] += dr[a * n + x] * dr[b * n + x];
            }
        }
        for (r, d) in self.r.iter_mut().zip(&dr) {
            *r += d;
        }
        let mut sites = std::mem::take(&mut self.scratch);
        affected_sites(&ctx.model.kernel, site, &mut sites);
        for &y in &sites {
            self.refresh_site(state, y);
        }
        self.scratch = sites;
        self.dirty = true;
    }

    fn on_beta_change(&mut self, ctx: &Context, state: &SpinConfiguration, t: f64) {
        self.advance_checkpoints(t);
        self.flush(t);
        self.law = Some(LocalLaw::new(&ctx.model.measure, ctx.beta));
        for x in 0..state.sites() {
            self.refresh_site(state, x);
        }
        self.dirty = true;
    }
}
