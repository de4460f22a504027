use super::state::SpinConfiguration;
use crate::lattice::{BesovEvaluator, Field, Fft2, Kernel};
use crate::measures::ReferenceMeasure;
use crate::params::ModelParams;
use rand::Rng;
use rand_distr::Exp1;

/// Static data of one rung: parameters, kernel and reference measure.
#[derive(Debug, Clone)]
pub struct Model {
    pub params: ModelParams,
    pub kernel: Kernel,
    pub measure: ReferenceMeasure,
}

impl Model {
    pub fn new(params: ModelParams, kernel: Kernel, measure: ReferenceMeasure) -> Self {
        assert_eq!(params.m, measure.m, "measure dimension must match the model");
        assert_eq!(params.side(), kernel.side);
        Self { params, kernel, measure }
    }
}

/// Times at which the run is observed, in macroscopic units.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    pub t_end: f64,
    pub snapshots: Vec<f64>,
    /// Spacing of the stopping-norm checks; `None` uses `α`.
    pub check_interval: Option<f64>,
    /// Refinement factor of the grid on which block sup-norms are taken.
    pub oversample: usize,
}

impl Schedule {
    pub fn new(t_end: f64, snapshots: Vec<f64>) -> Self {
        let mut snapshots: Vec<f64> = snapshots.into_iter().filter(|&t| t <= t_end).collect();
        snapshots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Self { t_end, snapshots, check_interval: None, oversample: 1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub x: Field,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub snapshots: Vec<Snapshot>,
    /// First check time at which `‖X_γ‖_{C^{-ν}} ≥ 𝔪`, if any.
    pub tau: Option<f64>,
    pub jumps: u64,
    pub changes: u64,
    pub final_state: SpinConfiguration,
}

/// What a recorder may read about the run.
pub struct Context<'a> {
    pub model: &'a Model,
    /// Inverse temperature in force: `β` before the stopping time, `0` after.
    pub beta: f64,
}

/// Hooks invoked by [`simulate`]; the state is constant between consecutive calls.
pub trait Recorder {
    fn start(&mut self, _ctx: &Context, _state: &SpinConfiguration, _t: f64) {}
    /// The state was constant on `[from, to]`.
    fn advance(&mut self, _ctx: &Context, _state: &SpinConfiguration, _from: f64, _to: f64) {}
    /// Spin at `site` moved from `old` to its current value at time `t`.
    fn on_jump(&mut self, _ctx: &Context, _state: &SpinConfiguration, _site: usize, _old: &[f64], _t: f64) {}
    fn on_snapshot(&mut self, _ctx: &Context, _state: &SpinConfiguration, _t: f64) {}
    /// The tilt changed (stopping time reached).
    fn on_beta_change(&mut self, _ctx: &Context, _state: &SpinConfiguration, _t: f64) {}
}

pub struct NoRecorder;
impl Recorder for NoRecorder {}

impl<A: Recorder, B: Recorder> Recorder for (A, B) {
    fn start(&mut self, ctx: &Context, s: &SpinConfiguration, t: f64) {
        self.0.start(ctx, s, t);
        self.1.start(ctx, s, t);
    }
    fn advance(&mut self, ctx: &Context, s: &SpinConfiguration, a: f64, b: f64) {
        self.0.advance(ctx, s, a, b);
        self.1.advance(ctx, s, a, b);
    }
    fn on_jump(&mut self, ctx: &Context, s: &SpinConfiguration, site: usize, old: &[f64], t: f64) {
        self.0.on_jump(ctx, s, site, old, t);
        self.1.on_jump(ctx, s, site, old, t);
    }
    fn on_snapshot(&mut self, ctx: &Context, s: &SpinConfiguration, t: f64) {
        self.0.on_snapshot(ctx, s, t);
        self.1.on_snapshot(ctx, s, t);
    }
    fn on_beta_change(&mut self, ctx: &Context, s: &SpinConfiguration, t: f64) {
        self.0.on_beta_change(ctx, s, t);
        self.1.on_beta_change(ctx, s, t);
    }
}

/// `‖X_γ‖_{C^{-ν}}` of the current configuration.
pub fn stopping_norm(state: &SpinConfiguration, params: &ModelParams, eval: &mut BesovEvaluator, fft: &mut Fft2) -> f64 {
    let x = state.fluctuation_field(params);
    eval.norm(&x.to_spectral(fft), -params.nu)
}

#[derive(Clone, Copy, PartialEq)]
enum Event {
    Snapshot,
    Check,
}

/// Runs the stopped Glauber dynamic from `state` on `[0, schedule.t_end]`.
///
/// Every site rings at rate `1/α` in macroscopic time and resamples its spin from
/// `p^{h(x)}`; after the stopping time the tilt is switched off.
pub fn simulate<R: Rng + ?Sized, Rec: Recorder>(
    model: &Model,
    mut state: SpinConfiguration,
    schedule: &Schedule,
    rng: &mut R,
    recorder: &mut Rec,
) -> Trajectory {
    let params = &model.params;
    let m = params.m;
    let sites = state.sites();
    let rate = sites as f64 / params.alpha;
    let check_dt = schedule.check_interval.unwrap_or(params.alpha);
    let stopping_active = params.threshold.is_finite();
    let mut eval = stopping_active.then(|| BesovEvaluator::new(state.side, schedule.oversample));
    let mut fft = stopping_active.then(|| Fft2::new(state.side));

    let mut beta = params.beta;
    let mut tau = None;
    let mut t = 0.0;
    let mut snaps = Vec::with_capacity(schedule.snapshots.len());
    let mut next_snap = 0usize;
    let mut next_check = if stopping_active { 0.0 } else { f64::INFINITY };
    let (mut jumps, mut changes) = (0u64, 0u64);
    let mut new = vec![0.0; m];
    let mut old = vec![0.0; m];

    recorder.start(&Context { model, beta }, &state, 0.0);
    loop {
        let t_next = t + rng.sample::<f64, _>(Exp1) / rate;
        loop {
            let snap_t = schedule.snapshots.get(next_snap).copied().unwrap_or(f64::INFINITY);
            let (te, kind) = if snap_t <= next_check { (snap_t, Event::Snapshot) } else { (next_check, Event::Check) };
            if te > t_next.min(schedule.t_end) {
                break;
            }
            recorder.advance(&Context { model, beta }, &state, t, te);
            t = te;
            match kind {
                Event::Snapshot => {
                    recorder.on_snapshot(&Context { model, beta }, &state, te);
                    snaps.push(Snapshot { t: te, x: state.fluctuation_field(params) });
                    next_snap += 1;
                    if tau.is_none() && stopping_active {
                        check(&mut tau, &mut beta, &mut next_check, te, &state, model, recorder, eval.as_mut().unwrap(), fft.as_mut().unwrap(), check_dt, false);
                    }
                }
                Event::Check => {
                    check(&mut tau, &mut beta, &mut next_check, te, &state, model, recorder, eval.as_mut().unwrap(), fft.as_mut().unwrap(), check_dt, true);
                }
            }
        }
        if t_next > schedule.t_end {
            recorder.advance(&Context { model, beta }, &state, t, schedule.t_end);
            break;
        }
        recorder.advance(&Context { model, beta }, &state, t, t_next);
        t = t_next;
        jumps += 1;
        let site = rng.random_range(0..sites);
        model.measure.sample_tilted(beta, state.local_field(site), rng, &mut new);
        old.copy_from_slice(state.spin(site));
        if new != old {
            changes += 1;
            state.set_spin(site, &new, &model.kernel);
            recorder.on_jump(&Context { model, beta }, &state, site, &old, t);
        }
    }
    Trajectory { snapshots: snaps, tau, jumps, changes, final_state: state }
}

#[allow(clippy::too_many_arguments)]
fn check<Rec: Recorder>(
    tau: &mut Option<f64>,
    beta: &mut f64,
    next_check: &mut f64,
    te: f64,
    state: &SpinConfiguration,
    model: &Model,
    recorder: &mut Rec,
    eval: &mut BesovEvaluator,
    fft: &mut Fft2,
    check_dt: f64,
    scheduled: bool,
) {
    if scheduled {
        *next_check = te + check_dt;
    }
    if tau.is_some() {
        *next_check = f64::INFINITY;
        return;
    }
    if stopping_norm(state, &model.params, eval, fft) >= model.params.threshold {
        *tau = Some(te);
        *beta = 0.0;
        *next_check = f64::INFINITY;
        recorder.on_beta_change(&Context { model, beta: 0.0 }, state, te);
    }
}

#[cfg(test)]
mod tests {
    use super::super::{BracketAudit, DriftMartingaleRecorder, LinearProcessRecorder, TestMode};
    use super::*;
    use crate::lattice::{build_kac_kernel, RingProfile};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn model(gamma: f64, measure: ReferenceMeasure, beta: f64) -> Model {
        let p = ModelParams::new(gamma, 2, measure.m).unwrap().with_beta(beta);
        let k = build_kac_kernel(&p, &RingProfile).unwrap();
        Model::new(p, k, measure)
    }

    #[test]
    fn jump_count_matches_poisson_rate() {
        let md = model(0.4, ReferenceMeasure::ising(), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s0 = SpinConfiguration::iid(md.params.side(), &md.measure, &md.kernel, &mut rng);
        let t = 2.0;
        let tr = simulate(&md, s0, &Schedule::new(t, vec![]), &mut rng, &mut NoRecorder);
        let mean = md.params.sites() as f64 * t / md.params.alpha;
        assert!((tr.jumps as f64 - mean).abs() < 4.0 * mean.sqrt());
        assert!((tr.changes as f64 - mean / 2.0).abs() < 4.0 * mean.sqrt());
        let avg: f64 = tr.final_state.spins.iter().sum::<f64>() / md.params.sites() as f64;
        assert!(avg.abs() < 4.0 / (md.params.sites() as f64).sqrt());
        assert!(tr.final_state.field_drift(&md.kernel) < 1e-10);
    }

    #[test]
    fn snapshots_follow_schedule() {
        let md = model(0.4, ReferenceMeasure::ising(), 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s0 = SpinConfiguration::constant(md.params.side(), &[0.0], &md.kernel);
        let tr = simulate(&md, s0, &Schedule::new(0.3, vec![0.2, 0.0, 0.1, 0.3, 0.5]), &mut rng, &mut NoRecorder);
        let ts: Vec<f64> = tr.snapshots.iter().map(|s| s.t).collect();
        assert_eq!(ts, vec![0.0, 0.1, 0.2, 0.3]);
        assert_eq!(tr.snapshots[0].x.sup_norm(), 0.0);
    }

    #[test]
    fn decomposition_is_exact_and_q_is_two_at_infinite_temperature() {
        let md = model(0.4, ReferenceMeasure::ising(), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s0 = SpinConfiguration::iid(md.params.side(), &md.measure, &md.kernel, &mut rng);
        let mut rec = DriftMartingaleRecorder::new();
        simulate(&md, s0, &Schedule::new(0.5, vec![0.25, 0.5]), &mut rng, &mut rec);
        for d in &rec.snapshots {
            let mut diff = d.jumps.clone();
            diff.axpy(-1.0, &d.increment);
            assert!(diff.sup_norm() < 1e-9);
            let mut sum = d.drift.clone();
            sum.axpy(1.0, &d.martingale);
            sum.axpy(-1.0, &d.increment);
            assert!(sum.sup_norm() < 1e-9);
            assert!((d.q_integral[0] / d.t - 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn drift_vanishes_at_zero_configuration() {
        let md = model(0.4, ReferenceMeasure::blume_capel(0.0), 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s0 = SpinConfiguration::constant(md.params.side(), &[0.0], &md.kernel);
        let mut rec = DriftMartingaleRecorder::new();
        simulate(&md, s0, &Schedule::new(0.0, vec![0.0]), &mut rng, &mut rec);
        assert_eq!(rec.snapshots[0].drift.sup_norm(), 0.0);
    }

    #[test]
    fn stopped_dynamic_switches_off_the_tilt() {
        let mut md = model(0.4, ReferenceMeasure::ising(), 1.0);
        md.params = md.params.clone().with_stopping(0.1, 1e-9);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let s0 = SpinConfiguration::iid(md.params.side(), &md.measure, &md.kernel, &mut rng);
        let tr = simulate(&md, s0, &Schedule::new(0.2, vec![]), &mut rng, &mut NoRecorder);
        assert_eq!(tr.tau, Some(0.0));

        md.params = md.params.clone().with_stopping(0.1, 1e9);
        let s0 = SpinConfiguration::iid(md.params.side(), &md.measure, &md.kernel, &mut rng);
        let tr = simulate(&md, s0, &Schedule::new(0.2, vec![]), &mut rng, &mut NoRecorder);
        assert_eq!(tr.tau, None);
    }

    #[test]
    fn spectral_and_full_field_linear_processes_agree() {
        let meas = ReferenceMeasure::m_vector(2).scaled(2f64.sqrt());
        let md = model(0.4, meas, 0.8);
        let modes = vec![TestMode::cos(0, 1, 0), TestMode::sin(1, 1, 2), TestMode::cos(1, 0, 0)];
        let t_star = 0.3;
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let s0 = SpinConfiguration::iid(md.params.side(), &md.measure, &md.kernel, &mut rng);
        let mut rec = (LinearProcessRecorder::new(modes.clone()), BracketAudit::new(t_star, vec![0.15, t_star], 3));
        simulate(&md, s0, &Schedule::new(t_star, vec![t_star]), &mut rng, &mut rec);
        let (lin, audit) = rec;
        let r = audit.r_field();
        let side = md.params.side();
        let h2 = (2.0 / side as f64).powi(2);
        for (i, mode) in modes.iter().enumerate() {
            let phi = mode.samples(side);
            let pair: f64 = r.component(mode.component).iter().zip(&phi).map(|(a, b)| a * b * h2).sum();
            let z = lin.values[0].1[i];
            assert!((pair - z).abs() < 1e-9 * (1.0 + z.abs()), "{pair} vs {z}");
        }
        let cross = audit.iterated(&[1, 1]).unwrap();
        let n = side * side;
        for x in 0..n {
            let expect = r.data[x] * r.data[n + x] - audit.bracket(0, 1)[x];
            assert!((cross[x] - expect).abs() < 1e-9);
        }
        assert_eq!(audit.results.len(), 2);
        assert!(audit.results.iter().all(|c| c.wick.len() == 7));
    }

    #[test]
    fn iterated_square_is_square_minus_bracket() {
        let md = model(0.4, ReferenceMeasure::ising(), 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let s0 = SpinConfiguration::iid(md.params.side(), &md.measure, &md.kernel, &mut rng);
        let mut audit = BracketAudit::new(0.2, vec![0.2], 3);
        simulate(&md, s0, &Schedule::new(0.2, vec![]), &mut rng, &mut audit);
        let r = audit.r_field();
        let sq = audit.iterated(&[2]).unwrap();
        for (x, v) in sq.iter().enumerate() {
            assert!((v - (r.data[x] * r.data[x] - audit.bracket(0, 0)[x])).abs() < 1e-9);
        }
        let c = &audit.results[0];
        assert!(c.c_ts > 0.0 && c.r_sup > 0.0);
    }
}
