//! Second-order audits of the lattice martingale: variances of the linearized process against
//! the Gaussian prediction, cross-component null bands, and bracket diagnostics of `R_{γ,t}`.

use super::config::ExperimentConfig;
use super::experiment::{build_rung, Rung};
use super::rng::stream;
use super::stats;
use crate::error::{Error, Result};
use crate::glauber::{linear_variance, linear_variance_continuum, simulate, BracketAudit, LinearProcessRecorder, Schedule, SpinConfiguration, TestMode};
use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq)]
pub struct VarianceRow {
    pub t: f64,
    pub mode: TestMode,
    pub n: usize,
    pub variance: f64,
    /// `2 K̂(ω)² ∫₀ᵗ e^{2λ(t-s)} ds ‖φ‖²`.
    pub predicted: f64,
    /// `2 ∫₀ᵗ ‖P_{t-s} φ‖² ds`.
    pub continuum: f64,
    /// Confidence interval for the population variance.
    pub ci: (f64, f64),
    pub covered: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossRow {
    pub t: f64,
    pub a: TestMode,
    pub b: TestMode,
    pub correlation: f64,
    pub band: f64,
    pub inside: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceAudit {
    pub rows: Vec<VarianceRow>,
    pub cross: Vec<CrossRow>,
    /// Per-check significance after splitting `alpha` over all checks of a family.
    pub level: f64,
    pub stopped: usize,
}

impl CovarianceAudit {
    pub fn all_covered(&self) -> bool {
        self.rows.iter().all(|r| r.covered)
    }

    pub fn cross_inside(&self) -> bool {
        self.cross.iter().all(|r| r.inside)
    }
}

/// Samples `⟨Z_γ(t), φ⟩` for every replica; `out[r][s][j]`.
pub fn linear_samples(rung: &Rung, cfg: &ExperimentConfig, threads: usize) -> Result<(Vec<Vec<Vec<f64>>>, usize)> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let model = &rung.model;
    let side = model.params.side();
    let runs: Vec<(Vec<Vec<f64>>, bool)> = pool.install(|| {
        (0..cfg.replicas)
            .into_par_iter()
            .map(|r| {
                let mut rng = stream(cfg.seed, "audit", r as u64);
                let state = SpinConfiguration::iid(side, &model.measure, &model.kernel, &mut rng);
                let mut schedule = Schedule::new(cfg.t_end, cfg.snapshots.clone());
                schedule.check_interval = cfg.check_interval;
                let mut rec = LinearProcessRecorder::new(cfg.modes.clone());
                let traj = simulate(model, state, &schedule, &mut rng, &mut rec);
                (rec.values.into_iter().map(|(_, v)| v).collect(), traj.tau.is_some())
            })
            .collect()
    });
    let stopped = runs.iter().filter(|r| r.1).count();
    Ok((runs.into_iter().map(|r| r.0).collect(), stopped))
}

/// Variance of `⟨Z_γ(t), φ⟩` against its Gaussian prediction for every snapshot and test
/// function, and cross-component correlations against the null band.
///
/// `alpha` is the family-wise level: each of the variance checks and each of the
/// correlation checks is run at `alpha / count`.
pub fn covariance_audit(cfg: &ExperimentConfig, alpha: f64, threads: usize) -> Result<CovarianceAudit> {
    let rung = build_rung(cfg)?;
    let (samples, stopped) = linear_samples(&rung, cfg, threads)?;
    let n = samples.len();
    let modes = &cfg.modes;
    let pairs: Vec<(usize, usize)> =
        (0..modes.len()).flat_map(|a| (a + 1..modes.len()).map(move |b| (a, b))).filter(|&(a, b)| modes[a].component != modes[b].component).collect();
    let var_level = alpha / (cfg.snapshots.len() * modes.len()).max(1) as f64;
    let cross_level = alpha / (cfg.snapshots.len() * pairs.len()).max(1) as f64;
    let column = |s: usize, j: usize| -> Vec<f64> { samples.iter().map(|r| r[s][j]).collect() };
    let mut rows = Vec::new();
    let mut cross = Vec::new();
    for (s, &t) in cfg.snapshots.iter().enumerate() {
        for (j, mode) in modes.iter().enumerate() {
            let x = column(s, j);
            let predicted = linear_variance(&rung.model.kernel, mode, t);
            let variance = if n > 1 { x.iter().map(|v| v * v).sum::<f64>() / n as f64 } else { f64::NAN };
            // ⟨Z_γ, φ⟩ has mean zero, so the second moment carries n degrees of freedom.
            let ci = if n > 1 { stats::variance_ci(variance, n + 1, var_level) } else { (f64::NAN, f64::NAN) };
            let covered = if predicted == 0.0 { x.iter().all(|&v| v == 0.0) } else { ci.0 <= predicted && predicted <= ci.1 };
            rows.push(VarianceRow { t, mode: *mode, n, variance, predicted, continuum: linear_variance_continuum(mode, t), ci, covered });
        }
        for &(a, b) in &pairs {
            let (xa, xb) = (column(s, a), column(s, b));
            let correlation = stats::correlation(&xa, &xb);
            let band = stats::correlation_null_band(n, cross_level);
            cross.push(CrossRow { t, a: modes[a], b: modes[b], correlation, band, inside: correlation.abs() <= band });
        }
    }
    Ok(CovarianceAudit { rows, cross, level: var_level, stopped })
}

/// Replica averages of the bracket diagnostics at each checkpoint, with standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct BracketSummary {
    pub gamma: f64,
    pub horizon: f64,
    pub s: Vec<f64>,
    pub c_ts: Vec<f64>,
    pub bracket_vs_predictable: Vec<(f64, f64)>,
    pub predictable_diagonal: Vec<(f64, f64)>,
    pub predictable_cross: Vec<(f64, f64)>,
    /// Per multi-index, `(k, [(mean, stderr)])`.
    pub wick: Vec<(Vec<usize>, Vec<(f64, f64)>)>,
}

fn mean_se(x: &[f64]) -> (f64, f64) {
    let n = x.len();
    let se = if n > 1 { (stats::variance(x) / n as f64).sqrt() } else { f64::NAN };
    (stats::mean(x), se)
}

/// Runs `cfg.replicas` replicas up to `horizon` while recording `R_{γ,horizon}` and its
/// iterated integrals up to degree `kmax`.
pub fn bracket_audit(cfg: &ExperimentConfig, horizon: f64, checkpoints: &[f64], kmax: usize, threads: usize) -> Result<BracketSummary> {
    let rung = build_rung(cfg)?;
    let model = &rung.model;
    let side = model.params.side();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let runs: Vec<Vec<crate::glauber::BracketCheckpoint>> = pool.install(|| {
        (0..cfg.replicas)
            .into_par_iter()
            .map(|r| {
                let mut rng = stream(cfg.seed, "bracket", r as u64);
                let state = SpinConfiguration::iid(side, &model.measure, &model.kernel, &mut rng);
                let mut schedule = Schedule::new(horizon, vec![]);
                schedule.check_interval = cfg.check_interval;
                let mut audit = BracketAudit::new(horizon, checkpoints.to_vec(), kmax);
                simulate(model, state, &schedule, &mut rng, &mut audit);
                audit.results
            })
            .collect()
    });
    let first = runs.first().ok_or_else(|| Error::InvalidParameter("bracket audit needs at least one replica".into()))?;
    let count = first.len();
    let col = |f: &dyn Fn(&crate::glauber::BracketCheckpoint) -> f64, i: usize| -> (f64, f64) {
        mean_se(&runs.iter().map(|r| f(&r[i])).collect::<Vec<_>>())
    };
    let wick = first[0]
        .wick
        .iter()
        .enumerate()
        .map(|(w, (k, _))| (k.clone(), (0..count).map(|i| col(&|c| c.wick[w].1, i)).collect()))
        .collect();
    Ok(BracketSummary {
        gamma: model.params.gamma,
        horizon,
        s: first.iter().map(|c| c.s).collect(),
        c_ts: first.iter().map(|c| c.c_ts).collect(),
        bracket_vs_predictable: (0..count).map(|i| col(&|c| c.bracket_vs_predictable, i)).collect(),
        predictable_diagonal: (0..count).map(|i| col(&|c| c.predictable_diagonal, i)).collect(),
        predictable_cross: (0..count).map(|i| col(&|c| c.predictable_cross, i)).collect(),
        wick,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::MeasureSpec;

    #[test]
    fn zero_test_function_has_zero_variance() {
        let cfg = ExperimentConfig {
            gamma: 0.45,
            t_end: 0.2,
            snapshots: vec![0.2],
            replicas: 4,
            modes: vec![TestMode::sin(0, 0, 0), TestMode::cos(0, 1, 0)],
            ..Default::default()
        };
        let audit = covariance_audit(&cfg, 0.05, 2).unwrap();
        assert_eq!(audit.rows[0].variance, 0.0);
        assert_eq!(audit.rows[0].predicted, 0.0);
        assert!(audit.rows[0].covered);
    }

    #[test]
    fn infinite_temperature_matches_prediction() {
        let cfg = ExperimentConfig {
            gamma: 0.45,
            beta: Some(0.0),
            t_end: 0.3,
            snapshots: vec![0.3],
            replicas: 300,
            seed: 11,
            modes: vec![TestMode::cos(0, 1, 0), TestMode::sin(0, 1, 1)],
            ..Default::default()
        };
        let audit = covariance_audit(&cfg, 0.01, 4).unwrap();
        for r in &audit.rows {
            assert!(r.covered, "{r:?}");
        }
    }

    #[test]
    fn bracket_summary_shape() {
        let cfg = ExperimentConfig { gamma: 0.45, m: 2, measure: MeasureSpec::Synthesized, abar: vec![0.0, -0.2], replicas: 2, modes: vec![], ..Default::default() };
        let s = bracket_audit(&cfg, 0.1, &[0.05, 0.1], 2, 2).unwrap();
        assert_eq!(s.s.len(), 2);
        assert_eq!(s.wick.len(), 3);
        assert!(s.predictable_cross[1].0 >= 0.0);
    }
}
