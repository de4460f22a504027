use super::config::{mode_label, ExperimentConfig, InitialSpec, MeasureSpec};
use super::io;
use super::rng::stream;
use super::stats;
use crate::error::{Error, Result};
use crate::glauber::{simulate, Model, NoRecorder, Schedule, SpinConfiguration, TestMode};
use crate::lattice::{build_kac_kernel, Fft2, Field, RingProfile};
use crate::measures::{solve_moment_problem, ReferenceMeasure};
use crate::renorm::{beta_gamma, c_gamma, CoefficientVector};
use crate::spde::{dpd_solve, ContinuumConfig, ContinuumSolver};
use crate::params::ModelParams;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum System {
    Lattice,
    Continuum,
}

impl System {
    pub fn label(self) -> &'static str {
        match self {
            System::Lattice => "lattice",
            System::Continuum => "continuum",
        }
    }
}

/// A configured rung: the lattice model and the matching continuum coefficients.
#[derive(Debug, Clone)]
pub struct Rung {
    pub model: Model,
    pub c_gamma: f64,
    /// Limit coefficients in the coordinates of the simulated field.
    pub abar: CoefficientVector,
    pub continuum_noise: f64,
}

/// Builds the kernel, reference measure and inverse temperature described by `cfg`.
///
/// For the `m`-vector preset the coefficients refer to the field of unit-sphere spins, so the
/// cubic entry must equal `-m/(m+2)`; the lattice then runs at `β = m β'(γ)` where `β'` is
/// computed for the rescaled spins `√m σ`.
pub fn build_rung(cfg: &ExperimentConfig) -> Result<Rung> {
    cfg.validate()?;
    let m = cfg.m;
    let params = ModelParams::new(cfg.gamma, cfg.n, m)?.with_stopping(cfg.nu, cfg.threshold);
    let kernel = build_kac_kernel(&params, &RingProfile)?;
    let cg = c_gamma(&kernel);
    let abar = CoefficientVector::new(m, cfg.abar.clone());
    let mut noise = 1.0;
    let (measure, beta) = match &cfg.measure {
        MeasureSpec::Ising => (ReferenceMeasure::ising(), beta_gamma(params.alpha, cg, &abar)),
        MeasureSpec::BlumeCapel(theta) => (ReferenceMeasure::blume_capel(*theta), beta_gamma(params.alpha, cg, &abar)),
        MeasureSpec::MVector => {
            let mf = m as f64;
            if cfg.n != 2 || (cfg.abar[1] + mf / (mf + 2.0)).abs() > 1e-12 {
                return Err(Error::Config {
                    line: 0,
                    message: format!("m-vector preset needs n = 2 and abar = (a1, {})", -mf / (mf + 2.0)),
                });
            }
            let rescaled = CoefficientVector::new(m, vec![cfg.abar[0], cfg.abar[1] / mf]);
            noise = 1.0 / mf.sqrt();
            (ReferenceMeasure::m_vector(m), mf * beta_gamma(params.alpha, cg, &rescaled))
        }
        MeasureSpec::Synthesized => {
            let beta = beta_gamma(params.alpha, cg, &abar);
            (solve_moment_problem(cfg.n, m, &abar, params.gamma, cg, beta)?, beta)
        }
    };
    let beta = cfg.beta.unwrap_or(beta);
    let params = params.with_beta(beta);
    Ok(Rung { model: Model::new(params, kernel, measure), c_gamma: cg, abar, continuum_noise: noise })
}

/// Derived quantities recorded with every run.
pub fn derived_entries(rung: &Rung) -> Vec<(String, String)> {
    let p = &rung.model.params;
    vec![
        ("half_size".into(), p.half_size.to_string()),
        ("side".into(), p.side().to_string()),
        ("requested_gamma".into(), format!("{}", p.requested_gamma)),
        ("gamma_snapped".into(), format!("{:.17e}", p.gamma)),
        ("epsilon".into(), format!("{:.17e}", p.epsilon)),
        ("alpha".into(), format!("{:.17e}", p.alpha)),
        ("delta".into(), format!("{:.17e}", p.delta)),
        ("beta".into(), format!("{:.17e}", p.beta)),
        ("c_gamma".into(), format!("{:.17e}", rung.c_gamma)),
        ("kernel_support".into(), rung.model.kernel.support_len().to_string()),
        ("measure".into(), rung.model.measure.label.clone()),
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplicaRecord {
    pub replica: usize,
    /// `values[s][j] = ⟨X(t_s), φ_j⟩`.
    pub values: Vec<Vec<f64>>,
    pub tau: Option<f64>,
    pub jumps: u64,
    pub fields: Vec<Field>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultSet {
    pub system: System,
    pub times: Vec<f64>,
    pub modes: Vec<TestMode>,
    pub replicas: Vec<ReplicaRecord>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub t: f64,
    pub mode: TestMode,
    pub n: usize,
    pub mean: f64,
    pub variance: f64,
    pub var_ci: (f64, f64),
    pub skewness: f64,
    pub excess_kurtosis: f64,
    pub stopped_fraction: f64,
}

pub const CSV_HEADER: &str = "system,t,mode,n,mean,variance,var_ci_lo,var_ci_hi,skewness,excess_kurtosis,stopped_fraction";

impl ResultSet {
    /// Samples of `⟨X(t_s), φ_j⟩` across replicas.
    pub fn samples(&self, s: usize, j: usize) -> Vec<f64> {
        self.replicas.iter().map(|r| r.values[s][j]).collect()
    }

    /// Union of two replica sets; the result is independent of argument order.
    pub fn merge(&self, other: &ResultSet) -> Result<ResultSet> {
        if self.system != other.system || self.times != other.times || self.modes != other.modes {
            return Err(Error::InvalidParameter("result sets differ in system, grid or test functions".into()));
        }
        let mut replicas = self.replicas.clone();
        replicas.extend(other.replicas.iter().cloned());
        replicas.sort_by_key(|r| r.replica);
        if replicas.windows(2).any(|w| w[0].replica == w[1].replica) {
            return Err(Error::InvalidParameter("replica id present in both sets".into()));
        }
        Ok(ResultSet { replicas, ..self.clone() })
    }

    pub fn aggregate(&self) -> Vec<AggregateRow> {
        let mut rows = Vec::new();
        let n = self.replicas.len();
        if n == 0 {
            return rows;
        }
        for (s, &t) in self.times.iter().enumerate() {
            let stopped = self.replicas.iter().filter(|r| r.tau.is_some_and(|tau| tau <= t)).count();
            for (j, mode) in self.modes.iter().enumerate() {
                let x = self.samples(s, j);
                let var = stats::variance(&x);
                let (skewness, excess_kurtosis) = if n > 2 { stats::shape(&x) } else { (f64::NAN, f64::NAN) };
                rows.push(AggregateRow {
                    t,
                    mode: *mode,
                    n,
                    mean: stats::mean(&x),
                    variance: var,
                    var_ci: if n > 1 { stats::variance_ci(var, n, 0.05) } else { (f64::NAN, f64::NAN) },
                    skewness,
                    excess_kurtosis,
                    stopped_fraction: stopped as f64 / n as f64,
                });
            }
        }
        rows
    }

    pub fn csv(&self) -> String {
        let mut s = String::from(CSV_HEADER);
        s.push('\n');
        for r in self.aggregate() {
            let _ = writeln!(
                s,
                "{},{},{},{},{:e},{:e},{:e},{:e},{:e},{:e},{}",
                self.system.label(),
                r.t,
                mode_label(&r.mode),
                r.n,
                r.mean,
                r.variance,
                r.var_ci.0,
                r.var_ci.1,
                r.skewness,
                r.excess_kurtosis,
                r.stopped_fraction
            );
        }
        s
    }

    pub fn total_jumps(&self) -> u64 {
        self.replicas.iter().map(|r| r.jumps).sum()
    }
}

fn pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| Error::InvalidParameter(e.to_string()))
}

/// One lattice replica, seeded from `(seed, "lattice", replica)`.
pub fn lattice_replica(rung: &Rung, cfg: &ExperimentConfig, replica: usize) -> ReplicaRecord {
    let model = &rung.model;
    let side = model.params.side();
    let mut rng = stream(cfg.seed, System::Lattice.label(), replica as u64);
    let state = match cfg.initial {
        InitialSpec::Iid => SpinConfiguration::iid(side, &model.measure, &model.kernel, &mut rng),
        InitialSpec::Zeros => SpinConfiguration::constant(side, &vec![0.0; cfg.m], &model.kernel),
    };
    let mut schedule = Schedule::new(cfg.t_end, cfg.snapshots.clone());
    schedule.check_interval = cfg.check_interval;
    let traj = simulate(model, state, &schedule, &mut rng, &mut NoRecorder);
    let mut fft = Fft2::new(side);
    let values = traj
        .snapshots
        .iter()
        .map(|snap| {
            let spec = snap.x.to_spectral(&mut fft);
            cfg.modes.iter().map(|md| md.pair(&spec)).collect()
        })
        .collect();
    let fields = if cfg.write_fields { traj.snapshots.into_iter().map(|s| s.x).collect() } else { Vec::new() };
    ReplicaRecord { replica, values, tau: traj.tau, jumps: traj.jumps, fields }
}

pub fn continuum_config(rung: &Rung, cfg: &ExperimentConfig) -> ContinuumConfig {
    ContinuumConfig {
        m: cfg.m,
        cutoff: cfg.cutoff,
        dt: cfg.dt,
        noise: cfg.noise.unwrap_or(rung.continuum_noise),
        ..Default::default()
    }
}

/// One continuum replica from `X₀ = 0`, seeded from `(seed, "continuum", replica)`.
pub fn continuum_replica(rung: &Rung, cfg: &ExperimentConfig, replica: usize) -> Result<ReplicaRecord> {
    let mut solver = ContinuumSolver::new(continuum_config(rung, cfg), rung.abar.clone())?;
    let mut rng = stream(cfg.seed, System::Continuum.label(), replica as u64);
    let traj = dpd_solve(&mut solver, None, cfg.t_end, &cfg.snapshots, &mut rng)?;
    let values = traj.snapshots.iter().map(|(_, x)| cfg.modes.iter().map(|md| md.pair(x)).collect()).collect();
    let fields = if cfg.write_fields {
        let mut fft = Fft2::new(solver.side());
        traj.snapshots.iter().map(|(_, x)| x.to_real(&mut fft)).collect()
    } else {
        Vec::new()
    };
    Ok(ReplicaRecord { replica, values, tau: None, jumps: 0, fields })
}

/// Runs replicas `ids` of one system on `threads` workers; output order follows `ids`.
pub fn run_replicas(system: System, rung: &Rung, cfg: &ExperimentConfig, ids: std::ops::Range<usize>, threads: usize) -> Result<ResultSet> {
    let replicas: Vec<ReplicaRecord> = pool(threads)?.install(|| {
        ids.into_par_iter()
            .map(|r| match system {
                System::Lattice => Ok(lattice_replica(rung, cfg, r)),
                System::Continuum => continuum_replica(rung, cfg, r),
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let times = match system {
        System::Lattice => cfg.snapshots.clone(),
        System::Continuum => cfg.snapshots.iter().map(|t| (t / cfg.dt).round() * cfg.dt).collect(),
    };
    Ok(ResultSet { system, times, modes: cfg.modes.clone(), replicas })
}

/// Runs `cfg.replicas` replicas and writes `aggregate.csv`, `manifest.txt` and one manifest per
/// replica (plus binary snapshot fields when requested) under `out`.
pub fn run_experiment(system: System, cfg: &ExperimentConfig, out: &Path, threads: usize) -> Result<ResultSet> {
    let rung = build_rung(cfg)?;
    let set = run_replicas(system, &rung, cfg, 0..cfg.replicas, threads)?;
    write_results(&set, &rung, cfg, out)?;
    Ok(set)
}

pub fn write_results(set: &ResultSet, rung: &Rung, cfg: &ExperimentConfig, out: &Path) -> Result<()> {
    std::fs::create_dir_all(out)?;
    std::fs::write(out.join("aggregate.csv"), set.csv())?;
    let mut entries = vec![("system".to_string(), set.system.label().to_string())];
    entries.extend(derived_entries(rung));
    if set.system == System::Continuum {
        let solver = ContinuumSolver::new(continuum_config(rung, cfg), rung.abar.clone())?;
        entries.push(("solver_side".into(), solver.side().to_string()));
        entries.push(("continuum_noise".into(), format!("{:.17e}", solver.cfg.noise)));
        entries.push(("continuum_constant".into(), format!("{:.17e}", solver.renorm_constant())));
    }
    entries.push(("replicas".into(), set.replicas.len().to_string()));
    entries.push(("total_jumps".into(), set.total_jumps().to_string()));
    let mut text = io::manifest_text(&entries);
    text.push_str("# configuration\n");
    text.push_str(&cfg.to_text());
    std::fs::write(out.join("manifest.txt"), text)?;
    let replica_dir = out.join("replicas");
    std::fs::create_dir_all(&replica_dir)?;
    for r in &set.replicas {
        let mut e = vec![
            ("system".to_string(), set.system.label().to_string()),
            ("replica".to_string(), r.replica.to_string()),
            ("seed".to_string(), cfg.seed.to_string()),
            ("jumps".to_string(), r.jumps.to_string()),
            ("tau".to_string(), r.tau.map(|t| t.to_string()).unwrap_or_else(|| "none".into())),
        ];
        for (s, t) in set.times.iter().enumerate() {
            let vals: Vec<String> = r.values[s].iter().map(|v| format!("{v:.17e}")).collect();
            e.push((format!("values_t{t}"), vals.join(" ")));
        }
        std::fs::write(replica_dir.join(format!("replica-{:05}.txt", r.replica)), io::manifest_text(&e))?;
        for (s, f) in r.fields.iter().enumerate() {
            let tag = if set.system == System::Continuum { 0.0 } else { rung.model.params.gamma };
            io::write_field(&replica_dir.join(format!("replica-{:05}-s{s}.field", r.replica)), f, tag)?;
        }
    }
    Ok(())
}

/// Observed metrics of a result set: `stopped_fraction`, `replicas`, `abs_mean` (maxima over rows).
pub fn result_metrics(set: &ResultSet) -> BTreeMap<String, f64> {
    let rows = set.aggregate();
    let mut m = BTreeMap::new();
    m.insert("stopped_fraction".into(), rows.iter().map(|r| r.stopped_fraction).fold(0.0, f64::max));
    m.insert("replicas".into(), set.replicas.len() as f64);
    m.insert("abs_mean".into(), rows.iter().map(|r| r.mean.abs()).fold(0.0, f64::max));
    m
}

/// Outcome of one `assert_<min|max>_<metric>` line.
#[derive(Debug, Clone, PartialEq)]
pub struct AssertionOutcome {
    pub key: String,
    pub bound: f64,
    /// `None` when the metric is not produced by this run.
    pub observed: Option<f64>,
    pub passed: bool,
}

/// Checks every configured bound whose metric appears in `observed`; metrics that are not
/// observed are reported and count as passed.
pub fn evaluate_assertions(cfg: &ExperimentConfig, observed: &BTreeMap<String, f64>) -> Vec<AssertionOutcome> {
    cfg.assertions
        .iter()
        .map(|(key, &bound)| {
            let (dir, metric) = key.split_once('_').unwrap_or(("", key.as_str()));
            let value = observed.get(metric).copied();
            let passed = match (dir, value) {
                (_, None) => true,
                ("max", Some(v)) => v <= bound,
                ("min", Some(v)) => v >= bound,
                _ => false,
            };
            AssertionOutcome { key: key.clone(), bound, observed: value, passed }
        })
        .collect()
}
