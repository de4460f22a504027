//! Variances of the linearized lattice process against the Gaussian prediction.

use glauber_kac::glauber::TestMode;
use glauber_kac::harness::audit::covariance_audit;
use glauber_kac::harness::config::mode_label;
use glauber_kac::harness::{ExperimentConfig, MeasureSpec};

fn main() {
    let cfg = ExperimentConfig {
        gamma: 0.3,
        m: 2,
        measure: MeasureSpec::Synthesized,
        abar: vec![0.0, -0.2],
        replicas: 100,
        t_end: 0.4,
        snapshots: vec![0.2, 0.4],
        modes: vec![TestMode::cos(0, 1, 0), TestMode::sin(1, 0, 1), TestMode::cos(1, 1, 1)],
        ..Default::default()
    };
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let audit = covariance_audit(&cfg, 0.05, threads).unwrap();
    println!("t mode variance lattice_prediction continuum ci covered");
    for r in &audit.rows {
        println!("{} {} {:.5} {:.5} {:.5} ({:.5}, {:.5}) {}", r.t, mode_label(&r.mode), r.variance, r.predicted, r.continuum, r.ci.0, r.ci.1, r.covered);
    }
    for r in &audit.cross {
        println!("t={} corr({}, {}) = {:+.3} band ±{:.3}", r.t, mode_label(&r.a), mode_label(&r.b), r.correlation, r.band);
    }
}
