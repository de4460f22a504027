//! Energy distance between lattice and continuum laws of ⟨X(t), φ⟩ along a short γ ladder.

use glauber_kac::harness::compare::{compare_laws, ladder_trend};
use glauber_kac::harness::config::mode_label;
use glauber_kac::harness::experiment::{build_rung, run_replicas, System};
use glauber_kac::harness::rng::stream;
use glauber_kac::harness::ExperimentConfig;

fn main() {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let base = ExperimentConfig { t_end: 0.5, snapshots: vec![0.5], replicas: 80, ..Default::default() };
    let mut rungs = Vec::new();
    let mut continuum = None;
    for g in [0.45, 0.35, 0.25] {
        let cfg = ExperimentConfig { gamma: g, ..base.clone() };
        let rung = build_rung(&cfg).unwrap();
        let lattice = run_replicas(System::Lattice, &rung, &cfg, 0..cfg.replicas, threads).unwrap();
        let cont = continuum.get_or_insert_with(|| run_replicas(System::Continuum, &rung, &cfg, 0..cfg.replicas, threads).unwrap());
        let rows = compare_laws(&lattice, cont, 99, 100, &mut stream(cfg.seed, "compare", rungs.len() as u64)).unwrap();
        for r in &rows {
            println!("gamma {:.4} t={} {} energy {:.4} (p {:.2}) ks {:.3} (p {:.2})", rung.model.params.gamma, r.t, mode_label(&r.mode), r.energy, r.energy_p, r.ks, r.ks_p);
        }
        rungs.push(rows);
    }
    let trend = ladder_trend(&rungs).unwrap();
    println!("{} of {} (t, phi) pairs decrease; strict majority: {}", trend.monotone_count(), trend.monotone.len(), trend.majority());
}
