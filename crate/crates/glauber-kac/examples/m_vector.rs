//! The m-vector model: lattice rung at β = mβ′ against its continuum limit with noise 1/√m.

use glauber_kac::harness::experiment::{build_rung, derived_entries};
use glauber_kac::harness::{ExperimentConfig, MeasureSpec};
use glauber_kac::spde::m_vector_limit;

fn main() {
    for m in [2usize, 3, 4] {
        let mf = m as f64;
        let cfg = ExperimentConfig { gamma: 0.25, m, measure: MeasureSpec::MVector, abar: vec![0.0, -mf / (mf + 2.0)], modes: vec![], ..Default::default() };
        let rung = build_rung(&cfg).unwrap();
        let (limit, noise) = m_vector_limit(m, 0.0);
        let beta = derived_entries(&rung).into_iter().find(|(k, _)| k == "beta").unwrap().1;
        println!("m={m} beta {beta} limit coefficients {:?} noise {noise:.4} (rung noise {:.4})", limit.c, rung.continuum_noise);
    }
}
