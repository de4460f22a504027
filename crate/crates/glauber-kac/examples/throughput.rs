//! Jump events per second of the production (non-recording) simulator.

use glauber_kac::glauber::{simulate, Model, NoRecorder, Schedule, SpinConfiguration};
use glauber_kac::lattice::{build_kac_kernel, RingProfile};
use glauber_kac::measures::ReferenceMeasure;
use glauber_kac::ModelParams;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn main() {
    let gamma: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0.2);
    let params = ModelParams::new(gamma, 2, 1).unwrap();
    let kernel = build_kac_kernel(&params, &RingProfile).unwrap();
    let model = Model::new(params.clone(), kernel, ReferenceMeasure::ising());
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let start = SpinConfiguration::iid(params.side(), &model.measure, &model.kernel, &mut rng);
    let clock = Instant::now();
    let tr = simulate(&model, start, &Schedule::new(2.0, vec![]), &mut rng, &mut NoRecorder);
    let secs = clock.elapsed().as_secs_f64();
    println!(
        "gamma={gamma} side={} stencil={} jumps={} changes={} rate={:.3e}/s",
        params.side(),
        model.kernel.support_len(),
        tr.jumps,
        tr.changes,
        tr.jumps as f64 / secs
    );
}
