//! Continuum solutions through the linear part plus remainder, with the Wick square of the
//! linear part and the running constant.

use glauber_kac::glauber::TestMode;
use glauber_kac::lattice::Fft2;
use glauber_kac::renorm::CoefficientVector;
use glauber_kac::spde::{ContinuumConfig, ContinuumSolver};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let cfg = ContinuumConfig { m: 1, cutoff: 16.0, dt: 2e-3, ..Default::default() };
    let mut solver = ContinuumSolver::new(cfg, CoefficientVector::new(1, vec![0.0, -1.0 / 3.0])).unwrap();
    println!("grid side {} renormalization constant {:.4}", solver.side(), solver.renorm_constant());
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut st = solver.initial_state(None).unwrap();
    let modes = [TestMode::cos(0, 0, 0), TestMode::cos(0, 1, 0), TestMode::sin(0, 1, 1)];
    let mut fft = Fft2::new(solver.side());
    for step in 1..=250 {
        solver.step(&mut st, &mut rng).unwrap();
        if step % 50 == 0 {
            let x = solver.solution(&st);
            let w2 = solver.wick_power(&st, &[2]).unwrap();
            let mean_w2 = w2.data.iter().sum::<f64>() / w2.data.len() as f64;
            println!(
                "t={:.2} <X,phi> {:.4?} sup|X| {:.3} mean :Z^2: {:+.4} c(t) {:.4} sup|V| {:.4}",
                st.t,
                modes.iter().map(|m| m.pair(&x)).collect::<Vec<_>>(),
                x.to_real(&mut fft).sup_norm(),
                mean_w2,
                solver.running_constant(st.t),
                st.v.to_real(&mut fft).sup_norm()
            );
        }
    }
}
