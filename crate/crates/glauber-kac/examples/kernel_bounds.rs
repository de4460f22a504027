//! Fitted constants of the Fourier, log-growth and smoothing estimates along a γ ladder.

use glauber_kac::lattice::{
    besov_norm, build_kac_kernel, heat_semigroup, kernel_bounds, kernel_energy, sup_semigroup_kernel, Fft2, Field, RingProfile,
};
use glauber_kac::ModelParams;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    println!("gamma side max|K| low_d1 low_d2 high_d0 high_d1 high_d2 coercivity energy/log sup_PK smooth_1/2 smooth_1");
    for &g in &[0.4, 0.2, 0.1, 0.05] {
        let p = ModelParams::new(g, 2, 1).unwrap();
        let k = build_kac_kernel(&p, &RingProfile).unwrap();
        let b = kernel_bounds(&k);
        let log = (1.0 / p.gamma).ln();
        let energy = kernel_energy(&k, 1.0) / log;
        let mut fft = Fft2::new(k.side);
        let sup_pk = [0.001, 0.01, 0.1, 0.5, 1.0]
            .iter()
            .map(|&t| sup_semigroup_kernel(&k, t, &mut fft) / ((1.0 / t).min(p.gamma * p.gamma / (p.epsilon * p.epsilon)) * log))
            .fold(0.0, f64::max);
        let smooth = |beta: f64, rng: &mut ChaCha8Rng, fft: &mut Fft2| {
            let (nu, kappa) = (-0.5, 0.1);
            let band = 0.5 * p.gamma / p.epsilon;
            let mut worst: f64 = 0.0;
            for _ in 0..4 {
                let modes: Vec<(f64, f64, f64, f64)> = (0..12)
                    .map(|_| {
                        let r = band * rng.random::<f64>();
                        let th = std::f64::consts::TAU * rng.random::<f64>();
                        (r * th.cos(), r * th.sin(), rng.random::<f64>() - 0.5, std::f64::consts::TAU * rng.random::<f64>())
                    })
                    .collect();
                let x = Field::from_fn(k.side, 1, |_, a, b| {
                    modes.iter().map(|&(w1, w2, amp, ph)| amp * (std::f64::consts::PI * (w1.round() * a + w2.round() * b) + ph).cos()).sum()
                });
                let base = besov_norm(&x, nu, 1);
                for &t in &[0.01, 0.05, 0.2, 1.0] {
                    let y = heat_semigroup(&k, t, &x, fft);
                    worst = worst.max(besov_norm(&y, nu + beta - kappa, 1) * t.powf(beta / 2.0) / base);
                }
            }
            worst
        };
        let s_half = smooth(0.5, &mut rng, &mut fft);
        let s_one = smooth(1.0, &mut rng, &mut fft);
        println!(
            "{:.4} {} {:.4} {:.4} {:.4} {:.4} {:.4} {:.4} {:.4} {:.4} {:.4} {:.4} {:.4}",
            p.gamma, k.side, b.max_abs, b.low_d1, b.low_d2, b.high_d0, b.high_d1, b.high_d2, b.coercivity, energy, sup_pk, s_half, s_one
        );
    }
}
