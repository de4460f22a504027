//! Atomic isotropic measures whose Glauber drift carries prescribed renormalized coefficients.

use glauber_kac::lattice::{build_kac_kernel, RingProfile};
use glauber_kac::measures::{admissible_leading_bound, solve_moment_problem, target_moments};
use glauber_kac::renorm::{beta_gamma, c_gamma, CoefficientVector};
use glauber_kac::ModelParams;

fn main() {
    println!("leading-coefficient bound for n = 2: {}", admissible_leading_bound(2));
    let cases = [(2, 1, vec![0.0, -0.2]), (2, 2, vec![0.1, -0.2]), (3, 1, vec![0.0, 0.05, -0.01])];
    for (n, m, a) in cases {
        let params = ModelParams::new(0.25, n, m).unwrap();
        let kernel = build_kac_kernel(&params, &RingProfile).unwrap();
        let cg = c_gamma(&kernel);
        let abar = CoefficientVector::new(m, a.clone());
        let beta = beta_gamma(params.alpha, cg, &abar);
        let targets = target_moments(n, m, &abar, params.gamma, cg, beta).unwrap();
        let measure = solve_moment_problem(n, m, &abar, params.gamma, cg, beta).unwrap();
        println!("\nn={n} m={m} abar={a:?} C_gamma={cg:.4} beta={beta:.6}");
        for (r, w) in measure.radii.iter().zip(&measure.weights) {
            println!("  radius {r:.6} weight {w:.6}");
        }
        let got = measure.marginal_moments(n);
        for (j, (g, t)) in got.iter().zip(&targets.marginal).enumerate() {
            println!("  E[eta_1^{}] = {g:.10} (target {t:.10})", 2 * j);
        }
    }
    match solve_moment_problem(2, 1, &CoefficientVector::new(1, vec![0.0, -0.5]), 0.0, 0.0, 1.0) {
        Ok(_) => println!("\nunexpected: cubic -0.5 accepted"),
        Err(e) => println!("\ncubic -0.5 for m = 1: {e}"),
    }
}
