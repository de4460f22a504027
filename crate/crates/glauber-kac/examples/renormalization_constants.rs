//! Divergent constants along a γ ladder: C_γ against log(1/γ), the running constant, the
//! shift A(t) and the inverse temperature β(γ).

use glauber_kac::lattice::{build_kac_kernel, RingProfile};
use glauber_kac::renorm::{beta_gamma, c_gamma, c_gamma_t, shift_a, CoefficientVector};
use glauber_kac::ModelParams;

fn main() {
    let abar = CoefficientVector::new(1, vec![0.0, -1.0 / 3.0]);
    println!("gamma side C_gamma C/log(1/gamma) C(0.1) C(0.5) A(0.1) A(0.5) beta");
    for g in [0.4, 0.3, 0.2, 0.1, 0.05] {
        let p = ModelParams::new(g, 2, 1).unwrap();
        let k = build_kac_kernel(&p, &RingProfile).unwrap();
        let c = c_gamma(&k);
        println!(
            "{:.4} {} {:.5} {:.5} {:.5} {:.5} {:.5} {:.5} {:.8}",
            p.gamma,
            p.side(),
            c,
            c / (1.0 / p.gamma).ln(),
            c_gamma_t(&k, 0.1),
            c_gamma_t(&k, 0.5),
            shift_a(&k, 0.1),
            shift_a(&k, 0.5),
            beta_gamma(p.alpha, c, &abar)
        );
    }
}
