//! The bare drift polynomial rewritten in Wick powers, checked in exact arithmetic.

use glauber_kac::renorm::poly::{q_frac, Q};
use glauber_kac::renorm::{radial_laplacian_factor, CoefficientVector, Direction, Poly};

fn main() {
    let m = 2;
    let bare = CoefficientVector::<Q>::new(m, vec![q_frac(1, 2), q_frac(-3, 4), q_frac(1, 5)]);
    let c = q_frac(7, 3);
    let renorm = bare.transform(c.clone(), Direction::BareToRenormalized);
    println!("bare {:?}", bare.c.iter().map(|v| v.to_string()).collect::<Vec<_>>());
    println!("renormalized with c = {c}: {:?}", renorm.c.iter().map(|v| v.to_string()).collect::<Vec<_>>());
    let plain = (0..3).fold(Poly::zero(m), |acc, k| acc + Poly::radial_odd(m, 0, k).scale(&bare.c[k as usize]));
    let wick = (0..3).fold(Poly::zero(m), |acc, k| acc + Poly::radial_odd(m, 0, k).wick(&c).scale(&renorm.c[k as usize]));
    println!("sum of bare monomials equals sum of Wick powers: {}", plain == wick);
    for k in 1..=4 {
        println!("Δ(X1|X|^{}) = {} X1|X|^{}", 2 * k, radial_laplacian_factor(k, m), 2 * k - 2);
    }
}
