//! Taylor coefficients of the single-site drift for the presets.

use glauber_kac::measures::{taylor_coefficients, taylor_coefficients_by_cumulants, ReferenceMeasure};

fn main() {
    let ising = taylor_coefficients(&ReferenceMeasure::ising(), 1.0, 4);
    println!("ising beta=1: {:?}  (tanh: 0, -1/3, 2/15, -17/315)", ising.c);
    for theta in [0.0, 0.5, -0.5] {
        let bc = ReferenceMeasure::blume_capel(theta);
        let a = taylor_coefficients(&bc, 1.5, 3);
        let b = taylor_coefficients_by_cumulants(&bc, 1.5, 3);
        println!("blume-capel theta={theta} beta=1.5: {:?} (cumulant route {:?})", a.c, b.c);
    }
    for m in 1..=4usize {
        let sphere = ReferenceMeasure::m_vector(m).scaled((m as f64).sqrt());
        let a = taylor_coefficients(&sphere, 1.0, 2);
        println!("m-vector m={m}: a3 = {:.12} (-1/(m+2) = {:.12})", a.c[1], -1.0 / (m as f64 + 2.0));
    }
}
