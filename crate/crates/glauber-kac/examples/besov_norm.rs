//! Littlewood–Paley blocks and negative Hölder–Besov norms of single Fourier modes.

use glauber_kac::lattice::{besov_norm, Field};
use std::f64::consts::PI;

fn main() {
    let side = 129;
    println!("omega  C^-0.5  C^-1  C^0.5");
    for w in [0, 1, 2, 4, 8, 16, 32] {
        let f = Field::from_fn(side, 1, |_, x, y| (PI * w as f64 * x).cos() * if w == 0 { 1.0 } else { (PI * y).cos() });
        println!("{w:>5} {:.4} {:.4} {:.4}", besov_norm(&f, -0.5, 1), besov_norm(&f, -1.0, 1), besov_norm(&f, 0.5, 2));
    }
}
