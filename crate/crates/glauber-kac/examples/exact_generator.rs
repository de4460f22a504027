//! Enumerates the jump chain on the 3×3 torus and measures its departure from reversibility.

use glauber_kac::glauber::{enumerate_generator, Model};
use glauber_kac::lattice::{build_kac_kernel, RingProfile};
use glauber_kac::measures::ReferenceMeasure;
use glauber_kac::ModelParams;

fn main() {
    let p = ModelParams::from_half_size(1, 2, 1).unwrap();
    let k = build_kac_kernel(&p, &RingProfile).unwrap();
    for (name, measure) in [("ising", ReferenceMeasure::ising()), ("blume-capel(0.3)", ReferenceMeasure::blume_capel(0.3))] {
        for beta in [0.5, 1.0, 2.0] {
            let g = enumerate_generator(&Model::new(p.clone().with_beta(beta), k.clone(), measure.clone())).unwrap();
            println!(
                "{name} beta={beta}: {} states, {} transitions, balance defect {:.2e}, stationarity defect {:.2e}",
                g.states(),
                g.transitions.len(),
                g.detailed_balance_defect(),
                g.stationarity_defect()
            );
        }
    }
}
