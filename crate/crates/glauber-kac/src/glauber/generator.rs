use super::Model;
use crate::error::{Error, Result};

/// Jump chain of a one-dimensional-spin system on a small torus, fully enumerated.
#[derive(Debug, Clone)]
pub struct ExactGenerator {
    /// Spin values a site can take.
    pub points: Vec<f64>,
    /// Reference weight of each value.
    pub point_weights: Vec<f64>,
    pub sites: usize,
    /// Normalized Gibbs weights `λ(σ) ∝ e^{-βH(σ)} Π ν(σ_x)`, indexed in base `points.len()`.
    pub gibbs: Vec<f64>,
    /// Off-diagonal rates `(from, to, rate)`.
    pub transitions: Vec<(usize, usize, f64)>,
}

/// Lists every configuration and every single-site transition of a scalar model.
pub fn enumerate_generator(model: &Model) -> Result<ExactGenerator> {
    let meas = &model.measure;
    if meas.m != 1 {
        return Err(Error::InvalidParameter("exact enumeration is only available for m = 1".into()));
    }
    let mut points = Vec::new();
    let mut point_weights = Vec::new();
    for (&r, &w) in meas.radii.iter().zip(&meas.weights) {
        if w == 0.0 {
            continue;
        }
        if r == 0.0 {
            points.push(0.0);
            point_weights.push(w);
        } else {
            points.extend([-r, r]);
            point_weights.extend([w / 2.0, w / 2.0]);
        }
    }
    let q = points.len();
    let sites = model.params.sites();
    let total = (q as f64).powi(sites as i32);
    if total > 2e6 {
        return Err(Error::InvalidParameter(format!("{total} states exceed the enumeration limit")));
    }
    let states = total as usize;
    let k = &model.kernel;
    let side = model.params.side();
    let beta = model.params.beta;
    let decode = |mut idx: usize, out: &mut [usize]| {
        for o in out.iter_mut() {
            *o = idx % q;
            idx /= q;
        }
    };
    let pair = |a: usize, b: usize| {
        let (a1, a2) = (a / side, a % side);
        let (b1, b2) = (b / side, b % side);
        k.weight(b1 as i64 - a1 as i64, b2 as i64 - a2 as i64)
    };
    let mut digits = vec![0usize; sites];
    let mut log_w = vec![0.0; states];
    for (s, lw) in log_w.iter_mut().enumerate() {
        decode(s, &mut digits);
        let mut e = 0.0;
        for x in 0..sites {
            for y in 0..sites {
                e += pair(x, y) * points[digits[x]] * points[digits[y]];
            }
        }
        *lw = 0.5 * beta * e + digits.iter().map(|&d| point_weights[d].ln()).sum::<f64>();
    }
    let top = log_w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut gibbs: Vec<f64> = log_w.iter().map(|l| (l - top).exp()).collect();
    let z: f64 = gibbs.iter().sum();
    gibbs.iter_mut().for_each(|g| *g /= z);

    let mut transitions = Vec::with_capacity(states * sites * (q - 1));
    let mut pow = vec![1usize; sites];
    for x in 1..sites {
        pow[x] = pow[x - 1] * q;
    }
    let mut tilt = vec![0.0; q];
    for s in 0..states {
        decode(s, &mut digits);
        for x in 0..sites {
            let h: f64 = (0..sites).map(|y| pair(x, y) * points[digits[y]]).sum();
            for (t, (&p, &w)) in tilt.iter_mut().zip(points.iter().zip(&point_weights)) {
                *t = w * (beta * h * p).exp();
            }
            let norm: f64 = tilt.iter().sum();
            for (v, &t) in tilt.iter().enumerate() {
                if v != digits[x] {
                    let target = s + v * pow[x] - digits[x] * pow[x];
                    transitions.push((s, target, t / norm));
                }
            }
        }
    }
    Ok(ExactGenerator { points, point_weights, sites, gibbs, transitions })
}

impl ExactGenerator {
    pub fn states(&self) -> usize {
        self.gibbs.len()
    }

    /// Largest `|λ(σ) L(σ, σ') - λ(σ') L(σ', σ)|` over all transitions, with `L` in units of the
    /// single-site clock rate.
    pub fn detailed_balance_defect(&self) -> f64 {
        let mut rates = std::collections::HashMap::with_capacity(self.transitions.len());
        for &(a, b, r) in &self.transitions {
            rates.insert((a, b), r);
        }
        self.transitions
            .iter()
            .map(|&(a, b, r)| {
                let back = rates.get(&(b, a)).copied().unwrap_or(0.0);
                (self.gibbs[a] * r - self.gibbs[b] * back).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Largest entry of `|λ L|`, the scale against which the defect is judged.
    pub fn flux_scale(&self) -> f64 {
        self.transitions.iter().map(|&(a, _, r)| self.gibbs[a] * r).fold(0.0, f64::max)
    }

    /// Largest `|Σ_σ λ(σ) L(σ, σ')|`, the stationarity residual.
    pub fn stationarity_defect(&self) -> f64 {
        let mut flow = vec![0.0; self.states()];
        for &(a, b, r) in &self.transitions {
            let f = self.gibbs[a] * r;
            flow[b] += f;
            flow[a] -= f;
        }
        flow.iter().map(|f| f.abs()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_kac_kernel, RingProfile};
    use crate::measures::ReferenceMeasure;
    use crate::params::ModelParams;

    fn model(measure: ReferenceMeasure, beta: f64) -> Model {
        let p = ModelParams::from_half_size(1, 2, 1).unwrap().with_beta(beta);
        let k = build_kac_kernel(&p, &RingProfile).unwrap();
        Model::new(p, k, measure)
    }

    #[test]
    fn ising_three_by_three_is_reversible() {
        let g = enumerate_generator(&model(ReferenceMeasure::ising(), 1.3)).unwrap();
        assert_eq!(g.states(), 512);
        assert_eq!(g.transitions.len(), 512 * 9);
        assert!(g.detailed_balance_defect() < 1e-15);
        assert!(g.stationarity_defect() < 1e-15);
    }

    #[test]
    fn blume_capel_is_reversible() {
        let g = enumerate_generator(&model(ReferenceMeasure::blume_capel(0.4), 0.9)).unwrap();
        assert_eq!(g.states(), 19683);
        assert!(g.detailed_balance_defect() < 1e-14 * g.flux_scale().max(1.0));
    }
}
