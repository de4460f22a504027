//! Taylor coefficients of `Φ(h) - h` in the radial odd basis.
//!
//! With `M` the moment generating function of the one-dimensional marginal,
//! `Φ(h) = ĥ·M'(β|h|)/M(β|h|)`, so `a_{2j-1} = ℓ_{2j-1} β^{2j-1} - [j = 1]`
//! where `ℓ` are the Taylor coefficients of `M'/M`.

use super::ReferenceMeasure;
use crate::renorm::CoefficientVector;

fn factorial(n: usize) -> f64 {
    (1..=n).map(|v| v as f64).product()
}

/// Full raw moment sequence `μ_0..=μ_{2jmax}` of the marginal (odd entries zero).
fn raw_moments(measure: &ReferenceMeasure, jmax: usize) -> Vec<f64> {
    let even = measure.marginal_moments(jmax);
    (0..=2 * jmax).map(|k| if k % 2 == 0 { even[k / 2] } else { 0.0 }).collect()
}

/// Coefficients `a_1, a_3, …, a_{2n-1}` by series division of `M'` by `M`.
pub fn taylor_coefficients(measure: &ReferenceMeasure, beta: f64, n: usize) -> CoefficientVector {
    let mu = raw_moments(measure, n);
    let deg = 2 * n;
    let m_series: Vec<f64> = (0..deg).map(|k| mu[k] / factorial(k)).collect();
    let dm_series: Vec<f64> = (0..deg).map(|k| mu[k + 1] / factorial(k)).collect();
    let mut quot = vec![0.0; deg];
    for k in 0..deg {
        let mut v = dm_series[k];
        for i in 0..k {
            v -= quot[i] * m_series[k - i];
        }
        quot[k] = v / m_series[0];
    }
    let c = (1..=n)
        .map(|j| {
            let d = 2 * j - 1;
            quot[d] * beta.powi(d as i32) - if j == 1 { 1.0 } else { 0.0 }
        })
        .collect();
    CoefficientVector::new(measure.m, c)
}

/// Cumulants `κ_1..` from raw moments `μ_0 = 1, μ_1, …` by the standard recursion.
pub fn cumulants_from_moments(mu: &[f64]) -> Vec<f64> {
    let k = mu.len();
    let mut kappa = vec![0.0; k];
    for nn in 1..k {
        let mut v = mu[nn];
        for j in 1..nn {
            v -= crate::renorm::binomial(nn - 1, j - 1) * kappa[j] * mu[nn - j];
        }
        kappa[nn] = v;
    }
    kappa
}

/// Same coefficients through `a_{2j-1} = κ_{2j} β^{2j-1}/(2j-1)! - [j = 1]`.
pub fn taylor_coefficients_by_cumulants(measure: &ReferenceMeasure, beta: f64, n: usize) -> CoefficientVector {
    let kappa = cumulants_from_moments(&raw_moments(measure, n));
    let c = (1..=n)
        .map(|j| {
            let d = 2 * j - 1;
            kappa[2 * j] * beta.powi(d as i32) / factorial(d) - if j == 1 { 1.0 } else { 0.0 }
        })
        .collect();
    CoefficientVector::new(measure.m, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ising_matches_tanh() {
        let a = taylor_coefficients(&ReferenceMeasure::ising(), 1.0, 4);
        let expect = [0.0, -1.0 / 3.0, 2.0 / 15.0, -17.0 / 315.0];
        for (x, y) in a.c.iter().zip(&expect) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn gaussian_cumulants() {
        let mu = [1.0, 0.0, 1.0, 0.0, 3.0, 0.0, 15.0];
        let k = cumulants_from_moments(&mu);
        assert!((k[2] - 1.0).abs() < 1e-14);
        assert!(k[4].abs() < 1e-14 && k[6].abs() < 1e-13);
    }

    proptest! {
        #[test]
        fn routes_agree(r1 in 0.1f64..2.0, r2 in 0.0f64..2.0, w in 0.05f64..0.95, beta in 0.2f64..2.0, m in 1usize..5) {
            let meas = ReferenceMeasure::new(m, vec![r1, r2], vec![w, 1.0 - w], "p").unwrap();
            let a = taylor_coefficients(&meas, beta, 4);
            let b = taylor_coefficients_by_cumulants(&meas, beta, 4);
            for (x, y) in a.c.iter().zip(&b.c) {
                prop_assert!((x - y).abs() < 1e-9 * (1.0 + y.abs()));
            }
        }

        #[test]
        fn matches_phi_near_origin(beta in 0.5f64..1.5, m in 1usize..4) {
            let meas = ReferenceMeasure::new(m, vec![0.5, 1.3], vec![0.4, 0.6], "p").unwrap();
            let a = taylor_coefficients(&meas, beta, 4);
            let rho = 0.05;
            let mut h = vec![0.0; m];
            h[0] = rho;
            let phi = meas.phi(beta, &h)[0] - rho;
            let series: f64 = a.c.iter().enumerate().map(|(k, c)| c * rho.powi(2 * k as i32 + 1)).sum();
            prop_assert!((phi - series).abs() < 1e-9);
        }
    }
}
