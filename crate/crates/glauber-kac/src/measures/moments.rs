//! Synthesis of atomic isotropic measures with prescribed even moments.

use super::{marginal_factor, ReferenceMeasure};
use crate::error::{Error, Result};
use crate::renorm::{CoefficientVector, Direction};
use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

fn factorial(n: usize) -> f64 {
    (1..=n).map(|v| v as f64).product()
}

fn gaussian_moment(k: usize) -> BigRational {
    if k % 2 == 1 {
        return BigRational::zero();
    }
    let v: u64 = (1..k as u64).step_by(2).product();
    BigRational::from_integer(BigInt::from(v))
}

fn det_exact(mut a: Vec<Vec<BigRational>>) -> BigRational {
    let n = a.len();
    let mut det = BigRational::from_integer(BigInt::from(1));
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for c in col..n {
                let v = &f * &a[col][c];
                a[r][c] -= v;
            }
        }
    }
    det
}

fn hankel_exact(mu: &[BigRational], p: usize) -> BigRational {
    det_exact((0..=p).map(|i| (0..=p).map(|j| mu[i + j].clone()).collect()).collect())
}

/// `D_p = det(μ_{i+j})_{i,j=0..p}` in exact arithmetic on the given floating-point moments.
pub fn hankel_determinant(moments: &[f64], p: usize) -> Result<f64> {
    if moments.len() < 2 * p + 1 {
        return Err(Error::InvalidParameter(format!("need {} moments for order {p}, got {}", 2 * p + 1, moments.len())));
    }
    let mu: Vec<BigRational> = moments
        .iter()
        .map(|&v| BigRational::from_float(v).ok_or_else(|| Error::InvalidParameter("non-finite moment".into())))
        .collect::<Result<_>>()?;
    Ok(hankel_exact(&mu, p).to_f64().unwrap_or(f64::NAN))
}

/// `-D_{2n} / ((2n-1)! D_{2n-1})` for the standard Gaussian moment sequence.
pub fn admissible_leading_bound(n: usize) -> f64 {
    let mu: Vec<BigRational> = (0..=8 * n).map(gaussian_moment).collect();
    let d_top = hankel_exact(&mu, 2 * n);
    let d_low = hankel_exact(&mu, 2 * n - 1);
    let f = BigRational::from_integer(BigInt::from((1..2 * n as u64).product::<u64>()));
    (-(d_top / (f * d_low))).to_f64().unwrap()
}

/// Moments required of the synthesized measure.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTargets {
    /// Marginal even moments `E[η₁^{2j}]`, `j = 0..=n`.
    pub marginal: Vec<f64>,
    /// Radial moments `E|η|^{2j}`, `j = 0..=n`.
    pub radial: Vec<f64>,
    /// Taylor coefficients `a_{2k-1}` the microscopic drift must carry.
    pub drift: CoefficientVector,
}

/// Translates renormalized coefficients ā into moment targets at scale γ (use `gamma = 0` for the limit).
pub fn target_moments(n: usize, m: usize, abar: &CoefficientVector, gamma: f64, c_gamma: f64, b_gamma: f64) -> Result<MomentTargets> {
    if abar.c.len() != n || abar.m != m {
        return Err(Error::InvalidParameter(format!("expected {n} coefficients for m = {m}")));
    }
    if !(b_gamma > 0.0) {
        return Err(Error::InvalidParameter("inverse temperature must be positive".into()));
    }
    let bare = abar.transform(c_gamma, Direction::RenormalizedToBare);
    let drift: Vec<f64> = (1..=n).map(|k| gamma.powi((2 * n - 2 * k) as i32) * bare.c[k - 1]).collect();
    let mut kappa = vec![0.0; 2 * n + 1];
    kappa[2] = (1.0 + drift[0]) / b_gamma;
    for j in 2..=n {
        kappa[2 * j] = drift[j - 1] * factorial(2 * j - 1) / b_gamma.powi(2 * j as i32 - 1);
    }
    let mut mu = vec![0.0; 2 * n + 1];
    mu[0] = 1.0;
    for k in 1..=2 * n {
        let mut v = kappa[k];
        for j in 1..k {
            v += crate::renorm::binomial(k - 1, j - 1) * kappa[j] * mu[k - j];
        }
        mu[k] = v;
    }
    let marginal: Vec<f64> = (0..=n).map(|j| mu[2 * j]).collect();
    let radial = marginal.iter().enumerate().map(|(j, v)| v / marginal_factor(m, j)).collect();
    Ok(MomentTargets { marginal, radial, drift: CoefficientVector::new(m, drift) })
}

const DEGENERACY_TOL: f64 = 1e-10;

/// Builds an atomic isotropic measure whose marginal reproduces the targets of [`target_moments`].
///
/// The radial law is read off a symmetric Gauss quadrature for the sequence
/// `1, 0, E|η|², 0, …, E|η|^{2n}, 0` with `n + 1` nodes, or fewer when the
/// Hankel matrix is singular.
pub fn solve_moment_problem(n: usize, m: usize, abar: &CoefficientVector, gamma: f64, c_gamma: f64, b_gamma: f64) -> Result<ReferenceMeasure> {
    let top = *abar.c.last().ok_or_else(|| Error::InvalidParameter("empty coefficients".into()))?;
    if !(top < 0.0) {
        return Err(Error::InvalidParameter(format!("leading coefficient must be negative, got {top}")));
    }
    let bound = admissible_leading_bound(n);
    if top <= bound {
        let mu: Vec<BigRational> = (0..=8 * n).map(gaussian_moment).collect();
        let d_low = hankel_exact(&mu, 2 * n - 1).to_f64().unwrap();
        let det = d_low * factorial(2 * n - 1) * (top - bound);
        return Err(Error::InfeasibleMoments { order: 2 * n, determinant: det });
    }
    let targets = target_moments(n, m, abar, gamma, c_gamma, b_gamma)?;
    let lift: Vec<f64> = (0..=2 * n + 1).map(|k| if k % 2 == 0 { targets.radial[k / 2] } else { 0.0 }).collect();
    let hankel = |i: usize, j: usize| lift[i + j];

    // Cholesky pivots of the (n+1)×(n+1) Hankel matrix locate the first singular or negative minor.
    let size = n + 1;
    let mut r = vec![vec![0.0; size + 1]; size + 1];
    let mut nodes = size;
    for j in 0..size {
        let mut d = hankel(j, j);
        for i in 0..j {
            d -= r[i][j] * r[i][j];
        }
        let scale = hankel(j, j).abs().max(1.0);
        if d < -DEGENERACY_TOL * scale {
            let det = hankel_determinant(&lift, j)?;
            return Err(Error::InfeasibleMoments { order: j, determinant: det });
        }
        if d <= DEGENERACY_TOL * scale {
            nodes = j;
            break;
        }
        r[j][j] = d.sqrt();
        for k in j + 1..=size {
            if j + k > 2 * n + 1 {
                break;
            }
            let mut v = hankel(j, k);
            for i in 0..j {
                v -= r[i][j] * r[i][k];
            }
            r[j][k] = v / r[j][j];
        }
    }
    if nodes == 0 {
        return Err(Error::InfeasibleMoments { order: 0, determinant: lift[0] });
    }
    // Last column of the Cholesky factor for the reduced node count.
    for j in 0..nodes {
        let k = nodes;
        let mut v = hankel(j, k);
        for i in 0..j {
            v -= r[i][j] * r[i][k];
        }
        r[j][k] = v / r[j][j];
    }
    let mut jac = DMatrix::<f64>::zeros(nodes, nodes);
    for j in 0..nodes {
        let prev = if j == 0 { 0.0 } else { r[j - 1][j] / r[j - 1][j - 1] };
        jac[(j, j)] = r[j][j + 1] / r[j][j] - prev;
        if j + 1 < nodes {
            let b = r[j + 1][j + 1] / r[j][j];
            jac[(j, j + 1)] = b;
            jac[(j + 1, j)] = b;
        }
    }
    let eig = SymmetricEigen::new(jac);
    let mut radii: Vec<f64> = Vec::new();
    let mut weights: Vec<f64> = Vec::new();
    for (i, &x) in eig.eigenvalues.iter().enumerate() {
        let w = lift[0] * eig.eigenvectors[(0, i)].powi(2);
        let rad = x.abs();
        match radii.iter().position(|&q| (q - rad).abs() <= 1e-9 * (1.0 + rad)) {
            Some(p) => weights[p] += w,
            None => {
                radii.push(if rad < 1e-12 { 0.0 } else { rad });
                weights.push(w);
            }
        }
    }
    let measure = ReferenceMeasure::new(m, radii, weights, format!("synthesized(n={n},m={m})"))?;
    for j in 0..=n {
        let got = measure.radial_moment(j);
        let want = targets.radial[j];
        if (got - want).abs() > 1e-9 * want.abs().max(1.0) {
            let det = hankel_determinant(&lift, nodes)?;
            return Err(Error::InfeasibleMoments { order: nodes, determinant: det });
        }
    }
    Ok(measure)
}
