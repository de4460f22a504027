//! Coefficients in the radial odd basis `X^{(j)}|X|^{2k}` and the operator `Δ*`.

use super::hermite::{binomial, sub_indices};
use super::poly::{q, Q};
use crate::error::{Error, Result};
use num_traits::{One, Zero};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Arithmetic needed by the coefficient transforms.
pub trait Scalar:
    Clone
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(v: i64) -> Self;
}

impl Scalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }
}

impl Scalar for Q {
    fn from_i64(v: i64) -> Self {
        q(v)
    }
}

/// `Δ(X^{(j)}|X|^{2k}) = 2k(m+2k) X^{(j)}|X|^{2k-2}`.
pub fn radial_laplacian_factor(k: usize, m: usize) -> usize {
    2 * k * (m + 2 * k)
}

/// Entry `i` holds the coefficient of `X^{(j)}|X|^{2i}`, i.e. of degree `2i+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector<T = f64> {
    pub m: usize,
    pub c: Vec<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Bare coefficients ã to renormalized ā: `ā = e^{+(𝔠/2)Δ*} ã`.
    BareToRenormalized,
    /// `ã = e^{-(𝔠/2)Δ*} ā`.
    RenormalizedToBare,
}

impl<T: Scalar> CoefficientVector<T> {
    pub fn new(m: usize, c: Vec<T>) -> Self {
        Self { m, c }
    }

    /// `n` such that the top degree is `2n-1`.
    pub fn n(&self) -> usize {
        self.c.len()
    }

    pub fn delta_star(&self) -> Self {
        let len = self.c.len();
        let mut out = vec![T::zero(); len];
        for i in 0..len.saturating_sub(1) {
            let f = radial_laplacian_factor(i + 1, self.m) as i64;
            out[i] = T::from_i64(f) * self.c[i + 1].clone();
        }
        Self::new(self.m, out)
    }

    /// `e^{s Δ*} c` as a finite sum, `Δ*` being nilpotent.
    pub fn exp_delta_star(&self, s: T) -> Self {
        let mut acc = self.clone();
        let mut term = self.clone();
        for p in 1..self.c.len() {
            term = term.delta_star();
            let f = s.clone() / T::from_i64(p as i64);
            term.c.iter_mut().for_each(|v| *v = v.clone() * f.clone());
            for (a, t) in acc.c.iter_mut().zip(&term.c) {
                *a = a.clone() + t.clone();
            }
        }
        acc
    }

    pub fn transform(&self, constant: T, dir: Direction) -> Self {
        let half = constant / T::from_i64(2);
        match dir {
            Direction::BareToRenormalized => self.exp_delta_star(half),
            Direction::RenormalizedToBare => self.exp_delta_star(-half),
        }
    }
}

pub fn coeff_transform(c: &CoefficientVector, constant: f64, dir: Direction) -> CoefficientVector {
    c.transform(constant, dir)
}

/// `β(γ) = 1 + α (e^{-(C_γ/2)Δ*} ā)_1`.
pub fn beta_gamma(alpha: f64, c_gamma: f64, abar: &CoefficientVector) -> f64 {
    1.0 + alpha * abar.transform(c_gamma, Direction::RenormalizedToBare).c[0]
}

/// Sign convention used when reporting the time-dependent shift `A(t)`.
///
/// Both conventions produce identical coefficients; only the stored number flips sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ShiftConvention {
    /// `A = C - C(t)`, so `A/t → -1/2` as `t → 0` for the lattice constants.
    #[default]
    ConstantMinusRunning,
    RunningMinusConstant,
}

/// Time-dependent coefficients `ā(t) = e^{-(A/2)Δ*} ā` for `A` stored in `conv`.
pub fn shifted_coeffs(abar: &CoefficientVector, a: f64, conv: ShiftConvention) -> CoefficientVector {
    let a = match conv {
        ShiftConvention::ConstantMinusRunning => a,
        ShiftConvention::RunningMinusConstant => -a,
    };
    abar.transform(a, Direction::RenormalizedToBare)
}

/// Coefficient table of the remainder nonlinearity
/// `p̄_t^{(j)}(Z̃+V) = Σ b^{(j)}_{a,b} V^a Z̃^{:b:}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitCoefficients {
    pub m: usize,
    /// `terms[j]` lists `(a, b, coefficient)` for component `j`.
    pub terms: Vec<Vec<(Vec<usize>, Vec<usize>, f64)>>,
}

impl LimitCoefficients {
    pub fn max_degree(&self) -> usize {
        self.terms
            .iter()
            .flatten()
            .map(|(a, b, _)| a.iter().sum::<usize>() + b.iter().sum::<usize>())
            .max()
            .unwrap_or(0)
    }
}

/// Multinomial expansion of `X^{(j)}|X|^{2k}` as `(exponent, coefficient)` pairs.
pub fn radial_monomial_terms(m: usize, j: usize, k: usize) -> Vec<(Vec<usize>, f64)> {
    let mut out = Vec::new();
    let mut exps = vec![0usize; m];
    fn rec(i: usize, left: usize, k: usize, m: usize, j: usize, exps: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, f64)>) {
        if i == m - 1 {
            exps[i] = left;
            let mut coef = factorial(k);
            for &e in exps.iter() {
                coef /= factorial(e);
            }
            let mut ex: Vec<usize> = exps.iter().map(|e| 2 * e).collect();
            ex[j] += 1;
            out.push((ex, coef));
            return;
        }
        for e in 0..=left {
            exps[i] = e;
            rec(i + 1, left - e, k, m, j, exps, out);
        }
    }
    rec(0, k, k, m, j, &mut exps, &mut out);
    out
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|v| v as f64).product()
}

/// Builds `b_{a,b}(t)` from ā and the shift `A` (convention [`ShiftConvention::ConstantMinusRunning`]).
pub fn limit_coeffs(abar: &CoefficientVector, a: f64) -> Result<LimitCoefficients> {
    let m = abar.m;
    if abar.c.is_empty() {
        return Err(Error::InvalidParameter("empty coefficient vector".into()));
    }
    let at = shifted_coeffs(abar, a, ShiftConvention::ConstantMinusRunning);
    let mut terms = Vec::with_capacity(m);
    for j in 0..m {
        let mut acc: std::collections::BTreeMap<(Vec<usize>, Vec<usize>), f64> = Default::default();
        for (k, &ck) in at.c.iter().enumerate() {
            if ck == 0.0 {
                continue;
            }
            for (ell, coef) in radial_monomial_terms(m, j, k) {
                for av in sub_indices(&ell) {
                    let bv: Vec<usize> = ell.iter().zip(&av).map(|(l, x)| l - x).collect();
                    let binom: f64 = ell.iter().zip(&av).map(|(&l, &x)| binomial(l, x)).product();
                    *acc.entry((av, bv)).or_insert(0.0) += ck * coef * binom;
                }
            }
        }
        terms.push(acc.into_iter().filter(|(_, v)| *v != 0.0).map(|((a, b), v)| (a, b, v)).collect());
    }
    Ok(LimitCoefficients { m, terms })
}
