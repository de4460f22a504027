//! Exact multivariate polynomials with rational coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Polynomial in `m` variables; keys are exponent vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    m: usize,
    terms: BTreeMap<Vec<u32>, Q>,
}

impl Poly {
    pub fn zero(m: usize) -> Self {
        Self { m, terms: BTreeMap::new() }
    }

    pub fn constant(m: usize, c: Q) -> Self {
        Self::monomial(m, vec![0; m], c)
    }

    pub fn monomial(m: usize, exps: Vec<u32>, c: Q) -> Self {
        assert_eq!(exps.len(), m);
        let mut p = Self::zero(m);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn var(m: usize, i: usize) -> Self {
        let mut e = vec![0; m];
        e[i] = 1;
        Self::monomial(m, e, Q::one())
    }

    /// `|X|² = Σ X_i²`.
    pub fn norm_sq(m: usize) -> Self {
        (0..m).fold(Self::zero(m), |acc, i| acc + Self::var(m, i) * Self::var(m, i))
    }

    /// The radial odd monomial `X^{(j)} |X|^{2k}`.
    pub fn radial_odd(m: usize, j: usize, k: u32) -> Self {
        Self::var(m, j) * Self::norm_sq(m).pow(k)
    }

    pub fn nvars(&self) -> usize {
        self.m
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> Q {
        self.terms.get(exps).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut p = Self::zero(self.m);
        if c.is_zero() {
            return p;
        }
        for (e, v) in &self.terms {
            p.terms.insert(e.clone(), v * c);
        }
        p
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.m, Q::one());
        for _ in 0..k {
            acc = acc * self.clone();
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut p = Self::zero(self.m);
        for (e, v) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                p.add_term(f, v * q(e[i] as i64));
            }
        }
        p
    }

    pub fn laplacian(&self) -> Self {
        (0..self.m).fold(Self::zero(self.m), |acc, i| {
            acc + self.derivative(i).derivative(i)
        })
    }

    /// Wick renormalization with covariance `c·I`: every monomial `X^ℓ` becomes `Π H_{ℓ_i}(X_i, c)`.
    pub fn wick(&self, c: &Q) -> Self {
        let mut out = Self::zero(self.m);
        for (e, v) in &self.terms {
            let mut prod = Self::constant(self.m, v.clone());
            for (i, &k) in e.iter().enumerate() {
                let h = hermite_coeffs(k as usize, c);
                let mut factor = Self::zero(self.m);
                for (p, hc) in h.iter().enumerate() {
                    let mut ex = vec![0; self.m];
                    ex[i] = p as u32;
                    factor.add_term(ex, hc.clone());
                }
                prod = prod * factor;
            }
            out = out + prod;
        }
        out
    }

    /// Substitutes `X ↦ X + V` for a fixed rational shift vector.
    pub fn shift(&self, v: &[Q]) -> Self {
        let mut out = Self::zero(self.m);
        for (e, c) in &self.terms {
            let mut prod = Self::constant(self.m, c.clone());
            for (i, &k) in e.iter().enumerate() {
                let lin = Self::var(self.m, i) + Self::constant(self.m, v[i].clone());
                prod = prod * lin.pow(k);
            }
            out = out + prod;
        }
        out
    }

    pub fn eval(&self, x: &[Q]) -> Q {
        let mut s = Q::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    t *= &x[i];
                }
            }
            s += t;
        }
        s
    }

    pub fn max_abs_coeff(&self) -> Q {
        self.terms.values().map(|v| v.abs()).fold(Q::zero(), |a, b| if b > a { b } else { a })
    }

    fn add_term(&mut self, e: Vec<u32>, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e.clone()).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }
}

/// Coefficients of the one-dimensional Hermite polynomial `H_k(x, c)` in powers of `x`.
///
/// Uses `H_{k+1} = x H_k - k c H_{k-1}`.
pub fn hermite_coeffs(k: usize, c: &Q) -> Vec<Q> {
    let mut prev = vec![Q::one()];
    if k == 0 {
        return prev;
    }
    let mut cur = vec![Q::zero(), Q::one()];
    for j in 1..k {
        let mut next = vec![Q::zero(); j + 2];
        for (p, v) in cur.iter().enumerate() {
            next[p + 1] += v;
        }
        let f = c * q(j as i64);
        for (p, v) in prev.iter().enumerate() {
            next[p] -= v * &f;
        }
        prev = cur;
        cur = next;
    }
    cur
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        assert_eq!(self.m, rhs.m);
        for (e, v) in rhs.terms {
            self.add_term(e, v);
        }
        self
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        self + (-rhs)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Q::one())
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        assert_eq!(self.m, rhs.m);
        let mut out = Poly::zero(self.m);
        for (e1, v1) in &self.terms {
            for (e2, v2) in &rhs.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, v1 * v2);
            }
        }
        out
    }
}
