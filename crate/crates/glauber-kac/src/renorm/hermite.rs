//! Floating-point Hermite polynomials and the binomial shift formula.

/// `H_k(x, c)` by the three-term recurrence.
pub fn hermite_1d(k: usize, x: f64, c: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let (mut prev, mut cur) = (1.0, x);
    for j in 1..k {
        let next = x * cur - j as f64 * c * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// All of `H_0 .. H_kmax` at one point.
pub fn hermite_table(kmax: usize, x: f64, c: f64) -> Vec<f64> {
    let mut h = Vec::with_capacity(kmax + 1);
    h.push(1.0);
    if kmax >= 1 {
        h.push(x);
    }
    for j in 1..kmax {
        let next = x * h[j] - j as f64 * c * h[j - 1];
        h.push(next);
    }
    h
}

/// `H_k(x, c·I) = Π_i H_{k_i}(x_i, c)`.
pub fn hermite_multi(k: &[usize], x: &[f64], c: f64) -> f64 {
    k.iter().zip(x).map(|(&ki, &xi)| hermite_1d(ki, xi, c)).product()
}

/// Multivariate Hermite polynomial with a general symmetric covariance `t` (row-major `m×m`).
///
/// Recurrence: `H_{k+e_i}(x,T) = x_i H_k(x,T) - Σ_j T_{ij} k_j H_{k-e_j}(x,T)`.
pub fn hermite_cov(k: &[usize], x: &[f64], t: &[f64]) -> f64 {
    let m = k.len();
    let total: usize = k.iter().sum();
    if total == 0 {
        return 1.0;
    }
    let i = k.iter().position(|&v| v > 0).unwrap();
    let mut lower = k.to_vec();
    lower[i] -= 1;
    let mut out = x[i] * hermite_cov(&lower, x, t);
    for j in 0..m {
        if lower[j] > 0 {
            let mut l2 = lower.clone();
            l2[j] -= 1;
            out -= t[i * m + j] * lower[j] as f64 * hermite_cov(&l2, x, t);
        }
    }
    out
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut r = 1.0;
    for i in 0..k {
        r = r * (n - i) as f64 / (i + 1) as f64;
    }
    r
}

/// Enumerates every multi-index `a ≤ k` componentwise.
pub fn sub_indices(k: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &ki in k {
        let mut next = Vec::with_capacity(out.len() * (ki + 1));
        for base in &out {
            for a in 0..=ki {
                let mut v = base.clone();
                v.push(a);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// Terms of `H_k(X + V, c) = Σ_{a ≤ k} C(k,a) V^a H_{k-a}(X, c)`, returned as `(a, C(k,a) V^a)`.
pub fn hermite_shift(k: &[usize], v: &[f64]) -> Vec<(Vec<usize>, f64)> {
    sub_indices(k)
        .into_iter()
        .map(|a| {
            let coef = a
                .iter()
                .zip(k)
                .zip(v)
                .map(|((&ai, &ki), &vi)| binomial(ki, ai) * vi.powi(ai as i32))
                .product();
            (a, coef)
        })
        .collect()
}
