use rand::seq::SliceRandom;
use rand::Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

pub fn mean(x: &[f64]) -> f64 {
    if x.is_empty() {
        return f64::NAN;
    }
    x.iter().sum::<f64>() / x.len() as f64
}

/// Unbiased sample variance.
pub fn variance(x: &[f64]) -> f64 {
    let n = x.len();
    if n < 2 {
        return f64::NAN;
    }
    let mu = mean(x);
    x.iter().map(|v| (v - mu) * (v - mu)).sum::<f64>() / (n - 1) as f64
}

pub fn covariance(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    assert_eq!(n, y.len());
    if n < 2 {
        return f64::NAN;
    }
    let (mx, my) = (mean(x), mean(y));
    x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>() / (n - 1) as f64
}

pub fn correlation(x: &[f64], y: &[f64]) -> f64 {
    covariance(x, y) / (variance(x) * variance(y)).sqrt()
}

/// Standardized third and fourth moments (skewness, excess kurtosis).
pub fn shape(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mu = mean(x);
    let m2 = x.iter().map(|v| (v - mu).powi(2)).sum::<f64>() / n;
    let m3 = x.iter().map(|v| (v - mu).powi(3)).sum::<f64>() / n;
    let m4 = x.iter().map(|v| (v - mu).powi(4)).sum::<f64>() / n;
    (m3 / m2.powf(1.5), m4 / (m2 * m2) - 3.0)
}

pub fn median(x: &[f64]) -> f64 {
    let mut v = x.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Two-sided chi-square confidence interval for a Gaussian variance at level `1 - alpha`.
pub fn variance_ci(sample_var: f64, n: usize, alpha: f64) -> (f64, f64) {
    let df = (n - 1) as f64;
    let chi = ChiSquared::new(df).unwrap();
    let lo = df * sample_var / chi.inverse_cdf(1.0 - alpha / 2.0);
    let hi = df * sample_var / chi.inverse_cdf(alpha / 2.0);
    (lo, hi)
}

/// Half-width of the null band for a sample correlation of `n` pairs at level `1 - alpha`
/// (Fisher transform).
pub fn correlation_null_band(n: usize, alpha: f64) -> f64 {
    let z = Normal::new(0.0, 1.0).unwrap().inverse_cdf(1.0 - alpha / 2.0);
    (z / ((n as f64) - 3.0).sqrt()).tanh()
}

/// Two-sided normal quantile `z_{1-alpha/2}`.
pub fn normal_quantile(alpha: f64) -> f64 {
    Normal::new(0.0, 1.0).unwrap().inverse_cdf(1.0 - alpha / 2.0)
}

fn mean_abs_diff_cross(x: &[f64], y: &[f64]) -> f64 {
    let mut s = 0.0;
    for a in x {
        for b in y {
            s += (a - b).abs();
        }
    }
    s / (x.len() * y.len()) as f64
}

/// Sum of `|x_i - x_j|` over ordered pairs, in `O(n log n)`.
fn pairwise_abs_sum(x: &[f64]) -> f64 {
    let mut v = x.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len() as f64;
    2.0 * v.iter().enumerate().map(|(i, &a)| a * (2.0 * i as f64 - n + 1.0)).sum::<f64>()
}

/// Energy distance `2E|X - Y| - E|X - X'| - E|Y - Y'|` with V-statistic self terms.
pub fn energy_distance(x: &[f64], y: &[f64]) -> f64 {
    let (n, m) = (x.len() as f64, y.len() as f64);
    let mut all = x.to_vec();
    all.extend_from_slice(y);
    let total = pairwise_abs_sum(&all);
    let sx = pairwise_abs_sum(x);
    let sy = pairwise_abs_sum(y);
    let cross = (total - sx - sy) / 2.0;
    2.0 * cross / (n * m) - sx / (n * n) - sy / (m * m)
}

/// Kolmogorov–Smirnov statistic `sup |F_x - F_y|`.
pub fn ks_statistic(x: &[f64], y: &[f64]) -> f64 {
    let mut a = x.to_vec();
    let mut b = y.to_vec();
    a.sort_by(|p, q| p.partial_cmp(q).unwrap());
    b.sort_by(|p, q| p.partial_cmp(q).unwrap());
    let (n, m) = (a.len(), b.len());
    let (mut i, mut j) = (0, 0);
    let mut d = 0.0f64;
    while i < n && j < m {
        let v = a[i].min(b[j]);
        while i < n && a[i] <= v {
            i += 1;
        }
        while j < m && b[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    d
}

/// Permutation p-value `(1 + #{T_perm ≥ T_obs}) / (1 + perms)` for a two-sample statistic.
pub fn permutation_p_value<R: Rng + ?Sized>(
    x: &[f64],
    y: &[f64],
    perms: usize,
    stat: impl Fn(&[f64], &[f64]) -> f64,
    rng: &mut R,
) -> f64 {
    let obs = stat(x, y);
    let mut pool = x.to_vec();
    pool.extend_from_slice(y);
    let mut hits = 0usize;
    for _ in 0..perms {
        pool.shuffle(rng);
        let (a, b) = pool.split_at(x.len());
        if stat(a, b) >= obs - 1e-12 * obs.abs() {
            hits += 1;
        }
    }
    (1 + hits) as f64 / (1 + perms) as f64
}

/// Median of the statistic over bootstrap resamples of both samples.
pub fn bootstrap_median<R: Rng + ?Sized>(
    x: &[f64],
    y: &[f64],
    resamples: usize,
    stat: impl Fn(&[f64], &[f64]) -> f64,
    rng: &mut R,
) -> f64 {
    let mut vals = Vec::with_capacity(resamples);
    let mut bx = vec![0.0; x.len()];
    let mut by = vec![0.0; y.len()];
    for _ in 0..resamples {
        for v in bx.iter_mut() {
            *v = x[rng.random_range(0..x.len())];
        }
        for v in by.iter_mut() {
            *v = y[rng.random_range(0..y.len())];
        }
        vals.push(stat(&bx, &by));
    }
    median(&vals)
}

#[doc(hidden)]
pub fn energy_distance_naive(x: &[f64], y: &[f64]) -> f64 {
    2.0 * mean_abs_diff_cross(x, y) - mean_abs_diff_cross(x, x) - mean_abs_diff_cross(y, y)
}
