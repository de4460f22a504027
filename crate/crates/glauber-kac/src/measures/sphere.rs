//! Moment generating function of the uniform law on `S^{m-1}` along one axis.
//!
//! `Z_m(x) = E[e^{x u₁}] = Σ_k (x/2)^{2k} / (k! (m/2)_k)`, which solves
//! `Z'' + (m-1)/x Z' - Z = 0`.

const SERIES_LIMIT: f64 = 40.0;

/// `(log Z_m(x), A_m(x) = Z'/Z, E_x[u₁²] = Z''/Z)` for `x ≥ 0`.
pub fn sphere_tilt(m: usize, x: f64) -> (f64, f64, f64) {
    debug_assert!(x >= 0.0);
    match m {
        1 => {
            let t = x.tanh();
            (log_cosh(x), t, 1.0)
        }
        3 if x > 1e-2 => {
            let log_z = if x > 20.0 {
                x - (2.0 * x).ln() + (-2.0 * x).exp().ln_1p()
            } else {
                (x.sinh() / x).ln()
            };
            let a = 1.0 / x.tanh() - 1.0 / x;
            (log_z, a, 1.0 - 2.0 * a / x)
        }
        _ if x <= SERIES_LIMIT => series(m, x),
        _ => asymptotic(m, x),
    }
}

fn log_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

fn series(m: usize, x: f64) -> (f64, f64, f64) {
    let half_m = m as f64 / 2.0;
    let y = 0.25 * x * x;
    let (mut z, mut dz) = (1.0, 0.0);
    let mut term = 1.0;
    let mut k = 0usize;
    loop {
        k += 1;
        term *= y / (k as f64 * (half_m + k as f64 - 1.0));
        z += term;
        dz += 2.0 * k as f64 * term;
        if term < 1e-17 * z && k as f64 > y.sqrt() {
            break;
        }
    }
    if x == 0.0 {
        return (0.0, 0.0, 1.0 / m as f64);
    }
    let a = dz / (x * z);
    (z.ln(), a, 1.0 - (m as f64 - 1.0) * a / x)
}

fn asymptotic(m: usize, x: f64) -> (f64, f64, f64) {
    let nu = m as f64 / 2.0 - 1.0;
    let scaled = |order: f64| -> f64 {
        let mu = 4.0 * order * order;
        let mut sum = 1.0;
        let mut term = 1.0;
        for k in 1..30 {
            let kk = (2 * k - 1) as f64;
            term *= -(mu - kk * kk) / (k as f64 * 8.0 * x);
            sum += term;
            if term.abs() < 1e-17 {
                break;
            }
        }
        sum
    };
    let s0 = scaled(nu);
    let s1 = scaled(nu + 1.0);
    let log_gamma = statrs::function::gamma::ln_gamma(half_m_of(m));
    let log_z = log_gamma + nu * (2.0 / x).ln() + x - 0.5 * (2.0 * std::f64::consts::PI * x).ln() + s0.ln();
    let a = s1 / s0;
    (log_z, a, 1.0 - (m as f64 - 1.0) * a / x)
}

fn half_m_of(m: usize) -> f64 {
    m as f64 / 2.0
}
