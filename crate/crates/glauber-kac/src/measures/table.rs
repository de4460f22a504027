use super::{ReferenceMeasure, TiltedMoments};

/// Tabulated tilt summary on `ρ ∈ [0, ρ_max]` with four-point Lagrange interpolation.
#[derive(Debug, Clone)]
pub struct TiltTable {
    step: f64,
    rho_max: f64,
    values: Vec<[f64; 3]>,
    measure: ReferenceMeasure,
    beta: f64,
}

impl TiltTable {
    pub fn new(measure: &ReferenceMeasure, beta: f64, rho_max: f64, intervals: usize) -> Self {
        let rho_max = rho_max.max(1e-12);
        let step = rho_max / intervals as f64;
        let values = (0..=intervals + 3)
            .map(|i| {
                let t = measure.tilted_moments(beta, i as f64 * step);
                [t.mean, t.parallel, t.perpendicular]
            })
            .collect();
        Self { step, rho_max, values, measure: measure.clone(), beta }
    }

    pub fn eval(&self, rho: f64) -> TiltedMoments {
        if rho > self.rho_max * (1.0 + 1e-12) {
            return self.measure.tilted_moments(self.beta, rho);
        }
        let u = rho / self.step;
        let i = (u.floor() as usize).max(1) - 1;
        let f = u - i as f64;
        let w = [
            -(f - 1.0) * (f - 2.0) * (f - 3.0) / 6.0,
            f * (f - 2.0) * (f - 3.0) / 2.0,
            -f * (f - 1.0) * (f - 3.0) / 2.0,
            f * (f - 1.0) * (f - 2.0) / 6.0,
        ];
        let mut out = [0.0; 3];
        for (k, wk) in w.iter().enumerate() {
            for c in 0..3 {
                out[c] += wk * self.values[i + k][c];
            }
        }
        TiltedMoments { mean: out[0], parallel: out[1], perpendicular: out[2] }
    }
}
