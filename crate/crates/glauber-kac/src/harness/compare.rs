use super::config::mode_label;
use super::experiment::ResultSet;
use super::stats::{bootstrap_median, energy_distance, ks_statistic, permutation_p_value};
use crate::error::{Error, Result};
use crate::glauber::TestMode;
use rand::Rng;
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub t: f64,
    pub mode: TestMode,
    pub energy: f64,
    pub energy_p: f64,
    /// Median energy distance over bootstrap resamples.
    pub energy_median: f64,
    pub ks: f64,
    pub ks_p: f64,
}

pub const COMPARE_HEADER: &str = "t,mode,energy,energy_p,energy_median,ks,ks_p";

fn check_grids(a: &ResultSet, b: &ResultSet) -> Result<()> {
    let times_ok = a.times.len() == b.times.len() && a.times.iter().zip(&b.times).all(|(x, y)| (x - y).abs() <= 1e-6 * (1.0 + x.abs()));
    if !times_ok || a.modes != b.modes {
        return Err(Error::InvalidParameter("snapshot grids or test functions do not match".into()));
    }
    if a.replicas.is_empty() || b.replicas.is_empty() {
        return Err(Error::InvalidParameter("both result sets need replicas".into()));
    }
    Ok(())
}

/// Two-sample distances between the laws of `⟨X(t), φ⟩` in `a` and `b` for every snapshot and
/// test function.
pub fn compare_laws<R: Rng + ?Sized>(a: &ResultSet, b: &ResultSet, permutations: usize, bootstrap: usize, rng: &mut R) -> Result<Vec<ComparisonRow>> {
    check_grids(a, b)?;
    let mut rows = Vec::new();
    for (s, &t) in a.times.iter().enumerate() {
        for (j, mode) in a.modes.iter().enumerate() {
            let (x, y) = (a.samples(s, j), b.samples(s, j));
            let energy = energy_distance(&x, &y);
            let ks = ks_statistic(&x, &y);
            let energy_p = permutation_p_value(&x, &y, permutations, energy_distance, rng);
            let ks_p = permutation_p_value(&x, &y, permutations, ks_statistic, rng);
            let energy_median = if bootstrap > 0 { bootstrap_median(&x, &y, bootstrap, energy_distance, rng) } else { energy };
            rows.push(ComparisonRow { t, mode: *mode, energy, energy_p, energy_median, ks, ks_p });
        }
    }
    Ok(rows)
}

pub fn comparison_csv(rows: &[ComparisonRow]) -> String {
    let mut s = format!("{COMPARE_HEADER}\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{:e},{},{:e},{:e},{}", r.t, mode_label(&r.mode), r.energy, r.energy_p, r.energy_median, r.ks, r.ks_p);
    }
    s
}

/// Monotonicity of a distance across a ladder ordered from coarse to fine.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderTrend {
    /// `distances[i][r]`: comparison `i` at rung `r`.
    pub distances: Vec<Vec<f64>>,
    pub monotone: Vec<bool>,
}

impl LadderTrend {
    pub fn monotone_count(&self) -> usize {
        self.monotone.iter().filter(|&&b| b).count()
    }

    pub fn majority(&self) -> bool {
        2 * self.monotone_count() > self.monotone.len()
    }
}

/// Collects `energy_median` per `(t, φ)` across rungs and marks strictly decreasing series.
pub fn ladder_trend(rungs: &[Vec<ComparisonRow>]) -> Result<LadderTrend> {
    let len = rungs.first().map_or(0, |r| r.len());
    if rungs.iter().any(|r| r.len() != len) {
        return Err(Error::InvalidParameter("rungs compare different (t, φ) sets".into()));
    }
    let distances: Vec<Vec<f64>> = (0..len).map(|i| rungs.iter().map(|r| r[i].energy_median).collect()).collect();
    let monotone = distances.iter().map(|d| d.windows(2).all(|w| w[1] < w[0])).collect();
    Ok(LadderTrend { distances, monotone })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::experiment::{ReplicaRecord, System};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn gaussian_set(n: usize, shift: f64, offset: usize, rng: &mut ChaCha8Rng) -> ResultSet {
        let replicas = (0..n)
            .map(|r| {
                let v: f64 = StandardNormal.sample(rng);
                ReplicaRecord { replica: offset + r, values: vec![vec![v + shift]], tau: None, jumps: 0, fields: vec![] }
            })
            .collect();
        ResultSet { system: System::Lattice, times: vec![0.5], modes: vec![TestMode::cos(0, 1, 0)], replicas }
    }

    #[test]
    fn same_law_is_not_rejected_and_shift_is() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = gaussian_set(150, 0.0, 0, &mut rng);
        let b = gaussian_set(150, 0.0, 150, &mut rng);
        let c = gaussian_set(150, 0.8, 300, &mut rng);
        let same = compare_laws(&a, &b, 199, 0, &mut rng).unwrap();
        let diff = compare_laws(&a, &c, 199, 0, &mut rng).unwrap();
        assert!(same[0].energy_p > 0.01 && same[0].ks_p > 0.01);
        assert!(diff[0].energy_p < 0.01 && diff[0].ks_p < 0.01);
    }

    #[test]
    fn mismatched_grids_are_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let a = gaussian_set(10, 0.0, 0, &mut rng);
        let mut b = a.clone();
        b.times = vec![0.25];
        assert!(compare_laws(&a, &b, 9, 0, &mut rng).is_err());
    }

    #[test]
    fn trend_counts_strict_decrease() {
        let row = |d: f64| ComparisonRow { t: 0.5, mode: TestMode::cos(0, 1, 0), energy: d, energy_p: 1.0, energy_median: d, ks: 0.0, ks_p: 1.0 };
        let rungs = vec![vec![row(0.3), row(0.1)], vec![row(0.2), row(0.2)], vec![row(0.1), row(0.05)]];
        let t = ladder_trend(&rungs).unwrap();
        assert_eq!(t.monotone, vec![true, false]);
        assert!(!t.majority());
    }
}
