//! Small descriptive-statistics helpers shared by the report builders.

use serde::Serialize;

/// One support point of an empirical distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistributionPoint {
    pub value: f64,
    pub count: u64,
    /// Fraction of observations `<= value`.
    pub cdf: f64,
    /// Fraction of observations `>= value`.
    pub ccdf: f64,
}

/// Empirical CDF and CCDF at every distinct observed value.
pub fn distribution(values: &[f64]) -> Vec<DistributionPoint> {
    let mut sorted: Vec<f64> = values.iter().copied().filter(|v| !v.is_nan()).collect();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut points = Vec::new();
    let mut below = 0usize;
    let mut i = 0;
    while i < sorted.len() {
        let value = sorted[i];
        let mut j = i;
        while j < sorted.len() && sorted[j] == value {
            j += 1;
        }
        let count = j - i;
        points.push(DistributionPoint {
            value,
            count: count as u64,
            cdf: (below + count) as f64 / n,
            ccdf: (sorted.len() - below) as f64 / n,
        });
        below += count;
        i = j;
    }
    points
}

/// Count, mean and quartiles of a sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub count: u64,
    pub mean: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
}

impl Summary {
    /// `None` for an empty sample. Quartiles interpolate linearly between order statistics.
    pub fn of(values: &[f64]) -> Option<Summary> {
        if values.is_empty() {
            return None;
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        // sequential sum over sorted values keeps the result independent of input order
        let mean = sorted.iter().sum::<f64>() / sorted.len() as f64;
        Some(Summary {
            count: sorted.len() as u64,
            mean,
            q1: quantile_sorted(&sorted, 0.25),
            median: quantile_sorted(&sorted, 0.5),
            q3: quantile_sorted(&sorted, 0.75),
        })
    }
}

fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}
