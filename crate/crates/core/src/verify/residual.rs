use num_complex::Complex64;
use serde::Serialize;

use super::sweep::SweepMode;

/// Entries with `|rhs|` below this fraction of the largest magnitude are left
/// out of the ratio statistics.
pub const RATIO_THRESHOLD: f64 = 1e-6;

/// Agreement statistics of one identity `lhs = rhs` over many entries.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualReport {
    pub max_abs_diff: f64,
    /// `max_abs_diff` over the largest entry magnitude of either side.
    pub rel_diff: f64,
    /// Mean of `lhs / rhs` as `[re, im]`, over entries with nonnegligible `rhs`.
    pub ratio_mean: Option<[f64; 2]>,
    /// Largest `|lhs/rhs - ratio_mean|`.
    pub ratio_spread: Option<f64>,
    pub entries_checked: usize,
    pub mode: SweepMode,
}

impl ResidualReport {
    pub fn ratio(&self) -> Option<Complex64> {
        self.ratio_mean.map(|[re, im]| Complex64::new(re, im))
    }

    pub fn within(&self, tol: f64) -> bool {
        self.rel_diff <= tol
    }
}

/// Builds a report from `(lhs, rhs)` pairs, reduced in order.
pub fn compare(pairs: &[(Complex64, Complex64)], mode: SweepMode) -> ResidualReport {
    let mut max_abs: f64 = 0.0;
    let mut max_mag: f64 = 0.0;
    for (l, r) in pairs {
        max_abs = max_abs.max((l - r).norm());
        max_mag = max_mag.max(l.norm()).max(r.norm());
    }
    let cutoff = RATIO_THRESHOLD * max_mag;
    let ratios: Vec<Complex64> = pairs
        .iter()
        .filter(|(_, r)| r.norm() > cutoff && r.norm() > 0.0)
        .map(|(l, r)| l / r)
        .collect();
    let (ratio_mean, ratio_spread) = if ratios.is_empty() {
        (None, None)
    } else {
        let mean = ratios.iter().sum::<Complex64>() / ratios.len() as f64;
        let spread = ratios.iter().map(|z| (z - mean).norm()).fold(0.0, f64::max);
        (Some([mean.re, mean.im]), Some(spread))
    };
    ResidualReport {
        max_abs_diff: max_abs,
        rel_diff: if max_mag > 0.0 { max_abs / max_mag } else { max_abs },
        ratio_mean,
        ratio_spread,
        entries_checked: pairs.len(),
        mode,
    }
}
