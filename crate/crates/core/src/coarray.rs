//! Difference coarray of an integer position set and the lag metrics used to
//! score array designs.
//!
//! Lag counts are two-sided: a hole-free coarray spanning `[-m, m]` has
//! `2m + 1` unique and `2m + 1` consecutive lags. Holes are counted on the
//! positive side only.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoarrayError {
    #[error("position set is empty")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoarrayReport {
    /// Number of distinct elements the report was built from.
    pub element_count: u64,
    /// `weights[l]` is the number of ordered pairs at lag `l >= 0`. The
    /// negative side mirrors it.
    half_weights: Vec<u64>,
    pub unique_count: u64,
    pub consecutive_count: u64,
    pub unit_spacing_count: u64,
    pub hole_count: u64,
}

impl CoarrayReport {
    /// Largest lag present.
    pub fn max_lag(&self) -> i64 {
        (self.half_weights.len() - 1) as i64
    }

    /// Multiplicity of `lag`; zero for lags not in the coarray.
    pub fn weight(&self, lag: i64) -> u64 {
        self.half_weights
            .get(lag.unsigned_abs() as usize)
            .copied()
            .unwrap_or(0)
    }

    /// Distinct lags in ascending order, negative side included.
    pub fn lags(&self) -> Vec<i64> {
        let positive: Vec<i64> = self
            .half_weights
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, &w)| w > 0)
            .map(|(l, _)| l as i64)
            .collect();
        positive
            .iter()
            .rev()
            .map(|l| -l)
            .chain(std::iter::once(0))
            .chain(positive.iter().copied())
            .collect()
    }

    /// Lag → multiplicity over all ordered pairs.
    pub fn weights(&self) -> BTreeMap<i64, u64> {
        self.lags()
            .into_iter()
            .map(|l| (l, self.weight(l)))
            .collect()
    }

    /// Positive lags inside `(0, max_lag)` that are missing.
    pub fn holes(&self) -> Vec<i64> {
        self.half_weights
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, &w)| w == 0)
            .map(|(l, _)| l as i64)
            .collect()
    }
}

/// Builds the difference coarray `{p_i - p_j}` over all ordered pairs of the
/// distinct positions. Duplicate input positions are collapsed first.
pub fn difference_coarray(positions: &[u64]) -> Result<CoarrayReport, CoarrayError> {
    let mut sorted = positions.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let (first, last) = match (sorted.first(), sorted.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => return Err(CoarrayError::Empty),
    };
    let span = (last - first) as usize;
    let mut half_weights = vec![0u64; span + 1];
    half_weights[0] = sorted.len() as u64;
    for (i, &a) in sorted.iter().enumerate() {
        for &b in &sorted[i + 1..] {
            half_weights[(b - a) as usize] += 1;
        }
    }

    let positive_lags = half_weights[1..].iter().filter(|&&w| w > 0).count() as u64;
    let run = half_weights[1..].iter().take_while(|&&w| w > 0).count() as u64;
    let hole_count = half_weights[1..].iter().filter(|&&w| w == 0).count() as u64;

    Ok(CoarrayReport {
        element_count: sorted.len() as u64,
        unit_spacing_count: half_weights.get(1).copied().unwrap_or(0),
        unique_count: 2 * positive_lags + 1,
        consecutive_count: 2 * run + 1,
        hole_count,
        half_weights,
    })
}

/// `l_ug`: number of distinct lags, both signs and zero.
pub fn unique_lag_count(report: &CoarrayReport) -> u64 {
    report.unique_count
}

/// `l_cg`: `2m + 1` for the largest `m` with every lag in `[0, m]` present.
pub fn consecutive_lag_count(report: &CoarrayReport) -> u64 {
    report.consecutive_count
}

/// `v_Δ`: number of unordered element pairs one unit apart.
pub fn unit_spacing_count(positions: &[u64]) -> u64 {
    let mut sorted = positions.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    sorted.windows(2).filter(|w| w[1] - w[0] == 1).count() as u64
}

pub fn hole_count(report: &CoarrayReport) -> u64 {
    report.hole_count
}

#[cfg(test)]
mod tests {
    use super::*;

    const MLPA_235: [u64; 8] = [0, 2, 3, 4, 5, 6, 9, 12];

    #[test]
    fn two_element_pair() {
        let r = difference_coarray(&[0, 1]).unwrap();
        assert_eq!(r.lags(), vec![-1, 0, 1]);
        assert_eq!(r.weights(), BTreeMap::from([(-1, 1), (0, 2), (1, 1)]));
        assert_eq!(r.unique_count, 3);
        assert_eq!(r.consecutive_count, 3);
    }

    #[test]
    fn singleton() {
        let r = difference_coarray(&[7]).unwrap();
        assert_eq!(r.lags(), vec![0]);
        assert_eq!(r.unique_count, 1);
        assert_eq!(r.consecutive_count, 1);
        assert_eq!(r.hole_count, 0);
        assert_eq!(r.unit_spacing_count, 0);
    }

    #[test]
    fn empty_input() {
        assert_eq!(difference_coarray(&[]), Err(CoarrayError::Empty));
    }

    #[test]
    fn uniform_array() {
        let r = difference_coarray(&[0, 1, 2, 3]).unwrap();
        assert_eq!(unique_lag_count(&r), 7);
        assert_eq!(consecutive_lag_count(&r), 7);
        assert_eq!(hole_count(&r), 0);
        assert_eq!(unit_spacing_count(&[0, 1, 2, 3]), 3);
        assert_eq!(r.unit_spacing_count, 3);
    }

    #[test]
    fn single_gap() {
        let r = difference_coarray(&[0, 2]).unwrap();
        assert_eq!(r.unique_count, 3);
        assert_eq!(r.consecutive_count, 1);
        assert_eq!(r.hole_count, 1);
        assert_eq!(r.holes(), vec![1]);
    }

    // Frozen from a direct double loop over all 64 ordered pairs.
    #[test]
    fn three_level_array_metrics() {
        let r = difference_coarray(&MLPA_235).unwrap();
        assert_eq!(r.unique_count, 23);
        assert_eq!(r.consecutive_count, 21);
        assert_eq!(r.unit_spacing_count, 4);
        assert_eq!(unit_spacing_count(&MLPA_235), 4);
        assert_eq!(r.hole_count, 1);
        assert_eq!(r.holes(), vec![11]);
        assert_eq!(r.weight(0), 8);
        assert_eq!(r.weight(3), 5);
        assert_eq!(r.weight(-9), 2);
        assert_eq!(r.weight(11), 0);
        assert_eq!(r.max_lag(), 12);
    }

    #[test]
    fn coprime_reference_unit_spacings() {
        assert_eq!(unit_spacing_count(&[0, 2, 3, 4, 6, 9]), 2);
    }

    #[test]
    fn duplicates_collapse() {
        let a = difference_coarray(&[0, 0, 3, 1]).unwrap();
        let b = difference_coarray(&[0, 1, 3]).unwrap();
        assert_eq!(a, b);
    }
}
