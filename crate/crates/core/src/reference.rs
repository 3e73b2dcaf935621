//! Nested and coprime reference geometries for comparison against MLPA designs.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::array::gcd;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReferenceError {
    #[error("nested array parameters must be at least 1, got ({0}, {1})")]
    NestedParams(u32, u32),
    #[error("coprime array requires gcd(M, N)=1 and 1 <= M < N, got M={0}, N={1}")]
    CoprimeParams(u32, u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReferenceFamily {
    Nested,
    Coprime,
}

impl fmt::Display for ReferenceFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReferenceFamily::Nested => "nested",
            ReferenceFamily::Coprime => "coprime",
        })
    }
}

impl FromStr for ReferenceFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "nested" => Ok(ReferenceFamily::Nested),
            "coprime" => Ok(ReferenceFamily::Coprime),
            other => Err(format!("unknown family `{other}`")),
        }
    }
}

/// A reference array family with its two integer parameters: `(N1, N2)` for
/// nested arrays, `(M, N̄)` for coprime arrays.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceSpec {
    pub family: ReferenceFamily,
    pub params: (u32, u32),
}

impl ReferenceSpec {
    pub fn positions(&self) -> Result<Vec<u64>, ReferenceError> {
        let (a, b) = self.params;
        match self.family {
            ReferenceFamily::Nested => nested_positions(a, b),
            ReferenceFamily::Coprime => coprime_positions(a, b),
        }
    }

    /// Parameters used to reach exactly `total` elements.
    ///
    /// Nested: `N1 = ⌊N/2⌋`, `N2 = N − N1`. Coprime: the largest `M >= 2`
    /// with `M < N̄ = N + 1 − 2M` and `gcd(M, N̄) = 1`.
    pub fn for_total(family: ReferenceFamily, total: u32) -> Option<Self> {
        let params = match family {
            ReferenceFamily::Nested => {
                if total < 2 {
                    return None;
                }
                (total / 2, total - total / 2)
            }
            ReferenceFamily::Coprime => (2..)
                .take_while(|&m| 3 * m < total + 1)
                .filter(|&m| gcd(m, total + 1 - 2 * m) == 1)
                .last()
                .map(|m| (m, total + 1 - 2 * m))?,
        };
        Some(ReferenceSpec { family, params })
    }
}

/// Dense ULA `{1..N1}` followed by sparse `{k(N1+1) : k = 1..N2}`, shifted to
/// start at 0. `N1 + N2` elements.
pub fn nested_positions(n1: u32, n2: u32) -> Result<Vec<u64>, ReferenceError> {
    if n1 < 1 || n2 < 1 {
        return Err(ReferenceError::NestedParams(n1, n2));
    }
    let dense = 1..=u64::from(n1);
    let sparse = (1..=u64::from(n2)).map(|k| k * (u64::from(n1) + 1));
    Ok(dense.chain(sparse).map(|p| p - 1).collect())
}

/// Extended coprime array: `N̄` elements spaced `M` and `2M` elements spaced
/// `N̄`, sharing the origin. `2M + N̄ − 1` elements.
pub fn coprime_positions(m: u32, n_bar: u32) -> Result<Vec<u64>, ReferenceError> {
    if m < 1 || m >= n_bar || gcd(m, n_bar) != 1 {
        return Err(ReferenceError::CoprimeParams(m, n_bar));
    }
    let (m, n) = (u64::from(m), u64::from(n_bar));
    let mut out: Vec<u64> = (0..n)
        .map(|k| k * m)
        .chain((0..2 * m).map(|k| k * n))
        .collect();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coarray::unit_spacing_count;

    #[test]
    fn nested_three_three() {
        assert_eq!(nested_positions(3, 3).unwrap(), vec![0, 1, 2, 3, 7, 11]);
        assert_eq!(nested_positions(1, 1).unwrap(), vec![0, 1]);
        assert!(nested_positions(0, 2).is_err());
    }

    #[test]
    fn nested_unit_spacings_grow() {
        for n1 in 1..10 {
            let p = nested_positions(n1, n1 + 1).unwrap();
            assert_eq!(unit_spacing_count(&p), u64::from(n1));
        }
    }

    #[test]
    fn coprime_two_three() {
        let p = coprime_positions(2, 3).unwrap();
        assert_eq!(p, vec![0, 2, 3, 4, 6, 9]);
        assert_eq!(unit_spacing_count(&p), 2);
        assert_eq!(coprime_positions(1, 2).unwrap(), vec![0, 1, 2]);
        assert!(coprime_positions(2, 4).is_err());
        assert!(coprime_positions(3, 2).is_err());
    }

    #[test]
    fn params_for_total() {
        let s = ReferenceSpec::for_total(ReferenceFamily::Nested, 9).unwrap();
        assert_eq!(s.params, (4, 5));
        assert_eq!(s.positions().unwrap().len(), 9);

        let s = ReferenceSpec::for_total(ReferenceFamily::Coprime, 6).unwrap();
        assert_eq!(s.params, (2, 3));
        for total in 6..60 {
            if let Some(s) = ReferenceSpec::for_total(ReferenceFamily::Coprime, total) {
                assert_eq!(s.positions().unwrap().len() as u32, total);
            }
        }
        assert!(ReferenceSpec::for_total(ReferenceFamily::Coprime, 5).is_none());
    }
}
