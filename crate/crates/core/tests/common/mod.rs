//! Brute-force reference computations shared by the integration tests.
//! Nothing here calls into the crate's coarray or geometry code.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleMetrics {
    pub unique: u64,
    pub consecutive: u64,
    pub unit_spacing: u64,
    pub holes: u64,
}

/// Double loop over every ordered pair of the deduplicated positions.
pub fn oracle_metrics(positions: &[u64]) -> OracleMetrics {
    let set: BTreeSet<i64> = positions.iter().map(|&p| p as i64).collect();
    let pts: Vec<i64> = set.into_iter().collect();
    let mut lags = HashSet::new();
    let mut unit = 0;
    for &a in &pts {
        for &b in &pts {
            lags.insert(a - b);
            if b - a == 1 {
                unit += 1;
            }
        }
    }
    let mut m = 0;
    while lags.contains(&(m + 1)) {
        m += 1;
    }
    let max = *lags.iter().max().unwrap();
    let holes = (1..max).filter(|l| !lags.contains(l)).count() as u64;
    OracleMetrics {
        unique: lags.len() as u64,
        consecutive: 2 * m as u64 + 1,
        unit_spacing: unit,
        holes,
    }
}

/// Lag multiplicities over ordered pairs.
pub fn oracle_weights(positions: &[u64]) -> HashMap<i64, u64> {
    let pts: BTreeSet<i64> = positions.iter().map(|&p| p as i64).collect();
    let mut w = HashMap::new();
    for &a in &pts {
        for &b in &pts {
            *w.entry(a - b).or_insert(0) += 1;
        }
    }
    w
}

/// Element positions by direct expansion, deduplicated.
pub fn oracle_positions(counts: &[u32], spacings: &[u32]) -> Vec<u64> {
    let mut set = BTreeSet::new();
    for (&n, &s) in counts.iter().zip(spacings) {
        for k in 0..n as u64 {
            set.insert(k * s as u64);
        }
    }
    set.into_iter().collect()
}

pub fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Whether `(counts, spacings)` is admissible: ascending pairwise-coprime
/// counts >= 2, spacing a fixed-point-free rearrangement, and the union has
/// exactly `Σ N_i − (L − 1)` points.
pub fn oracle_is_valid(counts: &[u32], spacings: &[u32]) -> bool {
    let l = counts.len();
    if l < 2 || counts[0] < 2 || counts.windows(2).any(|w| w[0] >= w[1]) {
        return false;
    }
    for i in 0..l {
        for j in i + 1..l {
            if gcd(counts[i], counts[j]) != 1 {
                return false;
            }
        }
    }
    let mut sorted = spacings.to_vec();
    sorted.sort();
    if sorted != counts || counts.iter().zip(spacings).any(|(a, b)| a == b) {
        return false;
    }
    let expected = counts.iter().sum::<u32>() as usize + 1 - l;
    oracle_positions(counts, spacings).len() == expected
}

/// Draws a random admissible configuration with `levels` levels, trying
/// random strictly increasing coprime tuples and random derangements.
pub fn random_config<R: Rng>(rng: &mut R, levels: usize, max_count: u32) -> (Vec<u32>, Vec<u32>) {
    loop {
        let mut pool: Vec<u32> = (2..=max_count).collect();
        pool.shuffle(rng);
        let mut counts: Vec<u32> = Vec::new();
        for c in pool {
            if counts.iter().all(|&x| gcd(x, c) == 1) {
                counts.push(c);
                if counts.len() == levels {
                    break;
                }
            }
        }
        if counts.len() < levels {
            continue;
        }
        counts.sort();
        for _ in 0..50 {
            let mut s = counts.clone();
            s.shuffle(rng);
            if oracle_is_valid(&counts, &s) {
                return (counts, s);
            }
        }
    }
}
