//! Multi-level prime array geometry.
//!
//! An array with `L` levels is the union of `L` uniform linear subarrays that
//! share the element at the origin. Subarray `i` has `N_i` elements spaced by
//! `S_i` units, where the counts `N_1 < … < N_L` are pairwise coprime and the
//! spacing vector `S` is a fixed-point-free rearrangement of the counts.
//!
//! All lengths are integers in units of `d`, the half-wavelength unit spacing.
//! Use [`UNIT_SPACING_WAVELENGTHS`] to convert to wavelengths.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Length of the unit spacing `d`, expressed in wavelengths (`d = λ/2`).
pub const UNIT_SPACING_WAVELENGTHS: f64 = 0.5;

/// Greatest common divisor.
pub fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// A single broken invariant of a partition or spacing order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    /// Fewer than two levels.
    TooFewLevels { levels: usize },
    /// The smallest count is below two.
    CountBelowTwo { count: u32 },
    /// `counts[index] >= counts[index + 1]`.
    NotIncreasing { index: usize },
    /// Two counts share a common factor.
    NotCoprime { a: u32, b: u32, gcd: u32 },
    /// Spacing vector length differs from the number of levels.
    LengthMismatch { expected: usize, found: usize },
    /// The spacing vector is not a rearrangement of the counts.
    NotPermutation,
    /// `S_i = N_i` at `index` (zero based).
    FixedPoint { index: usize, value: u32 },
    /// Two subarrays share an element away from the origin.
    OverlappingSubarrays { position: u64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TooFewLevels { levels } => {
                write!(f, "at least 2 levels required, got {levels}")
            }
            Violation::CountBelowTwo { count } => {
                write!(f, "smallest element count must be at least 2, got {count}")
            }
            Violation::NotIncreasing { index } => write!(
                f,
                "element counts must be strictly increasing (positions {} and {})",
                index + 1,
                index + 2
            ),
            Violation::NotCoprime { a, b, gcd } => write!(f, "gcd({a},{b})={gcd}"),
            Violation::LengthMismatch { expected, found } => write!(
                f,
                "spacing vector has {found} entries, partition has {expected} levels"
            ),
            Violation::NotPermutation => {
                write!(
                    f,
                    "spacing vector is not a permutation of the element counts"
                )
            }
            Violation::FixedPoint { index, value } => {
                write!(f, "S_{} = N_{} = {value}", index + 1, index + 1)
            }
            Violation::OverlappingSubarrays { position } => {
                write!(f, "subarrays coincide at position {position}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArrayError {
    #[error("invalid partition: {}", join_violations(.0))]
    InvalidPartition(Vec<Violation>),
    #[error("invalid spacing order: {}", join_violations(.0))]
    InvalidSpacing(Vec<Violation>),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// Element counts of the subarrays, ascending and pairwise coprime.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(counts: Vec<u32>) -> Result<Self, ArrayError> {
        let violations = partition_violations(&counts);
        if violations.is_empty() {
            Ok(Partition(counts))
        } else {
            Err(ArrayError::InvalidPartition(violations))
        }
    }

    /// Wraps counts that are already known to be valid.
    pub(crate) fn new_unchecked(counts: Vec<u32>) -> Self {
        debug_assert!(partition_violations(&counts).is_empty());
        Partition(counts)
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn levels(&self) -> usize {
        self.0.len()
    }

    /// Total number of distinct elements, `Σ N_i − (L − 1)`.
    pub fn total_elements(&self) -> u32 {
        total_elements(self)
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = ArrayError;

    fn try_from(counts: Vec<u32>) -> Result<Self, Self::Error> {
        Partition::new(counts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, &self.0)
    }
}

/// Ordered inter-element spacings, one per subarray.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpacingOrder(Vec<u32>);

impl SpacingOrder {
    /// Checks the spacing against `partition`: it must be a rearrangement of
    /// the counts with `S_i != N_i` everywhere.
    pub fn new(partition: &Partition, spacings: Vec<u32>) -> Result<Self, ArrayError> {
        let violations = spacing_violations(partition.counts(), &spacings);
        if violations.is_empty() {
            Ok(SpacingOrder(spacings))
        } else {
            Err(ArrayError::InvalidSpacing(violations))
        }
    }

    pub(crate) fn new_unchecked(spacings: Vec<u32>) -> Self {
        SpacingOrder(spacings)
    }

    pub fn spacings(&self) -> &[u32] {
        &self.0
    }

    /// The partition recovered by sorting the spacings ascending.
    pub fn sorted_counts(&self) -> Vec<u32> {
        let mut counts = self.0.clone();
        counts.sort_unstable();
        counts
    }
}

impl fmt::Display for SpacingOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, &self.0)
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, values: &[u32]) -> fmt::Result {
    f.write_str("[")?;
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{v}")?;
    }
    f.write_str("]")
}

/// A fully resolved array: partition, spacing order and element positions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MlpaConfig {
    pub partition: Partition,
    pub spacing: SpacingOrder,
    /// Sorted, deduplicated element positions in units of `d`.
    pub positions: Vec<u64>,
    pub total_elements: u32,
    pub aperture: u64,
}

impl MlpaConfig {
    pub fn new(partition: Partition, spacing: SpacingOrder) -> Result<Self, ArrayError> {
        let positions = build_positions(&partition, &spacing)?;
        let aperture = aperture(&partition, &spacing);
        Ok(MlpaConfig {
            total_elements: positions.len() as u32,
            partition,
            spacing,
            positions,
            aperture,
        })
    }

    /// Builds a configuration from a spacing vector alone; the partition is
    /// the sorted spacing vector.
    pub fn from_spacing(spacings: Vec<u32>) -> Result<Self, ArrayError> {
        let mut counts = spacings.clone();
        counts.sort_unstable();
        let partition = Partition::new(counts)?;
        let spacing = SpacingOrder::new(&partition, spacings)?;
        MlpaConfig::new(partition, spacing)
    }

    pub fn levels(&self) -> usize {
        self.partition.levels()
    }
}

/// Number of distinct elements, `Σ N_i − (L − 1)`.
pub fn total_elements(partition: &Partition) -> u32 {
    let counts = partition.counts();
    counts.iter().sum::<u32>() + 1 - counts.len() as u32
}

/// Largest subarray extent, `max_i S_i (N_i − 1)`, in units of `d`.
pub fn aperture(partition: &Partition, spacing: &SpacingOrder) -> u64 {
    partition
        .counts()
        .iter()
        .zip(spacing.spacings())
        .map(|(&n, &s)| u64::from(s) * u64::from(n - 1))
        .max()
        .unwrap_or(0)
}

/// Aperture using only the last two subarrays.
pub fn aperture_last_two(partition: &Partition, spacing: &SpacingOrder) -> u64 {
    let counts = partition.counts();
    let spacings = spacing.spacings();
    let l = counts.len();
    (l.saturating_sub(2)..l)
        .map(|i| u64::from(spacings[i]) * u64::from(counts[i] - 1))
        .max()
        .unwrap_or(0)
}

/// Every generated point `k_i S_i`, before removing repeats.
pub fn raw_positions(partition: &Partition, spacing: &SpacingOrder) -> Vec<u64> {
    partition
        .counts()
        .iter()
        .zip(spacing.spacings())
        .flat_map(|(&n, &s)| (0..u64::from(n)).map(move |k| k * u64::from(s)))
        .collect()
}

/// Element positions of the array, sorted and deduplicated.
///
/// Fails if the spacing is not a derangement of the counts or if two
/// subarrays coincide anywhere but the origin, since then the array would
/// hold fewer than `Σ N_i − (L − 1)` elements.
pub fn build_positions(
    partition: &Partition,
    spacing: &SpacingOrder,
) -> Result<Vec<u64>, ArrayError> {
    let partition_errors = partition_violations(partition.counts());
    if !partition_errors.is_empty() {
        return Err(ArrayError::InvalidPartition(partition_errors));
    }
    let spacing_errors = spacing_violations(partition.counts(), spacing.spacings());
    if !spacing_errors.is_empty() {
        return Err(ArrayError::InvalidSpacing(spacing_errors));
    }
    let (positions, overlaps) = merge_subarrays(partition.counts(), spacing.spacings());
    if overlaps.is_empty() {
        Ok(positions)
    } else {
        Err(ArrayError::InvalidSpacing(
            overlaps
                .into_iter()
                .map(|position| Violation::OverlappingSubarrays { position })
                .collect(),
        ))
    }
}

/// Union of the subarrays plus the sorted non-origin points hit more than once.
fn merge_subarrays(counts: &[u32], spacings: &[u32]) -> (Vec<u64>, Vec<u64>) {
    let mut seen = BTreeSet::new();
    let mut overlaps = BTreeSet::new();
    seen.insert(0u64);
    for (&n, &s) in counts.iter().zip(spacings) {
        for k in 1..u64::from(n) {
            let p = k * u64::from(s);
            if !seen.insert(p) {
                overlaps.insert(p);
            }
        }
    }
    (seen.into_iter().collect(), overlaps.into_iter().collect())
}

fn partition_violations(counts: &[u32]) -> Vec<Violation> {
    let mut out = Vec::new();
    if counts.len() < 2 {
        out.push(Violation::TooFewLevels {
            levels: counts.len(),
        });
    }
    if let Some(&first) = counts.iter().min() {
        if first < 2 {
            out.push(Violation::CountBelowTwo { count: first });
        }
    }
    for (index, w) in counts.windows(2).enumerate() {
        if w[0] >= w[1] {
            out.push(Violation::NotIncreasing { index });
        }
    }
    for i in 0..counts.len() {
        for j in i + 1..counts.len() {
            let g = gcd(counts[i], counts[j]);
            if g != 1 {
                out.push(Violation::NotCoprime {
                    a: counts[i],
                    b: counts[j],
                    gcd: g,
                });
            }
        }
    }
    out
}

fn spacing_violations(counts: &[u32], spacings: &[u32]) -> Vec<Violation> {
    if counts.len() != spacings.len() {
        return vec![Violation::LengthMismatch {
            expected: counts.len(),
            found: spacings.len(),
        }];
    }
    let mut out = Vec::new();
    let mut a = counts.to_vec();
    let mut b = spacings.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    if a != b {
        out.push(Violation::NotPermutation);
    }
    for (index, (&n, &s)) in counts.iter().zip(spacings).enumerate() {
        if n == s {
            out.push(Violation::FixedPoint { index, value: s });
        }
    }
    out
}

/// Lists every broken invariant of the pair. An empty list means the pair
/// describes a valid array with exactly `Σ N_i − (L − 1)` elements.
pub fn validate_config(counts: &[u32], spacings: &[u32]) -> Vec<Violation> {
    let mut out = partition_violations(counts);
    let spacing = spacing_violations(counts, spacings);
    let structural = out.is_empty() && spacing.is_empty();
    out.extend(spacing);
    if structural {
        let (_, overlaps) = merge_subarrays(counts, spacings);
        out.extend(
            overlaps
                .into_iter()
                .map(|position| Violation::OverlappingSubarrays { position }),
        );
    }
    out
}
