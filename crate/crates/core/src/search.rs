//! Exhaustive design search.
//!
//! For a budget of `N` elements over `L` levels every pairwise-coprime
//! partition and every fixed-point-free spacing order is scored. The scored
//! design space ([`Landscape`]) is then reduced to the argmax set of the
//! requested objective and ranked by unit-spacing count, aperture and finally
//! the spacing vector itself.

use std::cmp::Ordering;
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::array::{gcd, ArrayError, MlpaConfig, Partition, SpacingOrder};
use crate::coarray::{difference_coarray, CoarrayReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    /// Maximise the number of unique lags.
    Unique,
    /// Maximise the number of consecutive lags.
    Consecutive,
    /// Configurations maximising both at once.
    Joint,
}

impl Objective {
    pub fn as_str(self) -> &'static str {
        match self {
            Objective::Unique => "unique",
            Objective::Consecutive => "consecutive",
            Objective::Joint => "joint",
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Objective {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "unique" => Ok(Objective::Unique),
            "consecutive" => Ok(Objective::Consecutive),
            "joint" => Ok(Objective::Joint),
            other => Err(format!("unknown objective `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignQuery {
    pub total_elements: u32,
    pub levels: u32,
    pub objective: Objective,
    /// Upper bound on every element count, if any.
    pub max_count_bound: Option<u32>,
}

impl DesignQuery {
    pub fn new(total_elements: u32, levels: u32, objective: Objective) -> Self {
        DesignQuery {
            total_elements,
            levels,
            objective,
            max_count_bound: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("no pairwise-coprime decomposition for N={total_elements}, L={levels}")]
    Infeasible { total_elements: u32, levels: u32 },
    #[error(transparent)]
    Array(#[from] ArrayError),
}

fn check_query(total_elements: u32, levels: u32) -> Result<(), SearchError> {
    if levels < 2 {
        return Err(SearchError::InvalidQuery(format!(
            "at least 2 levels required, got {levels}"
        )));
    }
    if total_elements < 1 {
        return Err(SearchError::InvalidQuery(
            "element budget must be positive".into(),
        ));
    }
    Ok(())
}

/// All strictly increasing, pairwise coprime `L`-tuples with every count at
/// least 2 and `Σ N_i = N + L − 1`, in lexicographic order.
pub fn enumerate_coprime_partitions(total_elements: u32, levels: u32) -> Vec<Partition> {
    enumerate_bounded_partitions(total_elements, levels, None)
}

/// Like [`enumerate_coprime_partitions`], with every count capped at `bound`.
pub fn enumerate_bounded_partitions(
    total_elements: u32,
    levels: u32,
    bound: Option<u32>,
) -> Vec<Partition> {
    let mut out = Vec::new();
    if levels == 0 || total_elements == 0 {
        return out;
    }
    let target = total_elements + levels - 1;
    let mut prefix = Vec::with_capacity(levels as usize);
    partitions_rec(&mut prefix, 2, target, levels as usize, bound, &mut out);
    out
}

fn partitions_rec(
    prefix: &mut Vec<u32>,
    start: u32,
    remaining: u32,
    slots: usize,
    bound: Option<u32>,
    out: &mut Vec<Partition>,
) {
    if slots == 0 {
        if remaining == 0 {
            out.push(Partition::new_unchecked(prefix.clone()));
        }
        return;
    }
    if slots == 1 {
        let last = remaining;
        if last >= start
            && bound.is_none_or(|b| last <= b)
            && prefix.iter().all(|&p| gcd(p, last) == 1)
        {
            prefix.push(last);
            out.push(Partition::new_unchecked(prefix.clone()));
            prefix.pop();
        }
        return;
    }
    let s = slots as u32;
    let mut c = start;
    // The remaining slots need at least c+1, c+2, ... so the sum grows by
    // at least s*c + s(s-1)/2.
    while s * c + s * (s - 1) / 2 <= remaining {
        if bound.is_some_and(|b| c > b) {
            break;
        }
        if prefix.iter().all(|&p| gcd(p, c) == 1) {
            prefix.push(c);
            partitions_rec(prefix, c + 1, remaining - c, slots - 1, bound, out);
            prefix.pop();
        }
        c += 1;
    }
}

/// Every rearrangement of the counts with `S_i != N_i` at each position, in
/// lexicographic order.
pub fn enumerate_spacing_orders(partition: &Partition) -> Vec<SpacingOrder> {
    let counts = partition.counts();
    let mut used = vec![false; counts.len()];
    let mut current = Vec::with_capacity(counts.len());
    let mut out = Vec::new();
    derangements_rec(counts, &mut used, &mut current, &mut out);
    out
}

fn derangements_rec(
    counts: &[u32],
    used: &mut [bool],
    current: &mut Vec<u32>,
    out: &mut Vec<SpacingOrder>,
) {
    let pos = current.len();
    if pos == counts.len() {
        out.push(SpacingOrder::new_unchecked(current.clone()));
        return;
    }
    // counts is ascending, so trying indices in order yields lexicographic output
    for j in 0..counts.len() {
        if used[j] || j == pos {
            continue;
        }
        used[j] = true;
        current.push(counts[j]);
        derangements_rec(counts, used, current, out);
        current.pop();
        used[j] = false;
    }
}

/// Number of derangements of `n` items.
pub fn derangement_count(n: u64) -> u64 {
    match n {
        0 => 1,
        1 => 0,
        _ => {
            let (mut a, mut b) = (1u64, 0u64);
            for k in 2..=n {
                let next = (k - 1) * (a + b);
                a = b;
                b = next;
            }
            b
        }
    }
}

/// A fully evaluated design: geometry plus its coarray.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub config: MlpaConfig,
    pub report: CoarrayReport,
}

pub fn evaluate_config(
    partition: &Partition,
    spacing: &SpacingOrder,
) -> Result<Candidate, SearchError> {
    let config = MlpaConfig::new(partition.clone(), spacing.clone())?;
    let report = difference_coarray(&config.positions)
        .expect("a valid configuration always contains the origin");
    Ok(Candidate { config, report })
}

/// Compact score of one valid design.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoredConfig {
    pub spacing: Vec<u32>,
    pub unique: u64,
    pub consecutive: u64,
    pub unit_spacing: u64,
    pub aperture: u64,
    pub holes: u64,
}

impl ScoredConfig {
    fn from_candidate(c: &Candidate) -> Self {
        ScoredConfig {
            spacing: c.config.spacing.spacings().to_vec(),
            unique: c.report.unique_count,
            consecutive: c.report.consecutive_count,
            unit_spacing: c.report.unit_spacing_count,
            aperture: c.config.aperture,
            holes: c.report.hole_count,
        }
    }

    /// Re-expands the score into full geometry and coarray.
    pub fn materialize(&self) -> Candidate {
        let config = MlpaConfig::from_spacing(self.spacing.clone())
            .expect("scored configurations are valid");
        let report = difference_coarray(&config.positions).expect("nonempty");
        Candidate { config, report }
    }

    pub fn value(&self, objective: Objective) -> u64 {
        match objective {
            Objective::Consecutive => self.consecutive,
            Objective::Unique | Objective::Joint => self.unique,
        }
    }
}

/// Ordering used to break ties among equally scored designs: fewer unit
/// spacings first, then smaller aperture, then the spacing vector.
pub fn tie_order(a: &ScoredConfig, b: &ScoredConfig) -> Ordering {
    (a.unit_spacing, a.aperture, &a.spacing).cmp(&(b.unit_spacing, b.aperture, &b.spacing))
}

/// Stable sort by [`tie_order`]. The first element is the recommendation.
pub fn rank_ties(mut optima: Vec<ScoredConfig>) -> Vec<ScoredConfig> {
    optima.sort_by(tie_order);
    optima
}

/// Every valid design for one `(N, L)` pair, scored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Landscape {
    pub total_elements: u32,
    pub levels: u32,
    pub max_count_bound: Option<u32>,
    pub partition_count: u64,
    /// Spacing orders generated, `partition_count * D_L`.
    pub considered: u64,
    /// Spacing orders dropped because subarrays overlap off the origin.
    pub rejected_overlap: u64,
    /// Valid designs, ordered by partition then spacing.
    pub scored: Vec<ScoredConfig>,
}

impl Landscape {
    /// Scores every design, fanning out over the current rayon pool. The
    /// result does not depend on the number of worker threads.
    pub fn explore(total_elements: u32, levels: u32, bound: Option<u32>) -> Self {
        let partitions = enumerate_bounded_partitions(total_elements, levels, bound);
        let per_partition: Vec<(u64, Vec<ScoredConfig>)> = partitions
            .par_iter()
            .map(|p| {
                let orders = enumerate_spacing_orders(p);
                let considered = orders.len() as u64;
                let scored = orders
                    .iter()
                    .filter_map(|s| evaluate_config(p, s).ok())
                    .map(|c| ScoredConfig::from_candidate(&c))
                    .collect();
                (considered, scored)
            })
            .collect();

        let mut considered = 0;
        let mut scored = Vec::new();
        for (n, s) in per_partition {
            considered += n;
            scored.extend(s);
        }
        Landscape {
            total_elements,
            levels,
            max_count_bound: bound,
            partition_count: partitions.len() as u64,
            considered,
            rejected_overlap: considered - scored.len() as u64,
            scored,
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.partition_count > 0
    }

    pub fn unique_max(&self) -> Option<u64> {
        self.scored.iter().map(|s| s.unique).max()
    }

    pub fn consecutive_max(&self) -> Option<u64> {
        self.scored.iter().map(|s| s.consecutive).max()
    }

    /// Reduces the design space to the ranked argmax set of `objective`.
    pub fn resolve(&self, objective: Objective) -> Result<DesignResult, SearchError> {
        let query = DesignQuery {
            total_elements: self.total_elements,
            levels: self.levels,
            objective,
            max_count_bound: self.max_count_bound,
        };
        let (unique_max, consecutive_max) = match (self.unique_max(), self.consecutive_max()) {
            (Some(u), Some(c)) => (u, c),
            _ => {
                return Err(SearchError::Infeasible {
                    total_elements: self.total_elements,
                    levels: self.levels,
                })
            }
        };
        let argmax = |o: Objective| -> Vec<ScoredConfig> {
            let best = if o == Objective::Consecutive {
                consecutive_max
            } else {
                unique_max
            };
            rank_ties(
                self.scored
                    .iter()
                    .filter(|s| s.value(o) == best)
                    .cloned()
                    .collect(),
            )
        };
        let materialize = |v: Vec<ScoredConfig>| -> Vec<Candidate> {
            v.iter().map(ScoredConfig::materialize).collect()
        };

        let result = match objective {
            Objective::Unique | Objective::Consecutive => {
                let optima = argmax(objective);
                let is_joint =
                    optima[0].unique == unique_max && optima[0].consecutive == consecutive_max;
                DesignResult {
                    query,
                    unique_max,
                    consecutive_max,
                    optima: materialize(optima),
                    is_joint,
                    separate: None,
                }
            }
            Objective::Joint => {
                let joint: Vec<ScoredConfig> = argmax(Objective::Unique)
                    .into_iter()
                    .filter(|s| s.consecutive == consecutive_max)
                    .collect();
                let is_joint = !joint.is_empty();
                let separate = (!is_joint).then(|| SeparateOptima {
                    unique: materialize(argmax(Objective::Unique)),
                    consecutive: materialize(argmax(Objective::Consecutive)),
                });
                DesignResult {
                    query,
                    unique_max,
                    consecutive_max,
                    optima: materialize(joint),
                    is_joint,
                    separate,
                }
            }
        };
        Ok(result)
    }
}

/// Both single-objective argmax sets, attached when no design maximises both.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparateOptima {
    pub unique: Vec<Candidate>,
    pub consecutive: Vec<Candidate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignResult {
    pub query: DesignQuery,
    pub unique_max: u64,
    pub consecutive_max: u64,
    /// Argmax set in tie-break order. May be empty only for the joint
    /// objective.
    pub optima: Vec<Candidate>,
    /// For single objectives: the recommended design also attains the other
    /// maximum. For the joint objective: the intersection is nonempty.
    pub is_joint: bool,
    pub separate: Option<SeparateOptima>,
}

impl DesignResult {
    /// Best value of the query's objective. For the joint objective this is
    /// the unique-lag maximum.
    pub fn optimum_value(&self) -> u64 {
        match self.query.objective {
            Objective::Consecutive => self.consecutive_max,
            Objective::Unique | Objective::Joint => self.unique_max,
        }
    }

    pub fn recommended(&self) -> Option<&Candidate> {
        self.optima.first()
    }

    /// Whether `candidate` attains both maxima.
    pub fn attains_both(&self, candidate: &Candidate) -> bool {
        candidate.report.unique_count == self.unique_max
            && candidate.report.consecutive_count == self.consecutive_max
    }

    /// Spacing vectors of the optima, in rank order.
    pub fn spacings(&self) -> Vec<Vec<u32>> {
        self.optima
            .iter()
            .map(|c| c.config.spacing.spacings().to_vec())
            .collect()
    }
}

/// Runs a single design query.
pub fn optimize(query: &DesignQuery) -> Result<DesignResult, SearchError> {
    check_query(query.total_elements, query.levels)?;
    Landscape::explore(query.total_elements, query.levels, query.max_count_bound)
        .resolve(query.objective)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepOutcome {
    Infeasible,
    Feasible {
        unique: Box<DesignResult>,
        consecutive: Box<DesignResult>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub total_elements: u32,
    pub levels: u32,
    pub outcome: SweepOutcome,
}

/// Solves both objectives for each `N` in `range`, marking infeasible budgets.
pub fn sweep(levels: u32, range: RangeInclusive<u32>) -> Vec<SweepEntry> {
    sweep_with(levels, range, |n, l| Landscape::explore(n, l, None))
}

/// [`sweep`] with a caller-supplied landscape provider (for caching).
pub fn sweep_with<F>(levels: u32, range: RangeInclusive<u32>, mut landscape: F) -> Vec<SweepEntry>
where
    F: FnMut(u32, u32) -> Landscape,
{
    range
        .filter(|&n| n >= 1)
        .map(|n| {
            let space = landscape(n, levels);
            let outcome = match (
                space.resolve(Objective::Unique),
                space.resolve(Objective::Consecutive),
            ) {
                (Ok(u), Ok(c)) => SweepOutcome::Feasible {
                    unique: Box::new(u),
                    consecutive: Box::new(c),
                },
                _ => SweepOutcome::Infeasible,
            };
            SweepEntry {
                total_elements: n,
                levels,
                outcome,
            }
        })
        .collect()
}
