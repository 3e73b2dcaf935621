//! Exhaustive design of multi-level prime arrays (MLPA).
//!
//! An MLPA is a sparse linear array made of `L` uniform subarrays that share
//! the origin, with pairwise-coprime element counts. This crate enumerates
//! every admissible design for a given element budget, scores each by its
//! difference coarray and returns the designs maximising unique and/or
//! consecutive lags, ranked by unit-spacing count and aperture.
//!
//! ```
//! use mlpa::search::{optimize, DesignQuery, Objective};
//!
//! let result = optimize(&DesignQuery::new(23, 3, Objective::Unique)).unwrap();
//! let best = result.recommended().unwrap();
//! assert_eq!(best.config.spacing.spacings(), &[11, 5, 9]);
//! ```

pub mod array;
pub mod cache;
pub mod cli;
pub mod coarray;
pub mod output;
pub mod reference;
pub mod search;

pub use array::{MlpaConfig, Partition, SpacingOrder};
pub use coarray::{difference_coarray, CoarrayReport};
pub use search::{optimize, DesignQuery, DesignResult, Landscape, Objective};
