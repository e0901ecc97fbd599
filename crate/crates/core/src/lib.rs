//! Lower bounds on the rate of perfect `q`-hash codes obtained by
//! concatenating a random outer code with an explicit inner code.
//!
//! The crate builds the inner codes over finite abelian groups, counts their
//! separated `q`-element subsets exactly, counts complete mappings of the
//! underlying groups and turns those counts into rate bounds using exact
//! rational arithmetic.

pub mod algebra;
pub mod bounds;
pub mod codes;
pub mod error;
pub mod mappings;
pub mod real;
pub mod repro;
pub mod separation;

mod decimal;

pub use algebra::{Element, GroupSpec};
pub use bounds::{ExperimentConfig, RateBound};
pub use codes::{Code, CodeSpec, Construction, Multiplier};
pub use error::{Error, Result};
pub use mappings::MappingCount;
pub use real::Real;
pub use separation::{Method, SeparationReport};

/// Work caps shared by the counting engines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Most `q`-subsets the brute-force engine will visit.
    pub max_subsets: u64,
    /// Longest code the inclusion-exclusion engine accepts.
    pub max_ix_coords: usize,
    /// Largest group order for the complete-mapping search.
    pub max_cm_order: usize,
    /// Most `q`-subsets the Monte Carlo check enumerates per trial.
    pub max_mc_subsets: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_subsets: 1_000_000_000,
            max_ix_coords: 8,
            max_cm_order: 15,
            max_mc_subsets: 1_000_000,
        }
    }
}
