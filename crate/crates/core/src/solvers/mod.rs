//! Bounded search oracles for systems and knapsack instances, an exact
//! integer linear solver, and the rank-2 pipeline that reduces a knapsack
//! instance to a single quadratic equation.
//!
//! All searches return the lexicographically least witness in the box, with
//! variables in declared order. Parallel runs shard the search space into
//! ordered prefixes and keep the first hit in that order, so the answer does
//! not depend on the number of threads.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::group::KpInstance;
use crate::scalar::Coefficient;

mod heisenberg;
mod kp;
mod lattice;
mod search;

pub use heisenberg::{heisenberg_reduce, heisenberg_search, HeisenbergOutcome, HeisenbergReduction};
pub use kp::{bounded_solve_kp, enumerate_kp};
pub use lattice::{column_echelon, solve_linear, ColumnEchelon, LinearSolution};
pub use search::{all_solutions, bounded_solve_system, integer_roots};

/// Range of one search variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Domain {
    /// Inclusive bounds.
    Bounded(BigInt, BigInt),
    /// No bound; the variable must be pinned down by equations on earlier
    /// variables.
    Free,
}

impl Domain {
    pub fn contains(&self, v: &BigInt) -> bool {
        match self {
            Domain::Bounded(lo, hi) => lo <= v && v <= hi,
            Domain::Free => true,
        }
    }
}

/// Per-variable domains, in variable order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchBox {
    domains: Vec<Domain>,
}

impl SearchBox {
    pub fn new(domains: Vec<Domain>) -> Result<Self> {
        for (i, d) in domains.iter().enumerate() {
            if let Domain::Bounded(lo, hi) = d {
                if lo > hi {
                    return Err(Error::InvalidBounds(format!("#{}", i + 1)));
                }
            }
        }
        Ok(SearchBox { domains })
    }

    /// `[-bound, bound]` in every coordinate.
    pub fn symmetric(dim: usize, bound: i64) -> Self {
        let b = BigInt::from(bound.abs());
        SearchBox { domains: vec![Domain::Bounded(-b.clone(), b); dim] }
    }

    /// For an instance carrying a variable map: slots bound to variables get
    /// `[-bound, bound]`, every other slot is left free.
    pub fn induced<C: Coefficient>(instance: &KpInstance<C>, bound: i64) -> Self {
        let b = BigInt::from(bound.abs());
        let mut domains = vec![Domain::Free; instance.len()];
        for binding in &instance.variable_map {
            domains[binding.slot] = Domain::Bounded(-b.clone(), b.clone());
        }
        SearchBox { domains }
    }

    pub fn len(&self) -> usize {
        self.domains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domains.is_empty()
    }

    pub fn domains(&self) -> &[Domain] {
        &self.domains
    }

    pub fn is_bounded(&self) -> bool {
        self.domains.iter().all(|d| matches!(d, Domain::Bounded(..)))
    }
}

/// Named assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub names: Vec<String>,
    pub values: Vec<BigInt>,
}

impl Witness {
    pub fn get(&self, name: &str) -> Option<&BigInt> {
        self.names.iter().position(|n| n == name).map(|i| &self.values[i])
    }
}

/// `name=value` pairs separated by commas.
impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (n, v)) in self.names.iter().zip(&self.values).enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{n}={v}")?;
        }
        Ok(())
    }
}
