//! Knapsack problems in free nilpotent groups of class 2, and their
//! two-way translation to Diophantine systems.
//!
//! The crate is organized bottom-up:
//!
//! - [`group`]: collection into normal form, products, powers, commutators.
//! - [`matrix`]: the faithful representation into unitriangular matrices of
//!   size `2n + 1`, used as an independent check on [`group`].
//! - [`symbolic`]: a knapsack instance as a system of degree-2 equations.
//! - [`compiler`]: Diophantine systems compiled into knapsack instances.
//! - [`universal`]: the explicit universal system and a resource report.
//! - [`solvers`]: bounded exhaustive search and the rank-2 pipeline.
//! - [`format`] and [`cli`]: text formats and the command line front end.
//!
//! All types are generic over the scalar; the aliases below fix it to
//! arbitrary-precision integers.

pub mod cli;
pub mod compiler;
pub mod constexpr;
pub mod error;
pub mod format;
pub mod group;
pub mod matrix;
pub mod poly;
pub mod scalar;
pub mod solvers;
pub mod symbolic;
pub mod universal;

pub use num_bigint::BigInt;

pub use constexpr::ConstExpr;
pub use error::{Error, Result};
pub use group::{evaluate_kp, reduce_word, VarBinding};
pub use scalar::{Coefficient, Scalar};
pub use symbolic::{kp_to_system, symbolic_evaluate};

/// Exact integer used by the concrete aliases.
pub type Int = BigInt;
pub type Word = group::Word<Int>;
pub type NormalForm = group::NormalForm<Int>;
pub type KpInstance = group::KpInstance<Int>;
pub type Polynomial = poly::Polynomial<Int>;
pub type Equation = poly::Equation<Int>;
pub type DiophantineSystem = poly::DiophantineSystem<Int>;
/// System whose coefficients may be symbolic constants.
pub type SymbolicSystem = poly::DiophantineSystem<ConstExpr>;
pub type UnitriangularMatrix = matrix::UnitriangularMatrix<Int>;
