//! Approximation scheme for the incremental knapsack problem.
//!
//! Items are packed into a knapsack whose capacity grows over a finite horizon
//! `W_1 <= ... <= W_T`. Once introduced an item stays, and the objective is the
//! lambda-weighted profit `sum_t lambda_t * p(S_t)`. All arithmetic is exact.
//!
//! The crate is layered bottom-up:
//!
//! - [`model`]: instances, solutions, validation and the objective.
//! - [`classes`]: geometric profit classes and prefix-like interval selection.
//! - [`statespace`]: up-rounding, truncation and the pruned vector family.
//! - [`bounded`]: the inverse solver over the pruned family and the
//!   lambda-bounded scheme built on top of it.
//! - [`general`]: time-period clustering and the cluster DP that reduces
//!   arbitrary instances to bounded single-cluster calls.
//! - [`oracle`]: brute-force exact solvers used for verification.

pub mod accuracy;
pub mod bounded;
pub mod classes;
pub mod error;
pub mod general;
pub mod model;
pub mod oracle;
pub mod rational;
pub mod statespace;

pub use accuracy::Accuracy;
pub use error::{Error, Result};
pub use model::{Feasibility, Instance, Item, PeriodRemap, Solution, SuffixLambdas};
pub use rational::Rational;
