//! Approximate greatest common divisors of polynomials given by their values
//! at distinct nodes.
//!
//! The pipeline never leaves the Lagrange basis: roots come from a
//! companion pencil built directly on the samples, nearby roots are
//! clustered into multiple roots, the two clustered root sets are paired by
//! a maximum-weight bipartite matching, and the approximate GCD together
//! with the nearby polynomials `P~`, `Q~` is assembled from the matched
//! roots and sampled back onto nodes.

pub mod agcd;
pub mod assignment;
pub mod cli;
pub mod cluster;
pub mod error;
pub mod lagpoly;
pub mod linalg;
pub mod matching;
pub mod metric;
pub mod rootfind;

pub use agcd::{approximate_gcd, AgcdParams, AgcdResult};
pub use cluster::{ClusterParams, MergeRule, Strategy};
pub use error::{Error, Result};
pub use lagpoly::{LagrangePoly, Root, RootList};
pub use matching::{Matching, MatchGraph};
pub use metric::{RootVector, Rho};
pub use rootfind::RootfindReport;

pub use num_complex::Complex64;
