//! Variance bounds for weighted sums of correlated random variables.
//!
//! Given weights `a_1..a_n` and random variables `X_1..X_n` with known
//! variances and correlations, this crate computes the exact variance of
//! `sum a_i X_i` together with a family of upper bounds that need only the
//! marginal variances, never the correlations. The bound family is keyed by
//! the weight class (probability simplex, sub-simplex, non-negative,
//! unrestricted), and every bound is backed by a positive-semidefiniteness
//! argument that is itself checkable here (see [`bounds::check_weight_gram_psd`]).
//!
//! On top of the bounds sit Chebyshev tail estimates ([`tails`]), sufficient
//! conditions for a weak law of large numbers over correlated sequences
//! ([`lln`]), two concrete correlated processes with closed-form covariance
//! kernels and seeded samplers ([`processes`]), and an exact integer census of
//! how often the cheap squared-weight bound beats the weighted-variance bound
//! on a discretized grid ([`table1`]).
//!
//! The [`verify`] module bundles every internal consistency check into named,
//! machine-runnable outcomes; the `varbound` binary exposes all of the above
//! as subcommands emitting CSV or JSON.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod lln;
pub mod model;
pub mod processes;
pub mod report;
pub mod table1;
pub mod tails;
mod util;
pub mod verify;

pub use error::{Error, Result};
