//! Trace polynomials and matrix concomitants, made numerically checkable.
//!
//! - [`ncpoly`]: words, trace polynomials, a text grammar and its printer.
//! - [`mattuple`]: tuples of complex matrices, evaluation, conjugation and
//!   random ensembles.
//! - [`invariants`]: trace generators of the invariant ring, quotient
//!   coordinates and similarity transport.
//! - [`concomitants`]: equivariance checks, unitary averaging, the
//!   conditional expectation onto the center and disc probes.
//! - [`structure`]: irreducibility, invariant subspaces, reducible strata.
//! - [`identities`]: identity testing and central polynomials.
//! - [`cli`]: the command-line front end.

pub mod cli;
pub mod concomitants;
pub mod error;
pub mod identities;
pub mod invariants;
pub mod linalg;
pub mod mattuple;
pub mod ncpoly;
pub mod rng;
pub mod structure;

pub use error::{Error, Result};
