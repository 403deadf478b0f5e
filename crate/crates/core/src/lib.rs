//! Decision procedures for finite interactions.
//!
//! An interaction is a symmetric, loop-free graph on ordered pairs of states.
//! This crate decides whether an interaction is exchangeable, separable and
//! irreducibly quantified. The last property is reduced to an equality of
//! binomial ideals attached to the commutative semigroup presented by the
//! interaction, and every verdict can be cross-checked against a brute-force
//! search over configuration spaces.
//!
//! Module layout:
//!
//! - [`model`]: interactions, conserved quantities, configurations, site graphs.
//! - [`linalg`]: exact integer linear algebra (kernels, HNF, SNF, saturation).
//! - [`congruence`]: the semigroup presentation and a brute-force congruence oracle.
//! - [`binomial`]: pure-difference binomial ideals and Buchberger completion.
//! - [`decision`]: the full decision pipeline producing a [`decision::Verdict`].
//! - [`verification`]: configuration spaces and independent checks.
//! - [`cli`]: command implementations behind the `irrq` binary.

pub mod binomial;
pub mod cli;
pub mod congruence;
pub mod decision;
pub mod error;
pub mod linalg;
pub mod model;
mod serde_big;
pub mod verification;

pub use binomial::{Binomial, GroebnerBasis, MonomialOrder};
pub use congruence::{ExponentVector, Presentation};
pub use decision::{decide, DecideOptions, Verdict};
pub use error::{Error, LoadError, ResourceError};
pub use linalg::{IntMatrix, Lattice, SmithDecomposition};
pub use model::{ConservedBasis, ConservedQuantity, Configuration, Interaction, SiteGraph, StatePair};
