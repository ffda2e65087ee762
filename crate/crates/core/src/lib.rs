//! Exact computer algebra for equivariant Poincare series of plane
//! valuations and the equivariant monodromy zeta functions derived
//! from them.
//!
//! The building blocks:
//!
//! - [`group`]: finite groups given by multiplication tables, their
//!   subgroups up to conjugacy and one-dimensional characters valued
//!   in Q/Z.
//! - [`burnside`]: equipped G-sets, the Grothendieck ring they
//!   generate, symmetric powers, and the reductions to the ordinary
//!   Burnside ring, to the integers, and to the character ring.
//! - [`series`]: truncated multivariate power series over those
//!   coefficient rings, binomial expansion, and unique factorization
//!   into binomials.
//! - [`resolution`]: dual graphs with a group action, the multiplicity
//!   matrix, and the degree data attached to strata.
//! - [`invariants`]: the Poincare series of a resolution in factored
//!   form, the two zeta functions, and the recovery of the zeta
//!   functions from a factored series.
//!
//! All arithmetic is exact (machine integers and exact rationals); no
//! floating point is used anywhere. Values are immutable once built and
//! all operations are pure, so shared references can be used from
//! multiple threads. The only mutable state is the memo cache inside
//! [`burnside::EqRing`]; use one ring instance per thread.
//!
//! File formats and the command line front end live in the companion
//! `eqzeta-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod burnside;
pub mod group;
pub mod invariants;
pub mod qz;
pub mod render;
pub mod resolution;
pub mod series;
