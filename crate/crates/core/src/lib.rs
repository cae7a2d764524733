//! Numerical laboratory for operadic Lax representations of the harmonic
//! oscillator.
//!
//! The crate builds and verifies, at desk scale:
//!
//! * the endomorphism operad of a finite-dimensional real vector space with
//!   its Gerstenhaber bracket ([`operad`]),
//! * the harmonic oscillator, its quasi-canonical coordinates `(Q, P)` and
//!   their Poisson bracket ([`oscillator`]),
//! * a 3×3 matrix Lax pair and binary operadic Lax pairs that evolve the
//!   Bianchi-type Lie algebras `VII_a`, `III_{a=1}`, `VI_{a≠1}` along the
//!   oscillator flow ([`lax`]),
//! * the truncated Fock-space realization of the quasi-canonical operators
//!   `Q̂, P̂` together with coherent-state probes ([`fock`]),
//! * the operator-valued structure constants of the quantized algebras and
//!   their quantum Jacobi operators, whose size measures how the canonical
//!   commutation relation deforms the Jacobi identity in the semiclassical
//!   limit ħ → 0 ([`qjacobi`]).
//!
//! The guide in `book/` walks through the concepts with runnable snippets;
//! the snippets are compiled as doc-tests of this crate so they cannot drift
//! out of sync with the code.

pub mod error;
pub mod lax;
pub mod operad;
pub mod oscillator;

pub use error::{Error, Result};

