//! Exact searches and checks around multiplicative decompositions of shifted
//! multiplicative subgroups of prime fields.
//!
//! The crate is organised bottom-up:
//!
//! - [`field`]: arithmetic in `F_p`, subgroups and cosets.
//! - [`set`]: bitset subsets of `F_p` and their sum, difference, product and
//!   ratio sets.
//! - [`poly`]: dense polynomials over `F_p`.
//! - [`stepanov`]: the auxiliary polynomial and its audits.
//! - [`sympoly`]: power sums and Newton's identities.
//! - [`decomp`]: decomposition searches and theorem sweeps.
//! - [`unity`]: roots of unity and Möbius maps over the complex numbers.
//! - [`suites`], [`report`], [`cli`]: drivers and output.

pub mod cli;
pub mod decomp;
pub mod field;
pub mod poly;
pub mod report;
pub mod set;
pub mod stepanov;
pub mod suites;
pub mod sympoly;
pub mod unity;

pub use field::{FieldContext, FieldError, MultSubgroup};
pub use poly::DensePoly;
pub use set::{ElementSet, SetError};
