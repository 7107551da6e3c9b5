//! Exact computational algebra for compositions of quadratic pairs.
//!
//! The crate covers quadratic spaces in every characteristic, algebras given
//! by structure constants with involutions, quadratic pairs and their
//! Clifford algebras, 2-torsion Brauer classes over Q with the index metric,
//! minimal composition degrees, and constructions of composition
//! homomorphisms that are checked before they are returned.
//!
//! Everything is exact: rationals are arbitrary precision and finite fields
//! are handled by tables. The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod algebra;
pub mod brauer;
pub mod clifford;
pub mod compose;
pub mod error;
pub mod linalg;
pub mod mcd;
pub mod qpair;
pub mod quadform;
pub mod scalars;

pub use error::{Error, Result};
pub use scalars::{Elem, Field, Place, Rational};
