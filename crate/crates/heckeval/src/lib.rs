//! High-precision evaluation and rationality certification of L-values of
//! critical algebraic Hecke characters over number fields containing a CM
//! subfield.
//!
//! The crate is layered: `exact` and `mp` provide the arithmetic substrate;
//! `field_tower`, `ideals`, and `characters` construct the arithmetic
//! objects; `lfunction`, `periods_signs`, `local_integrals`, and `weights`
//! evaluate the analytic and combinatorial quantities; `certifier` combines
//! them into rationality and Galois-equivariance certificates.

pub mod error;
pub mod exact;
pub mod field_tower;
pub mod ideals;
pub mod mp;

pub use error::{Error, ErrorClass, Result};
