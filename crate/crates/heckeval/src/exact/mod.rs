//! Exact arithmetic foundation: prime fields, big-integer polynomials,
//! factorization over Z, linear algebra over Q/Z/F_p, and lattice tools.

pub mod factor;
pub mod lattice;
pub mod matrix;
pub mod modp;
pub mod primes;
pub mod qpoly;
pub mod zpoly;
