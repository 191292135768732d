//! Arbitrary-precision numerics: MPFR/MPC wrappers, root finding,
//! truncated series, Chebyshev caches, and quadrature.

pub mod cheb;
pub mod cplx;
pub mod quad;
pub mod real;
pub mod series;
