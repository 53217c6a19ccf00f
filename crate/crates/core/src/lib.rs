//! Numerics for central values of real quadratic Dirichlet L-functions.
//!
//! The library evaluates `L(1/2, chi_n)` for square-free conductors
//! `n ≡ 1 (mod 8)` through a smoothed approximate functional equation,
//! builds the Brun/Selberg upper-bound sieve weights and the mollifier
//! machinery used in non-vanishing experiments, and exposes empirical
//! moment estimators over primes `p ≡ 1 (mod 8)`.

pub mod arith;
pub mod error;
pub mod gauss;
pub mod lcentral;
pub mod moments;
pub mod mollify;
pub mod scalar;
pub mod sieve;
pub mod special;
pub mod sum;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Default floating-point scalar used throughout the batch paths.
pub type Real = f64;
/// Exact rational scalar used where tests demand exact convolution identities.
pub type Rational = num_rational::Rational64;
/// Complex value in the default scalar.
pub type Complex = num_complex::Complex<Real>;
