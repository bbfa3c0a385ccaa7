//! Exact arithmetic for the dynamics of dominant rational self-maps of
//! projective space over the rationals.
//!
//! The crate is organised bottom-up:
//!
//! * [`poly`] — sparse multivariate polynomials over arbitrary-precision
//!   integers (canonical graded-lex form, gcd, resultants, substitution);
//! * [`univar`] / [`roots`] — dense univariate integer polynomials with
//!   Sturm-sequence real-root isolation and certified radius bounds;
//! * [`matrix`] — exact integer matrix kernel (determinants, powers,
//!   exterior powers, characteristic polynomials);
//! * [`projective`] — points of `P^d(Q)` and Weil heights of orbits;
//! * [`ratmap`] — rational self-maps: composition, iteration, degree
//!   sequences, inverse verification, topological degree on `P^2`;
//! * [`cycles`] — hypersurface cycles, pushforwards along a map (via a
//!   parametrisation or a verified inverse), and exact implicitization;
//! * [`monomial`] — monomial maps, exterior powers of the exponent
//!   matrix, and certified dynamical degrees;
//! * [`analysis`] — growth-rate estimation, exact linear-recurrence
//!   detection, and the conjecture/theorem check harness.

pub mod analysis;
pub mod cycles;
pub mod matrix;
pub mod monomial;
pub mod numeric;
pub mod poly;
pub mod projective;
pub mod ratmap;
pub mod roots;
pub mod univar;

pub use poly::{Monomial, PolyError, Polynomial, VarSet};
