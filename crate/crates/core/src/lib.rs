//! Exact arithmetic for pre-images of points on elliptic curves.
//!
//! For a point `P` on `E` and an integer `m`, the roots of
//! `delta_m^P = theta_m - x(P) * psi_m^2` are the x-coordinates of the points
//! `R` with `mR = P`. This crate computes those polynomials over the rationals
//! and over finite fields, factors them exactly, and uses the factorizations to
//! classify points (rational division, rational isogenies, Galois orbits) and to
//! study the denominators of multiples of a point.
//!
//! Module map:
//! - [`exact`]: big integers and rationals, primality, integer factorization
//! - [`field`]: the field abstraction (rationals, prime fields, extensions)
//! - [`poly`]: dense univariate polynomials
//! - [`factor`]: factorization over finite fields and over the rationals
//! - [`curve`]: Weierstrass curves and the group law
//! - [`divpoly`]: division polynomials, pre-image and exact-order polynomials
//! - [`isogeny`]: kernel polynomials, Velu's formulas, point division
//! - [`theorems`]: classifiers, sweeps and elliptic divisibility sequences
//! - [`ffharness`]: exhaustive finite-field verification

pub mod config;
pub mod curve;
pub mod divpoly;
pub mod error;
pub mod exact;
pub mod factor;
pub mod ffharness;
pub mod field;
pub mod isogeny;
pub mod poly;
pub mod theorems;

pub use config::Config;
pub use curve::{Curve, Point};
pub use error::{Error, Result};
pub use exact::{Integer, Rational};
pub use field::{ExtField, Field, FiniteField, Fp, QuadExt};
pub use poly::Poly;
