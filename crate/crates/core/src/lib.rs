//! Exact arithmetic for elliptic-curve torsion over the imaginary
//! quadratic fields of class number one, quadratic-twist growth of odd
//! torsion, isogeny kernel signatures, hyperelliptic Jacobians over finite
//! fields, and a registry of modular-curve models.

pub mod arith;
pub mod elliptic;
pub mod error;
pub mod extfield;
pub mod growth;
pub mod isogeny;
pub mod jacobian;
pub mod modcurves;
pub mod ff;
pub mod numfield;
pub mod poly;
pub mod qfield;
pub mod rational;
pub mod suite;
pub mod ring;
pub mod torsion;

pub use error::{Error, Result};
pub use ff::Fq;
pub use numfield::NumberField;
pub use poly::{Poly, PolyRing};
pub use qfield::{QuadElem, QuadField};
pub use rational::Rationals;
pub use ring::{Field, Ring};

/// Polynomials over Q.
pub type QPoly = Poly<num_rational::BigRational>;
/// Polynomials over a quadratic field.
pub type KPoly = Poly<QuadElem>;
/// Polynomials over a finite field.
pub type FqPoly = Poly<u64>;
