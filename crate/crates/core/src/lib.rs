//! Exact analysis of chemical reaction networks.
//!
//! The crate decides two questions about a mass-action (power-law) network
//! without floating point: whether a flux sign pattern is thermodynamically
//! feasible (a potential certificate exists) or contains a loop, and whether
//! the generalized polynomial map `x -> A diag(k) x^B` is injective on the
//! stoichiometric classes. A floating-point simulator in [`dynamics`] is
//! provided to cross-check the exact verdicts.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
#![warn(missing_debug_implementations, rust_2018_idioms)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod dynamics;
pub mod feasibility;
pub mod injectivity;
pub mod linalg;
pub mod network;
pub mod signs;
pub mod simplex;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// Exact arbitrary-precision rational number used by the exact layer.
pub type Rational = BigRational;

/// Builds an integer-valued rational.
pub fn rat(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Builds `num / den`. Panics when `den == 0`.
pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Lossy conversion used when handing exact data to the numerical layer.
pub fn to_f64(value: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    value.to_f64().unwrap_or(f64::NAN)
}

pub use feasibility::{FeasibilityVerdict, FluxPattern};
pub use injectivity::InjectivityReport;
pub use linalg::RationalMatrix;
pub use network::{NetworkMatrices, ReactionNetwork};
pub use signs::{Sign, SignSet, SignVector};
