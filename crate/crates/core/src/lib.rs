//! Exact minimal log-discrepancies of cyclic quotient and simplicial toric
//! singularities.
//!
//! All arithmetic is exact: integers and reduced rationals over a scalar type
//! implementing [`scalar::Int`]. The crate root provides aliases for the two
//! backings in use: arbitrary precision ([`num::BigInt`]) and `i64`.
//!
//! * [`lattice`] — integer matrices, Smith normal form, lattices in `Q^n`.
//! * [`cyclic`] — cyclic quotient types `1/N(a_1, ..., a_n)`: normalization,
//!   ages, minimal log-discrepancy, classification, canonical forms.
//! * [`toric`] — simplicial cones over arbitrary lattices, the lattice-point
//!   minimal log-discrepancy and reduction to a cyclic quotient.
//! * [`constructions`] — the `+1` lift and limit sequences.
//! * [`survey`] — bounded enumeration, spectra, accumulation reports and
//!   their persistence.

pub mod constructions;
pub mod cyclic;
pub mod error;
pub mod lattice;
pub mod scalar;
pub mod survey;
pub mod toric;

pub use error::{Error, Result};

use num::rational::Ratio;
use num::BigInt;

/// Arbitrary-precision rational.
pub type Rational = Ratio<BigInt>;
/// Machine-word rational.
pub type Rational64 = Ratio<i64>;
/// Cyclic quotient type with arbitrary-precision weights.
pub type Quotient = cyclic::QuotientType<BigInt>;
/// Cyclic quotient type with machine-word weights.
pub type Quotient64 = cyclic::QuotientType<i64>;
/// Simplicial cone over an arbitrary-precision lattice.
pub type Cone = toric::SimplicialConeData<BigInt>;
/// Simplicial cone over a machine-word lattice.
pub type Cone64 = toric::SimplicialConeData<i64>;
/// Lattice with arbitrary-precision rational basis.
pub type Lattice = lattice::LatticeBasis<BigInt>;
/// Lattice with machine-word rational basis.
pub type Lattice64 = lattice::LatticeBasis<i64>;
