//! Exact symbolic algebra for the formal exponential map of graded coordinate
//! charts.
//!
//! Everything here works over exact rationals on a single polynomial chart
//! whose coordinates carry integer degrees. The crate is `no_std` and only
//! needs `alloc`.
//!
//! Module map:
//!
//! * [`graded`]: graded-commutative polynomials, Koszul signs, multi-indices
//!   and chart specifications.
//! * [`geometry`]: vector fields, connections from Christoffel tables,
//!   torsion and curvature.
//! * [`enveloping`]: differential operators (the enveloping algebra of the
//!   tangent algebroid), symmetric tensors, comultiplications, symmetrization
//!   and the duality pairing with fiber polynomials.
//! * [`pbw`]: the formal exponential map, its inverse, the flat connection it
//!   induces and the correction forms `Θ` and `Ξ`.
//! * [`fedosov`]: the operators `δ`, `δ⁻¹`, `σ`, `d^∇` on form-valued fiber
//!   polynomials, the flat Fedosov operator `D` and the augmentation `τ`.
//! * [`perturbation`]: a generic homological perturbation lemma for filtered
//!   contractions.
//! * [`checks`] and [`sample`]: identity checks with witnesses and seeded
//!   random inputs, shared by the command line verifier and the test suites.
#![no_std]

extern crate alloc;

pub mod checks;
pub mod enveloping;
pub mod error;
pub mod fedosov;
pub mod geometry;
pub mod graded;
pub mod pbw;
pub mod perturbation;
pub mod sample;

pub use error::{Error, Result};
pub use graded::{
    koszul_sign, Chart, Coordinate, Degree, Generator, GeneratorKind, GradedPoly, Monomial,
    MultiIndex, Rational, Sign, Truncation,
};
