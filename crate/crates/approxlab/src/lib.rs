//! Numerical laboratory for constructive approximation on `[-1, 1]` with the
//! weight `(1 - x^2)^2`.
//!
//! The crate implements, end to end, the objects needed to study polynomial
//! approximation in weighted `L_p` spaces built on Jacobi expansions:
//!
//! * Gauss-Jacobi quadrature rules for weights `(1-x)^a (1+x)^b`
//!   ([`quadrature`]), computed by the Golub-Welsch method with a
//!   self-contained implicit-shift QL eigensolver.
//! * The Jacobi polynomial basis normalized by `P_k(1) = 1`, spectral
//!   analysis/synthesis in the `(2,2)` basis ([`jacobi`]).
//! * Weighted norms `||f (1-x^2)^alpha||_p` and the parameter windows in
//!   which the direct and inverse approximation theorems hold ([`space`]).
//! * A three-kernel family of generalized translation operators with known
//!   eigenstructure in the `(2,2)` basis, with both a direct quadrature
//!   backend and a spectral multiplier backend ([`translation`]).
//! * Generalized finite differences and the associated modulus of smoothness
//!   ([`smoothness`]).
//! * Best polynomial approximation in weighted `L_p` (projection, IRLS,
//!   Lawson) and order-of-decay fitting ([`best_approx`]).
//! * Jackson-type smoothing operators built from powered Fejer kernels
//!   ([`jackson`]).
//! * Experiment drivers that test the direct, inverse, and equivalence
//!   statements numerically, plus a self-contained verification suite
//!   ([`theorems`]).
//! * A registry of test functions with known smoothness orders
//!   ([`registry`]), report emission (CSV/JSON/SVG, [`report`]), and the
//!   command line front end ([`cli`]).
//!
//! Everything is deterministic: fixed summation orders, seeded randomness,
//! and byte-stable serialization, so that a run can be reproduced exactly
//! from its manifest.

pub mod best_approx;
pub mod cli;
pub mod error;
pub mod jackson;
pub mod jacobi;
pub mod quadrature;
pub mod registry;
pub mod report;
pub mod smoothness;
pub mod space;
pub mod special;
pub mod theorems;
pub mod translation;

pub use best_approx::{best_approx, en_sequence, fit_order, ApproximationResult, ScalingReport};
pub use error::{Error, Result};
pub use jacobi::{JacobiBasis, SpectralFunction};
pub use quadrature::QuadratureRule;
pub use space::{FunctionHandle, NormSpec, PExponent};
pub use translation::{MultiplierTable, Variant};
