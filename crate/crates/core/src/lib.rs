//! q-Stancu operators over exact rationals or `f64`.
//!
//! The finite operators `S_n^{q,alpha}` and their limit `S_inf^{q,alpha}`,
//! together with the q-calculus they are built from: q-integers, Gaussian
//! binomials and finite and infinite q-Pochhammer symbols. Everything is
//! generic over [`Scalar`], so an identity checked with [`Rational`] holds
//! with equality, not within a tolerance.

pub mod cli;
pub mod error;
pub mod function;
pub mod limitop;
pub mod numerics;
pub mod qcore;
pub mod stancu;

pub use error::{Error, Result};
pub use function::SampledFunction;
pub use numerics::{approx_equal, rational_of, Rational, Scalar, ScalarKind, Tolerance};
pub use qcore::{QParams, TruncationCertificate};
