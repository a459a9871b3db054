//! Coulomb-distorted plane waves and the hypergeometric function
//! ₂F₂(a,a;a+l+1,a−l;z).
//!
//! The crate is layered:
//!
//! * [`special`]: complex-argument building blocks (Γ, ₁F₁, U, γ(a,z),
//!   spherical Bessel functions, terminating ₃F₁/₃F₂ sums).
//! * [`f22`]: the series, the three closed finite representations, the
//!   asymptotic expansion and its coefficients, and identity residuals.
//! * [`cdpw`]: partial-wave components τ_l^(±), the distorted wave itself,
//!   its Legendre reconstruction and the leading-order angular functional.
//!
//! Every evaluator is a pure function and returns an [`EvalResult`] or a
//! plain [`ComplexScalar`]; failures surface as [`Error`].

#![cfg_attr(test, allow(clippy::excessive_precision))]

pub mod cdpw;
mod error;
mod eval;
pub mod f22;
pub mod special;

pub use error::{Error, Result};
pub use eval::{EvalResult, Method, CANCELLATION_WARN_RATIO};

/// Complex double-precision scalar used for every argument and value.
pub type ComplexScalar = num_complex::Complex64;
