use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes shared by every evaluator.
///
/// Each variant names the operation that failed so that callers several
/// layers up can still report the failing sub-operation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{op}: pole at {at}")]
    Pole { op: &'static str, at: Complex64 },

    #[error("{op}: parameter {value} lies within {tol:e} of an excluded integer")]
    NearInteger {
        op: &'static str,
        value: Complex64,
        tol: f64,
    },

    #[error("{op}: {msg}")]
    Domain { op: &'static str, msg: String },

    #[error("{op}: series did not converge within {max_terms} terms")]
    NoConvergence { op: &'static str, max_terms: usize },

    #[error("{op}: requested N = {requested} exceeds the divergence onset; optimal truncation is N = {optimal}")]
    DivergenceOnset {
        op: &'static str,
        requested: usize,
        optimal: usize,
    },

    #[error("{op}: accuracy unreachable (estimated relative error {achieved:e})")]
    Accuracy { op: &'static str, achieved: f64 },

    #[error(
        "{op}: quadrature did not reach {tol:e} within {panels} panels (last change {change:e})"
    )]
    Quadrature {
        op: &'static str,
        tol: f64,
        panels: usize,
        change: f64,
    },

    #[error("{op}: non-finite result")]
    NonFinite { op: &'static str },
}

impl Error {
    /// True for failures caused by the arguments rather than by the numerics.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::Pole { .. } | Error::NearInteger { .. } | Error::Domain { .. }
        )
    }

    pub fn op(&self) -> &'static str {
        match self {
            Error::Pole { op, .. }
            | Error::NearInteger { op, .. }
            | Error::Domain { op, .. }
            | Error::NoConvergence { op, .. }
            | Error::DivergenceOnset { op, .. }
            | Error::Accuracy { op, .. }
            | Error::Quadrature { op, .. }
            | Error::NonFinite { op } => op,
        }
    }

    pub(crate) fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain {
            op,
            msg: msg.into(),
        }
    }
}

/// Rejects NaN/∞ before a value leaves a public operation.
pub(crate) fn finite(op: &'static str, z: Complex64) -> Result<Complex64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFinite { op })
    }
}
