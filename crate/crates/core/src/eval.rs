use std::fmt;

use crate::ComplexScalar;

/// Summand-to-result magnitude ratio above which an evaluation is flagged
/// as cancellation-prone.
pub const CANCELLATION_WARN_RATIO: f64 = 1e6;

/// Which representation produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Series,
    FormA,
    FormB,
    FormC,
    Asymptotic,
    Hyp2F2,
    IncGamma,
    Sum1F1,
    KappaSplit,
    Quadrature,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Series => "series",
            Method::FormA => "form_a",
            Method::FormB => "form_b",
            Method::FormC => "form_c",
            Method::Asymptotic => "asymptotic",
            Method::Hyp2F2 => "hyp2f2",
            Method::IncGamma => "inc_gamma",
            Method::Sum1F1 => "sum1f1",
            Method::KappaSplit => "kappa_split",
            Method::Quadrature => "quadrature",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A value together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: ComplexScalar,
    pub method: Method,
    pub terms_used: usize,
    /// Absolute error estimate; always ≥ 0.
    pub err_estimate: f64,
    /// max |summand| / |value| of the outermost sum (1 when there is none).
    pub cancellation: f64,
}

impl EvalResult {
    pub(crate) fn new(
        value: ComplexScalar,
        method: Method,
        terms_used: usize,
        err_estimate: f64,
    ) -> Self {
        EvalResult {
            value,
            method,
            terms_used,
            err_estimate: err_estimate.max(0.0),
            cancellation: 1.0,
        }
    }

    pub(crate) fn with_cancellation(mut self, ratio: f64) -> Self {
        self.cancellation = if ratio.is_finite() {
            ratio.max(1.0)
        } else {
            f64::INFINITY
        };
        self
    }

    pub fn cancellation_warning(&self) -> bool {
        self.cancellation > CANCELLATION_WARN_RATIO
    }

    /// err_estimate relative to |value|.
    pub fn rel_err(&self) -> f64 {
        let m = self.value.norm();
        if m > 0.0 {
            self.err_estimate / m
        } else {
            self.err_estimate
        }
    }
}
