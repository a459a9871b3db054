//! ₂F₂(a, a; a+l+1, a−l; z): Maclaurin series, three finite
//! representations, the large-|z| expansion and identity residuals.
//!
//! All powers of −z are principal and computed once per call.

mod asym;
mod forms;
mod identities;

pub use asym::{
    d_coeff_closed, d_coeffs_recursive, f22_asymptotic, f22_asymptotic_parts, AsymCoeffs,
    AsymConfig, AsymParts, Truncation,
};
pub use forms::{f22_form_a, f22_form_b, f22_form_c, f22_series, kappa_minus, kappa_plus};
pub use identities::{chargeless_limit, prop1_residual};

pub(crate) use asym::dominant_series;
pub(crate) use forms::{
    double_suffices, inc_gamma_sum_wide, inner_wide, kappa_minus_eval, sum_1f1_wide,
};

use crate::special::{integer_distance, SeriesControl, INTEGER_GUARD};
use crate::{ComplexScalar, Error, EvalResult, Result};

/// Validated arguments of ₂F₂(a, a; a+l+1, a−l; z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct F22Args {
    pub a: ComplexScalar,
    pub l: usize,
    pub z: ComplexScalar,
}

impl F22Args {
    /// Rejects a within [`INTEGER_GUARD`] of an integer and non-finite input.
    pub fn new(a: ComplexScalar, l: usize, z: ComplexScalar) -> Result<Self> {
        if !(a.re.is_finite() && a.im.is_finite() && z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::domain("F22Args", "non-finite argument"));
        }
        if integer_distance(a) < INTEGER_GUARD {
            return Err(Error::NearInteger {
                op: "F22Args",
                value: a,
                tol: INTEGER_GUARD,
            });
        }
        Ok(F22Args { a, l, z })
    }

    /// Skips the integer guard; for limits taken by the caller.
    pub(crate) fn unchecked(a: ComplexScalar, l: usize, z: ComplexScalar) -> Self {
        F22Args { a, l, z }
    }

    /// 0 < Re a < l + 2, the strip where the large-|z| expansion holds.
    pub fn check_strip(&self) -> Result<()> {
        if self.a.re > 0.0 && self.a.re < self.l as f64 + 2.0 {
            Ok(())
        } else {
            Err(Error::domain(
                "f22_asymptotic",
                format!("Re a = {} outside (0, {})", self.a.re, self.l + 2),
            ))
        }
    }

    fn nonzero_z(&self, op: &'static str) -> Result<()> {
        if self.z == ComplexScalar::new(0.0, 0.0) {
            Err(Error::domain(op, "z must be nonzero"))
        } else {
            Ok(())
        }
    }
}

/// |z| boundaries of the representation selector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// Form (a) up to this |z|.
    pub form_a_max: f64,
    /// Maclaurin series up to this |z|.
    pub series_max: f64,
    /// Large-|z| expansion above this |z| and above l(l+1) (form (c) in between).
    pub asymptotic_min: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            form_a_max: 2.0,
            series_max: 25.0,
            asymptotic_min: 60.0,
        }
    }
}

/// Picks a representation by |z|. The large-|z| expansion is only used
/// inside its validity strip and when optimal truncation reaches double
/// precision; form (c) covers it otherwise.
/// Forms whose f64 weights overflow (l beyond about 90) hand over to the series.
pub fn f22_auto(args: F22Args, th: &Thresholds, ctl: &SeriesControl) -> Result<EvalResult> {
    match select(args, th, ctl) {
        Err(Error::NonFinite { .. }) => f22_series(args, ctl),
        r => r,
    }
}

fn select(args: F22Args, th: &Thresholds, ctl: &SeriesControl) -> Result<EvalResult> {
    let r = args.z.norm();
    if r <= th.form_a_max {
        return f22_form_a(args);
    }
    if r <= th.series_max {
        return f22_series(args, ctl);
    }
    let lf = args.l as f64;
    if r > th.asymptotic_min && r > lf * (lf + 1.0) && args.check_strip().is_ok() {
        if let Ok(v) = f22_asymptotic(args, Truncation::Auto, &AsymConfig::default()) {
            if v.rel_err() < 1e-14 {
                return Ok(v);
            }
        }
    }
    f22_form_c(args)
}
