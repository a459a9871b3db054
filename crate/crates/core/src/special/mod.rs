//! Complex-argument elementary special functions.
//!
//! Branch convention: every power is principal, `z^a = exp(a·Log z)` with
//! `arg z ∈ (−π, π]`.

mod bessel;
mod gamma;
mod inc_gamma;
mod kummer;
mod series;
pub(crate) mod sum;
mod terminating;
pub(crate) mod truncation;
pub(crate) mod wide;

pub use bessel::{spherical_bessel_j, spherical_hankel, HankelKind};
pub use gamma::{digamma, gamma_complex, rgamma};
pub use inc_gamma::lower_inc_gamma;
pub(crate) use kummer::kummer_u_best;
pub use kummer::{kummer_m, kummer_u, kummer_u_eval, kummer_u_with, UConfig};
pub use terminating::{terminating_1f1, terminating_3f1, terminating_3f2_unit};

pub(crate) use series::{hypergeometric_series, wide_bits, wide_exp, wide_kummer_m, wide_series};

use crate::{ComplexScalar, Error, Result};

/// Stopping rule for convergent series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            rel_tol: 1e-13,
            max_terms: 10_000,
        }
    }
}

impl SeriesControl {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol.is_finite()) {
            return Err(Error::domain(
                "SeriesControl",
                format!("rel_tol must be positive, got {rel_tol}"),
            ));
        }
        if max_terms == 0 {
            return Err(Error::domain(
                "SeriesControl",
                "max_terms must be at least 1",
            ));
        }
        Ok(SeriesControl { rel_tol, max_terms })
    }
}

/// Distance below which a parameter counts as sitting on an integer.
pub const INTEGER_GUARD: f64 = 1e-8;

/// Rising factorial (a)_n = a(a+1)…(a+n−1), as a left-to-right product.
pub fn pochhammer(a: ComplexScalar, n: usize) -> ComplexScalar {
    let mut p = ComplexScalar::new(1.0, 0.0);
    for j in 0..n {
        p *= a + j as f64;
    }
    p
}

/// (b)_n/(c)_n as a product of ratios; finite where both factors overflow.
pub(crate) fn pochhammer_ratio(b: ComplexScalar, c: ComplexScalar, n: usize) -> ComplexScalar {
    let mut p = ComplexScalar::new(1.0, 0.0);
    for j in 0..n {
        p *= (b + j as f64) / (c + j as f64);
    }
    p
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut b = 1.0;
    for j in 0..k {
        b = b * (n - j) as f64 / (j + 1) as f64;
    }
    b.round()
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, j| acc * j as f64)
}

/// Exact test: is z one of 0, −1, −2, …
pub(crate) fn is_nonpositive_integer(z: ComplexScalar) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// Distance from z to the nearest integer (∞ when Im z ≠ 0 dominates).
pub(crate) fn integer_distance(z: ComplexScalar) -> f64 {
    (z.re - z.re.round()).hypot(z.im)
}

/// Principal power z^w = exp(w·Log z).
pub(crate) fn cpow(z: ComplexScalar, w: ComplexScalar) -> ComplexScalar {
    (w * z.ln()).exp()
}

pub(crate) fn i_pow(l: usize) -> ComplexScalar {
    match l % 4 {
        0 => ComplexScalar::new(1.0, 0.0),
        1 => ComplexScalar::new(0.0, 1.0),
        2 => ComplexScalar::new(-1.0, 0.0),
        _ => ComplexScalar::new(0.0, -1.0),
    }
}

pub(crate) fn sign_pow(l: usize) -> f64 {
    if l.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}
