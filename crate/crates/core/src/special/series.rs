//! Maclaurin series Σ_k Π(a_i)_k / Π(b_j)_k · z^k / k!.
//!
//! A compensated double-precision pass runs first. When Σ|term| exceeds
//! |sum| by more than [`WIDEN_RATIO`] the same series is re-summed in
//! fixed-point arithmetic sized from the observed term magnitudes, so the
//! returned value carries close to full double accuracy even when the
//! individual terms are e^{|z|} times larger than the result.

use super::sum::ComplexSum;
use super::wide::{Fixed, Wide};
use super::SeriesControl;
use crate::{ComplexScalar, Error, Result};

const WIDEN_RATIO: f64 = 64.0;
const CONSECUTIVE_SMALL: usize = 3;
const EPS: f64 = f64::EPSILON;

#[derive(Debug, Clone, Copy)]
pub(crate) struct SeriesValue {
    pub value: ComplexScalar,
    pub terms: usize,
    pub err: f64,
    /// Σ|term| / |value| of the double-precision pass, or err/(ε|value|)
    /// once widened.
    pub cancellation: f64,
    #[cfg_attr(not(test), allow(dead_code))]
    pub widened: bool,
}

enum Step {
    Terminated,
    Factor(ComplexScalar),
}

fn step_factor(
    op: &'static str,
    num: &[ComplexScalar],
    den: &[ComplexScalar],
    z: ComplexScalar,
    k: usize,
) -> Result<Step> {
    let kf = k as f64;
    let mut f = z / (kf + 1.0);
    for &a in num {
        let ak = a + kf;
        if ak == ComplexScalar::new(0.0, 0.0) {
            return Ok(Step::Terminated);
        }
        f *= ak;
    }
    for &b in den {
        let bk = b + kf;
        if bk == ComplexScalar::new(0.0, 0.0) {
            return Err(Error::Pole { op, at: b });
        }
        f /= bk;
    }
    Ok(Step::Factor(f))
}

pub(crate) fn hypergeometric_series(
    op: &'static str,
    num: &[ComplexScalar],
    den: &[ComplexScalar],
    z: ComplexScalar,
    ctl: &SeriesControl,
) -> Result<SeriesValue> {
    let mut acc = ComplexSum::default();
    let mut term = ComplexScalar::new(1.0, 0.0);
    acc.add(term);
    let mut k = 0usize;
    let mut small_run = 0usize;
    let mut terminated = false;
    // smallest |term| seen up to the largest one; bounds error growth in the
    // fixed-point recursion
    let mut min_before_peak = 1.0f64;
    let mut run_min = 1.0f64;
    let mut peak = 1.0f64;
    // terms can grow again until k passes every parameter with negative real part
    let crossing = num.iter().chain(den).map(|p| -p.re).fold(0.0f64, f64::max);
    loop {
        if k >= ctl.max_terms {
            return Err(Error::NoConvergence {
                op,
                max_terms: ctl.max_terms,
            });
        }
        let f = match step_factor(op, num, den, z, k)? {
            Step::Terminated => {
                terminated = true;
                break;
            }
            Step::Factor(f) => f,
        };
        term *= f;
        k += 1;
        acc.add(term);
        let m = term.norm();
        if !m.is_finite() {
            return Err(Error::NonFinite { op });
        }
        if m > 0.0 && m < run_min {
            run_min = m;
        }
        if m > peak {
            peak = m;
            min_before_peak = run_min;
        }
        let s = acc.value().norm();
        if m == 0.0 || m <= ctl.rel_tol * s || m <= EPS * acc.abs_sum {
            small_run += 1;
            if small_run >= CONSECUTIVE_SMALL && f.norm() < 1.0 && k as f64 > crossing {
                break;
            }
        } else {
            small_run = 0;
        }
    }

    let value = acc.value();
    let s = value.norm();
    let cancellation = if s > 0.0 {
        acc.abs_sum / s
    } else {
        f64::INFINITY
    };
    let tail = if terminated { 0.0 } else { term.norm() };
    if cancellation <= WIDEN_RATIO {
        return Ok(SeriesValue {
            value,
            terms: k + 1,
            err: 2.0 * EPS * acc.abs_sum + tail,
            cancellation,
            widened: false,
        });
    }
    widen(
        op,
        num,
        den,
        z,
        ctl,
        acc.abs_sum,
        min_before_peak,
        k,
        cancellation,
    )
}

#[allow(clippy::too_many_arguments)]
fn widen(
    op: &'static str,
    num: &[ComplexScalar],
    den: &[ComplexScalar],
    z: ComplexScalar,
    ctl: &SeriesControl,
    abs_sum: f64,
    min_before_peak: f64,
    terms_hint: usize,
    cancellation: f64,
) -> Result<SeriesValue> {
    let growth =
        abs_sum.max(1.0).log2() + (1.0 / min_before_peak).log2() + (terms_hint as f64 + 2.0).log2();
    let mut bits = (96.0 + growth).ceil() as u32;
    for _ in 0..6 {
        let (w, terms) = wide_sum(op, num, den, z, ctl, bits)?;
        let fx = Fixed::new(bits);
        let value = fx.to_c64(&w);
        let abs_err = (2f64).powf(growth + 8.0 - bits as f64);
        let s = value.norm();
        if abs_err <= 2f64.powi(-60) * s {
            let err = EPS * s + abs_err;
            return Ok(SeriesValue {
                value,
                terms,
                err,
                // what is left of the cancellation after widening
                cancellation: err / (EPS * s),
                widened: true,
            });
        }
        let deficit = if s > 0.0 {
            (abs_err / s).log2() + 60.0
        } else {
            64.0
        };
        bits += deficit.ceil().max(32.0) as u32;
        if bits > 20_000 {
            break;
        }
    }
    Err(Error::Accuracy {
        op,
        achieved: cancellation * EPS,
    })
}

fn wide_sum(
    op: &'static str,
    num: &[ComplexScalar],
    den: &[ComplexScalar],
    z: ComplexScalar,
    ctl: &SeriesControl,
    bits: u32,
) -> Result<(Wide, usize)> {
    let fx = Fixed::new(bits);
    let wnum: Vec<Wide> = num.iter().map(|&a| fx.from_c64(a)).collect();
    let wden: Vec<Wide> = den.iter().map(|&b| fx.from_c64(b)).collect();
    wide_series(op, &wnum, &wden, &fx.from_c64(z), &fx, ctl.max_terms)
}

/// Σ_k Π(a_i)_k / Π(b_j)_k · z^k / k! entirely in fixed point; stops once
/// three consecutive terms fall below 2^{16−bits} with a contracting ratio.
pub(crate) fn wide_series(
    op: &'static str,
    wnum: &[Wide],
    wden: &[Wide],
    wz: &Wide,
    fx: &Fixed,
    max_terms: usize,
) -> Result<(Wide, usize)> {
    let num: Vec<ComplexScalar> = wnum.iter().map(|w| fx.to_c64(w)).collect();
    let den: Vec<ComplexScalar> = wden.iter().map(|w| fx.to_c64(w)).collect();
    let z = fx.to_c64(wz);
    let one = fx.one();
    let mut term = fx.one();
    let mut sum = fx.one();
    let mut shift = fx.zero(); // k as a wide integer
    let cutoff = -(fx.frac_bits() as f64) + 16.0;
    let mut small_run = 0usize;
    let mut k = 0usize;
    loop {
        if k >= max_terms {
            return Err(Error::NoConvergence { op, max_terms });
        }
        let mut n = wz.clone();
        for a in wnum {
            let ak = a.add(&shift);
            if ak.is_zero() {
                return Ok((sum, k + 1));
            }
            n = fx.mul(&n, &ak);
        }
        let mut d = fx.one();
        for b in wden {
            let bk = b.add(&shift);
            if bk.is_zero() {
                return Err(Error::Pole {
                    op,
                    at: fx.to_c64(b),
                });
            }
            d = fx.mul(&d, &bk);
        }
        let next = fx.mul(&term, &n);
        term = match fx.div(&next, &d) {
            Some(t) => fx.div_int(&t, k as u64 + 1),
            None => {
                return Err(Error::Pole {
                    op,
                    at: den.first().copied().unwrap_or_default(),
                })
            }
        };
        sum.add_assign(&term);
        shift.add_assign(&one);
        k += 1;
        if fx.log2_abs(&term) < cutoff {
            let ratio = match step_factor(op, &num, &den, z, k) {
                Ok(Step::Factor(f)) => f.norm(),
                _ => 0.0,
            };
            small_run += 1;
            if small_run >= CONSECUTIVE_SMALL && ratio < 0.5 {
                return Ok((sum, k + 1));
            }
        } else {
            small_run = 0;
        }
    }
}

const WIDE_MAX_TERMS: usize = 50_000;

/// Fraction bits for sums of ₁F₁ values at argument z weighted by
/// coefficients growing like (2l)!/l!.
pub(crate) fn wide_bits(z: ComplexScalar, l: usize) -> u32 {
    let lf = l as f64;
    (256.0 + 1.5 * z.norm() + 2.0 * lf * (lf + 2.0).log2()).ceil() as u32
}

pub(crate) fn wide_kummer_m(fx: &Fixed, a: &Wide, b: &Wide, z: &Wide) -> Result<Wide> {
    wide_series(
        "kummer_m",
        std::slice::from_ref(a),
        std::slice::from_ref(b),
        z,
        fx,
        WIDE_MAX_TERMS,
    )
    .map(|r| r.0)
}

pub(crate) fn wide_exp(fx: &Fixed, z: &Wide) -> Result<Wide> {
    wide_series("exp", &[], &[], z, fx, WIDE_MAX_TERMS).map(|r| r.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexScalar {
        ComplexScalar::new(re, im)
    }

    #[test]
    fn exp_series_small_argument_stays_in_double() {
        let v =
            hypergeometric_series("t", &[], &[], c(0.5, 0.0), &SeriesControl::default()).unwrap();
        assert!(!v.widened);
        assert!((v.value.re - 0.5f64.exp()).abs() < 1e-15);
    }

    #[test]
    fn exp_of_large_negative_argument_widens() {
        // e^{-40}: the terms reach 4e16 while the sum is 4e-18
        let v =
            hypergeometric_series("t", &[], &[], c(-40.0, 0.0), &SeriesControl::default()).unwrap();
        assert!(v.widened);
        assert!((v.value.re / (-40f64).exp() - 1.0).abs() < 1e-14, "{:?}", v);
    }

    #[test]
    fn oscillatory_imaginary_argument() {
        let v =
            hypergeometric_series("t", &[], &[], c(0.0, 60.0), &SeriesControl::default()).unwrap();
        let e = c(60f64.cos(), 60f64.sin());
        assert!((v.value - e).norm() < 1e-14, "{:?}", v);
    }

    #[test]
    fn terminating_series_is_finite_sum() {
        // 1F1(-2; 3; z) = 1 - 2z/3 + z^2/12
        let z = c(1.5, -0.5);
        let v = hypergeometric_series(
            "t",
            &[c(-2.0, 0.0)],
            &[c(3.0, 0.0)],
            z,
            &SeriesControl::default(),
        )
        .unwrap();
        let expect = c(1.0, 0.0) - z * 2.0 / 3.0 + z * z / 12.0;
        assert!((v.value - expect).norm() < 1e-15);
        assert_eq!(v.terms, 3);
    }

    #[test]
    fn pole_in_denominator() {
        let r = hypergeometric_series(
            "t",
            &[c(0.5, 0.0)],
            &[c(-3.0, 0.0)],
            c(1.0, 0.0),
            &SeriesControl::default(),
        );
        assert!(matches!(r, Err(Error::Pole { .. })));
    }

    #[test]
    fn budget_exhaustion() {
        let ctl = SeriesControl::new(1e-13, 5).unwrap();
        let r = hypergeometric_series("t", &[], &[], c(10.0, 0.0), &ctl);
        assert!(matches!(r, Err(Error::NoConvergence { max_terms: 5, .. })));
    }
}
