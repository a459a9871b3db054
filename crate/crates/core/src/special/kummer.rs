//! Confluent hypergeometric functions M = ₁F₁ and U.

use super::gamma::{digamma, gamma_complex, rgamma};
use super::sum::ComplexSum;
use super::truncation::sum_optimal;
use super::{
    binomial, cpow, hypergeometric_series, is_nonpositive_integer, pochhammer, SeriesControl,
};
use crate::error::finite;
use crate::{ComplexScalar, Error, EvalResult, Method, Result};

/// ₁F₁(a; b; z) by its Maclaurin series.
pub fn kummer_m(
    a: ComplexScalar,
    b: ComplexScalar,
    z: ComplexScalar,
    ctl: &SeriesControl,
) -> Result<EvalResult> {
    let s = hypergeometric_series("kummer_m", &[a], &[b], z, ctl)?;
    finite("kummer_m", s.value)?;
    Ok(EvalResult::new(s.value, Method::Series, s.terms, s.err).with_cancellation(s.cancellation))
}

/// Regime selection for [`kummer_u_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UConfig {
    /// |z| above which the large-argument expansion is used.
    pub asymptotic_threshold: f64,
    /// Largest acceptable relative error of the optimally truncated expansion.
    pub max_rel_err: f64,
    pub ctl: SeriesControl,
}

impl Default for UConfig {
    fn default() -> Self {
        UConfig {
            asymptotic_threshold: 30.0,
            max_rel_err: 1e-6,
            ctl: SeriesControl::default(),
        }
    }
}

/// U(a, b, z) with the default regime threshold.
pub fn kummer_u(a: ComplexScalar, b: ComplexScalar, z: ComplexScalar) -> Result<ComplexScalar> {
    kummer_u_with(a, b, z, &UConfig::default())
}

pub fn kummer_u_with(
    a: ComplexScalar,
    b: ComplexScalar,
    z: ComplexScalar,
    cfg: &UConfig,
) -> Result<ComplexScalar> {
    kummer_u_eval(a, b, z, cfg).map(|r| r.value)
}

/// U(a, b, z) with provenance. Terminating cases are summed exactly,
/// |z| above the threshold uses the optimally truncated large-argument
/// expansion, integer b uses the logarithmic series and everything else
/// the two-term connection formula through ₁F₁.
pub fn kummer_u_eval(
    a: ComplexScalar,
    b: ComplexScalar,
    z: ComplexScalar,
    cfg: &UConfig,
) -> Result<EvalResult> {
    const OP: &str = "kummer_u";
    if z == ComplexScalar::new(0.0, 0.0) {
        return Err(Error::domain(OP, "U(a,b,z) is singular at z = 0"));
    }
    if is_nonpositive_integer(a) {
        return terminating(a, b, z);
    }
    let a2 = a - b + 1.0;
    if is_nonpositive_integer(a2) {
        let inner = terminating(a2, 2.0 - b, z)?;
        let value = cpow(z, 1.0 - b) * inner.value;
        return Ok(EvalResult::new(
            finite(OP, value)?,
            Method::Series,
            inner.terms_used,
            0.0,
        ));
    }
    if z.norm() > cfg.asymptotic_threshold {
        return asymptotic(a, b, z, cfg);
    }
    if b.im == 0.0 && b.re == b.re.round() {
        return integer_b(a, b, z, cfg);
    }
    connection(a, b, z, cfg)
}

/// U(a, b, z) choosing per call between the large-|z| expansion and the
/// ₁F₁ route by their error estimates; used where U enters sums whose
/// accuracy matters more than a fixed regime boundary.
pub(crate) fn kummer_u_best(
    a: ComplexScalar,
    b: ComplexScalar,
    z: ComplexScalar,
    ctl: &SeriesControl,
) -> Result<EvalResult> {
    const OP: &str = "kummer_u";
    if z == ComplexScalar::new(0.0, 0.0) {
        return Err(Error::domain(OP, "U(a,b,z) is singular at z = 0"));
    }
    let cfg = UConfig {
        asymptotic_threshold: f64::INFINITY,
        max_rel_err: f64::INFINITY,
        ctl: *ctl,
    };
    if is_nonpositive_integer(a) || is_nonpositive_integer(a - b + 1.0) {
        return kummer_u_eval(a, b, z, &cfg);
    }
    let asym = if z.norm() >= 4.0 {
        asymptotic(a, b, z, &cfg).ok()
    } else {
        None
    };
    if let Some(r) = asym {
        if r.rel_err() <= 4.0 * f64::EPSILON {
            return Ok(r);
        }
    }
    let series = if b.im == 0.0 && b.re == b.re.round() {
        integer_b(a, b, z, &cfg)
    } else {
        connection(a, b, z, &cfg)
    };
    match (asym, series) {
        (Some(r), Ok(s)) => Ok(if r.err_estimate < s.err_estimate {
            r
        } else {
            s
        }),
        (Some(r), Err(_)) => Ok(r),
        (None, s) => s,
    }
}

// U(−m, b, z) = (−1)^m Σ_s C(m,s) (b+s)_{m−s} (−z)^s
fn terminating(a: ComplexScalar, b: ComplexScalar, z: ComplexScalar) -> Result<EvalResult> {
    let m = (-a.re).round() as usize;
    let mut acc = ComplexSum::default();
    let mut zs = ComplexScalar::new(1.0, 0.0);
    for s in 0..=m {
        acc.add(binomial(m, s) * pochhammer(b + s as f64, m - s) * zs);
        zs *= -z;
    }
    let value = acc.value() * super::sign_pow(m);
    let err = 4.0 * f64::EPSILON * acc.abs_sum;
    Ok(EvalResult::new(
        finite("kummer_u", value)?,
        Method::Series,
        m + 1,
        err,
    ))
}

fn asymptotic(
    a: ComplexScalar,
    b: ComplexScalar,
    z: ComplexScalar,
    cfg: &UConfig,
) -> Result<EvalResult> {
    let a2 = a - b + 1.0;
    let w = -1.0 / z;
    let mut t = ComplexScalar::new(1.0, 0.0);
    let mut k = 0usize;
    let trunc = sum_optimal(
        |n| {
            while k < n {
                t *= (a + k as f64) * (a2 + k as f64) / (k as f64 + 1.0) * w;
                k += 1;
            }
            t
        },
        cfg.ctl.max_terms,
    );
    let scale = cpow(z, -a);
    let value = finite("kummer_u", scale * trunc.sum)?;
    let err = scale.norm() * (trunc.first_omitted + 2.0 * f64::EPSILON * trunc.abs_sum);
    let rel = err / value.norm();
    if rel > cfg.max_rel_err {
        return Err(Error::Accuracy {
            op: "kummer_u",
            achieved: rel,
        });
    }
    Ok(EvalResult::new(
        value,
        Method::Asymptotic,
        trunc.last + 1,
        err,
    ))
}

fn connection(
    a: ComplexScalar,
    b: ComplexScalar,
    z: ComplexScalar,
    cfg: &UConfig,
) -> Result<EvalResult> {
    let c1 = gamma_complex(1.0 - b)? * rgamma(a - b + 1.0);
    let c2 = gamma_complex(b - 1.0)? * rgamma(a);
    let mut err = 0.0;
    let mut terms = 0;
    let t1 = if c1 == ComplexScalar::new(0.0, 0.0) {
        ComplexScalar::new(0.0, 0.0)
    } else {
        let m1 = kummer_m(a, b, z, &cfg.ctl)?;
        err += c1.norm() * m1.err_estimate;
        terms += m1.terms_used;
        c1 * m1.value
    };
    let t2 = if c2 == ComplexScalar::new(0.0, 0.0) {
        ComplexScalar::new(0.0, 0.0)
    } else {
        let m2 = kummer_m(a - b + 1.0, 2.0 - b, z, &cfg.ctl)?;
        let p = cpow(z, 1.0 - b);
        err += (c2 * p).norm() * m2.err_estimate;
        terms += m2.terms_used;
        c2 * p * m2.value
    };
    let value = finite("kummer_u", t1 + t2)?;
    // the Γ factors carry relative rounding of a few ulps each
    err += 8.0 * f64::EPSILON * (t1.norm() + t2.norm());
    let cancel = t1.norm().max(t2.norm()) / value.norm();
    Ok(EvalResult::new(value, Method::Series, terms, err).with_cancellation(cancel))
}

fn integer_b(
    a: ComplexScalar,
    b: ComplexScalar,
    z: ComplexScalar,
    cfg: &UConfig,
) -> Result<EvalResult> {
    if b.re < 1.0 {
        // U(a,b,z) = z^{1−b} U(a−b+1, 2−b, z), 2−b ≥ 2
        let inner = integer_b(a - b + 1.0, 2.0 - b, z, cfg)?;
        let p = cpow(z, 1.0 - b);
        return Ok(EvalResult::new(
            p * inner.value,
            Method::Series,
            inner.terms_used,
            p.norm() * inner.err_estimate,
        ));
    }
    let n = (b.re - 1.0).round() as usize;
    let nf = n as f64;
    let mut acc = ComplexSum::default();
    let mut terms = 0;
    let lead = rgamma(a - nf);
    if lead != ComplexScalar::new(0.0, 0.0) {
        let ln_z = z.ln();
        let mut psi_a = digamma(a)?;
        let mut psi_1 = digamma(ComplexScalar::new(1.0, 0.0))?;
        let mut psi_n = digamma(ComplexScalar::new(nf + 1.0, 0.0))?;
        let pre = super::sign_pow(n + 1) * lead / super::factorial(n);
        let mut t = ComplexScalar::new(1.0, 0.0);
        let mut small = 0;
        for k in 0..cfg.ctl.max_terms {
            let kf = k as f64;
            let term = pre * t * (ln_z + psi_a - psi_1 - psi_n);
            acc.add(term);
            terms = k + 1;
            if term.norm() <= cfg.ctl.rel_tol * acc.value().norm() {
                small += 1;
                if small >= 3 && kf > z.norm() {
                    break;
                }
            } else {
                small = 0;
            }
            t *= (a + kf) / ((nf + 1.0 + kf) * (kf + 1.0)) * z;
            psi_a += 1.0 / (a + kf);
            psi_1 += 1.0 / (kf + 1.0);
            psi_n += 1.0 / (nf + 1.0 + kf);
            if k + 1 == cfg.ctl.max_terms {
                return Err(Error::NoConvergence {
                    op: "kummer_u",
                    max_terms: cfg.ctl.max_terms,
                });
            }
        }
    }
    let ra = rgamma(a);
    let mut zk = ComplexScalar::new(1.0, 0.0);
    for k in 1..=n {
        zk /= z;
        let c = super::factorial(k - 1) * pochhammer(1.0 - a + k as f64, n - k)
            / super::factorial(n - k);
        acc.add(ra * c * zk);
    }
    let value = finite("kummer_u", acc.value())?;
    let err = 16.0 * f64::EPSILON * acc.abs_sum;
    let rel = err / value.norm();
    if rel > cfg.max_rel_err {
        return Err(Error::Accuracy {
            op: "kummer_u",
            achieved: rel,
        });
    }
    Ok(
        EvalResult::new(value, Method::Series, terms + n, err)
            .with_cancellation(acc.cancellation()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> ComplexScalar {
        ComplexScalar::new(re, im)
    }

    fn rel(a: ComplexScalar, b: ComplexScalar) -> f64 {
        (a - b).norm() / b.norm()
    }

    fn m(a: ComplexScalar, b: ComplexScalar, z: ComplexScalar) -> ComplexScalar {
        kummer_m(a, b, z, &SeriesControl::default()).unwrap().value
    }

    #[test]
    fn m_closed_forms() {
        let e = std::f64::consts::E;
        assert_eq!(m(c(0.7, 0.2), c(1.3, -1.0), c(0.0, 0.0)), c(1.0, 0.0));
        assert!(rel(m(c(2.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)), c(e, 0.0)) < 1e-15);
        assert!(rel(m(c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)), c(e - 1.0, 0.0)) < 1e-15);
    }

    #[test]
    fn m_pole() {
        let r = kummer_m(
            c(0.5, 0.0),
            c(-2.0, 0.0),
            c(1.0, 0.0),
            &SeriesControl::default(),
        );
        assert!(matches!(r, Err(Error::Pole { .. })));
    }

    #[test]
    fn m_large_imaginary_argument() {
        // 1F1(1; 2; iy) = (e^{iy} − 1)/(iy), terms reach e^{60}/60
        let z = c(0.0, 60.0);
        let expect = (z.exp() - 1.0) / z;
        assert!(rel(m(c(1.0, 0.0), c(2.0, 0.0), z), expect) < 1e-14);
    }

    #[test]
    fn u_closed_forms() {
        assert!(
            rel(
                kummer_u(c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0)).unwrap(),
                c(0.5, 0.0)
            ) < 1e-15
        );
        assert_eq!(
            kummer_u(c(0.0, 0.0), c(0.3, 1.0), c(4.0, -2.0)).unwrap(),
            c(1.0, 0.0)
        );
        // e·E1(1)
        let expect = c(0.596_347_362_323_194_074_341_078_5, 0.0);
        assert!(
            rel(
                kummer_u(c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)).unwrap(),
                expect
            ) < 1e-13
        );
        // U(a, a+1, z) = z^{−a}
        let (a, z) = (c(0.3, 0.7), c(-2.0, 5.0));
        assert!(rel(kummer_u(a, a + 1.0, z).unwrap(), cpow(z, -a)) < 1e-14);
    }

    #[test]
    fn u_rejects_origin() {
        assert!(kummer_u(c(0.5, 0.0), c(0.5, 0.0), c(0.0, 0.0))
            .unwrap_err()
            .is_domain());
    }

    #[test]
    fn u_integer_b_reference_values() {
        // U(1/2, 1, 2) and U(0.3+0.2i, 3, 1.5−i); 30-digit references
        let v = kummer_u(c(0.5, 0.0), c(1.0, 0.0), c(2.0, 0.0)).unwrap();
        assert!(
            rel(v, c(0.645_694_148_382_034_666_012_019_3, 0.0)) < 1e-13,
            "{v}"
        );
        let v = kummer_u(c(0.3, 0.2), c(-1.0, 0.0), c(1.5, -1.0)).unwrap();
        assert!(
            rel(
                v,
                c(
                    0.634_313_719_605_697_596_569_776_5,
                    -0.114_913_190_606_382_030_848_165_8
                )
            ) < 1e-13,
            "{v}"
        );
    }

    #[test]
    fn u_regimes_overlap_at_threshold() {
        // κ⁻ arguments U(1−a, 1−a−n, −z) for a = 1 ± iγ, n ≤ 1
        for g in [0.25, 0.5, 1.0, 2.0] {
            for s in [1.0, -1.0] {
                let a = c(1.0, s * g);
                for n in 0..=1 {
                    let b = 1.0 - a - n as f64;
                    let z = c(0.0, -s * 30.0);
                    let conn = connection(1.0 - a, b, z, &UConfig::default())
                        .unwrap()
                        .value;
                    let asym = asymptotic(1.0 - a, b, z, &UConfig::default())
                        .unwrap()
                        .value;
                    assert!(rel(conn, asym) < 1e-10, "g={g} n={n}: {conn} vs {asym}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn kummer_transformation(ar in -3.0f64..3.0, ai in -2.0f64..2.0, br in 0.2f64..4.0, bi in -2.0f64..2.0,
                                 r in 0.0f64..30.0, th in -PI..PI) {
            let (a, b) = (c(ar, ai), c(br, bi));
            let z = c(r * th.cos(), r * th.sin());
            let lhs = m(a, b, z);
            let rhs = z.exp() * m(b - a, b, -z);
            prop_assert!(rel(lhs, rhs) < 1e-11, "{} vs {}", lhs, rhs);
        }
    }
}
