use super::F22Args;
use crate::error::finite;
use crate::special::sum::ComplexSum;
use crate::special::wide::{big_factorial, kappa_weight, Fixed, Wide};
use crate::special::{
    binomial, cpow, factorial, gamma_complex, hypergeometric_series, kummer_m, kummer_u_best,
    lower_inc_gamma, pochhammer, sign_pow, terminating_3f1, wide_bits, wide_exp, wide_kummer_m,
    wide_series, SeriesControl,
};
use crate::{ComplexScalar, Error, EvalResult, Method, Result};

const EPS: f64 = f64::EPSILON;

/// Outer sums are redone in fixed point once cancellation passes this ratio
/// or the double-precision error estimate exceeds `WIDE_REL_ERR`.
const WIDE_TRIGGER: f64 = 100.0;
const WIDE_REL_ERR: f64 = 1e-13;

pub(crate) fn double_suffices(cancellation: f64, err: f64, value: ComplexScalar) -> bool {
    cancellation <= WIDE_TRIGGER && err <= WIDE_REL_ERR * value.norm()
}

/// (a)_{l+1} / (1−a)_l, the prefactor shared by all three forms.
fn prefactor(a: ComplexScalar, l: usize) -> ComplexScalar {
    pochhammer(a, l + 1) / pochhammer(1.0 - a, l)
}

/// Σ_n (a)_n² / ((a+l+1)_n (a−l)_n) zⁿ/n!.
pub fn f22_series(args: F22Args, ctl: &SeriesControl) -> Result<EvalResult> {
    let F22Args { a, l, z } = args;
    let lf = l as f64;
    let s = hypergeometric_series("f22_series", &[a, a], &[a + lf + 1.0, a - lf], z, ctl)?;
    Ok(EvalResult::new(
        finite("f22_series", s.value)?,
        Method::Series,
        s.terms,
        s.err,
    )
    .with_cancellation(s.cancellation))
}

/// (−1)^l (a)_{l+1}/(1−a)_l Σ_k (−1)^k C(l,k) (l+1)_k/(a)_{k+1} ₁F₁(a; a+k+1; z).
pub fn f22_form_a(args: F22Args) -> Result<EvalResult> {
    let F22Args { a, l, z } = args;
    let ctl = SeriesControl::default();
    let mut acc = ComplexSum::default();
    let mut err = 0.0;
    let mut terms = 0;
    for k in 0..=l {
        let coef =
            sign_pow(k) * binomial(l, k) * pochhammer(ComplexScalar::new(l as f64 + 1.0, 0.0), k)
                / pochhammer(a, k + 1);
        let m = kummer_m(a, a + k as f64 + 1.0, z, &ctl)?;
        acc.add(coef * m.value);
        err += coef.norm() * m.err_estimate;
        terms += m.terms_used;
    }
    let pre = prefactor(a, l) * sign_pow(l);
    let value = finite("f22_form_a", pre * acc.value())?;
    let err = pre.norm() * (err + 4.0 * EPS * acc.abs_sum) + 4.0 * EPS * value.norm();
    if double_suffices(acc.cancellation(), err, value) {
        return Ok(
            EvalResult::new(value, Method::FormA, terms, err).with_cancellation(acc.cancellation())
        );
    }
    let value = finite("f22_form_a", pre * sum_1f1_wide(a, l, z)?)?;
    Ok(
        EvalResult::new(value, Method::FormA, terms, 8.0 * EPS * value.norm())
            .with_cancellation(8.0),
    )
}

/// Σ_k (−1)^k (l+k)!/(k!(l−k)!) ₁F₁(a; a+k+1; z)/(a)_{k+1} in fixed point.
pub(crate) fn sum_1f1_wide(a: ComplexScalar, l: usize, z: ComplexScalar) -> Result<ComplexScalar> {
    let fx = Fixed::new(wide_bits(z, l));
    let wa = fx.from_c64(a);
    let wz = fx.from_c64(z);
    let mut acc = fx.zero();
    for k in 0..=l {
        let m = wide_kummer_m(&fx, &wa, &wa.add(&fx.int(k as i64 + 1)), &wz)?;
        let t = fx.div(&m, &fx.pochhammer(&wa, k + 1)).ok_or(Error::Pole {
            op: "f22_form_a",
            at: a,
        })?;
        let t = fx.mul(&fx.big(&kappa_weight(l, k)), &t);
        acc.add_assign(&if k % 2 == 0 { t } else { t.neg() });
    }
    Ok(fx.to_c64(&acc))
}

/// (−z)^{−a} (a)_{l+1}/(1−a)_l Σ_k C(l,k) (l+1)_k/k! γ(a+k, −z) z^{−k}.
/// Large max|summand|/|value| is reported through the cancellation ratio.
pub fn f22_form_b(args: F22Args) -> Result<EvalResult> {
    const OP: &str = "f22_form_b";
    args.nonzero_z(OP)?;
    let F22Args { a, l, z } = args;
    let mut acc = ComplexSum::default();
    let zinv = 1.0 / z;
    let mut zk = ComplexScalar::new(1.0, 0.0);
    for k in 0..=l {
        let coef =
            binomial(l, k) * pochhammer(ComplexScalar::new(l as f64 + 1.0, 0.0), k) / factorial(k);
        acc.add(coef * lower_inc_gamma(a + k as f64, -z)? * zk);
        zk *= zinv;
    }
    let pre = cpow(-z, -a) * prefactor(a, l);
    let value = finite(OP, pre * acc.value())?;
    // each γ(a+k, −z) carries the rounding of its own ₁F₁ and power
    let err = pre.norm() * 16.0 * EPS * acc.abs_sum + 4.0 * EPS * value.norm();
    if double_suffices(acc.cancellation(), err, value) {
        return Ok(
            EvalResult::new(value, Method::FormB, l + 1, err).with_cancellation(acc.cancellation())
        );
    }
    // (−z)^{−a} cancels against the (−z)^a pulled out of every γ(a+k, −z)
    let value = finite(OP, prefactor(a, l) * inc_gamma_sum_wide(OP, a, l, -z)?)?;
    Ok(
        EvalResult::new(value, Method::FormB, 2 * (l + 1), 8.0 * EPS * value.norm())
            .with_cancellation(8.0),
    )
}

/// Σ_n (−1)^n (l+n)!/(n!(l−n)!) M(a+n, a+n+1, −x)/(n! (a+n)) in fixed point.
/// Times x^a this is Σ_n (−1)^n C(l,n) (l+1)_n/n! γ(a+n, x) x^{−n}.
pub(crate) fn inc_gamma_sum_wide(
    op: &'static str,
    a: ComplexScalar,
    l: usize,
    x: ComplexScalar,
) -> Result<ComplexScalar> {
    let fx = Fixed::new(wide_bits(x, l));
    let wa = fx.from_c64(a);
    let mx = fx.from_c64(-x);
    let mut acc = fx.zero();
    for n in 0..=l {
        let an = wa.add(&fx.int(n as i64));
        let m = wide_kummer_m(&fx, &an, &an.add(&fx.one()), &mx)?;
        let den = fx.mul(&an, &fx.big(&big_factorial(n)));
        let t = fx.div(&m, &den).ok_or(Error::Pole { op, at: a })?;
        let t = fx.mul(&fx.big(&kappa_weight(l, n)), &t);
        acc.add_assign(&if n % 2 == 0 { t } else { t.neg() });
    }
    Ok(fx.to_c64(&acc))
}

/// κ⁺_l(a, z) = Γ(a) ₃F₁(a, −l, l+1; 1; −1/z).
pub fn kappa_plus(a: ComplexScalar, l: usize, z: ComplexScalar) -> Result<ComplexScalar> {
    if z == ComplexScalar::new(0.0, 0.0) {
        return Err(Error::domain("kappa_plus", "z must be nonzero"));
    }
    finite(
        "kappa_plus",
        gamma_complex(a)? * terminating_3f1(a, l, -1.0 / z),
    )
}

/// κ⁻ and its absolute error estimate.
pub(crate) fn kappa_minus_eval(
    a: ComplexScalar,
    l: usize,
    z: ComplexScalar,
) -> Result<(ComplexScalar, f64, usize)> {
    if z == ComplexScalar::new(0.0, 0.0) {
        return Err(Error::domain("kappa_minus", "z must be nonzero"));
    }
    let ctl = SeriesControl::default();
    let zinv = 1.0 / z;
    let mut zn = ComplexScalar::new(1.0, 0.0);
    let mut acc = ComplexSum::default();
    let mut err = 0.0;
    let mut terms = 0;
    for n in 0..=l {
        let coef = factorial(l + n) / (factorial(n) * factorial(l - n)) * sign_pow(n);
        let u = kummer_u_best(1.0 - a, 1.0 - a - n as f64, -z, &ctl)?;
        let w = coef * zn;
        acc.add(w * u.value);
        err += w.norm() * u.err_estimate;
        terms += u.terms_used;
        zn *= zinv;
    }
    let value = finite("kappa_minus", acc.value() * sign_pow(l + 1))?;
    Ok((value, err + 4.0 * EPS * acc.abs_sum, terms))
}

/// κ⁻_l(a, z) = (−1)^{l+1} Σ_n (l+n)!/(n!(l−n)!) (−1)^n z^{−n} U(1−a, 1−a−n, −z).
pub fn kappa_minus(a: ComplexScalar, l: usize, z: ComplexScalar) -> Result<ComplexScalar> {
    kappa_minus_eval(a, l, z).map(|r| r.0)
}

/// (a)_{l+1}/(1−a)_l (−z)^{−a} (κ⁺ + e^z κ⁻).
pub fn f22_form_c(args: F22Args) -> Result<EvalResult> {
    form_c_scaled(args, prefactor(args.a, args.l), Method::FormC)
}

/// form (c) with a caller-supplied prefactor in place of (a)_{l+1}/(1−a)_l.
pub(crate) fn form_c_scaled(
    args: F22Args,
    scale: ComplexScalar,
    method: Method,
) -> Result<EvalResult> {
    const OP: &str = "f22_form_c";
    args.nonzero_z(OP)?;
    let F22Args { a, l, z } = args;
    let kp = kappa_plus(a, l, z)?;
    let (km, km_err, terms) = kappa_minus_eval(a, l, z)?;
    let ez = z.exp();
    let second = ez * km;
    let inner = kp + second;
    let pre = scale * cpow(-z, -a);
    let value = finite(OP, pre * inner)?;
    let big = kp.norm().max(second.norm());
    let err = pre.norm() * (ez.norm() * km_err + 16.0 * EPS * (kp.norm() + second.norm()))
        + 4.0 * EPS * value.norm();
    let cancel = if inner.norm() > 0.0 {
        big / inner.norm()
    } else {
        f64::INFINITY
    };
    if double_suffices(cancel, err, value) {
        return Ok(EvalResult::new(value, method, terms + l + 1, err).with_cancellation(cancel));
    }
    let w = inner_wide(a, l, z)?;
    let value = finite(OP, scale * w.scaled)?;
    let err = scale.norm() * w.err + 4.0 * EPS * value.norm();
    Ok(EvalResult::new(value, method, w.terms, err).with_cancellation(err / (EPS * value.norm())))
}

/// (−z)^{−a} (κ⁺ + e^z κ⁻) summed in fixed point, with an absolute error
/// estimate.
pub(crate) struct WideInner {
    pub scaled: ComplexScalar,
    pub err: f64,
    pub terms: usize,
}

/// Expanding U(1−a, 1−a−n, −z) through ₁F₁ gives κ⁺ + e^z κ⁻ = Γ(a) W1 + (−z)^a W2.
/// W1 vanishes identically, so |Γ(a) W1| measures the arithmetic error. At
/// a = 1 U(0, ·, ·) = 1 and κ⁻ is a polynomial in 1/z.
pub(crate) fn inner_wide(a: ComplexScalar, l: usize, z: ComplexScalar) -> Result<WideInner> {
    const OP: &str = "kappa_wide";
    let fx = Fixed::new(wide_bits(z, l));
    let pole = || Error::Pole { op: OP, at: z };
    let one = fx.one();
    let wa = fx.from_c64(a);
    let wz = fx.from_c64(z);
    let mz = wz.neg();
    let zinv = fx.div(&one, &wz).ok_or_else(pole)?;
    let li = l as i64;
    let (f31, mut terms) = wide_series(
        OP,
        &[wa.clone(), fx.int(-li), fx.int(li + 1)],
        std::slice::from_ref(&one),
        &zinv.neg(),
        &fx,
        50_000,
    )?;
    let ez = wide_exp(&fx, &wz)?;
    let signed = |w: Wide| if l.is_multiple_of(2) { w.neg() } else { w };
    if a == ComplexScalar::new(1.0, 0.0) {
        let mut poly = fx.zero();
        let mut zn = fx.one();
        for n in 0..=l {
            let t = fx.mul(&fx.big(&kappa_weight(l, n)), &zn);
            poly.add_assign(&if n % 2 == 0 { t } else { t.neg() });
            zn = fx.mul(&zn, &zinv);
        }
        let inner = f31.add(&signed(fx.mul(&ez, &poly)));
        let scaled = -fx.to_c64(&inner) / z;
        return Ok(WideInner {
            scaled,
            err: 8.0 * EPS * scaled.norm(),
            terms: terms + l + 1,
        });
    }
    let one_minus_a = one.sub(&wa);
    let mut s1 = fx.zero();
    let mut s2 = fx.zero();
    let mut zn = fx.one();
    let mut ratio = fx.one(); // (a)_n / n!
    for n in 0..=l {
        let ni = n as i64;
        let w = fx.big(&kappa_weight(l, n));
        let m1 = wide_kummer_m(&fx, &one_minus_a, &one_minus_a.sub(&fx.int(ni)), &mz)?;
        let t1 = fx.mul(&fx.mul(&w, &zn), &fx.mul(&ratio, &m1));
        s1.add_assign(&if n % 2 == 0 { t1 } else { t1.neg() });
        let p = fx.pochhammer(&wa.neg().sub(&fx.int(ni)), n + 1);
        let m2 = wide_kummer_m(&fx, &fx.int(ni + 1), &one.add(&wa).add(&fx.int(ni)), &mz)?;
        let t2 = fx.div(&fx.mul(&w, &m2), &p).ok_or_else(pole)?;
        s2.add_assign(&t2);
        zn = fx.mul(&zn, &zinv);
        ratio = fx.div_int(&fx.mul(&ratio, &wa.add(&fx.int(ni))), n as u64 + 1);
        terms += 2;
    }
    let w1 = f31.add(&signed(fx.mul(&ez, &s1)));
    let w2 = fx.to_c64(&signed(fx.mul(&ez, &s2)));
    let head = cpow(-z, -a) * gamma_complex(a)? * fx.to_c64(&w1);
    Ok(WideInner {
        scaled: head + w2,
        err: head.norm() + 8.0 * EPS * w2.norm(),
        terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexScalar {
        ComplexScalar::new(re, im)
    }

    fn rel(a: ComplexScalar, b: ComplexScalar) -> f64 {
        (a - b).norm() / b.norm()
    }

    fn args(a: ComplexScalar, l: usize, z: ComplexScalar) -> F22Args {
        F22Args::new(a, l, z).unwrap()
    }

    #[test]
    fn series_reference_values() {
        let ctl = SeriesControl::default();
        assert_eq!(
            f22_series(args(c(1.0, 1.0), 2, c(0.0, 0.0)), &ctl)
                .unwrap()
                .value,
            c(1.0, 0.0)
        );
        let v = f22_series(args(c(1.0, 1.0), 2, c(0.0, -2.0)), &ctl)
            .unwrap()
            .value;
        assert!(
            rel(
                v,
                c(
                    0.803_897_917_707_078_879_072,
                    -0.120_774_692_820_683_711_347
                )
            ) < 1e-14,
            "{v}"
        );
        // l = 0 collapses to ₁F₁(a; a+1; z)
        let v = f22_series(args(c(0.5, 0.0), 0, c(1.0, 0.0)), &ctl)
            .unwrap()
            .value;
        let m = kummer_m(c(0.5, 0.0), c(1.5, 0.0), c(1.0, 0.0), &ctl)
            .unwrap()
            .value;
        assert!(rel(v, m) < 1e-15);
    }

    #[test]
    fn series_runs_past_denominator_crossing() {
        let ctl = SeriesControl::default();
        let v = f22_series(args(c(1.0, 1.0), 100, c(0.0, -200.0)), &ctl).unwrap();
        let want = c(22.633_939_047_388_219, -84.427_301_891_533_288);
        assert!(rel(v.value, want) < 1e-14, "{}", v.value);
        let v = f22_series(args(c(1.0, 1.0), 200, c(0.0, -600.0)), &ctl).unwrap();
        let want = c(-115.123_977_788_869_86, -100.486_354_990_966_03);
        assert!(rel(v.value, want) < 1e-14, "{}", v.value);
    }

    #[test]
    fn form_a_matches_series() {
        let ctl = SeriesControl::default();
        let p = args(c(1.0, 0.5), 3, c(0.0, 2.0));
        let a = f22_form_a(p).unwrap();
        assert_eq!(a.method, Method::FormA);
        assert!(
            rel(
                a.value,
                c(
                    1.575_840_858_369_783_310_004,
                    -0.286_820_386_292_407_842_205
                )
            ) < 1e-13
        );
        assert!(rel(a.value, f22_series(p, &ctl).unwrap().value) < 1e-10);
        let small = f22_form_a(args(c(1.0, 1.0), 1, c(1e-12, 0.0))).unwrap();
        assert!((small.value - 1.0).norm() < 1e-11);
        let l0 = f22_form_a(args(c(0.3, 0.4), 0, c(1.0, -2.0)))
            .unwrap()
            .value;
        let m = kummer_m(c(0.3, 0.4), c(1.3, 0.4), c(1.0, -2.0), &ctl)
            .unwrap()
            .value;
        assert!(rel(l0, m) < 1e-14);
    }

    #[test]
    fn form_b_matches_series() {
        let v = f22_form_b(args(c(1.0, -1.0), 2, c(0.0, -3.0))).unwrap();
        assert!(
            rel(
                v.value,
                c(
                    0.721_983_561_187_247_134_068,
                    -1.684_136_845_300_659_468_433
                )
            ) < 1e-9
        );
        assert!(!v.cancellation_warning());
        let p = args(c(0.5, 0.0), 1, c(1.0, 0.0));
        let b = f22_form_b(p).unwrap().value;
        assert!(rel(b, f22_form_a(p).unwrap().value) < 1e-12);
        assert!(rel(b, c(0.621_064_990_065_953_946_743, 0.0)) < 1e-12);
        assert!(f22_form_b(args(c(0.5, 0.1), 1, c(0.0, 0.0)))
            .unwrap_err()
            .is_domain());
    }

    #[test]
    fn kappa_values() {
        assert!(
            rel(
                kappa_plus(c(0.3, 0.2), 0, c(4.0, 1.0)).unwrap(),
                gamma_complex(c(0.3, 0.2)).unwrap()
            ) < 1e-15
        );
        assert!(
            rel(
                kappa_plus(c(2.0, 0.0), 1, c(-1.0, 0.0)).unwrap(),
                c(-3.0, 0.0)
            ) < 1e-14
        );
        let v = kappa_plus(c(1.0, 1.0), 2, c(0.0, 2.0)).unwrap();
        assert!(
            rel(
                v,
                c(
                    0.082_915_458_032_309_968_347,
                    -4.122_492_081_642_197_033_165
                )
            ) < 1e-12,
            "{v}"
        );
        let v = kappa_minus(c(1.0, 1.0), 1, c(0.0, -2.0)).unwrap();
        assert!(
            rel(
                v,
                c(0.566_962_466_244_030_393_579, 0.069_613_861_186_577_206_068)
            ) < 1e-12,
            "{v}"
        );
        assert!((kappa_minus(c(1.0, 0.0), 0, c(0.0, 3.0)).unwrap() + 1.0).norm() < 1e-15);
        let v = kappa_minus(c(0.3, 0.7), 0, c(1.0, 3.0)).unwrap();
        assert!(
            rel(
                v,
                c(
                    0.497_791_890_710_549_888_939,
                    -1.288_286_382_588_335_507_841
                )
            ) < 1e-12,
            "{v}"
        );
    }

    #[test]
    fn form_c_matches_series() {
        let ctl = SeriesControl::default();
        let a = c(1.0, 1.0);
        for l in 0..=4 {
            for r in [0.5, 2.0, 10.0] {
                for s in [1.0, -1.0] {
                    let p = args(a, l, c(0.0, 2.0 * s * r));
                    let fc = f22_form_c(p).unwrap().value;
                    let se = f22_series(p, &ctl).unwrap().value;
                    assert!(rel(fc, se) < 1e-9, "l={l} z={}: {fc} vs {se}", p.z);
                }
            }
        }
        let p = args(c(0.4, 0.3), 0, c(0.0, 0.1));
        let m = kummer_m(p.a, p.a + 1.0, p.z, &ctl).unwrap().value;
        assert!(rel(f22_form_c(p).unwrap().value, m) < 1e-9);
    }

    #[test]
    fn form_c_recovers_small_argument_cancellation() {
        let ctl = SeriesControl::default();
        for (a, l, z) in [
            (c(1.0, 0.25), 5, c(0.0, -0.2)),
            (c(0.3, 0.7), 3, c(1.0, 2.0)),
            (c(1.0, 1.0), 8, c(0.0, 1.0)),
        ] {
            let p = args(a, l, z);
            let v = f22_form_c(p).unwrap();
            let se = f22_series(p, &ctl).unwrap().value;
            assert!(rel(v.value, se) < 1e-13, "l={l} z={z}: {} vs {se}", v.value);
            assert!(!v.cancellation_warning());
        }
    }

    #[test]
    fn form_b_widens_at_high_l() {
        // mpmath, 40 digits
        let p = args(c(1.0, 0.551623699491896), 8, c(0.0, -12.822159346976967));
        let want = c(-0.433_880_100_630_114_926_6, -1.788_593_552_310_593_845);
        let v = f22_form_b(p).unwrap();
        assert!(rel(v.value, want) < 1e-13, "{}", v.value);
        assert!(v.rel_err() < 1e-14);
    }

    #[test]
    fn wide_inner_matches_double_sum() {
        let (a, l, z) = (c(1.0, 1.0), 2, c(0.0, 10.0));
        let w = inner_wide(a, l, z).unwrap();
        let inner = cpow(-z, a) * w.scaled;
        let direct = kappa_plus(a, l, z).unwrap() + z.exp() * kappa_minus(a, l, z).unwrap();
        assert!(
            rel(inner, c(-3.732_146_487, -1.942_188_809)) < 1e-9,
            "{inner}"
        );
        assert!(rel(inner, direct) < 1e-12);
        assert!(w.err < 1e-14 * w.scaled.norm());
    }
}
