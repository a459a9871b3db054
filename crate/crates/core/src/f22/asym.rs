//! Large-|z| expansion and the coefficients d_n^(l) of its dominant series.

use super::forms::kappa_plus;
use super::F22Args;
use crate::error::finite;
use crate::special::truncation::{sum_fixed, sum_optimal, Truncated};
use crate::special::{
    cpow, integer_distance, pochhammer, sign_pow, terminating_3f2_unit, INTEGER_GUARD,
};
use crate::{ComplexScalar, Error, EvalResult, Method, Result};
use twofloat::TwoFloat;

const EPS: f64 = f64::EPSILON;

/// d_0..d_N for fixed (a, l).
#[derive(Debug, Clone, PartialEq)]
pub struct AsymCoeffs {
    pub a: ComplexScalar,
    pub l: usize,
    pub d: Vec<ComplexScalar>,
}

fn rec_a(a: ComplexScalar, l: usize, n: usize) -> ComplexScalar {
    let (nf, lf) = (n as f64, l as f64);
    2.0 * nf * nf - nf * (2.0 * a - 3.0) - lf * lf - lf - a + 1.0
}

fn rec_b(a: ComplexScalar, l: usize, n: usize) -> ComplexScalar {
    let (nf, lf) = (n as f64, l as f64);
    nf * (nf - lf - a) * (nf + lf + 1.0 - a)
}

type Dd = num_complex::Complex<TwoFloat>;

fn dd(x: f64) -> TwoFloat {
    TwoFloat::from_f64(x)
}

/// Three-term recursion
/// 4(n+1) d_{n+1} = 2(2n² − n(2a−3) − l² − l − a + 1) d_n − n(n−l−a)(n+l+1−a) d_{n−1},
/// carried in double-double: forward propagation loses several digits by
/// n ≈ 20 when Im a is small.
pub fn d_coeffs_recursive(a: ComplexScalar, l: usize, n_max: usize) -> AsymCoeffs {
    let wa = Dd::new(dd(a.re), dd(a.im));
    let a2 = wa * wa;
    let lf = l as f64;
    let mut cur = Dd::new(dd(1.0), dd(0.0));
    let mut d = Vec::with_capacity(n_max + 1);
    d.push(dd_to_c64(cur));
    if n_max == 0 {
        return AsymCoeffs { a, l, d };
    }
    let mut prev = cur;
    cur = div_real(Dd::new(dd(1.0 - lf * lf - lf), dd(0.0)) - wa, 2.0);
    d.push(dd_to_c64(cur));
    for n in 1..n_max {
        let nf = n as f64;
        let odd = dd(2.0 * nf + 1.0);
        // 2n² + 3n − l² − l + 1 − (2n+1)a and n[(n−l)(n+l+1) − (2n+1)a + a²]
        let ra = Dd::new(dd(2.0 * nf * nf + 3.0 * nf - lf * lf - lf + 1.0), dd(0.0)) - wa * odd;
        let rb = (Dd::new(dd((nf - lf) * (nf + lf + 1.0)), dd(0.0)) - wa * odd + a2) * dd(nf);
        let next = div_real(ra * cur * dd(2.0) - rb * prev, 4.0 * (nf + 1.0));
        prev = cur;
        cur = next;
        d.push(dd_to_c64(cur));
    }
    AsymCoeffs { a, l, d }
}

/// twofloat's TwoFloat / TwoFloat drops the low word; TwoFloat / f64 does not.
fn div_real(x: Dd, r: f64) -> Dd {
    Dd::new(x.re / r, x.im / r)
}

fn dd_to_c64(x: Dd) -> ComplexScalar {
    ComplexScalar::new(x.re.hi(), x.im.hi())
}

/// d_n = (1−a)_n (a)_l / (2ⁿ (a−n)_l) · ₃F₂(−l, −l, −n; 1, 1−a−l; 1).
pub fn d_coeff_closed(a: ComplexScalar, l: usize, n: usize) -> Result<ComplexScalar> {
    const OP: &str = "d_coeff_closed";
    let den = pochhammer(a - n as f64, l);
    if den == ComplexScalar::new(0.0, 0.0) {
        return Err(Error::Pole { op: OP, at: a });
    }
    let f = terminating_3f2_unit(l, n, a)?;
    let v = pochhammer(1.0 - a, n) * pochhammer(a, l) / den * f / 2f64.powi(n as i32);
    finite(OP, v)
}

/// Truncation order of the divergent series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    Fixed(usize),
    /// Stop before the smallest term.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymConfig {
    pub min_abs_z: f64,
    pub max_terms: usize,
}

impl Default for AsymConfig {
    fn default() -> Self {
        AsymConfig {
            min_abs_z: 5.0,
            max_terms: 2000,
        }
    }
}

/// Terms 2ⁿ d_n z^{−n} generated in order. Away from integer a the closed
/// form is used with (1−a)_n z^{−n} carried as one running product; at
/// integer a (where the closed form is 0/0) the recursion is scaled by
/// (2/z)ⁿ instead.
pub(crate) struct DominantTerms {
    a: ComplexScalar,
    l: usize,
    z: ComplexScalar,
    n: usize,
    closed: bool,
    running: ComplexScalar,
    prev: ComplexScalar,
    cur: ComplexScalar,
}

impl DominantTerms {
    pub(crate) fn new(a: ComplexScalar, l: usize, z: ComplexScalar) -> Self {
        DominantTerms {
            a,
            l,
            z,
            n: 0,
            closed: integer_distance(a) >= INTEGER_GUARD,
            running: ComplexScalar::new(1.0, 0.0),
            prev: ComplexScalar::new(0.0, 0.0),
            cur: ComplexScalar::new(1.0, 0.0),
        }
    }

    pub(crate) fn next_term(&mut self) -> Result<ComplexScalar> {
        let n = self.n;
        let t = if self.closed {
            if n > 0 {
                self.running *= (n as f64 - self.a) / self.z;
            }
            let den = pochhammer(self.a - n as f64, self.l);
            if den == ComplexScalar::new(0.0, 0.0) {
                return Err(Error::Pole {
                    op: "d_coeff_closed",
                    at: self.a,
                });
            }
            self.running * pochhammer(self.a, self.l) / den
                * terminating_3f2_unit(self.l, n, self.a)?
        } else {
            if n > 0 {
                let w = 2.0 / self.z;
                let k = n - 1;
                let next = (2.0 * rec_a(self.a, self.l, k) * self.cur * w
                    - rec_b(self.a, self.l, k) * self.prev * w * w)
                    / (4.0 * n as f64);
                self.prev = self.cur;
                self.cur = next;
            }
            self.cur
        };
        self.n += 1;
        Ok(t)
    }
}

/// Σ 2ⁿ d_n z^{−n}, optimally truncated or to a fixed order.
pub(crate) fn dominant_series(
    op: &'static str,
    a: ComplexScalar,
    l: usize,
    z: ComplexScalar,
    trunc: Truncation,
    max_terms: usize,
) -> Result<Truncated> {
    let mut gen = DominantTerms::new(a, l, z);
    let mut failure = None;
    let mut term = |_n: usize| match gen.next_term() {
        Ok(t) => t,
        Err(e) => {
            failure.get_or_insert(e);
            ComplexScalar::new(0.0, 0.0)
        }
    };
    let out = match trunc {
        Truncation::Auto => sum_optimal(&mut term, max_terms),
        Truncation::Fixed(n) => {
            let mut t = sum_fixed(op, &mut term, n)?;
            t.first_omitted = term(n + 1).norm();
            t
        }
    };
    match failure {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// The two terms of the large-|z| form and the truncation details.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymParts {
    /// (a)_{l+1}/(1−a)_l (−z)^{−a} κ⁺_l(a, z)
    pub first: ComplexScalar,
    /// (−1)^l (a)_{l+1}/(1−a)_l e^z/z Σ_{n≤N} 2ⁿ d_n z^{−n}
    pub second: ComplexScalar,
    /// Index of the last term kept.
    pub last: usize,
    /// Absolute error estimate of first + second.
    pub err_estimate: f64,
}

pub fn f22_asymptotic_parts(
    args: F22Args,
    trunc: Truncation,
    cfg: &AsymConfig,
) -> Result<AsymParts> {
    const OP: &str = "f22_asymptotic";
    args.check_strip()?;
    let F22Args { a, l, z } = args;
    if z.norm() < cfg.min_abs_z {
        return Err(Error::domain(
            OP,
            format!("|z| = {} below the minimum {}", z.norm(), cfg.min_abs_z),
        ));
    }
    let pre = pochhammer(a, l + 1) / pochhammer(1.0 - a, l);
    let first = pre * cpow(-z, -a) * kappa_plus(a, l, z)?;
    let s = dominant_series(OP, a, l, z, trunc, cfg.max_terms)?;
    let scale = pre * z.exp() / z * sign_pow(l);
    let second = scale * s.sum;
    let err = scale.norm() * (s.first_omitted + 4.0 * EPS * s.abs_sum) + 16.0 * EPS * first.norm();
    Ok(AsymParts {
        first: finite(OP, first)?,
        second: finite(OP, second)?,
        last: s.last,
        err_estimate: err,
    })
}

/// First term plus the truncated dominant series; err_estimate is the
/// magnitude of the first omitted term plus a rounding floor.
pub fn f22_asymptotic(args: F22Args, trunc: Truncation, cfg: &AsymConfig) -> Result<EvalResult> {
    let p = f22_asymptotic_parts(args, trunc, cfg)?;
    Ok(EvalResult::new(
        p.first + p.second,
        Method::Asymptotic,
        p.last + 1,
        p.err_estimate,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::f22::f22_series;
    use crate::special::SeriesControl;

    fn c(re: f64, im: f64) -> ComplexScalar {
        ComplexScalar::new(re, im)
    }

    fn rel(a: ComplexScalar, b: ComplexScalar) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn recursion_stays_accurate_for_small_charge() {
        let a = c(1.0, 0.10408605065938265);
        let d = d_coeffs_recursive(a, 6, 20).d;
        let want = c(-22_392_670_986.754_601_98, -101_239_532_961.634_418_41);
        assert!(rel(d[20], want) < 1e-15, "{}", d[20]);
        assert!(rel(d[20], d_coeff_closed(a, 6, 20).unwrap()) < 1e-14);
    }

    #[test]
    fn recursion_seeds() {
        let d = d_coeffs_recursive(c(1.0, 1.0), 1, 3).d;
        assert_eq!(d[0], c(1.0, 0.0));
        assert_eq!(d[1], c(-1.0, -0.5));
        assert_eq!(d_coeffs_recursive(c(0.3, 0.0), 2, 0).d, vec![c(1.0, 0.0)]);
    }

    #[test]
    fn closed_matches_recursion() {
        assert_eq!(d_coeff_closed(c(0.3, 0.2), 3, 0).unwrap(), c(1.0, 0.0));
        let a = c(0.7, -0.4);
        assert!(rel(d_coeff_closed(a, 0, 1).unwrap(), (1.0 - a) / 2.0) < 1e-15);
        let d = d_coeffs_recursive(c(0.5, 0.0), 0, 2).d;
        assert!(rel(d[2], d_coeff_closed(c(0.5, 0.0), 0, 2).unwrap()) < 1e-14);
        let d = d_coeffs_recursive(c(1.0, 1.0), 2, 5).d;
        assert!(rel(d[5], d_coeff_closed(c(1.0, 1.0), 2, 5).unwrap()) < 1e-12);
    }

    #[test]
    fn term_ratios_follow_coefficients() {
        let (a, l, z) = (c(1.0, 0.5), 3, c(0.0, 40.0));
        let mut g = DominantTerms::new(a, l, z);
        let t0 = g.next_term().unwrap();
        for n in 1..8 {
            let t = g.next_term().unwrap();
            let expect = d_coeff_closed(a, l, n).unwrap() * 2f64.powi(n as i32) / z.powu(n as u32);
            assert!(rel(t / t0, expect) < 1e-13, "n={n}");
        }
    }

    #[test]
    fn integer_a_uses_recursion() {
        let (l, z) = (2, c(0.0, -30.0));
        let mut g = DominantTerms::new(c(1.0, 0.0), l, z);
        let d = d_coeffs_recursive(c(1.0, 0.0), l, 6).d;
        for (n, dn) in d.iter().enumerate() {
            let expect = dn * 2f64.powi(n as i32) / z.powu(n as u32);
            assert!((g.next_term().unwrap() - expect).norm() < 1e-15 * (1.0 + expect.norm()));
        }
    }

    #[test]
    fn matches_series_at_large_argument() {
        let ctl = SeriesControl::default();
        let p = F22Args::new(c(0.5, 0.0), 0, c(0.0, 50.0)).unwrap();
        let v = f22_asymptotic(p, Truncation::Auto, &AsymConfig::default()).unwrap();
        let s = f22_series(p, &ctl).unwrap().value;
        assert!(rel(v.value, s) < 1e-8);
        assert!((v.value - s).norm() <= 10.0 * v.err_estimate.max(1e-15 * s.norm()));
    }

    #[test]
    fn fixed_order_error_decay() {
        // N = 4: the dominant remainder falls like |z|^{-5}
        let ctl = SeriesControl::default();
        let dev = |y: f64| {
            let p = F22Args::new(c(1.0, 0.5), 1, c(0.0, y)).unwrap();
            let v = f22_asymptotic(p, Truncation::Fixed(4), &AsymConfig::default())
                .unwrap()
                .value;
            (v - f22_series(p, &ctl).unwrap().value).norm()
        };
        let ratio = dev(20.0) / dev(40.0);
        assert!((8.0..=64.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn divergence_onset_is_reported() {
        let p = F22Args::new(c(1.0, 1.0), 4, c(0.0, 6.0)).unwrap();
        match f22_asymptotic(p, Truncation::Fixed(200), &AsymConfig::default()) {
            Err(Error::DivergenceOnset {
                requested, optimal, ..
            }) => {
                assert_eq!(requested, 200);
                assert!(optimal < 200);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn preconditions() {
        let p = F22Args::new(c(1.0, 1.0), 1, c(0.0, 2.0)).unwrap();
        assert!(f22_asymptotic(p, Truncation::Auto, &AsymConfig::default())
            .unwrap_err()
            .is_domain());
        let p = F22Args::new(c(3.5, 1.0), 1, c(0.0, 20.0)).unwrap();
        assert!(f22_asymptotic(p, Truncation::Auto, &AsymConfig::default())
            .unwrap_err()
            .is_domain());
    }
}
