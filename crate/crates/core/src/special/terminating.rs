//! Exact finite hypergeometric sums.

use super::sum::{sum_ascending, ComplexSum};
use super::{factorial, pochhammer};
use crate::error::finite;
use crate::{ComplexScalar, Error, Result};

/// ₁F₁(−k; b; z) = Σ_{s=0}^{k} (−k)_s/(b)_s z^s/s!.
pub fn terminating_1f1(k: usize, b: ComplexScalar, z: ComplexScalar) -> Result<ComplexScalar> {
    let mut terms = Vec::with_capacity(k + 1);
    let mut t = ComplexScalar::new(1.0, 0.0);
    terms.push(t);
    for s in 0..k {
        let bs = b + s as f64;
        if bs == ComplexScalar::new(0.0, 0.0) {
            return Err(Error::Pole {
                op: "terminating_1f1",
                at: b,
            });
        }
        t *= (s as f64 - k as f64) / bs * z / (s as f64 + 1.0);
        terms.push(t);
    }
    finite("terminating_1f1", sum_ascending(terms).value())
}

/// ₃F₁(a, −l, l+1; 1; x), largest terms first.
pub fn terminating_3f1(a: ComplexScalar, l: usize, x: ComplexScalar) -> ComplexScalar {
    let mut terms = Vec::with_capacity(l + 1);
    let mut t = ComplexScalar::new(1.0, 0.0);
    terms.push(t);
    for n in 0..l {
        let nf = n as f64;
        t *= (a + nf) * ((nf - l as f64) * (l as f64 + 1.0 + nf)) / ((nf + 1.0) * (nf + 1.0)) * x;
        terms.push(t);
    }
    terms.sort_by(|p, q| q.norm().total_cmp(&p.norm()));
    let mut acc = ComplexSum::default();
    for t in terms {
        acc.add(t);
    }
    acc.value()
}

/// ₃F₂(−l, −l, −n; 1, 1−a−l; 1) summed over m = 0..min(l, n).
pub fn terminating_3f2_unit(l: usize, n: usize, a: ComplexScalar) -> Result<ComplexScalar> {
    let c = 1.0 - a - l as f64;
    let top = l.min(n);
    let mut terms = Vec::with_capacity(top + 1);
    for m in 0..=top {
        let den = pochhammer(c, m);
        if den == ComplexScalar::new(0.0, 0.0) {
            return Err(Error::Pole {
                op: "terminating_3f2_unit",
                at: a,
            });
        }
        let lm = pochhammer(ComplexScalar::new(-(l as f64), 0.0), m).re;
        let nm = pochhammer(ComplexScalar::new(-(n as f64), 0.0), m).re;
        let fm = factorial(m);
        terms.push(lm * lm * nm / (fm * fm) / den);
    }
    finite("terminating_3f2_unit", sum_ascending(terms).value())
}
