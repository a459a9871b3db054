//! Compensated summation.

use crate::ComplexScalar;

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Complex compensated accumulator that also tracks Σ|term| and max|term|.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct ComplexSum {
    re: Neumaier,
    im: Neumaier,
    pub(crate) abs_sum: f64,
    pub(crate) max_abs: f64,
}

impl ComplexSum {
    pub(crate) fn add(&mut self, z: ComplexScalar) {
        self.re.add(z.re);
        self.im.add(z.im);
        let m = z.norm();
        self.abs_sum += m;
        if m > self.max_abs {
            self.max_abs = m;
        }
    }

    pub(crate) fn value(&self) -> ComplexScalar {
        ComplexScalar::new(self.re.value(), self.im.value())
    }

    /// max|term| / |sum|, ∞ for an exactly vanishing sum with nonzero terms.
    pub(crate) fn cancellation(&self) -> f64 {
        let v = self.value().norm();
        if v > 0.0 {
            self.max_abs / v
        } else if self.max_abs > 0.0 {
            f64::INFINITY
        } else {
            1.0
        }
    }
}

/// Sums a finite list smallest-|term| first with compensation.
pub(crate) fn sum_ascending(mut terms: Vec<ComplexScalar>) -> ComplexSum {
    terms.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
    let mut acc = ComplexSum::default();
    for t in terms {
        acc.add(t);
    }
    acc
}
