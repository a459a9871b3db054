//! Summation of divergent asymptotic series.

use super::sum::ComplexSum;
use crate::{ComplexScalar, Error, Result};

/// Outcome of summing an asymptotic series.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Truncated {
    pub sum: ComplexScalar,
    /// Index of the last term included.
    pub last: usize,
    /// |first omitted term|; 0 when the series terminated.
    pub first_omitted: f64,
    pub abs_sum: f64,
}

/// Optimal truncation: terms are added while their magnitudes decrease;
/// summation stops before the first term larger than its predecessor, or
/// once a term drops below double-precision resolution of the partial sum.
pub(crate) fn sum_optimal(
    mut term: impl FnMut(usize) -> ComplexScalar,
    max_terms: usize,
) -> Truncated {
    let mut acc = ComplexSum::default();
    let t0 = term(0);
    acc.add(t0);
    let mut prev = t0.norm();
    let mut n = 1;
    loop {
        if n > max_terms {
            return Truncated {
                sum: acc.value(),
                last: n - 1,
                first_omitted: prev,
                abs_sum: acc.abs_sum,
            };
        }
        let t = term(n);
        let m = t.norm();
        if m == 0.0 && prev == 0.0 {
            return Truncated {
                sum: acc.value(),
                last: n - 1,
                first_omitted: 0.0,
                abs_sum: acc.abs_sum,
            };
        }
        if m > prev || m <= f64::EPSILON * 0.25 * acc.value().norm() {
            return Truncated {
                sum: acc.value(),
                last: n - 1,
                first_omitted: m,
                abs_sum: acc.abs_sum,
            };
        }
        acc.add(t);
        prev = m;
        n += 1;
    }
}

/// Sums terms 0..=n_max; fails if the magnitudes turn upward before n_max.
pub(crate) fn sum_fixed(
    op: &'static str,
    mut term: impl FnMut(usize) -> ComplexScalar,
    n_max: usize,
) -> Result<Truncated> {
    let mut acc = ComplexSum::default();
    let mut prev = f64::INFINITY;
    for n in 0..=n_max {
        let t = term(n);
        let m = t.norm();
        if m > prev && prev > 0.0 {
            return Err(Error::DivergenceOnset {
                op,
                requested: n_max,
                optimal: n - 1,
            });
        }
        acc.add(t);
        prev = m;
    }
    Ok(Truncated {
        sum: acc.value(),
        last: n_max,
        first_omitted: term(n_max + 1).norm(),
        abs_sum: acc.abs_sum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    // Euler's series Σ (−1)^n n! x^n, smallest term near n = 1/x
    fn euler(x: f64) -> impl FnMut(usize) -> ComplexScalar {
        move |n| {
            let mut t = 1.0;
            for j in 1..=n {
                t *= -(j as f64) * x;
            }
            ComplexScalar::new(t, 0.0)
        }
    }

    #[test]
    fn stops_at_smallest_term() {
        let r = sum_optimal(euler(0.1), 1000);
        // |t_n| = n! 10^−n decreases up to n = 9 = 10 and rises after n = 10
        assert_eq!(r.last, 10);
        assert!((r.first_omitted - 39916800.0 * 1e-11).abs() < 1e-15);
    }

    #[test]
    fn fixed_beyond_onset_reports_optimal() {
        match sum_fixed("t", euler(0.1), 15) {
            Err(Error::DivergenceOnset {
                optimal, requested, ..
            }) => {
                assert_eq!(optimal, 10);
                assert_eq!(requested, 15);
            }
            other => panic!("{other:?}"),
        }
        let ok = sum_fixed("t", euler(0.1), 3).unwrap();
        assert_eq!(ok.last, 3);
        assert!((ok.first_omitted - 24e-4).abs() < 1e-15);
    }

    #[test]
    fn terminating_series_has_no_error() {
        let r = sum_optimal(
            |n| {
                if n < 3 {
                    ComplexScalar::new(1.0 / (n + 1) as f64, 0.0)
                } else {
                    ComplexScalar::new(0.0, 0.0)
                }
            },
            100,
        );
        assert_eq!(r.first_omitted, 0.0);
        assert!((r.sum.re - (1.0 + 0.5 + 1.0 / 3.0)).abs() < 1e-15);
    }
}
