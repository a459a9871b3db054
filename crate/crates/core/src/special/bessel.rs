//! Spherical Bessel and Hankel functions of complex argument.

use crate::ComplexScalar;

const RESCALE: f64 = 1e200;

fn j0(z: ComplexScalar) -> ComplexScalar {
    if z.norm() < 1e-4 {
        let z2 = z * z;
        return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
    }
    z.sin() / z
}

fn j1(z: ComplexScalar) -> ComplexScalar {
    if z.norm() < 1e-2 {
        let z2 = z * z;
        return z / 3.0 * (1.0 - z2 / 10.0 + z2 * z2 / 280.0 - z2 * z2 * z2 / 15120.0);
    }
    z.sin() / (z * z) - z.cos() / z
}

/// j_l(z). Upward recurrence when |z| > l, Miller's downward recurrence
/// normalised against j_0 or j_1 otherwise.
pub fn spherical_bessel_j(l: usize, z: ComplexScalar) -> ComplexScalar {
    if z == ComplexScalar::new(0.0, 0.0) {
        return if l == 0 {
            ComplexScalar::new(1.0, 0.0)
        } else {
            z
        };
    }
    match l {
        0 => return j0(z),
        1 => return j1(z),
        _ => {}
    }
    if z.norm() > l as f64 {
        let (mut a, mut b) = (j0(z), j1(z));
        for n in 1..l {
            let c = (2 * n + 1) as f64 / z * b - a;
            a = b;
            b = c;
        }
        return b;
    }
    miller(l, z)
}

fn miller(l: usize, z: ComplexScalar) -> ComplexScalar {
    let start = l + z.norm().ceil() as usize + 32;
    let mut upper = ComplexScalar::new(0.0, 0.0);
    let mut cur = ComplexScalar::new(1.0, 0.0);
    let mut at_l = ComplexScalar::new(0.0, 0.0);
    let mut at_1 = ComplexScalar::new(0.0, 0.0);
    let mut at_0 = ComplexScalar::new(0.0, 0.0);
    // cur holds the unnormalised f_n, upper f_{n+1}
    for n in (0..=start).rev() {
        if n == l {
            at_l = cur;
        }
        if n == 1 {
            at_1 = cur;
        }
        if n == 0 {
            at_0 = cur;
            break;
        }
        let lower = (2 * n + 1) as f64 / z * cur - upper;
        upper = cur;
        cur = lower;
        if cur.norm() > RESCALE {
            cur /= RESCALE;
            upper /= RESCALE;
            at_l /= RESCALE;
            at_1 /= RESCALE;
        }
    }
    let (e0, e1) = (j0(z), j1(z));
    if e0.norm() >= e1.norm() {
        at_l * (e0 / at_0)
    } else {
        at_l * (e1 / at_1)
    }
}

/// Which spherical Hankel function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HankelKind {
    First,
    Second,
}

/// h_l^(1)(z) = j_l + i y_l or h_l^(2)(z) = j_l − i y_l, by upward recurrence
/// from h_0 = ∓i e^{±iz}/z. Singular at z = 0.
pub fn spherical_hankel(l: usize, z: ComplexScalar, kind: HankelKind) -> ComplexScalar {
    let s = match kind {
        HankelKind::First => 1.0,
        HankelKind::Second => -1.0,
    };
    let i = ComplexScalar::new(0.0, s);
    let e = (i * z).exp();
    let mut a = -i * e / z;
    if l == 0 {
        return a;
    }
    let mut b = -e * (z + i) / (z * z);
    for n in 1..l {
        let c = (2 * n + 1) as f64 / z * b - a;
        a = b;
        b = c;
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> ComplexScalar {
        ComplexScalar::new(re, im)
    }

    #[test]
    fn closed_forms() {
        assert!(spherical_bessel_j(0, c(PI, 0.0)).norm() < 1e-16);
        let v = spherical_bessel_j(1, c(1.0, 0.0));
        assert!((v.re - (1f64.sin() - 1f64.cos())).abs() < 1e-15);
        assert_eq!(spherical_bessel_j(3, c(0.0, 0.0)), c(0.0, 0.0));
        assert_eq!(spherical_bessel_j(0, c(0.0, 0.0)), c(1.0, 0.0));
    }

    #[test]
    fn reference_values() {
        // 30-digit references
        let v = spherical_bessel_j(5, c(2.0, 0.0));
        assert!(
            (v.re / 0.002_635_169_770_244_117_349 - 1.0).abs() < 1e-13,
            "{v}"
        );
        let v = spherical_bessel_j(2, c(5.0, 0.0));
        assert!(
            (v.re / 0.134_731_210_085_125_218_789 - 1.0).abs() < 1e-13,
            "{v}"
        );
        let v = spherical_bessel_j(20, c(1.0, 0.0));
        assert!(
            (v.re / 7.537_795_722_236_872_994e-26 - 1.0).abs() < 1e-12,
            "{v}"
        );
    }

    #[test]
    fn small_argument_limit() {
        // j_l(z) ≈ z^l/(2l+1)!!
        let z = c(1e-8, 1e-8);
        let v = spherical_bessel_j(3, z);
        let expect = z * z * z / 105.0;
        assert!((v - expect).norm() / expect.norm() < 1e-12);
    }

    #[test]
    fn hankel_split() {
        let z = c(1.3, 0.4);
        for l in 0..6 {
            let h1 = spherical_hankel(l, z, HankelKind::First);
            let h2 = spherical_hankel(l, z, HankelKind::Second);
            let j = spherical_bessel_j(l, z);
            assert!(
                ((h1 + h2) / 2.0 - j).norm() < 1e-13 * (1.0 + j.norm()),
                "l={l}"
            );
        }
    }

    proptest! {
        #[test]
        fn three_term_recurrence(l in 1usize..=10, r in 0.5f64..50.0, th in -PI..PI) {
            let z = c(r * th.cos(), r * th.sin());
            let lhs = spherical_bessel_j(l - 1, z) + spherical_bessel_j(l + 1, z);
            let rhs = (2 * l + 1) as f64 / z * spherical_bessel_j(l, z);
            let scale = lhs.norm().max(rhs.norm());
            prop_assert!((lhs - rhs).norm() <= 1e-10 * scale, "{} vs {}", lhs, rhs);
        }
    }
}
