//! Fixed-point complex arithmetic on big integers.
//!
//! Used when a series loses more digits to cancellation than a double can
//! afford. Values are stored as integers scaled by 2^`frac_bits`, so the
//! rounding error of every operation is absolute (≈ 2^−frac_bits) rather
//! than relative to the largest intermediate.

use num_bigint::{BigInt, Sign};
use num_traits::{ToPrimitive, Zero};

use crate::ComplexScalar;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Wide {
    re: BigInt,
    im: BigInt,
}

/// Working precision for a family of [`Wide`] values.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Fixed {
    frac_bits: u32,
}

#[allow(clippy::wrong_self_convention)]
impl Fixed {
    pub(crate) fn new(frac_bits: u32) -> Self {
        Fixed { frac_bits }
    }

    pub(crate) fn frac_bits(&self) -> u32 {
        self.frac_bits
    }

    pub(crate) fn zero(&self) -> Wide {
        Wide {
            re: BigInt::zero(),
            im: BigInt::zero(),
        }
    }

    pub(crate) fn one(&self) -> Wide {
        Wide {
            re: BigInt::from(1u8) << self.frac_bits,
            im: BigInt::zero(),
        }
    }

    fn real(&self, x: f64) -> BigInt {
        if x == 0.0 {
            return BigInt::zero();
        }
        let bits = x.to_bits();
        let negative = bits >> 63 == 1;
        let exp_field = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mantissa, exp) = if exp_field == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp_field - 1075)
        };
        let shift = exp + self.frac_bits as i64;
        let m = BigInt::from(mantissa);
        let v = if shift >= 0 {
            m << shift as usize
        } else {
            m >> (-shift) as usize
        };
        if negative {
            -v
        } else {
            v
        }
    }

    /// Exact conversion (up to bits below 2^−frac_bits).
    pub(crate) fn from_c64(&self, z: ComplexScalar) -> Wide {
        Wide {
            re: self.real(z.re),
            im: self.real(z.im),
        }
    }

    fn to_f64(&self, v: &BigInt) -> f64 {
        let n = v.bits() as i64;
        if n == 0 {
            return 0.0;
        }
        let keep = 64;
        let (head, exp) = if n > keep {
            (v >> (n - keep) as usize, n - keep - self.frac_bits as i64)
        } else {
            (v.clone(), -(self.frac_bits as i64))
        };
        ldexp(head.to_f64().unwrap_or(f64::NAN), exp)
    }

    pub(crate) fn to_c64(&self, w: &Wide) -> ComplexScalar {
        ComplexScalar::new(self.to_f64(&w.re), self.to_f64(&w.im))
    }

    pub(crate) fn mul(&self, a: &Wide, b: &Wide) -> Wide {
        let (b, tz) = b.strip();
        let re = &a.re * &b.re - &a.im * &b.im;
        let im = &a.re * &b.im + &a.im * &b.re;
        Wide {
            re: shift(re, tz as i64 - self.frac_bits as i64),
            im: shift(im, tz as i64 - self.frac_bits as i64),
        }
    }

    /// a / b, or `None` when b is zero at this precision.
    pub(crate) fn div(&self, a: &Wide, b: &Wide) -> Option<Wide> {
        let (b, tz) = b.strip();
        let den = &b.re * &b.re + &b.im * &b.im;
        if den.is_zero() {
            return None;
        }
        // a/b = a conj(b') 2^{−tz} / |b'|², with the result scaled by 2^frac_bits
        let up = self.frac_bits as i64 - tz as i64;
        let re = shift(&a.re * &b.re + &a.im * &b.im, up) / &den;
        let im = shift(&a.im * &b.re - &a.re * &b.im, up) / &den;
        Some(Wide { re, im })
    }

    pub(crate) fn div_int(&self, a: &Wide, k: u64) -> Wide {
        Wide {
            re: &a.re / k,
            im: &a.im / k,
        }
    }

    pub(crate) fn int(&self, k: i64) -> Wide {
        self.big(&BigInt::from(k))
    }

    pub(crate) fn big(&self, k: &BigInt) -> Wide {
        Wide {
            re: k << self.frac_bits,
            im: BigInt::zero(),
        }
    }

    /// (a)_n as a left-to-right product.
    pub(crate) fn pochhammer(&self, a: &Wide, n: usize) -> Wide {
        let mut p = self.one();
        for j in 0..n {
            p = self.mul(&p, &a.add(&self.int(j as i64)));
        }
        p
    }

    /// log2 of the magnitude, −∞ for zero.
    pub(crate) fn log2_abs(&self, w: &Wide) -> f64 {
        let n = w.re.bits().max(w.im.bits());
        if n == 0 {
            f64::NEG_INFINITY
        } else {
            n as f64 - self.frac_bits as f64
        }
    }
}

impl Wide {
    pub(crate) fn add(&self, other: &Wide) -> Wide {
        Wide {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
        }
    }

    pub(crate) fn add_assign(&mut self, other: &Wide) {
        self.re += &other.re;
        self.im += &other.im;
    }

    pub(crate) fn sub(&self, other: &Wide) -> Wide {
        Wide {
            re: &self.re - &other.re,
            im: &self.im - &other.im,
        }
    }

    pub(crate) fn neg(&self) -> Wide {
        Wide {
            re: -&self.re,
            im: -&self.im,
        }
    }

    /// Drops the common trailing zero bits: self = w·2^tz.
    fn strip(&self) -> (std::borrow::Cow<'_, Wide>, u64) {
        let tz = match (self.re.trailing_zeros(), self.im.trailing_zeros()) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => 0,
        };
        if tz < 64 {
            return (std::borrow::Cow::Borrowed(self), 0);
        }
        let w = Wide {
            re: &self.re >> tz as usize,
            im: &self.im >> tz as usize,
        };
        (std::borrow::Cow::Owned(w), tz)
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.re.sign() == Sign::NoSign && self.im.sign() == Sign::NoSign
    }
}

/// x · 2^e without intermediate overflow or underflow.
pub(crate) fn ldexp(mut x: f64, mut e: i64) -> f64 {
    const STEP: i64 = 600;
    while e > STEP {
        x *= 2f64.powi(STEP as i32);
        e -= STEP;
    }
    while e < -STEP {
        x *= 2f64.powi(-STEP as i32);
        e += STEP;
    }
    x * 2f64.powi(e as i32)
}

fn shift(v: BigInt, by: i64) -> BigInt {
    if by >= 0 {
        v << by as usize
    } else {
        v >> (-by) as usize
    }
}

/// (l+n)! / (n! (l−n)!), exactly.
pub(crate) fn kappa_weight(l: usize, n: usize) -> BigInt {
    let mut w = BigInt::from(1u8);
    for j in (l - n + 1)..=(l + n) {
        w *= j;
    }
    w / big_factorial(n)
}

pub(crate) fn big_factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::from(1u8), |acc, j| acc * j)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_weights() {
        assert_eq!(kappa_weight(3, 0), BigInt::from(1));
        assert_eq!(kappa_weight(3, 2), BigInt::from(60));
        assert_eq!(kappa_weight(4, 4), BigInt::from(1680));
        assert_eq!(big_factorial(5), BigInt::from(120));
    }

    #[test]
    fn integer_helpers() {
        let fx = Fixed::new(80);
        let a = fx.from_c64(ComplexScalar::new(0.5, 1.0));
        let p = fx.to_c64(&fx.pochhammer(&a, 3));
        let expect = crate::special::pochhammer(ComplexScalar::new(0.5, 1.0), 3);
        assert!((p - expect).norm() < 1e-15 * expect.norm());
        assert_eq!(
            fx.to_c64(&a.add(&a).add(&a).neg()),
            ComplexScalar::new(-1.5, -3.0)
        );
        assert_eq!(
            fx.to_c64(&fx.int(7).sub(&fx.int(9))),
            ComplexScalar::new(-2.0, 0.0)
        );
    }

    #[test]
    fn round_trip_is_exact() {
        let fx = Fixed::new(200);
        for z in [
            ComplexScalar::new(1.0, -0.0),
            ComplexScalar::new(-3.25e-30, 7.0e40),
            ComplexScalar::new(0.1, std::f64::consts::PI),
        ] {
            assert_eq!(fx.to_c64(&fx.from_c64(z)), z);
        }
    }

    #[test]
    fn arithmetic_matches_double() {
        let fx = Fixed::new(160);
        let a = ComplexScalar::new(1.5, -2.0);
        let b = ComplexScalar::new(-0.25, 3.0);
        let (wa, wb) = (fx.from_c64(a), fx.from_c64(b));
        assert!((fx.to_c64(&fx.mul(&wa, &wb)) - a * b).norm() < 1e-15);
        assert!((fx.to_c64(&fx.div(&wa, &wb).unwrap()) - a / b).norm() < 1e-15);
        assert!((fx.to_c64(&fx.div_int(&wa, 3)) - a / 3.0).norm() < 1e-15);
        assert!(fx.div(&wa, &fx.zero()).is_none());
    }

    #[test]
    fn cancellation_survives() {
        let fx = Fixed::new(200);
        let big = fx.from_c64(ComplexScalar::new(1e30, 0.0));
        let tiny = fx.from_c64(ComplexScalar::new(1e-20, 0.0));
        let neg = fx.from_c64(ComplexScalar::new(-1e30, 0.0));
        let s = big.add(&tiny).add(&neg);
        assert_eq!(fx.to_c64(&s).re, 1e-20);
    }
}
