use super::forms::{double_suffices, form_c_scaled};
use super::F22Args;
use crate::special::sum::sum_ascending;
use crate::special::wide::{big_factorial, kappa_weight, Fixed};
use crate::special::{
    binomial, factorial, i_pow, pochhammer, sign_pow, spherical_bessel_j, terminating_1f1,
    terminating_3f1, wide_bits, wide_series,
};
use crate::{ComplexScalar, Error, Method, Result};

const EPS: f64 = f64::EPSILON;

/// |LHS − RHS| / (|LHS| + |RHS| + 1) for
/// Σ_k (−1)^k C(l,k) (l+1)_k (1−a)_k ₁F₁(−k; a−k; z) z^{−k}/k! = (−1)^l ₃F₁(1−a, −l, l+1; 1; −1/z).
pub fn prop1_residual(a: ComplexScalar, l: usize, z: ComplexScalar) -> Result<f64> {
    const OP: &str = "prop1_residual";
    if z == ComplexScalar::new(0.0, 0.0) {
        return Err(Error::domain(OP, "z must be nonzero"));
    }
    if a.im == 0.0 && a.re == a.re.round() && a.re <= l as f64 {
        return Err(Error::domain(
            OP,
            format!("a = {} is an integer not exceeding l = {l}", a.re),
        ));
    }
    let zinv = 1.0 / z;
    let mut terms = Vec::with_capacity(l + 1);
    let mut zk = ComplexScalar::new(1.0, 0.0);
    for k in 0..=l {
        let coef = sign_pow(k)
            * binomial(l, k)
            * pochhammer(ComplexScalar::new(l as f64 + 1.0, 0.0), k)
            * pochhammer(1.0 - a, k)
            / factorial(k);
        terms.push(coef * terminating_1f1(k, a - k as f64, z)? * zk);
        zk *= zinv;
    }
    let abs_sum: f64 = terms.iter().map(|t| t.norm()).sum();
    let mut lhs = sum_ascending(terms).value();
    if !double_suffices(abs_sum / lhs.norm(), 16.0 * EPS * abs_sum, lhs) {
        lhs = prop1_lhs_wide(a, l, z)?;
    }
    let rhs = sign_pow(l) * terminating_3f1(1.0 - a, l, -zinv);
    Ok((lhs - rhs).norm() / (lhs.norm() + rhs.norm() + 1.0))
}

/// The left-hand side of [`prop1_residual`] in fixed point.
fn prop1_lhs_wide(a: ComplexScalar, l: usize, z: ComplexScalar) -> Result<ComplexScalar> {
    const OP: &str = "prop1_residual";
    let pole = || Error::Pole { op: OP, at: a };
    let fx = Fixed::new(wide_bits(z, l));
    let wa = fx.from_c64(a);
    let wz = fx.from_c64(z);
    let one_minus_a = fx.one().sub(&wa);
    let zinv = fx
        .div(&fx.one(), &wz)
        .ok_or_else(|| Error::domain(OP, "z must be nonzero"))?;
    let mut zk = fx.one();
    let mut acc = fx.zero();
    for k in 0..=l {
        let kw = fx.int(k as i64);
        let (m, _) = wide_series(OP, &[kw.neg()], &[wa.sub(&kw)], &wz, &fx, l + 2)?;
        let c = fx.mul(
            &fx.big(&kappa_weight(l, k)),
            &fx.pochhammer(&one_minus_a, k),
        );
        let c = fx.div(&c, &fx.big(&big_factorial(k))).ok_or_else(pole)?;
        let t = fx.mul(&fx.mul(&c, &m), &zk);
        acc.add_assign(&if k % 2 == 0 { t } else { t.neg() });
        zk = fx.mul(&zk, &zinv);
    }
    Ok(fx.to_c64(&acc))
}

/// (numeric, analytic) for the a → 1 limit: numeric is (1−a)_l ₂F₂ from
/// form (c) at a = 1 + eps·e^{iπ/4}, analytic is i^l (l+1)! e^{z/2} j_l(iz/2).
pub fn chargeless_limit(
    l: usize,
    z: ComplexScalar,
    eps: f64,
) -> Result<(ComplexScalar, ComplexScalar)> {
    const OP: &str = "chargeless_limit";
    if !(eps > 0.0 && eps <= 1e-4) {
        return Err(Error::domain(OP, format!("eps = {eps} outside (0, 1e-4]")));
    }
    if z == ComplexScalar::new(0.0, 0.0) {
        return Err(Error::domain(OP, "z must be nonzero"));
    }
    let a = 1.0 + eps * ComplexScalar::new(1.0, 1.0) / 2f64.sqrt();
    let args = F22Args::unchecked(a, l, z);
    // (1−a)_l cancels against the 1/(1−a)_l of the form (c) prefactor
    let numeric = form_c_scaled(args, pochhammer(a, l + 1), Method::FormC)?.value;
    let iz2 = ComplexScalar::new(0.0, 0.5) * z;
    let analytic = i_pow(l) * factorial(l + 1) * (z / 2.0).exp() * spherical_bessel_j(l, iz2);
    Ok((numeric, analytic))
}
