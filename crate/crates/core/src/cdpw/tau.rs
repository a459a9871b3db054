//! Closed representations of τ_l^(±) and their large-kr expansion.
//!
//! Every representation is written for a sign s = ±1; the prior form is
//! either evaluated directly with s = −1 or obtained from the post form
//! through τ⁻_l = (−1)^l conj τ⁺_l.

use super::quadrature::{quad_tau, QuadConfig};
use super::{chargeless_tau, Sign, TauMethod, TauRequest};
use crate::error::finite;
use crate::f22::{
    dominant_series, double_suffices, f22_auto, inc_gamma_sum_wide, inner_wide, kappa_minus_eval,
    kappa_plus, sum_1f1_wide, F22Args, Thresholds, Truncation,
};
use crate::special::sum::ComplexSum;
use crate::special::{
    binomial, cpow, factorial, gamma_complex, kummer_m, lower_inc_gamma, pochhammer,
    pochhammer_ratio, sign_pow, terminating_3f1, SeriesControl,
};
use crate::{ComplexScalar, Error, EvalResult, Method, Result};
use std::f64::consts::PI;

const EPS: f64 = f64::EPSILON;

/// How prior-form requests are served.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PriorPath {
    /// (−1)^l conj of the post value.
    Symmetry,
    /// The s = −1 formulas evaluated as written.
    Direct,
}

/// Representation chosen by [`TauMethod::Auto`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Routing {
    /// KappaSplit above this kr.
    pub kappa_min_kr: f64,
    /// Sum1F1 for kr ≤ sum1f1_max_kr and l ≤ sum1f1_max_l.
    pub sum1f1_max_kr: f64,
    pub sum1f1_max_l: usize,
}

impl Default for Routing {
    fn default() -> Self {
        Routing {
            kappa_min_kr: 10.0,
            sum1f1_max_kr: 10.0,
            sum1f1_max_l: 4,
        }
    }
}

impl Routing {
    pub fn route(&self, l: usize, kr: f64) -> TauMethod {
        if kr > self.kappa_min_kr {
            TauMethod::KappaSplit
        } else if kr <= self.sum1f1_max_kr && l <= self.sum1f1_max_l {
            TauMethod::Sum1F1
        } else {
            TauMethod::Hyp2F2
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauConfig {
    pub prior_path: PriorPath,
    pub routing: Routing,
    pub f22: Thresholds,
    pub series: SeriesControl,
    /// Smallest kr accepted by the asymptotic method.
    pub asym_min_kr: f64,
    pub asym_max_terms: usize,
    pub quad: QuadConfig,
}

impl Default for TauConfig {
    fn default() -> Self {
        TauConfig {
            prior_path: PriorPath::Symmetry,
            routing: Routing::default(),
            f22: Thresholds::default(),
            series: SeriesControl::default(),
            asym_min_kr: 5.0,
            asym_max_terms: 2000,
            quad: QuadConfig::default(),
        }
    }
}

/// Evaluates `req` with its own method field.
pub fn tau_with(req: &TauRequest, cfg: &TauConfig) -> Result<EvalResult> {
    if req.method == TauMethod::Auto {
        let routed = with_method(req, cfg.routing.route(req.l, req.kr));
        return match tau_with(&routed, cfg) {
            // the f64 weights of the other sums overflow near l ≈ 90
            Err(Error::NonFinite { .. }) if routed.method != TauMethod::Hyp2F2 => {
                tau_with(&with_method(req, TauMethod::Hyp2F2), cfg)
            }
            r => r,
        };
    }
    let method = req.method;
    if req.sign == Sign::Prior && cfg.prior_path == PriorPath::Symmetry {
        let post = eval_signed(method, &req.with_sign(Sign::Post), cfg)?;
        let mut r = post;
        r.value = post.value.conj() * sign_pow(req.l);
        return Ok(r);
    }
    eval_signed(method, req, cfg)
}

fn eval_signed(method: TauMethod, req: &TauRequest, cfg: &TauConfig) -> Result<EvalResult> {
    match method {
        TauMethod::Hyp2F2 => hyp(req, cfg),
        TauMethod::IncGamma => inc_gamma(req),
        TauMethod::Sum1F1 => sum_1f1(req, cfg),
        TauMethod::KappaSplit => kappa(req),
        TauMethod::Asymptotic => asym(req, Truncation::Auto, cfg),
        TauMethod::Quadrature => quad_tau(req, &cfg.quad),
        TauMethod::Auto => unreachable!("resolved by the router"),
    }
}

fn with_method(req: &TauRequest, m: TauMethod) -> TauRequest {
    let mut r = *req;
    r.method = m;
    r
}

/// s^l (−isγ)_l/(1+isγ)_{l+1} (2kr)^{isγ} e^{iskr} ₂F₂(1+isγ, 1+isγ; l+2+isγ, 1+isγ−l; −2iskr).
pub fn tau_hyp(req: &TauRequest) -> Result<EvalResult> {
    tau_with(&with_method(req, TauMethod::Hyp2F2), &TauConfig::default())
}

/// s^l e^{iskr+γπ/2}/(2iskr) Σ_n (−1)^n C(l,n) (l+1)_n/n! γ(1+isγ+n, 2iskr) (2iskr)^{−n}.
pub fn tau_inc_gamma(req: &TauRequest) -> Result<EvalResult> {
    tau_with(
        &with_method(req, TauMethod::IncGamma),
        &TauConfig::default(),
    )
}

/// (−s)^l (2kr)^{isγ} e^{iskr} Σ_n (−1)^n C(l,n) (l+1)_n/(1+isγ)_{n+1} ₁F₁(1+isγ; 2+isγ+n; −2iskr).
pub fn tau_1f1_sum(req: &TauRequest) -> Result<EvalResult> {
    tau_with(&with_method(req, TauMethod::Sum1F1), &TauConfig::default())
}

/// s^l e^{γπ/2}/(2iskr) (e^{iskr} κ⁺_l(a, z) + e^{−iskr} κ⁻_l(a, z)), a = 1+isγ, z = −2iskr.
pub fn tau_kappa(req: &TauRequest) -> Result<EvalResult> {
    tau_with(
        &with_method(req, TauMethod::KappaSplit),
        &TauConfig::default(),
    )
}

/// Large-kr expansion truncated at `trunc`.
pub fn tau_asym(req: &TauRequest, trunc: Truncation, cfg: &TauConfig) -> Result<EvalResult> {
    let r = with_method(req, TauMethod::Asymptotic);
    if r.sign == Sign::Prior && cfg.prior_path == PriorPath::Symmetry {
        let mut v = asym(&r.with_sign(Sign::Post), trunc, cfg)?;
        v.value = v.value.conj() * sign_pow(r.l);
        return Ok(v);
    }
    asym(&r, trunc, cfg)
}

fn phase(x: f64) -> ComplexScalar {
    ComplexScalar::new(x.cos(), x.sin())
}

fn hyp(req: &TauRequest, cfg: &TauConfig) -> Result<EvalResult> {
    let &TauRequest {
        sign, gamma, l, kr, ..
    } = req;
    if gamma == 0.0 {
        let v = chargeless_tau(l, kr);
        return Ok(EvalResult::new(
            v,
            Method::Hyp2F2,
            l + 1,
            4.0 * EPS * v.norm(),
        ));
    }
    let s = sign.s();
    let a = ComplexScalar::new(1.0, s * gamma);
    let z = ComplexScalar::new(0.0, -2.0 * s * kr);
    let f = f22_auto(F22Args::new(a, l, z)?, &cfg.f22, &cfg.series)?;
    let pre = sign_pow_s(s, l) * pochhammer_ratio(ComplexScalar::new(0.0, -s * gamma), a, l)
        / (a + l as f64)
        * phase(s * gamma * (2.0 * kr).ln())
        * phase(s * kr);
    let value = finite("tau_hyp", pre * f.value)?;
    let err = pre.norm() * f.err_estimate + 8.0 * EPS * value.norm();
    Ok(EvalResult::new(value, Method::Hyp2F2, f.terms_used, err).with_cancellation(f.cancellation))
}

fn sign_pow_s(s: f64, l: usize) -> f64 {
    if s < 0.0 {
        sign_pow(l)
    } else {
        1.0
    }
}

fn inc_gamma(req: &TauRequest) -> Result<EvalResult> {
    let &TauRequest {
        sign, gamma, l, kr, ..
    } = req;
    let s = sign.s();
    let z2 = ComplexScalar::new(0.0, 2.0 * s * kr);
    let zinv = 1.0 / z2;
    let a = ComplexScalar::new(1.0, s * gamma);
    let mut acc = ComplexSum::default();
    let mut zn = ComplexScalar::new(1.0, 0.0);
    for n in 0..=l {
        let c =
            sign_pow(n) * binomial(l, n) * pochhammer(ComplexScalar::new(l as f64 + 1.0, 0.0), n)
                / factorial(n);
        acc.add(c * lower_inc_gamma(a + n as f64, z2)? * zn);
        zn *= zinv;
    }
    let pre = sign_pow_s(s, l) * phase(s * kr) * (gamma * PI / 2.0).exp() / z2;
    let value = finite("tau_inc_gamma", pre * acc.value())?;
    let err = pre.norm() * 16.0 * EPS * acc.abs_sum + 4.0 * EPS * value.norm();
    if double_suffices(acc.cancellation(), err, value) {
        return Ok(EvalResult::new(value, Method::IncGamma, l + 1, err)
            .with_cancellation(acc.cancellation()));
    }
    let sum = inc_gamma_sum_wide("tau_inc_gamma", a, l, z2)?;
    widened("tau_inc_gamma", Method::IncGamma, pre * cpow(z2, a), sum, l)
}

fn widened(
    op: &'static str,
    method: Method,
    pre: ComplexScalar,
    sum: ComplexScalar,
    l: usize,
) -> Result<EvalResult> {
    let value = finite(op, pre * sum)?;
    let err = 8.0 * EPS * value.norm();
    Ok(EvalResult::new(value, method, 2 * (l + 1), err).with_cancellation(8.0))
}

fn sum_1f1(req: &TauRequest, cfg: &TauConfig) -> Result<EvalResult> {
    let &TauRequest {
        sign, gamma, l, kr, ..
    } = req;
    let s = sign.s();
    let a = ComplexScalar::new(1.0, s * gamma);
    let z = ComplexScalar::new(0.0, -2.0 * s * kr);
    let mut acc = ComplexSum::default();
    let mut err = 0.0;
    let mut terms = 0;
    for n in 0..=l {
        let c =
            sign_pow(n) * binomial(l, n) * pochhammer(ComplexScalar::new(l as f64 + 1.0, 0.0), n)
                / pochhammer(a, n + 1);
        let m = kummer_m(a, a + 1.0 + n as f64, z, &cfg.series)?;
        acc.add(c * m.value);
        err += c.norm() * m.err_estimate;
        terms += m.terms_used;
    }
    let pre = sign_pow_s(s, l) * sign_pow(l) * phase(s * gamma * (2.0 * kr).ln()) * phase(s * kr);
    let value = finite("tau_1f1_sum", pre * acc.value())?;
    let err = err + 4.0 * EPS * acc.abs_sum + 4.0 * EPS * value.norm();
    if double_suffices(acc.cancellation(), err, value) {
        return Ok(EvalResult::new(value, Method::Sum1F1, terms, err)
            .with_cancellation(acc.cancellation()));
    }
    let sum = sum_1f1_wide(a, l, z)?;
    widened("tau_1f1_sum", Method::Sum1F1, pre, sum, l)
}

fn kappa(req: &TauRequest) -> Result<EvalResult> {
    let &TauRequest {
        sign, gamma, l, kr, ..
    } = req;
    let s = sign.s();
    let a = ComplexScalar::new(1.0, s * gamma);
    let z = ComplexScalar::new(0.0, -2.0 * s * kr);
    let out = phase(s * kr) * kappa_plus(a, l, z)?;
    let (km, km_err, terms) = kappa_minus_eval(a, l, z)?;
    let inc = phase(-s * kr) * km;
    let pre = sign_pow_s(s, l) * (gamma * PI / 2.0).exp() / ComplexScalar::new(0.0, 2.0 * s * kr);
    let sum = out + inc;
    let value = finite("tau_kappa", pre * sum)?;
    let err =
        pre.norm() * (km_err + 16.0 * EPS * (out.norm() + inc.norm())) + 4.0 * EPS * value.norm();
    let cancel = if sum.norm() > 0.0 {
        out.norm().max(inc.norm()) / sum.norm()
    } else {
        f64::INFINITY
    };
    if double_suffices(cancel, err, value) {
        return Ok(
            EvalResult::new(value, Method::KappaSplit, terms + l + 1, err)
                .with_cancellation(cancel),
        );
    }
    let w = inner_wide(a, l, z)?;
    let scale = pre * phase(s * kr) * cpow(-z, a);
    let value = finite("tau_kappa", scale * w.scaled)?;
    let err = scale.norm() * w.err + 4.0 * EPS * value.norm();
    Ok(EvalResult::new(value, Method::KappaSplit, w.terms, err)
        .with_cancellation(err / (EPS * value.norm())))
}

/// e^{iskr} e^{γπ/2} Γ(1+isγ), e^{−iskr} (2kr)^{isγ} and 2iskr: the pieces of
/// the outgoing and incoming leading terms.
pub(crate) fn leading_parts(
    sign: Sign,
    gamma: f64,
    kr: f64,
) -> Result<(ComplexScalar, ComplexScalar, ComplexScalar)> {
    let s = sign.s();
    let g = gamma_complex(ComplexScalar::new(1.0, s * gamma))?;
    let out = phase(s * kr) * (gamma * PI / 2.0).exp() * g;
    let inc = phase(-s * kr) * phase(s * gamma * (2.0 * kr).ln());
    Ok((out, inc, ComplexScalar::new(0.0, 2.0 * s * kr)))
}

/// Leading large-kr behaviour: the outgoing term with ₃F₁ → 1 and the
/// incoming series cut after d_0.
pub fn tau_asym_leading(sign: Sign, gamma: f64, l: usize, kr: f64) -> Result<ComplexScalar> {
    let _ = TauRequest::new(sign, gamma, l, kr, TauMethod::Asymptotic)?;
    let (out, inc, den) = leading_parts(sign, gamma, kr)?;
    Ok(sign_pow_s(sign.s(), l) * ((out - sign_pow(l) * inc) / den))
}

fn asym(req: &TauRequest, trunc: Truncation, cfg: &TauConfig) -> Result<EvalResult> {
    const OP: &str = "tau_asym";
    let &TauRequest {
        sign, gamma, l, kr, ..
    } = req;
    if kr < cfg.asym_min_kr {
        return Err(Error::domain(
            OP,
            format!("kr = {kr} below the asymptotic minimum {}", cfg.asym_min_kr),
        ));
    }
    let s = sign.s();
    let a = ComplexScalar::new(1.0, s * gamma);
    let z = ComplexScalar::new(0.0, -2.0 * s * kr);
    let den = ComplexScalar::new(0.0, 2.0 * s * kr);
    let (out, inc, _) = leading_parts(sign, gamma, kr)?;
    let first = out * terminating_3f1(a, l, 1.0 / den) / den;
    let ser = dominant_series(OP, a, l, z, trunc, cfg.asym_max_terms)?;
    let second = inc * sign_pow(l) * ser.sum / den;
    let value = finite(OP, sign_pow_s(s, l) * (first - second))?;
    let err = (ser.first_omitted + 4.0 * EPS * ser.abs_sum) / (2.0 * kr)
        + 16.0 * EPS * (first.norm() + second.norm());
    Ok(EvalResult::new(
        value,
        Method::Asymptotic,
        ser.last + 1,
        err,
    ))
}
