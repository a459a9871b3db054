//! τ_l^(±) = ½ (kr)^{±iγ} ∫_{−1}^{1} e^{ikrx} (1∓x)^{±iγ} P_l(x) dx by
//! composite Gauss–Legendre.
//!
//! With t = 1 ∓ x the integrand is e^{ikrx} t^{±iγ} P_l(x) on [0, 2]. The
//! interval is cut into dyadic panels [2^{−j−1}·2, 2^{−j}·2] down to
//! t ≈ 1e-15, each subdivided so that no piece spans more than a quarter
//! period of e^{ikrx} or of P_l; the remaining sliver is integrated with
//! the integrand frozen at t = 0. All pieces are halved until two
//! successive results agree to the absolute tolerance.

use super::wave::legendre_p;
use super::TauRequest;
use crate::error::finite;
use crate::{ComplexScalar, Error, EvalResult, Method, Result};
use std::f64::consts::PI;
use std::sync::OnceLock;

const MAX_ORDER: usize = 64;
static NODES: [OnceLock<Vec<(f64, f64)>>; MAX_ORDER + 1] =
    [const { OnceLock::new() }; MAX_ORDER + 1];

/// Gauss–Legendre nodes and weights on [−1, 1], computed once per order.
pub(crate) fn gauss_legendre(n: usize) -> &'static [(f64, f64)] {
    assert!((1..=MAX_ORDER).contains(&n));
    NODES[n].get_or_init(|| {
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                let pn = if n == 1 { x } else { p1 };
                let pm = if n == 1 { 1.0 } else { p0 };
                dp = n as f64 * (x * pn - pm) / (x * x - 1.0);
                let dx = pn / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
        }
        out
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    /// Largest number of pieces in one pass.
    pub max_panels: usize,
    /// Oscillation budget: largest kr accepted.
    pub max_kr: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            abs_tol: 1e-12,
            max_panels: 400_000,
            max_kr: 1e3,
        }
    }
}

/// Quadrature with the default configuration.
pub fn tau_quadrature(req: &TauRequest) -> Result<EvalResult> {
    quad_tau(req, &QuadConfig::default())
}

pub fn tau_quadrature_with(req: &TauRequest, cfg: &QuadConfig) -> Result<EvalResult> {
    quad_tau(req, cfg)
}

const SMALLEST_T: f64 = 1e-15;

pub(crate) fn quad_tau(req: &TauRequest, cfg: &QuadConfig) -> Result<EvalResult> {
    const OP: &str = "tau_quadrature";
    let &TauRequest {
        sign, gamma, l, kr, ..
    } = req;
    if kr > cfg.max_kr {
        return Err(Error::domain(
            OP,
            format!("kr = {kr} exceeds the oscillation budget {}", cfg.max_kr),
        ));
    }
    let s = sign.s();
    let ig = ComplexScalar::new(0.0, s * gamma);
    let order = (16 + l / 2).min(MAX_ORDER);
    let integrand = |t: f64| {
        let x = s * (1.0 - t);
        let ph = kr * x + s * gamma * t.ln();
        ComplexScalar::new(ph.cos(), ph.sin()) * legendre_p(l, x)
    };
    // dyadic breakpoints 2, 1, 1/2, ... down to SMALLEST_T
    let mut bounds = vec![2.0];
    while *bounds.last().unwrap() > SMALLEST_T {
        let b = bounds.last().unwrap() / 2.0;
        bounds.push(b);
    }
    let t_min = *bounds.last().unwrap();
    let h_max = (PI / (2.0 * kr)).min(4.0 / (l as f64 + 1.0)).min(0.5);
    let base: Vec<usize> = bounds
        .windows(2)
        .map(|w| ((w[0] - w[1]) / h_max).ceil().max(1.0) as usize)
        .collect();
    // ∫_0^{t_min} t^{iγ} h(t) dt with h frozen at t = 0
    let h0 = ComplexScalar::new((s * kr).cos(), (s * kr).sin()) * legendre_p(l, s);
    let tail = h0 * (ig.scale(t_min.ln()) + t_min.ln()).exp() / (1.0 + ig);

    let pass = |split: usize| -> ComplexScalar {
        let mut acc = crate::special::sum::ComplexSum::default();
        let nodes = gauss_legendre(order);
        for (w, &m) in bounds.windows(2).zip(&base) {
            let (hi, lo) = (w[0], w[1]);
            let pieces = m * split;
            let h = (hi - lo) / pieces as f64;
            for p in 0..pieces {
                let a = lo + p as f64 * h;
                let mid = a + h / 2.0;
                let mut part = ComplexScalar::new(0.0, 0.0);
                for &(x, wt) in nodes {
                    part += integrand(mid + h / 2.0 * x) * wt;
                }
                acc.add(part * (h / 2.0));
            }
        }
        acc.value() + tail
    };

    let total_base: usize = base.iter().sum();
    let mut split = 1;
    let mut prev = pass(split);
    loop {
        split *= 2;
        if total_base * split > cfg.max_panels {
            let cur = pass(split / 2);
            return Err(Error::Quadrature {
                op: OP,
                tol: cfg.abs_tol,
                panels: total_base * split / 2,
                change: (cur - prev).norm(),
            });
        }
        let cur = pass(split);
        let change = (cur - prev).norm();
        if change <= cfg.abs_tol {
            let pre = ComplexScalar::new(0.0, s * gamma * kr.ln()).exp() * 0.5;
            let value = finite(OP, pre * cur)?;
            return Ok(EvalResult::new(
                value,
                Method::Quadrature,
                total_base * split * order,
                0.5 * change,
            ));
        }
        prev = cur;
    }
}
