use super::tau::{leading_parts, tau_with, TauConfig};
use super::{Sign, TauMethod, TauRequest};
use crate::error::finite;
use crate::special::sum::ComplexSum;
use crate::{ComplexScalar, Error, Result};
use std::f64::consts::PI;

/// Largest L_max accepted by [`cdpw_pw_sum`].
pub const MAX_PW_L: usize = 512;
/// Largest degree of a [`LegendreTestFunction`].
pub const MAX_TEST_L: usize = 64;

/// P_l(x) by the upward three-term recurrence.
pub fn legendre_p(l: usize, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    if l == 0 {
        return p0;
    }
    for k in 2..=l {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Direction of r relative to k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularPoint {
    cos_theta: f64,
}

impl AngularPoint {
    pub fn new(cos_theta: f64) -> Result<Self> {
        if cos_theta.is_nan() || cos_theta.abs() > 1.0 {
            return Err(Error::domain(
                "AngularPoint",
                format!("cos_theta = {cos_theta} outside [-1, 1]"),
            ));
        }
        Ok(AngularPoint { cos_theta })
    }

    pub fn cos_theta(self) -> f64 {
        self.cos_theta
    }
}

/// f(θ) = Σ_l c_l P_l(cos θ), degree at most [`MAX_TEST_L`].
#[derive(Debug, Clone, PartialEq)]
pub struct LegendreTestFunction {
    coeffs: Vec<ComplexScalar>,
}

impl LegendreTestFunction {
    pub fn new(coeffs: Vec<ComplexScalar>) -> Result<Self> {
        const OP: &str = "LegendreTestFunction";
        if coeffs.is_empty() {
            return Err(Error::domain(OP, "at least one coefficient is required"));
        }
        if coeffs.len() > MAX_TEST_L + 1 {
            return Err(Error::domain(
                OP,
                format!("degree {} exceeds {MAX_TEST_L}", coeffs.len() - 1),
            ));
        }
        if coeffs
            .iter()
            .any(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(Error::domain(OP, "non-finite coefficient"));
        }
        Ok(LegendreTestFunction { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| ComplexScalar::new(c, 0.0)).collect())
    }

    pub fn coeffs(&self) -> &[ComplexScalar] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// f(θ = 0) = Σ c_l.
    pub fn forward(&self) -> ComplexScalar {
        self.coeffs.iter().sum()
    }

    /// f(θ = π) = Σ (−1)^l c_l.
    pub fn backward(&self) -> ComplexScalar {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(l, c)| if l % 2 == 0 { *c } else { -c })
            .sum()
    }

    pub fn eval(&self, cos_theta: f64) -> ComplexScalar {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(l, c)| c * legendre_p(l, cos_theta))
            .sum()
    }
}

fn check_wave_args(op: &'static str, gamma: f64, kr: f64) -> Result<()> {
    if !gamma.is_finite() {
        return Err(Error::domain(
            op,
            format!("gamma must be finite, got {gamma}"),
        ));
    }
    if !(kr > 0.0 && kr.is_finite()) {
        return Err(Error::domain(
            op,
            format!("kr must satisfy kr > 0, got {kr}"),
        ));
    }
    Ok(())
}

/// e^{ikr cos θ} (kr(1 ∓ cos θ))^{±iγ}; the base is real and positive away
/// from the excluded direction (cos θ = ±1 for post/prior).
pub fn cdpw_direct(sign: Sign, gamma: f64, kr: f64, pt: AngularPoint) -> Result<ComplexScalar> {
    const OP: &str = "cdpw_direct";
    check_wave_args(OP, gamma, kr)?;
    let s = sign.s();
    let base = kr * (1.0 - s * pt.cos_theta);
    if base <= 0.0 {
        return Err(Error::domain(
            OP,
            format!(
                "excluded direction: cos_theta = {} makes kr(1 ∓ cos θ) vanish for the {} form",
                pt.cos_theta,
                sign.name()
            ),
        ));
    }
    let ph = kr * pt.cos_theta + s * gamma * base.ln();
    finite(OP, ComplexScalar::new(ph.cos(), ph.sin()))
}

/// Σ_{l=0}^{L_max} (2l+1) τ_l^(±) P_l(cos θ) with τ from the automatic router.
pub fn cdpw_pw_sum(
    sign: Sign,
    gamma: f64,
    kr: f64,
    pt: AngularPoint,
    l_max: usize,
) -> Result<ComplexScalar> {
    cdpw_pw_sum_with(sign, gamma, kr, pt, l_max, &TauConfig::default())
}

pub fn cdpw_pw_sum_with(
    sign: Sign,
    gamma: f64,
    kr: f64,
    pt: AngularPoint,
    l_max: usize,
    cfg: &TauConfig,
) -> Result<ComplexScalar> {
    const OP: &str = "cdpw_pw_sum";
    check_wave_args(OP, gamma, kr)?;
    if l_max > MAX_PW_L {
        return Err(Error::domain(
            OP,
            format!("L_max = {l_max} exceeds {MAX_PW_L}"),
        ));
    }
    let x = pt.cos_theta;
    let mut acc = ComplexSum::default();
    let (mut p0, mut p1) = (1.0, x);
    for l in 0..=l_max {
        let p = match l {
            0 => 1.0,
            1 => x,
            _ => {
                let p2 = ((2 * l - 1) as f64 * x * p1 - (l - 1) as f64 * p0) / l as f64;
                p0 = p1;
                p1 = p2;
                p2
            }
        };
        let t = tau_with(&TauRequest::new(sign, gamma, l, kr, TauMethod::Auto)?, cfg)?;
        acc.add(t.value * ((2 * l + 1) as f64 * p));
    }
    finite(OP, acc.value())
}

/// (exact, leading): the wave integrated against f over the unit sphere,
/// 4π Σ c_l τ_l, and the two-delta leading form
/// 4π/(2iskr) [e^{iskr} e^{γπ/2} Γ(1+isγ) f(θ_out) − e^{−iskr} (2kr)^{isγ} f(θ_in)]
/// with θ_out = 0, θ_in = π for the post form and the reverse for prior.
pub fn asy3d_functional(
    sign: Sign,
    gamma: f64,
    kr: f64,
    f: &LegendreTestFunction,
) -> Result<(ComplexScalar, ComplexScalar)> {
    const OP: &str = "asy3d_functional";
    check_wave_args(OP, gamma, kr)?;
    let cfg = TauConfig::default();
    let mut acc = ComplexSum::default();
    for (l, c) in f.coeffs().iter().enumerate() {
        let t = tau_with(&TauRequest::new(sign, gamma, l, kr, TauMethod::Auto)?, &cfg)?;
        acc.add(c * t.value);
    }
    let exact = 4.0 * PI * acc.value();
    let (out, inc, den) = leading_parts(sign, gamma, kr)?;
    let (f_out, f_in) = match sign {
        Sign::Post => (f.forward(), f.backward()),
        Sign::Prior => (f.backward(), f.forward()),
    };
    let leading = 4.0 * PI * ((out * f_out - inc * f_in) / den);
    Ok((finite(OP, exact)?, finite(OP, leading)?))
}
