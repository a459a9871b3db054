//! Partial-wave components τ_l^(±)(γ, kr) of the Coulomb-distorted plane
//! wave e^{ik·r}(kr ∓ k·r)^{±iγ}, the wave itself, its Legendre
//! reconstruction and the leading large-kr angular functional.

mod quadrature;
mod tau;
mod wave;

pub use quadrature::{tau_quadrature, tau_quadrature_with, QuadConfig};
pub use tau::{
    tau_1f1_sum, tau_asym, tau_asym_leading, tau_hyp, tau_inc_gamma, tau_kappa, tau_with,
    PriorPath, Routing, TauConfig,
};
pub use wave::{
    asy3d_functional, cdpw_direct, cdpw_pw_sum, cdpw_pw_sum_with, legendre_p, AngularPoint,
    LegendreTestFunction, MAX_PW_L, MAX_TEST_L,
};

use crate::{ComplexScalar, Error, Result};

/// Post (upper signs) or prior (lower signs) form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Post,
    Prior,
}

impl Sign {
    /// +1 for post, −1 for prior.
    pub fn s(self) -> f64 {
        match self {
            Sign::Post => 1.0,
            Sign::Prior => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Sign::Post => "post",
            Sign::Prior => "prior",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TauMethod {
    Hyp2F2,
    IncGamma,
    Sum1F1,
    KappaSplit,
    Asymptotic,
    Quadrature,
    Auto,
}

impl TauMethod {
    pub const EXACT: [TauMethod; 5] = [
        TauMethod::Hyp2F2,
        TauMethod::IncGamma,
        TauMethod::Sum1F1,
        TauMethod::KappaSplit,
        TauMethod::Quadrature,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TauMethod::Hyp2F2 => "hyp2f2",
            TauMethod::IncGamma => "incgamma",
            TauMethod::Sum1F1 => "sum1f1",
            TauMethod::KappaSplit => "kappa",
            TauMethod::Asymptotic => "asymptotic",
            TauMethod::Quadrature => "quadrature",
            TauMethod::Auto => "auto",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s.to_ascii_lowercase().as_str() {
            "hyp2f2" | "hyp" => TauMethod::Hyp2F2,
            "incgamma" | "inc_gamma" => TauMethod::IncGamma,
            "sum1f1" | "1f1" => TauMethod::Sum1F1,
            "kappa" | "kappasplit" | "kappa_split" => TauMethod::KappaSplit,
            "asymptotic" | "asym" => TauMethod::Asymptotic,
            "quadrature" | "quad" => TauMethod::Quadrature,
            "auto" => TauMethod::Auto,
            _ => return None,
        })
    }
}

/// One partial-wave component to evaluate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauRequest {
    pub sign: Sign,
    pub gamma: f64,
    pub l: usize,
    pub kr: f64,
    pub method: TauMethod,
}

impl TauRequest {
    pub fn new(sign: Sign, gamma: f64, l: usize, kr: f64, method: TauMethod) -> Result<Self> {
        if !gamma.is_finite() {
            return Err(Error::domain(
                "TauRequest",
                format!("gamma must be finite, got {gamma}"),
            ));
        }
        if !(kr > 0.0 && kr.is_finite()) {
            return Err(Error::domain(
                "TauRequest",
                format!("kr must satisfy kr > 0, got {kr}"),
            ));
        }
        Ok(TauRequest {
            sign,
            gamma,
            l,
            kr,
            method,
        })
    }

    pub(crate) fn with_sign(mut self, sign: Sign) -> Self {
        self.sign = sign;
        self
    }
}

/// i^l j_l(kr): every τ_l at γ = 0.
pub(crate) fn chargeless_tau(l: usize, kr: f64) -> ComplexScalar {
    crate::special::i_pow(l) * crate::special::spherical_bessel_j(l, ComplexScalar::new(kr, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn request_validation() {
        assert!(TauRequest::new(Sign::Post, 1.0, 2, 0.0, TauMethod::Auto)
            .unwrap_err()
            .is_domain());
        assert!(TauRequest::new(Sign::Post, f64::NAN, 2, 1.0, TauMethod::Auto).is_err());
        assert!(TauRequest::new(Sign::Post, 1.0, 2, f64::INFINITY, TauMethod::Auto).is_err());
        assert!(TauRequest::new(Sign::Prior, -1.0, 0, 1e-3, TauMethod::Hyp2F2).is_ok());
    }

    #[test]
    fn method_names_round_trip() {
        for m in TauMethod::EXACT
            .iter()
            .chain(&[TauMethod::Asymptotic, TauMethod::Auto])
        {
            assert_eq!(TauMethod::parse(m.name()), Some(*m));
        }
        assert_eq!(TauMethod::parse("bogus"), None);
    }
}
