use super::{cpow, is_nonpositive_integer, kummer_m, SeriesControl};
use crate::error::finite;
use crate::{ComplexScalar, Error, Result};

/// Lower incomplete gamma γ(a, z) = z^a/a · ₁F₁(a; a+1; −z), principal z^a.
pub fn lower_inc_gamma(a: ComplexScalar, z: ComplexScalar) -> Result<ComplexScalar> {
    const OP: &str = "lower_inc_gamma";
    if is_nonpositive_integer(a) {
        return Err(Error::Pole { op: OP, at: a });
    }
    if z == ComplexScalar::new(0.0, 0.0) {
        if a.re > 0.0 {
            return Ok(z);
        }
        return Err(Error::domain(OP, "branch point at z = 0 with Re a <= 0"));
    }
    let m = kummer_m(a, a + 1.0, -z, &SeriesControl::default()).map_err(|e| match e {
        Error::NoConvergence { max_terms, .. } => Error::NoConvergence { op: OP, max_terms },
        other => other,
    })?;
    finite(OP, cpow(z, a) / a * m.value)
}
