use std::f64::consts::PI;

use super::is_nonpositive_integer;
use crate::error::finite;
use crate::{ComplexScalar, Error, Result};

// Lanczos approximation, g = 7, nine coefficients.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos(z: ComplexScalar) -> ComplexScalar {
    let z = z - 1.0;
    let mut x = ComplexScalar::new(LANCZOS[0], 0.0);
    for (i, &p) in LANCZOS.iter().enumerate().skip(1) {
        x += p / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    ((z + 0.5) * t.ln() - t).exp() * x * (2.0 * PI).sqrt()
}

/// Principal Γ(z), reflecting through Γ(z)Γ(1−z) = π/sin(πz) for Re z < ½.
pub fn gamma_complex(z: ComplexScalar) -> Result<ComplexScalar> {
    if is_nonpositive_integer(z) {
        return Err(Error::Pole {
            op: "gamma_complex",
            at: z,
        });
    }
    let g = if z.re < 0.5 {
        PI / ((PI * z).sin() * lanczos(1.0 - z))
    } else {
        lanczos(z)
    };
    finite("gamma_complex", g)
}

/// 1/Γ(z), zero at the poles of Γ.
pub fn rgamma(z: ComplexScalar) -> ComplexScalar {
    if is_nonpositive_integer(z) {
        return ComplexScalar::new(0.0, 0.0);
    }
    if z.re < 0.5 {
        (PI * z).sin() * lanczos(1.0 - z) / PI
    } else {
        1.0 / lanczos(z)
    }
}

/// ψ(z) = Γ'(z)/Γ(z).
pub fn digamma(z: ComplexScalar) -> Result<ComplexScalar> {
    if is_nonpositive_integer(z) {
        return Err(Error::Pole {
            op: "digamma",
            at: z,
        });
    }
    if z.re < 0.5 {
        let reflected = digamma(1.0 - z)?;
        let pz = PI * z;
        return finite("digamma", reflected - PI * pz.cos() / pz.sin());
    }
    let mut z = z;
    let mut acc = ComplexScalar::new(0.0, 0.0);
    while z.norm() < 10.0 {
        acc -= 1.0 / z;
        z += 1.0;
    }
    let w = 1.0 / (z * z);
    // −Σ B_{2k} / (2k z^{2k}), Horner in 1/z²
    let series = w
        * (1.0 / 12.0
            - w * (1.0 / 120.0
                - w * (1.0 / 252.0
                    - w * (1.0 / 240.0 - w * (1.0 / 132.0 - w * (691.0 / 32760.0 - w / 12.0))))));
    finite("digamma", acc + z.ln() - 0.5 / z - series)
}
