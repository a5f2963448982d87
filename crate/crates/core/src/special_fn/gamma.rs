//! Lanczos log-gamma for complex arguments.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

const G: f64 = 7.0;
const COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;
const LN_PI: f64 = 1.144_729_885_849_400_2;

fn is_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

fn lanczos(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut x = Complex64::new(COEF[0], 0.0);
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + G + 0.5;
    HALF_LN_2PI + (z + 0.5) * t.ln() - t + x.ln()
}

/// `ln sin(πz)` modulo 2πi, without overflow for large `|Im z|`.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    if z.im > 1.0 {
        let e = (2.0 * PI * i * z).exp();
        -i * PI * z + ((e - 1.0) / (2.0 * i)).ln()
    } else if z.im < -1.0 {
        let e = (-2.0 * PI * i * z).exp();
        i * PI * z + ((1.0 - e) / (2.0 * i)).ln()
    } else {
        (PI * z).sin().ln()
    }
}

/// Principal-branch `ln Γ(z)`; exact up to an additive multiple of 2πi for
/// `Re z < 1/2`, where the reflection formula is used.
pub fn ln_gamma_complex(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::NonFinite("ln_gamma argument"));
    }
    if is_pole(z) {
        return Err(Error::Pole { function: "gamma", at: format!("{}", z.re) });
    }
    if z.re < 0.5 {
        Ok(LN_PI - ln_sin_pi(z) - lanczos(1.0 - z))
    } else {
        Ok(lanczos(z))
    }
}

pub fn gamma(z: Complex64) -> Result<Complex64> {
    ln_gamma_complex(z).map(|l| l.exp())
}

/// `1/Γ(z)`, which is entire: zero at the poles of Γ.
pub fn rgamma(z: Complex64) -> Complex64 {
    if is_pole(z) {
        Complex64::new(0.0, 0.0)
    } else {
        (-ln_gamma_complex(z).expect("non-pole argument")).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn unit_and_half() {
        assert!(ln_gamma_complex(c(1.0, 0.0)).unwrap().norm() < 1e-15);
        let half = ln_gamma_complex(c(0.5, 0.0)).unwrap();
        assert!((half.re - 0.572_364_942_924_700_1).abs() < 1e-14);
        assert!(half.im.abs() < 1e-15);
    }

    #[test]
    fn factorials() {
        let mut f = 1.0f64;
        for n in 1..30 {
            f *= n as f64;
            let v = gamma(c(n as f64 + 1.0, 0.0)).unwrap().re;
            assert!((v / f - 1.0).abs() < 1e-13, "n = {n}");
        }
    }

    #[test]
    fn poles_are_errors() {
        for n in [0.0, -1.0, -7.0] {
            assert!(matches!(ln_gamma_complex(c(n, 0.0)), Err(Error::Pole { .. })));
            assert_eq!(rgamma(c(n, 0.0)), c(0.0, 0.0));
        }
    }

    #[test]
    fn negative_half_integer() {
        let v = gamma(c(-0.5, 0.0)).unwrap();
        assert!((v.re + 2.0 * PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn modulus_on_imaginary_axis() {
        // |Γ(iy)|² = π / (y sinh πy)
        for y in [0.3, 1.658_312_4, 5.0, 20.0] {
            let g = gamma(c(0.0, y)).unwrap();
            let exact = PI / (y * (PI * y).sinh());
            assert!((g.norm_sqr() / exact - 1.0).abs() < 1e-12, "y = {y}");
        }
    }

    #[test]
    fn recurrence_far_in_the_plane() {
        for z in [c(3.2, 40.0), c(-12.3, 7.7), c(0.25, -33.0), c(45.0, 1.0)] {
            let lhs = ln_gamma_complex(z + 1.0).unwrap();
            let rhs = ln_gamma_complex(z).unwrap() + z.ln();
            let d = lhs - rhs;
            let k = (d.im / (2.0 * PI)).round();
            assert!(d.re.abs() < 1e-12 * lhs.norm().max(1.0), "{z}");
            assert!((d.im - 2.0 * PI * k).abs() < 1e-11 * lhs.norm().max(1.0), "{z}");
        }
    }
}
