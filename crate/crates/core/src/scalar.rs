//! Scalar types shared across the crate: double-precision complex numbers and
//! an overflow-safe log-scale representation for Gamma-factor products.

use serde::{Deserialize, Serialize};

/// Complex scalar used everywhere; all formulas are evaluated in `f64`.
pub type Complex = num_complex::Complex64;

/// Shorthand for `Complex::new`.
#[inline]
pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

/// A nonzero complex number stored as `exp(log_modulus + i*phase)`.
///
/// Products of Gamma factors overflow `f64` long before the final ratio does,
/// so every Gamma-type value is carried in this form and exponentiated once.
/// The phase is kept reduced to `(-pi, pi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogComplex {
    pub log_modulus: f64,
    pub phase: f64,
}

impl LogComplex {
    /// The multiplicative unit, `exp(0)`.
    pub const ONE: LogComplex = LogComplex {
        log_modulus: 0.0,
        phase: 0.0,
    };

    pub fn new(log_modulus: f64, phase: f64) -> Self {
        LogComplex {
            log_modulus,
            phase: reduce_phase(phase),
        }
    }

    /// Log-scale form of a nonzero complex number.
    pub fn from_complex(z: Complex) -> Self {
        LogComplex::new(z.norm().ln(), z.arg())
    }

    /// Log-scale form of a positive real.
    pub fn from_positive(x: f64) -> Self {
        debug_assert!(x > 0.0);
        LogComplex {
            log_modulus: x.ln(),
            phase: 0.0,
        }
    }

    pub fn to_complex(self) -> Complex {
        let m = self.log_modulus.exp();
        c(m * self.phase.cos(), m * self.phase.sin())
    }

    /// As an unreduced complex logarithm `log_modulus + i*phase`.
    pub fn as_log(self) -> Complex {
        c(self.log_modulus, self.phase)
    }

    pub fn mul(self, other: LogComplex) -> LogComplex {
        LogComplex::new(
            self.log_modulus + other.log_modulus,
            self.phase + other.phase,
        )
    }

    pub fn div(self, other: LogComplex) -> LogComplex {
        LogComplex::new(
            self.log_modulus - other.log_modulus,
            self.phase - other.phase,
        )
    }

    pub fn conj(self) -> LogComplex {
        LogComplex::new(self.log_modulus, -self.phase)
    }
}

/// Reduce a phase in radians to the interval `(-pi, pi]`.
pub fn reduce_phase(phi: f64) -> f64 {
    use std::f64::consts::PI;
    if phi > -PI && phi <= PI {
        return phi;
    }
    // Map to [0, 2pi) first, then shift. The boundary -pi maps to +pi.
    let r = (phi + PI).rem_euclid(2.0 * PI);
    let out = r - PI;
    if out == -PI {
        PI
    } else {
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn phase_reduction_bounds() {
        for k in -7..=7 {
            let phi = 0.3 + 2.0 * PI * k as f64;
            let r = reduce_phase(phi);
            assert!(r > -PI && r <= PI);
            assert!((r - 0.3).abs() < 1e-12);
        }
        assert_eq!(reduce_phase(PI), PI);
        assert_eq!(reduce_phase(-PI), PI);
    }

    #[test]
    fn product_adds_fields() {
        let a = LogComplex::from_complex(c(1.5, -0.7));
        let b = LogComplex::from_complex(c(-0.2, 2.0));
        let p = a.mul(b).to_complex();
        let direct = c(1.5, -0.7) * c(-0.2, 2.0);
        assert!((p - direct).norm() < 1e-12 * direct.norm());
    }

    #[test]
    fn round_trip() {
        let z = c(-3.25, 0.5);
        let lz = LogComplex::from_complex(z);
        assert!((lz.to_complex() - z).norm() < 1e-13 * z.norm());
    }
}
