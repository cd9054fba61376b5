//! Mellin-Barnes integrands and their numerical evaluation on vertical-line
//! contours.
//!
//! An [`MBIntegrand`] is a product of Gamma-type factors with affine
//! arguments in the integration variables, times power factors
//! `base^(affine)`, times a constant prefactor:
//!
//! ```text
//! prefactor * prod_j Gamma_kind(c_j + <k_j, s>)^(+/-1) * prod_m b_m^(e_m + <f_m, s>)
//! ```
//!
//! evaluated as an iterated integral `ds/(2 pi i)` per variable along the
//! vertical lines `Re s_v = sigma_v`. Every formula in this crate -- the
//! spherical recursion, the minimal-K-type formula, the Miyazaki double
//! integral, Barnes' first lemma -- is an instance of this shape.

mod contour;
mod eval;

pub use contour::{condition_contour, find_contour, find_contour_with, LinearConstraint};
pub use eval::{barnes_check, eval_mb, eval_mb_weighted, eval_mb_with, EvalOptions, WeightFn};

pub use crate::quad::tree_sum;

use crate::error::{Error, Result};
use crate::scalar::{Complex, LogComplex};
use serde::{Deserialize, Serialize};

/// Small exact rational used for the affine coefficients (half-integers in
/// practice).
pub type Rational = num_rational::Rational64;

/// Which normalization of the Gamma function a factor carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GammaKind {
    /// `Gamma(arg)`
    Plain,
    /// `Gamma_R(arg) = pi^(-arg/2) Gamma(arg/2)`
    R,
    /// `Gamma_C(arg) = 2 (2 pi)^(-arg) Gamma(arg)`
    C,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorPosition {
    Numerator,
    Denominator,
}

/// One Gamma factor `Gamma_kind(constant + sum_i coeffs[i] * s_i)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaFactor {
    pub kind: GammaKind,
    #[serde(with = "complex_serde")]
    pub constant: Complex,
    #[serde(with = "ratio_vec_serde")]
    pub coeffs: Vec<Rational>,
    pub position: FactorPosition,
}

impl GammaFactor {
    pub fn new(
        kind: GammaKind,
        constant: Complex,
        coeffs: Vec<Rational>,
        position: FactorPosition,
    ) -> Self {
        GammaFactor {
            kind,
            constant,
            coeffs,
            position,
        }
    }

    /// Numerator `Gamma_C` factor, the most common case.
    pub fn c_num(constant: Complex, coeffs: Vec<Rational>) -> Self {
        Self::new(GammaKind::C, constant, coeffs, FactorPosition::Numerator)
    }

    pub fn r_num(constant: Complex, coeffs: Vec<Rational>) -> Self {
        Self::new(GammaKind::R, constant, coeffs, FactorPosition::Numerator)
    }

    pub fn r_den(constant: Complex, coeffs: Vec<Rational>) -> Self {
        Self::new(GammaKind::R, constant, coeffs, FactorPosition::Denominator)
    }

    pub fn plain_num(constant: Complex, coeffs: Vec<Rational>) -> Self {
        Self::new(
            GammaKind::Plain,
            constant,
            coeffs,
            FactorPosition::Numerator,
        )
    }

    /// Coefficients as `f64`, cached by callers that evaluate densely.
    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|r| *r.numer() as f64 / *r.denom() as f64)
            .collect()
    }

    /// Indices of the variables this factor actually depends on.
    pub fn deps(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, r)| **r != Rational::default())
            .map(|(i, _)| i)
    }
}

/// A power factor `base^(exponent_constant + sum_i exponent_coeffs[i] s_i)`
/// with positive real base.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerFactor {
    pub base: f64,
    #[serde(with = "complex_serde")]
    pub exponent_constant: Complex,
    #[serde(with = "ratio_vec_serde")]
    pub exponent_coeffs: Vec<Rational>,
}

impl PowerFactor {
    pub fn new(base: f64, exponent_constant: Complex, exponent_coeffs: Vec<Rational>) -> Self {
        PowerFactor {
            base,
            exponent_constant,
            exponent_coeffs,
        }
    }

    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.exponent_coeffs
            .iter()
            .map(|r| *r.numer() as f64 / *r.denom() as f64)
            .collect()
    }

    pub fn deps(&self) -> impl Iterator<Item = usize> + '_ {
        self.exponent_coeffs
            .iter()
            .enumerate()
            .filter(|(_, r)| **r != Rational::default())
            .map(|(i, _)| i)
    }
}

/// An iterated Mellin-Barnes integrand.
///
/// Construction enforces the decay invariant: in every variable, the count
/// of numerator Gamma factors that depend on it must exceed the denominator
/// count by at least one, so the integrand decays exponentially along each
/// vertical line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MBIntegrand {
    pub nvars: usize,
    pub prefactor: LogComplex,
    pub gammas: Vec<GammaFactor>,
    pub powers: Vec<PowerFactor>,
}

impl MBIntegrand {
    pub fn new(
        nvars: usize,
        prefactor: LogComplex,
        gammas: Vec<GammaFactor>,
        powers: Vec<PowerFactor>,
    ) -> Result<Self> {
        if nvars == 0 {
            return Err(Error::Domain(
                "integrand needs at least one variable".into(),
            ));
        }
        for g in &gammas {
            if g.coeffs.len() != nvars {
                return Err(Error::LengthMismatch {
                    expected: nvars,
                    got: g.coeffs.len(),
                });
            }
        }
        for p in &powers {
            if p.exponent_coeffs.len() != nvars {
                return Err(Error::LengthMismatch {
                    expected: nvars,
                    got: p.exponent_coeffs.len(),
                });
            }
            if !(p.base > 0.0) || !p.base.is_finite() {
                return Err(Error::Domain(format!(
                    "power factor base must be positive, got {}",
                    p.base
                )));
            }
        }
        for v in 0..nvars {
            let mut net = 0i64;
            for g in &gammas {
                if g.coeffs[v] != Rational::default() {
                    net += match g.position {
                        FactorPosition::Numerator => 1,
                        FactorPosition::Denominator => -1,
                    };
                }
            }
            if net < 1 {
                return Err(Error::Domain(format!(
                    "variable {v} has net gamma count {net} < 1; the iterated integral would not decay"
                )));
            }
        }
        Ok(MBIntegrand {
            nvars,
            prefactor,
            gammas,
            powers,
        })
    }

    /// Numerator pole constraints as linear forms: each returned pair
    /// `(coeffs, lower)` demands `sum_i coeffs[i] * sigma[i] >= lower + margin`.
    pub(crate) fn pole_constraints(&self) -> Vec<(Vec<f64>, f64)> {
        self.gammas
            .iter()
            .filter(|g| g.position == FactorPosition::Numerator)
            .map(|g| (g.coeffs_f64(), -g.constant.re))
            .collect()
    }
}

/// Vertical-line contour: real parts, truncation height and step of the
/// uniform grid `sigma_v + i k h`, `|k h| <= height`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    pub sigma: Vec<f64>,
    pub height: f64,
    pub step: f64,
}

impl ContourSpec {
    pub fn new(sigma: Vec<f64>, height: f64, step: f64) -> Self {
        ContourSpec {
            sigma,
            height,
            step,
        }
    }

    /// Check the contour invariant: the real part of every numerator Gamma
    /// argument stays strictly positive.
    pub fn check(&self, integrand: &MBIntegrand) -> Result<()> {
        if self.sigma.len() != integrand.nvars {
            return Err(Error::LengthMismatch {
                expected: integrand.nvars,
                got: self.sigma.len(),
            });
        }
        if !(self.height > 0.0 && self.step > 0.0) {
            return Err(Error::Domain(
                "contour height and step must be positive".into(),
            ));
        }
        for (coeffs, lower) in integrand.pole_constraints() {
            let val: f64 = coeffs.iter().zip(&self.sigma).map(|(c, s)| c * s).sum();
            if val <= lower {
                return Err(Error::Domain(format!(
                    "contour violates a numerator pole constraint: {val} <= {lower}"
                )));
            }
        }
        Ok(())
    }
}

/// Serialize complex scalars as `{"re": .., "im": ..}` objects.
pub mod complex_serde {
    use crate::scalar::Complex;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Parts {
        re: f64,
        im: f64,
    }

    pub fn serialize<S: Serializer>(z: &Complex, ser: S) -> std::result::Result<S::Ok, S::Error> {
        Parts { re: z.re, im: z.im }.serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> std::result::Result<Complex, D::Error> {
        let p = Parts::deserialize(de)?;
        Ok(Complex::new(p.re, p.im))
    }
}

mod ratio_vec_serde {
    use super::Rational;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        v: &[Rational],
        ser: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_seq(v.iter().map(|r| {
            if *r.denom() == 1 {
                format!("{}", r.numer())
            } else {
                format!("{}/{}", r.numer(), r.denom())
            }
        }))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> std::result::Result<Vec<Rational>, D::Error> {
        let raw: Vec<String> = Vec::deserialize(de)?;
        raw.iter()
            .map(|s| {
                parse_rational(s).ok_or_else(|| D::Error::custom(format!("bad rational `{s}`")))
            })
            .collect()
    }

    pub(crate) fn parse_rational(s: &str) -> Option<Rational> {
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n: i64 = n.trim().parse().ok()?;
                let d: i64 = d.trim().parse().ok()?;
                if d == 0 {
                    return None;
                }
                Some(Rational::new(n, d))
            }
            None => Some(Rational::from_integer(s.parse().ok()?)),
        }
    }
}

/// Parse a rational from `"p/q"` or `"p"` form (shared with the CLI).
pub fn parse_rational(s: &str) -> Option<Rational> {
    ratio_vec_serde::parse_rational(s)
}

/// Shorthand for building coefficient vectors of half-integers: each entry
/// is `numer/2`.
pub fn halves(numerators: &[i64]) -> Vec<Rational> {
    numerators.iter().map(|&n| Rational::new(n, 2)).collect()
}

/// Coefficient vector of integers.
pub fn ints(values: &[i64]) -> Vec<Rational> {
    values.iter().map(|&n| Rational::from_integer(n)).collect()
}
