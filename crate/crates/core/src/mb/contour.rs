//! Contour selection by iterated constraint projection.
//!
//! The theorems only say the vertical lines must have "sufficiently large
//! real parts" keeping the integrand's poles on their left. Concretely that
//! is a system of half-space constraints, one per numerator Gamma factor:
//!
//! ```text
//! Re(constant) + sum_i coeffs[i] * sigma[i] >= margin.
//! ```
//!
//! Starting from a large uniform point we first project cyclically onto the
//! violated half-spaces until feasible, then tighten each coordinate down
//! to its lowest feasible value. Tight contours keep the Gamma magnitudes
//! small and the pole distance (hence the trapezoid's analyticity strip)
//! equal to the requested margin.

use super::{ContourSpec, MBIntegrand};
use crate::error::{Error, Result};

/// Extra half-space constraint `sum_i coeffs[i] * sigma[i] >= min`, used for
/// convergence tubes of numerically supplied Mellin transforms.
#[derive(Debug, Clone)]
pub struct LinearConstraint {
    pub coeffs: Vec<f64>,
    pub min: f64,
}

const START_SIGMA: f64 = 10.0;
const FEASIBILITY_SWEEPS: usize = 500;
const TIGHTEN_SWEEPS: usize = 200;
const TOL: f64 = 1e-9;

/// Find a vertical-line contour with slack at least `margin` in every
/// numerator pole constraint. Deterministic for a fixed integrand.
pub fn find_contour(integrand: &MBIntegrand, margin: f64) -> Result<ContourSpec> {
    find_contour_with(
        integrand,
        margin,
        &[],
        crate::settings::mb_step(),
        crate::settings::mb_height_or(40.0),
    )
}

pub fn find_contour_with(
    integrand: &MBIntegrand,
    margin: f64,
    extra: &[LinearConstraint],
    step: f64,
    height: f64,
) -> Result<ContourSpec> {
    if !(margin > 0.0) {
        return Err(Error::Domain("contour margin must be positive".into()));
    }
    let n = integrand.nvars;
    let mut constraints: Vec<(Vec<f64>, f64)> = integrand
        .pole_constraints()
        .into_iter()
        .map(|(coeffs, lower)| (coeffs, lower + margin))
        .collect();
    for e in extra {
        if e.coeffs.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: e.coeffs.len(),
            });
        }
        constraints.push((e.coeffs.clone(), e.min));
    }

    let mut sigma = vec![START_SIGMA; n];

    // Phase 1: cyclic projection onto violated half-spaces.
    let mut feasible = false;
    for _ in 0..FEASIBILITY_SWEEPS {
        let mut worst: f64 = 0.0;
        for (coeffs, rhs) in &constraints {
            let val: f64 = coeffs.iter().zip(&sigma).map(|(c, s)| c * s).sum();
            let violation = rhs - val;
            if violation > 0.0 {
                worst = worst.max(violation);
                let norm2: f64 = coeffs.iter().map(|c| c * c).sum();
                if norm2 > 0.0 {
                    let scale = violation / norm2;
                    for (s, c) in sigma.iter_mut().zip(coeffs) {
                        *s += scale * c;
                    }
                }
            }
        }
        if worst <= TOL {
            feasible = true;
            break;
        }
    }
    if !feasible {
        return Err(Error::InfeasibleContour(format!(
            "projection did not converge in {FEASIBILITY_SWEEPS} sweeps; the pole \
             constraints are likely contradictory"
        )));
    }

    // Phase 2: coordinate-wise tightening toward the lowest feasible point.
    for _ in 0..TIGHTEN_SWEEPS {
        let mut moved = false;
        for v in 0..n {
            let mut lower = f64::NEG_INFINITY;
            let mut upper = f64::INFINITY;
            for (coeffs, rhs) in &constraints {
                let cv = coeffs[v];
                if cv == 0.0 {
                    continue;
                }
                let rest: f64 = coeffs
                    .iter()
                    .zip(&sigma)
                    .enumerate()
                    .filter(|(u, _)| *u != v)
                    .map(|(_, (c, s))| c * s)
                    .sum();
                let bound = (rhs - rest) / cv;
                if cv > 0.0 {
                    lower = lower.max(bound);
                } else {
                    upper = upper.min(bound);
                }
            }
            if lower.is_finite() && lower <= upper + TOL && (sigma[v] - lower).abs() > 1e-12 {
                // Lowering a coordinate only relaxes the negative-coefficient
                // constraints, so feasibility is preserved.
                if lower < sigma[v] {
                    sigma[v] = lower;
                    moved = true;
                }
            }
        }
        if !moved {
            break;
        }
    }

    let spec = ContourSpec::new(sigma, height, step);
    spec.check(integrand)?;
    Ok(spec)
}

/// Log-magnitude of the integrand at the grid center `(sigma, t = 0)`.
fn center_log_magnitude(integrand: &MBIntegrand, sigma: &[f64]) -> f64 {
    use crate::special::{log_gamma_unchecked, near_gamma_pole};
    let point: Vec<crate::scalar::Complex> =
        sigma.iter().map(|&s| crate::scalar::c(s, 0.0)).collect();
    let mut log = 0.0f64;
    for g in &integrand.gammas {
        let mut arg = g.constant;
        for (cf, p) in g.coeffs_f64().iter().zip(&point) {
            arg += cf * p;
        }
        let underlying = match g.kind {
            super::GammaKind::R => arg * 0.5,
            _ => arg,
        };
        if near_gamma_pole(underlying, 1e-8) {
            return f64::INFINITY;
        }
        let mut lg = log_gamma_unchecked(underlying).re;
        match g.kind {
            super::GammaKind::R => lg -= underlying.re * std::f64::consts::PI.ln(),
            super::GammaKind::C => {
                lg = log_gamma_unchecked(arg).re + std::f64::consts::LN_2
                    - arg.re * (2.0 * std::f64::consts::PI).ln()
            }
            super::GammaKind::Plain => lg = log_gamma_unchecked(arg).re,
        }
        match g.position {
            super::FactorPosition::Numerator => log += lg,
            super::FactorPosition::Denominator => log -= lg,
        }
    }
    for p in &integrand.powers {
        let mut expo = p.exponent_constant;
        for (cf, pt) in p.coeffs_f64().iter().zip(&point) {
            expo += cf * pt;
        }
        log += expo.re * p.base.ln();
    }
    log
}

/// Shift a feasible contour rightward, coordinate by coordinate, to reduce
/// the integrand magnitude at the grid center while keeping every pole
/// constraint at slack `min_slack` or better.
///
/// Tight contours make the trapezoid grid cheap but can place the contour
/// far from the integrand's saddle, so the nodes are orders of magnitude
/// larger than the integral and cancellation eats the accuracy. Greedily
/// descending the center magnitude moves the lines near the saddle, where
/// node size and integral agree. Deterministic; the truncation height is
/// raised along with the largest real part.
pub fn condition_contour(
    integrand: &MBIntegrand,
    spec: &ContourSpec,
    min_slack: f64,
) -> ContourSpec {
    let constraints: Vec<(Vec<f64>, f64)> = integrand
        .pole_constraints()
        .into_iter()
        .map(|(coeffs, lower)| (coeffs, lower + min_slack))
        .collect();
    let feasible = |sigma: &[f64]| -> bool {
        constraints.iter().all(|(coeffs, rhs)| {
            coeffs.iter().zip(sigma).map(|(c, s)| c * s).sum::<f64>() >= *rhs - 1e-12
        })
    };
    let mut sigma = spec.sigma.clone();
    let mut best = center_log_magnitude(integrand, &sigma);
    for _ in 0..6 {
        let mut moved = false;
        for v in 0..sigma.len() {
            for delta in [16.0, 8.0, 4.0, 2.0, 1.0, 0.5] {
                let mut cand = sigma.clone();
                cand[v] += delta;
                if cand[v] - spec.sigma[v] > 40.0 || !feasible(&cand) {
                    continue;
                }
                let m = center_log_magnitude(integrand, &cand);
                if m < best - 1e-9 {
                    sigma = cand;
                    best = m;
                    moved = true;
                }
            }
        }
        if !moved {
            break;
        }
    }
    let max_sigma = sigma.iter().cloned().fold(0.0f64, f64::max);
    ContourSpec::new(sigma, spec.height.max(1.6 * max_sigma + 12.0), spec.step)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mb::{ints, GammaFactor, MBIntegrand};
    use crate::scalar::{c, LogComplex};

    fn one_var(gammas: Vec<GammaFactor>) -> MBIntegrand {
        MBIntegrand::new(1, LogComplex::ONE, gammas, vec![]).unwrap()
    }

    #[test]
    fn single_constraint_tightens_to_margin() {
        let integrand = one_var(vec![GammaFactor::plain_num(c(0.0, 0.0), ints(&[1]))]);
        let spec = find_contour(&integrand, 0.5).unwrap();
        assert!(
            (spec.sigma[0] - 0.5).abs() < 1e-9,
            "sigma = {:?}",
            spec.sigma
        );
    }

    #[test]
    fn conflicting_constraints_rejected() {
        // Gamma(s) and Gamma(-s-1) demand s > 0 and s < -1.
        let integrand = one_var(vec![
            GammaFactor::plain_num(c(0.0, 0.0), ints(&[1])),
            GammaFactor::plain_num(c(-1.0, 0.0), ints(&[-1])),
        ]);
        assert!(matches!(
            find_contour(&integrand, 0.5),
            Err(Error::InfeasibleContour(_))
        ));
    }

    #[test]
    fn two_sided_constraints_meet_in_middle() {
        // Gamma(s + 1/2) and Gamma(-s + 1/2): feasible band (-1/2, 1/2) at
        // margin 0; at margin 0.5 the only point is 0.
        let integrand = one_var(vec![
            GammaFactor::plain_num(c(0.5, 0.0), ints(&[1])),
            GammaFactor::plain_num(c(0.5, 0.0), ints(&[-1])),
        ]);
        let spec = find_contour(&integrand, 0.5).unwrap();
        assert!(spec.sigma[0].abs() < 1e-9);
    }

    #[test]
    fn minimal_type_integrand_contour_recheck() {
        // kappa = 0, n = 3, nu = (0.1, 0.2i, -0.1): the returned lines must
        // satisfy every numerator constraint on direct re-check.
        use crate::arch::{MinimalTypeParamsC, TorusPointC, WeightIndexC};
        let params = MinimalTypeParamsC::new(
            vec![c(0.1, 0.0), c(0.0, 0.2), c(-0.1, 0.0)],
            0,
        )
        .unwrap();
        let ell = WeightIndexC::new(vec![0, 0, 0]).unwrap();
        let a = TorusPointC::new(vec![1.0, 1.0]).unwrap();
        let integrand = crate::arch::glnc_integrand(&params, &ell, &a).unwrap();
        let spec = find_contour(&integrand, 0.5).unwrap();
        for (coeffs, lower) in integrand.pole_constraints() {
            let val: f64 = coeffs.iter().zip(&spec.sigma).map(|(c, s)| c * s).sum();
            assert!(val >= lower + 0.5 - 1e-8, "constraint violated at {val}");
        }
    }

    #[test]
    fn returned_contour_passes_recheck() {
        let integrand = MBIntegrand::new(
            2,
            LogComplex::ONE,
            vec![
                GammaFactor::plain_num(c(0.1, 0.0), ints(&[1, 0])),
                GammaFactor::plain_num(c(-0.3, 0.2), ints(&[1, -1])),
                GammaFactor::plain_num(c(0.0, 0.0), ints(&[0, 1])),
            ],
            vec![],
        )
        .unwrap();
        let spec = find_contour(&integrand, 0.4).unwrap();
        spec.check(&integrand).unwrap();
        for (coeffs, lower) in integrand.pole_constraints() {
            let val: f64 = coeffs.iter().zip(&spec.sigma).map(|(c, s)| c * s).sum();
            assert!(val >= lower + 0.4 - 1e-8);
        }
    }
}
