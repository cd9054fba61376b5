//! Numerical verification of the Fourier-transform and Mellin lemmas that
//! drive the reductions, each against independent quadrature, plus the
//! Mellin self-consistency identity for rank-2 spherical functions.

use super::cpow;
use crate::error::{Error, Result};
use crate::mb::{eval_mb_with, find_contour, EvalOptions, GammaFactor, MBIntegrand};
use crate::quad::{trapezoid_nd, Grid1};
use crate::scalar::{c, Complex, LogComplex};
use crate::special::{gamma_c, hermite, log_gamma};
use crate::verify::rel_diff;
use std::f64::consts::PI;

/// Maximum relative error seen per lemma.
#[derive(Debug, Clone, Copy)]
pub struct LemmaReport {
    /// 3D unipotent Fourier transform against the Hermite closed form.
    pub ft1: f64,
    /// Hermite Mellin shift identity (part 1).
    pub mellin1_part1: f64,
    /// Two-variable Gaussian Mellin evaluation (part 2).
    pub mellin1_part2: f64,
    /// Complex Gaussian Fourier transform with `dz = 2 dx dy`.
    pub ft2: f64,
    /// Rank-2 unipotent integral against the product formula.
    pub ft3: f64,
}

impl LemmaReport {
    pub fn max(&self) -> f64 {
        self.ft1
            .max(self.mellin1_part1)
            .max(self.mellin1_part2)
            .max(self.ft2)
            .max(self.ft3)
    }
}

fn cpowi(z: Complex, n: u32) -> Complex {
    let mut acc = c(1.0, 0.0);
    for _ in 0..n {
        acc *= z;
    }
    acc
}

fn i_power_neg(m: u32) -> Complex {
    // i^(-m)
    match m % 4 {
        0 => c(1.0, 0.0),
        1 => c(0.0, -1.0),
        2 => c(-1.0, 0.0),
        _ => c(0.0, 1.0),
    }
}

fn ft1_case(n: u32, m: u32, a2: f64, t1: f64, t2: f64) -> f64 {
    let c12 = PI / (t1 * t1 * t2 * t2) * a2 * a2;
    let c13 = PI / (t1 * t1 * t2 * t2);
    let c23 = PI / (t2 * t2);
    let width = |cc: f64| (1.0 / cc).sqrt();
    let grid = |cc: f64| {
        let w = width(cc);
        Grid1::symmetric(5.0 * w + 2.0, (w / 8.0).min(0.06))
    };
    let lhs = trapezoid_nd(&[grid(c12), grid(c13), grid(c23)], |u| {
        let (u12, u13, u23) = (u[0], u[1], u[2]);
        let y_term = cpowi(c(a2 / t2, a2 * u12 / (t1 * t2)), n);
        let z_term = cpowi(c(u23 / t2, u13 / (t1 * t2)), m);
        let gauss = (-(c12 * u12 * u12 + c13 * u13 * u13 + c23 * u23 * u23)).exp();
        let osc = c(0.0, -2.0 * PI * (u12 + u23)).exp();
        y_term * z_term * gauss * osc
    });
    let arg = PI.sqrt() * (a2 / t2 + t1 * t2 / a2);
    let rhs = (4.0 * PI).powf(-(n as f64) / 2.0) * i_power_neg(m) * t1 * t1 * t2.powi(m as i32 + 3)
        / a2
        * hermite(n, arg)
        * (-PI * (t1 * t1 * t2 * t2 / (a2 * a2) + t2 * t2)).exp();
    rel_diff(lhs, rhs)
}

fn mult_integral(lo: f64, hi: f64, step: f64, f: impl Fn(f64) -> Complex) -> Complex {
    crate::quad::trapezoid(Grid1::span(lo, hi, step), |u| f(u.exp()))
}

fn mellin1_part1_case(n: u32, a: f64, b: f64, s: Complex) -> Result<f64> {
    let lo = -42.0 / s.re.min(s.re - n as f64);
    let lhs = mult_integral(lo, 3.5, 0.03, |t| {
        let y = a * t + b;
        cpow(t, s) * hermite(n, y) * (-y * y).exp()
    });
    let gamma_ratio = (log_gamma(s)?.as_log() - log_gamma(s - n as f64)?.as_log()).exp();
    let rhs = a.powi(-(n as i32))
        * gamma_ratio
        * mult_integral(lo, 3.5, 0.03, |t| {
            let y = a * t + b;
            cpow(t, s - n as f64) * (-y * y).exp()
        });
    Ok(rel_diff(lhs, rhs))
}

fn mellin1_part2_case(s1: Complex, s2: Complex) -> Result<f64> {
    let lo = -46.0 / s1.re.min(s2.re);
    let g1 = Grid1::span(lo, 2.0, 0.04);
    let lhs = trapezoid_nd(&[g1, g1], |u| {
        let (t1, t2) = (u[0].exp(), u[1].exp());
        let q = t1 + t2;
        cpow(t1, s1) * cpow(t2, s2) * (-PI * q * q).exp()
    });
    let rhs = cpow(2.0, -s1 - s2)
        * cpow(PI, (c(1.0, 0.0) - s1 - s2) / 2.0)
        * (log_gamma(s1)?.as_log() + log_gamma(s2)?.as_log()
            - log_gamma((s1 + s2 + 1.0) / 2.0)?.as_log())
        .exp();
    Ok(rel_diff(lhs, rhs))
}

fn ft2_case(n: u32, a: f64) -> f64 {
    let g = Grid1::symmetric(4.5, 0.02);
    let lhs = 2.0
        * trapezoid_nd(&[g, g], |p| {
            let (x, y) = (p[0], p[1]);
            cpowi(c(x, -y), n)
                * (-2.0 * PI * (x * x + y * y)).exp()
                * c(0.0, -4.0 * PI * a * x).exp()
        });
    let rhs = cpowi(c(0.0, -1.0), n) * a.powi(n as i32) * (-2.0 * PI * a * a).exp();
    rel_diff(lhs, rhs)
}

fn ft3_case(kappa: u32, ell1: u32, t1: f64, alpha1: f64, alpha2: f64) -> f64 {
    let ell2 = kappa - ell1;
    let cc = alpha2 * alpha2 / (t1 * t1);
    let w = 1.0 / (2.0 * PI * cc).sqrt();
    let g = Grid1::symmetric(5.0 * w + 1.2, (w / 8.0).min(0.035));
    let integral = 2.0
        * trapezoid_nd(&[g, g], |p| {
            let (x, y) = (p[0], p[1]);
            cpowi(c(x, -y), ell1)
                * (-2.0 * PI * cc * (x * x + y * y)).exp()
                * c(0.0, -4.0 * PI * x).exp()
        });
    let lhs = (alpha2 / t1).powi(ell1 as i32) * (alpha1 / t1).powi(ell2 as i32) * integral;
    let rhs = cpowi(c(0.0, -1.0), ell1)
        * t1.powi(2 * ell1 as i32 - kappa as i32 + 2)
        * alpha1.powi(kappa as i32 - ell1 as i32)
        * alpha2.powi(-2 - ell1 as i32)
        * (-2.0 * PI * t1 * t1 / (alpha2 * alpha2)).exp();
    rel_diff(lhs, rhs)
}

/// Verify the reduction lemmas by independent quadrature over their stated
/// parameter ranges; returns the maximum relative error per lemma.
pub fn lemma_checks() -> Result<LemmaReport> {
    let mut ft1 = 0.0f64;
    for n in 0..=3 {
        for m in 0..=3 {
            for &(a2, t1, t2) in &[(1.0, 1.0, 1.0), (0.8, 1.3, 0.6)] {
                ft1 = ft1.max(ft1_case(n, m, a2, t1, t2));
            }
        }
    }

    let mut m1 = 0.0f64;
    for n in 0..=3u32 {
        for &(a, b) in &[(1.0, 0.5), (-0.7, 0.3)] {
            let s = c(n as f64 + 1.4, 0.3);
            m1 = m1.max(mellin1_part1_case(n, a, b, s)?);
        }
    }

    let mut m2 = 0.0f64;
    for (s1, s2) in [
        (c(1.3, 0.0), c(2.1, 0.4)),
        (c(2.0, 0.0), c(2.0, 0.0)),
        (c(0.9, 0.2), c(1.7, 0.0)),
    ] {
        m2 = m2.max(mellin1_part2_case(s1, s2)?);
    }

    // The oscillatory integral cancels down by exp(2 pi a^2), so |a| much
    // beyond 1.2 is outside honest double-precision quadrature.
    let mut ft2 = 0.0f64;
    for n in 0..=4 {
        for &a in &[0.5, -0.8, 1.2] {
            ft2 = ft2.max(ft2_case(n, a));
        }
    }

    let mut ft3 = 0.0f64;
    for kappa in 0..=3 {
        for ell1 in 0..=kappa {
            for &(t1, a1, a2) in &[(1.0, 1.0, 1.0), (0.7, 1.2, 0.9)] {
                ft3 = ft3.max(ft3_case(kappa, ell1, t1, a1, a2));
            }
        }
    }

    Ok(LemmaReport {
        ft1,
        mellin1_part1: m1,
        mellin1_part2: m2,
        ft2,
        ft3,
    })
}

/// Rank-2 instance of the Mellin self-consistency identity: for any
/// auxiliary `sigma`,
///
/// ```text
/// (M f_mu)(w) = 4^{-1} G_C(w/2 + |mu| + sigma) / (G_C(mu_1+sigma) G_C(mu_2+sigma))
///               * int (M f_mu)(z) G_C((w-z)/2) G_C(-z/2 + sigma) dz/(2 pi i).
/// ```
///
/// Returns `(lhs, rhs)`.
pub fn ishii_stade_consistency(
    mu: &[Complex; 2],
    w: Complex,
    sigma: Complex,
) -> Result<(Complex, Complex)> {
    let lo = (-2.0 * mu[0].re).max(-2.0 * mu[1].re);
    let hi = w.re.min(2.0 * sigma.re);
    if hi - lo < 0.02 {
        return Err(Error::InfeasibleContour(format!(
            "no z-line separates the pole families: need {lo} < Re z < {hi}"
        )));
    }
    let margin = (0.25 * (hi - lo)).min(0.5);

    let params = super::SphericalParamsC::new(mu.to_vec())?;
    let lhs = super::mellin_f_spherical(&params, &[w])?;

    let half = crate::mb::halves(&[1]);
    let mhalf = crate::mb::halves(&[-1]);
    let integrand = MBIntegrand::new(
        1,
        LogComplex::new(-(16f64.ln()), 0.0),
        vec![
            GammaFactor::c_num(mu[0], half.clone()),
            GammaFactor::c_num(mu[1], half),
            GammaFactor::c_num(w / 2.0, mhalf.clone()),
            GammaFactor::c_num(sigma, mhalf),
        ],
        vec![],
    )?;
    let mut contour = find_contour(&integrand, margin)?;
    contour.height = 20.0;
    let (z_int, _) = eval_mb_with(&integrand, &contour, &EvalOptions::with_rtol(1e-10))?;

    let front = gamma_c(w / 2.0 + mu[0] + mu[1] + sigma)?
        .div(gamma_c(mu[0] + sigma)?)
        .div(gamma_c(mu[1] + sigma)?)
        .to_complex();
    Ok((lhs, 0.25 * front * z_int))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ft2_base_case_fixes_measure() {
        // N = 0, a = 0.5: the Gaussian integral equals e^{-pi/2} only with
        // dz = 2 dx dy.
        assert!(ft2_case(0, 0.5) < 1e-10);
    }

    #[test]
    fn ft1_gaussian_branch() {
        assert!(ft1_case(0, 0, 1.0, 1.0, 1.0) < 1e-8);
    }

    #[test]
    fn ft1_hermite_branch() {
        assert!(ft1_case(2, 1, 1.0, 1.0, 1.0) < 1e-8);
    }

    #[test]
    fn ishii_stade_rank2_holds() {
        let mu = [c(0.3, 0.0), c(-0.3, 0.0)];
        let (lhs, rhs) = ishii_stade_consistency(&mu, c(2.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!(rel_diff(lhs, rhs) < 1e-7, "lhs = {lhs}, rhs = {rhs}");
    }

    #[test]
    fn ishii_stade_sigma_independent() {
        let mu = [c(0.2, 0.1), c(-0.1, -0.05)];
        let w = c(1.8, 0.2);
        let (_, r1) = ishii_stade_consistency(&mu, w, c(0.9, 0.0)).unwrap();
        let (_, r2) = ishii_stade_consistency(&mu, w, c(1.4, 0.3)).unwrap();
        assert!(rel_diff(r1, r2) < 1e-7, "r1 = {r1}, r2 = {r2}");
    }

    #[test]
    fn ishii_stade_symmetric_in_mu() {
        let (l1, r1) =
            ishii_stade_consistency(&[c(0.25, 0.0), c(-0.2, 0.0)], c(2.0, 0.0), c(1.0, 0.0))
                .unwrap();
        let (l2, r2) =
            ishii_stade_consistency(&[c(-0.2, 0.0), c(0.25, 0.0)], c(2.0, 0.0), c(1.0, 0.0))
                .unwrap();
        assert!(rel_diff(l1, l2) < 1e-12);
        assert!(rel_diff(r1, r2) < 1e-9);
    }

    #[test]
    fn infeasible_separation_rejected() {
        // w too far left: no contour separates the pole families.
        let mu = [c(0.5, 0.0), c(0.5, 0.0)];
        assert!(matches!(
            ishii_stade_consistency(&mu, c(-1.5, 0.0), c(1.0, 0.0)),
            Err(Error::InfeasibleContour(_))
        ));
    }
}
