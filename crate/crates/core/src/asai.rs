//! Asai local L-factors for minimal-K-type principal series of `GL(n, C)`
//! and numerical verification of the closed-form zeta identity.
//!
//! The zeta integral reduces over the torus to
//!
//! ```text
//! Z(s) = 2^(-2 + (n s + kappa + 2|nu|)/2) * G_C((n s + kappa)/2 + |nu|)
//!        * (M f_{[nu,kappa],(0,...,0,kappa)})(s, 2s, ..., (n-1)s),
//! ```
//!
//! where the Mellin transform on the right is computed numerically from the
//! Mellin-Barnes representation of `f`. The closed form on the other side is
//!
//! ```text
//! Z(s) = C_n * G_R(s + 2 nu_1 + kappa) / G_R(s + 2 nu_1 + eps) * L(s, As)
//! ```
//!
//! with `eps = kappa mod 2` and the L-factor a product of `n` real and
//! `n(n-1)/2` complex Gamma factors. The constant is `C_2 = 1` and
//! `C_3 = 2^(3*1) * 2^(-4) = 1/2`: the rank-3 formula carries the closed
//! rank-2 Mellin factor `2^(-4) G_C G_C`, and the `2^(-4)` propagates into
//! the identity's constant. Both cases are pinned by the numerical
//! cross-check in the tests.

use crate::arch::{glnc_integrand, MinimalTypeParamsC, TorusPointC, WeightIndexC};
use crate::error::{Error, Result};
use crate::mb::{find_contour, GammaKind, MBIntegrand, Rational};
use crate::quad::{refine_until, tree_sum, Grid1};
use crate::scalar::{c, Complex};
use crate::special::{gamma_c, gamma_r, log_gamma_unchecked};
use serde::Serialize;
use std::f64::consts::PI;

const LN_2: f64 = std::f64::consts::LN_2;
const LN_2PI: f64 = 1.837877066409345483560659472811;

/// Input of the zeta identity: rank, spectral parameter, angular weight
/// `(kappa, 0, ..., 0)`, and the complex argument `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct AsaiInput {
    pub n: usize,
    pub nu: Vec<Complex>,
    pub kappa: u32,
    pub s: Complex,
}

impl AsaiInput {
    pub fn new(n: usize, nu: Vec<Complex>, kappa: u32, s: Complex) -> Result<Self> {
        if nu.len() != n || n == 0 {
            return Err(Error::LengthMismatch {
                expected: n,
                got: nu.len(),
            });
        }
        Ok(AsaiInput { n, nu, kappa, s })
    }

    /// `eps in {0, 1}` with `kappa = eps (mod 2)`.
    pub fn epsilon(&self) -> u32 {
        self.kappa % 2
    }

    pub fn nu_sum(&self) -> Complex {
        self.nu.iter().sum()
    }
}

/// Argument affine in `s`: `constant + slope * s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AffineArg {
    #[serde(with = "crate::mb::complex_serde")]
    pub constant: Complex,
    pub slope: f64,
}

impl AffineArg {
    pub fn at(&self, s: Complex) -> Complex {
        self.constant + self.slope * s
    }
}

/// Symbolic product of Gamma factors with affine arguments, with an
/// optional power prefactor `2^(a + b s) * pi^(c + d s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LFactor {
    pub gamma_terms: Vec<(GammaKind, AffineArg)>,
    pub power_prefactor: (AffineArg, AffineArg),
}

impl LFactor {
    /// Evaluate at `s`; errors at Gamma poles.
    pub fn eval(&self, s: Complex) -> Result<Complex> {
        let mut log = c(0.0, 0.0);
        for (kind, arg) in &self.gamma_terms {
            let z = arg.at(s);
            let lg = match kind {
                GammaKind::R => gamma_r(z)?,
                GammaKind::C => gamma_c(z)?,
                GammaKind::Plain => crate::special::log_gamma(z)?,
            };
            log += lg.as_log();
        }
        let (two, pi) = &self.power_prefactor;
        log += two.at(s) * LN_2 + pi.at(s) * PI.ln();
        Ok(log.exp())
    }

    pub fn count_r(&self) -> usize {
        self.gamma_terms
            .iter()
            .filter(|(k, _)| *k == GammaKind::R)
            .count()
    }

    pub fn count_c(&self) -> usize {
        self.gamma_terms
            .iter()
            .filter(|(k, _)| *k == GammaKind::C)
            .count()
    }
}

/// The Asai L-factor of the minimal-type principal series:
///
/// ```text
/// L(s) = G_R(s + 2 nu_1 + eps) * prod_{j>=2} G_R(s + 2 nu_j)
///        * prod_{j>=2} G_C(s + nu_1 + nu_j + kappa/2)
///        * prod_{2<=i<j} G_C(s + nu_i + nu_j)
/// ```
pub fn asai_l_factor(input: &AsaiInput) -> LFactor {
    let nu = &input.nu;
    let mut terms = Vec::new();
    terms.push((
        GammaKind::R,
        AffineArg {
            constant: 2.0 * nu[0] + input.epsilon() as f64,
            slope: 1.0,
        },
    ));
    for j in 1..input.n {
        terms.push((
            GammaKind::R,
            AffineArg {
                constant: 2.0 * nu[j],
                slope: 1.0,
            },
        ));
    }
    for j in 1..input.n {
        terms.push((
            GammaKind::C,
            AffineArg {
                constant: nu[0] + nu[j] + input.kappa as f64 / 2.0,
                slope: 1.0,
            },
        ));
    }
    for i in 1..input.n {
        for j in i + 1..input.n {
            terms.push((
                GammaKind::C,
                AffineArg {
                    constant: nu[i] + nu[j],
                    slope: 1.0,
                },
            ));
        }
    }
    LFactor {
        gamma_terms: terms,
        power_prefactor: (
            AffineArg {
                constant: c(0.0, 0.0),
                slope: 0.0,
            },
            AffineArg {
                constant: c(0.0, 0.0),
                slope: 0.0,
            },
        ),
    }
}

/// Normalization constant of the closed form for the implemented `f`.
fn norm_const(n: usize) -> f64 {
    let base = 2f64.powi((n as i32) * (n as i32 - 2));
    if n >= 3 {
        base / 16.0
    } else {
        base
    }
}

/// Closed-form side of the identity.
pub fn asai_rhs(input: &AsaiInput) -> Result<Complex> {
    let ratio = gamma_r(input.s + 2.0 * input.nu[0] + input.kappa as f64)?.div(gamma_r(
        input.s + 2.0 * input.nu[0] + input.epsilon() as f64,
    )?);
    let l = asai_l_factor(input).eval(input.s)?;
    Ok(norm_const(input.n) * ratio.to_complex() * l)
}

struct GammaGroup {
    /// (kind folded to plain-log closure inputs) constant, s-coefficient,
    /// z-coefficient per factor.
    factors: Vec<(GammaKind, Complex, f64, f64)>,
}

impl GammaGroup {
    fn log_at(&self, t: Complex, z: Complex) -> Complex {
        let mut log = c(0.0, 0.0);
        for (kind, constant, cs, cz) in &self.factors {
            let arg = constant + cs * t + cz * z;
            log += match kind {
                GammaKind::Plain => log_gamma_unchecked(arg),
                GammaKind::R => log_gamma_unchecked(arg * 0.5) - arg * 0.5 * PI.ln(),
                GammaKind::C => log_gamma_unchecked(arg) + c(LN_2, 0.0) - arg * LN_2PI,
            };
        }
        log
    }
}

fn split_groups(integrand: &MBIntegrand, s_var: usize, z_var: Option<usize>) -> GammaGroup {
    let mut factors = Vec::new();
    for g in &integrand.gammas {
        let cs = ratio_f64(&g.coeffs[s_var]);
        let cz = z_var.map_or(0.0, |zv| ratio_f64(&g.coeffs[zv]));
        if cs != 0.0 {
            factors.push((g.kind, g.constant, cs, cz));
        }
    }
    GammaGroup { factors }
}

fn ratio_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// The numerical Mellin transform of `a -> f_{[nu,kappa],(0,...,0,kappa)}(a)`
/// along the diagonal `(s, 2s, ..., (n-1)s)`, times the zeta prefactor.
///
/// The Mellin integral is an exp-substituted trapezoid sum over
/// `R_+^{n-1}` of the Mellin-Barnes representation of `f`; the finite sums
/// are reassociated (torus sums innermost) so the cost stays near
/// `N_z * N_s`, which leaves the computed value identical to summing
/// `f`-values node by node.
pub fn asai_lhs_mellin(input: &AsaiInput, tol: f64) -> Result<Complex> {
    let n = input.n;
    if !(2..=3).contains(&n) {
        return Err(Error::UnsupportedRank(n));
    }
    let params = MinimalTypeParamsC::new(input.nu.clone(), input.kappa)?;
    let mut ell = vec![0u32; n];
    ell[n - 1] = input.kappa;
    let ell = WeightIndexC::new(ell)?;
    let dummy = TorusPointC::new(vec![1.0; n - 1])?;
    let integrand = glnc_integrand(&params, &ell, &dummy)?;

    // Contour: tight margins keep sigma_{s_i} below i * Re(s) so the
    // leftward torus tails decay; that is exactly the convergence region of
    // the Mellin integral.
    let s = input.s;
    let mut chosen = None;
    for margin in [0.4, 0.3, 0.2, 0.12, 0.07] {
        if let Ok(contour) = find_contour(&integrand, margin) {
            let sig = &contour.sigma[n - 2..]; // s-variables follow the z's
            let ok = (0..n - 1).all(|i| sig[i] < (i + 1) as f64 * s.re - 0.3);
            if ok {
                chosen = Some(contour);
                break;
            }
        }
    }
    let Some(contour) = chosen else {
        return Err(Error::Domain(format!(
            "Re(s) = {} is not to the right of the Mellin convergence region",
            s.re
        )));
    };

    let mellin = match n {
        2 => {
            let group = split_groups(&integrand, 0, None);
            let sigma = contour.sigma[0];
            refine_until(
                |level| {
                    let scale = (1 << level) as f64;
                    let h_t = 0.1 / scale;
                    let height = 22.0;
                    let t_grid = Grid1::symmetric(height, h_t);
                    // Torus decay rate to the left is Re(s) - sigma.
                    let rate = s.re - sigma;
                    let h_u = 0.12 / scale;
                    let u_grid = Grid1::span(-34.0 / rate, 2.4, h_u);
                    // A(t) = sum_u h e^{(s - (sigma + i t)) u}
                    let mut a_vals = Vec::with_capacity(t_grid.n);
                    for k in 0..t_grid.n {
                        let t_node = c(sigma, t_grid.node(k));
                        let expo = s - t_node;
                        let mut us = Vec::with_capacity(u_grid.n);
                        for j in 0..u_grid.n {
                            let u = u_grid.node(j);
                            let mut v = (expo * u).exp();
                            if j == 0 || j == u_grid.n - 1 {
                                v *= 0.5;
                            }
                            us.push(v);
                        }
                        a_vals.push(tree_sum(&us) * h_u);
                    }
                    let mut terms = Vec::with_capacity(t_grid.n);
                    for k in 0..t_grid.n {
                        let t_node = c(sigma, t_grid.node(k));
                        let g = group.log_at(t_node, c(0.0, 0.0)).exp();
                        terms.push(g * a_vals[k]);
                    }
                    Ok(tree_sum(&terms) * (h_t / (2.0 * PI)) * integrand.prefactor.to_complex())
                },
                (tol * 0.2).clamp(1e-11, 1e-2),
                3,
            )?
            .0
        }
        3 => {
            let z_sigma = contour.sigma[0];
            let s_sigma = [contour.sigma[1], contour.sigma[2]];
            let g1 = split_groups(&integrand, 1, Some(0));
            let g2 = split_groups(&integrand, 2, Some(0));
            let zg = {
                // z-only factors (the rank-2 Mellin pair).
                let mut factors = Vec::new();
                for g in &integrand.gammas {
                    let cz = ratio_f64(&g.coeffs[0]);
                    let cs1 = ratio_f64(&g.coeffs[1]);
                    let cs2 = ratio_f64(&g.coeffs[2]);
                    if cz != 0.0 && cs1 == 0.0 && cs2 == 0.0 {
                        factors.push((g.kind, g.constant, 0.0, cz));
                    }
                }
                GammaGroup { factors }
            };
            refine_until(
                |level| {
                    let scale = (1 << level) as f64;
                    let h_t = 0.11 / scale;
                    let t_grid = Grid1::symmetric(20.0, h_t);
                    let h_u = 0.14 / scale;
                    // Per-axis torus sums A_i(t) = sum_u h e^{((i+1) s - (sigma_i + i t)) u}.
                    let mut a_tables = Vec::new();
                    for axis in 0..2 {
                        let rate = (axis + 1) as f64 * s.re - s_sigma[axis];
                        let u_grid = Grid1::span(-34.0 / rate, 2.4, h_u);
                        let mut a_vals = Vec::with_capacity(t_grid.n);
                        for k in 0..t_grid.n {
                            let t_node = c(s_sigma[axis], t_grid.node(k));
                            let expo = (axis + 1) as f64 * s - t_node;
                            let mut us = Vec::with_capacity(u_grid.n);
                            for j in 0..u_grid.n {
                                let u = u_grid.node(j);
                                let mut v = (expo * u).exp();
                                if j == 0 || j == u_grid.n - 1 {
                                    v *= 0.5;
                                }
                                us.push(v);
                            }
                            a_vals.push(tree_sum(&us) * h_u);
                        }
                        a_tables.push(a_vals);
                    }
                    let mut z_terms = Vec::with_capacity(t_grid.n);
                    for kz in 0..t_grid.n {
                        let z_node = c(z_sigma, t_grid.node(kz));
                        let mf = zg.log_at(c(0.0, 0.0), z_node).exp();
                        let mut t1 = Vec::with_capacity(t_grid.n);
                        let mut t2 = Vec::with_capacity(t_grid.n);
                        for k in 0..t_grid.n {
                            let t_node1 = c(s_sigma[0], t_grid.node(k));
                            let t_node2 = c(s_sigma[1], t_grid.node(k));
                            t1.push(g1.log_at(t_node1, z_node).exp() * a_tables[0][k]);
                            t2.push(g2.log_at(t_node2, z_node).exp() * a_tables[1][k]);
                        }
                        let s1 = tree_sum(&t1) * (h_t / (2.0 * PI));
                        let s2 = tree_sum(&t2) * (h_t / (2.0 * PI));
                        z_terms.push(mf * s1 * s2);
                    }
                    Ok(tree_sum(&z_terms) * (h_t / (2.0 * PI)) * integrand.prefactor.to_complex())
                },
                (tol * 0.2).clamp(1e-11, 1e-2),
                3,
            )?
            .0
        }
        _ => unreachable!(),
    };

    let front_expo =
        c(-2.0, 0.0) + (n as f64 * s + input.kappa as f64 + 2.0 * input.nu_sum()) / 2.0;
    let front = (front_expo * LN_2).exp()
        * gamma_c((n as f64 * s + input.kappa as f64) / 2.0 + input.nu_sum())?.to_complex();
    Ok(front * mellin)
}

/// Verification report of one identity instance.
#[derive(Debug, Clone)]
pub struct AsaiReport {
    pub lhs: Complex,
    pub rhs: Complex,
    pub rel_diff: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Compare both sides of the zeta identity at the given tolerance.
pub fn verify_asai(input: &AsaiInput, tol: f64) -> Result<AsaiReport> {
    let rhs = asai_rhs(input)?;
    let lhs = asai_lhs_mellin(input, tol)?;
    let rel = (lhs - rhs).norm() / rhs.norm().max(1e-290);
    Ok(AsaiReport {
        lhs,
        rhs,
        rel_diff: rel,
        tol,
        pass: rel <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn input(n: usize, nu: &[(f64, f64)], kappa: u32, s: f64) -> AsaiInput {
        AsaiInput::new(
            n,
            nu.iter().map(|&(r, i)| c(r, i)).collect(),
            kappa,
            c(s, 0.0),
        )
        .unwrap()
    }

    #[test]
    fn l_factor_counts() {
        for n in 1..=4 {
            let nu = vec![(0.1, 0.0); n];
            let l = asai_l_factor(&input(n, &nu, 1, 1.5));
            assert_eq!(l.count_r(), n);
            assert_eq!(l.count_c(), n * (n - 1) / 2);
        }
    }

    #[test]
    fn l_factor_n2_kappa0_shape() {
        // G_R(s)^2 G_C(s) at nu = 0: value at s = 1 is G_R(1)^2 G_C(1) = 1/pi.
        let l = asai_l_factor(&input(2, &[(0.0, 0.0), (0.0, 0.0)], 0, 1.0));
        let v = l.eval(c(1.0, 0.0)).unwrap();
        assert!((v - c(1.0 / PI, 0.0)).norm() < 1e-13 / PI);
    }

    #[test]
    fn l_factor_n1() {
        let l = asai_l_factor(&input(1, &[(0.25, 0.0)], 0, 1.0));
        assert_eq!(l.gamma_terms.len(), 1);
        let v = l.eval(c(1.0, 0.0)).unwrap();
        let expect = gamma_r(c(1.5, 0.0)).unwrap().to_complex();
        assert!((v - expect).norm() < 1e-13 * expect.norm());
    }

    #[test]
    fn rhs_kappa2_example() {
        // n=2, kappa=2, nu=0, s=1:
        // (G_R(3)/G_R(1)) * G_R(1) G_R(1) G_C(2)
        let v = asai_rhs(&input(2, &[(0.0, 0.0), (0.0, 0.0)], 2, 1.0)).unwrap();
        let expect = gamma_r(c(3.0, 0.0))
            .unwrap()
            .mul(gamma_r(c(1.0, 0.0)).unwrap())
            .mul(gamma_c(c(2.0, 0.0)).unwrap())
            .to_complex();
        assert!(
            (v - expect).norm() < 1e-12 * expect.norm(),
            "v = {v}, expect = {expect}"
        );
    }

    #[test]
    fn rhs_pole_surfaces() {
        let bad = input(2, &[(0.0, 0.0), (0.0, 0.0)], 2, 1.0);
        let at_pole = AsaiInput {
            s: c(-2.0 + 1e-13, 0.0),
            ..bad
        };
        assert!(matches!(asai_rhs(&at_pole), Err(Error::Pole { .. })));
    }

    #[test]
    fn twist_covariance_structural() {
        let base = asai_l_factor(&input(3, &[(0.1, 0.0), (0.0, 0.0), (-0.1, 0.0)], 1, 1.5));
        let shifted = asai_l_factor(&input(
            3,
            &[(0.1 + 0.25, 0.0), (0.25, 0.0), (-0.1 + 0.25, 0.0)],
            1,
            1.5,
        ));
        for ((k1, a1), (k2, a2)) in base.gamma_terms.iter().zip(&shifted.gamma_terms) {
            assert_eq!(k1, k2);
            assert!((a2.constant - a1.constant - 0.5).norm() < 1e-12);
            assert_eq!(a1.slope, a2.slope);
        }
    }

    #[test]
    fn identity_n2_kappa0() {
        let r = verify_asai(&input(2, &[(0.0, 0.0), (0.0, 0.0)], 0, 1.5), 1e-8).unwrap();
        assert!(
            r.pass,
            "rel = {:e}, lhs = {}, rhs = {}",
            r.rel_diff, r.lhs, r.rhs
        );
    }

    #[test]
    fn identity_n2_kappa2() {
        let r = verify_asai(&input(2, &[(0.2, 0.0), (-0.2, 0.0)], 2, 1.2), 1e-8).unwrap();
        assert!(
            r.pass,
            "rel = {:e}, lhs = {}, rhs = {}",
            r.rel_diff, r.lhs, r.rhs
        );
    }

    #[test]
    fn identity_n3_kappa1_spot() {
        let r = verify_asai(
            &input(3, &[(0.1, 0.0), (0.0, 0.0), (-0.1, 0.0)], 1, 1.3),
            1e-3,
        )
        .unwrap();
        assert!(r.lhs.norm().is_finite() && r.rhs.norm().is_finite());
        assert!(r.pass, "rel = {:e}, lhs = {}, rhs = {}", r.rel_diff, r.lhs, r.rhs);
    }

    #[test]
    fn identity_n3_kappa0() {
        let r = verify_asai(
            &input(3, &[(0.2, 0.0), (0.0, 0.0), (-0.2, 0.0)], 0, 1.5),
            1e-3,
        )
        .unwrap();
        assert!(
            r.pass,
            "rel = {:e}, lhs = {}, rhs = {}",
            r.rel_diff, r.lhs, r.rhs
        );
    }
}
