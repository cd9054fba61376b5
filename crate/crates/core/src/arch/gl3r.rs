//! Whittaker functions of `GL(3, R)` generalized principal series
//! `(D_kappa (x) |.|^w) x 1`, with the Whittaker function of `D_kappa`
//! normalized so that its value at the identity is `exp(-2 pi)`.
//!
//! The value at `diag(a_1 a_2, a_2, 1)` is a vector in the minimal K-type;
//! for each monomial index `(n_1, n_2, n_3)` with `n_1 + n_2 + n_3 = kappa`
//! the coefficient comes from two routes:
//!
//! * the double Mellin-Barnes integral with the Gamma kernel
//!   `G_C(s_1+(kappa-1)/2+w) G_R(s_1+n_1) G_C(s_2+(kappa-1)/2-w) G_R(s_2+n_3)
//!    / G_R(s_1+s_2+n_1+n_3)`, prefactor
//!   `2^(-4) multinomial * i^(n_1-n_3) * a_1 a_2^(1+2w)`;
//! * direct 2D quadrature of the reduced Hermite/Gaussian integral
//!   `I_{n_1,n_2,n_3}`, prefactor
//!   `multinomial * (4 pi)^(-n_2/2) i^(n_1-n_3) a_1 a_2`.
//!
//! The `a_2` exponent in the first route is `1 + 2w`: inverting the Mellin
//! transform of `I` and shifting `s_2` by `2w` produces `a_2^(+2w)`, and the
//! cross-check at complex `w` confirms it.

use super::{cpow, MiyazakiParams};
use crate::error::Result;
use crate::mb::{
    eval_mb_with, find_contour, EvalOptions, GammaFactor, MBIntegrand, PowerFactor, Rational,
};
use crate::quad::{refine_until, scan_window, tree_sum, Grid1};
use crate::scalar::{c, Complex, LogComplex};
use crate::special::hermite;
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Monomial triples `(n_1, n_2, n_3)` with sum `kappa`, lexicographic.
pub(crate) fn monomials(kappa: u32) -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    for n1 in 0..=kappa {
        for n2 in 0..=kappa - n1 {
            out.push((n1, n2, kappa - n1 - n2));
        }
    }
    out
}

fn multinomial(kappa: u32, n: (u32, u32, u32)) -> f64 {
    let fact = |m: u32| -> f64 { (1..=m).map(|k| k as f64).product::<f64>().max(1.0) };
    fact(kappa) / (fact(n.0) * fact(n.1) * fact(n.2))
}

fn i_power(k: i64) -> Complex {
    match k.rem_euclid(4) {
        0 => c(1.0, 0.0),
        1 => c(0.0, 1.0),
        2 => c(-1.0, 0.0),
        _ => c(0.0, -1.0),
    }
}

/// The double Mellin-Barnes integrand for one monomial index.
pub(crate) fn miyazaki_integrand(
    params: &MiyazakiParams,
    n: (u32, u32, u32),
    a1: f64,
    a2: f64,
) -> Result<MBIntegrand> {
    let kappa = params.kappa() as f64;
    let w = params.w();
    let one = Rational::from_integer(1);
    let zero = Rational::from_integer(0);
    let gammas = vec![
        GammaFactor::c_num(c((kappa - 1.0) / 2.0, 0.0) + w, vec![one, zero]),
        GammaFactor::r_num(c(n.0 as f64, 0.0), vec![one, zero]),
        GammaFactor::c_num(c((kappa - 1.0) / 2.0, 0.0) - w, vec![zero, one]),
        GammaFactor::r_num(c(n.2 as f64, 0.0), vec![zero, one]),
        GammaFactor::r_den(c((n.0 + n.2) as f64, 0.0), vec![one, one]),
    ];
    let powers = vec![
        PowerFactor::new(a1, c(0.0, 0.0), vec![-one, zero]),
        PowerFactor::new(a2, c(0.0, 0.0), vec![zero, -one]),
    ];
    MBIntegrand::new(2, LogComplex::ONE, gammas, powers)
}

/// Corpus hook for the engine property suite.
pub(crate) fn gl3r_integrand_for_tests(
    params: &MiyazakiParams,
    n: (u32, u32, u32),
    a1: f64,
    a2: f64,
) -> MBIntegrand {
    miyazaki_integrand(params, n, a1, a2).expect("valid integrand")
}

/// Coefficients of the minimal-K-type Whittaker value at
/// `diag(a_1 a_2, a_2, 1)` by the Mellin-Barnes formula, keyed by
/// `(n_1, n_2, n_3)`.
pub fn miyazaki_mb(
    params: &MiyazakiParams,
    a1: f64,
    a2: f64,
    tol: f64,
) -> Result<BTreeMap<(u32, u32, u32), Complex>> {
    let kappa = params.kappa();
    let w = params.w();
    let mut out = BTreeMap::new();
    for n in monomials(kappa) {
        // Each axis decays at rate pi/2, so height 16 leaves tails near 1e-11.
        let integrand = miyazaki_integrand(params, n, a1, a2)?;
        let mut contour = find_contour(&integrand, 0.5)?;
        contour.height = crate::settings::mb_height_or(20.0);
        let opts = EvalOptions::with_rtol((tol * 0.2).clamp(1e-12, 1e-3));
        let (v, _) = eval_mb_with(&integrand, &contour, &opts)?;
        let pref = multinomial(kappa, n)
            * i_power(n.0 as i64 - n.2 as i64)
            * (1.0 / 16.0)
            * a1
            * cpow(a2, c(1.0, 0.0) + 2.0 * w);
        out.insert(n, pref * v);
    }
    Ok(out)
}

/// The reduced Hermite/Gaussian integral `I_{n_1,n_2,n_3}(a_1, a_2)` over
/// `R_+^2`, by exp-substituted trapezoid quadrature.
pub(crate) fn miyazaki_reduced_integral(
    params: &MiyazakiParams,
    n: (u32, u32, u32),
    a1: f64,
    a2: f64,
    tol: f64,
) -> Result<Complex> {
    let kappa = params.kappa() as f64;
    let w = params.w();
    let p1 = c(-(n.0 as f64) + (kappa - 1.0) / 2.0, 0.0) + w;
    let p2 = c((n.2 as f64) - (n.0 as f64), 0.0) + 2.0 * w;
    let aa = a1 * a2;

    // Log-magnitude of the Gaussian part times the power moduli; working in
    // log scale keeps the window search immune to underflow at extreme `a`.
    let log_mag = |u1: f64, u2: f64| -> f64 {
        let (t1, t2) = (u1.exp(), u2.exp());
        let q = a2 / t2 + t1 * t2 / a2;
        -PI * (aa * aa / (t1 * t1 * t2 * t2) + t2 * t2) - PI * q * q
            + p1.re * u1
            + p2.re * u2
    };
    let f = move |t1: f64, t2: f64| -> Complex {
        let q = PI.sqrt() * (a2 / t2 + t1 * t2 / a2);
        let gauss = {
            let qq = a2 / t2 + t1 * t2 / a2;
            (-PI * (aa * aa / (t1 * t1 * t2 * t2) + t2 * t2) - PI * qq * qq).exp()
        };
        cpow(t1, p1) * cpow(t2, p2) * aa.powi(n.0 as i32) * hermite(n.1, q) * gauss
    };

    // Locate the peak on a coarse lattice whose bounds track the natural
    // scales of the barriers (t_2 ~ sqrt(a_2), t_1 t_2 ~ a_1 a_2), then scan
    // outward from it.
    let cap = crate::settings::quad_window_or(30.0);
    let scales = [0.0, aa.ln(), a2.ln(), 0.5 * a2.ln()];
    let lat_lo = scales.iter().cloned().fold(f64::INFINITY, f64::min) - 8.0;
    let lat_hi = scales.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 8.0;
    let lat_n = (((lat_hi - lat_lo) / 0.5).ceil() as usize).max(1);
    let mut center = (0.0f64, 0.0f64);
    let mut best = f64::NEG_INFINITY;
    for i in 0..=lat_n {
        for j in 0..=lat_n {
            let u1 = lat_lo + (lat_hi - lat_lo) * i as f64 / lat_n as f64;
            let u2 = lat_lo + (lat_hi - lat_lo) * j as f64 / lat_n as f64;
            let m = log_mag(u1, u2);
            if m > best {
                best = m;
                center = (u1, u2);
            }
        }
    }
    // Generous headroom: the support ridge need not align with the axes,
    // so the axis scans through the peak get 80 log-units of margin.
    let threshold = best - 80.0;
    let pad = 1.5;
    let (lo1, hi1) = scan_window(
        |u1| log_mag(u1, center.1) - threshold,
        center.0,
        0.4,
        0.0,
        cap,
    );
    let (lo1, hi1) = (lo1 - pad, hi1 + pad);
    let (lo2, hi2) = scan_window(
        |u2| log_mag(center.0, u2) - threshold,
        center.1,
        0.4,
        0.0,
        cap,
    );
    let (lo2, hi2) = (lo2 - pad, hi2 + pad);

    let (v, _) = refine_until(
        |level| {
            let h = 0.15 / (1 << level) as f64;
            let g1 = Grid1::span(lo1, hi1, h);
            let g2 = Grid1::span(lo2, hi2, h);
            let mut rows = Vec::with_capacity(g1.n);
            for i in 0..g1.n {
                let t1 = g1.node(i).exp();
                let mut row = Vec::with_capacity(g2.n);
                for j in 0..g2.n {
                    row.push(f(t1, g2.node(j).exp()));
                }
                rows.push(tree_sum(&row));
            }
            Ok(tree_sum(&rows) * h * h)
        },
        tol,
        5,
    )?;
    Ok(v)
}

/// Coefficients by direct quadrature of the reduced integrals; the
/// independent oracle for `miyazaki_mb`.
pub fn miyazaki_direct(
    params: &MiyazakiParams,
    a1: f64,
    a2: f64,
) -> Result<BTreeMap<(u32, u32, u32), Complex>> {
    let kappa = params.kappa();
    let mut out = BTreeMap::new();
    for n in monomials(kappa) {
        let i_val = miyazaki_reduced_integral(params, n, a1, a2, 1e-9)?;
        let pref = multinomial(kappa, n)
            * (4.0 * PI).powf(-(n.1 as f64) / 2.0)
            * i_power(n.0 as i64 - n.2 as i64)
            * a1
            * a2;
        out.insert(n, pref * i_val);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::tree_sum;
    use crate::verify::rel_diff;

    #[test]
    fn monomial_count() {
        assert_eq!(monomials(2).len(), 6);
        assert_eq!(monomials(3).len(), 10);
    }

    #[test]
    fn reduced_integral_real_for_symmetric_weights() {
        // w = 0 and n_1 = n_3 make the integrand real.
        let p = MiyazakiParams::new(2, c(0.0, 0.0)).unwrap();
        let v = miyazaki_reduced_integral(&p, (1, 0, 1), 1.0, 1.0, 1e-9).unwrap();
        assert!(v.im.abs() <= 1e-12 * v.re.abs().max(1e-30), "v = {v}");
        assert!(v.re > 0.0);
    }

    #[test]
    fn mb_matches_direct_kappa2_spot() {
        let p = MiyazakiParams::new(2, c(0.0, 0.0)).unwrap();
        let mb = miyazaki_mb(&p, 1.0, 1.0, 1e-7).unwrap();
        let direct = miyazaki_direct(&p, 1.0, 1.0).unwrap();
        for (n, v) in &mb {
            let d = direct[n];
            assert!(rel_diff(*v, d) <= 1e-6, "n = {n:?}: mb = {v}, direct = {d}");
        }
    }

    #[test]
    fn mb_matches_direct_complex_w_spot() {
        let p = MiyazakiParams::new(2, c(0.3, 0.1)).unwrap();
        let mb = miyazaki_mb(&p, 0.5, 1.5, 1e-7).unwrap();
        let direct = miyazaki_direct(&p, 0.5, 1.5).unwrap();
        for (n, v) in &mb {
            let d = direct[n];
            assert!(rel_diff(*v, d) <= 1e-6, "n = {n:?}: mb = {v}, direct = {d}");
        }
    }

    #[test]
    fn reduced_integral_mellin_cross_check() {
        // The 2D Mellin transform of I_{n_1,n_2,n_3} at (s_1, s_2) = (2, 2)
        // equals the closed Gamma product
        //   2^{-4} (4 pi)^{n_2/2} G_C(s_1+(k-1)/2+w) G_R(s_1+n_1)
        //       G_C(s_2+(k-1)/2+w) G_R(s_2+n_3+2w) / G_R(s_1+s_2+n_1+n_3+2w).
        use crate::special::{gamma_c, gamma_r};
        let w = c(0.1, 0.05);
        let params = MiyazakiParams::new(2, w).unwrap();
        let n = (1u32, 0u32, 1u32);
        let (s1, s2) = (c(2.0, 0.0), c(2.0, 0.0));

        let g = crate::quad::Grid1::span(-16.0, 2.4, 0.14);
        let mut rows = Vec::with_capacity(g.n);
        for i in 0..g.n {
            let a1 = g.node(i).exp();
            let mut row = Vec::with_capacity(g.n);
            for j in 0..g.n {
                let a2 = g.node(j).exp();
                let i_val = miyazaki_reduced_integral(&params, n, a1, a2, 1e-9).unwrap();
                row.push(cpow(a1, s1) * cpow(a2, s2) * i_val);
            }
            rows.push(tree_sum(&row));
        }
        let mellin = tree_sum(&rows) * g.step * g.step;

        let kappa = params.kappa() as f64;
        let closed = (1.0 / 16.0)
            * (4.0 * PI).powf(n.1 as f64 / 2.0)
            * (gamma_c(s1 + (kappa - 1.0) / 2.0 + w).unwrap().as_log()
                + gamma_r(s1 + n.0 as f64).unwrap().as_log()
                + gamma_c(s2 + (kappa - 1.0) / 2.0 + w).unwrap().as_log()
                + gamma_r(s2 + n.2 as f64 + 2.0 * w).unwrap().as_log()
                - gamma_r(s1 + s2 + (n.0 + n.2) as f64 + 2.0 * w)
                    .unwrap()
                    .as_log())
            .exp();
        assert!(
            rel_diff(mellin, closed) < 1e-6,
            "mellin = {mellin}, closed = {closed}, rel = {:e}",
            rel_diff(mellin, closed)
        );
    }

    #[test]
    fn swap_symmetry_at_w_zero() {
        // At w = 0 and a_1 = a_2 = 1 the Gamma kernel is invariant under
        // (s_1, n_1) <-> (s_2, n_3); coefficients of mirrored monomials have
        // equal moduli.
        let p = MiyazakiParams::new(3, c(0.0, 0.0)).unwrap();
        let mb = miyazaki_mb(&p, 1.0, 1.0, 1e-7).unwrap();
        for (n, v) in &mb {
            let m = (n.2, n.1, n.0);
            let vm = mb[&m];
            assert!(
                (v.norm() - vm.norm()).abs() <= 1e-7 * v.norm().max(1e-30),
                "n = {n:?}"
            );
        }
    }
}
