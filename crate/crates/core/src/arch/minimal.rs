//! Minimal-K-type Whittaker functions of `GL(n, C)` for the angular vector
//! `(kappa, 0, ..., 0)`, by two independent routes.
//!
//! **Mellin-Barnes route** (`whittaker_c_mb`): the weight-`ell` component is
//!
//! ```text
//! f_{[nu,kappa],ell}(a) = int dz/(2 pi i)^(n-2) (M f_nu~)(z)
//!   int ds/(2 pi i)^(n-1)
//!   prod_{i<=n-2} a_i^{-s_i} G_C((s_i + kappa - l~_i - z_{i-1})/2 + i nu_1)
//!                            G_C((s_i + l~_i - z_i)/2 + i nu_1)
//!   * a_{n-1}^{-s_{n-1}} G_C((s_{n-1} + kappa - l~_{n-1} - z_{n-2})/2 + (n-1) nu_1)
//!                        G_C((s_{n-1} + l~_{n-1})/2 + |nu~| + (n-1) nu_1)
//! ```
//!
//! with `z_0 = 0` and `l~_i = l_1 + ... + l_i`. At `kappa = 0` the integrand
//! coincides with the spherical recursion integrand.
//!
//! **Direct route** (`whittaker_c_direct`): the reduced propagation integral
//!
//! ```text
//! f_{[nu,kappa],ell}(a) = 2^(4(n-1)) prod_i a_i^(2 i nu_1)
//!   * prod_i alpha_i^(kappa - l~_i) alpha_{i+1}^(-l~_i)
//!   * int_{R_+^{n-1}} f_nu~(t_1/t_2, ..., t_{n-2}/t_{n-1}) t_{n-1}^(2|nu~|)
//!       prod_i t_i^(2 l~_i - kappa) exp(-2 pi (t_i^2 alpha_{i+1}^{-2} + t_i^{-2} alpha_i^2)) d*t
//! ```
//!
//! with `alpha_i = prod_{j>=i} a_j`, `alpha_n = 1`, the multinomial and
//! `sqrt(-1)`-power weight-vector normalization stripped. Each `t_i`
//! integral is exactly the K-Bessel integral
//! `int t^z exp(-2 pi (t^2 b_1^2 + t^{-2} b_2^2)) d*t = (b_2/b_1)^(z/2) K_(z/2)(4 pi b_1 b_2)`,
//! which is what ties the two routes together.

use super::spherical::f_rank2;
use super::{cpow, MinimalTypeParamsC, TorusPointC, WeightIndexC};
use crate::error::{Error, Result};
use crate::mb::{eval_mb_with, EvalOptions, GammaFactor, MBIntegrand, PowerFactor, Rational};
use crate::quad::{refine_until, scan_window, tree_sum, Grid1};
use crate::scalar::{c, Complex, LogComplex};
use std::f64::consts::PI;

/// The minimal-type Mellin-Barnes integrand for `n in {2, 3}`, variables
/// ordered `(z_1..z_{n-2}, s_1..s_{n-1})`.
pub(crate) fn glnc_integrand(
    params: &MinimalTypeParamsC,
    ell: &WeightIndexC,
    a: &TorusPointC,
) -> Result<MBIntegrand> {
    let n = params.rank();
    debug_assert!(n == 2 || n == 3);
    let kappa = params.kappa();
    let nu = params.nu();
    let nu1 = nu[0];
    let tilde = params.spherical().nu_tilde();
    let tilde_sum = tilde.nu_sum();
    let nvars = (n - 2) + (n - 1);

    let zero = Rational::from_integer(0);
    let half = Rational::new(1, 2);
    let s_idx = |j: usize| (n - 2) + (j - 1);
    let coeff = |entries: &[(usize, Rational)]| {
        let mut v = vec![zero; nvars];
        for (i, r) in entries {
            v[*i] = *r;
        }
        v
    };

    let lt = |i: usize| ell.tilde(i) as f64;
    let mut gammas = Vec::new();

    if n == 3 {
        // Closed rank-2 Mellin factor of f_nu~.
        let mu = tilde.nu();
        gammas.push(GammaFactor::c_num(mu[0], coeff(&[(0, half)])));
        gammas.push(GammaFactor::c_num(mu[1], coeff(&[(0, half)])));
        // i = 1 pair (z_0 = 0).
        gammas.push(GammaFactor::c_num(
            (kappa as f64 - lt(1)) / 2.0 + nu1,
            coeff(&[(s_idx(1), half)]),
        ));
        gammas.push(GammaFactor::c_num(
            lt(1) / 2.0 + nu1,
            coeff(&[(s_idx(1), half), (0, -half)]),
        ));
        // Last pair, j = 2.
        gammas.push(GammaFactor::c_num(
            (kappa as f64 - lt(2)) / 2.0 + 2.0 * nu1,
            coeff(&[(s_idx(2), half), (0, -half)]),
        ));
        gammas.push(GammaFactor::c_num(
            lt(2) / 2.0 + tilde_sum + 2.0 * nu1,
            coeff(&[(s_idx(2), half)]),
        ));
    } else {
        // n = 2: a single s-variable, M f of rank 1 is the constant 1.
        gammas.push(GammaFactor::c_num(
            (kappa as f64 - lt(1)) / 2.0 + nu1,
            coeff(&[(0, half)]),
        ));
        gammas.push(GammaFactor::c_num(
            lt(1) / 2.0 + tilde_sum + nu1,
            coeff(&[(0, half)]),
        ));
    }

    let prefactor = if n == 3 {
        LogComplex::new(-(16f64.ln()), 0.0)
    } else {
        LogComplex::ONE
    };
    let powers = (1..=n - 1)
        .map(|j| {
            let mut v = vec![zero; nvars];
            v[s_idx(j)] = Rational::from_integer(-1);
            PowerFactor::new(a.a()[j - 1], c(0.0, 0.0), v)
        })
        .collect();

    MBIntegrand::new(nvars, prefactor, gammas, powers)
}

fn check_args(params: &MinimalTypeParamsC, ell: &WeightIndexC, a: &TorusPointC) -> Result<()> {
    let n = params.rank();
    if n > 3 {
        return Err(Error::UnsupportedRank(n));
    }
    if ell.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: ell.len(),
        });
    }
    if ell.sum() != params.kappa() {
        return Err(Error::Domain(format!(
            "weight index sums to {}, expected kappa = {}",
            ell.sum(),
            params.kappa()
        )));
    }
    if a.len() != n - 1 {
        return Err(Error::LengthMismatch {
            expected: n - 1,
            got: a.len(),
        });
    }
    Ok(())
}

/// Minimal-K-type value by the Mellin-Barnes formula.
pub fn whittaker_c_mb(
    params: &MinimalTypeParamsC,
    ell: &WeightIndexC,
    a: &TorusPointC,
    tol: f64,
) -> Result<Complex> {
    check_args(params, ell, a)?;
    let integrand = glnc_integrand(params, ell, a)?;
    let mut contour = crate::mb::find_contour(&integrand, 0.5)?;
    contour.height = crate::settings::mb_height_or(26.0);
    let contour = crate::mb::condition_contour(&integrand, &contour, 0.5);
    let opts = EvalOptions::with_rtol((tol * 0.3).clamp(1e-12, 1e-2));
    let (v, _) = eval_mb_with(&integrand, &contour, &opts)?;
    Ok(v)
}

/// Minimal-K-type value by direct quadrature of the reduced propagation
/// integral; the independent oracle for `whittaker_c_mb`.
pub fn whittaker_c_direct(
    params: &MinimalTypeParamsC,
    ell: &WeightIndexC,
    a: &TorusPointC,
) -> Result<Complex> {
    check_args(params, ell, a)?;
    let n = params.rank();
    let kappa = params.kappa() as f64;
    let nu1 = params.nu()[0];
    let tilde = params.spherical().nu_tilde();
    let tilde_sum = tilde.nu_sum();
    let alphas = a.alphas();

    // prod_i a_i^(2 i nu_1) * prod_i alpha_i^(kappa - l~_i) alpha_{i+1}^(-l~_i)
    let mut prefactor = cpow(16.0, c((n - 1) as f64, 0.0));
    for (j, &aj) in a.a().iter().enumerate() {
        prefactor *= cpow(aj, 2.0 * (j + 1) as f64 * nu1);
    }
    for i in 1..=n - 1 {
        let lt = ell.tilde(i) as f64;
        prefactor *= alphas[i - 1].powf(kappa - lt) * alphas[i].powf(-lt);
    }

    let tol = 1e-9;
    match n {
        2 => {
            // t-power 2|nu~| + 2 l~_1 - kappa; K-Bessel data b_1 = 1/alpha_2,
            // b_2 = alpha_1.
            let expc = c(2.0 * ell.tilde(1) as f64 - kappa, 0.0) + 2.0 * tilde_sum;
            let (b1, b2) = (1.0 / alphas[1], alphas[0]);
            let center = 0.5 * (b2 / b1).ln();
            let f = |u: f64| -> Complex {
                let t = u.exp();
                cpow(t, expc) * (-2.0 * PI * (t * t * b1 * b1 + b2 * b2 / (t * t))).exp()
            };
            let (lo, hi) = scan_window(
                |u| f(u).norm(),
                center,
                0.5,
                1e-18 * f(center).norm().max(1e-280),
                crate::settings::quad_window_or(40.0),
            );
            let (v, _) = refine_until(
                |level| {
                    let g = Grid1::span(lo, hi, 0.2 / (1 << level) as f64);
                    Ok(crate::quad::trapezoid(g, f))
                },
                tol,
                6,
            )?;
            Ok(prefactor * v)
        }
        3 => {
            let l1 = 2.0 * ell.tilde(1) as f64 - kappa;
            let l2 = 2.0 * ell.tilde(2) as f64 - kappa;
            let mu = tilde.nu().to_vec();
            // Axis centers minimize 2 pi (t^2 alpha_{i+1}^{-2} + t^{-2} alpha_i^2).
            let centers = [
                0.5 * (alphas[0] * alphas[1]).ln(),
                0.5 * (alphas[1] * alphas[2]).ln(),
            ];
            let exp_part = |i: usize, t: f64| -> f64 {
                -2.0 * PI
                    * (t * t / (alphas[i + 1] * alphas[i + 1]) + alphas[i] * alphas[i] / (t * t))
            };
            let axis_mag = |i: usize, u: f64| -> f64 { exp_part(i, u.exp()).exp() };
            let peak0 = axis_mag(0, centers[0]).max(1e-280);
            let peak1 = axis_mag(1, centers[1]).max(1e-280);
            let cap = crate::settings::quad_window_or(30.0);
            let (lo0, hi0) = scan_window(|u| axis_mag(0, u), centers[0], 0.4, 1e-17 * peak0, cap);
            let (lo1, hi1) = scan_window(|u| axis_mag(1, u), centers[1], 0.4, 1e-17 * peak1, cap);

            let eval_level = |level: u32| -> Result<Complex> {
                let h = 0.16 / (1 << level) as f64;
                let g1 = Grid1::span(lo0, hi0, h);
                let g2 = Grid1::span(lo1, hi1, h);
                // f_nu~(t_1/t_2) depends only on u_1 - u_2; cache it per
                // diagonal offset of the shared-step grids.
                let offset_lo = -((g2.n - 1) as i64);
                let n_offsets = (g1.n + g2.n - 1) as usize;
                let mut diag = Vec::with_capacity(n_offsets);
                for k in 0..n_offsets {
                    let du = g1.lo - g2.lo + (offset_lo + k as i64) as f64 * h;
                    diag.push(f_rank2(&mu, du.exp())?);
                }
                let mut rows = Vec::with_capacity(g1.n);
                for i in 0..g1.n {
                    let u1 = g1.node(i);
                    let t1 = u1.exp();
                    let w1 = cpow(t1, c(l1, 0.0)) * exp_part(0, t1).exp();
                    let mut row = Vec::with_capacity(g2.n);
                    for j in 0..g2.n {
                        let u2 = g2.node(j);
                        let t2 = u2.exp();
                        let fv = diag[(i as i64 - j as i64 - offset_lo) as usize];
                        let w2 = cpow(t2, c(l2, 0.0) + 2.0 * tilde_sum) * exp_part(1, t2).exp();
                        row.push(fv * w1 * w2);
                    }
                    rows.push(tree_sum(&row));
                }
                Ok(tree_sum(&rows) * h * h)
            };
            let (v, _) = refine_until(eval_level, tol, 4)?;
            Ok(prefactor * v)
        }
        _ => unreachable!(),
    }
}
