//! Spherical Whittaker functions of `GL(n, C)` via the Ishii-Stade
//! recursion.
//!
//! Base case `f_nu(a) = a^(nu_1 + nu_2) K_(nu_1 - nu_2)(4 pi a)` for rank 2,
//! and for `n >= 3`
//!
//! ```text
//! f_nu(a) = int dz/(2 pi i)^(n-2) (M f_nu~)(z)
//!           int ds/(2 pi i)^(n-1)
//!           prod_{i<n-1} a_i^{-s_i} G_C((s_i - z_{i-1})/2 + i nu_1) G_C((s_i - z_i)/2 + i nu_1)
//!           * a_{n-1}^{-s_{n-1}} G_C((s_{n-1} - z_{n-2})/2 + (n-1) nu_1)
//!                                G_C(s_{n-1}/2 + |nu~| + (n-1) nu_1)
//! ```
//!
//! with `z_0 = 0`. The Mellin transform of the rank-2 base case has the
//! closed two-factor form
//!
//! ```text
//! (M f_mu)(z) = 2^(-4) G_C(z/2 + mu_1) G_C(z/2 + mu_2),
//! ```
//!
//! which follows from the K-Bessel Mellin pair
//! `int_0^inf K_v(4 pi b) b^(z-1) db = 2^(-4) G_C((z+v)/2) G_C((z-v)/2)`
//! and is validated against direct quadrature in the tests. Rank-3 Mellin
//! transforms are computed numerically from tabulated rank-3 values.

use super::{cpow, SphericalParamsC, TorusPointC};
use crate::error::{Error, Result};
use crate::mb::{
    eval_mb_weighted, eval_mb_with, find_contour_with, EvalOptions, GammaFactor, LinearConstraint,
    MBIntegrand, Rational, WeightFn,
};
use crate::quad::{tree_sum, Grid1};
use crate::scalar::{c, Complex, LogComplex};
use crate::special::{bessel_k, gamma_c};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

/// Rank-2 base case `f_mu(x) = x^(mu_1 + mu_2) K_(mu_1 - mu_2)(4 pi x)`.
pub(crate) fn f_rank2(mu: &[Complex], x: f64) -> Result<Complex> {
    debug_assert_eq!(mu.len(), 2);
    let k = bessel_k(mu[0] - mu[1], 4.0 * PI * x)?;
    Ok(cpow(x, mu[0] + mu[1]) * k)
}

/// The Ishii-Stade integrand for rank `n >= 3`, over the variables
/// `(z_1, ..., z_{n-2}, s_1, ..., s_{n-1})` in that order. For `n = 3` the
/// rank-2 Mellin factor is included in closed form, making the integrand a
/// pure Gamma product; for `n >= 4` the Mellin factor must be supplied as a
/// numeric weight over the leading `n - 2` variables.
pub(crate) fn ishii_stade_integrand(
    params: &SphericalParamsC,
    a: &TorusPointC,
) -> Result<MBIntegrand> {
    let n = params.rank();
    debug_assert!(n >= 3);
    let nvars = (n - 2) + (n - 1);
    let nu = params.nu();
    let nu1 = nu[0];
    let tilde = params.nu_tilde();
    let tilde_sum = tilde.nu_sum();

    let zero = Rational::from_integer(0);
    let half = Rational::new(1, 2);
    let z_idx = |i: usize| i - 1; // z_i, 1 <= i <= n-2
    let s_idx = |j: usize| (n - 2) + (j - 1); // s_j, 1 <= j <= n-1

    let mut gammas = Vec::new();
    let coeff = |entries: &[(usize, Rational)]| {
        let mut v = vec![zero; nvars];
        for (i, r) in entries {
            v[*i] = *r;
        }
        v
    };

    for i in 1..=n - 2 {
        // G_C((s_i - z_{i-1})/2 + i nu_1), z_0 = 0
        let mut first = vec![(s_idx(i), half)];
        if i >= 2 {
            first.push((z_idx(i - 1), -half));
        }
        gammas.push(GammaFactor::c_num(i as f64 * nu1, coeff(&first)));
        // G_C((s_i - z_i)/2 + i nu_1)
        gammas.push(GammaFactor::c_num(
            i as f64 * nu1,
            coeff(&[(s_idx(i), half), (z_idx(i), -half)]),
        ));
    }
    // Last pair, j = n-1.
    gammas.push(GammaFactor::c_num(
        (n - 1) as f64 * nu1,
        coeff(&[(s_idx(n - 1), half), (z_idx(n - 2), -half)]),
    ));
    gammas.push(GammaFactor::c_num(
        tilde_sum + (n - 1) as f64 * nu1,
        coeff(&[(s_idx(n - 1), half)]),
    ));

    let mut prefactor = LogComplex::ONE;
    if n == 3 {
        // Closed rank-2 Mellin factor: 2^(-4) G_C(z/2 + mu_1) G_C(z/2 + mu_2).
        let mu = tilde.nu();
        gammas.push(GammaFactor::c_num(mu[0], coeff(&[(z_idx(1), half)])));
        gammas.push(GammaFactor::c_num(mu[1], coeff(&[(z_idx(1), half)])));
        prefactor = LogComplex::new(-(16f64.ln()), 0.0);
    }

    let powers = (1..=n - 1)
        .map(|j| {
            let mut v = vec![zero; nvars];
            v[s_idx(j)] = Rational::from_integer(-1);
            crate::mb::PowerFactor::new(a.a()[j - 1], c(0.0, 0.0), v)
        })
        .collect();

    MBIntegrand::new(nvars, prefactor, gammas, powers)
}

/// Convergence-tube lower bounds for the rank-3 Mellin transform: the
/// rightmost pole locations in each variable.
fn rank3_tube(mu: &[Complex]) -> [f64; 2] {
    let p1 = mu
        .iter()
        .map(|m| -2.0 * m.re)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut p2 = f64::NEG_INFINITY;
    for i in 0..3 {
        for j in i + 1..3 {
            p2 = p2.max(-2.0 * (mu[i].re + mu[j].re));
        }
    }
    [p1, p2]
}

/// Tabulated rank-3 values on a logarithmic grid with the trapezoid
/// weights baked in, built once per parameter and then read concurrently.
struct Rank3Table {
    grid: Grid1,
    /// Row-major over `(u_1, u_2)`; entry = `f(e^{u_1}, e^{u_2}) w_1 w_2 h^2`.
    weighted: Vec<Complex>,
}

impl Rank3Table {
    /// Build the whole grid in one pass: the Gamma factors do not depend on
    /// the torus point, so one shared contour serves every node and the
    /// power factors reduce to per-axis exponential tables.
    fn build(params: &SphericalParamsC, _tol: f64) -> Result<Rank3Table> {
        // The u-step must resolve e^{i Im(z) u} for the largest |Im z| the
        // rank-4 contours use; 0.05 is comfortable up to |Im z| ~ 25.
        let g = Grid1::span(-14.0, 2.0, 0.05);
        let dummy = TorusPointC::new(vec![1.0, 1.0])?;
        let integrand = ishii_stade_integrand(params, &dummy)?;
        let contour = crate::mb::find_contour(&integrand, 0.4)?;
        let (h_t, height) = (0.1f64, 18.0f64);
        let t_grid = Grid1::symmetric(height, h_t);
        let sig = &contour.sigma; // (z, s_1, s_2)

        let tilde = params.nu_tilde();
        let nu1 = params.nu()[0];
        let log_pair = |a1: Complex, a2: Complex| -> Complex {
            crate::special::log_gamma_unchecked(a1)
                + crate::special::log_gamma_unchecked(a2)
                + 2.0 * c(std::f64::consts::LN_2, 0.0)
                - (a1 + a2) * (2.0 * std::f64::consts::PI).ln()
        };

        // Power tables e^{-s_j(k_t) u_i}, shared by every z node.
        let mut pow1 = vec![c(0.0, 0.0); t_grid.n * g.n];
        let mut pow2 = vec![c(0.0, 0.0); t_grid.n * g.n];
        for kt in 0..t_grid.n {
            let s1 = c(sig[1], t_grid.node(kt));
            let s2 = c(sig[2], t_grid.node(kt));
            for i in 0..g.n {
                let u = g.node(i);
                pow1[kt * g.n + i] = (-s1 * u).exp();
                pow2[kt * g.n + i] = (-s2 * u).exp();
            }
        }

        let weight = h_t / (2.0 * std::f64::consts::PI);
        let mut vals = vec![c(0.0, 0.0); g.n * g.n];
        let mut s1_acc = vec![c(0.0, 0.0); g.n];
        let mut s2_acc = vec![c(0.0, 0.0); g.n];
        for kz in 0..t_grid.n {
            let z = c(sig[0], t_grid.node(kz));
            let mf = (log_pair(z / 2.0 + tilde.nu()[0], z / 2.0 + tilde.nu()[1])).exp() / 16.0;
            s1_acc.iter_mut().for_each(|v| *v = c(0.0, 0.0));
            s2_acc.iter_mut().for_each(|v| *v = c(0.0, 0.0));
            for kt in 0..t_grid.n {
                let s1 = c(sig[1], t_grid.node(kt));
                let s2 = c(sig[2], t_grid.node(kt));
                let g1 = (log_pair(s1 / 2.0 + nu1, (s1 - z) / 2.0 + nu1)).exp();
                let g2 = (log_pair(
                    (s2 - z) / 2.0 + 2.0 * nu1,
                    s2 / 2.0 + tilde.nu_sum() + 2.0 * nu1,
                ))
                .exp();
                let row1 = &pow1[kt * g.n..(kt + 1) * g.n];
                let row2 = &pow2[kt * g.n..(kt + 1) * g.n];
                for i in 0..g.n {
                    s1_acc[i] += g1 * row1[i];
                    s2_acc[i] += g2 * row2[i];
                }
            }
            for i in 0..g.n {
                let left = weight * weight * mf * s1_acc[i];
                let row = &mut vals[i * g.n..(i + 1) * g.n];
                for (j, slot) in row.iter_mut().enumerate() {
                    *slot += left * s2_acc[j];
                }
            }
        }
        // Bake the Mellin quadrature weights: h per axis, half at the ends.
        let hq = g.step;
        for i in 0..g.n {
            let wi = if i == 0 || i == g.n - 1 { 0.5 } else { 1.0 };
            for j in 0..g.n {
                let wj = if j == 0 || j == g.n - 1 { 0.5 } else { 1.0 };
                vals[i * g.n + j] *= weight * wi * wj * hq * hq;
            }
        }
        Ok(Rank3Table {
            grid: g,
            weighted: vals,
        })
    }

    /// `int int f(a) a_1^{z_1} a_2^{z_2} d*a` from the weighted table.
    fn mellin(&self, z: &[Complex]) -> Complex {
        let g = self.grid;
        let row = self.row(z[0]);
        Rank3Table::dot(&row, z[1], g)
    }

    /// `row(z_1)[j] = sum_i e^{z_1 u_i} T[i][j]`, the expensive half of the
    /// Mellin sum; cached per contour node by [`MellinWeight`].
    fn row(&self, z1: Complex) -> Vec<Complex> {
        let g = self.grid;
        let mut row = vec![c(0.0, 0.0); g.n];
        for i in 0..g.n {
            let w1 = (z1 * g.node(i)).exp();
            let tr = &self.weighted[i * g.n..(i + 1) * g.n];
            for (slot, t) in row.iter_mut().zip(tr) {
                *slot += w1 * t;
            }
        }
        row
    }

    fn dot(row: &[Complex], z2: Complex, g: Grid1) -> Complex {
        let vals: Vec<Complex> = row
            .iter()
            .enumerate()
            .map(|(j, r)| *r * (z2 * g.node(j)).exp())
            .collect();
        tree_sum(&vals)
    }
}

fn rank3_cache() -> &'static Mutex<HashMap<[u64; 6], Arc<Rank3Table>>> {
    static CACHE: OnceLock<Mutex<HashMap<[u64; 6], Arc<Rank3Table>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn rank3_table(params: &SphericalParamsC, tol: f64) -> Result<Arc<Rank3Table>> {
    let mut key = [0u64; 6];
    for (i, v) in params.nu().iter().enumerate() {
        key[2 * i] = v.re.to_bits();
        key[2 * i + 1] = v.im.to_bits();
    }
    if let Some(hit) = rank3_cache().lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let table = Arc::new(Rank3Table::build(params, tol)?);
    rank3_cache()
        .lock()
        .unwrap()
        .entry(key)
        .or_insert_with(|| table.clone());
    Ok(rank3_table_lookup(&key))
}

fn rank3_table_lookup(key: &[u64; 6]) -> Arc<Rank3Table> {
    rank3_cache().lock().unwrap().get(key).unwrap().clone()
}

/// Mellin transform of the spherical function of the given rank, evaluated
/// at `z` (one entry per variable, `rank - 1` of them).
///
/// * rank 1: the constant `1` (empty-integral convention, so the rank-2
///   case of the minimal-type formula reads off as a pure `s`-integral);
/// * rank 2: the closed two-factor form `2^(-4) G_C(z/2+mu_1) G_C(z/2+mu_2)`;
/// * rank 3: numerical Mellin quadrature over tabulated rank-3 values.
pub fn mellin_f_spherical(params: &SphericalParamsC, z: &[Complex]) -> Result<Complex> {
    let rank = params.rank();
    if z.len() + 1 != rank {
        return Err(Error::LengthMismatch {
            expected: rank.saturating_sub(1),
            got: z.len(),
        });
    }
    match rank {
        1 => Ok(c(1.0, 0.0)),
        2 => {
            let mu = params.nu();
            let bound = (-2.0 * mu[0].re).max(-2.0 * mu[1].re);
            if z[0].re <= bound {
                return Err(Error::Domain(format!(
                    "Mellin argument Re z = {} outside the convergence tube (> {bound})",
                    z[0].re
                )));
            }
            let g = gamma_c(z[0] / 2.0 + mu[0])?.mul(gamma_c(z[0] / 2.0 + mu[1])?);
            Ok(g.to_complex() / 16.0)
        }
        3 => {
            let tube = rank3_tube(params.nu());
            for (zi, lo) in z.iter().zip(tube) {
                if zi.re <= lo + 0.05 {
                    return Err(Error::Domain(format!(
                        "Mellin argument Re z = {} outside the convergence tube (> {lo})",
                        zi.re
                    )));
                }
            }
            let table = rank3_table(params, 1e-4)?;
            Ok(table.mellin(z))
        }
        r => Err(Error::UnsupportedRank(r)),
    }
}

struct MellinWeight {
    table: Arc<Rank3Table>,
    rows: std::sync::RwLock<HashMap<[u64; 2], Arc<Vec<Complex>>>>,
}

impl MellinWeight {
    fn new(table: Arc<Rank3Table>) -> Self {
        MellinWeight {
            table,
            rows: std::sync::RwLock::new(HashMap::new()),
        }
    }
}

impl WeightFn for MellinWeight {
    fn prefix_vars(&self) -> usize {
        2
    }
    fn eval(&self, z: &[Complex]) -> Complex {
        let key = [z[0].re.to_bits(), z[0].im.to_bits()];
        let cached = self.rows.read().unwrap().get(&key).cloned();
        let row = match cached {
            Some(r) => r,
            None => {
                let r = Arc::new(self.table.row(z[0]));
                self.rows
                    .write()
                    .unwrap()
                    .entry(key)
                    .or_insert_with(|| r.clone())
                    .clone()
            }
        };
        Rank3Table::dot(&row, z[1], self.table.grid)
    }
}

/// Spherical Whittaker function `f_nu(a)` for rank `2 <= n <= 4`.
pub fn f_spherical(params: &SphericalParamsC, a: &TorusPointC, tol: f64) -> Result<Complex> {
    let n = params.rank();
    if n > 4 {
        return Err(Error::UnsupportedRank(n));
    }
    if n < 2 {
        return Err(Error::Domain("spherical evaluation needs rank >= 2".into()));
    }
    if a.len() != n - 1 {
        return Err(Error::LengthMismatch {
            expected: n - 1,
            got: a.len(),
        });
    }
    match n {
        2 => f_rank2(params.nu(), a.a()[0]),
        3 => {
            let integrand = ishii_stade_integrand(params, a)?;
            let mut contour = crate::mb::find_contour(&integrand, 0.5)?;
            contour.height = crate::settings::mb_height_or(26.0);
            let contour = crate::mb::condition_contour(&integrand, &contour, 0.5);
            let opts = EvalOptions::with_rtol((tol * 0.3).clamp(1e-12, 1e-2));
            let (v, _) = eval_mb_with(&integrand, &contour, &opts)?;
            Ok(v)
        }
        4 => {
            let integrand = ishii_stade_integrand(params, a)?;
            let tilde = params.nu_tilde();
            let tube = rank3_tube(tilde.nu());
            let nvars = integrand.nvars;
            let extra: Vec<LinearConstraint> = (0..2)
                .map(|i| {
                    let mut coeffs = vec![0.0; nvars];
                    coeffs[i] = 1.0;
                    LinearConstraint {
                        coeffs,
                        min: tube[i] + 0.6,
                    }
                })
                .collect();
            // Rank 4 is supported at smoke precision: the tabulated rank-3
            // Mellin factor carries absolute noise near 1e-14, so values far
            // smaller than that cannot be resolved and the tolerance floors
            // at 1e-2. Every variable keeps a decay rate >= pi/4, so the
            // fixed height 12 leaves truncation tails near 1e-9.
            let coarse = tol.max(1e-2);
            let contour = find_contour_with(&integrand, 0.5, &extra, 0.2, 12.0)?;
            let weight = MellinWeight::new(rank3_table(&tilde, coarse * 0.3)?);
            let mut opts = EvalOptions::with_rtol(coarse);
            opts.max_step_refinements = 2;
            opts.max_height_growth = 0;
            let (v, _) = eval_mb_weighted(&integrand, &contour, &opts, &weight)?;
            Ok(v)
        }
        _ => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::Grid1;

    #[test]
    fn rank2_base_at_zero_parameter() {
        // f_(0,0)(1) = K_0(4 pi)
        let p = SphericalParamsC::new(vec![c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let a = TorusPointC::new(vec![1.0]).unwrap();
        let v = f_spherical(&p, &a, 1e-10).unwrap();
        let k = bessel_k(c(0.0, 0.0), 4.0 * PI).unwrap();
        assert!((v - k).norm() <= 1e-12 * k.norm());
    }

    #[test]
    fn rank2_symmetric_in_nu() {
        let p1 = SphericalParamsC::new(vec![c(0.3, 0.0), c(0.0, -0.1)]).unwrap();
        let p2 = SphericalParamsC::new(vec![c(0.0, -0.1), c(0.3, 0.0)]).unwrap();
        let a = TorusPointC::new(vec![0.7]).unwrap();
        let v1 = f_spherical(&p1, &a, 1e-10).unwrap();
        let v2 = f_spherical(&p2, &a, 1e-10).unwrap();
        assert!((v1 - v2).norm() <= 1e-10 * v1.norm());
    }

    #[test]
    fn mellin_rank1_is_one() {
        let p = SphericalParamsC::new(vec![c(0.4, 0.1)]).unwrap();
        assert_eq!(mellin_f_spherical(&p, &[]).unwrap(), c(1.0, 0.0));
    }

    /// Quadrature oracle for the rank-2 Mellin transform.
    fn mellin_rank2_quadrature(mu: [Complex; 2], z: Complex) -> Complex {
        let g = Grid1::span(-30.0, 2.2, 0.02);
        crate::quad::trapezoid(g, |u| {
            let x = u.exp();
            cpow(x, z) * f_rank2(&mu, x).unwrap()
        })
    }

    #[test]
    fn mellin_rank2_spot_value() {
        // mu = (0, 0), z = 2: integral a^2 K_0(4 pi a) d*a = 1/(16 pi^2)
        let p = SphericalParamsC::new(vec![c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let v = mellin_f_spherical(&p, &[c(2.0, 0.0)]).unwrap();
        let expect = 1.0 / (16.0 * PI * PI);
        assert!((v - c(expect, 0.0)).norm() <= 1e-12 * expect);
        let q = mellin_rank2_quadrature([c(0.0, 0.0), c(0.0, 0.0)], c(2.0, 0.0));
        assert!((v - q).norm() <= 1e-9 * expect, "closed {v} vs quad {q}");
    }

    #[test]
    fn mellin_rank2_closed_form_vs_quadrature() {
        let cases = [
            ([c(0.2, 0.0), c(-0.1, 0.0)], c(1.7, 0.0)),
            ([c(0.0, 0.3), c(0.0, -0.3)], c(2.3, 0.4)),
            ([c(0.15, 0.1), c(-0.05, -0.2)], c(1.2, -0.6)),
            ([c(0.0, 0.0), c(0.25, 0.0)], c(3.0, 1.0)),
        ];
        for (mu, z) in cases {
            let p = SphericalParamsC::new(mu.to_vec()).unwrap();
            let closed = mellin_f_spherical(&p, &[z]).unwrap();
            let quad = mellin_rank2_quadrature(mu, z);
            assert!(
                (closed - quad).norm() <= 1e-8 * closed.norm(),
                "mu = {mu:?}, z = {z}: closed {closed} vs quad {quad}"
            );
        }
    }

    #[test]
    fn mellin_rank2_tube_enforced() {
        let p = SphericalParamsC::new(vec![c(0.5, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(mellin_f_spherical(&p, &[c(-0.1, 0.0)]).is_err());
    }

    #[test]
    fn rank3_weyl_symmetry() {
        let a = TorusPointC::new(vec![1.0, 1.0]).unwrap();
        let base = SphericalParamsC::new(vec![c(0.2, 0.0), c(0.0, 0.1), c(-0.2, -0.1)]).unwrap();
        let v0 = f_spherical(&base, &a, 1e-7).unwrap();
        for perm in [[1usize, 0, 2], [2, 1, 0], [1, 2, 0]] {
            let nu: Vec<Complex> = perm.iter().map(|&i| base.nu()[i]).collect();
            let p = SphericalParamsC::new(nu).unwrap();
            let v = f_spherical(&p, &a, 1e-7).unwrap();
            assert!(
                (v - v0).norm() <= 1e-5 * v0.norm(),
                "perm {perm:?}: {v} vs {v0}"
            );
        }
    }

    #[test]
    fn mellin_rank3_weyl_symmetry_and_tube() {
        let z = [c(1.5, 0.3), c(2.5, -0.2)];
        let p1 = SphericalParamsC::new(vec![c(0.1, 0.0), c(0.0, 0.0), c(-0.1, 0.0)]).unwrap();
        let p2 = SphericalParamsC::new(vec![c(-0.1, 0.0), c(0.1, 0.0), c(0.0, 0.0)]).unwrap();
        let v1 = mellin_f_spherical(&p1, &z).unwrap();
        let v2 = mellin_f_spherical(&p2, &z).unwrap();
        assert!(
            (v1 - v2).norm() <= 1e-4 * v1.norm(),
            "v1 = {v1}, v2 = {v2}"
        );
        // outside the convergence tube
        assert!(mellin_f_spherical(&p1, &[c(0.1, 0.0), c(2.0, 0.0)]).is_err());
    }

    #[test]
    fn rank4_weyl_symmetry_smoke() {
        // Coarse-tolerance regime: the tabulated Mellin factor limits rank 4
        // to values well above its noise floor.
        let a = TorusPointC::new(vec![0.4, 0.4, 0.4]).unwrap();
        let p1 = SphericalParamsC::new(vec![
            c(0.15, 0.0),
            c(0.05, 0.0),
            c(-0.05, 0.0),
            c(-0.15, 0.0),
        ])
        .unwrap();
        let p2 = SphericalParamsC::new(vec![
            c(0.05, 0.0),
            c(0.15, 0.0),
            c(-0.15, 0.0),
            c(-0.05, 0.0),
        ])
        .unwrap();
        let v1 = f_spherical(&p1, &a, 1e-2).unwrap();
        let v2 = f_spherical(&p2, &a, 1e-2).unwrap();
        assert!((v1 - v2).norm() <= 1e-2 * v1.norm(), "v1 = {v1}, v2 = {v2}");
        assert!(matches!(
            f_spherical(
                &SphericalParamsC::new(vec![c(0.0, 0.0); 5]).unwrap(),
                &TorusPointC::new(vec![1.0; 4]).unwrap(),
                1e-2
            ),
            Err(crate::error::Error::UnsupportedRank(5))
        ));
    }

    #[test]
    fn rank2_positive_for_real_data() {
        let p = SphericalParamsC::new(vec![c(0.4, 0.0), c(-0.15, 0.0)]).unwrap();
        for &x in &[0.3, 1.0, 2.5] {
            let a = TorusPointC::new(vec![x]).unwrap();
            let v = f_spherical(&p, &a, 1e-10).unwrap();
            assert!(v.re > 0.0 && v.im.abs() < 1e-12 * v.re);
        }
    }
}
