//! Archimedean Whittaker functions.
//!
//! Over `C`: the Ishii-Stade recursion for spherical functions, the
//! minimal-K-type Mellin-Barnes formula, and direct-quadrature evaluations
//! of the reduced propagation integrals that serve as an independent
//! computational path. Over `R`: the `GL(3)` double Mellin-Barnes formula
//! for generalized principal series and its reduced Hermite/Gaussian
//! integrals.
//!
//! All `f`-values are normalized as `delta_B^(-1/2)` times the Whittaker
//! value at the torus point `t(a) = diag(a_1...a_{n-1}, ..., a_{n-1}, 1)`.

mod gl3r;
mod lemmas;
mod minimal;
mod spherical;

pub use gl3r::{miyazaki_direct, miyazaki_mb};
pub use lemmas::{ishii_stade_consistency, lemma_checks, LemmaReport};
pub use minimal::{whittaker_c_direct, whittaker_c_mb};
pub use spherical::{f_spherical, mellin_f_spherical};

pub(crate) use gl3r::gl3r_integrand_for_tests;
pub(crate) use minimal::glnc_integrand;

use crate::error::{Error, Result};
use crate::scalar::Complex;

/// Spectral parameter of a spherical principal series of `GL(n, C)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalParamsC {
    nu: Vec<Complex>,
}

impl SphericalParamsC {
    pub fn new(nu: Vec<Complex>) -> Result<Self> {
        if nu.is_empty() {
            return Err(Error::Domain("nu must be nonempty".into()));
        }
        Ok(SphericalParamsC { nu })
    }

    pub fn nu(&self) -> &[Complex] {
        &self.nu
    }

    pub fn rank(&self) -> usize {
        self.nu.len()
    }

    /// `|nu| = nu_1 + ... + nu_n`.
    pub fn nu_sum(&self) -> Complex {
        self.nu.iter().sum()
    }

    /// `nu~ = (nu_2 - nu_1, ..., nu_n - nu_1)`, the parameter of the
    /// lower-rank function in the recursion.
    pub fn nu_tilde(&self) -> SphericalParamsC {
        SphericalParamsC {
            nu: self.nu[1..].iter().map(|v| v - self.nu[0]).collect(),
        }
    }
}

/// Parameters `[nu, kappa]` of a principal series of `GL(n, C)` whose
/// angular vector is `(kappa, 0, ..., 0)` with `kappa >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct MinimalTypeParamsC {
    nu: Vec<Complex>,
    kappa: u32,
}

impl MinimalTypeParamsC {
    pub fn new(nu: Vec<Complex>, kappa: u32) -> Result<Self> {
        if nu.len() < 2 {
            return Err(Error::Domain("need rank at least 2".into()));
        }
        Ok(MinimalTypeParamsC { nu, kappa })
    }

    pub fn nu(&self) -> &[Complex] {
        &self.nu
    }

    pub fn kappa(&self) -> u32 {
        self.kappa
    }

    pub fn rank(&self) -> usize {
        self.nu.len()
    }

    pub fn spherical(&self) -> SphericalParamsC {
        SphericalParamsC {
            nu: self.nu.clone(),
        }
    }
}

/// Weight index `ell` with `sum ell_i = kappa`, selecting one weight vector
/// of the minimal K-type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightIndexC {
    ell: Vec<u32>,
}

impl WeightIndexC {
    pub fn new(ell: Vec<u32>) -> Result<Self> {
        if ell.is_empty() {
            return Err(Error::Domain("ell must be nonempty".into()));
        }
        Ok(WeightIndexC { ell })
    }

    pub fn ell(&self) -> &[u32] {
        &self.ell
    }

    pub fn len(&self) -> usize {
        self.ell.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn sum(&self) -> u32 {
        self.ell.iter().sum()
    }

    /// Partial sum `ell~_i = ell_1 + ... + ell_i` (1-based `i`).
    pub fn tilde(&self, i: usize) -> u32 {
        self.ell[..i].iter().sum()
    }

    /// All weight indices of length `n` summing to `kappa`, lexicographic.
    pub fn enumerate(n: usize, kappa: u32) -> Vec<WeightIndexC> {
        fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<WeightIndexC>) {
            if n == 1 {
                cur.push(left);
                out.push(WeightIndexC { ell: cur.clone() });
                cur.pop();
                return;
            }
            for v in 0..=left {
                cur.push(v);
                rec(n - 1, left - v, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, kappa, &mut Vec::new(), &mut out);
        out
    }
}

/// Point of the positive torus in the coordinates `a_1, ..., a_{n-1}`,
/// `t(a) = diag(a_1...a_{n-1}, a_2...a_{n-1}, ..., a_{n-1}, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusPointC {
    a: Vec<f64>,
}

impl TorusPointC {
    pub fn new(a: Vec<f64>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::Domain("torus point must be nonempty".into()));
        }
        if a.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
            return Err(Error::Domain(format!(
                "torus coordinates must be positive: {a:?}"
            )));
        }
        Ok(TorusPointC { a })
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `alpha_i = prod_{j >= i} a_j` for `1 <= i <= n-1`, and `alpha_n = 1`.
    pub fn alphas(&self) -> Vec<f64> {
        let m = self.a.len();
        let mut out = vec![1.0; m + 1];
        for i in (0..m).rev() {
            out[i] = out[i + 1] * self.a[i];
        }
        out
    }

    /// `delta_B^(1/2)(t(a)) = prod_j a_j^(j (n - j))` for `GL(n, C)`.
    pub fn delta_b_half(&self, n: usize) -> f64 {
        debug_assert_eq!(self.a.len() + 1, n);
        self.a
            .iter()
            .enumerate()
            .map(|(j0, aj)| aj.powi(((j0 + 1) * (n - j0 - 1)) as i32))
            .product()
    }
}

/// Parameters of the `GL(3, R)` generalized principal series
/// `(D_kappa (x) |.|^w) x 1` with `kappa >= 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct MiyazakiParams {
    kappa: u32,
    w: Complex,
}

impl MiyazakiParams {
    pub fn new(kappa: u32, w: Complex) -> Result<Self> {
        if kappa < 2 {
            return Err(Error::Domain(format!(
                "discrete series weight must be >= 2, got {kappa}"
            )));
        }
        Ok(MiyazakiParams { kappa, w })
    }

    pub fn kappa(&self) -> u32 {
        self.kappa
    }

    pub fn w(&self) -> Complex {
        self.w
    }
}

/// `base^expo` for positive real base and complex exponent.
pub(crate) fn cpow(base: f64, expo: Complex) -> Complex {
    debug_assert!(base > 0.0);
    let l = expo * base.ln();
    let m = l.re.exp();
    Complex::new(m * l.im.cos(), m * l.im.sin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    #[test]
    fn torus_alphas_and_delta() {
        let a = TorusPointC::new(vec![2.0, 3.0]).unwrap();
        assert_eq!(a.alphas(), vec![6.0, 3.0, 1.0]);
        // n = 3: exponents j(n-j) = 2, 2
        assert!((a.delta_b_half(3) - (2.0f64.powi(2) * 3.0f64.powi(2))).abs() < 1e-12);
    }

    #[test]
    fn weight_index_enumeration() {
        let all = WeightIndexC::enumerate(3, 2);
        assert_eq!(all.len(), 6);
        assert!(all.iter().all(|l| l.sum() == 2));
        let tilde: Vec<u32> = (1..=2).map(|i| all[0].tilde(i)).collect();
        assert_eq!(all[0].ell(), &[0, 0, 2]);
        assert_eq!(tilde, vec![0, 0]);
    }

    #[test]
    fn nu_tilde_shift() {
        let p = SphericalParamsC::new(vec![c(0.2, 0.0), c(0.0, 0.1), c(-0.2, 0.0)]).unwrap();
        let t = p.nu_tilde();
        assert_eq!(t.rank(), 2);
        assert_eq!(t.nu()[0], c(-0.2, 0.1));
        assert_eq!(t.nu()[1], c(-0.4, 0.0));
    }
}
