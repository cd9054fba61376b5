//! Trapezoid quadrature helpers shared by the contour engine and the direct
//! integral oracles.
//!
//! Every integrand handled here is analytic and decays at least
//! exponentially after the relevant substitution, so the plain trapezoid
//! rule converges geometrically in the step size. Summation is always a
//! pairwise tree over a fixed node ordering, which keeps results
//! bit-identical however the node values were produced.

use crate::error::{Error, Result};
use crate::scalar::Complex;

/// Pairwise tree summation over the given (fixed) ordering.
pub fn tree_sum(values: &[Complex]) -> Complex {
    match values.len() {
        0 => Complex::new(0.0, 0.0),
        1 => values[0],
        2..=8 => {
            let mut acc = values[0];
            for v in &values[1..] {
                acc += v;
            }
            acc
        }
        n => {
            let (a, b) = values.split_at(n / 2);
            tree_sum(a) + tree_sum(b)
        }
    }
}

/// A uniform grid `lo, lo + step, ..., lo + (n-1) step`.
#[derive(Debug, Clone, Copy)]
pub struct Grid1 {
    pub lo: f64,
    pub step: f64,
    pub n: usize,
}

impl Grid1 {
    pub fn node(&self, k: usize) -> f64 {
        self.lo + self.step * k as f64
    }

    /// Grid with half the step covering the same interval.
    pub fn refined(&self) -> Grid1 {
        Grid1 {
            lo: self.lo,
            step: 0.5 * self.step,
            n: 2 * self.n - 1,
        }
    }

    /// Symmetric grid on `[-halfwidth, halfwidth]`.
    pub fn symmetric(halfwidth: f64, step: f64) -> Grid1 {
        let m = (halfwidth / step).ceil() as usize;
        Grid1 {
            lo: -(m as f64) * step,
            step,
            n: 2 * m + 1,
        }
    }

    pub fn span(lo: f64, hi: f64, step: f64) -> Grid1 {
        let m = ((hi - lo) / step).ceil().max(1.0) as usize;
        Grid1 { lo, step, n: m + 1 }
    }
}

/// Trapezoid rule on a single grid; endpoint weights are halved.
pub fn trapezoid<F: Fn(f64) -> Complex>(grid: Grid1, f: F) -> Complex {
    let mut vals: Vec<Complex> = (0..grid.n).map(|k| f(grid.node(k))).collect();
    if grid.n >= 2 {
        vals[0] *= 0.5;
        vals[grid.n - 1] *= 0.5;
    }
    tree_sum(&vals) * grid.step
}

/// Iterated trapezoid rule over a tensor grid of up to a few dimensions.
pub fn trapezoid_nd<F: Fn(&[f64]) -> Complex>(grids: &[Grid1], f: F) -> Complex {
    fn rec<F: Fn(&[f64]) -> Complex>(grids: &[Grid1], point: &mut Vec<f64>, f: &F) -> Complex {
        if grids.is_empty() {
            return f(point);
        }
        let g = grids[0];
        let mut vals = Vec::with_capacity(g.n);
        for k in 0..g.n {
            point.push(g.node(k));
            let mut v = rec(&grids[1..], point, f);
            point.pop();
            if k == 0 || k == g.n - 1 {
                v *= 0.5;
            }
            vals.push(v);
        }
        tree_sum(&vals) * g.step
    }
    let mut point = Vec::with_capacity(grids.len());
    rec(grids, &mut point, &f)
}

/// Expand a window `[lo, hi]` outward from `start` until `|f|` drops below
/// `cutoff` at both ends (scanning with the given stride), then pad by one
/// stride. Both directions are capped at `max_radius` from the start.
pub fn scan_window<F: Fn(f64) -> f64>(
    f: F,
    start: f64,
    stride: f64,
    cutoff: f64,
    max_radius: f64,
) -> (f64, f64) {
    let mut hi = start;
    while f(hi) > cutoff && hi - start < max_radius {
        hi += stride;
    }
    let mut lo = start;
    while f(lo) > cutoff && start - lo < max_radius {
        lo -= stride;
    }
    (lo - stride, hi + stride)
}

/// Run `eval` at refinement levels `0, 1, ...` (each level halves every
/// step) until two successive values agree to `rtol` relative. Returns the
/// refined value and the last observed change.
pub fn refine_until<F: FnMut(u32) -> Result<Complex>>(
    mut eval: F,
    rtol: f64,
    max_levels: u32,
) -> Result<(Complex, f64)> {
    let mut prev = eval(0)?;
    for level in 1..=max_levels {
        let cur = eval(level)?;
        let err = (cur - prev).norm();
        if err <= rtol * cur.norm().max(1e-290) {
            return Ok((cur, err));
        }
        prev = cur;
    }
    Err(Error::Unconverged {
        estimate: f64::NAN,
        tolerance: rtol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;
    use std::f64::consts::PI;

    #[test]
    fn gaussian_integral() {
        // integral of exp(-x^2) over R = sqrt(pi)
        let g = Grid1::symmetric(8.0, 0.125);
        let v = trapezoid(g, |x| c((-x * x).exp(), 0.0));
        assert!((v.re - PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn multiplicative_gamma() {
        // integral_0^inf t^3 e^{-t} dt/t = Gamma(3) = 2, via t = e^u
        let g = Grid1::span(-40.0, 8.0, 0.05);
        let v = trapezoid(g, |u| {
            let t = u.exp();
            c(t.powi(3) * (-t).exp(), 0.0)
        });
        assert!((v.re - 2.0).abs() < 1e-12);
    }

    #[test]
    fn tensor_2d() {
        // product of two Gaussians
        let g = Grid1::symmetric(8.0, 0.125);
        let v = trapezoid_nd(&[g, g], |p| c((-(p[0] * p[0] + p[1] * p[1])).exp(), 0.0));
        assert!((v.re - PI).abs() < 1e-12);
    }

    #[test]
    fn window_scan_finds_gaussian_support() {
        let (lo, hi) = scan_window(|x: f64| (-x * x).exp(), 0.0, 0.5, 1e-12, 50.0);
        assert!(lo < -5.0 && hi > 5.0 && lo > -9.0 && hi < 9.0);
    }

    #[test]
    fn tree_sum_matches_naive() {
        let vals: Vec<Complex> = (0..1000).map(|k| c(1.0 / (1.0 + k as f64), 0.1)).collect();
        let t = tree_sum(&vals);
        let n: Complex = vals.iter().sum();
        assert!((t - n).norm() < 1e-10);
    }
}
