//! Grid evaluation of iterated Mellin-Barnes integrals.
//!
//! Each variable contributes a uniform node set `sigma_v + i k h`,
//! `|k h| <= T`, and the iterated integral becomes a nested trapezoid sum
//! with one factor `h / (2 pi)` per variable. All Gamma factors are
//! evaluated in log scale and combined before exponentiation.
//!
//! The nesting exploits the dependence structure: once the outer variables
//! are bound, factors over disjoint inner variable sets split into
//! independent one-dimensional sums, so the common `z`-outer / `s`-inner
//! integrands cost `O(N_z * N_s)` rather than `O(N_z * N_s^2)` while
//! producing exactly the tensor-grid trapezoid value.
//!
//! Refinement policy: the truncation height doubles until the outer tenth
//! of every node loop carries a negligible share of the absolute mass, then
//! the step is halved (up to the configured budget) until two successive
//! values agree to the requested tolerance. The reported error estimate is
//! the change under the last refinement step.
//!
//! Reductions are pairwise tree sums over the fixed node ordering, so
//! results are bit-identical for every thread count.

use super::{ContourSpec, FactorPosition, GammaKind, MBIntegrand};
use crate::error::{Error, Result};
use crate::quad::tree_sum;
use crate::scalar::{c, Complex, LogComplex};
use crate::special::{gamma_c, log_gamma_unchecked, near_gamma_pole};
use std::f64::consts::PI;

const LN_PI: f64 = 1.144729885849400174143427351353;
const LN_2PI: f64 = 1.837877066409345483560659472811;
const LN_2: f64 = std::f64::consts::LN_2;

/// A numerically supplied factor of the first `prefix_vars` integration
/// variables, e.g. a tabulated Mellin transform feeding a recursion.
pub trait WeightFn: Sync {
    fn prefix_vars(&self) -> usize;
    fn eval(&self, z: &[Complex]) -> Complex;
}

#[derive(Debug, Clone)]
pub struct EvalOptions {
    /// Relative tolerance the refinement must reach.
    pub rtol: f64,
    /// Absolute floor below which values count as converged.
    pub atol: f64,
    /// Budget of step-halving refinements.
    pub max_step_refinements: u32,
    /// Budget of height doublings when the tails are not yet negligible.
    pub max_height_growth: u32,
    /// Worker threads for the outermost node loop.
    pub threads: usize,
    /// Guard on the total factor-evaluation count per pass.
    pub max_work: f64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            rtol: 1e-10,
            atol: 1e-300,
            max_step_refinements: 3,
            max_height_growth: 2,
            threads: crate::settings::threads(),
            max_work: 4e8,
        }
    }
}

impl EvalOptions {
    pub fn with_rtol(rtol: f64) -> Self {
        EvalOptions {
            rtol,
            ..Default::default()
        }
    }
}

/// Evaluate with default options.
pub fn eval_mb(integrand: &MBIntegrand, contour: &ContourSpec) -> Result<(Complex, f64)> {
    eval_mb_with(integrand, contour, &EvalOptions::default())
}

pub fn eval_mb_with(
    integrand: &MBIntegrand,
    contour: &ContourSpec,
    opts: &EvalOptions,
) -> Result<(Complex, f64)> {
    eval_impl(integrand, contour, opts, None)
}

/// Evaluate with an extra numeric factor of the leading variables.
pub fn eval_mb_weighted(
    integrand: &MBIntegrand,
    contour: &ContourSpec,
    opts: &EvalOptions,
    weight: &dyn WeightFn,
) -> Result<(Complex, f64)> {
    if weight.prefix_vars() == 0 || weight.prefix_vars() > integrand.nvars {
        return Err(Error::Domain(format!(
            "weight prefix {} out of range for {} variables",
            weight.prefix_vars(),
            integrand.nvars
        )));
    }
    eval_impl(integrand, contour, opts, Some(weight))
}

// ---- factor bookkeeping -------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum FactorRef {
    Gamma(usize),
    Power(usize),
    Weight,
}

struct Factors<'a> {
    integrand: &'a MBIntegrand,
    gamma_coeffs: Vec<Vec<f64>>,
    power_coeffs: Vec<Vec<f64>>,
    ln_bases: Vec<f64>,
    weight: Option<&'a dyn WeightFn>,
}

impl<'a> Factors<'a> {
    fn new(integrand: &'a MBIntegrand, weight: Option<&'a dyn WeightFn>) -> Self {
        Factors {
            integrand,
            gamma_coeffs: integrand.gammas.iter().map(|g| g.coeffs_f64()).collect(),
            power_coeffs: integrand.powers.iter().map(|p| p.coeffs_f64()).collect(),
            ln_bases: integrand.powers.iter().map(|p| p.base.ln()).collect(),
            weight,
        }
    }

    fn deps(&self, f: FactorRef) -> Vec<usize> {
        match f {
            FactorRef::Gamma(i) => self.integrand.gammas[i].deps().collect(),
            FactorRef::Power(i) => self.integrand.powers[i].deps().collect(),
            FactorRef::Weight => (0..self.weight.unwrap().prefix_vars()).collect(),
        }
    }

    fn all(&self) -> Vec<FactorRef> {
        let mut out: Vec<FactorRef> = (0..self.integrand.gammas.len())
            .map(FactorRef::Gamma)
            .chain((0..self.integrand.powers.len()).map(FactorRef::Power))
            .collect();
        if self.weight.is_some() {
            out.push(FactorRef::Weight);
        }
        out
    }

    /// Product of the given factors at a fully determined point want; `None`
    /// when a denominator factor sits on a pole (the reciprocal vanishes).
    fn product(&self, refs: &[FactorRef], point: &[Complex]) -> Result<Option<Complex>> {
        let mut log = c(0.0, 0.0);
        let mut linear = c(1.0, 0.0);
        for &r in refs {
            match r {
                FactorRef::Gamma(i) => {
                    let g = &self.integrand.gammas[i];
                    let mut arg = g.constant;
                    for (cf, p) in self.gamma_coeffs[i].iter().zip(point) {
                        if *cf != 0.0 {
                            arg += cf * p;
                        }
                    }
                    let underlying = match g.kind {
                        GammaKind::R => arg * 0.5,
                        _ => arg,
                    };
                    match g.position {
                        FactorPosition::Numerator => {
                            if near_gamma_pole(underlying, 1e-10) {
                                return Err(Error::PoleOnContour { arg });
                            }
                        }
                        FactorPosition::Denominator => {
                            if near_gamma_pole(underlying, 1e-12) {
                                return Ok(None);
                            }
                        }
                    }
                    let lg = match g.kind {
                        GammaKind::Plain => log_gamma_unchecked(arg),
                        GammaKind::R => log_gamma_unchecked(underlying) - underlying * LN_PI,
                        GammaKind::C => log_gamma_unchecked(arg) + c(LN_2, 0.0) - arg * LN_2PI,
                    };
                    match g.position {
                        FactorPosition::Numerator => log += lg,
                        FactorPosition::Denominator => log -= lg,
                    }
                }
                FactorRef::Power(i) => {
                    let p = &self.integrand.powers[i];
                    let mut expo = p.exponent_constant;
                    for (cf, pt) in self.power_coeffs[i].iter().zip(point) {
                        if *cf != 0.0 {
                            expo += cf * pt;
                        }
                    }
                    log += expo * self.ln_bases[i];
                }
                FactorRef::Weight => {
                    let w = self.weight.unwrap();
                    linear *= w.eval(&point[..w.prefix_vars()]);
                }
            }
        }
        let m = log.re.exp();
        Ok(Some(linear * c(m * log.im.cos(), m * log.im.sin())))
    }
}

// ---- nesting plan -------------------------------------------------------

#[derive(Debug)]
enum Plan {
    /// Bind `var`, multiply the factors completed by it, recurse.
    Var {
        var: usize,
        attached: Vec<FactorRef>,
        child: Option<Box<Plan>>,
    },
    /// Independent components over disjoint variable sets.
    Product(Vec<Plan>),
}

fn build_plan(factors: &Factors, vars: &[usize], refs: &[FactorRef]) -> Plan {
    debug_assert!(!vars.is_empty());
    // Union-find over `vars` through shared factors.
    let idx_of = |v: usize| vars.iter().position(|&u| u == v).unwrap();
    let mut parent: Vec<usize> = (0..vars.len()).collect();
    fn root(parent: &mut Vec<usize>, mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for &r in refs {
        let ds: Vec<usize> = factors
            .deps(r)
            .into_iter()
            .filter(|d| vars.contains(d))
            .collect();
        for w in ds.windows(2) {
            let (a, b) = (
                root(&mut parent, idx_of(w[0])),
                root(&mut parent, idx_of(w[1])),
            );
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut comp_vars: Vec<Vec<usize>> = Vec::new();
    let mut comp_of_root: Vec<Option<usize>> = vec![None; vars.len()];
    for (i, &v) in vars.iter().enumerate() {
        let r = root(&mut parent, i);
        let cid = match comp_of_root[r] {
            Some(cid) => cid,
            None => {
                comp_vars.push(Vec::new());
                comp_of_root[r] = Some(comp_vars.len() - 1);
                comp_vars.len() - 1
            }
        };
        comp_vars[cid].push(v);
    }

    if comp_vars.len() > 1 {
        let children = comp_vars
            .iter()
            .map(|cv| {
                let crefs: Vec<FactorRef> = refs
                    .iter()
                    .copied()
                    .filter(|&r| factors.deps(r).iter().any(|d| cv.contains(d)))
                    .collect();
                build_plan(factors, cv, &crefs)
            })
            .collect();
        return Plan::Product(children);
    }

    // Single component: bind the lowest-index variable; the outer z block
    // precedes the s block in the variable ordering.
    let v = vars[0];
    let rest_vars: Vec<usize> = vars[1..].to_vec();
    let mut attached = Vec::new();
    let mut remaining = Vec::new();
    for &r in refs {
        let has_rest = factors.deps(r).iter().any(|d| rest_vars.contains(d));
        if has_rest {
            remaining.push(r);
        } else {
            attached.push(r);
        }
    }
    let child = if rest_vars.is_empty() {
        debug_assert!(remaining.is_empty());
        None
    } else {
        Some(Box::new(build_plan(factors, &rest_vars, &remaining)))
    };
    Plan::Var {
        var: v,
        attached,
        child,
    }
}

fn plan_work(plan: &Plan, nodes: f64) -> f64 {
    match plan {
        Plan::Var {
            attached, child, ..
        } => {
            let inner = child.as_ref().map_or(0.0, |ch| plan_work(ch, nodes));
            nodes * (attached.len() as f64 + 1.0 + inner)
        }
        Plan::Product(children) => children.iter().map(|ch| plan_work(ch, nodes)).sum(),
    }
}

// ---- grid evaluation ----------------------------------------------------

struct PassCtx<'a> {
    factors: &'a Factors<'a>,
    sigma: &'a [f64],
    step: f64,
    half_nodes: usize, // grid k = -K..=K
    threads: usize,
}

/// Result of evaluating one plan node: the value, the absolute mass sitting
/// in the outer tenth of any node loop of the subtree (propagated through
/// parent weights, so it bounds the truncation loss relative to the final
/// value), and the top-level cancellation ratio `sum |v_k| / |sum v_k|`
/// (which sets the rounding floor below which refinement cannot improve).
#[derive(Clone, Copy, Default)]
struct EvalOut {
    value: Complex,
    tail_abs: f64,
    cancel: f64,
}

fn eval_plan(
    ctx: &PassCtx,
    plan: &Plan,
    point: &mut Vec<Complex>,
    parallel: bool,
    top: bool,
) -> Result<EvalOut> {
    match plan {
        Plan::Product(children) => {
            let mut acc = EvalOut {
                value: c(1.0, 0.0),
                tail_abs: 0.0,
                cancel: 0.0,
            };
            for ch in children {
                let r = eval_plan(ctx, ch, point, parallel, top)?;
                acc.tail_abs = acc.tail_abs * r.value.norm() + r.tail_abs * acc.value.norm();
                acc.value *= r.value;
                acc.cancel = acc.cancel.max(r.cancel);
            }
            Ok(acc)
        }
        Plan::Var {
            var,
            attached,
            child,
        } => {
            let k = ctx.half_nodes as i64;
            let n = (2 * k + 1) as usize;
            let node_value = |idx: usize, point: &mut Vec<Complex>| -> Result<(Complex, f64)> {
                let t = (idx as i64 - k) as f64 * ctx.step;
                point[*var] = c(ctx.sigma[*var], t);
                let scalar = match ctx.factors.product(attached, point)? {
                    Some(v) => v,
                    None => return Ok((c(0.0, 0.0), 0.0)),
                };
                if scalar == c(0.0, 0.0) {
                    return Ok((scalar, 0.0));
                }
                match child {
                    Some(ch) => {
                        let r = eval_plan(ctx, ch, point, false, false)?;
                        Ok((scalar * r.value, scalar.norm() * r.tail_abs))
                    }
                    None => Ok((scalar, 0.0)),
                }
            };

            let vals: Vec<(Complex, f64)> = if parallel && ctx.threads > 1 && n >= 64 {
                let nthreads = ctx.threads.min(n);
                let chunk = n.div_ceil(nthreads);
                let mut out: Vec<(Complex, f64)> = vec![(c(0.0, 0.0), 0.0); n];
                let first_err: Option<Error>;
                {
                    let mut slots: &mut [(Complex, f64)] = &mut out;
                    let mut errs: Vec<Option<Error>> = vec![None; nthreads];
                    std::thread::scope(|scope| {
                        let mut handles = Vec::new();
                        let mut start = 0usize;
                        let mut errs_iter = errs.iter_mut();
                        while start < n {
                            let len = chunk.min(n - start);
                            let (head, rest) = slots.split_at_mut(len);
                            slots = rest;
                            let e_slot = errs_iter.next().unwrap();
                            let base_point = point.clone();
                            let offset = start;
                            handles.push(scope.spawn(move || {
                                let mut p = base_point;
                                for (j, slot) in head.iter_mut().enumerate() {
                                    match node_value(offset + j, &mut p) {
                                        Ok(v) => *slot = v,
                                        Err(e) => {
                                            *e_slot = Some(e);
                                            break;
                                        }
                                    }
                                }
                            }));
                            start += len;
                        }
                        for h in handles {
                            h.join().expect("mb eval worker panicked");
                        }
                    });
                    first_err = errs.into_iter().flatten().next();
                }
                if let Some(e) = first_err {
                    return Err(e);
                }
                out
            } else {
                let mut out = Vec::with_capacity(n);
                for idx in 0..n {
                    out.push(node_value(idx, point)?);
                }
                out
            };

            let weight = ctx.step / (2.0 * PI);
            let band = (n / 10).max(2).min(n);
            let total_abs: f64 = vals.iter().map(|(v, _)| v.norm()).sum();
            // Truncation estimate: the signed sum of the outer tenth tracks
            // the actual remainder (the oscillatory tail cancels); a small
            // fraction of its absolute mass guards the phase-aligned case.
            let band_values: Vec<Complex> = vals[..band]
                .iter()
                .chain(vals[n - band..].iter())
                .map(|(v, _)| *v)
                .collect();
            let band_signed = tree_sum(&band_values).norm();
            let band_abs: f64 = band_values.iter().map(|v| v.norm()).sum();
            let tail_here = band_signed.max(1e-3 * band_abs);
            let child_tail: f64 = vals.iter().map(|(_, t)| t).sum();
            let values: Vec<Complex> = vals.iter().map(|(v, _)| *v).collect();
            let sum = tree_sum(&values) * weight;
            let cancel = if top && total_abs > 0.0 {
                total_abs * weight / sum.norm().max(1e-290)
            } else {
                0.0
            };
            Ok(EvalOut {
                value: sum,
                tail_abs: (tail_here + child_tail) * weight,
                cancel,
            })
        }
    }
}

fn eval_pass(
    factors: &Factors,
    plan: &Plan,
    sigma: &[f64],
    step: f64,
    height: f64,
    opts: &EvalOptions,
) -> Result<EvalOut> {
    let half_nodes = (height / step).floor() as usize;
    let nodes = (2 * half_nodes + 1) as f64;
    let work = plan_work(plan, nodes);
    if work > opts.max_work {
        return Err(Error::Unconverged {
            estimate: f64::INFINITY,
            tolerance: opts.rtol,
        });
    }
    let ctx = PassCtx {
        factors,
        sigma,
        step,
        half_nodes,
        threads: opts.threads.max(1),
    };
    let mut point = vec![c(0.0, 0.0); factors.integrand.nvars];
    let mut out = eval_plan(&ctx, plan, &mut point, true, true)?;
    let pre = factors.integrand.prefactor.to_complex();
    out.value *= pre;
    out.tail_abs *= pre.norm();
    Ok(out)
}

fn eval_impl(
    integrand: &MBIntegrand,
    contour: &ContourSpec,
    opts: &EvalOptions,
    weight: Option<&dyn WeightFn>,
) -> Result<(Complex, f64)> {
    contour.check(integrand)?;
    let factors = Factors::new(integrand, weight);
    let vars: Vec<usize> = (0..integrand.nvars).collect();
    let all_refs = factors.all();
    let (constant_refs, var_refs): (Vec<_>, Vec<_>) = all_refs
        .into_iter()
        .partition(|&r| factors.deps(r).is_empty());
    let plan = build_plan(&factors, &vars, &var_refs);

    let mut step = contour.step;
    let mut height = contour.height;
    let tail_threshold = (opts.rtol * 0.25).clamp(1e-15, 1e-6);

    let dbg = std::env::var("MB_DEBUG").is_ok();
    let mut prev = eval_pass(&factors, &plan, &contour.sigma, step, height, opts)?;
    if dbg {
        eprintln!(
            "pass h={step} T={height}: v={:e} tail={:e} cancel={:e}",
            prev.value.norm(),
            prev.tail_abs,
            prev.cancel
        );
    }
    // The tail bound adds child truncation losses in absolute value, which
    // can be very conservative under cancellation. When it trips, measure
    // the actual effect of doubling the height once; if the value barely
    // moves, keep the cheaper grid and carry the measured change as the
    // truncation error.
    let mut measured_tail: Option<f64> = None;
    for _ in 0..opts.max_height_growth {
        if prev.tail_abs <= tail_threshold * prev.value.norm() {
            break;
        }
        let grown = eval_pass(&factors, &plan, &contour.sigma, step, height * 2.0, opts)?;
        let delta_t = (grown.value - prev.value).norm();
        if dbg {
            eprintln!(
                "grow h={step} T={}: v={:e} tail={:e} delta_t={delta_t:e}",
                height * 2.0,
                grown.value.norm(),
                grown.tail_abs
            );
        }
        if delta_t <= 0.5 * opts.rtol * grown.value.norm() {
            measured_tail = Some(delta_t);
            break;
        }
        height *= 2.0;
        prev = grown;
        measured_tail = None;
    }

    // Factors constant in the integration variables multiply once.
    let mut constant_scale = c(1.0, 0.0);
    if !constant_refs.is_empty() {
        constant_scale =
            match factors.product(&constant_refs, &vec![c(0.0, 0.0); integrand.nvars])? {
                Some(v) => v,
                None => return Ok((c(0.0, 0.0), 0.0)),
            };
    }

    let mut last_err = f64::INFINITY;
    for _ in 0..opts.max_step_refinements {
        step *= 0.5;
        let cur = eval_pass(&factors, &plan, &contour.sigma, step, height, opts)?;
        last_err = (cur.value - prev.value).norm();
        prev = cur;
        if dbg {
            eprintln!(
                "refine h={step} T={height}: v={:e} derr={last_err:e} tail={:e} cancel={:e}",
                prev.value.norm(),
                prev.tail_abs,
                prev.cancel
            );
        }
        // Cancellation among the grid nodes floors the achievable accuracy
        // at roughly machine epsilon times the absolute node mass; the +1
        // covers plain accumulation rounding when there is no cancellation.
        let noise_floor = f64::EPSILON * (1.0 + prev.cancel) * prev.value.norm();
        if last_err
            <= (opts.rtol * prev.value.norm())
                .max(6.0 * noise_floor)
                .max(opts.atol)
        {
            let tail_term = match measured_tail {
                Some(m) => 2.0 * m,
                None => 2.0 * prev.tail_abs,
            };
            // Agreement was only verified down to the requested tolerance;
            // never claim much more than that.
            let estimate = last_err
                .max(tail_term)
                .max(4.0 * noise_floor)
                .max(0.25 * opts.rtol * prev.value.norm());
            return Ok((constant_scale * prev.value, estimate));
        }
    }
    Err(Error::Unconverged {
        estimate: last_err,
        tolerance: opts.rtol * prev.value.norm(),
    })
}

// ---- Barnes' first lemma -------------------------------------------------

/// Both sides of Barnes' first lemma in Gamma_C form:
///
/// ```text
/// lhs = integral Gamma_C(z/2+a) Gamma_C(z/2+b) Gamma_C(-z/2+c) Gamma_C(-z/2+d) dz/(2 pi i)
/// rhs = 4 Gamma_C(a+c) Gamma_C(a+d) Gamma_C(b+c) Gamma_C(b+d) / Gamma_C(a+b+c+d)
/// ```
///
/// with the contour `Re z = 0` separating the two pole families.
pub fn barnes_check(a: Complex, b: Complex, cc: Complex, d: Complex) -> Result<(Complex, Complex)> {
    for (name, p) in [("a", a), ("b", b), ("c", cc), ("d", d)] {
        if !(p.re > 0.0) {
            return Err(Error::Domain(format!(
                "barnes_check requires Re({name}) > 0, got {p}"
            )));
        }
    }
    let half = super::halves(&[1]);
    let mhalf = super::halves(&[-1]);
    let integrand = MBIntegrand::new(
        1,
        LogComplex::ONE,
        vec![
            super::GammaFactor::c_num(a, half.clone()),
            super::GammaFactor::c_num(b, half),
            super::GammaFactor::c_num(cc, mhalf.clone()),
            super::GammaFactor::c_num(d, mhalf),
        ],
        vec![],
    )?;
    // Four Gamma_C factors with coefficients +-1/2 decay like exp(-pi |t|).
    let contour = ContourSpec::new(vec![0.0], 18.0, 0.1);
    let opts = EvalOptions::with_rtol(1e-10);
    let (lhs, _) = eval_mb_with(&integrand, &contour, &opts)?;

    let num = gamma_c(a + cc)?
        .mul(gamma_c(a + d)?)
        .mul(gamma_c(b + cc)?)
        .mul(gamma_c(b + d)?);
    let rhs = 4.0 * num.div(gamma_c(a + b + cc + d)?).to_complex();
    Ok((lhs, rhs))
}
