//! Initial-value problems for linear fractional equations with constant
//! coefficients, solved as
//!
//! ```text
//! y(t) = Σ_k b_k ψ_k(t) + ∫_0^t G(t - τ) f(τ) dτ
//! ```
//!
//! and checked by substituting the gridded solution back into the equation
//! with the Grünwald-Letnikov oracle.

use crate::error::{domain, FracError, Result};
use crate::fracops::{gl_derivative_with_start, FracOrder, SampledFunction};
use crate::greens::{EquationKind, FracEquation, GreensEval, Numerators, ORDER_TOL};
use crate::quad;
use crate::series::SeriesControl;

/// Initial values `b_1, ..., b_n`. Their meaning depends on the equation
/// kind, see [`FracEquation::ic_numerators`].
#[derive(Debug, Clone, PartialEq)]
pub struct InitialData {
    pub b: Vec<f64>,
}

impl InitialData {
    pub fn new(b: Vec<f64>) -> Self {
        InitialData { b }
    }

    pub fn zero(n: usize) -> Self {
        InitialData { b: vec![0.0; n] }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.b.iter().all(|&b| b == 0.0)
    }
}

/// Right-hand side `f(t)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Forcing {
    Zero,
    Constant(f64),
    /// `t^μ`, `μ > -1`.
    Power(f64),
    /// `sin(ω t)`.
    Sin(f64),
    /// Linear interpolation of samples; held at the first sample before it.
    Sampled(SampledFunction),
}

impl Forcing {
    pub fn validate(&self) -> Result<()> {
        match self {
            Forcing::Constant(c) if !c.is_finite() => Err(domain("c", *c, "must be finite")),
            Forcing::Power(mu) if !(*mu > -1.0) || !mu.is_finite() => {
                Err(domain("mu", *mu, "power forcing needs mu > -1"))
            }
            Forcing::Sin(w) if !w.is_finite() => Err(domain("omega", *w, "must be finite")),
            _ => Ok(()),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Forcing::Zero => 0.0,
            Forcing::Constant(c) => *c,
            Forcing::Power(mu) => t.powf(*mu),
            Forcing::Sin(w) => (w * t).sin(),
            Forcing::Sampled(s) => {
                if t < s.t0() {
                    s.values()[0]
                } else {
                    s.interpolate(t).unwrap_or(f64::NAN)
                }
            }
        }
    }

    fn is_zero(&self) -> bool {
        matches!(self, Forcing::Zero) || matches!(self, Forcing::Constant(c) if *c == 0.0)
    }

    /// Exponents `ν` of the forcing's expansion near `t = 0`, below `cutoff`.
    fn exponents(&self, cutoff: f64) -> Vec<f64> {
        match self {
            Forcing::Zero => vec![],
            Forcing::Constant(c) if *c == 0.0 => vec![],
            Forcing::Constant(_) => vec![0.0],
            Forcing::Power(mu) => vec![*mu],
            Forcing::Sin(_) => (0..)
                .map(|k| (2 * k + 1) as f64)
                .take_while(|&e| e < cutoff)
                .collect(),
            Forcing::Sampled(_) => vec![0.0, 1.0],
        }
    }

    /// `∫_0^a f`, only used on tiny gaps next to the origin.
    fn integral_from_zero(&self, a: f64) -> f64 {
        match self {
            Forcing::Power(mu) => a.powf(mu + 1.0) / (mu + 1.0),
            _ => a * self.eval(0.5 * a),
        }
    }

    /// Whether `f(t - u)` needs grading toward `u = t`.
    fn rough_at_origin(&self) -> bool {
        match self {
            Forcing::Power(mu) => mu.fract() != 0.0,
            Forcing::Sampled(_) => false,
            _ => false,
        }
    }
}

/// Uniform grid `start, start + step, ..., stop`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(domain("step", step, "must be > 0"));
        }
        if !start.is_finite() || !stop.is_finite() || stop < start {
            return Err(domain("stop", stop, "must be finite and >= start"));
        }
        Ok(Grid { start, stop, step })
    }

    /// The grid `h, 2h, ..., T` used for verification.
    pub fn from_step(step: f64, stop: f64) -> Result<Self> {
        Self::new(step, stop, step)
    }

    pub fn len(&self) -> usize {
        ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| self.start + i as f64 * self.step)
            .collect()
    }
}

/// Gridded solution with its components: `y = Σ_k hom[k] + conv`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionTable {
    pub t: Vec<f64>,
    pub y: Vec<f64>,
    /// `b_k ψ_k(t_i)`, one vector per initial value.
    pub homogeneous: Vec<Vec<f64>>,
    pub convolution: Vec<f64>,
}

impl SolutionTable {
    /// Recombines the components in the order used to build `y`.
    pub fn component_sum(&self, i: usize) -> f64 {
        let mut s = 0.0;
        for h in &self.homogeneous {
            s += h[i];
        }
        s + self.convolution[i]
    }
}

/// Laplace image `Y(p) = N(p) / P(p)` of the homogeneous-forcing part.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplaceSymbol {
    /// `(coefficient, exponent)` terms of `N(p)`.
    pub numerator: Vec<(f64, f64)>,
    /// `(coefficient, exponent)` terms of `P(p)`.
    pub denominator: Vec<(f64, f64)>,
}

fn check_ic_len(eq: &FracEquation, ic: &InitialData) -> Result<Option<Numerators>> {
    if ic.is_homogeneous() {
        return Ok(None);
    }
    let nums = eq.ic_numerators()?;
    if nums.len() != ic.b.len() {
        return Err(FracError::InvalidInput(format!(
            "equation takes {} initial values, got {}",
            nums.len(),
            ic.b.len()
        )));
    }
    Ok(Some(nums))
}

pub fn laplace_symbol(eq: &FracEquation, ic: &InitialData) -> Result<LaplaceSymbol> {
    let mut numerator: Vec<(f64, f64)> = Vec::new();
    if let Some(nums) = check_ic_len(eq, ic)? {
        for (b, terms) in ic.b.iter().zip(&nums) {
            if *b == 0.0 {
                continue;
            }
            for &(c, e) in terms {
                match numerator
                    .iter_mut()
                    .find(|(_, e2)| (e2 - e).abs() <= ORDER_TOL)
                {
                    Some(slot) => slot.0 += b * c,
                    None => numerator.push((b * c, e)),
                }
            }
        }
        numerator.retain(|&(c, _)| c != 0.0);
        numerator.sort_by(|a, b| b.1.total_cmp(&a.1));
    }
    Ok(LaplaceSymbol {
        numerator,
        denominator: eq.laplace_descriptor(),
    })
}

pub fn solve_ivp(
    eq: &FracEquation,
    ic: &InitialData,
    f: &Forcing,
    grid: &Grid,
    ctl: &SeriesControl,
) -> Result<SolutionTable> {
    if !(grid.start > 0.0) {
        return Err(domain(
            "start",
            grid.start,
            "solution grids must start at t > 0",
        ));
    }
    f.validate()?;
    let nums = check_ic_len(eq, ic)?;
    let g = GreensEval::new(eq.clone(), *ctl)?;
    let t = grid.points();
    let mut homogeneous = vec![vec![0.0; t.len()]; ic.b.len()];
    if let Some(nums) = &nums {
        for (k, (b, terms)) in ic.b.iter().zip(nums).enumerate() {
            if *b == 0.0 {
                continue;
            }
            for (i, &ti) in t.iter().enumerate() {
                let mut s = 0.0;
                for &(c, e) in terms {
                    s += c * g.eval_shifted(ti, e)?;
                }
                homogeneous[k][i] = b * s;
            }
        }
    }
    let convolution = convolve(&g, f, grid)?;
    let mut table = SolutionTable {
        y: vec![0.0; t.len()],
        t,
        homogeneous,
        convolution,
    };
    for i in 0..table.t.len() {
        table.y[i] = table.component_sum(i);
    }
    Ok(table)
}

const GAP: f64 = 1e-10;
const GRADING: f64 = 0.15;

/// `(G ⋆ f)(t) = ∫_0^t G(u) f(t - u) du` on every grid point.
///
/// Gauss-Legendre panels graded geometrically toward `u = 0` absorb the
/// `u^{β_n - 1}` singularity of `G`; on the remaining gap `[0, a]` the
/// forcing is frozen at `f(t)` and `G` is integrated exactly as `D^{-1} G(a)`.
pub fn convolve(g: &GreensEval, f: &Forcing, grid: &Grid) -> Result<Vec<f64>> {
    f.validate()?;
    let points = grid.points();
    if f.is_zero() {
        return Ok(vec![0.0; points.len()]);
    }
    if let Forcing::Sampled(s) = f {
        if s.end() < grid.stop * (1.0 - 1e-9) {
            return Err(FracError::InvalidInput(format!(
                "sampled forcing ends at {}, before the grid end {}",
                s.end(),
                grid.stop
            )));
        }
    }
    points.iter().map(|&t| convolve_at(g, f, t)).collect()
}

fn convolve_at(g: &GreensEval, f: &Forcing, t: f64) -> Result<f64> {
    if t <= 0.0 {
        return Ok(0.0);
    }
    let mut integrand = |u: f64| -> Result<f64> { Ok(g.eval(u)? * f.eval(t - u)) };
    let half = 0.5 * t;
    let lower = quad::graded(&mut integrand, 0.0, half, GRADING, GAP)?;
    let upper = if f.rough_at_origin() {
        let mut flipped = |v: f64| integrand(t - v);
        let a = half * GAP;
        quad::graded(&mut flipped, 0.0, half, GRADING, GAP)?
            + g.eval(t - a)? * f.integral_from_zero(a)
    } else {
        quad::panel(&mut integrand, half, 0.75 * t)? + quad::panel(&mut integrand, 0.75 * t, t)?
    };
    let gap = f.eval(t) * g.eval_shifted(half * GAP, -1.0)?;
    Ok(lower + upper + gap)
}

/// Options for [`verify_solution`].
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    /// Pass threshold for the maximum residual.
    pub threshold: f64,
    /// Residuals are measured on `t >= t_min`.
    pub t_min: f64,
    /// Pass threshold for the initial-value functional errors.
    pub ic_threshold: f64,
    /// Whether initial-value functionals are estimated and checked.
    pub check_ics: bool,
    /// Start exponents for the oracle; derived from the problem when `None`.
    pub start_exponents: Option<Vec<f64>>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            threshold: 1e-2,
            t_min: 0.1,
            ic_threshold: 5e-2,
            check_ics: true,
            start_exponents: None,
        }
    }
}

/// Result of substituting a gridded solution into its equation.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub max_residual: f64,
    pub rms_residual: f64,
    /// Residual at every grid point (`NaN` below `t_min`).
    pub residuals: Vec<f64>,
    /// `|estimated b_k - b_k|` per initial value (empty when not checked).
    pub ic_errors: Vec<f64>,
    pub threshold: f64,
    pub passed: bool,
}

/// Exponents `ν` with `y(t) ~ Σ c_ν t^ν` near zero, below `cutoff`, for the
/// solution of the given problem.
pub fn solution_exponents(
    eq: &FracEquation,
    ic: &InitialData,
    f: &Forcing,
    cutoff: f64,
) -> Result<Vec<f64>> {
    let lead = eq.leading().order;
    let gens: Vec<f64> = eq.terms()[1..].iter().map(|t| lead - t.order).collect();
    let mut bases = Vec::new();
    if let Some(nums) = check_ic_len(eq, ic)? {
        for (b, terms) in ic.b.iter().zip(&nums) {
            if *b != 0.0 {
                bases.extend(terms.iter().map(|&(_, e)| lead - 1.0 - e));
            }
        }
    }
    if !f.is_zero() {
        bases.extend(f.exponents(cutoff).into_iter().map(|e| e + lead));
    }
    let mut out = Vec::new();
    for b in bases {
        semigroup(b, &gens, cutoff, &mut out);
    }
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    Ok(out)
}

fn semigroup(base: f64, gens: &[f64], cutoff: f64, out: &mut Vec<f64>) {
    if base >= cutoff || out.len() > 10_000 {
        return;
    }
    if !out.iter().any(|e| (e - base).abs() < 1e-9) {
        out.push(base);
    }
    for &g in gens {
        if g > ORDER_TOL {
            semigroup(base + g, gens, cutoff, out);
        }
    }
}

/// Start exponents actually used by the oracle at one stage: the expansion
/// exponents below 1 (plus 0 for the unknown value at the origin), thinned
/// so that nearly equal exponents do not make the correction ill-posed.
fn stage_exponents(all: &[f64]) -> Vec<f64> {
    const MAX: usize = 4;
    const SEP: f64 = 0.02;
    let mut picked: Vec<f64> = Vec::new();
    let mut cand: Vec<f64> = all.iter().copied().filter(|&e| e < 1.0 - 1e-9).collect();
    cand.push(0.0);
    cand.sort_by(f64::total_cmp);
    for e in cand {
        if picked.len() < MAX && picked.iter().all(|p| (p - e).abs() > SEP) {
            picked.push(e);
        }
    }
    picked
}

/// Exponents after applying `D^α` termwise; terms hit by a pole of Γ vanish.
fn shift_exponents(all: &[f64], alpha: f64) -> Vec<f64> {
    all.iter()
        .copied()
        .filter(|&nu| {
            let x = nu + 1.0 - alpha;
            x > 0.5 || (x - x.round()).abs() > 1e-9
        })
        .map(|nu| nu - alpha)
        .collect()
}

struct Staged {
    values: SampledFunction,
    exponents: Vec<f64>,
}

impl Staged {
    fn apply(&self, order: f64) -> Result<Staged> {
        if order.abs() <= ORDER_TOL {
            return Ok(Staged {
                values: self.values.clone(),
                exponents: self.exponents.clone(),
            });
        }
        let exps = stage_exponents(&self.exponents);
        if exps.iter().any(|&e| e <= -1.0) {
            return Err(FracError::SingularityTooStrong {
                exponent: exps[0] + 1.0,
                order,
            });
        }
        let v = gl_derivative_with_start(&self.values, FracOrder::new(order)?, &exps)?;
        Ok(Staged {
            values: SampledFunction::new(0.0, self.values.h(), v)?,
            exponents: shift_exponents(&self.exponents, order),
        })
    }
}

/// Substitutes the tabulated solution into the equation with the
/// Grünwald-Letnikov oracle (sequential derivatives composed factor by
/// factor) and estimates the initial-value functionals.
///
/// The table must sit on the grid `h, 2h, ..., Nh`. Stages whose expansion
/// has a non-integrable power make the report fail with infinite residuals.
pub fn verify_solution(
    eq: &FracEquation,
    ic: &InitialData,
    f: &Forcing,
    table: &SolutionTable,
    opts: &VerifyOptions,
) -> Result<VerifyReport> {
    let n = table.t.len();
    if n < 8 {
        return Err(FracError::InvalidInput(
            "verification needs at least 8 grid points".into(),
        ));
    }
    let h = table.t[0];
    for (i, &t) in table.t.iter().enumerate() {
        if ((i + 1) as f64 * h - t).abs() > 1e-9 * t.max(1.0) {
            return Err(FracError::InvalidInput(format!(
                "grid must be h, 2h, ...; point {i} is {t}"
            )));
        }
    }
    let lead = eq.leading().order;
    let cutoff = lead + 1.0 + 1e-9;
    let exponents = match &opts.start_exponents {
        Some(e) => e.clone(),
        None => solution_exponents(eq, ic, f, cutoff).unwrap_or_default(),
    };
    let mut values = Vec::with_capacity(n + 1);
    values.push(f64::NAN);
    values.extend_from_slice(&table.y);
    let y = Staged {
        values: SampledFunction::new(0.0, h, values)?,
        exponents,
    };

    match build_operator(eq, &y) {
        Ok(ops) => {
            let mut residuals = vec![f64::NAN; n];
            let (mut max, mut sq, mut cnt) = (0.0f64, 0.0, 0usize);
            for (i, r) in residuals.iter_mut().enumerate() {
                let t = table.t[i];
                if t + 1e-12 < opts.t_min {
                    continue;
                }
                let mut lhs = 0.0;
                for (c, v) in &ops.terms {
                    lhs += c * v[i + 1];
                }
                let res = (lhs - f.eval(t)).abs();
                *r = res;
                max = if res.is_nan() {
                    f64::INFINITY
                } else {
                    max.max(res)
                };
                sq += res * res;
                cnt += 1;
            }
            let rms = if cnt > 0 {
                (sq / cnt as f64).sqrt()
            } else {
                0.0
            };
            let ic_errors = if opts.check_ics {
                ic_functional_errors(eq, ic, &y, &ops)?
            } else {
                Vec::new()
            };
            let passed = cnt > 0
                && max <= opts.threshold
                && ic_errors.iter().all(|&e| e <= opts.ic_threshold);
            Ok(VerifyReport {
                max_residual: max,
                rms_residual: rms,
                residuals,
                ic_errors,
                threshold: opts.threshold,
                passed,
            })
        }
        Err(FracError::SingularityTooStrong { .. }) => Ok(VerifyReport {
            max_residual: f64::INFINITY,
            rms_residual: f64::INFINITY,
            residuals: vec![f64::INFINITY; n],
            ic_errors: Vec::new(),
            threshold: opts.threshold,
            passed: false,
        }),
        Err(e) => Err(e),
    }
}

struct Operator {
    /// `(coefficient, D^{β} y on the grid including t = 0)` per term.
    terms: Vec<(f64, Vec<f64>)>,
    /// Sequential stages `D^{σ_m} y`, `m = 0..n`.
    stages: Vec<Staged>,
}

fn build_operator(eq: &FracEquation, y: &Staged) -> Result<Operator> {
    let mut stages = Vec::new();
    let mut terms = Vec::new();
    match eq.kind() {
        EquationKind::Standard => {
            for t in eq.terms() {
                terms.push((t.coeff, y.apply(t.order)?.values.values().to_vec()));
            }
        }
        EquationKind::Sequential => {
            stages.push(Staged {
                values: y.values.clone(),
                exponents: y.exponents.clone(),
            });
            for &a in eq.components() {
                let next = stages.last().map(|s| s.apply(a)).transpose()?;
                stages.extend(next);
            }
            for t in eq.terms() {
                let v = match eq.ladder_index(t.order) {
                    Some(m) => stages[m + 1].values.values().to_vec(),
                    None if t.order <= ORDER_TOL => y.values.values().to_vec(),
                    None => y.apply(t.order)?.values.values().to_vec(),
                };
                terms.push((t.coeff, v));
            }
        }
    }
    Ok(Operator { terms, stages })
}

/// Limit at `t → 0+` of a staged functional: least-squares fit of
/// `L + Σ c_j t^{δ_j}` on samples `i0, 2 i0, ..., 8 i0`, with the smallest
/// positive expansion exponents `δ_j`.
fn limit_at_zero(v: &Staged, i0: usize) -> f64 {
    let vals = v.values.values();
    let mut deltas: Vec<f64> = Vec::new();
    let mut cand: Vec<f64> = v.exponents.iter().copied().filter(|&e| e > 1e-9).collect();
    cand.sort_by(f64::total_cmp);
    for e in cand {
        if deltas.len() < 3 && deltas.iter().all(|d| (d - e).abs() > 0.02) {
            deltas.push(e);
        }
    }
    let idx: Vec<usize> = (1..=8).map(|k| k * i0).collect();
    let scale = (idx[7] as f64) * v.values.h();
    let m = deltas.len() + 1;
    let mut normal = vec![vec![0.0; m + 1]; m];
    for &i in &idx {
        let x = i as f64 * v.values.h() / scale;
        let row: Vec<f64> = std::iter::once(1.0)
            .chain(deltas.iter().map(|d| x.powf(*d)))
            .collect();
        for r in 0..m {
            for c in 0..m {
                normal[r][c] += row[r] * row[c];
            }
            normal[r][m] += row[r] * vals[i];
        }
    }
    crate::fracops::solve_dense(normal)[0]
}

fn ic_functional_errors(
    eq: &FracEquation,
    ic: &InitialData,
    y: &Staged,
    ops: &Operator,
) -> Result<Vec<f64>> {
    let n = y.values.len() - 1;
    let i0 = (n / 200).max(2);
    if 8 * i0 > n {
        return Ok(Vec::new());
    }
    let nums = match eq.ic_numerators() {
        Ok(nums) => nums,
        Err(_) if ic.is_homogeneous() => return Ok(Vec::new()),
        Err(e) => return Err(e),
    };
    if nums.len() != ic.b.len() {
        return Ok(Vec::new());
    }
    let lead = eq.leading();
    let mut est = Vec::with_capacity(nums.len());
    match eq.kind() {
        EquationKind::Standard => {
            let deriv: Vec<_> = eq.terms().iter().filter(|t| t.order > ORDER_TOL).collect();
            if deriv.len() == 1 {
                for k in 1..=nums.len() {
                    let v = y.apply(deriv[0].order - k as f64)?;
                    est.push(limit_at_zero(&v, i0));
                }
            } else {
                let mut c = vec![0.0; n + 1];
                let mut exps = Vec::new();
                for t in deriv {
                    let v = y.apply(t.order - 1.0)?;
                    for (ci, vi) in c.iter_mut().zip(v.values.values()) {
                        *ci += t.coeff * vi;
                    }
                    exps.extend(v.exponents);
                }
                let c = Staged {
                    values: SampledFunction::new(0.0, y.values.h(), c)?,
                    exponents: exps,
                };
                est.push(limit_at_zero(&c, i0));
            }
        }
        EquationKind::Sequential => {
            let comps = eq.components();
            for (j, &a) in comps.iter().enumerate() {
                let v = ops.stages[j].apply(a - 1.0)?;
                let mut vals = v.values.values().to_vec();
                let mut exps = v.exponents.clone();
                if j + 1 == comps.len() {
                    // Off-ladder terms of order <= 1 are folded into b_n.
                    for t in eq.terms() {
                        if t.order > ORDER_TOL && eq.ladder_index(t.order).is_none() {
                            let w = y.apply(t.order - 1.0)?;
                            for (vi, wi) in vals.iter_mut().zip(w.values.values()) {
                                *vi += t.coeff / lead.coeff * wi;
                            }
                            exps.extend(w.exponents);
                        }
                    }
                }
                let v = Staged {
                    values: SampledFunction::new(0.0, y.values.h(), vals)?,
                    exponents: exps,
                };
                est.push(limit_at_zero(&v, i0));
            }
        }
    }
    Ok(est.iter().zip(&ic.b).map(|(e, b)| (e - b).abs()).collect())
}
