//! Fractional Green's functions of linear equations with constant
//! coefficients,
//!
//! ```text
//! a_n D^{β_n} y + a_{n-1} D^{β_{n-1}} y + ... + a_1 D^{β_1} y = f,
//! ```
//!
//! i.e. the inverse Laplace transform of `1 / Σ a_i p^{β_i}`. Every
//! expansion is a sum of terms `c t^{e-1} E^{(m)}_{λ,μ}(z t^λ)`, so the
//! fractional derivative of order `s` (integral when `s < 0`) is obtained
//! termwise by lowering both `e` and `μ` by `s`. That is how the `ψ_k`
//! solutions of the homogeneous equation are evaluated.

use crate::error::{domain, FracError, Result};
use crate::fracops::{FracKernel, LeadingPower};
use crate::gamma::{ln_gamma, reciprocal_gamma};
use crate::series::{OuterSum, SeriesControl};
use crate::special_fn::ml_raw;

/// Default cap on the number of compositions enumerated by [`greens_n_term`].
pub const COMPOSITION_CAP: usize = 1_000_000;

/// Orders closer than this are treated as equal.
pub const ORDER_TOL: f64 = 1e-12;

/// Per initial value, the `(coefficient, exponent)` terms of its numerator.
pub type Numerators = Vec<Vec<(f64, f64)>>;

/// One operator term `coeff · D^{order}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracTerm {
    pub coeff: f64,
    pub order: f64,
}

impl FracTerm {
    pub fn new(coeff: f64, order: f64) -> Self {
        FracTerm { coeff, order }
    }
}

/// How derivatives (and hence initial data) are to be read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquationKind {
    /// Riemann-Liouville derivatives, initial data `D^{α-k} y(0)`.
    Standard,
    /// Composed derivatives `D^{α_k} ... D^{α_1}`, initial data
    /// `D^{σ_k - 1} y(0)` on the ladder of partial sums `σ_k`.
    Sequential,
}

/// Constant-coefficient operator, terms stored in strictly decreasing order.
#[derive(Debug, Clone, PartialEq)]
pub struct FracEquation {
    terms: Vec<FracTerm>,
    kind: EquationKind,
    components: Vec<f64>,
}

impl FracEquation {
    /// Terms with equal orders are merged, zero lower coefficients dropped.
    /// For the sequential kind `components` are the factor orders
    /// `α_1, α_2, ...` (innermost first); when omitted, the distinct positive
    /// orders of the equation are used as the ladder.
    pub fn new(
        terms: Vec<FracTerm>,
        kind: EquationKind,
        components: Option<Vec<f64>>,
    ) -> Result<Self> {
        if terms.is_empty() {
            return Err(FracError::InvalidInput("equation has no terms".into()));
        }
        for t in &terms {
            if !t.coeff.is_finite() {
                return Err(domain("coeff", t.coeff, "must be finite"));
            }
            if !(t.order >= 0.0) || !t.order.is_finite() {
                return Err(domain("order", t.order, "must be finite and >= 0"));
            }
        }
        let mut sorted = terms;
        sorted.sort_by(|a, b| b.order.total_cmp(&a.order));
        let mut merged: Vec<FracTerm> = Vec::new();
        for t in sorted {
            match merged.last_mut() {
                Some(last) if (last.order - t.order).abs() <= ORDER_TOL => last.coeff += t.coeff,
                _ => merged.push(t),
            }
        }
        if merged[0].coeff == 0.0 {
            return Err(domain("coeff", 0.0, "leading coefficient must be nonzero"));
        }
        if !(merged[0].order > 0.0) {
            return Err(domain(
                "order",
                merged[0].order,
                "leading order must be > 0",
            ));
        }
        let lead = merged[0];
        let mut terms = vec![lead];
        terms.extend(merged.into_iter().skip(1).filter(|t| t.coeff != 0.0));

        let components = match kind {
            EquationKind::Standard => {
                if components.is_some() {
                    return Err(FracError::InvalidInput(
                        "component orders apply only to sequential equations".into(),
                    ));
                }
                Vec::new()
            }
            EquationKind::Sequential => {
                let comps = match components {
                    Some(c) => c,
                    None => default_components(&terms)?,
                };
                validate_components(&comps, lead.order)?;
                comps
            }
        };
        Ok(FracEquation {
            terms,
            kind,
            components,
        })
    }

    pub fn standard(terms: Vec<FracTerm>) -> Result<Self> {
        Self::new(terms, EquationKind::Standard, None)
    }

    pub fn sequential(terms: Vec<FracTerm>, components: Vec<f64>) -> Result<Self> {
        Self::new(terms, EquationKind::Sequential, Some(components))
    }

    pub fn terms(&self) -> &[FracTerm] {
        &self.terms
    }

    pub fn kind(&self) -> EquationKind {
        self.kind
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn leading(&self) -> FracTerm {
        self.terms[0]
    }

    /// Partial sums `σ_1 < ... < σ_n` (empty for the standard kind).
    pub fn ladder(&self) -> Vec<f64> {
        let mut s = 0.0;
        self.components
            .iter()
            .map(|a| {
                s += a;
                s
            })
            .collect()
    }

    /// `(coefficient, exponent)` pairs of the characteristic polynomial
    /// `Σ a_i p^{β_i}`.
    pub fn laplace_descriptor(&self) -> Vec<(f64, f64)> {
        self.terms.iter().map(|t| (t.coeff, t.order)).collect()
    }

    /// Index into the ladder of an on-ladder order.
    pub(crate) fn ladder_index(&self, order: f64) -> Option<usize> {
        self.ladder().iter().position(|s| (s - order).abs() <= 1e-9)
    }

    /// Numerator terms `(c, e)` of the Laplace image multiplying each
    /// initial value: `Y(p) = Σ_k b_k Σ c p^e / P(p) + F(p) / P(p)`.
    ///
    /// Standard kind: a single derivative term `a D^α` gives
    /// `b_k = D^{α-k} y(0)`, `k = 1..⌈α⌉`, with numerator `a p^{k-1}`. Several
    /// derivative terms all of order at most one give a single lumped
    /// constant `C = Σ a_i D^{β_i - 1} y(0)` with numerator 1. Anything else
    /// is unsupported.
    ///
    /// Sequential kind: `b_j = D^{σ_j - 1} y(0)`; each on-ladder term
    /// `a D^{σ_m}` contributes `a p^{σ_m - σ_j}` for `j <= m`. Terms of order at
    /// most one that are off the ladder contribute `a_q D^{q-1} y(0)` to the
    /// constant slot, which is folded into `b_n` (scaled by `1/a_n`).
    pub fn ic_numerators(&self) -> Result<Numerators> {
        match self.kind {
            EquationKind::Standard => {
                let deriv: Vec<&FracTerm> =
                    self.terms.iter().filter(|t| t.order > ORDER_TOL).collect();
                if deriv.len() == 1 {
                    let a = deriv[0].coeff;
                    let n = ic_count_single(deriv[0].order);
                    Ok((1..=n).map(|k| vec![(a, (k - 1) as f64)]).collect())
                } else if deriv.iter().all(|t| t.order <= 1.0 + ORDER_TOL) {
                    Ok(vec![vec![(1.0, 0.0)]])
                } else {
                    Err(FracError::Unsupported(
                        "nonzero initial data for a standard-kind equation with several \
                         derivative terms above order 1"
                            .into(),
                    ))
                }
            }
            EquationKind::Sequential => {
                let ladder = self.ladder();
                let mut out = vec![Vec::new(); ladder.len()];
                for t in &self.terms {
                    if t.order <= ORDER_TOL {
                        continue;
                    }
                    match self.ladder_index(t.order) {
                        Some(m) => {
                            for (j, slot) in out.iter_mut().enumerate().take(m + 1) {
                                slot.push((t.coeff, ladder[m] - ladder[j]));
                            }
                        }
                        None if t.order <= 1.0 + ORDER_TOL => {}
                        None => {
                            return Err(FracError::Unsupported(format!(
                                "nonzero initial data with term of order {} off the \
                                 sequential ladder",
                                t.order
                            )))
                        }
                    }
                }
                Ok(out)
            }
        }
    }

    /// Number of initial values the equation takes, when it is determined.
    pub fn ic_count(&self) -> Result<usize> {
        Ok(self.ic_numerators()?.len())
    }
}

fn ic_count_single(alpha: f64) -> usize {
    ((alpha - 1e-12).ceil() as usize).max(1)
}

fn default_components(terms: &[FracTerm]) -> Result<Vec<f64>> {
    let mut orders: Vec<f64> = terms
        .iter()
        .map(|t| t.order)
        .filter(|&o| o > ORDER_TOL)
        .collect();
    orders.sort_by(f64::total_cmp);
    let mut comps = Vec::with_capacity(orders.len());
    let mut prev = 0.0;
    for o in orders {
        comps.push(o - prev);
        prev = o;
    }
    Ok(comps)
}

fn validate_components(comps: &[f64], lead: f64) -> Result<()> {
    if comps.is_empty() {
        return Err(FracError::InvalidInput(
            "sequential equation needs at least one component order".into(),
        ));
    }
    for &a in comps {
        if !(a > 0.0 && a <= 1.0 + ORDER_TOL) {
            return Err(domain(
                "component",
                a,
                "sequential component orders must lie in (0, 1]",
            ));
        }
    }
    let total: f64 = comps.iter().sum();
    if (total - lead).abs() > 1e-9 {
        return Err(FracError::InvalidInput(format!(
            "component orders sum to {total}, leading order is {lead}"
        )));
    }
    Ok(())
}

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(domain("t", t, "must be > 0"));
    }
    Ok(())
}

fn check_coeff(name: &'static str, a: f64) -> Result<()> {
    if a == 0.0 || !a.is_finite() {
        return Err(domain(name, a, "must be finite and nonzero"));
    }
    Ok(())
}

// Shifted evaluators: D^s of the Green's function, s < 0 integrates.

fn g1s(a: f64, alpha: f64, t: f64, s: f64) -> f64 {
    t.powf(alpha - 1.0 - s) * reciprocal_gamma(alpha - s) / a
}

/// Two terms `a p^{hi} + b p^{lo}`.
fn g2s(a: f64, b: f64, hi: f64, lo: f64, t: f64, s: f64, ctl: &SeriesControl) -> Result<f64> {
    let lam = hi - lo;
    let e = ml_raw(lam, hi - s, 0, -(b / a) * t.powf(lam), ctl)?;
    Ok(t.powf(hi - 1.0 - s) * e / a)
}

/// `a p^β + b p^α + c`.
#[allow(clippy::too_many_arguments)]
fn g3s(
    a: f64,
    b: f64,
    c: f64,
    beta: f64,
    alpha: f64,
    t: f64,
    s: f64,
    ctl: &SeriesControl,
) -> Result<f64> {
    if c == 0.0 {
        return g2s(a, b, beta, alpha, t, s, ctl);
    }
    let lam = beta - alpha;
    let z = -(b / a) * t.powf(lam);
    let x = -(c / a) * t.powf(beta);
    let mut sum = OuterSum::default();
    let mut coef = 1.0;
    for m in 0..ctl.max_terms {
        if m > 0 {
            coef *= x / m as f64;
        }
        let e = ml_raw(lam, beta + alpha * m as f64 - s, m as u32, z, ctl)?;
        if sum.push(coef * e, ctl)? {
            return Ok(sum.finish(ctl)? * t.powf(beta - 1.0 - s) / a);
        }
    }
    Err(FracError::NotConverged {
        terms: ctl.max_terms,
    })
}

/// `a p^γ + b p^β + c p^α + d`.
#[allow(clippy::too_many_arguments)]
fn g4s(
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    gamma: f64,
    beta: f64,
    alpha: f64,
    t: f64,
    s: f64,
    ctl: &SeriesControl,
) -> Result<f64> {
    if d == 0.0 {
        // p^α (a p^{γ-α} + b p^{β-α} + c)
        return g3s(a, b, c, gamma - alpha, beta - alpha, t, s - alpha, ctl);
    }
    let lam = gamma - beta;
    let z = -(b / a) * t.powf(lam);
    let x = (d / a) * t.powf(gamma);
    let y = (c / a) * t.powf(gamma - alpha);
    let mut sum = OuterSum::default();
    for m in 0..ctl.max_terms {
        let mut inner = 0.0;
        for k in 0..=m {
            let w = binomial_weight(y, k) * binomial_weight(x, m - k);
            if w == 0.0 {
                continue;
            }
            let mu = gamma + beta * m as f64 - alpha * k as f64 - s;
            inner += w * ml_raw(lam, mu, m as u32, z, ctl)?;
        }
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        if sum.push(sign * inner, ctl)? {
            return Ok(sum.finish(ctl)? * t.powf(gamma - 1.0 - s) / a);
        }
    }
    Err(FracError::NotConverged {
        terms: ctl.max_terms,
    })
}

/// `v^k / k!`, in log form when the direct power is out of range.
fn binomial_weight(v: f64, k: usize) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if v == 0.0 {
        return 0.0;
    }
    let sign = if v < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
    sign * (k as f64 * v.abs().ln() - ln_gamma(k as f64 + 1.0)).exp()
}

/// General expansion for `n >= 3` terms (lowest order arbitrary).
#[derive(Debug, Clone, PartialEq)]
struct General {
    an: f64,
    hi: f64,
    lo: f64,
    ratio: f64,
    lower: Vec<(f64, f64)>,
}

impl General {
    fn from_terms(terms: &[FracTerm]) -> Self {
        let an = terms[0].coeff;
        General {
            an,
            hi: terms[0].order,
            lo: terms[1].order,
            ratio: terms[1].coeff / an,
            lower: terms[2..].iter().map(|t| (t.coeff / an, t.order)).collect(),
        }
    }

    fn eval(&self, t: f64, s: f64, ctl: &SeriesControl, cap: usize) -> Result<f64> {
        let lam = self.hi - self.lo;
        let z = -self.ratio * t.powf(lam);
        let scale = t.powf(self.hi - 1.0 - s) / self.an;
        if self.lower.is_empty() {
            return Ok(scale * ml_raw(lam, self.hi - s, 0, z, ctl)?);
        }
        // q_j = (a_j / a_n) t^{β_n - β_j}; weight Π q_j^{k_j} / k_j!.
        let logs: Vec<(f64, f64, f64)> = self
            .lower
            .iter()
            .map(|&(c, b)| {
                let q = c * t.powf(self.hi - b);
                (q.abs().ln(), q.signum(), self.lo - b)
            })
            .collect();
        let mut sum = OuterSum::default();
        let mut seen = 0usize;
        let mut ks = vec![0usize; logs.len()];
        for m in 0..ctl.max_terms {
            let mut inner = 0.0;
            let mut err = None;
            for_each_composition(m, &mut ks, &mut |ks| {
                seen += 1;
                if seen > cap {
                    err = Some(FracError::CombinatorialOverflow { cap });
                    return false;
                }
                let mut lw = 0.0;
                let mut sign = 1.0;
                let mut mu = self.hi - s;
                for (&k, &(lq, sq, shift)) in ks.iter().zip(&logs) {
                    if k == 0 {
                        continue;
                    }
                    lw += k as f64 * lq - ln_gamma(k as f64 + 1.0);
                    if sq < 0.0 && k % 2 == 1 {
                        sign = -sign;
                    }
                    mu += shift * k as f64;
                }
                match ml_raw(lam, mu, m as u32, z, ctl) {
                    Ok(e) => {
                        inner += sign * lw.exp() * e;
                        true
                    }
                    Err(e) => {
                        err = Some(e);
                        false
                    }
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            if sum.push(sign * inner, ctl)? {
                return Ok(sum.finish(ctl)? * scale);
            }
        }
        Err(FracError::NotConverged {
            terms: ctl.max_terms,
        })
    }
}

/// Calls `f` on every composition of `m` into `ks.len()` nonnegative parts,
/// in lexicographic order; stops early when `f` returns `false`.
fn for_each_composition(m: usize, ks: &mut [usize], f: &mut dyn FnMut(&[usize]) -> bool) {
    fn rec(pos: usize, left: usize, ks: &mut [usize], f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if pos + 1 == ks.len() {
            ks[pos] = left;
            return f(ks);
        }
        for k in (0..=left).rev() {
            ks[pos] = k;
            if !rec(pos + 1, left - k, ks, f) {
                return false;
            }
        }
        true
    }
    if !ks.is_empty() {
        rec(0, m, ks, f);
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Form {
    Two {
        a: f64,
        b: f64,
        alpha: f64,
    },
    Three {
        a: f64,
        b: f64,
        c: f64,
        beta: f64,
        alpha: f64,
    },
    Four {
        a: f64,
        b: f64,
        c: f64,
        d: f64,
        gamma: f64,
        beta: f64,
        alpha: f64,
    },
    General(General),
}

#[derive(Debug, Clone, PartialEq)]
enum Plan {
    One {
        a: f64,
        alpha: f64,
    },
    /// Characteristic polynomial `p^{base} Q(p)` with `Q` having a constant
    /// term; `G = D^{-base} G_Q`.
    Reduced {
        base: f64,
        form: Form,
    },
}

/// Evaluable Green's function of a [`FracEquation`].
#[derive(Debug, Clone, PartialEq)]
pub struct GreensEval {
    equation: FracEquation,
    ctl: SeriesControl,
    plan: Plan,
}

impl GreensEval {
    pub fn new(equation: FracEquation, ctl: SeriesControl) -> Result<Self> {
        ctl.validate()?;
        let terms = equation.terms();
        let plan = if terms.len() == 1 {
            Plan::One {
                a: terms[0].coeff,
                alpha: terms[0].order,
            }
        } else {
            let base = terms[terms.len() - 1].order;
            let r: Vec<FracTerm> = terms
                .iter()
                .map(|t| FracTerm::new(t.coeff, t.order - base))
                .collect();
            let form = match r.len() {
                2 => Form::Two {
                    a: r[0].coeff,
                    b: r[1].coeff,
                    alpha: r[0].order,
                },
                3 => Form::Three {
                    a: r[0].coeff,
                    b: r[1].coeff,
                    c: r[2].coeff,
                    beta: r[0].order,
                    alpha: r[1].order,
                },
                4 => Form::Four {
                    a: r[0].coeff,
                    b: r[1].coeff,
                    c: r[2].coeff,
                    d: r[3].coeff,
                    gamma: r[0].order,
                    beta: r[1].order,
                    alpha: r[2].order,
                },
                _ => Form::General(General::from_terms(&r)),
            };
            Plan::Reduced { base, form }
        };
        Ok(GreensEval {
            equation,
            ctl,
            plan,
        })
    }

    pub fn equation(&self) -> &FracEquation {
        &self.equation
    }

    pub fn control(&self) -> &SeriesControl {
        &self.ctl
    }

    /// Characteristic polynomial as `(coefficient, exponent)` pairs.
    pub fn laplace_descriptor(&self) -> Vec<(f64, f64)> {
        self.equation.laplace_descriptor()
    }

    /// `G(t) ~ t^{μ-1} / (a_n Γ(μ))` with `μ = β_n`.
    pub fn leading_power(&self) -> LeadingPower {
        let lead = self.equation.leading();
        LeadingPower {
            coeff: reciprocal_gamma(lead.order) / lead.coeff,
            mu: lead.order,
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        self.eval_shifted(t, 0.0)
    }

    /// `D^s G(t)`; negative `s` gives the fractional integral of order `-s`.
    pub fn eval_shifted(&self, t: f64, s: f64) -> Result<f64> {
        check_t(t)?;
        if !s.is_finite() {
            return Err(domain("s", s, "must be finite"));
        }
        let ctl = &self.ctl;
        match &self.plan {
            Plan::One { a, alpha } => Ok(g1s(*a, *alpha, t, s)),
            Plan::Reduced { base, form } => {
                let s = s - base;
                match form {
                    Form::Two { a, b, alpha } => g2s(*a, *b, *alpha, 0.0, t, s, ctl),
                    Form::Three {
                        a,
                        b,
                        c,
                        beta,
                        alpha,
                    } => g3s(*a, *b, *c, *beta, *alpha, t, s, ctl),
                    Form::Four {
                        a,
                        b,
                        c,
                        d,
                        gamma,
                        beta,
                        alpha,
                    } => g4s(*a, *b, *c, *d, *gamma, *beta, *alpha, t, s, ctl),
                    Form::General(g) => g.eval(t, s, ctl, COMPOSITION_CAP),
                }
            }
        }
    }

    /// `ψ_k(t)`, `k = 1..n`: the solution of the homogeneous equation whose
    /// `k`-th initial value is 1 and the others 0.
    pub fn psi(&self, k: usize, t: f64) -> Result<f64> {
        let nums = self.equation.ic_numerators()?;
        if k == 0 || k > nums.len() {
            return Err(FracError::IndexOutOfRange {
                index: k,
                len: nums.len(),
            });
        }
        let mut s = 0.0;
        for &(c, e) in &nums[k - 1] {
            s += c * self.eval_shifted(t, e)?;
        }
        Ok(s)
    }
}

impl FracKernel for GreensEval {
    fn frac_deriv(&self, order: f64, t: f64) -> Result<f64> {
        self.eval_shifted(t, order)
    }
}

/// `G_1(t) = t^{α-1} / (a Γ(α))`.
pub fn greens_one_term(a: f64, alpha: f64, t: f64) -> Result<f64> {
    check_coeff("a", a)?;
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(domain("alpha", alpha, "must be > 0"));
    }
    check_t(t)?;
    Ok(g1s(a, alpha, t, 0.0))
}

/// `G_2(t) = (1/a) t^{α-1} E_{α,α}(-(b/a) t^α)` for `a D^α y + b y`.
pub fn greens_two_term(a: f64, b: f64, alpha: f64, t: f64, ctl: &SeriesControl) -> Result<f64> {
    check_coeff("a", a)?;
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(domain("alpha", alpha, "must be > 0"));
    }
    if !b.is_finite() {
        return Err(domain("b", b, "must be finite"));
    }
    check_t(t)?;
    ctl.validate()?;
    g2s(a, b, alpha, 0.0, t, 0.0, ctl)
}

/// Green's function of `a D^β y + b D^α y + c y`, `β > α > 0`:
///
/// ```text
/// G_3(t) = (1/a) Σ_k (-1)^k/k! (c/a)^k t^{β(k+1)-1} E^{(k)}_{β-α,β+αk}(-(b/a) t^{β-α})
/// ```
#[allow(clippy::too_many_arguments)]
pub fn greens_three_term(
    a: f64,
    b: f64,
    c: f64,
    beta: f64,
    alpha: f64,
    t: f64,
    ctl: &SeriesControl,
) -> Result<f64> {
    check_coeff("a", a)?;
    if !(alpha > 0.0 && beta > alpha) || !beta.is_finite() {
        return Err(domain("beta", beta, "orders must satisfy beta > alpha > 0"));
    }
    if !b.is_finite() || !c.is_finite() {
        return Err(domain("b", b, "coefficients must be finite"));
    }
    check_t(t)?;
    ctl.validate()?;
    g3s(a, b, c, beta, alpha, t, 0.0, ctl)
}

/// Green's function of `a D^γ y + b D^β y + c D^α y + d y`,
/// `γ > β > α > 0`:
///
/// ```text
/// G_4(t) = (1/a) Σ_m 1/m! Σ_k C(m,k) (-1)^m c^k d^{m-k} / a^m
///          · t^{γ(m+1)-αk-1} E^{(m)}_{γ-β, γ+βm-αk}(-(b/a) t^{γ-β})
/// ```
#[allow(clippy::too_many_arguments)]
pub fn greens_four_term(
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    gamma: f64,
    beta: f64,
    alpha: f64,
    t: f64,
    ctl: &SeriesControl,
) -> Result<f64> {
    check_coeff("a", a)?;
    if !(alpha > 0.0 && beta > alpha && gamma > beta) || !gamma.is_finite() {
        return Err(domain(
            "gamma",
            gamma,
            "orders must satisfy gamma > beta > alpha > 0",
        ));
    }
    if !b.is_finite() || !c.is_finite() || !d.is_finite() {
        return Err(domain("b", b, "coefficients must be finite"));
    }
    check_t(t)?;
    ctl.validate()?;
    g4s(a, b, c, d, gamma, beta, alpha, t, 0.0, ctl)
}

/// Green's function of an `n`-term equation by the multinomial expansion
/// over compositions `k_0 + ... + k_{n-3} = m` of the lower terms.
pub fn greens_n_term(eq: &FracEquation, t: f64, ctl: &SeriesControl) -> Result<f64> {
    greens_n_term_with_cap(eq, t, ctl, COMPOSITION_CAP)
}

/// [`greens_n_term`] with an explicit composition cap.
pub fn greens_n_term_with_cap(
    eq: &FracEquation,
    t: f64,
    ctl: &SeriesControl,
    cap: usize,
) -> Result<f64> {
    check_t(t)?;
    ctl.validate()?;
    let terms = eq.terms();
    if terms.len() == 1 {
        return Ok(g1s(terms[0].coeff, terms[0].order, t, 0.0));
    }
    General::from_terms(terms).eval(t, 0.0, ctl, cap)
}

/// `ψ_k(t)` of [`GreensEval::psi`] for a one-off evaluation.
pub fn psi_k(eq: &FracEquation, k: usize, t: f64, ctl: &SeriesControl) -> Result<f64> {
    GreensEval::new(eq.clone(), *ctl)?.psi(k, t)
}
