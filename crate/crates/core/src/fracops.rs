//! Numerical fractional derivatives and integrals on uniform grids, plus the
//! analytic differentiation rules for Mittag-Leffler terms.
//!
//! The Grünwald-Letnikov sum and the product-trapezoid Riemann-Liouville
//! integral are the two independent oracles used to check solutions by
//! substitution. Both accept an optional set of start exponents: when the
//! sampled function behaves like a combination of `t^ν` near the origin
//! (possibly singular), the sample at `t = 0` is dropped and replaced by
//! starting weights that make the rule exact for every listed `t^ν`.

use crate::error::{domain, FracError, Result};
use crate::gamma::{gamma, reciprocal_gamma};
use crate::quad;
use crate::series::SeriesControl;
use crate::special_fn::{mittag_leffler_deriv, MLPoint};

/// Samples `f(t0 + i h)`, `i = 0..len`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    t0: f64,
    h: f64,
    values: Vec<f64>,
}

impl SampledFunction {
    pub fn new(t0: f64, h: f64, values: Vec<f64>) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(domain("h", h, "step must be positive and finite"));
        }
        if !t0.is_finite() {
            return Err(domain("t0", t0, "must be finite"));
        }
        if values.len() < 2 {
            return Err(FracError::InvalidInput(format!(
                "need at least 2 samples, got {}",
                values.len()
            )));
        }
        Ok(SampledFunction { t0, h, values })
    }

    /// Samples `f` at `t0, t0 + h, ..., t0 + (n-1) h`.
    pub fn from_fn(t0: f64, h: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = (0..n).map(|i| f(t0 + i as f64 * h)).collect();
        Self::new(t0, h, values)
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn t(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.h
    }

    pub fn end(&self) -> f64 {
        self.t(self.values.len() - 1)
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.values.len() {
            return Err(FracError::IndexOutOfRange {
                index: i,
                len: self.values.len(),
            });
        }
        Ok(())
    }

    /// Piecewise-linear interpolant; `None` outside `[t0, end]`.
    pub fn interpolate(&self, t: f64) -> Option<f64> {
        let x = (t - self.t0) / self.h;
        let last = (self.values.len() - 1) as f64;
        if !(x >= -1e-9) || x > last + 1e-9 {
            return None;
        }
        let x = x.clamp(0.0, last);
        let j = (x.floor() as usize).min(self.values.len() - 2);
        let r = x - j as f64;
        Some(self.values[j] * (1.0 - r) + self.values[j + 1] * r)
    }
}

/// Order of a fractional operator; negative values denote integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracOrder {
    pub alpha: f64,
}

impl FracOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(domain("alpha", alpha, "must be finite"));
        }
        Ok(FracOrder { alpha })
    }
}

/// `w_j` of `(1 - z)^α`: `w_0 = 1`, `w_j = w_{j-1} (1 - (α + 1) / j)`.
pub fn gl_weights(alpha: f64, n: usize) -> Vec<f64> {
    let mut w = Vec::with_capacity(n);
    let mut prev = 1.0;
    for j in 0..n {
        if j > 0 {
            prev *= 1.0 - (alpha + 1.0) / j as f64;
        }
        w.push(prev);
    }
    w
}

/// Grünwald-Letnikov approximation of the Riemann-Liouville derivative of
/// order `0 < α < 2` at sample `i`, with lower terminal `t0`.
pub fn gl_derivative(f: &SampledFunction, order: FracOrder, i: usize) -> Result<f64> {
    let alpha = order.alpha;
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(domain("alpha", alpha, "must lie in (0, 2)"));
    }
    f.check_index(i)?;
    if i == 0 {
        return Err(FracError::IndexOutOfRange {
            index: 0,
            len: f.len(),
        });
    }
    let w = gl_weights(alpha, i + 1);
    let mut s = 0.0;
    for (j, wj) in w.iter().enumerate() {
        s += wj * f.values[i - j];
    }
    Ok(s * f.h.powf(-alpha))
}

/// Grünwald-Letnikov operator of any real order (negative integrates) at
/// every sample `1..len`, with start correction for the given exponents.
/// The sample at `t0` is ignored when `exponents` is non-empty. Entry 0 of
/// the result is `NaN`.
pub fn gl_derivative_with_start(
    f: &SampledFunction,
    order: FracOrder,
    exponents: &[f64],
) -> Result<Vec<f64>> {
    let alpha = order.alpha;
    let n = f.len();
    let w = gl_weights(alpha, n);
    let scale = f.h.powf(-alpha);
    let corr = StartCorrection::new(exponents, f.h, n)?;
    let mut out = vec![f64::NAN; n];
    for (i, slot) in out.iter_mut().enumerate().skip(1) {
        let weight = |m: usize| scale * w[i - m];
        let target = |nu: f64, t: f64| power_rule(nu, alpha, t);
        *slot = corr.apply(i, &f.values, weight, target);
    }
    Ok(out)
}

/// `D^α t^ν = Γ(ν+1)/Γ(ν+1-α) t^{ν-α}`.
pub fn power_rule(nu: f64, alpha: f64, t: f64) -> f64 {
    let r = reciprocal_gamma(nu + 1.0 - alpha);
    if r == 0.0 {
        return 0.0;
    }
    gamma(nu + 1.0) * r * t.powf(nu - alpha)
}

/// Starting weights making a convolution rule exact for `t^ν`.
struct StartCorrection {
    exponents: Vec<f64>,
    h: f64,
}

impl StartCorrection {
    fn new(exponents: &[f64], h: f64, n: usize) -> Result<Self> {
        for &nu in exponents {
            if !(nu > -1.0) {
                return Err(domain("exponent", nu, "start exponents must exceed -1"));
            }
        }
        if exponents.len() + 1 > n {
            return Err(FracError::InvalidInput(format!(
                "{} start exponents need more than {} samples",
                exponents.len(),
                n
            )));
        }
        Ok(StartCorrection {
            exponents: exponents.to_vec(),
            h,
        })
    }

    /// `weight(m)` is the rule's coefficient on sample `m` for output `i`.
    fn apply(
        &self,
        i: usize,
        values: &[f64],
        weight: impl Fn(usize) -> f64,
        target: impl Fn(f64, f64) -> f64,
    ) -> f64 {
        let mut base = 0.0;
        for m in 1..=i {
            base += weight(m) * values[m];
        }
        if self.exponents.is_empty() {
            return base + weight(0) * values[0];
        }
        let s = self.exponents.len();
        let ti = i as f64 * self.h;
        let mut mat = vec![vec![0.0; s + 1]; s];
        for (q, &nu) in self.exponents.iter().enumerate() {
            // Row q scaled by h^{-ν}: entries l^ν.
            let mut applied = 0.0;
            for m in 1..=i {
                applied += weight(m) * (m as f64).powf(nu);
            }
            let hn = self.h.powf(nu);
            let rhs = target(nu, ti) / hn - applied;
            for l in 0..s {
                mat[q][l] = ((l + 1) as f64).powf(nu);
            }
            mat[q][s] = rhs;
        }
        let x = solve_dense(mat);
        let mut corr = 0.0;
        for (l, xl) in x.iter().enumerate() {
            corr += xl * values[l + 1];
        }
        base + corr
    }
}

/// Gaussian elimination with partial pivoting on an augmented matrix.
pub(crate) fn solve_dense(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for c in 0..n {
        let p = (c..n)
            .max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs()))
            .unwrap_or(c);
        a.swap(c, p);
        let piv = a[c][c];
        for r in c + 1..n {
            let f = a[r][c] / piv;
            for k in c..=n {
                a[r][k] -= f * a[c][k];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let mut s = a[r][n];
        for k in r + 1..n {
            s -= a[r][k] * x[k];
        }
        x[r] = s / a[r][r];
    }
    x
}

/// Product-trapezoid weights `a_{j,n}` (without the `h^α/Γ(α+2)` factor).
fn rl_weight(alpha: f64, n: usize, j: usize) -> f64 {
    let p = alpha + 1.0;
    let nf = n as f64;
    if j == 0 {
        return (nf - 1.0).powf(p) - (nf - alpha - 1.0) * nf.powf(alpha);
    }
    if j == n {
        return 1.0;
    }
    let k = (n - j) as f64;
    (k + 1.0).powf(p) - 2.0 * k.powf(p) + (k - 1.0).powf(p)
}

/// Riemann-Liouville integral of order `α > 0` at sample `i`, lower terminal
/// `t0`: `f` is taken piecewise linear and the kernel `(t_i - τ)^{α-1}` is
/// integrated exactly on each subinterval.
pub fn rl_integral(f: &SampledFunction, alpha: f64, i: usize) -> Result<f64> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(domain("alpha", alpha, "must be > 0"));
    }
    f.check_index(i)?;
    if i == 0 {
        return Ok(0.0);
    }
    let scale = f.h.powf(alpha) * reciprocal_gamma(alpha + 2.0);
    let mut s = 0.0;
    for j in 0..=i {
        s += rl_weight(alpha, i, j) * f.values[j];
    }
    Ok(s * scale)
}

/// [`rl_integral`] at every sample with start correction (see
/// [`gl_derivative_with_start`]).
pub fn rl_integral_with_start(
    f: &SampledFunction,
    alpha: f64,
    exponents: &[f64],
) -> Result<Vec<f64>> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(domain("alpha", alpha, "must be > 0"));
    }
    let n = f.len();
    let scale = f.h.powf(alpha) * reciprocal_gamma(alpha + 2.0);
    let corr = StartCorrection::new(exponents, f.h, n)?;
    let mut out = vec![f64::NAN; n];
    for (i, slot) in out.iter_mut().enumerate().skip(1) {
        let weight = |m: usize| scale * rl_weight(alpha, i, m);
        let target = |nu: f64, t: f64| power_rule(nu, -alpha, t);
        *slot = corr.apply(i, &f.values, weight, target);
    }
    Ok(out)
}

/// `D^γ [t^{αk+β-1} E^{(k)}_{α,β}(λ t^α)] = t^{αk+β-γ-1} E^{(k)}_{α,β-γ}(λ t^α)`.
/// Negative `γ` gives the fractional integral of order `-γ`.
#[allow(clippy::too_many_arguments)]
pub fn ml_derivative_analytic(
    alpha: f64,
    beta: f64,
    k: u32,
    lambda: f64,
    gamma: f64,
    t: f64,
    ctl: &SeriesControl,
) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(domain("t", t, "must be > 0"));
    }
    if !gamma.is_finite() {
        return Err(domain("gamma", gamma, "must be finite"));
    }
    let p = MLPoint::new(alpha, beta - gamma, k, lambda * t.powf(alpha))?;
    let e = mittag_leffler_deriv(&p, ctl)?;
    Ok(t.powf(alpha * k as f64 + beta - gamma - 1.0) * e)
}

/// A kernel on `(0, T]` whose fractional derivatives and integrals are known
/// analytically. `order < 0` means integration.
pub trait FracKernel {
    fn frac_deriv(&self, order: f64, t: f64) -> Result<f64>;

    fn eval(&self, t: f64) -> Result<f64> {
        self.frac_deriv(0.0, t)
    }
}

/// `K(t) = c t^{μ-1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerKernel {
    pub coeff: f64,
    pub mu: f64,
}

impl FracKernel for PowerKernel {
    fn frac_deriv(&self, order: f64, t: f64) -> Result<f64> {
        Ok(self.coeff * power_rule(self.mu - 1.0, order, t))
    }
}

/// Leading behaviour `K(t) ~ c t^{μ-1}` as `t → 0+`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeadingPower {
    pub coeff: f64,
    pub mu: f64,
}

const GAP: f64 = 1e-10;
const GRADING: f64 = 0.15;

/// `D^α ∫_0^t K(t-τ) f(τ) dτ` at `t = t_i` evaluated as
/// `∫_0^t D^α K(u) f(t-u) du + f(t) lim_{u→0} D^{α-1} K(u)`.
///
/// The limit uses the supplied leading power: it is `c Γ(μ)` when `μ = α`
/// and zero when `μ > α`. On the gap `[0, a]` next to the singularity the
/// forcing is frozen at `f(t)` and the kernel part is integrated exactly
/// through `D^{α-1}K`.
pub fn frac_diff_convolution(
    kernel: &dyn FracKernel,
    leading: LeadingPower,
    f: &SampledFunction,
    alpha: f64,
    i: usize,
) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(domain("alpha", alpha, "must lie in (0, 1]"));
    }
    if !(leading.mu > 0.0) {
        return Err(domain("mu", leading.mu, "kernel exponent must be > 0"));
    }
    if leading.mu < alpha - 1e-12 {
        return Err(FracError::SingularityTooStrong {
            exponent: leading.mu,
            order: alpha,
        });
    }
    f.check_index(i)?;
    let t = f.t(i) - f.t0;
    if t <= 0.0 {
        return Ok(0.0);
    }
    let ft = f.values[i];
    let limit = if (leading.mu - alpha).abs() <= 1e-12 {
        leading.coeff * gamma(leading.mu)
    } else {
        0.0
    };
    let a = t * GAP;
    let gap = ft * (kernel.frac_deriv(alpha - 1.0, a)? - limit);
    let mut integrand = |u: f64| -> Result<f64> {
        let fv = f.interpolate(f.t0 + t - u).unwrap_or(0.0);
        if fv == 0.0 {
            return Ok(0.0);
        }
        Ok(kernel.frac_deriv(alpha, u)? * fv)
    };
    let body = quad::graded(&mut integrand, 0.0, t, GRADING, GAP)?;
    Ok(body + gap + ft * limit)
}
