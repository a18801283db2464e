//! Shared summation engine for the Mittag-Leffler and Wright series.
//!
//! Both families have terms of the form `z^j w_j / Γ(a_j)` with an affine
//! gamma argument `a_j`. Summation first runs in binary64; when the
//! accumulated magnitude shows that cancellation has eaten into the requested
//! tolerance, the sum is recomputed with double-double terms and accumulation.

use crate::dd::Dd;
use crate::error::{FracError, Result};
use crate::gamma::{ln_gamma_pos_dd, ln_rgamma_dd, ln_rgamma_fast, rgamma_dd, rgamma_fast};

/// Truncation and accuracy policy for every infinite series in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    /// Relative tolerance of the stopping rule.
    pub epsilon: f64,
    /// Hard cap on the number of terms.
    pub max_terms: usize,
    /// Cap on `max |term| / |sum|`, measured in binary64-equivalent digits.
    pub cancellation_budget: f64,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            epsilon: 1e-12,
            max_terms: 10_000,
            cancellation_budget: 1e8,
        }
    }
}

impl SeriesControl {
    pub fn new(epsilon: f64, max_terms: usize, cancellation_budget: f64) -> Result<Self> {
        let ctl = SeriesControl {
            epsilon,
            max_terms,
            cancellation_budget,
        };
        ctl.validate()?;
        Ok(ctl)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) {
            return Err(crate::error::domain("epsilon", self.epsilon, "must be > 0"));
        }
        if self.max_terms < 1 {
            return Err(crate::error::domain(
                "max_terms",
                self.max_terms as f64,
                "must be >= 1",
            ));
        }
        if !(self.cancellation_budget >= 1.0) {
            return Err(crate::error::domain(
                "cancellation_budget",
                self.cancellation_budget,
                "must be >= 1",
            ));
        }
        Ok(())
    }

    pub fn with_max_terms(mut self, max_terms: usize) -> Self {
        self.max_terms = max_terms;
        self
    }
}

/// Extra digits the double-double path carries over binary64. The
/// cancellation budget is scaled by this factor on that path.
pub(crate) const EXTENDED_GAIN: f64 = 1e8;

/// Number of consecutive small terms required by the stopping rule.
const SMALL_RUN: usize = 3;
/// Stopping rule is inactive below this index.
const MIN_INDEX: usize = 10;

/// Term shape `z^j w_j / Γ(alpha (j + shift) + beta)`.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Weights {
    /// `w_j = (j + k)! / j!` with shift `k`: derivatives of Mittag-Leffler.
    Falling { k: u32 },
    /// `w_j = 1 / j!`: Wright function.
    InverseFactorial,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Series {
    pub alpha: f64,
    pub beta: f64,
    pub weights: Weights,
}

impl Series {
    fn shift(&self) -> f64 {
        match self.weights {
            Weights::Falling { k } => k as f64,
            Weights::InverseFactorial => 0.0,
        }
    }

    fn gamma_arg(&self, j: usize) -> f64 {
        self.alpha * (j as f64 + self.shift()) + self.beta
    }

    fn gamma_arg_dd(&self, j: usize) -> Dd {
        Dd::new(self.alpha).mul_f64(j as f64 + self.shift()) + Dd::new(self.beta)
    }

    /// `w_0`.
    fn first_weight(&self) -> Dd {
        match self.weights {
            Weights::Falling { k } => {
                let mut w = Dd::ONE;
                for i in 2..=k {
                    w = w.mul_f64(i as f64);
                }
                w
            }
            Weights::InverseFactorial => Dd::ONE,
        }
    }

    /// `ln w_0`, safe when `w_0` itself overflows.
    fn ln_first_weight(&self) -> Dd {
        match self.weights {
            Weights::Falling { k } => ln_gamma_pos_dd(Dd::new(k as f64 + 1.0)),
            Weights::InverseFactorial => Dd::ZERO,
        }
    }

    /// `w_j / w_{j-1}` for `j >= 1`.
    fn weight_ratio(&self, j: usize) -> Dd {
        match self.weights {
            Weights::Falling { k } => Dd::new((j + k as usize) as f64) / Dd::new(j as f64),
            Weights::InverseFactorial => Dd::new(j as f64).recip(),
        }
    }

    fn weight_ratio_f64(&self, j: usize) -> f64 {
        match self.weights {
            Weights::Falling { k } => (j + k as usize) as f64 / j as f64,
            Weights::InverseFactorial => 1.0 / j as f64,
        }
    }

    /// Sum the series at `z` under `ctl`.
    pub fn sum(&self, z: f64, ctl: &SeriesControl) -> Result<f64> {
        if !z.is_finite() {
            return Err(crate::error::domain("z", z, "must be finite"));
        }
        if z == 0.0 {
            let w0 = self.first_weight();
            let v = w0 * rgamma_dd(self.gamma_arg_dd(0));
            if !v.is_finite() {
                return Err(FracError::Overflow("series leading term"));
            }
            return Ok(v.to_f64());
        }
        let fast = self.sum_fast(z, ctl)?;
        let err_bound = 64.0 * f64::EPSILON * fast.sum_abs;
        if err_bound <= ctl.epsilon * fast.value.abs() || fast.sum_abs == 0.0 {
            check_cancellation(fast.max_abs, fast.value, ctl.cancellation_budget)?;
            return Ok(fast.value);
        }
        let ext = self.sum_extended(z, ctl)?;
        check_cancellation(
            ext.max_abs,
            ext.value,
            ctl.cancellation_budget * EXTENDED_GAIN,
        )?;
        Ok(ext.value)
    }

    fn sum_fast(&self, z: f64, ctl: &SeriesControl) -> Result<Partial> {
        let w0 = self.first_weight().to_f64();
        let lnz = z.abs().ln();
        // Direct product while it stays representable, log domain after.
        let mut p = w0;
        let mut ln_p = self.ln_first_weight().to_f64();
        let mut sign_p = 1.0;
        let mut log_mode = !w0.is_finite();
        let mut acc = Neumaier::default();
        let mut max_abs = 0.0f64;
        let mut small_run = 0;
        for j in 0..ctl.max_terms {
            if j > 0 {
                let r = self.weight_ratio_f64(j);
                if !log_mode {
                    p *= z * r;
                    if !p.is_finite() || p == 0.0 || p.abs() > 1e280 {
                        log_mode = true;
                        ln_p = ln_from_scratch(j, lnz, self);
                        sign_p = if z < 0.0 && j % 2 == 1 { -1.0 } else { 1.0 };
                    }
                } else {
                    ln_p += lnz + r.ln();
                    if z < 0.0 {
                        sign_p = -sign_p;
                    }
                }
            }
            let a = self.gamma_arg(j);
            let term = if log_mode {
                let (s, lr) = ln_rgamma_fast(a);
                if s == 0.0 {
                    0.0
                } else {
                    s * sign_p * (ln_p + lr).exp()
                }
            } else {
                let r = rgamma_fast(a);
                let t = p * r;
                if t.is_finite() {
                    t
                } else {
                    let (s, lr) = ln_rgamma_fast(a);
                    let sp = p.signum();
                    s * sp * (p.abs().ln() + lr).exp()
                }
            };
            if !term.is_finite() {
                return Err(FracError::Overflow("series term"));
            }
            acc.add(term);
            max_abs = max_abs.max(term.abs());
            if term.abs() <= ctl.epsilon * acc.value().abs() {
                small_run += 1;
            } else {
                small_run = 0;
            }
            if j >= MIN_INDEX + SMALL_RUN - 1 && small_run >= SMALL_RUN {
                return Ok(Partial {
                    value: acc.value(),
                    sum_abs: acc.abs_total,
                    max_abs,
                });
            }
        }
        Err(FracError::NotConverged {
            terms: ctl.max_terms,
        })
    }

    fn sum_extended(&self, z: f64, ctl: &SeriesControl) -> Result<Partial> {
        let zd = Dd::new(z);
        let lnz = Dd::new(z.abs()).ln();
        let mut p = self.first_weight();
        let mut ln_p = self.ln_first_weight();
        let mut sign_p = 1.0;
        let mut log_mode = !p.is_finite();
        let mut sum = Dd::ZERO;
        let mut max_abs = 0.0f64;
        let mut small_run = 0;
        for j in 0..ctl.max_terms {
            if j > 0 {
                let r = self.weight_ratio(j);
                if !log_mode {
                    p = p * zd * r;
                    if !(p.hi.abs() < 1e280) || p.hi.abs() < 1e-280 {
                        log_mode = true;
                        // Rebuild the logarithm from scratch.
                        let mut lw = self.ln_first_weight();
                        for i in 1..=j {
                            lw = lw + self.weight_ratio(i).ln();
                        }
                        ln_p = lw + lnz.mul_f64(j as f64);
                        sign_p = if z < 0.0 && j % 2 == 1 { -1.0 } else { 1.0 };
                    }
                } else {
                    ln_p = ln_p + lnz + r.ln();
                    if z < 0.0 {
                        sign_p = -sign_p;
                    }
                }
            }
            let a = self.gamma_arg_dd(j);
            let term = if log_mode {
                let (s, lr) = ln_rgamma_dd(a);
                if s == 0.0 {
                    Dd::ZERO
                } else {
                    (ln_p + lr).exp().mul_f64(s * sign_p)
                }
            } else {
                let t = p * rgamma_dd(a);
                if t.is_finite() {
                    t
                } else {
                    let (s, lr) = ln_rgamma_dd(a);
                    if s == 0.0 {
                        Dd::ZERO
                    } else {
                        (p.abs().ln() + lr).exp().mul_f64(s * p.hi.signum())
                    }
                }
            };
            if !term.is_finite() {
                return Err(FracError::Overflow("series term"));
            }
            sum = sum + term;
            let t = term.to_f64().abs();
            max_abs = max_abs.max(t);
            if t <= ctl.epsilon * sum.to_f64().abs() {
                small_run += 1;
            } else {
                small_run = 0;
            }
            if j >= MIN_INDEX + SMALL_RUN - 1 && small_run >= SMALL_RUN {
                return Ok(Partial {
                    value: sum.to_f64(),
                    sum_abs: 0.0,
                    max_abs,
                });
            }
        }
        Err(FracError::NotConverged {
            terms: ctl.max_terms,
        })
    }
}

fn ln_from_scratch(j: usize, lnz: f64, s: &Series) -> f64 {
    let mut lw = s.ln_first_weight().to_f64();
    for i in 1..=j {
        lw += s.weight_ratio_f64(i).ln();
    }
    lw + j as f64 * lnz
}

fn check_cancellation(max_abs: f64, value: f64, budget: f64) -> Result<()> {
    if max_abs == 0.0 {
        return Ok(());
    }
    let ratio = max_abs / value.abs();
    if ratio > budget {
        return Err(FracError::CancellationLoss { ratio, budget });
    }
    Ok(())
}

/// Stopping rule and cancellation check for sums whose terms are
/// themselves series (the Green's function expansions).
#[derive(Debug, Default)]
pub(crate) struct OuterSum {
    acc: Neumaier,
    max_abs: f64,
    small_run: usize,
    count: usize,
}

impl OuterSum {
    /// Adds a completed term; returns `true` once the stopping rule fires.
    pub fn push(&mut self, term: f64, ctl: &SeriesControl) -> Result<bool> {
        if !term.is_finite() {
            return Err(FracError::Overflow("outer series term"));
        }
        self.acc.add(term);
        self.max_abs = self.max_abs.max(term.abs());
        if term.abs() <= ctl.epsilon * (1.0 + self.acc.value().abs()) {
            self.small_run += 1;
        } else {
            self.small_run = 0;
        }
        self.count += 1;
        Ok(self.count >= MIN_INDEX + SMALL_RUN && self.small_run >= SMALL_RUN)
    }

    /// Final value. Cancellation is measured against `1 + |S|`, so a sum
    /// that is legitimately near zero (a zero of G) is not flagged.
    pub fn finish(&self, ctl: &SeriesControl) -> Result<f64> {
        let value = self.acc.value();
        let ratio = self.max_abs / (1.0 + value.abs());
        if ratio > ctl.cancellation_budget {
            return Err(FracError::CancellationLoss {
                ratio,
                budget: ctl.cancellation_budget,
            });
        }
        Ok(value)
    }
}

struct Partial {
    value: f64,
    sum_abs: f64,
    max_abs: f64,
}

/// Neumaier's variant of compensated summation; also tracks `sum |x_i|`.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct Neumaier {
    sum: f64,
    comp: f64,
    pub abs_total: f64,
}

impl Neumaier {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
        self.abs_total += x.abs();
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}
