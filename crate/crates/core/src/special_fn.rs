//! Two-parameter Mittag-Leffler function, its derivatives, and the classical
//! functions that are special cases of it.
//!
//! ```text
//! E_{α,β}(z)     = Σ_j z^j / Γ(αj + β)
//! E_{α,β}^(k)(z) = Σ_j (j+k)!/j! · z^j / Γ(αj + αk + β)
//! ```
//!
//! `β` may be any real number. Terms whose gamma argument is a pole vanish,
//! which is what the fractional differentiation rule needs when it lowers
//! `β` below zero.

use crate::error::{domain, Result};
pub use crate::gamma::{gamma, ln_gamma, reciprocal_gamma};
use crate::series::{Series, SeriesControl, Weights};

/// Evaluation point for `E_{α,β}^{(k)}(z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MLPoint {
    pub alpha: f64,
    pub beta: f64,
    pub k: u32,
    pub z: f64,
}

impl MLPoint {
    pub fn new(alpha: f64, beta: f64, k: u32, z: f64) -> Result<Self> {
        let p = MLPoint { alpha, beta, k, z };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return Err(domain("alpha", self.alpha, "must be > 0"));
        }
        if !self.beta.is_finite() {
            return Err(domain("beta", self.beta, "must be finite"));
        }
        if !self.z.is_finite() {
            return Err(domain("z", self.z, "must be finite"));
        }
        Ok(())
    }
}

/// `E_{α,β}(z)`. The point must have `k = 0`.
pub fn mittag_leffler(p: &MLPoint, ctl: &SeriesControl) -> Result<f64> {
    if p.k != 0 {
        return Err(domain(
            "k",
            p.k as f64,
            "mittag_leffler takes k = 0; use mittag_leffler_deriv",
        ));
    }
    mittag_leffler_deriv(p, ctl)
}

/// `k`-th derivative `E_{α,β}^{(k)}(z)`. With `k = 0` this is the same code
/// path as [`mittag_leffler`], so the two agree bit for bit.
pub fn mittag_leffler_deriv(p: &MLPoint, ctl: &SeriesControl) -> Result<f64> {
    p.validate()?;
    ctl.validate()?;
    ml_raw(p.alpha, p.beta, p.k, p.z, ctl)
}

/// Unvalidated kernel shared by the Green's function code.
pub(crate) fn ml_raw(alpha: f64, beta: f64, k: u32, z: f64, ctl: &SeriesControl) -> Result<f64> {
    Series {
        alpha,
        beta,
        weights: Weights::Falling { k },
    }
    .sum(z, ctl)
}

/// Shorthand for `E_{α,β}(z)` from plain numbers.
pub fn ml(alpha: f64, beta: f64, z: f64, ctl: &SeriesControl) -> Result<f64> {
    mittag_leffler(&MLPoint::new(alpha, beta, 0, z)?, ctl)
}

/// Miller–Ross function `E_t(ν, a) = t^ν E_{1,ν+1}(a t)`.
pub fn miller_ross_e(nu: f64, a: f64, t: f64, ctl: &SeriesControl) -> Result<f64> {
    if !(t > 0.0) {
        return Err(domain("t", t, "must be > 0"));
    }
    let e = mittag_leffler(&MLPoint::new(1.0, nu + 1.0, 0, a * t)?, ctl)?;
    Ok(t.powf(nu) * e)
}

/// Rabotnov's function `Э_α(β, t) = t^α E_{α+1,α+1}(β t^{α+1})`.
pub fn rabotnov(alpha: f64, beta: f64, t: f64, ctl: &SeriesControl) -> Result<f64> {
    if !(t > 0.0) {
        return Err(domain("t", t, "must be > 0"));
    }
    if !(alpha > -1.0) {
        return Err(domain("alpha", alpha, "must be > -1"));
    }
    let e = mittag_leffler(
        &MLPoint::new(alpha + 1.0, alpha + 1.0, 0, beta * t.powf(alpha + 1.0))?,
        ctl,
    )?;
    Ok(t.powf(alpha) * e)
}

fn check_trig_domain(alpha: f64, z: f64) -> Result<()> {
    if !(0.0..2.0).contains(&alpha) {
        return Err(domain("alpha", alpha, "must lie in [0, 2)"));
    }
    if !(z > 0.0) {
        return Err(domain("z", z, "must be > 0"));
    }
    Ok(())
}

/// Fractional sine `Sc_α(z) = z E_{2-α,2}(-z^{2-α})`.
pub fn fractional_sin(alpha: f64, z: f64, ctl: &SeriesControl) -> Result<f64> {
    check_trig_domain(alpha, z)?;
    let a = 2.0 - alpha;
    let e = mittag_leffler(&MLPoint::new(a, 2.0, 0, -z.powf(a))?, ctl)?;
    Ok(z * e)
}

/// Fractional cosine `Cs_α(z) = E_{2-α,1}(-z^{2-α})`.
pub fn fractional_cos(alpha: f64, z: f64, ctl: &SeriesControl) -> Result<f64> {
    check_trig_domain(alpha, z)?;
    let a = 2.0 - alpha;
    mittag_leffler(&MLPoint::new(a, 1.0, 0, -z.powf(a))?, ctl)
}
