//! Wright function `W(z; α, β) = Σ_j z^j / (j! Γ(αj + β))` and Mainardi's
//! function `M(z; α) = W(-z; -α, 1-α)`.
//!
//! The series is entire for every `α > -1`. For negative `α` the terms grow
//! before they decay, so the term cap is raised to at least
//! [`NEGATIVE_ALPHA_MIN_TERMS`].

use crate::error::{domain, Result};
use crate::series::{Series, SeriesControl, Weights};

pub const NEGATIVE_ALPHA_MIN_TERMS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WrightPoint {
    pub z: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl WrightPoint {
    pub fn new(z: f64, alpha: f64, beta: f64) -> Result<Self> {
        let p = WrightPoint { z, alpha, beta };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        if !(self.alpha > -1.0) || !self.alpha.is_finite() {
            return Err(domain("alpha", self.alpha, "must be > -1"));
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

pub fn wright(p: &WrightPoint, ctl: &SeriesControl) -> Result<f64> {
    p.validate()?;
    ctl.validate()?;
    let ctl = if p.alpha < 0.0 && ctl.max_terms < NEGATIVE_ALPHA_MIN_TERMS {
        ctl.with_max_terms(NEGATIVE_ALPHA_MIN_TERMS)
    } else {
        *ctl
    };
    Series {
        alpha: p.alpha,
        beta: p.beta,
        weights: Weights::InverseFactorial,
    }
    .sum(p.z, &ctl)
}

/// Mainardi's function `M(z; α)` for `0 < α < 1`.
pub fn mainardi(z: f64, alpha: f64, ctl: &SeriesControl) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(domain("alpha", alpha, "must lie in (0, 1)"));
    }
    wright(&WrightPoint::new(-z, -alpha, 1.0 - alpha)?, ctl)
}
