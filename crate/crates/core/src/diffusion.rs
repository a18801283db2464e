//! One-dimensional fractional diffusion on the whole line.
//!
//! Both models have Green's functions built from the Wright function with
//! the similarity variable `z = |x| / (λ t^ρ)`, `ρ = α/2`:
//!
//! ```text
//! Nigmatullin:  G(x, t) = t^{ρ-1} W(-z; -ρ, ρ) / (2λ)
//! Wyss:         G(x, t) = t^{-ρ} M(z; ρ) / (2λ)
//! ```
//!
//! `λ²` plays the role of the diffusion coefficient. Mainardi's
//! time-fractional problem has the Wyss Green's function, so it is covered
//! by [`DiffusionKind::Wyss`].

use crate::error::{domain, FracError, Result};
use crate::fracops::SampledFunction;
use crate::gamma::gamma;
use crate::quad;
use crate::series::SeriesControl;
use crate::wright::{mainardi, wright, WrightPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiffusionKind {
    Nigmatullin,
    Wyss,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionModel {
    kind: DiffusionKind,
    alpha: f64,
    lambda: f64,
}

/// Kernel values below this fraction of the peak are dropped.
pub const WINDOW_EPS: f64 = 1e-12;

impl DiffusionModel {
    pub fn new(kind: DiffusionKind, alpha: f64, lambda: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(domain("alpha", alpha, "must lie in (0, 1]"));
        }
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(domain("lambda", lambda, "must be > 0"));
        }
        Ok(DiffusionModel {
            kind,
            alpha,
            lambda,
        })
    }

    pub fn kind(&self) -> DiffusionKind {
        self.kind
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn rho(&self) -> f64 {
        0.5 * self.alpha
    }

    /// Spatial length scale `λ t^ρ`.
    fn scale(&self, t: f64) -> f64 {
        self.lambda * t.powf(self.rho())
    }

    /// Prefactor `G = pre(t) K(z)`.
    fn prefactor(&self, t: f64) -> f64 {
        let rho = self.rho();
        match self.kind {
            DiffusionKind::Nigmatullin => t.powf(rho - 1.0) / (2.0 * self.lambda),
            DiffusionKind::Wyss => t.powf(-rho) / (2.0 * self.lambda),
        }
    }

    /// Similarity profile `K(z)`, `z ≥ 0`.
    fn profile(&self, z: f64, ctl: &SeriesControl) -> Result<f64> {
        let rho = self.rho();
        match self.kind {
            DiffusionKind::Nigmatullin => wright(&WrightPoint::new(-z, -rho, rho)?, ctl),
            DiffusionKind::Wyss => mainardi(z, rho, ctl),
        }
    }

    /// Half-width in `z` beyond which `|K| < WINDOW_EPS · K(0)`, to within a
    /// relative `1e-3`.
    ///
    /// Once the series can no longer resolve `K` against its own terms the
    /// value is far below the threshold, so that point also ends the window.
    fn window(&self, ctl: &SeriesControl) -> Result<f64> {
        let peak = self.profile(0.0, ctl)?.abs();
        let small = |z: f64| -> Result<bool> {
            match self.profile(z, ctl) {
                Ok(v) => Ok(v.abs() < WINDOW_EPS * peak),
                Err(FracError::CancellationLoss { .. }) | Err(FracError::Overflow(_)) => Ok(true),
                Err(e) => Err(e),
            }
        };
        let mut lo = 0.0;
        let mut hi = 1.0;
        while !small(hi)? {
            lo = hi;
            hi *= 2.0;
            if hi > 1e6 {
                return Err(FracError::NotConverged { terms: 0 });
            }
        }
        for _ in 0..40 {
            let mid = 0.5 * (lo + hi);
            if small(mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo < 1e-3 * hi {
                break;
            }
        }
        // `lo` is the last point the series resolved; cancellation only grows
        // with `z`, so everything inside it is resolvable too.
        Ok(if lo > 0.0 { lo } else { hi })
    }

    /// Half-width in `x` of the kernel support kept by [`solve_profile`].
    pub fn window_x(&self, t: f64, ctl: &SeriesControl) -> Result<f64> {
        check_t(t)?;
        Ok(self.window(ctl)? * self.scale(t))
    }

    /// `∫ G(x, t) dx` over the window.
    pub fn mass(&self, t: f64, ctl: &SeriesControl) -> Result<f64> {
        check_t(t)?;
        let zmax = self.window(ctl)?;
        let panels = (zmax / 0.5).ceil().max(4.0) as usize;
        let dz = zmax / panels as f64;
        let mut s = 0.0;
        let mut k = |z: f64| self.profile(z, ctl);
        for i in 0..panels {
            s += quad::panel(&mut k, i as f64 * dz, (i + 1) as f64 * dz)?;
        }
        Ok(2.0 * self.scale(t) * self.prefactor(t) * s)
    }
}

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(domain("t", t, "must be > 0"));
    }
    Ok(())
}

pub fn green_x(model: &DiffusionModel, x: f64, t: f64, ctl: &SeriesControl) -> Result<f64> {
    check_t(t)?;
    if !x.is_finite() {
        return Err(domain("x", x, "must be finite"));
    }
    let z = x.abs() / model.scale(t);
    Ok(model.prefactor(t) * model.profile(z, ctl)?)
}

/// `u(x, t) = ∫ G(x - ξ, t) φ(ξ) dξ` at each `x` in `x_out`.
///
/// `φ` is linear between its samples and zero outside them. The kernel is
/// cut at the window of [`DiffusionModel::window_x`]; the integral is split
/// at the samples and at `ξ = x`, where `G` has a cusp.
pub fn solve_profile(
    model: &DiffusionModel,
    phi: &SampledFunction,
    x_out: &[f64],
    t: f64,
    ctl: &SeriesControl,
) -> Result<Vec<f64>> {
    check_t(t)?;
    if phi.values().iter().all(|&v| v == 0.0) {
        return Ok(vec![0.0; x_out.len()]);
    }
    let w = model.window_x(t, ctl)?;
    let rule = quad::short_rule();
    x_out
        .iter()
        .map(|&x| {
            let lo = phi.t0().max(x - w);
            let hi = phi.end().min(x + w);
            if lo >= hi {
                return Ok(0.0);
            }
            let mut cuts = vec![lo, hi];
            if x > lo && x < hi {
                cuts.push(x);
            }
            let first = ((lo - phi.t0()) / phi.h()).ceil() as usize;
            let last = ((hi - phi.t0()) / phi.h()).floor() as usize;
            cuts.extend(
                (first..=last)
                    .map(|i| phi.t(i))
                    .filter(|&s| s > lo && s < hi),
            );
            cuts.sort_by(f64::total_cmp);
            cuts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * phi.h());
            let mut f = |xi: f64| -> Result<f64> {
                let v = phi.interpolate(xi).unwrap_or(0.0);
                if v == 0.0 {
                    return Ok(0.0);
                }
                Ok(green_x(model, x - xi, t, ctl)? * v)
            };
            let mut s = 0.0;
            for c in cuts.windows(2) {
                s += quad::panel_with(rule, &mut f, c[0], c[1])?;
            }
            Ok(s)
        })
        .collect()
}

/// Zero-frequency value of the Green's function: the mass `∫ G dx` that
/// [`DiffusionModel::mass`] should reproduce.
pub fn exact_mass(model: &DiffusionModel, t: f64) -> Result<f64> {
    check_t(t)?;
    Ok(match model.kind {
        DiffusionKind::Wyss => 1.0,
        DiffusionKind::Nigmatullin => t.powf(model.alpha - 1.0) / gamma(model.alpha),
    })
}
