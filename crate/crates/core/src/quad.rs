//! Gauss-Legendre quadrature with geometric grading toward a singular end.

use std::sync::OnceLock;

pub(crate) const GL_POINTS: usize = 20;

/// Nodes on [-1, 1] and weights, by Newton iteration on `P_n`.
fn legendre_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

pub(crate) fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| legendre_rule(GL_POINTS))
}

pub(crate) const SHORT_POINTS: usize = 6;

/// Low-order rule for panels on which the integrand is already well resolved.
pub(crate) fn short_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| legendre_rule(SHORT_POINTS))
}

/// `∫_a^b f` with one Gauss-Legendre panel.
pub(crate) fn panel<F, E>(f: &mut F, a: f64, b: f64) -> Result<f64, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    panel_with(rule(), f, a, b)
}

pub(crate) fn panel_with<F, E>(
    rule: &(Vec<f64>, Vec<f64>),
    f: &mut F,
    a: f64,
    b: f64,
) -> Result<f64, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    let (x, w) = rule;
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut s = 0.0;
    for (xi, wi) in x.iter().zip(w) {
        s += wi * f(mid + half * xi)?;
    }
    Ok(s * half)
}

/// `∫_a^b f` on panels `[a + (b-a) q^{k+1}, a + (b-a) q^k]`, graded toward
/// `a`, down to a gap of relative width `floor` which is skipped. The
/// integrand may have an integrable power singularity at `a`.
pub(crate) fn graded<F, E>(f: &mut F, a: f64, b: f64, ratio: f64, floor: f64) -> Result<f64, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    let len = b - a;
    let mut hi = 1.0;
    let mut s = 0.0;
    while hi > floor {
        let lo = (hi * ratio).max(floor);
        s += panel(f, a + len * lo, a + len * hi)?;
        hi = lo;
    }
    Ok(s)
}
