//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use num_complex::Complex64;
use std::f64::consts::PI;

/// Fixed Talbot inversion of `F` at `t` with `m` nodes.
pub fn talbot(f: impl Fn(Complex64) -> Complex64, t: f64, m: usize) -> f64 {
    let r = 2.0 * m as f64 / (5.0 * t);
    let mut s = 0.5 * (f(Complex64::new(r, 0.0)) * (r * t).exp()).re;
    for k in 1..m {
        let th = k as f64 * PI / m as f64;
        let cot = th.cos() / th.sin();
        let p = Complex64::new(r * th * cot, r * th);
        let sigma = th + (th * cot - 1.0) * cot;
        s += ((p * t).exp() * f(p) * Complex64::new(1.0, sigma)).re;
    }
    r / m as f64 * s
}

/// `p^a` on the principal branch.
pub fn cpow(p: Complex64, a: f64) -> Complex64 {
    p.powf(a)
}

/// Complementary error function for moderate arguments (`0 <= x <= 3`)
/// from the Maclaurin series of erf.
pub fn erfc(x: f64) -> f64 {
    let mut term = x;
    let mut sum = x;
    let x2 = x * x;
    for n in 1..200 {
        term *= -x2 / n as f64;
        let add = term / (2 * n + 1) as f64;
        sum += add;
        if add.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    1.0 - 2.0 / PI.sqrt() * sum
}

fn legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
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
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// `∫_a^b f` with `panels` equal 24-point Gauss-Legendre panels.
pub fn integrate(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let (x, w) = legendre(24);
    let h = (b - a) / panels as f64;
    let mut s = 0.0;
    for k in 0..panels {
        let mid = a + (k as f64 + 0.5) * h;
        for (xi, wi) in x.iter().zip(&w) {
            s += wi * f(mid + 0.5 * h * xi);
        }
    }
    0.5 * h * s
}

/// `∫_0^b f` for `f` with an integrable power singularity at 0: geometric
/// panels toward the origin down to `b · 1e-14`.
pub fn integrate_from_zero(f: &mut dyn FnMut(f64) -> f64, b: f64) -> f64 {
    let mut hi = b;
    let mut s = 0.0;
    while hi > b * 1e-14 {
        let lo = 0.2 * hi;
        s += integrate(f, lo, hi, 1);
        hi = lo;
    }
    s
}

/// Modified Bessel `I_ν(x)` from its ascending series.
pub fn bessel_i(nu: f64, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = half.powf(nu) / libm_gamma(nu + 1.0);
    let mut s = term;
    for k in 1..200 {
        term *= half * half / (k as f64 * (k as f64 + nu));
        s += term;
        if term < 1e-18 * s {
            break;
        }
    }
    s
}

/// Gamma for the small positive arguments used above (Lanczos, g = 7).
pub fn libm_gamma(x: f64) -> f64 {
    const C: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        return PI / ((PI * x).sin() * libm_gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut a = C[0];
    let t = x + 7.5;
    for (i, c) in C.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

pub fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}
