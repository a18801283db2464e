//! Gamma function support.
//!
//! Two tiers: a binary64 Lanczos approximation used on the fast series path,
//! and a double-double Stirling series (shifted to `x >= 30`, reflected for
//! `x < 1/2`) used wherever cancellation or the public API needs more digits.

use crate::dd::{sin_pi, Dd};

const HALF_LN_2PI: Dd = Dd {
    hi: 0.918_938_533_204_672_8,
    lo: -3.878_294_158_067_241_4e-17,
};
const LN_PI: Dd = Dd {
    hi: 1.144_729_885_849_400_2,
    lo: 1.026_595_116_270_782_6e-17,
};

/// Numerators and denominators of `B_{2k} / (2k (2k - 1))`.
const STIRLING: [(f64, f64); 13] = [
    (1.0, 12.0),
    (-1.0, 360.0),
    (1.0, 1260.0),
    (-1.0, 1680.0),
    (1.0, 1188.0),
    (-691.0, 360_360.0),
    (1.0, 156.0),
    (-3617.0, 122_400.0),
    (43_867.0, 244_188.0),
    (-174_611.0, 125_400.0),
    (77_683.0, 5796.0),
    (-236_364_091.0, 1_506_960.0),
    (657_931.0, 300.0),
];

const STIRLING_MIN: f64 = 30.0;

fn ln_gamma_stirling(x: Dd) -> Dd {
    let lnx = x.ln();
    let mut s = (x - Dd::new(0.5)) * lnx - x + HALF_LN_2PI;
    let inv = x.recip();
    let inv2 = inv * inv;
    let mut pow = inv;
    for &(num, den) in STIRLING.iter() {
        s = s + (Dd::new(num) / Dd::new(den)) * pow;
        pow = pow * inv2;
    }
    s
}

/// `ln Γ(x)` for `x > 0` in double-double.
pub(crate) fn ln_gamma_pos_dd(x: Dd) -> Dd {
    debug_assert!(x.hi > 0.0);
    if x.hi >= STIRLING_MIN {
        return ln_gamma_stirling(x);
    }
    let n = (STIRLING_MIN - x.hi).ceil() as u32;
    let mut prod = Dd::ONE;
    for i in 0..n {
        prod = prod * (x + Dd::new(i as f64));
    }
    ln_gamma_stirling(x + Dd::new(n as f64)) - prod.ln()
}

/// `(sign, ln|1/Γ(x)|)` in double-double. `sign == 0` at the poles of Γ,
/// where `1/Γ` vanishes and the logarithm is meaningless.
pub(crate) fn ln_rgamma_dd(x: Dd) -> (f64, Dd) {
    if x.hi <= 0.0 && x.lo == 0.0 && x.hi == x.hi.floor() {
        return (0.0, Dd::new(f64::NEG_INFINITY));
    }
    if x.hi >= 0.5 {
        return (1.0, -ln_gamma_pos_dd(x));
    }
    // 1/Γ(x) = sin(πx) Γ(1-x) / π
    let s = sin_pi(x);
    if s.hi == 0.0 {
        return (0.0, Dd::new(f64::NEG_INFINITY));
    }
    let sign = s.hi.signum();
    let ln = s.abs().ln() - LN_PI + ln_gamma_pos_dd(Dd::ONE - x);
    (sign, ln)
}

/// `1/Γ(x)` in double-double.
pub(crate) fn rgamma_dd(x: Dd) -> Dd {
    if x.hi > 0.0 && x.hi <= 24.0 {
        // Shift up so Stirling applies, then multiply the factors back.
        let n = (STIRLING_MIN - x.hi).ceil() as u32;
        let mut prod = Dd::ONE;
        for i in 0..n {
            prod = prod * (x + Dd::new(i as f64));
        }
        return prod * (-ln_gamma_stirling(x + Dd::new(n as f64))).exp();
    }
    let (sign, ln) = ln_rgamma_dd(x);
    if sign == 0.0 {
        return Dd::ZERO;
    }
    ln.exp().mul_f64(sign)
}

/// Reciprocal gamma function `1/Γ(x)`.
///
/// Total on the real line: the poles of Γ at `0, -1, -2, ...` map to an exact
/// zero, and large arguments underflow gracefully to zero.
pub fn reciprocal_gamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x == f64::INFINITY {
        return 0.0;
    }
    if x > 180.0 {
        return 0.0;
    }
    rgamma_dd(Dd::new(x)).to_f64()
}

/// Gamma function Γ(x). Returns ±∞ at the poles.
pub fn gamma(x: f64) -> f64 {
    let r = reciprocal_gamma(x);
    if r == 0.0 {
        if x <= 0.0 && x == x.floor() {
            return f64::INFINITY;
        }
        return if x > 0.0 { f64::INFINITY } else { 0.0 };
    }
    1.0 / r
}

/// `ln|Γ(x)|`; `+∞` at the poles.
pub fn ln_gamma(x: f64) -> f64 {
    let (sign, ln) = ln_rgamma_dd(Dd::new(x));
    if sign == 0.0 {
        return f64::INFINITY;
    }
    -ln.to_f64()
}

// Lanczos coefficients for g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
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

fn sin_pi_f64(x: f64) -> f64 {
    let r = x - 2.0 * (0.5 * x + 0.5).floor();
    if r == 0.0 {
        return 0.0;
    }
    let r = if r > 0.5 {
        1.0 - r
    } else if r < -0.5 {
        -1.0 - r
    } else {
        r
    };
    (std::f64::consts::PI * r).sin()
}

/// `ln Γ(x)` for `x >= 1/2`, binary64.
fn ln_gamma_lanczos(x: f64) -> f64 {
    let xm = x - 1.0;
    let mut a = LANCZOS[0];
    let t = xm + LANCZOS_G + 0.5;
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (xm + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (xm + 0.5) * t.ln() - t + a.ln()
}

/// Binary64 `(sign, ln|1/Γ(x)|)`; sign 0 at poles. Used on the fast path.
pub(crate) fn ln_rgamma_fast(x: f64) -> (f64, f64) {
    if x <= 0.0 && x == x.floor() {
        return (0.0, f64::NEG_INFINITY);
    }
    if x >= 0.5 {
        return (1.0, -ln_gamma_lanczos(x));
    }
    let s = sin_pi_f64(x);
    if s == 0.0 {
        return (0.0, f64::NEG_INFINITY);
    }
    let ln = s.abs().ln() - std::f64::consts::PI.ln() + ln_gamma_lanczos(1.0 - x);
    (s.signum(), ln)
}

/// Binary64 `1/Γ(x)`, accurate to a few ulps for moderate arguments.
pub(crate) fn rgamma_fast(x: f64) -> f64 {
    if x > 171.0 {
        return 0.0;
    }
    if (0.5..=20.0).contains(&x) {
        let xm = x - 1.0;
        let mut a = LANCZOS[0];
        let t = xm + LANCZOS_G + 0.5;
        for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
            a += c / (xm + i as f64);
        }
        let g = (2.0 * std::f64::consts::PI).sqrt() * t.powf(xm + 0.5) * (-t).exp() * a;
        return 1.0 / g;
    }
    let (sign, ln) = ln_rgamma_fast(x);
    if sign == 0.0 {
        return 0.0;
    }
    sign * ln.exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values: mpmath at 50 digits.
    const RG_REF: [(f64, f64); 8] = [
        (0.5, 0.564_189_583_547_756_3),
        (0.3, 0.334_272_752_564_190_54),
        (0.7, 0.770_383_183_866_565_9),
        (0.75, 0.816_048_939_098_262_9),
        (1.5, std::f64::consts::FRAC_2_SQRT_PI),
        (-0.5, -0.282_094_791_773_878_14),
        (-2.5, -1.057_855_469_152_043_3),
        (10.0, 2.755_731_922_398_589_1e-6),
    ];

    #[test]
    fn reciprocal_gamma_reference_values() {
        for &(x, want) in RG_REF.iter() {
            let got = reciprocal_gamma(x);
            assert!(
                ((got - want) / want).abs() < 1e-15,
                "1/Γ({x}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn reciprocal_gamma_poles_are_exact_zeros() {
        for k in 0..20 {
            assert_eq!(reciprocal_gamma(-(k as f64)), 0.0);
        }
        assert_eq!(reciprocal_gamma(1.0), 1.0);
        assert_eq!(reciprocal_gamma(2.0), 1.0);
    }

    #[test]
    fn factorials_to_full_precision() {
        let mut fact = 1.0f64;
        for n in 1..=170u32 {
            let g = gamma(n as f64);
            assert!(((g - fact) / fact).abs() < 2e-15, "Γ({n})");
            fact *= n as f64;
        }
    }

    #[test]
    fn ln_gamma_large_argument() {
        // ln Γ(1000) = 5905.2204232091812118...
        assert!((ln_gamma(1000.0) - 5_905.220_423_209_181).abs() < 1e-11);
    }

    #[test]
    fn fast_tier_agrees_with_double_double() {
        let mut x = -9.75;
        while x < 60.0 {
            let a = rgamma_fast(x);
            let b = reciprocal_gamma(x);
            assert!((a - b).abs() <= 1e-13 * b.abs(), "x = {x}: {a} vs {b}");
            x += 0.37;
        }
    }
}
