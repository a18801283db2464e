mod common;

use common::{bessel_i, integrate, integrate_from_zero, libm_gamma, rel};
use fracode::special_fn::{
    fractional_cos, fractional_sin, miller_ross_e, mittag_leffler, mittag_leffler_deriv, ml,
    rabotnov, MLPoint,
};
use fracode::wright::{mainardi, wright, WrightPoint};
use fracode::SeriesControl;
use proptest::prelude::*;

fn ctl() -> SeriesControl {
    SeriesControl::default()
}

/// Plain f64 summation of `Σ c_j`; returns the sum and `Σ |c_j|`, the
/// scale against which rounding in any summation order is measured.
fn series(mut term: impl FnMut(usize) -> f64) -> (f64, f64) {
    let mut s = 0.0;
    let mut abs = 0.0;
    let mut small = 0;
    for j in 0..2000 {
        let t = term(j);
        s += t;
        abs += t.abs();
        if t.abs() <= 1e-18 * s.abs() {
            small += 1;
            if small == 3 {
                break;
            }
        } else {
            small = 0;
        }
    }
    (s, abs)
}

fn close(got: f64, (want, scale): (f64, f64)) -> bool {
    (got - want).abs() <= 1e-12 * scale
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exponential(z in -10.0f64..10.0) {
        prop_assert!(rel(ml(1.0, 1.0, z, &ctl()).unwrap(), z.exp()) <= 1e-10);
    }

    #[test]
    fn exp_minus_one_over_z_and_sinh(z in 1e-3f64..10.0) {
        prop_assert!(rel(ml(1.0, 2.0, z, &ctl()).unwrap(), z.exp_m1() / z) <= 1e-10);
        let r = z.sqrt();
        prop_assert!(rel(ml(2.0, 2.0, z, &ctl()).unwrap(), r.sinh() / r) <= 1e-10);
    }

    #[test]
    fn hyperbolic_cosine(z in 0.0f64..25.0) {
        prop_assert!(rel(ml(2.0, 1.0, z, &ctl()).unwrap(), z.sqrt().cosh()) <= 1e-10);
    }

    #[test]
    fn derivative_matches_richardson_difference(
        alpha in 0.3f64..1.8,
        beta in 0.2f64..2.0,
        z in -2.0f64..2.0,
        k in 1u32..=3,
    ) {
        let d = |x: f64| mittag_leffler_deriv(&MLPoint::new(alpha, beta, k - 1, x).unwrap(), &ctl()).unwrap();
        let fd = |h: f64| (d(z + h) - d(z - h)) / (2.0 * h);
        let h = 1e-3;
        let rich = (4.0 * fd(h / 2.0) - fd(h)) / 3.0;
        let exact = mittag_leffler_deriv(&MLPoint::new(alpha, beta, k, z).unwrap(), &ctl()).unwrap();
        prop_assert!((rich - exact).abs() <= 1e-6 * exact.abs().max(1.0), "{} vs {}", rich, exact);
    }

    #[test]
    fn miller_ross_matches_its_series(nu in 0.0f64..3.0, a in -2.0f64..2.0, t in 0.1f64..3.0) {
        let want = series(|k| t.powf(nu) * (a * t).powi(k as i32) / libm_gamma(nu + k as f64 + 1.0));
        prop_assert!(close(miller_ross_e(nu, a, t, &ctl()).unwrap(), want));
    }

    #[test]
    fn rabotnov_matches_its_series(alpha in -0.5f64..1.5, beta in -1.0f64..1.0, t in 0.1f64..2.0) {
        let a1 = alpha + 1.0;
        let want = series(|n| beta.powi(n as i32) * t.powf(a1 * (n as f64 + 1.0) - 1.0) / libm_gamma(a1 * (n as f64 + 1.0)));
        prop_assert!(close(rabotnov(alpha, beta, t, &ctl()).unwrap(), want));
    }

    #[test]
    fn fractional_trig_match_their_series(alpha in 0.0f64..1.0, z in 0.1f64..2.0) {
        let a = 2.0 - alpha;
        let sc = series(|n| (-1f64).powi(n as i32) * z.powf(a * n as f64 + 1.0) / libm_gamma(a * n as f64 + 2.0));
        let cs = series(|n| (-1f64).powi(n as i32) * z.powf(a * n as f64) / libm_gamma(a * n as f64 + 1.0));
        prop_assert!(close(fractional_sin(alpha, z, &ctl()).unwrap(), sc));
        prop_assert!(close(fractional_cos(alpha, z, &ctl()).unwrap(), cs));
    }

    #[test]
    fn wright_exponential(z in -5.0f64..5.0) {
        let w = wright(&WrightPoint::new(z, 0.0, 1.0).unwrap(), &ctl()).unwrap();
        prop_assert!(rel(w, z.exp()) <= 1e-10);
    }

    #[test]
    fn wright_modified_bessel(x in 1e-3f64..5.0, nu in 0usize..=1) {
        let nu = nu as f64;
        let w = wright(&WrightPoint::new(x * x / 4.0, 1.0, nu + 1.0).unwrap(), &ctl()).unwrap();
        prop_assert!(rel((x / 2.0).powf(nu) * w, bessel_i(nu, x)) <= 1e-9);
    }

    #[test]
    fn mainardi_gaussian(z in 0.0f64..4.0) {
        let want = (-z * z / 4.0).exp() / std::f64::consts::PI.sqrt();
        prop_assert!(rel(mainardi(z, 0.5, &ctl()).unwrap(), want) <= 1e-10);
    }

    #[test]
    fn wright_series_terminates(
        alpha in prop::sample::select(vec![-0.9, -0.5, -0.1, 0.5, 1.0]),
        z in -10.0f64..10.0,
        beta in 0.1f64..2.0,
    ) {
        match wright(&WrightPoint::new(z, alpha, beta).unwrap(), &ctl()) {
            Ok(v) => prop_assert!(v.is_finite()),
            Err(fracode::FracError::NotConverged { .. }) => prop_assert!(false, "did not terminate"),
            Err(_) => {}
        }
    }
}

#[test]
fn plain_function_and_k_zero_derivative_agree_bitwise() {
    for &(a, b, z) in &[(0.5, 0.5, -1.0), (1.3, 0.7, 2.5), (0.8, -1.0, -3.0)] {
        let p = MLPoint::new(a, b, 0, z).unwrap();
        assert_eq!(
            mittag_leffler(&p, &ctl()).unwrap().to_bits(),
            mittag_leffler_deriv(&p, &ctl()).unwrap().to_bits()
        );
    }
}

/// `∫_0^∞ e^{-pt} t^{αk+β-1} E^{(k)}_{α,β}(a t^α) dt`.
fn laplace_of_ml(alpha: f64, beta: f64, k: u32, a: f64, p: f64) -> f64 {
    let mut f = |t: f64| {
        let e = mittag_leffler_deriv(
            &MLPoint::new(alpha, beta, k, a * t.powf(alpha)).unwrap(),
            &ctl(),
        )
        .unwrap();
        (-p * t).exp() * t.powf(alpha * k as f64 + beta - 1.0) * e
    };
    integrate_from_zero(&mut f, 1.0) + integrate(&mut f, 1.0, 22.0, 42)
}

#[test]
fn laplace_pair() {
    let p = 2.0;
    let cases = [
        (0.5, 0.5, 0, -1.0),
        (0.5, 1.0, 1, -1.0),
        (0.8, 1.2, 0, -0.5),
        (1.5, 1.0, 2, -1.0),
        (0.3, 0.7, 0, -0.2),
        (1.2, 2.0, 1, -0.7),
    ];
    for (alpha, beta, k, a) in cases {
        let got = laplace_of_ml(alpha, beta, k, a, p);
        let fact: f64 = (1..=k).map(f64::from).product();
        let want = fact * p.powf(alpha - beta) / (p.powf(alpha) - a).powi(k as i32 + 1);
        assert!(
            rel(got, want) <= 1e-6,
            "{alpha} {beta} {k} {a}: {got} vs {want}"
        );
    }
}

#[test]
fn laplace_pair_semi_derivative_case() {
    let p = 2.0;
    for k in 0..3u32 {
        let got = laplace_of_ml(0.5, 0.5, k, -1.0, p);
        let fact: f64 = (1..=k).map(f64::from).product();
        let want = fact / (p.sqrt() + 1.0).powi(k as i32 + 1);
        assert!(rel(got, want) <= 1e-6, "k={k}: {got} vs {want}");
    }
}
