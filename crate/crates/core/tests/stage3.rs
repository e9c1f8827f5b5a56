use edgemarket_core::demand::{best_response_x, sensitivities, Regime};
use edgemarket_core::model::mu_utility;
use edgemarket_core::oracle::{oracle_best_x, GridSpec};
use edgemarket_core::MarketParams;
use proptest::prelude::*;

const TOL: f64 = 1e-12;

/// Root of the user's first-order condition by plain bisection.
fn reference_x(theta: f64, t: f64, p: f64, m: &MarketParams) -> f64 {
    let rhs = ((1.0 - theta) * p - m.c_handover) / (m.tau() * m.sigma_e);
    let q = t.powf(1.0 - m.beta) / (1.0 - m.beta);
    let foc = |x: f64| x.powf(-m.alpha) - q * (1.0 - x).powf(-m.alpha) - rhs;
    let (mut lo, mut hi) = (1e-15, 1.0 - 1e-15);
    if foc(lo) <= 0.0 {
        return 0.0;
    }
    if foc(hi) >= 0.0 {
        return 1.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if foc(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn market() -> impl Strategy<Value = MarketParams> {
    (
        0.55..0.95f64,
        0.1..0.9f64,
        0.0..1.0f64,
        20.0..80.0f64,
        0.0..150.0f64,
    )
        .prop_map(|(alpha, beta, l_a, sigma_e, c)| MarketParams {
            alpha,
            beta,
            l_a,
            sigma_e,
            c_handover: c,
            ..MarketParams::default()
        })
}

fn x_at(theta: f64, t: f64, p: f64, m: &MarketParams) -> f64 {
    best_response_x(theta, t, p, m, TOL).unwrap().x_star
}

#[test]
fn beats_a_thousand_point_grid() {
    let m = MarketParams::default();
    for &(theta, t, p) in &[
        (0.5, 0.5, 100.0),
        (0.0, 0.1, 20.0),
        (1.0, 1.0, 100.0),
        (0.3, 0.0, 90.0),
    ] {
        let x = x_at(theta, t, p, &m);
        let u = mu_utility(x, &m, theta, t, p).unwrap();
        for i in 0..=1000 {
            let y = i as f64 / 1000.0;
            assert!(
                u >= mu_utility(y, &m, theta, t, p).unwrap() - 1e-9,
                "x={x} y={y}"
            );
        }
    }
}

#[test]
fn reference_point() {
    let s = best_response_x(0.5, 0.5, 100.0, &MarketParams::default(), 1e-10).unwrap();
    assert!((s.x_star - 0.6076848301369726).abs() < 1e-9);
    assert_eq!(s.boundary, Regime::Interior);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn agrees_with_bisection_and_grid(m in market(), theta in 0.0..=1.0f64, t in 0.0..=1.0f64, frac in 0.0..=1.0f64) {
        let p = frac * m.p_bar;
        let x = x_at(theta, t, p, &m);
        prop_assert!((x - reference_x(theta, t, p, &m)).abs() < 1e-8);
        let grid = oracle_best_x(theta, t, p, &m, GridSpec::new(2001).unwrap()).unwrap();
        prop_assert!((x - grid).abs() <= 1e-3, "{} vs {}", x, grid);
    }

    #[test]
    fn sensitivities_match_finite_differences(m in market(), theta in 0.05..0.95f64, t in 0.05..0.95f64, frac in 0.0..=1.0f64) {
        let p = frac * m.p_bar;
        let x = x_at(theta, t, p, &m);
        prop_assume!(x > 0.02 && x < 0.98);
        let s = sensitivities(x, theta, t, p, &m).unwrap();
        let h = 1e-4;
        let fd = |f: &dyn Fn(f64) -> f64, v: f64| {
            let (a, b, c) = (f(v - h), f(v), f(v + h));
            ((c - a) / (2.0 * h), (c - 2.0 * b + a) / (h * h))
        };
        let close = |analytic: f64, numeric: f64, rel: f64| (analytic - numeric).abs() <= rel * analytic.abs().max(1e-3);
        let (d1, d2) = fd(&|v| reference_x(v, t, p, &m), theta);
        prop_assert!(close(s.dx_dtheta, d1, 1e-3), "{} vs {}", s.dx_dtheta, d1);
        prop_assert!(close(s.d2x_dtheta2, d2, 1e-2), "{} vs {}", s.d2x_dtheta2, d2);
        let (d1, d2) = fd(&|v| reference_x(theta, v, p, &m), t);
        prop_assert!(close(s.dx_dt, d1, 1e-3), "{} vs {}", s.dx_dt, d1);
        prop_assert!(close(s.d2x_dt2, d2, 1e-2), "{} vs {}", s.d2x_dt2, d2);
    }
}
