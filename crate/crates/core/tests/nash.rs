use edgemarket_core::demand::{best_response_x, sensitivities};
use edgemarket_core::nash::{
    eccsp_best_response, eccsp_profit_curvature, scsp_best_response, scsp_profit_curvature,
    solve_nash, NashOptions,
};
use edgemarket_core::oracle::{deviation_gain, GridSpec};
use edgemarket_core::MarketParams;

const TOL: f64 = 1e-10;

#[test]
fn fixed_point_does_not_depend_on_the_start() {
    let m = MarketParams::default();
    for &p in &[100.0, 70.0, 40.0] {
        let base = solve_nash(p, &m, &NashOptions::default()).unwrap();
        assert!(base.converged);
        for &(theta, t) in &[(0.0, 0.0), (1.0, 1.0), (0.0, 1.0), (1.0, 0.0)] {
            let other = solve_nash(p, &m, &NashOptions::default().starting_at(theta, t)).unwrap();
            assert!(other.converged);
            assert!(
                (other.theta_star - base.theta_star).abs() < 1e-4,
                "p={p} start=({theta},{t})"
            );
            assert!(
                (other.t_star - base.t_star).abs() < 1e-4,
                "p={p} start=({theta},{t})"
            );
        }
    }
}

#[test]
fn fixed_point_is_a_grid_epsilon_nash() {
    let m = MarketParams::default();
    let nash = solve_nash(100.0, &m, &NashOptions::default()).unwrap();
    let eps = deviation_gain(
        nash.theta_star,
        nash.t_star,
        100.0,
        &m,
        GridSpec::new(1001).unwrap(),
        TOL,
    )
    .unwrap();
    assert!(eps <= 1e-6, "{eps}");
    assert!(!nash.concavity_warning);
    assert!(nash.scsp_marginal.unwrap().abs() < 1e-6);
    assert!(nash.eccsp_marginal.unwrap().abs() < 1e-6);
}

#[test]
fn each_player_best_responds_at_the_fixed_point() {
    let m = MarketParams::default();
    let nash = solve_nash(100.0, &m, &NashOptions::default()).unwrap();
    let s = scsp_best_response(nash.t_star, 100.0, &m, TOL).unwrap();
    let e = eccsp_best_response(nash.theta_star, 100.0, &m, TOL).unwrap();
    assert!((s.value - nash.theta_star).abs() < 1e-6 && s.concave);
    assert!((e.value - nash.t_star).abs() < 1e-6 && e.concave);
}

// Sponsor profit turns convex in θ only for small θ against large t.
#[test]
fn profits_are_concave_around_the_equilibrium() {
    let m = MarketParams::default();
    for i in 3..=8 {
        for j in 2..=6 {
            let (theta, t) = (i as f64 / 10.0, j as f64 / 10.0);
            let x = best_response_x(theta, t, 100.0, &m, TOL).unwrap();
            if x.x_star <= 0.0 || x.x_star >= 1.0 {
                continue;
            }
            assert!(
                scsp_profit_curvature(theta, t, 100.0, &m, TOL).unwrap() < 0.0,
                "({theta},{t})"
            );
            assert!(
                eccsp_profit_curvature(theta, t, 100.0, &m, TOL).unwrap() < 0.0,
                "({theta},{t})"
            );
        }
    }
}

#[test]
fn cache_curvature_sign_identity() {
    let m = MarketParams::default();
    for i in 1..10 {
        for j in 1..10 {
            let (theta, t) = (i as f64 / 10.0, j as f64 / 10.0);
            let x = best_response_x(theta, t, 100.0, &m, TOL).unwrap().x_star;
            if x <= 0.0 || x >= 1.0 {
                continue;
            }
            let s = sensitivities(x, theta, t, 100.0, &m).unwrap();
            let lhs = m.gamma / (1.0 - x) * s.dx_dt * s.dx_dt + s.d2x_dt2;
            assert!(lhs > 0.0, "({theta},{t}): {lhs}");
        }
    }
}

#[test]
fn no_ad_revenue_means_no_investment() {
    let m = MarketParams {
        sigma_c: 0.0,
        ..MarketParams::default()
    };
    let nash = solve_nash(100.0, &m, &NashOptions::default()).unwrap();
    assert!(nash.converged);
    assert!(nash.theta_star.abs() < 1e-9 && nash.t_star.abs() < 1e-9);
}
