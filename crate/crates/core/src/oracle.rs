//! Exhaustive grid references for auditing the solvers.
//!
//! Only the decision variables `θ`, `t` and `p` are gridded. The user's
//! response inside the Nash and price oracles is the full-precision
//! root-finder solution, so the oracles audit one stage at a time.

use alloc::vec::Vec;

use crate::demand;
use crate::error::{check_tol, check_unit, Error, Result};
use crate::model::{eccsp_profit_raw, mu_utility_raw, scsp_profit_raw, wno_payoff_raw};
use crate::nash::{solve_nash, NashOptions};
use crate::params::MarketParams;

pub const DEFAULT_RESOLUTION: usize = 1001;
pub const DEFAULT_NASH_RESOLUTION: usize = 201;

/// Uniform grid of `resolution` points on `[0, 1]` (or `[0, p̄]`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    resolution: usize,
}

impl GridSpec {
    pub fn new(resolution: usize) -> Result<Self> {
        if resolution < 2 {
            return Err(Error::InvalidCount {
                name: "resolution",
                value: resolution,
            });
        }
        Ok(Self { resolution })
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    /// `i`-th node on `[0, upper]`; the last node is `upper` exactly.
    pub fn node(&self, i: usize, upper: f64) -> f64 {
        if i + 1 == self.resolution {
            upper
        } else {
            upper * i as f64 / (self.resolution - 1) as f64
        }
    }

    pub fn nodes(&self, upper: f64) -> impl Iterator<Item = f64> + '_ {
        (0..self.resolution).map(move |i| self.node(i, upper))
    }

    pub fn spacing(&self, upper: f64) -> f64 {
        upper / (self.resolution - 1) as f64
    }
}

/// Index and value of the first maximum.
fn first_max(values: impl Iterator<Item = f64>) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, v) in values.enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best
}

fn check_profile(theta: f64, t: f64, p: f64, params: &MarketParams) -> Result<()> {
    params.validate()?;
    check_unit("theta", theta)?;
    check_unit("t", t)?;
    params.check_price(p)
}

/// Grid point of `[0, 1]` with the highest user utility.
pub fn oracle_best_x(
    theta: f64,
    t: f64,
    p: f64,
    params: &MarketParams,
    grid: GridSpec,
) -> Result<f64> {
    check_profile(theta, t, p, params)?;
    let (i, _) = first_max(
        grid.nodes(1.0)
            .map(|x| mu_utility_raw(x, params, theta, t, p)),
    );
    Ok(grid.node(i, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct OracleNash {
    pub theta: f64,
    pub t: f64,
    /// The profile is a mutual grid best response.
    pub is_eps_nash: bool,
    /// Largest unilateral grid improvement available to either provider.
    pub eps: f64,
}

/// Grid Nash equilibrium of the provider game at price `p`.
///
/// Tabulates both profits on the `θ × t` grid, then returns the profile
/// whose worst unilateral grid deviation gain is smallest (zero for a mutual
/// best response). Ties go to the lowest `(θ, t)` index in row-major order.
pub fn oracle_nash(
    p: f64,
    params: &MarketParams,
    grid: GridSpec,
    demand_tol: f64,
) -> Result<OracleNash> {
    params.validate()?;
    params.check_price(p)?;
    check_tol(demand_tol)?;
    let n = grid.resolution();
    let mut sponsor = Vec::with_capacity(n * n);
    let mut cache = Vec::with_capacity(n * n);
    for theta in grid.nodes(1.0) {
        for t in grid.nodes(1.0) {
            let x = demand::solve(theta, t, p, params, demand_tol)?.x_star;
            sponsor.push(scsp_profit_raw(x, theta, p, params));
            cache.push(eccsp_profit_raw(x, t, params));
        }
    }
    let at = |i: usize, j: usize| i * n + j;
    let sponsor_best: Vec<f64> = (0..n)
        .map(|j| first_max((0..n).map(|i| sponsor[at(i, j)])).1)
        .collect();
    let cache_best: Vec<f64> = (0..n)
        .map(|i| first_max((0..n).map(|j| cache[at(i, j)])).1)
        .collect();

    let mut best = (0, 0, f64::INFINITY);
    for i in 0..n {
        for j in 0..n {
            let gain = (sponsor_best[j] - sponsor[at(i, j)]).max(cache_best[i] - cache[at(i, j)]);
            if gain < best.2 {
                best = (i, j, gain);
            }
        }
    }
    let (i, j, eps) = best;
    Ok(OracleNash {
        theta: grid.node(i, 1.0),
        t: grid.node(j, 1.0),
        is_eps_nash: eps <= 0.0,
        eps,
    })
}

/// Largest profit gain either provider can obtain by a unilateral move to a
/// grid point, starting from `(theta, t)`. Zero when no grid move helps.
pub fn deviation_gain(
    theta: f64,
    t: f64,
    p: f64,
    params: &MarketParams,
    grid: GridSpec,
    demand_tol: f64,
) -> Result<f64> {
    check_profile(theta, t, p, params)?;
    check_tol(demand_tol)?;
    let x = |th: f64, tt: f64| demand::solve(th, tt, p, params, demand_tol).map(|s| s.x_star);
    let x0 = x(theta, t)?;
    let sponsor_now = scsp_profit_raw(x0, theta, p, params);
    let cache_now = eccsp_profit_raw(x0, t, params);
    let mut gain: f64 = 0.0;
    for v in grid.nodes(1.0) {
        gain = gain.max(scsp_profit_raw(x(v, t)?, v, p, params) - sponsor_now);
        gain = gain.max(eccsp_profit_raw(x(theta, v)?, v, params) - cache_now);
    }
    Ok(gain)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct OraclePrice {
    pub p: f64,
    pub payoff: f64,
}

/// Grid price on `[0, p̄]` with the highest operator payoff, each lower
/// level solved by the Nash solver. Ties go to the lower price.
pub fn oracle_price(
    params: &MarketParams,
    grid: GridSpec,
    nash: &NashOptions,
) -> Result<OraclePrice> {
    params.validate()?;
    let mut best = OraclePrice {
        p: 0.0,
        payoff: f64::NEG_INFINITY,
    };
    for p in grid.nodes(params.p_bar) {
        let lower = solve_nash(p, params, nash)?;
        let payoff = wno_payoff_raw(lower.x_star, p, params);
        if payoff > best.payoff {
            best = OraclePrice { p, payoff };
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_requires_two_points() {
        assert!(GridSpec::new(1).is_err());
        let g = GridSpec::new(2).unwrap();
        assert_eq!(g.nodes(1.0).collect::<Vec<_>>(), [0.0, 1.0]);
    }

    #[test]
    fn best_x_without_cache_takes_everything() {
        let params = MarketParams::default();
        let grid = GridSpec::new(1001).unwrap();
        assert_eq!(oracle_best_x(1.0, 0.0, 100.0, &params, grid).unwrap(), 1.0);
    }

    #[test]
    fn two_point_grid_compares_endpoints() {
        let params = MarketParams::default();
        let grid = GridSpec::new(2).unwrap();
        let u0 = mu_utility_raw(0.0, &params, 0.5, 0.5, 100.0);
        let u1 = mu_utility_raw(1.0, &params, 0.5, 0.5, 100.0);
        let expected = if u1 > u0 { 1.0 } else { 0.0 };
        assert_eq!(
            oracle_best_x(0.5, 0.5, 100.0, &params, grid).unwrap(),
            expected
        );
    }

    #[test]
    fn nash_oracle_without_ad_revenue() {
        let params = MarketParams {
            sigma_c: 0.0,
            ..MarketParams::default()
        };
        let grid = GridSpec::new(21).unwrap();
        let o = oracle_nash(100.0, &params, grid, demand::DEFAULT_TOL).unwrap();
        assert_eq!((o.theta, o.t), (0.0, 0.0));
        assert_eq!(o.eps, 0.0);
        assert!(o.is_eps_nash);
    }

    #[test]
    fn deviation_gain_is_positive_away_from_equilibrium() {
        let params = MarketParams::default();
        let grid = GridSpec::new(101).unwrap();
        let gain = deviation_gain(1.0, 1.0, 100.0, &params, grid, demand::DEFAULT_TOL).unwrap();
        assert!(gain > 1.0);
    }
}
