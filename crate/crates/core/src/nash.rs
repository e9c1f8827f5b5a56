//! Sponsorship/caching game between the two content providers at a fixed
//! operator price.
//!
//! Each provider's profit depends on the rival only through the user's
//! response `x*(θ, t, p)`. The equilibrium is found by alternating exact
//! best responses (sponsor first, then cache) until the profile stops moving.

use libm::pow;

use crate::conditions::{report_raw, ConditionReport};
use crate::demand::{self, effort_derivatives, theta_derivatives};
use crate::error::{check_tol, check_unit, Error, Result};
use crate::model::{eccsp_profit_raw, scsp_profit_raw};
use crate::params::{MarketParams, StrategyProfile};
use crate::search::{bisect_sign_change, golden_section_max};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_SWEEPS: usize = 500;
/// Golden-section steps on `[0, 1]`; leaves an interval below 1e-10.
const GOLDEN_STEPS: usize = 48;
/// Grid used when a best-response candidate fails the curvature check.
const FALLBACK_GRID: usize = 1001;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct NashOptions {
    /// Max-norm movement of `(θ, t)` over one sweep that counts as converged.
    pub tol: f64,
    pub max_sweeps: usize,
    /// Residual tolerance handed to the user best-response solver.
    pub demand_tol: f64,
    /// Starting `(θ, t)`.
    pub initial: (f64, f64),
}

impl Default for NashOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_sweeps: DEFAULT_MAX_SWEEPS,
            demand_tol: demand::DEFAULT_TOL,
            initial: (0.5, 0.5),
        }
    }
}

impl NashOptions {
    pub fn starting_at(self, theta: f64, t: f64) -> Self {
        Self {
            initial: (theta, t),
            ..self
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        check_tol(self.tol)?;
        check_tol(self.demand_tol)?;
        if self.max_sweeps == 0 {
            return Err(Error::InvalidCount {
                name: "max_sweeps",
                value: 0,
            });
        }
        check_unit("initial theta", self.initial.0)?;
        check_unit("initial t", self.initial.1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BestResponse {
    pub value: f64,
    pub profit: f64,
    /// False when the profit curvature was positive at the search candidate;
    /// `value` is then the best point of a fine grid.
    pub concave: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct NashSolution {
    pub theta_star: f64,
    pub t_star: f64,
    pub x_star: f64,
    pub scsp_profit: f64,
    pub eccsp_profit: f64,
    pub converged: bool,
    pub sweeps: usize,
    /// Max-norm movement of the final sweep.
    pub last_step: f64,
    pub conditions: ConditionReport,
    /// Sponsor's marginal profit at the fixed point (`None` if `x*` is on the boundary).
    pub scsp_marginal: Option<f64>,
    /// Cache's marginal profit at the fixed point (`None` if `x*` is on the boundary or `t* = 0`).
    pub eccsp_marginal: Option<f64>,
    /// Some best response in the final sweep failed its curvature check.
    pub concavity_warning: bool,
}

impl NashSolution {
    pub fn profile(&self, p: f64) -> StrategyProfile {
        StrategyProfile {
            p,
            theta: self.theta_star,
            t: self.t_star,
            x: self.x_star,
        }
    }
}

/// Shared state for profit evaluations at one price: remembers the first
/// root-finder failure so the searches can stay infallible.
struct Market<'a> {
    params: &'a MarketParams,
    p: f64,
    demand_tol: f64,
    failure: Option<Error>,
}

impl<'a> Market<'a> {
    fn new(params: &'a MarketParams, p: f64, demand_tol: f64) -> Self {
        Self {
            params,
            p,
            demand_tol,
            failure: None,
        }
    }

    fn x(&mut self, theta: f64, t: f64) -> f64 {
        match demand::solve(theta, t, self.p, self.params, self.demand_tol) {
            Ok(sol) => sol.x_star,
            Err(e) => {
                self.failure.get_or_insert(e);
                f64::NAN
            }
        }
    }

    fn finish<T>(self, value: T) -> Result<T> {
        match self.failure {
            Some(e) => Err(e),
            None => Ok(value),
        }
    }
}

fn interior(x: f64) -> bool {
    x > 0.0 && x < 1.0
}

pub(crate) fn scsp_marginal_raw(x: f64, theta: f64, t: f64, p: f64, params: &MarketParams) -> f64 {
    let (dx, _) = theta_derivatives(x, t, p, params);
    params.sigma_c * pow(x, -params.gamma) * dx - p * x - theta * p * dx
}

pub(crate) fn scsp_curvature_raw(x: f64, theta: f64, t: f64, p: f64, params: &MarketParams) -> f64 {
    let (dx, d2x) = theta_derivatives(x, t, p, params);
    let (sigma_c, gamma) = (params.sigma_c, params.gamma);
    -gamma * sigma_c * pow(x, -gamma - 1.0) * dx * dx + sigma_c * pow(x, -gamma) * d2x
        - 2.0 * p * dx
        - theta * p * d2x
}

pub(crate) fn eccsp_marginal_raw(x: f64, t: f64, params: &MarketParams) -> f64 {
    let (dx, _) = effort_derivatives(x, t, params);
    -params.sigma_c * pow(1.0 - x, -params.gamma) * dx - params.c_cache
}

pub(crate) fn eccsp_curvature_raw(x: f64, t: f64, params: &MarketParams) -> f64 {
    let (dx, d2x) = effort_derivatives(x, t, params);
    let (sigma_c, gamma) = (params.sigma_c, params.gamma);
    -gamma * sigma_c * pow(1.0 - x, -gamma - 1.0) * dx * dx - sigma_c * pow(1.0 - x, -gamma) * d2x
}

trait Objective {
    fn profit(&mut self, v: f64) -> f64;
    fn marginal(&mut self, v: f64) -> Option<f64>;
    fn curvature(&mut self, v: f64) -> Option<f64>;
}

struct Sponsor<'m, 'a> {
    market: &'m mut Market<'a>,
    t: f64,
}

impl Objective for Sponsor<'_, '_> {
    fn profit(&mut self, theta: f64) -> f64 {
        let x = self.market.x(theta, self.t);
        scsp_profit_raw(x, theta, self.market.p, self.market.params)
    }

    fn marginal(&mut self, theta: f64) -> Option<f64> {
        let x = self.market.x(theta, self.t);
        interior(x).then(|| scsp_marginal_raw(x, theta, self.t, self.market.p, self.market.params))
    }

    fn curvature(&mut self, theta: f64) -> Option<f64> {
        let x = self.market.x(theta, self.t);
        interior(x).then(|| scsp_curvature_raw(x, theta, self.t, self.market.p, self.market.params))
    }
}

struct Cache<'m, 'a> {
    market: &'m mut Market<'a>,
    theta: f64,
}

impl Objective for Cache<'_, '_> {
    fn profit(&mut self, t: f64) -> f64 {
        let x = self.market.x(self.theta, t);
        eccsp_profit_raw(x, t, self.market.params)
    }

    fn marginal(&mut self, t: f64) -> Option<f64> {
        let x = self.market.x(self.theta, t);
        (interior(x) && t > 0.0).then(|| eccsp_marginal_raw(x, t, self.market.params))
    }

    fn curvature(&mut self, t: f64) -> Option<f64> {
        let x = self.market.x(self.theta, t);
        (interior(x) && t > 0.0).then(|| eccsp_curvature_raw(x, t, self.market.params))
    }
}

/// Maximizer of a profit on `[0, 1]`: golden section, comparison with both
/// endpoints (ties go to the smaller value), then bisection on the marginal
/// profit when the maximizer is interior.
fn best_on_unit(obj: &mut impl Objective) -> BestResponse {
    let (golden, golden_profit) = golden_section_max(|v| obj.profit(v), 0.0, 1.0, GOLDEN_STEPS);
    let mut best = 0.0;
    let mut best_profit = obj.profit(0.0);
    for (v, pv) in [(golden, golden_profit), (1.0, obj.profit(1.0))] {
        if pv > best_profit {
            best = v;
            best_profit = pv;
        }
    }

    if best > 0.0 && best < 1.0 {
        if let Some(root) = refine(obj, best) {
            let root_profit = obj.profit(root);
            if root_profit >= best_profit - 1e-12 * (1.0 + best_profit.abs()) {
                best = root;
                best_profit = root_profit;
            }
        }
    }

    let concave = !(best > 0.0 && best < 1.0) || obj.curvature(best).is_none_or(|c| c <= 0.0);
    if !concave {
        for i in 0..FALLBACK_GRID {
            let v = i as f64 / (FALLBACK_GRID - 1) as f64;
            let pv = obj.profit(v);
            if pv > best_profit {
                best = v;
                best_profit = pv;
            }
        }
    }
    BestResponse {
        value: best,
        profit: best_profit,
        concave,
    }
}

/// Grows a bracket around `guess` until the marginal profit changes sign
/// from positive to negative, then bisects it.
fn refine(obj: &mut impl Objective, guess: f64) -> Option<f64> {
    let mut half_width = 1e-6;
    loop {
        let lo = (guess - half_width).max(0.0);
        let hi = (guess + half_width).min(1.0);
        let (m_lo, m_hi) = (obj.marginal(lo)?, obj.marginal(hi)?);
        if m_lo > 0.0 && m_hi < 0.0 {
            return Some(bisect_sign_change(
                |v| obj.marginal(v).unwrap_or(f64::NAN),
                lo,
                hi,
                200,
            ));
        }
        if lo == 0.0 && hi == 1.0 {
            return None;
        }
        half_width *= 8.0;
    }
}

fn check_inputs(p: f64, params: &MarketParams, tol: f64) -> Result<()> {
    params.validate()?;
    params.check_price(p)?;
    check_tol(tol)
}

/// Sponsor's profit-maximizing `θ` against caching effort `t`.
/// `tol` is the residual tolerance of the inner user best response.
pub fn scsp_best_response(t: f64, p: f64, params: &MarketParams, tol: f64) -> Result<BestResponse> {
    check_inputs(p, params, tol)?;
    check_unit("t", t)?;
    let mut market = Market::new(params, p, tol);
    let br = best_on_unit(&mut Sponsor {
        market: &mut market,
        t,
    });
    market.finish(br)
}

/// Cache's profit-maximizing effort `t` against sponsorship `θ`.
pub fn eccsp_best_response(
    theta: f64,
    p: f64,
    params: &MarketParams,
    tol: f64,
) -> Result<BestResponse> {
    check_inputs(p, params, tol)?;
    check_unit("theta", theta)?;
    let mut market = Market::new(params, p, tol);
    let br = best_on_unit(&mut Cache {
        market: &mut market,
        theta,
    });
    market.finish(br)
}

fn interior_x(theta: f64, t: f64, p: f64, params: &MarketParams, tol: f64) -> Result<f64> {
    let x = demand::solve(theta, t, p, params, tol)?.x_star;
    if interior(x) {
        Ok(x)
    } else {
        Err(Error::Singular {
            name: "x_star",
            at: x,
        })
    }
}

/// `∂Π_s/∂θ` through the implicit response `x*(θ)`.
pub fn scsp_marginal_profit(
    theta: f64,
    t: f64,
    p: f64,
    params: &MarketParams,
    tol: f64,
) -> Result<f64> {
    check_inputs(p, params, tol)?;
    check_unit("theta", theta)?;
    check_unit("t", t)?;
    let x = interior_x(theta, t, p, params, tol)?;
    Ok(scsp_marginal_raw(x, theta, t, p, params))
}

/// `∂²Π_s/∂θ²`.
pub fn scsp_profit_curvature(
    theta: f64,
    t: f64,
    p: f64,
    params: &MarketParams,
    tol: f64,
) -> Result<f64> {
    check_inputs(p, params, tol)?;
    check_unit("theta", theta)?;
    check_unit("t", t)?;
    let x = interior_x(theta, t, p, params, tol)?;
    Ok(scsp_curvature_raw(x, theta, t, p, params))
}

/// `∂Π_e/∂t = −σ_c (1−x*)^(−γ) ∂x*/∂t − C`.
pub fn eccsp_marginal_profit(
    theta: f64,
    t: f64,
    p: f64,
    params: &MarketParams,
    tol: f64,
) -> Result<f64> {
    check_inputs(p, params, tol)?;
    check_unit("theta", theta)?;
    check_unit("t", t)?;
    if t == 0.0 {
        return Err(Error::Singular { name: "t", at: t });
    }
    let x = interior_x(theta, t, p, params, tol)?;
    Ok(eccsp_marginal_raw(x, t, params))
}

/// `∂²Π_e/∂t²`.
pub fn eccsp_profit_curvature(
    theta: f64,
    t: f64,
    p: f64,
    params: &MarketParams,
    tol: f64,
) -> Result<f64> {
    check_inputs(p, params, tol)?;
    check_unit("theta", theta)?;
    check_unit("t", t)?;
    if t == 0.0 {
        return Err(Error::Singular { name: "t", at: t });
    }
    let x = interior_x(theta, t, p, params, tol)?;
    Ok(eccsp_curvature_raw(x, t, params))
}

/// Provider equilibrium at price `p` by alternating best responses.
///
/// Returns the last iterate with `converged = false` when `max_sweeps` runs
/// out; this can happen when the uniqueness condition `2α − 1 > 0` fails.
pub fn solve_nash(p: f64, params: &MarketParams, opts: &NashOptions) -> Result<NashSolution> {
    params.validate()?;
    params.check_price(p)?;
    opts.validate()?;
    let mut market = Market::new(params, p, opts.demand_tol);
    let (mut theta, mut t) = opts.initial;
    let mut converged = false;
    let mut sweeps = 0;
    let mut last_step = f64::INFINITY;
    let mut concavity_warning = false;

    while sweeps < opts.max_sweeps {
        sweeps += 1;
        let sponsor = best_on_unit(&mut Sponsor {
            market: &mut market,
            t,
        });
        let cache = best_on_unit(&mut Cache {
            market: &mut market,
            theta: sponsor.value,
        });
        if let Some(e) = market.failure.take() {
            return Err(e);
        }
        last_step = (sponsor.value - theta).abs().max((cache.value - t).abs());
        theta = sponsor.value;
        t = cache.value;
        concavity_warning = !(sponsor.concave && cache.concave);
        if last_step <= opts.tol {
            converged = true;
            break;
        }
    }

    let x = market.x(theta, t);
    let conditions = report_raw(&StrategyProfile { p, theta, t, x }, params);
    let solution = NashSolution {
        theta_star: theta,
        t_star: t,
        x_star: x,
        scsp_profit: scsp_profit_raw(x, theta, p, params),
        eccsp_profit: eccsp_profit_raw(x, t, params),
        converged,
        sweeps,
        last_step,
        conditions,
        scsp_marginal: interior(x).then(|| scsp_marginal_raw(x, theta, t, p, params)),
        eccsp_marginal: (interior(x) && t > 0.0).then(|| eccsp_marginal_raw(x, t, params)),
        concavity_warning,
    };
    market.finish(solution)
}
