//! Mobile-user best response.
//!
//! For fixed `(θ, t, p)` the user's utility is strictly concave in `x`, and
//! its first-order condition can be written as
//!
//! ```text
//! F(x) = x^(−α) − g(t)(1−x)^(−α) − [(1−θ)p − c] / (τσ_e) = 0
//! ```
//!
//! `F` is strictly decreasing on `(0, 1)`. For `t > 0` it runs from `+∞` to
//! `−∞`, so the root is interior and unique. For `t = 0` the cached term
//! vanishes and the root has a closed form, or the user takes everything
//! sponsored.

use libm::pow;

use crate::error::{check_tol, check_unit, Error, Result};
use crate::model::power_ratio;
use crate::params::MarketParams;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 200;
/// Distance of the root bracket from the singular endpoints.
pub const BRACKET_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Regime {
    Interior,
    ClampedLow,
    ClampedHigh,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DemandSolution {
    pub x_star: f64,
    pub boundary: Regime,
    /// `F(x_star)`; for clamped solutions, `F` at the bracket edge.
    pub residual: f64,
    pub iterations: usize,
}

/// Implicit derivatives of `x*` with respect to sponsorship and caching effort.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DemandSensitivities {
    pub dx_dtheta: f64,
    pub d2x_dtheta2: f64,
    pub dx_dt: f64,
    pub d2x_dt2: f64,
}

struct Stationarity {
    alpha: f64,
    quality: f64,
    rhs: f64,
}

impl Stationarity {
    fn new(theta: f64, t: f64, p: f64, params: &MarketParams) -> Self {
        Self {
            alpha: params.alpha,
            quality: power_ratio(t, params.beta),
            rhs: ((1.0 - theta) * p - params.c_handover) / (params.tau() * params.sigma_e),
        }
    }

    fn value(&self, x: f64) -> f64 {
        pow(x, -self.alpha) - self.quality * pow(1.0 - x, -self.alpha) - self.rhs
    }

    fn slope(&self, x: f64) -> f64 {
        -self.alpha * (pow(x, -self.alpha - 1.0) + self.quality * pow(1.0 - x, -self.alpha - 1.0))
    }
}

/// Best response of the mobile user to `(θ, t, p)`.
///
/// Bisection on `[ε, 1−ε]` safeguards Newton steps on `F`; the search stops
/// once `|F| ≤ tol` or the bracket has collapsed to machine precision.
pub fn best_response_x(
    theta: f64,
    t: f64,
    p: f64,
    params: &MarketParams,
    tol: f64,
) -> Result<DemandSolution> {
    params.validate()?;
    check_unit("theta", theta)?;
    check_unit("t", t)?;
    params.check_price(p)?;
    check_tol(tol)?;
    solve(theta, t, p, params, tol)
}

pub(crate) fn solve(
    theta: f64,
    t: f64,
    p: f64,
    params: &MarketParams,
    tol: f64,
) -> Result<DemandSolution> {
    let foc = Stationarity::new(theta, t, p, params);
    if t == 0.0 {
        return Ok(without_cache(&foc));
    }

    let mut lo = BRACKET_EPS;
    let mut hi = 1.0 - BRACKET_EPS;
    let f_lo = foc.value(lo);
    if f_lo <= 0.0 {
        return Ok(DemandSolution {
            x_star: 0.0,
            boundary: Regime::ClampedLow,
            residual: f_lo,
            iterations: 0,
        });
    }
    let f_hi = foc.value(hi);
    if f_hi >= 0.0 {
        return Ok(DemandSolution {
            x_star: 1.0,
            boundary: Regime::ClampedHigh,
            residual: f_hi,
            iterations: 0,
        });
    }

    let mut x = 0.5;
    let mut step_before_last = hi - lo;
    let mut last_step = step_before_last;
    for iteration in 1..=MAX_ITERATIONS {
        let fx = foc.value(x);
        if fx.abs() <= tol {
            return Ok(interior(x, fx, iteration));
        }
        if fx > 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            return Ok(interior(x, fx, iteration));
        }

        let newton = x - fx / foc.slope(x);
        let slow = (newton - x).abs() * 2.0 > step_before_last.abs();
        let next = if newton > lo && newton < hi && !slow {
            newton
        } else {
            0.5 * (lo + hi)
        };
        step_before_last = last_step;
        last_step = next - x;
        x = next;
    }
    Err(Error::NoConvergence {
        iterations: MAX_ITERATIONS,
        lo,
        hi,
    })
}

fn interior(x: f64, residual: f64, iterations: usize) -> DemandSolution {
    DemandSolution {
        x_star: x,
        boundary: Regime::Interior,
        residual,
        iterations,
    }
}

fn without_cache(foc: &Stationarity) -> DemandSolution {
    // F(x) = x^(−α) − rhs, and x^(−α) ≥ 1 on (0, 1].
    if foc.rhs > 1.0 {
        let x = pow(foc.rhs, -1.0 / foc.alpha);
        interior(x, foc.value(x), 0)
    } else {
        DemandSolution {
            x_star: 1.0,
            boundary: Regime::ClampedHigh,
            residual: 1.0 - foc.rhs,
            iterations: 0,
        }
    }
}

/// `x^(−α−1) + g(t)(1−x)^(−α−1)`, the bracket shared by every derivative.
fn spread(x: f64, alpha: f64, quality: f64) -> f64 {
    pow(x, -alpha - 1.0) + quality * pow(1.0 - x, -alpha - 1.0)
}

/// `−x^(−α−2) + g(t)(1−x)^(−α−2)`.
fn bend(x: f64, alpha: f64, quality: f64) -> f64 {
    -pow(x, -alpha - 2.0) + quality * pow(1.0 - x, -alpha - 2.0)
}

pub(crate) fn theta_derivatives(x: f64, t: f64, p: f64, params: &MarketParams) -> (f64, f64) {
    let alpha = params.alpha;
    let quality = power_ratio(t, params.beta);
    let scale = alpha * params.tau() * params.sigma_e;
    let d = spread(x, alpha, quality);
    let first = p / (scale * d);
    let second = bend(x, alpha, quality) * (-(alpha + 1.0) * p * p) / (scale * scale * d * d * d);
    (first, second)
}

pub(crate) fn effort_derivatives(x: f64, t: f64, params: &MarketParams) -> (f64, f64) {
    let (alpha, beta) = (params.alpha, params.beta);
    let quality = power_ratio(t, beta);
    let d = spread(x, alpha, quality);
    let pull = pow(t, -beta) * pow(1.0 - x, -alpha);
    let first = -pull / (alpha * d);
    let braces = 2.0 * pow(t, -beta) * pow(1.0 - x, -alpha - 1.0) / d
        + beta / t
        + (-(alpha + 1.0) * pull * bend(x, alpha, quality)) / (alpha * d * d);
    let second = pull / (alpha * d) * braces;
    (first, second)
}

/// Closed-form first and second derivatives of `x*` in `θ` and in `t`.
///
/// Requires an interior `x_star` and `t > 0`; the `t`-derivatives carry
/// `t^(−β)` and `1/t`.
pub fn sensitivities(
    x_star: f64,
    theta: f64,
    t: f64,
    p: f64,
    params: &MarketParams,
) -> Result<DemandSensitivities> {
    params.validate()?;
    check_unit("theta", theta)?;
    check_unit("t", t)?;
    params.check_price(p)?;
    if !(x_star > 0.0 && x_star < 1.0) {
        return Err(Error::Singular {
            name: "x_star",
            at: x_star,
        });
    }
    if t == 0.0 {
        return Err(Error::Singular { name: "t", at: t });
    }
    let (dx_dtheta, d2x_dtheta2) = theta_derivatives(x_star, t, p, params);
    let (dx_dt, d2x_dt2) = effort_derivatives(x_star, t, params);
    Ok(DemandSensitivities {
        dx_dtheta,
        d2x_dtheta2,
        dx_dt,
        d2x_dt2,
    })
}
