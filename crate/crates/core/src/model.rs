//! Closed-form utilities and payoffs of every market participant.
//!
//! Total user demand is normalized to one: the user takes a fraction `x`
//! as sponsored content through the operator and `1 − x` from the edge
//! cache. Payoffs at `x ∈ {0, 1}` use `0^(1−k) = 0`; derivative terms such
//! as `x^(−α)` are never evaluated here.

use libm::pow;

use crate::error::{check_unit, Error, Result};
use crate::params::MarketParams;

/// `v^(1−k) / (1−k)`, the shared shape of the demand, quality and
/// advertisement functions. Callers guarantee `v ≥ 0` and `0 < k < 1`.
#[inline]
pub(crate) fn power_ratio(v: f64, k: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        pow(v, 1.0 - k) / (1.0 - k)
    }
}

fn check_curvature(name: &'static str, k: f64) -> Result<()> {
    if k > 0.0 && k < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain { name, value: k })
    }
}

/// Content utility `y^(1−α) / (1−α)`.
pub fn f_demand(y: f64, alpha: f64) -> Result<f64> {
    check_unit("y", y)?;
    check_curvature("alpha", alpha)?;
    Ok(power_ratio(y, alpha))
}

/// Delivery quality of cached content for caching effort `t`.
pub fn g_quality(t: f64, beta: f64) -> Result<f64> {
    check_unit("t", t)?;
    check_curvature("beta", beta)?;
    Ok(power_ratio(t, beta))
}

/// Advertisement revenue shape for traffic share `x`.
pub fn h_ad(x: f64, gamma: f64) -> Result<f64> {
    check_unit("x", x)?;
    check_curvature("gamma", gamma)?;
    Ok(power_ratio(x, gamma))
}

pub(crate) fn mu_utility_raw(x: f64, params: &MarketParams, theta: f64, t: f64, p: f64) -> f64 {
    let scale = params.tau() * params.sigma_e;
    scale * power_ratio(x, params.alpha)
        + scale * power_ratio(t, params.beta) * power_ratio(1.0 - x, params.alpha)
        - (1.0 - x) * params.c_handover
        - (1.0 - theta) * x * p
}

/// Utility of a mobile user taking fraction `x` as sponsored content.
///
/// The sponsored half is `τσ_e f(x) − (1−θ)px`, the cached half is
/// `τσ_e f(1−x) g(t) − (1−x)c`.
pub fn mu_utility(x: f64, params: &MarketParams, theta: f64, t: f64, p: f64) -> Result<f64> {
    params.validate()?;
    check_unit("x", x)?;
    check_unit("theta", theta)?;
    check_unit("t", t)?;
    params.check_price(p)?;
    Ok(mu_utility_raw(x, params, theta, t, p))
}

pub(crate) fn scsp_profit_raw(x: f64, theta: f64, p: f64, params: &MarketParams) -> f64 {
    params.sigma_c * power_ratio(x, params.gamma) - theta * p * x
}

/// Advertisement revenue of the sponsor minus the sponsorship it pays.
pub fn scsp_profit(x: f64, theta: f64, p: f64, params: &MarketParams) -> Result<f64> {
    params.validate()?;
    check_unit("x", x)?;
    check_unit("theta", theta)?;
    params.check_price(p)?;
    Ok(scsp_profit_raw(x, theta, p, params))
}

pub(crate) fn eccsp_profit_raw(x: f64, t: f64, params: &MarketParams) -> f64 {
    params.sigma_c * power_ratio(1.0 - x, params.gamma) - params.c_cache * t
}

/// Advertisement revenue on cached traffic minus the caching cost `C·t`.
pub fn eccsp_profit(x: f64, t: f64, params: &MarketParams) -> Result<f64> {
    params.validate()?;
    check_unit("x", x)?;
    check_unit("t", t)?;
    Ok(eccsp_profit_raw(x, t, params))
}

pub(crate) fn wno_payoff_raw(x: f64, p: f64, params: &MarketParams) -> f64 {
    p * x - params.w * x * x
}

/// Operator revenue `p·x` minus the quadratic delivery cost `w·x²`.
pub fn wno_payoff(x: f64, p: f64, params: &MarketParams) -> Result<f64> {
    params.validate()?;
    check_unit("x", x)?;
    params.check_price(p)?;
    Ok(wno_payoff_raw(x, p, params))
}
