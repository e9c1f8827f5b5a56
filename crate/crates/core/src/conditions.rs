//! Sufficient conditions for existence and uniqueness of the provider
//! equilibrium, evaluated at a concrete strategy profile.

use libm::pow;

use crate::error::Result;
use crate::model::power_ratio;
use crate::params::{MarketParams, StrategyProfile};

/// Left-hand side of a strict inequality `margin > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Condition {
    pub margin: f64,
    pub holds: bool,
}

impl Condition {
    pub fn from_margin(margin: f64) -> Self {
        Self {
            margin,
            holds: margin > 0.0,
        }
    }
}

/// The four condition checks. The two profile-dependent ones are `None`
/// when `x` sits on the boundary, where their power terms are singular.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConditionReport {
    /// `σ_c x^(−γ) − θp`
    pub cond_25: Option<Condition>,
    /// `−x^(−α−2) + g(t)(1−x)^(−α−2)`
    pub cond_26: Option<Condition>,
    /// `γ + α − 1`
    pub cond_27: Condition,
    /// `2α − 1`
    pub cond_29: Condition,
}

impl ConditionReport {
    /// Existence conditions all evaluated and true.
    pub fn existence_holds(&self) -> bool {
        self.cond_25.is_some_and(|c| c.holds)
            && self.cond_26.is_some_and(|c| c.holds)
            && self.cond_27.holds
    }

    /// True when any condition was evaluated and found false.
    pub fn any_violated(&self) -> bool {
        [
            self.cond_25,
            self.cond_26,
            Some(self.cond_27),
            Some(self.cond_29),
        ]
        .into_iter()
        .flatten()
        .any(|c| !c.holds)
    }
}

pub(crate) fn report_raw(profile: &StrategyProfile, params: &MarketParams) -> ConditionReport {
    let StrategyProfile { p, theta, t, x } = *profile;
    let (alpha, gamma) = (params.alpha, params.gamma);
    let interior = x > 0.0 && x < 1.0;
    let cond_25 =
        interior.then(|| Condition::from_margin(params.sigma_c * pow(x, -gamma) - theta * p));
    let cond_26 = interior.then(|| {
        let quality = power_ratio(t, params.beta);
        Condition::from_margin(-pow(x, -alpha - 2.0) + quality * pow(1.0 - x, -alpha - 2.0))
    });
    ConditionReport {
        cond_25,
        cond_26,
        cond_27: Condition::from_margin(gamma + alpha - 1.0),
        cond_29: Condition::from_margin(2.0 * alpha - 1.0),
    }
}

pub fn check_conditions(
    profile: &StrategyProfile,
    params: &MarketParams,
) -> Result<ConditionReport> {
    params.validate()?;
    profile.validate(params)?;
    Ok(report_raw(profile, params))
}
