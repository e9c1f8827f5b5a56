use core::fmt;
use core::str::FromStr;

use crate::error::{check_unit, Error, Result};
use crate::model;

/// Exogenous constants of the market.
///
/// `Default` gives the reference configuration used throughout the test
/// suite: α = γ = 0.8, β = 0.5, l_a = 1, σ_e = 40, σ_c = 120, c = 80,
/// C = 120, w = 1, p̄ = 100.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct MarketParams {
    /// Demand curvature, in (0, 1).
    pub alpha: f64,
    /// Caching-quality curvature, in (0, 1).
    pub beta: f64,
    /// Advertisement-revenue curvature, in (0, 1).
    pub gamma: f64,
    /// Normalized advertisement amount per unit of content, in [0, 1].
    pub l_a: f64,
    /// Mobile-user utility coefficient.
    pub sigma_e: f64,
    /// Advertisement revenue coefficient.
    pub sigma_c: f64,
    /// Handover cost per unit of cached demand.
    pub c_handover: f64,
    /// Baseline caching cost per unit of effort.
    #[cfg_attr(feature = "serde", serde(rename = "C_cache"))]
    pub c_cache: f64,
    /// Delivery cost coefficient of the operator (cost is `w·x²`).
    pub w: f64,
    /// Price cap.
    pub p_bar: f64,
}

impl Default for MarketParams {
    fn default() -> Self {
        Self {
            alpha: 0.8,
            beta: 0.5,
            gamma: 0.8,
            l_a: 1.0,
            sigma_e: 40.0,
            sigma_c: 120.0,
            c_handover: 80.0,
            c_cache: 120.0,
            w: 1.0,
            p_bar: 100.0,
        }
    }
}

impl MarketParams {
    /// Advertisement discount `1 / (1 + l_a)`.
    pub fn tau(&self) -> f64 {
        1.0 / (1.0 + self.l_a)
    }

    pub fn validate(&self) -> Result<()> {
        let open_unit = |key, v: f64| {
            if v > 0.0 && v < 1.0 {
                Ok(())
            } else {
                Err(Error::InvalidParam { key, value: v })
            }
        };
        open_unit("alpha", self.alpha)?;
        open_unit("beta", self.beta)?;
        open_unit("gamma", self.gamma)?;
        if !(0.0..=1.0).contains(&self.l_a) {
            return Err(Error::InvalidParam {
                key: "l_a",
                value: self.l_a,
            });
        }
        for (key, v, strict) in [
            ("sigma_e", self.sigma_e, true),
            ("sigma_c", self.sigma_c, false),
            ("c_handover", self.c_handover, false),
            ("C_cache", self.c_cache, true),
            ("w", self.w, true),
            ("p_bar", self.p_bar, true),
        ] {
            let ok = v.is_finite() && if strict { v > 0.0 } else { v >= 0.0 };
            if !ok {
                return Err(Error::InvalidParam { key, value: v });
            }
        }
        Ok(())
    }

    pub fn get(&self, key: ParamKey) -> f64 {
        match key {
            ParamKey::Alpha => self.alpha,
            ParamKey::Beta => self.beta,
            ParamKey::Gamma => self.gamma,
            ParamKey::LA => self.l_a,
            ParamKey::SigmaE => self.sigma_e,
            ParamKey::SigmaC => self.sigma_c,
            ParamKey::CHandover => self.c_handover,
            ParamKey::CCache => self.c_cache,
            ParamKey::W => self.w,
            ParamKey::PBar => self.p_bar,
        }
    }

    pub fn set(&mut self, key: ParamKey, value: f64) {
        let slot = match key {
            ParamKey::Alpha => &mut self.alpha,
            ParamKey::Beta => &mut self.beta,
            ParamKey::Gamma => &mut self.gamma,
            ParamKey::LA => &mut self.l_a,
            ParamKey::SigmaE => &mut self.sigma_e,
            ParamKey::SigmaC => &mut self.sigma_c,
            ParamKey::CHandover => &mut self.c_handover,
            ParamKey::CCache => &mut self.c_cache,
            ParamKey::W => &mut self.w,
            ParamKey::PBar => &mut self.p_bar,
        };
        *slot = value;
    }

    pub fn with(mut self, key: ParamKey, value: f64) -> Self {
        self.set(key, value);
        self
    }

    pub(crate) fn check_price(&self, p: f64) -> Result<()> {
        if p >= 0.0 && p <= self.p_bar {
            Ok(())
        } else {
            Err(Error::Domain {
                name: "p",
                value: p,
            })
        }
    }
}

/// Names of the ten market parameters, spelled as in configuration files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ParamKey {
    Alpha,
    Beta,
    Gamma,
    LA,
    SigmaE,
    SigmaC,
    CHandover,
    CCache,
    W,
    PBar,
}

impl ParamKey {
    pub const ALL: [ParamKey; 10] = [
        ParamKey::Alpha,
        ParamKey::Beta,
        ParamKey::Gamma,
        ParamKey::LA,
        ParamKey::SigmaE,
        ParamKey::SigmaC,
        ParamKey::CHandover,
        ParamKey::CCache,
        ParamKey::W,
        ParamKey::PBar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ParamKey::Alpha => "alpha",
            ParamKey::Beta => "beta",
            ParamKey::Gamma => "gamma",
            ParamKey::LA => "l_a",
            ParamKey::SigmaE => "sigma_e",
            ParamKey::SigmaC => "sigma_c",
            ParamKey::CHandover => "c_handover",
            ParamKey::CCache => "C_cache",
            ParamKey::W => "w",
            ParamKey::PBar => "p_bar",
        }
    }
}

impl fmt::Display for ParamKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ParamKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ParamKey::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or(Error::UnknownParam)
    }
}

/// One point of the joint strategy space.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StrategyProfile {
    /// Operator's unit price.
    pub p: f64,
    /// Sponsorship factor.
    pub theta: f64,
    /// Caching effort.
    pub t: f64,
    /// Fraction of demand served as sponsored content.
    pub x: f64,
}

impl StrategyProfile {
    pub fn validate(&self, params: &MarketParams) -> Result<()> {
        params.check_price(self.p)?;
        check_unit("theta", self.theta)?;
        check_unit("t", self.t)?;
        check_unit("x", self.x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PayoffVector {
    pub mu_utility: f64,
    pub scsp_profit: f64,
    pub eccsp_profit: f64,
    pub wno_payoff: f64,
}

impl PayoffVector {
    pub fn evaluate(profile: &StrategyProfile, params: &MarketParams) -> Result<Self> {
        let StrategyProfile { p, theta, t, x } = *profile;
        Ok(Self {
            mu_utility: model::mu_utility(x, params, theta, t, p)?,
            scsp_profit: model::scsp_profit(x, theta, p, params)?,
            eccsp_profit: model::eccsp_profit(x, t, params)?,
            wno_payoff: model::wno_payoff(x, p, params)?,
        })
    }
}
