//! TOML configuration: a required `[market]` table with the ten market
//! parameters and an optional `[solver]` table whose keys all have defaults.
//!
//! ```toml
//! [market]
//! alpha = 0.8
//! beta = 0.5
//! gamma = 0.8
//! l_a = 1.0
//! sigma_e = 40.0
//! sigma_c = 120.0
//! c_handover = 80.0
//! C_cache = 120.0
//! w = 1.0
//! p_bar = 100.0
//!
//! [solver]
//! method = "grid"
//! grid_points = 101
//! ```

use std::path::{Path, PathBuf};

use edgemarket_core::nash::NashOptions;
use edgemarket_core::oracle::{DEFAULT_NASH_RESOLUTION, DEFAULT_RESOLUTION};
use edgemarket_core::pricing::{
    PricingOptions, DEFAULT_GRID_POINTS, DEFAULT_PATIENCE, DEFAULT_REFINE_TOL,
};
use edgemarket_core::{demand, nash, MarketParams, ParamKey};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(#[from] edgemarket_core::Error),
    #[error("bad override `{0}`: expected key=value with a known market key")]
    Override(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PriceMethod {
    Grid,
    Subgradient,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub demand_tol: f64,
    pub nash_tol: f64,
    pub max_sweeps: usize,
    pub method: PriceMethod,
    pub grid_points: usize,
    pub refine_tol: f64,
    pub strict_conditions: bool,
    /// Sub-gradient start; `p̄/2` when unset.
    pub p0: Option<f64>,
    pub steps: usize,
    pub step0: Option<f64>,
    pub patience: usize,
    pub oracle_grid: usize,
    pub oracle_nash_grid: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            demand_tol: demand::DEFAULT_TOL,
            nash_tol: nash::DEFAULT_TOL,
            max_sweeps: nash::DEFAULT_MAX_SWEEPS,
            method: PriceMethod::Grid,
            grid_points: DEFAULT_GRID_POINTS,
            refine_tol: DEFAULT_REFINE_TOL,
            strict_conditions: false,
            p0: None,
            steps: 200,
            step0: None,
            patience: DEFAULT_PATIENCE,
            oracle_grid: DEFAULT_RESOLUTION,
            oracle_nash_grid: DEFAULT_NASH_RESOLUTION,
        }
    }
}

impl SolverConfig {
    pub fn nash_options(&self) -> NashOptions {
        NashOptions {
            tol: self.nash_tol,
            max_sweeps: self.max_sweeps,
            demand_tol: self.demand_tol,
            ..NashOptions::default()
        }
    }

    pub fn pricing_options(&self) -> PricingOptions {
        PricingOptions {
            nash: self.nash_options(),
            grid_points: self.grid_points,
            refine_tol: self.refine_tol,
            strict_conditions: self.strict_conditions,
            step0: self.step0,
            patience: self.patience,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub market: MarketParams,
    #[serde(default)]
    pub solver: SolverConfig,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let config: Config = toml::from_str(text)?;
        config.market.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Applies a `key=value` market override, e.g. `w=2`.
    pub fn apply_override(&mut self, assignment: &str) -> Result<(), ConfigError> {
        let bad = || ConfigError::Override(assignment.to_owned());
        let (key, value) = assignment.split_once('=').ok_or_else(bad)?;
        let key: ParamKey = key.trim().parse().map_err(|_| bad())?;
        let value: f64 = value.trim().parse().map_err(|_| bad())?;
        self.market.set(key, value);
        self.market.validate()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn market_only_config_uses_solver_defaults() {
        let text = Config::default().to_toml();
        let market_only = text.split("[solver]").next().unwrap();
        let config = Config::parse(market_only).unwrap();
        assert_eq!(config, Config::default());
        assert!(market_only.contains("C_cache"));
    }

    #[test]
    fn missing_key_is_named() {
        let text = "[market]\nalpha = 0.8\n";
        let err = Config::parse(text).unwrap_err().to_string();
        assert!(err.contains("beta"), "{err}");
    }

    #[test]
    fn unknown_key_is_named() {
        let mut text = Config::default().to_toml();
        text = text.replace("[solver]", "[solver]\nbogus_knob = 3");
        let err = Config::parse(&text).unwrap_err().to_string();
        assert!(err.contains("bogus_knob"), "{err}");
    }

    #[test]
    fn inadmissible_value_is_named() {
        let text = Config::default()
            .to_toml()
            .replace("alpha = 0.8", "alpha = 1.2");
        let err = Config::parse(&text).unwrap_err().to_string();
        assert!(err.contains("alpha"), "{err}");
    }

    #[test]
    fn overrides() {
        let mut config = Config::default();
        config.apply_override("w=2").unwrap();
        assert_eq!(config.market.w, 2.0);
        config.apply_override("C_cache = 140").unwrap();
        assert_eq!(config.market.c_cache, 140.0);
        assert!(config.apply_override("w").is_err());
        assert!(config.apply_override("omega=1").is_err());
        assert!(config.apply_override("alpha=2").is_err());
    }
}
