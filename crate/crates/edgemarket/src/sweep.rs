//! One-parameter sweeps of the full three-stage solve.
//!
//! Each sweep point is solved from scratch, so points can run in parallel
//! and the output depends only on the configuration and the sweep definition.

use std::io::Write;

use edgemarket_core::{ParamKey, PayoffVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Config, ConfigError};
use crate::format::{flag, opt_flag, sig};
use crate::report::solve_config;

/// Parameters that may be swept.
pub const SWEEPABLE: [ParamKey; 7] = [
    ParamKey::PBar,
    ParamKey::W,
    ParamKey::SigmaE,
    ParamKey::SigmaC,
    ParamKey::CCache,
    ParamKey::CHandover,
    ParamKey::LA,
];

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub param: ParamKey,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    /// Fixed overrides applied before sweeping (one family curve).
    pub overrides: Vec<(ParamKey, f64)>,
}

impl SweepSpec {
    pub fn new(param: ParamKey, from: f64, to: f64, steps: usize) -> Self {
        Self {
            param,
            from,
            to,
            steps,
            overrides: Vec::new(),
        }
    }

    pub fn with_override(mut self, key: ParamKey, value: f64) -> Self {
        self.overrides.push((key, value));
        self
    }

    /// Inclusive, evenly spaced values; the last one is `to` exactly.
    pub fn values(&self) -> Vec<f64> {
        let span = self.to - self.from;
        let last = self.steps - 1;
        (0..self.steps)
            .map(|i| {
                if i == last {
                    self.to
                } else {
                    self.from + span * i as f64 / last as f64
                }
            })
            .collect()
    }

    /// Validates the sweep and returns the configuration for every sweep point.
    pub fn configs(&self, base: &Config) -> Result<Vec<Config>, ConfigError> {
        if !SWEEPABLE.contains(&self.param) {
            return Err(invalid(self.param, self.from));
        }
        if self.steps < 2 {
            return Err(edgemarket_core::Error::InvalidCount {
                name: "steps",
                value: self.steps,
            }
            .into());
        }
        if self.from.partial_cmp(&self.to) != Some(std::cmp::Ordering::Less) {
            return Err(invalid(self.param, self.from));
        }
        let mut fixed = base.clone();
        for &(key, value) in &self.overrides {
            fixed.market.set(key, value);
        }
        fixed.market.validate()?;
        self.values()
            .into_iter()
            .map(|v| {
                let mut point = fixed.clone();
                point.market.set(self.param, v);
                point.market.validate()?;
                Ok(point)
            })
            .collect()
    }
}

fn invalid(param: ParamKey, value: f64) -> ConfigError {
    edgemarket_core::Error::InvalidParam {
        key: param.name(),
        value,
    }
    .into()
}

/// One solved sweep point. Payoffs are recomputed from the strategy columns.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub swept_value: f64,
    pub p_star: f64,
    pub theta_star: f64,
    pub t_star: f64,
    pub x_star: f64,
    pub mu_utility: f64,
    pub scsp_profit: f64,
    pub eccsp_profit: f64,
    pub wno_payoff: f64,
    pub cond_25: Option<bool>,
    pub cond_26: Option<bool>,
    pub cond_27: bool,
    pub cond_29: bool,
    pub converged: bool,
}

pub const HEADER: [&str; 14] = [
    "swept_value",
    "p_star",
    "theta_star",
    "t_star",
    "x_star",
    "mu_utility",
    "scsp_profit",
    "eccsp_profit",
    "wno_payoff",
    "cond_25",
    "cond_26",
    "cond_27",
    "cond_29",
    "converged",
];

impl SweepRow {
    fn solve(swept_value: f64, config: &Config) -> Self {
        let solved = solve_config(config).and_then(|r| {
            let profile = r.lower.profile(r.p_star);
            PayoffVector::evaluate(&profile, &config.market).map(|payoffs| (r, profile, payoffs))
        });
        match solved {
            Ok((result, profile, payoffs)) => {
                let c = result.lower.conditions;
                SweepRow {
                    swept_value,
                    p_star: profile.p,
                    theta_star: profile.theta,
                    t_star: profile.t,
                    x_star: profile.x,
                    mu_utility: payoffs.mu_utility,
                    scsp_profit: payoffs.scsp_profit,
                    eccsp_profit: payoffs.eccsp_profit,
                    wno_payoff: payoffs.wno_payoff,
                    cond_25: c.cond_25.map(|c| c.holds),
                    cond_26: c.cond_26.map(|c| c.holds),
                    cond_27: c.cond_27.holds,
                    cond_29: c.cond_29.holds,
                    converged: result.converged(),
                }
            }
            Err(_) => SweepRow {
                swept_value,
                p_star: f64::NAN,
                theta_star: f64::NAN,
                t_star: f64::NAN,
                x_star: f64::NAN,
                mu_utility: f64::NAN,
                scsp_profit: f64::NAN,
                eccsp_profit: f64::NAN,
                wno_payoff: f64::NAN,
                cond_25: None,
                cond_26: None,
                cond_27: false,
                cond_29: false,
                converged: false,
            },
        }
    }

    pub fn any_condition_violated(&self) -> bool {
        [self.cond_25, self.cond_26]
            .into_iter()
            .flatten()
            .any(|h| !h)
            || !self.cond_27
            || !self.cond_29
    }

    fn record(&self) -> [String; 14] {
        [
            sig(self.swept_value),
            sig(self.p_star),
            sig(self.theta_star),
            sig(self.t_star),
            sig(self.x_star),
            sig(self.mu_utility),
            sig(self.scsp_profit),
            sig(self.eccsp_profit),
            sig(self.wno_payoff),
            opt_flag(self.cond_25).to_owned(),
            opt_flag(self.cond_26).to_owned(),
            flag(self.cond_27).to_owned(),
            flag(self.cond_29).to_owned(),
            flag(self.converged).to_owned(),
        ]
    }
}

/// Solves every sweep point (in parallel) and returns rows in sweep order.
pub fn run_sweep(base: &Config, spec: &SweepSpec) -> Result<Vec<SweepRow>, ConfigError> {
    let configs = spec.configs(base)?;
    let values = spec.values();
    Ok(values
        .par_iter()
        .zip(configs.par_iter())
        .map(|(&v, config)| SweepRow::solve(v, config))
        .collect())
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> csv::Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    writer.write_record(HEADER)?;
    for row in rows {
        writer.write_record(row.record())?;
    }
    writer.flush()?;
    Ok(())
}
