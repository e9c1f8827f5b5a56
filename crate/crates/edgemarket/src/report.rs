//! Result documents for the `solve`, `check` and `oracle` commands.

use std::io::Write;

use edgemarket_core::oracle::{self, GridSpec};
use edgemarket_core::pricing::{self, Method, StackelbergResult, StopReason, TracePoint};
use edgemarket_core::{
    check_conditions, ConditionReport, MarketParams, PayoffVector, StrategyProfile,
};
use serde::Serialize;

use crate::config::{Config, PriceMethod};
use crate::exit;
use crate::format::{flag, opt_flag, sig};

/// Full three-stage solve with the configured pricing method.
pub fn solve_config(config: &Config) -> edgemarket_core::Result<StackelbergResult> {
    let opts = config.solver.pricing_options();
    match config.solver.method {
        PriceMethod::Grid => pricing::solve_stackelberg_grid(&config.market, &opts),
        PriceMethod::Subgradient => {
            let p0 = config.solver.p0.unwrap_or(config.market.p_bar / 2.0);
            pricing::solve_stackelberg_subgradient(&config.market, p0, config.solver.steps, &opts)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub method: Method,
    pub stop: StopReason,
    pub converged: bool,
    pub at_price_cap: bool,
    pub nash_sweeps: usize,
    pub nash_last_step: f64,
    pub scsp_marginal: Option<f64>,
    pub eccsp_marginal: Option<f64>,
    pub concavity_warning: bool,
    pub price_evaluations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub params: MarketParams,
    pub profile: StrategyProfile,
    pub payoffs: PayoffVector,
    pub conditions: ConditionReport,
    pub diagnostics: Diagnostics,
    pub trace: Vec<TracePoint>,
}

impl SolveReport {
    pub fn exit_status(&self) -> i32 {
        status(self.diagnostics.converged, &self.conditions)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv_writer(out);
        w.write_record([
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
            "at_price_cap",
        ])?;
        let (p, f, c) = (&self.profile, &self.payoffs, &self.conditions);
        w.write_record([
            sig(p.p),
            sig(p.theta),
            sig(p.t),
            sig(p.x),
            sig(f.mu_utility),
            sig(f.scsp_profit),
            sig(f.eccsp_profit),
            sig(f.wno_payoff),
            opt_flag(c.cond_25.map(|c| c.holds)).to_owned(),
            opt_flag(c.cond_26.map(|c| c.holds)).to_owned(),
            flag(c.cond_27.holds).to_owned(),
            flag(c.cond_29.holds).to_owned(),
            flag(self.diagnostics.converged).to_owned(),
            flag(self.diagnostics.at_price_cap).to_owned(),
        ])?;
        w.flush()?;
        Ok(())
    }
}

fn status(converged: bool, conditions: &ConditionReport) -> i32 {
    if !converged {
        exit::NO_CONVERGENCE
    } else if conditions.any_violated() {
        exit::CONDITIONS_VIOLATED
    } else {
        exit::SUCCESS
    }
}

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

pub fn run_solve(config: &Config) -> edgemarket_core::Result<SolveReport> {
    let result = solve_config(config)?;
    let profile = result.lower.profile(result.p_star);
    Ok(SolveReport {
        params: config.market,
        profile,
        payoffs: PayoffVector::evaluate(&profile, &config.market)?,
        conditions: check_conditions(&profile, &config.market)?,
        diagnostics: Diagnostics {
            method: result.method,
            stop: result.stop,
            converged: result.converged(),
            at_price_cap: result.at_price_cap,
            nash_sweeps: result.lower.sweeps,
            nash_last_step: result.lower.last_step,
            scsp_marginal: result.lower.scsp_marginal,
            eccsp_marginal: result.lower.eccsp_marginal,
            concavity_warning: result.lower.concavity_warning,
            price_evaluations: result.trace.len(),
        },
        trace: result.trace,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub profile: StrategyProfile,
    pub converged: bool,
    pub conditions: ConditionReport,
}

impl CheckReport {
    pub fn exit_status(&self) -> i32 {
        status(self.converged, &self.conditions)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv_writer(out);
        w.write_record(["condition", "margin", "holds"])?;
        let c = &self.conditions;
        for (name, cond) in [
            ("cond_25", c.cond_25),
            ("cond_26", c.cond_26),
            ("cond_27", Some(c.cond_27)),
            ("cond_29", Some(c.cond_29)),
        ] {
            let margin = cond.map_or(String::new(), |c| sig(c.margin));
            w.write_record([name, &margin, opt_flag(cond.map(|c| c.holds))])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Solves the game, then evaluates the existence/uniqueness conditions at the equilibrium.
pub fn run_check(config: &Config) -> edgemarket_core::Result<CheckReport> {
    let result = solve_config(config)?;
    let profile = result.lower.profile(result.p_star);
    Ok(CheckReport {
        profile,
        converged: result.converged(),
        conditions: check_conditions(&profile, &config.market)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Comparison {
    pub solver: f64,
    pub oracle: f64,
    pub abs_dev: f64,
    /// Deviation allowed by the oracle's grid resolution.
    pub bound: f64,
}

impl Comparison {
    fn new(solver: f64, oracle: f64, bound: f64) -> Self {
        Self {
            solver,
            oracle,
            abs_dev: (solver - oracle).abs(),
            bound,
        }
    }

    pub fn within_bound(&self) -> bool {
        self.abs_dev <= self.bound
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub price_grid: usize,
    pub nash_grid: usize,
    pub best_x_grid: usize,
    pub converged: bool,
    pub p_star: Comparison,
    pub theta_star: Comparison,
    pub t_star: Comparison,
    pub x_star: Comparison,
    /// Worst unilateral grid deviation gain at the oracle's Nash profile.
    pub oracle_eps: f64,
    pub oracle_mutual_best_response: bool,
    /// Worst unilateral deviation gain at the solver's fixed point on the 1-D oracle grid.
    pub solver_deviation_gain: f64,
}

impl OracleReport {
    pub fn within_bounds(&self) -> bool {
        [self.p_star, self.theta_star, self.t_star, self.x_star]
            .iter()
            .all(Comparison::within_bound)
    }

    pub fn exit_status(&self) -> i32 {
        if self.converged {
            exit::SUCCESS
        } else {
            exit::NO_CONVERGENCE
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv_writer(out);
        w.write_record(["quantity", "solver", "oracle", "abs_dev", "bound"])?;
        for (name, c) in [
            ("p_star", self.p_star),
            ("theta_star", self.theta_star),
            ("t_star", self.t_star),
            ("x_star", self.x_star),
        ] {
            w.write_record([
                name.to_owned(),
                sig(c.solver),
                sig(c.oracle),
                sig(c.abs_dev),
                sig(c.bound),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Side-by-side solver and brute-force oracle values. `price_grid` sets
/// the price oracle resolution; the Nash and demand oracles use the
/// resolutions from the solver config.
pub fn run_oracle(config: &Config, price_grid: usize) -> edgemarket_core::Result<OracleReport> {
    let market = &config.market;
    let solver = &config.solver;
    let result = solve_config(config)?;
    let lower = &result.lower;
    let price = GridSpec::new(price_grid)?;
    let nash_grid = GridSpec::new(solver.oracle_nash_grid)?;
    let line = GridSpec::new(solver.oracle_grid)?;

    let best_price = oracle::oracle_price(market, price, &solver.nash_options())?;
    let nash = oracle::oracle_nash(result.p_star, market, nash_grid, solver.demand_tol)?;
    let best_x =
        oracle::oracle_best_x(lower.theta_star, lower.t_star, result.p_star, market, line)?;
    let gain = oracle::deviation_gain(
        lower.theta_star,
        lower.t_star,
        result.p_star,
        market,
        line,
        solver.demand_tol,
    )?;

    let nash_bound = 2.0 * nash_grid.spacing(1.0);
    Ok(OracleReport {
        price_grid,
        nash_grid: nash_grid.resolution(),
        best_x_grid: line.resolution(),
        converged: result.converged(),
        p_star: Comparison::new(result.p_star, best_price.p, price.spacing(market.p_bar)),
        theta_star: Comparison::new(lower.theta_star, nash.theta, nash_bound),
        t_star: Comparison::new(lower.t_star, nash.t, nash_bound),
        x_star: Comparison::new(lower.x_star, best_x, 2.0 * line.spacing(1.0)),
        oracle_eps: nash.eps,
        oracle_mutual_best_response: nash.is_eps_nash,
        solver_deviation_gain: gain,
    })
}
