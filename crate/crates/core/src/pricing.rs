//! Operator pricing over the nested provider/user response.
//!
//! The operator's payoff `p·x* − w·x*²` is a function of price alone once the
//! provider equilibrium `(θ*, t*)` and the user's `x*` are solved for every
//! candidate price. Two routes maximize it: a uniform grid with golden-section
//! refinement, and a projected sub-gradient ascent with finite-difference
//! slopes through the full lower-level solve.

use alloc::vec::Vec;

use libm::sqrt;

use crate::error::{check_tol, Error, Result};
use crate::model::wno_payoff_raw;
use crate::nash::{solve_nash, NashOptions, NashSolution};
use crate::params::MarketParams;
use crate::search::{golden_iterations, golden_section_max};

pub const DEFAULT_GRID_POINTS: usize = 101;
pub const DEFAULT_REFINE_TOL: f64 = 1e-6;
pub const DEFAULT_PATIENCE: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Method {
    SubGradient,
    GridRefine,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum StopReason {
    /// The grid and its refinement were fully evaluated.
    GridComplete,
    /// The projected step left the price unchanged.
    Stationary,
    /// `patience` consecutive steps without a better payoff.
    NoImprovement,
    StepLimit,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct PricingOptions {
    pub nash: NashOptions,
    pub grid_points: usize,
    /// Width at which golden-section refinement of the grid optimum stops.
    pub refine_tol: f64,
    /// Skip prices whose lower-level equilibrium violates the existence conditions.
    pub strict_conditions: bool,
    /// Initial sub-gradient step; `p̄/10` when unset.
    pub step0: Option<f64>,
    /// Sub-gradient steps without improvement before stopping.
    pub patience: usize,
}

impl Default for PricingOptions {
    fn default() -> Self {
        Self {
            nash: NashOptions::default(),
            grid_points: DEFAULT_GRID_POINTS,
            refine_tol: DEFAULT_REFINE_TOL,
            strict_conditions: false,
            step0: None,
            patience: DEFAULT_PATIENCE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PriceEvaluation {
    pub p: f64,
    pub lower: NashSolution,
    pub payoff: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct TracePoint {
    pub p: f64,
    pub payoff: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct StackelbergResult {
    pub p_star: f64,
    pub lower: NashSolution,
    pub wno_payoff: f64,
    pub method: Method,
    pub trace: Vec<TracePoint>,
    /// `p_star` lies within one grid cell of `p̄`.
    pub at_price_cap: bool,
    pub stop: StopReason,
}

impl StackelbergResult {
    /// The lower-level equilibrium at `p_star` converged.
    pub fn converged(&self) -> bool {
        self.lower.converged
    }
}

/// Provider equilibrium at `p` and the operator payoff it induces.
pub fn evaluate_price(
    p: f64,
    params: &MarketParams,
    opts: &NashOptions,
) -> Result<PriceEvaluation> {
    let lower = solve_nash(p, params, opts)?;
    Ok(PriceEvaluation {
        p,
        lower,
        payoff: wno_payoff_raw(lower.x_star, p, params),
    })
}

fn finish(
    best: PriceEvaluation,
    params: &MarketParams,
    opts: &PricingOptions,
    method: Method,
    trace: Vec<TracePoint>,
    stop: StopReason,
) -> StackelbergResult {
    let cell = params.p_bar / (opts.grid_points.max(2) - 1) as f64;
    StackelbergResult {
        p_star: best.p,
        lower: best.lower,
        wno_payoff: best.payoff,
        method,
        trace,
        at_price_cap: params.p_bar - best.p <= cell,
        stop,
    }
}

fn check_options(params: &MarketParams, opts: &PricingOptions) -> Result<()> {
    params.validate()?;
    if opts.grid_points < 2 {
        return Err(Error::InvalidCount {
            name: "grid_points",
            value: opts.grid_points,
        });
    }
    check_tol(opts.refine_tol)
}

/// Grid search over `[0, p̄]` followed by golden-section refinement inside
/// the cells adjacent to the best grid price. Ties go to the lower price.
pub fn solve_stackelberg_grid(
    params: &MarketParams,
    opts: &PricingOptions,
) -> Result<StackelbergResult> {
    check_options(params, opts)?;
    let n = opts.grid_points;
    let admissible =
        |e: &PriceEvaluation| !opts.strict_conditions || e.lower.conditions.existence_holds();

    let mut trace = Vec::with_capacity(n + 64);
    let mut best: Option<(usize, PriceEvaluation)> = None;
    for i in 0..n {
        let p = price_node(i, n, params.p_bar);
        let eval = evaluate_price(p, params, &opts.nash)?;
        trace.push(TracePoint {
            p,
            payoff: eval.payoff,
        });
        if admissible(&eval) && best.as_ref().is_none_or(|(_, b)| eval.payoff > b.payoff) {
            best = Some((i, eval));
        }
    }
    let (index, mut best) = best.ok_or(Error::NoAdmissiblePrice)?;

    let lo = price_node(index.saturating_sub(1), n, params.p_bar);
    let hi = price_node((index + 1).min(n - 1), n, params.p_bar);
    let mut failure = None;
    let (p_refined, _) = golden_section_max(
        |p| match evaluate_price(p, params, &opts.nash) {
            Ok(e) => {
                trace.push(TracePoint {
                    p,
                    payoff: e.payoff,
                });
                if admissible(&e) {
                    e.payoff
                } else {
                    f64::NEG_INFINITY
                }
            }
            Err(err) => {
                failure.get_or_insert(err);
                f64::NEG_INFINITY
            }
        },
        lo,
        hi,
        golden_iterations(hi - lo, opts.refine_tol),
    );
    if let Some(err) = failure {
        return Err(err);
    }
    let refined = evaluate_price(p_refined, params, &opts.nash)?;
    if admissible(&refined) && refined.payoff > best.payoff {
        best = refined;
    }
    Ok(finish(
        best,
        params,
        opts,
        Method::GridRefine,
        trace,
        StopReason::GridComplete,
    ))
}

fn price_node(i: usize, n: usize, p_bar: f64) -> f64 {
    if i + 1 == n {
        p_bar
    } else {
        p_bar * i as f64 / (n - 1) as f64
    }
}

/// Projected sub-gradient ascent on the operator payoff.
///
/// Step `k` moves `p ← clamp(p + η₀/√k · slope, 0, p̄)` where the slope is a
/// symmetric difference of width `max(1e-4·p̄, 1e-6)` (one-sided at the
/// bounds). Returns the best iterate seen.
pub fn solve_stackelberg_subgradient(
    params: &MarketParams,
    p0: f64,
    steps: usize,
    opts: &PricingOptions,
) -> Result<StackelbergResult> {
    check_options(params, opts)?;
    params.check_price(p0)?;
    if steps == 0 {
        return Err(Error::InvalidCount {
            name: "steps",
            value: 0,
        });
    }
    let p_bar = params.p_bar;
    let step0 = opts.step0.unwrap_or(p_bar / 10.0);
    check_tol(step0)?;
    let width = (1e-4 * p_bar).max(1e-6);

    let mut current = evaluate_price(p0, params, &opts.nash)?;
    let mut best = current;
    let mut trace = Vec::with_capacity(steps + 1);
    trace.push(TracePoint {
        p: current.p,
        payoff: current.payoff,
    });
    let mut stale = 0;
    let mut stop = StopReason::StepLimit;

    for k in 1..=steps {
        let p = current.p;
        let (lo, hi) = ((p - width).max(0.0), (p + width).min(p_bar));
        let slope = (evaluate_price(hi, params, &opts.nash)?.payoff
            - evaluate_price(lo, params, &opts.nash)?.payoff)
            / (hi - lo);
        let next = (p + step0 / sqrt(k as f64) * slope).clamp(0.0, p_bar);
        if next == p {
            stop = StopReason::Stationary;
            break;
        }
        current = evaluate_price(next, params, &opts.nash)?;
        trace.push(TracePoint {
            p: current.p,
            payoff: current.payoff,
        });
        if current.payoff > best.payoff {
            best = current;
            stale = 0;
        } else {
            stale += 1;
            if stale >= opts.patience {
                stop = StopReason::NoImprovement;
                break;
            }
        }
    }
    Ok(finish(best, params, opts, Method::SubGradient, trace, stop))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_price_earns_nothing_but_pays_delivery() {
        let params = MarketParams::default();
        let e = evaluate_price(0.0, &params, &NashOptions::default()).unwrap();
        assert!(e.payoff <= 0.0);
        assert_eq!(e.payoff, -params.w * e.lower.x_star * e.lower.x_star);
    }

    #[test]
    fn payoff_is_recomputable() {
        let params = MarketParams::default();
        let e = evaluate_price(100.0, &params, &NashOptions::default()).unwrap();
        let x = e.lower.x_star;
        assert!((e.payoff - (100.0 * x - x * x)).abs() <= 1e-12);
    }

    #[test]
    fn higher_price_pays_more_at_reference() {
        let params = MarketParams::default();
        let opts = NashOptions::default();
        let high = evaluate_price(100.0, &params, &opts).unwrap().payoff;
        let low = evaluate_price(50.0, &params, &opts).unwrap().payoff;
        assert!(high > low);
    }

    #[test]
    fn rejects_degenerate_requests() {
        let params = MarketParams::default();
        let opts = PricingOptions::default();
        assert!(solve_stackelberg_subgradient(&params, 50.0, 0, &opts).is_err());
        assert!(solve_stackelberg_subgradient(&params, 150.0, 10, &opts).is_err());
        let one = PricingOptions {
            grid_points: 1,
            ..opts
        };
        assert!(solve_stackelberg_grid(&params, &one).is_err());
    }

    #[test]
    fn grid_nodes_end_exactly_at_cap() {
        assert_eq!(price_node(100, 101, 100.0), 100.0);
        assert_eq!(price_node(0, 101, 100.0), 0.0);
        assert_eq!(price_node(9, 11, 0.7), 0.7 * 9.0 / 10.0);
    }
}
