//! Three-stage leader/follower market between a wireless network operator,
//! a sponsored-content provider, an edge-caching provider and mobile users.
//!
//! The crate is `no_std` (it needs `alloc` for traces and oracle tables) and
//! solves the game by backward induction:
//!
//! * [`demand`]: the mobile user's split `x*(θ, t, p)` between sponsored and
//!   cached content, with closed-form sensitivities.
//! * [`nash`]: the simultaneous sponsorship/caching game for a fixed price.
//! * [`pricing`]: the operator's price, optimizing over the nested response.
//! * [`oracle`]: exhaustive grid references used to audit the solvers.
//!
//! ```
//! use edgemarket_core::{pricing, MarketParams};
//!
//! let params = MarketParams::default();
//! let result = pricing::solve_stackelberg_grid(&params, &pricing::PricingOptions::default()).unwrap();
//! assert!(result.at_price_cap);
//! ```

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod conditions;
pub mod demand;
mod error;
pub mod model;
pub mod nash;
pub mod oracle;
mod params;
pub mod pricing;
pub mod search;

pub use conditions::{check_conditions, Condition, ConditionReport};
pub use error::{Error, Result};
pub use params::{MarketParams, ParamKey, PayoffVector, StrategyProfile};
