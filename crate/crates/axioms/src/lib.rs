//! Axiom checkers over finite problem domains.
//!
//! A check quantifies over every problem of a [`ProblemDomain`] and returns
//! an [`AxiomReport`]; violations carry a [`Witness`] that [`replay`] can
//! re-derive from the rule alone.

mod axiom;
mod domain;
pub mod msp;
mod trade;

pub use axiom::{check, check_allocation, check_at, check_some_priority, replay, Axiom, AxiomReport, Verdict, Witness, NEU_CAP};
pub use domain::{agents, canonical, ProblemDomain, ProfileMode};
pub use trade::{
    all_allocations, build_trade_relation, critical_agent, efficient_by_characterization, individually_rational,
    non_wasteful, non_wasteful_star, pareto_among, pareto_oracle, weakly_dominates, OracleRefused, TradeRelation,
    PARETO_CAP,
};
