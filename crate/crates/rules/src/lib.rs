//! Allocation engines and rule combinators.
//!
//! The draft engines return the selection trace alongside the allocation.
//! Everything the axiom checkers and the rule-space search quantify over is a
//! [`Rule`]: a pure, shareable map from problems to allocations.

mod engine;
mod rule;

pub use engine::{
    draft, draft_priority, draft_quota, draft_variable, null_allocation, pi_dictatorship,
    serial_dictatorship, snake_draft, u_draft, Selection, SelectionTrace,
};
pub use rule::{
    CompleteExtensionRule, DraftRule, FnRule, KeyMode, NullRule, PiDictatorshipRule, Piecewise,
    Predicate, Rule, RuleRef, SequenceDraftRule, SerialDictatorshipRule, SnakeDraftRule, Tabulated,
};
