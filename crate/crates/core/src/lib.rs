//! Core value types for sequential (draft) allocation of indivisible objects.
//!
//! Objects live in a finite declared [`Universe`] and are addressed by dense
//! indices; a [`Bundle`] is a bitset over that universe. A [`Preference`] is a
//! strict ranking of objects with an optional acceptability cutoff, and a
//! [`Problem`] ties together a population, an available set, one preference
//! per agent, and a model variant (fixed, quota, unacceptable objects, or
//! variable population).
//!
//! Everything here is an immutable value: construction validates invariants
//! and every operation is a pure function.

mod bundle;
mod error;
mod ids;
mod preference;
mod priority;
mod problem;

pub use bundle::Bundle;
pub use error::{AllocationViolation, CoreError};
pub use ids::{AgentId, ObjectId, Pick, Universe, MAX_OBJECTS};
pub use preference::Preference;
pub use priority::{PickingSequence, Priority};
pub use problem::{
    validate_allocation, Allocation, Problem, ProblemKey, Profile, Quota, Quotas, Variant,
    VariantTag,
};
