use thiserror::Error;

use crate::{AgentId, ObjectId};

/// Construction and contract errors for core values.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error("universe holds {0} objects; at most {max} are supported", max = crate::MAX_OBJECTS)]
    UniverseTooLarge(usize),
    #[error("duplicate object name `{0}` in universe")]
    DuplicateName(String),
    #[error("empty object name in universe")]
    EmptyName,
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("object {0:?} ranked twice")]
    DuplicateInRanking(ObjectId),
    #[error("object index {0:?} outside the universe")]
    ObjectOutOfRange(ObjectId),
    #[error("cutoff {cutoff} exceeds ranking length {len}")]
    CutoffOutOfRange { cutoff: usize, len: usize },
    #[error("ranking covers {got} of {expected} universe objects")]
    IncompleteRanking { got: usize, expected: usize },
    #[error("object {0:?} is not acceptable, cannot truncate there")]
    TruncateAtUnacceptable(ObjectId),
    #[error("malformed preference `{0}`")]
    MalformedPreference(String),
    #[error("agent {0} appears twice")]
    DuplicateAgent(AgentId),
    #[error("agent {0} is not part of the problem")]
    UnknownAgent(AgentId),
    #[error("problem needs at least one agent")]
    NoAgents,
    #[error("{agents} agents but {prefs} preferences")]
    ProfileLength { agents: usize, prefs: usize },
    #[error("{agents} agents but {quotas} quotas")]
    QuotaLength { agents: usize, quotas: usize },
    #[error("quota must be at least 1")]
    ZeroQuota,
    #[error("available set must be nonempty in this model")]
    EmptyAvailable,
    #[error("available set is not contained in the universe")]
    AvailableOutsideUniverse,
    #[error("agent {0}: {1}")]
    VariantMismatch(AgentId, &'static str),
    #[error("priority is not a permutation of the agent set")]
    PriorityMismatch,
}

/// The first broken invariant of an allocation, as reported by
/// [`validate_allocation`](crate::validate_allocation).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AllocationViolation {
    #[error("allocation has {got} bundles for {expected} agents")]
    WrongAgentCount { expected: usize, got: usize },
    #[error("object {object:?} held by both agent {first} and agent {second}")]
    Overlap { first: AgentId, second: AgentId, object: ObjectId },
    #[error("agent {agent} holds {object:?}, which is not available")]
    OutsideAvailable { agent: AgentId, object: ObjectId },
    #[error("agent {agent} holds {size} objects, quota is {quota}")]
    QuotaBreach { agent: AgentId, size: usize, quota: usize },
}
