//! Rule-space search and theorem verification.

pub mod csp;
pub mod efficiency;
pub mod impossibility;
pub mod independence;
pub mod manipulation;
pub mod priority;
pub mod theorems;
pub mod uniqueness;

pub use csp::{
    CspError, InfeasibilityCertificate, ProofNode, RuleCsp, SolveMode, SolveOutcome, SolveResult, SolveStats, Step,
    DEFAULT_BUDGET,
};
pub use efficiency::{efficiency_equivalence, random_rule, random_rule_agreement, EquivalenceReport, RuleAgreement};
pub use impossibility::{replay_impossibility_cases, ReplayLog};
pub use independence::{alternative_counterexample, evaluate, Alternative, fixed_model, unacceptable_model, variable_model, Counterexample, IndependenceResult, Model};
pub use manipulation::{find_manipulation, find_manipulation_among, report_space, Manipulation};
pub use priority::{infer_priority, verify_extension_lemma, ExtensionLemmaReport, ExtensionVerdict, PriorityInferenceError};
pub use uniqueness::{survivors, survivors_of, UniquenessReport, CONJECTURE_NOTE, UNIQUENESS_LABEL};
pub use theorems::{verify, Outcome, Scale, TheoremReport, VerifyError, THEOREM_IDS};
