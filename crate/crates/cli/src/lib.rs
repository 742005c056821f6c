//! Library behind the `draftkit` binary: input formats, commands and
//! report documents.

pub mod commands;
pub mod input;
pub mod report;

pub use commands::{CommandOutput, DomainSpec, RuleName, Settings, UsageError, VerifyOptions};
pub use input::{load, parse_csv, parse_problem, InputError, Loaded, ProblemFile, VariantName};
pub use report::{Envelope, Status};
