//! JSON report documents.

use std::time::{SystemTime, UNIX_EPOCH};

use draftkit_axioms::{AxiomReport, Witness};
use draftkit_core::{Allocation, Bundle, Problem, Universe};
use serde::Serialize;

use crate::input::ProblemFile;

/// Process exit codes.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    /// Expected verdict reproduced, or every requested axiom holds.
    Ok,
    /// A violation or an unexpected verdict.
    Violation,
    InputError,
    /// Budget or cap reached before a verdict.
    Undecided,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Violation => 1,
            Status::InputError => 2,
            Status::Undecided => 3,
        }
    }

    /// The worse of two statuses (violation beats undecided).
    pub fn worst(self, other: Status) -> Status {
        let rank = |s: Status| match s {
            Status::Ok => 0,
            Status::Undecided => 1,
            Status::Violation => 2,
            Status::InputError => 3,
        };
        if rank(other) > rank(self) {
            other
        } else {
            self
        }
    }
}

#[derive(Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a [String],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp_unix: Option<u64>,
    pub status: Status,
    pub exit_code: i32,
    pub result: &'a T,
}

impl<'a, T: Serialize> Envelope<'a, T> {
    pub fn new(command: &'a [String], status: Status, result: &'a T, timestamp: bool) -> Self {
        Envelope {
            tool: "draftkit",
            version: env!("CARGO_PKG_VERSION"),
            command,
            timestamp_unix: timestamp.then(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())),
            status,
            exit_code: status.code(),
            result,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }
}

pub fn bundle_names(u: &Universe, b: Bundle) -> Vec<String> {
    b.iter().map(|o| u.name(o).to_string()).collect()
}

#[derive(Serialize, Clone, Debug)]
pub struct AgentBundle {
    pub agent: u16,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// Objects in the order the agent picked them.
    pub bundle: Vec<String>,
}

#[derive(Serialize, Clone, Debug)]
pub struct WitnessJson {
    pub problem: ProblemFile,
    pub related: Vec<ProblemFile>,
    pub agents: Vec<u16>,
    pub bundles: Vec<Vec<String>>,
    pub detail: String,
}

impl WitnessJson {
    pub fn new(w: &Witness) -> Self {
        let u = Universe::letters(w.problem.universe_size());
        let doc = |p: &Problem| ProblemFile::from_problem(p, &u, &[], None);
        WitnessJson {
            problem: doc(&w.problem),
            related: w.related.iter().map(doc).collect(),
            agents: w.agents.iter().map(|a| a.0).collect(),
            bundles: w.bundles.iter().map(|b| bundle_names(&u, *b)).collect(),
            detail: w.detail.clone(),
        }
    }
}

#[derive(Serialize, Clone, Debug)]
pub struct AxiomJson {
    pub axiom: String,
    pub verdict: String,
    pub checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessJson>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl AxiomJson {
    pub fn new(r: &AxiomReport) -> Self {
        AxiomJson {
            axiom: r.axiom.clone(),
            verdict: r.verdict.as_str().to_string(),
            checked: r.checked,
            witness: r.witness.as_ref().map(WitnessJson::new),
            notes: r.notes.clone(),
        }
    }
}

pub fn allocation_names(u: &Universe, a: &Allocation) -> Vec<Vec<String>> {
    a.bundles().iter().map(|b| bundle_names(u, *b)).collect()
}
