use std::collections::HashMap;
use std::sync::Arc;

use draftkit_core::{Allocation, PickingSequence, Priority, Problem, ProblemKey, Variant};

use crate::engine;

/// An allocation rule: a pure map from problems to allocations.
pub trait Rule: Send + Sync {
    fn name(&self) -> String;
    fn allocate(&self, problem: &Problem) -> Allocation;
}

pub type RuleRef = Arc<dyn Rule>;

/// A decidable condition on problems, used to route piecewise rules.
pub type Predicate = Arc<dyn Fn(&Problem) -> bool + Send + Sync>;

/// The draft rule associated with a priority, in whatever model the problem
/// belongs to (plain, quota, unacceptable objects, variable population).
#[derive(Clone, Debug)]
pub struct DraftRule {
    pub priority: Priority,
}

impl DraftRule {
    pub fn new(priority: Priority) -> Self {
        DraftRule { priority }
    }
}

impl Rule for DraftRule {
    fn name(&self) -> String {
        "draft".into()
    }

    fn allocate(&self, p: &Problem) -> Allocation {
        match p.variant() {
            Variant::Fixed => engine::draft_priority(p, &self.priority).0,
            Variant::Quota(q) => engine::draft_quota(p, &self.priority, q).0,
            Variant::Unacceptable => engine::u_draft(p, &self.priority).0,
            Variant::Variable => engine::draft_variable(p, &self.priority).0,
        }
    }
}

/// Sequential picking along an arbitrary picking sequence.
#[derive(Clone, Debug)]
pub struct SequenceDraftRule {
    pub sequence: PickingSequence,
}

impl Rule for SequenceDraftRule {
    fn name(&self) -> String {
        "sequence-draft".into()
    }

    fn allocate(&self, p: &Problem) -> Allocation {
        engine::draft(p, &self.sequence).0
    }
}

#[derive(Clone, Debug)]
pub struct SnakeDraftRule {
    pub priority: Priority,
}

impl Rule for SnakeDraftRule {
    fn name(&self) -> String {
        "snake".into()
    }

    fn allocate(&self, p: &Problem) -> Allocation {
        engine::snake_draft(p, &self.priority).0
    }
}

#[derive(Clone, Debug)]
pub struct SerialDictatorshipRule {
    pub priority: Priority,
}

impl Rule for SerialDictatorshipRule {
    fn name(&self) -> String {
        "serial-dictatorship".into()
    }

    fn allocate(&self, p: &Problem) -> Allocation {
        engine::serial_dictatorship(p, &self.priority)
    }
}

#[derive(Clone, Debug)]
pub struct PiDictatorshipRule {
    pub priority: Priority,
}

impl Rule for PiDictatorshipRule {
    fn name(&self) -> String {
        "pi-dictatorship".into()
    }

    fn allocate(&self, p: &Problem) -> Allocation {
        engine::pi_dictatorship(p, &self.priority)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct NullRule;

impl Rule for NullRule {
    fn name(&self) -> String {
        "null".into()
    }

    fn allocate(&self, p: &Problem) -> Allocation {
        engine::null_allocation(p)
    }
}

/// Runs an inner rule on the complete extension of the reported profile.
pub struct CompleteExtensionRule {
    pub inner: RuleRef,
}

impl Rule for CompleteExtensionRule {
    fn name(&self) -> String {
        format!("complete-extension({})", self.inner.name())
    }

    fn allocate(&self, p: &Problem) -> Allocation {
        let ext: Vec<_> = p.profile().iter().map(|x| x.complete_extension()).collect();
        self.inner.allocate(&p.with_profile(&ext))
    }
}

/// A named closure.
pub struct FnRule {
    pub name: String,
    pub f: Arc<dyn Fn(&Problem) -> Allocation + Send + Sync>,
}

impl FnRule {
    pub fn new(name: impl Into<String>, f: impl Fn(&Problem) -> Allocation + Send + Sync + 'static) -> Self {
        FnRule { name: name.into(), f: Arc::new(f) }
    }
}

impl Rule for FnRule {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn allocate(&self, p: &Problem) -> Allocation {
        (self.f)(p)
    }
}

/// A default rule with ordered overrides; the first matching predicate wins.
pub struct Piecewise {
    pub name: String,
    pub default: RuleRef,
    pub overrides: Vec<(Predicate, RuleRef)>,
}

impl Piecewise {
    pub fn new(name: impl Into<String>, default: RuleRef) -> Self {
        Piecewise { name: name.into(), default, overrides: Vec::new() }
    }

    pub fn with(
        mut self,
        pred: impl Fn(&Problem) -> bool + Send + Sync + 'static,
        rule: RuleRef,
    ) -> Self {
        self.overrides.push((Arc::new(pred), rule));
        self
    }
}

impl Rule for Piecewise {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn allocate(&self, p: &Problem) -> Allocation {
        for (pred, rule) in &self.overrides {
            if pred(p) {
                return rule.allocate(p);
            }
        }
        self.default.allocate(p)
    }
}

/// Which problem key a tabulated rule is indexed by.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum KeyMode {
    /// Preferences restricted to the available set.
    Restricted,
    /// Full universe rankings.
    Full,
}

impl KeyMode {
    pub fn key(self, p: &Problem) -> ProblemKey {
        match self {
            KeyMode::Restricted => p.key(),
            KeyMode::Full => p.full_key(),
        }
    }
}

/// An explicit lookup table over an enumerated domain.
pub struct Tabulated {
    pub name: String,
    pub table: HashMap<ProblemKey, Allocation>,
    pub mode: KeyMode,
    /// Used outside the table; without one, such problems panic.
    pub fallback: Option<RuleRef>,
}

impl Tabulated {
    pub fn new(name: impl Into<String>, table: HashMap<ProblemKey, Allocation>, mode: KeyMode) -> Self {
        Tabulated { name: name.into(), table, mode, fallback: None }
    }

    pub fn with_fallback(mut self, rule: RuleRef) -> Self {
        self.fallback = Some(rule);
        self
    }

    /// Tabulate `rule` over the given problems.
    pub fn from_rule<'a>(
        name: impl Into<String>,
        rule: &dyn Rule,
        problems: impl IntoIterator<Item = &'a Problem>,
        mode: KeyMode,
    ) -> Self {
        let table = problems.into_iter().map(|p| (mode.key(p), rule.allocate(p))).collect();
        Tabulated::new(name, table, mode)
    }

    pub fn lookup(&self, p: &Problem) -> Option<&Allocation> {
        self.table.get(&self.mode.key(p))
    }
}

impl Rule for Tabulated {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn allocate(&self, p: &Problem) -> Allocation {
        match self.lookup(p) {
            Some(a) => a.clone(),
            None => match &self.fallback {
                Some(f) => f.allocate(p),
                None => panic!("tabulated rule `{}` is not defined on {:?}", self.name, p.key()),
            },
        }
    }
}
