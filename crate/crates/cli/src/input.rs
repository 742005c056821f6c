//! Problem documents (TOML) and preference tables (CSV).

use std::fmt;
use std::ops::Range;
use std::path::Path;

use draftkit_core::{AgentId, Bundle, CoreError, Preference, Priority, Problem, Quota, Quotas, Universe, Variant};
use serde::{Deserialize, Serialize};
use toml::Spanned;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum VariantName {
    Fixed,
    Quota,
    Unacceptable,
    Variable,
}

impl VariantName {
    pub fn of(v: &Variant) -> Self {
        match v {
            Variant::Fixed => VariantName::Fixed,
            Variant::Quota(_) => VariantName::Quota,
            Variant::Unacceptable => VariantName::Unacceptable,
            Variant::Variable => VariantName::Variable,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            VariantName::Fixed => "fixed",
            VariantName::Quota => "quota",
            VariantName::Unacceptable => "unacceptable",
            VariantName::Variable => "variable",
        }
    }
}

/// A quota as written: a positive count or `"inf"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QuotaValue {
    Count(u32),
    Word(String),
}

impl QuotaValue {
    fn to_quota(&self) -> Result<Quota, String> {
        match self {
            QuotaValue::Count(0) => Err("quota must be at least 1".into()),
            QuotaValue::Count(k) => Ok(Quota::Finite(*k)),
            QuotaValue::Word(w) if w == "inf" => Ok(Quota::Infinite),
            QuotaValue::Word(w) => Err(format!("quota `{w}` is neither a positive integer nor \"inf\"")),
        }
    }

    fn from_quota(q: Quota) -> Self {
        match q {
            Quota::Finite(k) => QuotaValue::Count(k),
            Quota::Infinite => QuotaValue::Word("inf".into()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentEntry {
    pub id: u16,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub preference: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quota: Option<QuotaValue>,
}

/// The problem document. `available` defaults to every object; `priority`
/// defaults to ascending agent ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub objects: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub available: Option<Vec<String>>,
    pub variant: VariantName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub priority: Option<Vec<u16>>,
    pub agents: Vec<AgentEntry>,
}

// Parsing mirror of ProblemFile that keeps source spans for error messages.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAgent {
    id: Spanned<u16>,
    #[serde(default)]
    name: Option<String>,
    preference: Spanned<String>,
    #[serde(default)]
    quota: Option<Spanned<QuotaValue>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    objects: Spanned<Vec<String>>,
    #[serde(default)]
    available: Option<Spanned<Vec<String>>>,
    variant: VariantName,
    #[serde(default)]
    priority: Option<Spanned<Vec<u16>>>,
    agents: Spanned<Vec<RawAgent>>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum InputError {
    #[error("{origin}:{line}:{column}: {message}")]
    At { origin: String, line: usize, column: usize, message: String },
    #[error("{origin}: {message}")]
    Whole { origin: String, message: String },
}

/// A problem plus the presentation data the document carried.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub problem: Problem,
    pub universe: Universe,
    pub names: Vec<Option<String>>,
    pub priority: Priority,
}

impl Loaded {
    pub fn to_file(&self) -> ProblemFile {
        ProblemFile::from_problem(&self.problem, &self.universe, &self.names, Some(&self.priority))
    }

    /// Display label for the agent at `idx`.
    pub fn label(&self, idx: usize) -> String {
        let id = self.problem.agents()[idx];
        match &self.names[idx] {
            Some(n) => format!("{id} ({n})"),
            None => id.to_string(),
        }
    }

    /// Resolve an agent given by id or by name.
    pub fn find_agent(&self, s: &str) -> Option<AgentId> {
        let by_name = self.names.iter().position(|n| n.as_deref() == Some(s));
        by_name
            .map(|i| self.problem.agents()[i])
            .or_else(|| s.parse::<u16>().ok().map(AgentId).filter(|a| self.problem.index_of(*a).is_some()))
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(before.len(), |p| before.len() - p - 1) + 1;
    (line, column)
}

struct Src<'a> {
    origin: &'a str,
    text: &'a str,
}

impl Src<'_> {
    fn at(&self, span: Range<usize>, message: impl fmt::Display) -> InputError {
        let (line, column) = line_col(self.text, span.start);
        InputError::At { origin: self.origin.into(), line, column, message: message.to_string() }
    }

    fn whole(&self, message: impl fmt::Display) -> InputError {
        InputError::Whole { origin: self.origin.into(), message: message.to_string() }
    }
}

/// Parse a TOML problem document; `origin` names it in error messages.
pub fn parse_problem(text: &str, origin: &str) -> Result<Loaded, InputError> {
    let src = Src { origin, text };
    let raw: RawFile = toml::from_str(text).map_err(|e| match e.span() {
        Some(span) => src.at(span, e.message()),
        None => src.whole(e.message()),
    })?;
    let objects = raw.objects.get_ref();
    let universe = Universe::new(objects.iter().cloned()).map_err(|e| src.at(raw.objects.span(), e))?;
    let m = universe.len();
    let available = match &raw.available {
        None => universe.all(),
        Some(av) => {
            let mut b = Bundle::EMPTY;
            for name in av.get_ref() {
                let o = universe.object(name).map_err(|e| src.at(av.span(), e))?;
                if b.contains(o) {
                    return Err(src.at(av.span(), format!("object `{name}` listed twice in available")));
                }
                b = b.with(o);
            }
            b
        }
    };
    let agents_raw = raw.agents.get_ref();
    if agents_raw.is_empty() {
        return Err(src.at(raw.agents.span(), "at least one agent is required"));
    }
    let mut ids = Vec::new();
    let mut names = Vec::new();
    let mut prefs = Vec::new();
    let mut quotas = Vec::new();
    for a in agents_raw {
        let id = AgentId(*a.id.get_ref());
        if ids.contains(&id) {
            return Err(src.at(a.id.span(), format!("agent id {id} appears twice")));
        }
        ids.push(id);
        names.push(a.name.clone());
        let text = a.preference.get_ref();
        let mut p = Preference::parse(text, &universe).map_err(|e| src.at(a.preference.span(), e))?;
        let missing: Vec<&str> = universe.objects().filter(|o| !p.domain().contains(*o)).map(|o| universe.name(o)).collect();
        if !missing.is_empty() {
            return Err(src.at(a.preference.span(), format!("ranking omits {}", missing.join(", "))));
        }
        match (raw.variant, p.cutoff()) {
            (VariantName::Unacceptable, None) => p = p.with_cutoff(Some(m)).expect("full cutoff is valid"),
            (VariantName::Unacceptable, Some(_)) => {}
            (v, Some(_)) => {
                return Err(src.at(
                    a.preference.span(),
                    format!("cutoff `|` is only allowed with variant = \"unacceptable\" (variant is {})", v.as_str()),
                ))
            }
            _ => {}
        }
        prefs.push(p);
        match (&a.quota, raw.variant) {
            (Some(q), VariantName::Quota) => quotas.push(q.get_ref().to_quota().map_err(|e| src.at(q.span(), e))?),
            (None, VariantName::Quota) => {
                return Err(src.at(a.id.span(), format!("agent {id} needs a quota when variant = \"quota\"")))
            }
            (Some(q), v) => {
                return Err(src.at(q.span(), format!("quota given but variant is {}", v.as_str())));
            }
            (None, _) => {}
        }
    }
    let variant = match raw.variant {
        VariantName::Fixed => Variant::Fixed,
        VariantName::Quota => Variant::Quota(Quotas(quotas)),
        VariantName::Unacceptable => Variant::Unacceptable,
        VariantName::Variable => Variant::Variable,
    };
    let problem = Problem::new(m, &ids, available, &prefs, variant).map_err(|e| src.whole(e))?;
    let priority = match &raw.priority {
        None => {
            let mut sorted = ids.clone();
            sorted.sort();
            Priority(sorted)
        }
        Some(pr) => {
            let order: Vec<AgentId> = pr.get_ref().iter().copied().map(AgentId).collect();
            let mut a = order.clone();
            let mut b = ids.clone();
            a.sort();
            b.sort();
            if a != b {
                return Err(src.at(pr.span(), CoreError::PriorityMismatch));
            }
            Priority(order)
        }
    };
    Ok(Loaded { problem, universe, names, priority })
}

impl ProblemFile {
    pub fn from_problem(p: &Problem, u: &Universe, names: &[Option<String>], priority: Option<&Priority>) -> Self {
        let available = (p.available() != u.all()).then(|| p.available().iter().map(|o| u.name(o).to_string()).collect());
        let priority = priority.map(|pr| pr.agents().iter().map(|a| a.0).collect::<Vec<_>>()).filter(|ids| {
            let mut sorted = ids.clone();
            sorted.sort();
            *ids != sorted
        });
        let agents = p
            .agents()
            .iter()
            .enumerate()
            .map(|(i, a)| AgentEntry {
                id: a.0,
                name: names.get(i).cloned().flatten(),
                preference: p.pref(i).format(u),
                quota: p.quotas().map(|q| QuotaValue::from_quota(q.get(i))),
            })
            .collect();
        ProblemFile {
            objects: u.names().to_vec(),
            available,
            variant: VariantName::of(p.variant()),
            priority,
            agents,
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("problem documents always serialize")
    }
}

/// Parse a CSV preference table: one `team,ranking` row per agent. The
/// universe is the set of ranked objects in order of first appearance.
/// A `|` anywhere selects the unacceptable-objects model unless `variant`
/// says otherwise.
pub fn parse_csv(text: &str, origin: &str, variant: Option<VariantName>) -> Result<Loaded, InputError> {
    let row_err = |row: usize, message: String| InputError::At { origin: origin.into(), line: row, column: 1, message };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows: Vec<(usize, String, Vec<String>, Option<usize>)> = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| InputError::Whole { origin: origin.into(), message: e.to_string() })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        if rec.len() != 2 {
            return Err(row_err(line, format!("expected `team,ranking`, found {} fields", rec.len())));
        }
        let (team, ranking) = (rec[0].to_string(), &rec[1]);
        if rows.is_empty() && team.eq_ignore_ascii_case("team") && ranking.eq_ignore_ascii_case("preference") {
            continue;
        }
        if rows.iter().any(|r| r.1 == team) {
            return Err(row_err(line, format!("team `{team}` appears twice")));
        }
        let (objects, cutoff) = split_ranking(ranking).map_err(|e| row_err(line, format!("{team}: {e}")))?;
        rows.push((line, team, objects, cutoff));
    }
    if rows.is_empty() {
        return Err(InputError::Whole { origin: origin.into(), message: "no preference rows".into() });
    }
    let mut names: Vec<String> = Vec::new();
    for (_, _, objs, _) in &rows {
        for o in objs {
            if !names.contains(o) {
                names.push(o.clone());
            }
        }
    }
    for (line, team, objs, _) in &rows {
        let missing: Vec<&str> = names.iter().filter(|n| !objs.contains(n)).map(String::as_str).collect();
        if !missing.is_empty() {
            return Err(row_err(*line, format!("{team}: ranking omits {}", missing.join(", "))));
        }
    }
    let any_cutoff = rows.iter().any(|r| r.3.is_some());
    let variant = match variant {
        Some(VariantName::Quota) => {
            return Err(InputError::Whole { origin: origin.into(), message: "quotas need a TOML problem document".into() })
        }
        Some(v) if v != VariantName::Unacceptable && any_cutoff => {
            return Err(InputError::Whole {
                origin: origin.into(),
                message: format!("cutoffs are only allowed in the unacceptable model, not {}", v.as_str()),
            })
        }
        Some(v) => v,
        None if any_cutoff => VariantName::Unacceptable,
        None => VariantName::Fixed,
    };
    let universe = Universe::new(names).map_err(|e| InputError::Whole { origin: origin.into(), message: e.to_string() })?;
    let m = universe.len();
    let mut prefs = Vec::new();
    for (line, team, objs, cutoff) in &rows {
        let ranking: Vec<_> = objs.iter().map(|o| universe.lookup(o).expect("collected above")).collect();
        let cutoff = match variant {
            VariantName::Unacceptable => Some(cutoff.unwrap_or(m)),
            _ => None,
        };
        prefs.push(Preference::new(&ranking, cutoff).map_err(|e| row_err(*line, format!("{team}: {e}")))?);
    }
    let ids: Vec<AgentId> = (1..=rows.len() as u16).map(AgentId).collect();
    let core_variant = match variant {
        VariantName::Fixed => Variant::Fixed,
        VariantName::Unacceptable => Variant::Unacceptable,
        VariantName::Variable => Variant::Variable,
        VariantName::Quota => unreachable!(),
    };
    let problem = Problem::new(m, &ids, universe.all(), &prefs, core_variant)
        .map_err(|e| InputError::Whole { origin: origin.into(), message: e.to_string() })?;
    Ok(Loaded { problem, universe, names: rows.into_iter().map(|r| Some(r.1)).collect(), priority: Priority(ids) })
}

/// Split `a>b|c>d` into object names and the cutoff position.
fn split_ranking(s: &str) -> Result<(Vec<String>, Option<usize>), String> {
    let bars = s.matches('|').count();
    if bars > 1 {
        return Err(format!("malformed cutoff in `{s}`: more than one `|`"));
    }
    let mut objects = Vec::new();
    let mut cutoff = None;
    let mut current = String::new();
    let chars: Vec<char> = s.chars().collect();
    for (i, &c) in chars.iter().enumerate() {
        match c {
            '>' | '|' => {
                let name = current.trim().to_string();
                current.clear();
                if name.is_empty() {
                    // only a cutoff may sit at the very start
                    if !(c == '|' && i == 0) {
                        return Err(if c == '|' || chars[..i].last() == Some(&'|') {
                            format!("malformed cutoff in `{s}`")
                        } else {
                            format!("empty object name in `{s}`")
                        });
                    }
                } else {
                    objects.push(name);
                }
                if c == '|' {
                    cutoff = Some(objects.len());
                }
            }
            _ => current.push(c),
        }
    }
    let last = current.trim().to_string();
    if last.is_empty() {
        if !s.trim_end().ends_with('|') {
            return Err(if s.trim().is_empty() { "empty ranking".into() } else { format!("empty object name in `{s}`") });
        }
    } else {
        objects.push(last);
    }
    for (i, o) in objects.iter().enumerate() {
        if objects[..i].contains(o) {
            return Err(format!("duplicate object `{o}` in `{s}`"));
        }
    }
    Ok((objects, cutoff))
}

/// Load a problem file; `.csv` selects the table format.
pub fn load(path: &Path, variant: Option<VariantName>) -> Result<Loaded, InputError> {
    let origin = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| InputError::Whole { origin: origin.clone(), message: e.to_string() })?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        parse_csv(&text, &origin, variant)
    } else {
        if variant.is_some() {
            return Err(InputError::Whole { origin, message: "--variant applies to CSV input; problem documents declare their variant".into() });
        }
        parse_problem(&text, &origin)
    }
}
