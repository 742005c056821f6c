use std::fmt;

use crate::{Allocation, Bundle, CoreError};

/// Largest supported universe; bundles are 64-bit sets.
pub const MAX_OBJECTS: usize = 64;

/// An agent identifier, by convention a small positive integer.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct AgentId(pub u16);

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Dense index of an object inside its [`Universe`].
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
#[repr(transparent)]
pub struct ObjectId(pub u8);

impl ObjectId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// An object or the null object ω (`None`).
pub type Pick = Option<ObjectId>;

/// Symbol table mapping object names to dense indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Universe {
    names: Vec<String>,
}

impl Universe {
    pub fn new<I, S>(names: I) -> Result<Self, CoreError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() > MAX_OBJECTS {
            return Err(CoreError::UniverseTooLarge(names.len()));
        }
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(CoreError::EmptyName);
            }
            if names[..i].contains(n) {
                return Err(CoreError::DuplicateName(n.clone()));
            }
        }
        Ok(Universe { names })
    }

    /// Universe `a, b, c, ...` of the given size (`o27, o28, ...` past `z`).
    pub fn letters(m: usize) -> Self {
        assert!(m <= MAX_OBJECTS, "universe too large");
        let names = (0..m)
            .map(|i| {
                if i < 26 {
                    ((b'a' + i as u8) as char).to_string()
                } else {
                    format!("o{}", i + 1)
                }
            })
            .collect();
        Universe { names }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, o: ObjectId) -> &str {
        &self.names[o.index()]
    }

    pub fn lookup(&self, name: &str) -> Option<ObjectId> {
        self.names.iter().position(|n| n == name).map(|i| ObjectId(i as u8))
    }

    pub fn object(&self, name: &str) -> Result<ObjectId, CoreError> {
        self.lookup(name).ok_or_else(|| CoreError::UnknownObject(name.to_string()))
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjectId> + '_ {
        (0..self.names.len()).map(|i| ObjectId(i as u8))
    }

    pub fn all(&self) -> Bundle {
        Bundle::full(self.len())
    }

    fn single_char(&self) -> bool {
        self.names.iter().all(|n| n.chars().count() == 1)
    }

    /// Split a compact object list: comma separated, or one character per
    /// object when every name is a single character.
    pub fn split_names<'a>(&self, s: &'a str) -> Vec<&'a str> {
        let s = s.trim();
        if s.is_empty() {
            return Vec::new();
        }
        if s.contains(',') || !self.single_char() {
            s.split(',').map(str::trim).collect()
        } else {
            s.char_indices().map(|(i, c)| &s[i..i + c.len_utf8()]).collect()
        }
    }

    /// Parse a bundle such as `"ac"` or `"a,c"`.
    pub fn bundle(&self, s: &str) -> Result<Bundle, CoreError> {
        let s = s.trim().trim_start_matches('{').trim_end_matches('}');
        self.split_names(s)
            .into_iter()
            .map(|n| self.object(n))
            .collect::<Result<Bundle, _>>()
    }

    /// `{a,c}` style rendering.
    pub fn fmt_bundle(&self, b: Bundle) -> String {
        let inner: Vec<&str> = b.iter().map(|o| self.name(o)).collect();
        format!("{{{}}}", inner.join(","))
    }

    /// `({a,b},{c},{})` style rendering.
    pub fn fmt_allocation(&self, a: &Allocation) -> String {
        let parts: Vec<String> = a.bundles().iter().map(|b| self.fmt_bundle(*b)).collect();
        format!("({})", parts.join(","))
    }

    pub fn fmt_pick(&self, p: Pick) -> String {
        match p {
            Some(o) => self.name(o).to_string(),
            None => "ω".to_string(),
        }
    }
}
