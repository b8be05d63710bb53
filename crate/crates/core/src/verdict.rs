use std::fmt;

use serde::Serialize;

/// A finite counterexample, described by names of objects and morphisms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub reason: String,
    pub items: Vec<String>,
}

impl Witness {
    pub fn new(reason: impl Into<String>, items: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Witness { reason: reason.into(), items: items.into_iter().map(Into::into).collect() }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.reason)?;
        if !self.items.is_empty() {
            write!(f, " [{}]", self.items.join(", "))?;
        }
        Ok(())
    }
}

/// Outcome of a universally quantified check. A negative answer always
/// carries a witness; a search that hit its enumeration cap says so instead
/// of guessing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    True,
    False { witness: Witness },
    Inconclusive { cap: String },
}

impl Verdict {
    pub fn fail(reason: impl Into<String>, items: impl IntoIterator<Item = impl Into<String>>) -> Verdict {
        Verdict::False { witness: Witness::new(reason, items) }
    }

    pub fn from_bool(ok: bool, witness: impl FnOnce() -> Witness) -> Verdict {
        if ok {
            Verdict::True
        } else {
            Verdict::False { witness: witness() }
        }
    }

    pub fn is_true(&self) -> bool {
        matches!(self, Verdict::True)
    }

    pub fn is_false(&self) -> bool {
        matches!(self, Verdict::False { .. })
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Verdict::Inconclusive { .. })
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::False { witness } => Some(witness),
            _ => None,
        }
    }

    /// Conjunction: the first non-true verdict wins, evaluated lazily.
    pub fn and(self, next: impl FnOnce() -> Verdict) -> Verdict {
        if self.is_true() {
            next()
        } else {
            self
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::True => write!(f, "true"),
            Verdict::False { witness } => write!(f, "false ({witness})"),
            Verdict::Inconclusive { cap } => write!(f, "inconclusive ({cap})"),
        }
    }
}

/// Enumeration bounds shared by the exponential checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Caps {
    /// Maximum number of distinct normalized funnels explored per object.
    pub funnel_cap: usize,
    /// Maximum size of a hom-set into one object whose subsets are searched
    /// when enumerating finite families.
    pub family_cap: usize,
    /// Number of representables allowed in a coproduct when building the
    /// bounded compact category.
    pub coproduct_bound: usize,
    /// Maximum number of candidates (multiarches, congruences, subobjects)
    /// produced by a single enumeration.
    pub search_cap: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { funnel_cap: 4096, family_cap: 16, coproduct_bound: 2, search_cap: 1 << 16 }
    }
}
