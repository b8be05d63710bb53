use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::FiniteCategory;

/// Name-based description of a category, as read from or written to disk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawCategory {
    pub objects: Vec<String>,
    pub morphisms: Vec<RawMorphism>,
    pub identities: BTreeMap<String, String>,
    /// Triples `[g, f, g∘f]`.
    pub composition: Vec<[String; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawMorphism {
    pub name: String,
    pub dom: String,
    pub cod: String,
}

/// One problem found while validating a [`RawCategory`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    DuplicateObject { name: String },
    DuplicateMorphism { name: String },
    DanglingObject { morphism: String, object: String },
    DanglingIdentity { object: String, morphism: String },
    DanglingComposite { name: String },
    MissingIdentity { object: String },
    IdentityWrongType { object: String, morphism: String },
    NotComposable { g: String, f: String },
    WrongCompositeType { g: String, f: String, gf: String },
    ConflictingComposite { g: String, f: String },
    MissingComposite { g: String, f: String },
    IdentityLaw { morphism: String },
    NonAssociative { h: String, g: String, f: String },
}

impl Violation {
    /// Malformed tables (dangling or duplicated ids) as opposed to violated
    /// category laws.
    pub fn is_malformed(&self) -> bool {
        matches!(
            self,
            Violation::DuplicateObject { .. }
                | Violation::DuplicateMorphism { .. }
                | Violation::DanglingObject { .. }
                | Violation::DanglingIdentity { .. }
                | Violation::DanglingComposite { .. }
        )
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateObject { name } => write!(out, "duplicate object {name}"),
            Violation::DuplicateMorphism { name } => write!(out, "duplicate morphism {name}"),
            Violation::DanglingObject { morphism, object } => {
                write!(out, "morphism {morphism} refers to unknown object {object}")
            }
            Violation::DanglingIdentity { object, morphism } => {
                write!(out, "identity of {object} refers to unknown id {morphism}")
            }
            Violation::DanglingComposite { name } => {
                write!(out, "composition table refers to unknown morphism {name}")
            }
            Violation::MissingIdentity { object } => write!(out, "missing identity for {object}"),
            Violation::IdentityWrongType { object, morphism } => {
                write!(out, "identity {morphism} of {object} is not an endomorphism of it")
            }
            Violation::NotComposable { g, f } => write!(out, "composite given for non-composable ({g},{f})"),
            Violation::WrongCompositeType { g, f, gf } => {
                write!(out, "composite {gf} of ({g},{f}) has the wrong domain or codomain")
            }
            Violation::ConflictingComposite { g, f } => write!(out, "conflicting composites at ({g},{f})"),
            Violation::MissingComposite { g, f } => write!(out, "missing composite at ({g},{f})"),
            Violation::IdentityLaw { morphism } => write!(out, "identity law fails for {morphism}"),
            Violation::NonAssociative { h, g, f } => write!(out, "associativity fails at ({h},{g},{f})"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn is_malformed(&self) -> bool {
        self.violations.iter().any(Violation::is_malformed)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(out, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(out)?;
            }
            write!(out, "{v}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationReport {}

/// Checks a raw category against the category laws. Malformed tables are
/// reported without attempting the law checks.
pub fn validate(raw: &RawCategory) -> ValidationReport {
    build(raw).err().unwrap_or_default()
}

fn build(raw: &RawCategory) -> Result<FiniteCategory, ValidationReport> {
    let mut violations = Vec::new();
    let mut obj_index = HashMap::new();
    for (i, o) in raw.objects.iter().enumerate() {
        if obj_index.insert(o.as_str(), i).is_some() {
            violations.push(Violation::DuplicateObject { name: o.clone() });
        }
    }
    let mut mor_index = HashMap::new();
    let mut dom = Vec::new();
    let mut cod = Vec::new();
    for (i, m) in raw.morphisms.iter().enumerate() {
        if mor_index.insert(m.name.as_str(), i).is_some() {
            violations.push(Violation::DuplicateMorphism { name: m.name.clone() });
        }
        for end in [&m.dom, &m.cod] {
            if !obj_index.contains_key(end.as_str()) {
                violations.push(Violation::DanglingObject { morphism: m.name.clone(), object: end.clone() });
            }
        }
        dom.push(obj_index.get(m.dom.as_str()).copied().unwrap_or(0));
        cod.push(obj_index.get(m.cod.as_str()).copied().unwrap_or(0));
    }
    for (o, m) in &raw.identities {
        if !obj_index.contains_key(o.as_str()) || !mor_index.contains_key(m.as_str()) {
            violations.push(Violation::DanglingIdentity { object: o.clone(), morphism: m.clone() });
        }
    }
    for t in &raw.composition {
        for name in t {
            if !mor_index.contains_key(name.as_str()) {
                violations.push(Violation::DanglingComposite { name: name.clone() });
            }
        }
    }
    if !violations.is_empty() {
        violations.dedup();
        return Err(ValidationReport { violations });
    }

    let n = raw.morphisms.len();
    let names = |m: usize| raw.morphisms[m].name.clone();
    let mut ident = Vec::new();
    for (x, o) in raw.objects.iter().enumerate() {
        match raw.identities.get(o) {
            None => violations.push(Violation::MissingIdentity { object: o.clone() }),
            Some(m) => {
                let m = mor_index[m.as_str()];
                if dom[m] != x || cod[m] != x {
                    violations.push(Violation::IdentityWrongType { object: o.clone(), morphism: names(m) });
                }
                ident.push(m);
            }
        }
    }
    let mut table: Vec<Option<usize>> = vec![None; n * n];
    for [g, f, gf] in &raw.composition {
        let (g, f, gf) = (mor_index[g.as_str()], mor_index[f.as_str()], mor_index[gf.as_str()]);
        if cod[f] != dom[g] {
            violations.push(Violation::NotComposable { g: names(g), f: names(f) });
            continue;
        }
        if dom[gf] != dom[f] || cod[gf] != cod[g] {
            violations.push(Violation::WrongCompositeType { g: names(g), f: names(f), gf: names(gf) });
        }
        match table[g * n + f] {
            Some(prev) if prev != gf => {
                violations.push(Violation::ConflictingComposite { g: names(g), f: names(f) })
            }
            _ => table[g * n + f] = Some(gf),
        }
    }
    for g in 0..n {
        for f in 0..n {
            if cod[f] == dom[g] && table[g * n + f].is_none() {
                violations.push(Violation::MissingComposite { g: names(g), f: names(f) });
            }
        }
    }
    if !violations.is_empty() {
        return Err(ValidationReport { violations });
    }

    for m in 0..n {
        let left = table[ident[cod[m]] * n + m];
        let right = table[m * n + ident[dom[m]]];
        if left != Some(m) || right != Some(m) {
            violations.push(Violation::IdentityLaw { morphism: names(m) });
        }
    }
    for f in 0..n {
        for g in (0..n).filter(|&g| dom[g] == cod[f]) {
            let gf = table[g * n + f].unwrap();
            for h in (0..n).filter(|&h| dom[h] == cod[g]) {
                let hg = table[h * n + g].unwrap();
                if table[h * n + gf] != table[hg * n + f] {
                    violations.push(Violation::NonAssociative { h: names(h), g: names(g), f: names(f) });
                }
            }
        }
    }
    if !violations.is_empty() {
        return Err(ValidationReport { violations });
    }
    Ok(FiniteCategory::from_tables(
        raw.objects.clone(),
        raw.morphisms.iter().map(|m| m.name.clone()).collect(),
        dom,
        cod,
        ident,
        |g, f| table[g * n + f].unwrap(),
    ))
}

impl FiniteCategory {
    pub fn from_raw(raw: &RawCategory) -> Result<FiniteCategory, ValidationReport> {
        build(raw)
    }

    pub fn to_raw(&self) -> RawCategory {
        let mut composition = Vec::new();
        for g in self.morphisms() {
            for f in self.morphisms() {
                if let Some(gf) = self.try_compose(g, f) {
                    composition.push([
                        self.mor_name(g).to_string(),
                        self.mor_name(f).to_string(),
                        self.mor_name(gf).to_string(),
                    ]);
                }
            }
        }
        RawCategory {
            objects: self.obj_names().to_vec(),
            morphisms: self
                .morphisms()
                .map(|m| RawMorphism {
                    name: self.mor_name(m).to_string(),
                    dom: self.obj_name(self.dom(m)).to_string(),
                    cod: self.obj_name(self.cod(m)).to_string(),
                })
                .collect(),
            identities: self
                .objects()
                .map(|x| (self.obj_name(x).to_string(), self.mor_name(self.id(x)).to_string()))
                .collect(),
            composition,
        }
    }
}
