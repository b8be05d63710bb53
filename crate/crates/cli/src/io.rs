//! JSON documents: categories, sites, posets, join semilattices and functors.
//!
//! Every document is identified by its keys. Emission is canonical, so
//! parsing an emitted document gives back the same value.

use std::collections::BTreeMap;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use supercompact::duality::{FinPoset, JoinSemilattice};
use supercompact::fincat::{FiniteCategory, Functor, Mor, Obj, RawCategory, RawMorphism};
use supercompact::site::{Generators, Site};

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("schema violation at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("law violation: {0}")]
    Law(String),
    #[error("{0}")]
    Usage(String),
}

impl InputError {
    fn schema(path: impl Into<String>, message: impl Into<String>) -> InputError {
        InputError::Schema { path: path.into(), message: message.into() }
    }
}

/// A category document, with the optional site fields.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryDoc {
    pub objects: Vec<String>,
    pub morphisms: Vec<RawMorphism>,
    pub identities: BTreeMap<String, String>,
    pub composition: Vec<[String; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stable_class: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stable_families: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub empty_covered: Vec<String>,
}

/// A poset document; with `bottom` and `join` it is a join semilattice.
/// `leq` lists pairs `[a, b]` with `a ≤ b`; reflexive pairs may be left out.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetDoc {
    pub elements: Vec<String>,
    pub leq: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bottom: Option<String>,
    /// Triples `[a, b, a ∨ b]`; each unordered pair of distinct elements once.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub join: Option<Vec<[String; 3]>>,
}

/// A functor by names; resolved against its source and target categories.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorDoc {
    pub on_objects: BTreeMap<String, String>,
    pub on_morphisms: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Category(FiniteCategory),
    Site(Site),
    Poset(FinPoset),
    Semilattice(JoinSemilattice),
    Functor(FunctorDoc),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Category(_) => "category",
            Document::Site(_) => "site",
            Document::Poset(_) => "poset",
            Document::Semilattice(_) => "semilattice",
            Document::Functor(_) => "functor",
        }
    }

    /// The site a command works on; a bare category carries the trivial
    /// topology, in which only maximal sieves cover.
    pub fn into_site(self) -> Result<Site, InputError> {
        match self {
            Document::Site(s) => Ok(s),
            Document::Category(c) => Ok(Site::trivial(c)),
            other => Err(InputError::Usage(format!("expected a category or site, found a {}", other.kind()))),
        }
    }

    pub fn into_category(self) -> Result<FiniteCategory, InputError> {
        match self {
            Document::Site(s) => Ok(s.cat().clone()),
            Document::Category(c) => Ok(c),
            other => Err(InputError::Usage(format!("expected a category or site, found a {}", other.kind()))),
        }
    }

    pub fn into_semilattice(self) -> Result<JoinSemilattice, InputError> {
        match self {
            Document::Semilattice(s) => Ok(s),
            other => Err(InputError::Usage(format!("expected a join semilattice, found a {}", other.kind()))),
        }
    }

    pub fn into_poset(self) -> Result<FinPoset, InputError> {
        match self {
            Document::Poset(p) => Ok(p),
            Document::Semilattice(s) => Ok(s.poset().clone()),
            other => Err(InputError::Usage(format!("expected a poset, found a {}", other.kind()))),
        }
    }
}

pub fn read_document(path: &Path) -> Result<Document, InputError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<Document, InputError> {
    let value: Value = serde_json::from_str(text).map_err(|e| InputError::Json(e.to_string()))?;
    parse_value(&value)
}

pub fn parse_value(value: &Value) -> Result<Document, InputError> {
    let Some(map) = value.as_object() else {
        return Err(InputError::schema("$", "expected an object"));
    };
    if map.contains_key("objects") {
        let doc: CategoryDoc = typed(value)?;
        if doc.stable_class.is_some() || doc.stable_families.is_some() || !doc.empty_covered.is_empty() {
            site_from_doc(&doc).map(Document::Site)
        } else {
            category_from_doc(&doc).map(Document::Category)
        }
    } else if map.contains_key("elements") {
        let doc: PosetDoc = typed(value)?;
        match (&doc.bottom, &doc.join) {
            (None, None) => poset_from_doc(&doc).map(Document::Poset),
            (Some(_), Some(_)) => semilattice_from_doc(&doc).map(Document::Semilattice),
            (None, Some(_)) => Err(InputError::schema("$.bottom", "a join table needs a bottom element")),
            (Some(_), None) => Err(InputError::schema("$.join", "a bottom element needs a join table")),
        }
    } else if map.contains_key("on_objects") {
        typed(value).map(Document::Functor)
    } else {
        Err(InputError::schema("$", "expected a category (objects), poset (elements) or functor (on_objects)"))
    }
}

fn typed<T: DeserializeOwned>(value: &Value) -> Result<T, InputError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        InputError::schema(if path == "." { "$".to_string() } else { format!("$.{path}") }, e.into_inner().to_string())
    })
}

fn raw(doc: &CategoryDoc) -> RawCategory {
    RawCategory {
        objects: doc.objects.clone(),
        morphisms: doc.morphisms.clone(),
        identities: doc.identities.clone(),
        composition: doc.composition.clone(),
    }
}

pub fn category_from_doc(doc: &CategoryDoc) -> Result<FiniteCategory, InputError> {
    FiniteCategory::from_raw(&raw(doc)).map_err(|r| InputError::Law(r.to_string().replace('\n', "; ")))
}

fn mor_at(cat: &FiniteCategory, name: &str, path: String) -> Result<Mor, InputError> {
    cat.mor_by_name(name).ok_or_else(|| InputError::schema(path, format!("unknown morphism {name}")))
}

fn obj_at(cat: &FiniteCategory, name: &str, path: String) -> Result<Obj, InputError> {
    cat.obj_by_name(name).ok_or_else(|| InputError::schema(path, format!("unknown object {name}")))
}

/// Builds the site and runs the stable-class axiom checks.
pub fn site_from_doc(doc: &CategoryDoc) -> Result<Site, InputError> {
    let cat = category_from_doc(doc)?;
    let empty = doc
        .empty_covered
        .iter()
        .enumerate()
        .map(|(i, n)| obj_at(&cat, n, format!("$.empty_covered[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let law = |e: supercompact::site::SiteError| InputError::Law(e.to_string());
    match (&doc.stable_class, &doc.stable_families) {
        (Some(_), Some(_)) => Err(InputError::schema("$", "give stable_class or stable_families, not both")),
        (Some(class), None) => {
            let t = class
                .iter()
                .enumerate()
                .map(|(i, n)| mor_at(&cat, n, format!("$.stable_class[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            Site::principal(cat, &t, &empty).map_err(law)
        }
        (None, Some(fams)) => {
            let mut out = Vec::new();
            for (i, fam) in fams.iter().enumerate() {
                out.push(
                    fam.iter()
                        .enumerate()
                        .map(|(j, n)| mor_at(&cat, n, format!("$.stable_families[{i}][{j}]")))
                        .collect::<Result<Vec<_>, _>>()?,
                );
            }
            Site::finitely_generated(cat, &out, &empty).map_err(law)
        }
        (None, None) => {
            let ids: Vec<Mor> = cat.objects().map(|x| cat.id(x)).collect();
            Site::principal(cat, &ids, &empty).map_err(law)
        }
    }
}

fn index_of(names: &[String], name: &str, path: String) -> Result<usize, InputError> {
    names.iter().position(|n| n == name).ok_or_else(|| InputError::schema(path, format!("unknown element {name}")))
}

pub fn poset_from_doc(doc: &PosetDoc) -> Result<FinPoset, InputError> {
    let n = doc.elements.len();
    let mut leq = vec![vec![false; n]; n];
    for (i, row) in leq.iter_mut().enumerate() {
        row[i] = true;
    }
    for (i, [a, b]) in doc.leq.iter().enumerate() {
        let a = index_of(&doc.elements, a, format!("$.leq[{i}][0]"))?;
        let b = index_of(&doc.elements, b, format!("$.leq[{i}][1]"))?;
        leq[a][b] = true;
    }
    FinPoset::new(doc.elements.clone(), leq).map_err(|e| InputError::Law(e.to_string()))
}

pub fn semilattice_from_doc(doc: &PosetDoc) -> Result<JoinSemilattice, InputError> {
    let poset = poset_from_doc(doc)?;
    let names = poset.elements().to_vec();
    let bottom = index_of(&names, doc.bottom.as_deref().unwrap_or_default(), "$.bottom".into())?;
    let n = names.len();
    let mut join: Vec<Vec<Option<usize>>> = vec![vec![None; n]; n];
    for (i, row) in join.iter_mut().enumerate() {
        row[i] = Some(i);
    }
    for (i, [a, b, c]) in doc.join.iter().flatten().enumerate() {
        let a = index_of(&names, a, format!("$.join[{i}][0]"))?;
        let b = index_of(&names, b, format!("$.join[{i}][1]"))?;
        let c = index_of(&names, c, format!("$.join[{i}][2]"))?;
        for (x, y) in [(a, b), (b, a)] {
            if join[x][y].is_some_and(|old| old != c) {
                return Err(InputError::Law(format!("conflicting joins of {} and {}", names[x], names[y])));
            }
            join[x][y] = Some(c);
        }
    }
    let mut table = vec![vec![0; n]; n];
    for a in 0..n {
        for b in 0..n {
            table[a][b] =
                join[a][b].ok_or_else(|| InputError::Law(format!("missing join of {} and {}", names[a], names[b])))?;
        }
    }
    JoinSemilattice::from_tables(poset, bottom, table).map_err(|e| InputError::Law(e.to_string()))
}

/// Resolves a functor document between two categories and checks the
/// functor laws.
pub fn resolve_functor(doc: &FunctorDoc, a: &FiniteCategory, b: &FiniteCategory) -> Result<Functor, InputError> {
    let mut on_objects = Vec::new();
    for x in a.objects() {
        let name = a.obj_name(x);
        let image = doc
            .on_objects
            .get(name)
            .ok_or_else(|| InputError::schema("$.on_objects", format!("object {name} is not mapped")))?;
        on_objects.push(obj_at(b, image, format!("$.on_objects.{name}"))?);
    }
    let mut on_morphisms = Vec::new();
    for m in a.morphisms() {
        let name = a.mor_name(m);
        let image = doc
            .on_morphisms
            .get(name)
            .ok_or_else(|| InputError::schema("$.on_morphisms", format!("morphism {name} is not mapped")))?;
        on_morphisms.push(mor_at(b, image, format!("$.on_morphisms.{name}"))?);
    }
    for key in doc.on_objects.keys() {
        obj_at(a, key, format!("$.on_objects.{key}"))?;
    }
    for key in doc.on_morphisms.keys() {
        mor_at(a, key, format!("$.on_morphisms.{key}"))?;
    }
    let f = Functor { on_objects, on_morphisms };
    f.check(a, b).map_err(|e| InputError::Law(e.to_string()))?;
    Ok(f)
}

pub fn category_doc(cat: &FiniteCategory) -> CategoryDoc {
    let raw = cat.to_raw();
    CategoryDoc {
        objects: raw.objects,
        morphisms: raw.morphisms,
        identities: raw.identities,
        composition: raw.composition,
        stable_class: None,
        stable_families: None,
        empty_covered: Vec::new(),
    }
}

pub fn site_doc(site: &Site) -> CategoryDoc {
    let cat = site.cat();
    let names = |ms: &mut dyn Iterator<Item = Mor>| ms.map(|m| cat.mor_name(m).to_string()).collect::<Vec<_>>();
    let mut doc = category_doc(cat);
    match site.generators() {
        Generators::Class { class, .. } => {
            doc.stable_class = Some(names(&mut cat.morphisms().filter(|&m| class[m])));
        }
        Generators::Families(fams) => {
            doc.stable_families = Some(fams.iter().map(|f| names(&mut f.iter().copied())).collect());
        }
    }
    doc.empty_covered = site.empty_covered().into_iter().map(|x| cat.obj_name(x).to_string()).collect();
    doc
}

pub fn poset_doc(p: &FinPoset) -> PosetDoc {
    let n = p.len();
    let mut leq = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b && p.leq(a, b) {
                leq.push([p.name(a).to_string(), p.name(b).to_string()]);
            }
        }
    }
    PosetDoc { elements: p.elements().to_vec(), leq, bottom: None, join: None }
}

pub fn semilattice_doc(s: &JoinSemilattice) -> PosetDoc {
    let mut doc = poset_doc(s.poset());
    let mut join = Vec::new();
    for a in 0..s.len() {
        for b in a + 1..s.len() {
            join.push([s.name(a).to_string(), s.name(b).to_string(), s.name(s.join(a, b)).to_string()]);
        }
    }
    doc.bottom = Some(s.name(s.bottom()).to_string());
    doc.join = Some(join);
    doc
}

pub fn document_value(doc: &Document) -> Value {
    let v = match doc {
        Document::Category(c) => serde_json::to_value(category_doc(c)),
        Document::Site(s) => serde_json::to_value(site_doc(s)),
        Document::Poset(p) => serde_json::to_value(poset_doc(p)),
        Document::Semilattice(s) => serde_json::to_value(semilattice_doc(s)),
        Document::Functor(f) => serde_json::to_value(f),
    };
    v.expect("documents serialize")
}

/// Canonical text of a document: pretty JSON with a trailing newline.
pub fn emit(doc: &Document) -> String {
    let mut s = serde_json::to_string_pretty(&document_value(doc)).expect("documents serialize");
    s.push('\n');
    s
}
