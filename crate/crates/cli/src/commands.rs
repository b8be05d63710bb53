use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};
use supercompact::arch::{arch_components, ArchError};
use supercompact::classify::classify;
use supercompact::duality::{
    alexandroff_round_trip, enumerate_jsls, enumerate_posets, ideal_frame, is_distributive, prime_filters,
    stone_round_trip, DualityError, FinPoset, JoinSemilattice, RoundTrip,
};
use supercompact::fincat::{FiniteCategory, Obj};
use supercompact::sheaf::{compact_category_bounded, ell, hom_sheaves, supercompact_category, SheafError};
use supercompact::site::{
    canonical_congruence, check_stable_class, check_stable_family_class, is_comorphism_of_sites, is_morphism_of_sites,
    Generators, Site, SiteError,
};
use supercompact::verdict::{Caps, Verdict};

use crate::io::{self, Document, InputError};

/// Overall result of a command, mapped onto the exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Inconclusive,
    Fail,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive => 3,
        }
    }
}

/// Human readable text and a machine readable document for one run.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub text: String,
    pub json: Value,
    pub status: Status,
}

impl Outcome {
    fn new(text: String, json: Value, status: Status) -> Outcome {
        Outcome { text, json, status }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CommandError {
    #[error(transparent)]
    Input(#[from] InputError),
    /// An enumeration ran into one of the configured caps.
    #[error("inconclusive: {0}")]
    Cap(String),
}

impl From<ArchError> for CommandError {
    fn from(e: ArchError) -> Self {
        match e {
            ArchError::SpanCap { .. } | ArchError::ArchCap { .. } => CommandError::Cap(e.to_string()),
            other => CommandError::Input(InputError::Law(other.to_string())),
        }
    }
}

impl From<SheafError> for CommandError {
    fn from(e: SheafError) -> Self {
        match e {
            SheafError::Cap(_) => CommandError::Cap(e.to_string()),
            other => CommandError::Input(InputError::Law(other.to_string())),
        }
    }
}

impl From<SiteError> for CommandError {
    fn from(e: SiteError) -> Self {
        match e {
            SiteError::FamilyCap(_) => CommandError::Cap(e.to_string()),
            other => CommandError::Input(InputError::Law(other.to_string())),
        }
    }
}

impl From<DualityError> for CommandError {
    fn from(e: DualityError) -> Self {
        CommandError::Input(InputError::Law(e.to_string()))
    }
}

pub type CommandResult = Result<Outcome, CommandError>;

fn object(cat: &FiniteCategory, name: &str) -> Result<Obj, InputError> {
    cat.obj_by_name(name).ok_or_else(|| InputError::Usage(format!("unknown object {name}")))
}

fn status_of(verdicts: &[&Verdict]) -> Status {
    if verdicts.iter().any(|v| v.is_inconclusive()) {
        Status::Inconclusive
    } else {
        Status::Pass
    }
}

pub fn validate(doc: &Document) -> CommandResult {
    let mut text = String::new();
    let json = match doc {
        Document::Category(c) => {
            writeln!(text, "valid category: {} objects, {} morphisms", c.num_objects(), c.num_morphisms()).unwrap();
            json!({"kind": "category", "objects": c.num_objects(), "morphisms": c.num_morphisms()})
        }
        Document::Site(s) => {
            let cat = s.cat();
            writeln!(text, "valid category: {} objects, {} morphisms", cat.num_objects(), cat.num_morphisms()).unwrap();
            let axioms: Vec<(&str, Verdict)> = match s.generators() {
                Generators::Class { class, .. } => {
                    let r = check_stable_class(cat, class);
                    vec![("1", r.ax1), ("2", r.ax2), ("3", r.ax3), ("4", r.ax4)]
                }
                Generators::Families(fams) => {
                    let mut all: Vec<(Obj, Vec<usize>)> =
                        fams.iter().map(|f| (cat.cod(f[0]), f.clone())).collect();
                    all.extend(s.empty_covered().into_iter().map(|x| (x, Vec::new())));
                    let r = check_stable_family_class(cat, &all);
                    vec![("1'", r.ax1), ("2'", r.ax2), ("3'", r.ax3)]
                }
            };
            for (name, v) in &axioms {
                writeln!(text, "axiom {name}: {v}").unwrap();
            }
            let sub = s.is_subcanonical();
            writeln!(text, "subcanonical: {sub}").unwrap();
            json!({
                "kind": "site",
                "objects": cat.num_objects(),
                "morphisms": cat.num_morphisms(),
                "axioms": axioms.iter().map(|(n, v)| json!({"axiom": n, "result": v})).collect::<Vec<_>>(),
                "subcanonical": sub,
            })
        }
        Document::Poset(p) => {
            writeln!(text, "valid poset: {} elements", p.len()).unwrap();
            json!({"kind": "poset", "elements": p.len()})
        }
        Document::Semilattice(s) => {
            let d = is_distributive(s);
            writeln!(text, "valid join semilattice: {} elements", s.len()).unwrap();
            writeln!(text, "distributive: {d}").unwrap();
            json!({"kind": "semilattice", "elements": s.len(), "distributive": d})
        }
        Document::Functor(f) => {
            writeln!(text, "functor document: {} objects, {} morphisms mapped", f.on_objects.len(), f.on_morphisms.len())
                .unwrap();
            json!({"kind": "functor", "objects": f.on_objects.len(), "morphisms": f.on_morphisms.len()})
        }
    };
    Ok(Outcome::new(text, json, Status::Pass))
}

pub fn classify_command(cat: &FiniteCategory, caps: &Caps) -> CommandResult {
    let r = classify(cat, caps);
    let rows: [(&str, &Verdict); 13] = [
        ("reductive", &r.reductive),
        ("coalescent", &r.coalescent),
        ("effectual", &r.effectual),
        ("positive", &r.positive),
        ("locallyRegular", &r.locally_regular),
        ("regular", &r.regular),
        ("effective", &r.effective),
        ("augmented", &r.augmented),
        ("hasPullbacks", &r.has_pullbacks),
        ("hasEqualizers", &r.has_equalizers),
        ("funnelingColimits", &r.funneling_colimits),
        ("finiteColimits", &r.finite_colimits),
        ("strictInitial", &r.strict_initial),
    ];
    let mut text = String::new();
    for (name, v) in rows {
        writeln!(text, "{name}: {v}").unwrap();
    }
    for n in &r.notes {
        writeln!(text, "note: {n}").unwrap();
    }
    let verdicts: Vec<&Verdict> = rows.iter().map(|(_, v)| *v).collect();
    let status = status_of(&verdicts);
    Ok(Outcome::new(text, serde_json::to_value(&r).expect("report serializes"), status))
}

pub fn arch_homs(site: &Site, a: &str, b: &str, caps: &Caps) -> CommandResult {
    let cat = site.cat();
    let (x, y) = (object(cat, a)?, object(cat, b)?);
    let comps = arch_components(site, x, y, caps)?;
    let mut text = format!("{a} -> {b}: {} arch components\n", comps.len());
    let mut listed = Vec::new();
    for comp in &comps {
        let rep = comp.iter().min().expect("components are nonempty").describe(cat);
        writeln!(text, "  {rep} ({} arches)", comp.len()).unwrap();
        listed.push(json!({"representative": rep, "size": comp.len()}));
    }
    let json = json!({"source": a, "target": b, "count": comps.len(), "components": listed});
    Ok(Outcome::new(text, json, Status::Pass))
}

pub fn sheaf_homs(site: &Site, a: &str, b: &str) -> CommandResult {
    let cat = site.cat();
    let (x, y) = (object(cat, a)?, object(cat, b)?);
    let (lx, ly) = (ell(site, x), ell(site, y));
    let n = hom_sheaves(site, lx.sheaf(), ly.sheaf()).len();
    let text = format!("l{a} -> l{b}: {n} sheaf morphisms\n");
    Ok(Outcome::new(text, json!({"source": a, "target": b, "count": n}), Status::Pass))
}

pub fn supercompact_command(site: &Site, compact: bool, caps: &Caps) -> CommandResult {
    let sc = if compact {
        compact_category_bounded(site, caps.coproduct_bound, caps)?
    } else {
        supercompact_category(site, caps)?
    };
    let c = &sc.category;
    let label = if compact { "compact (bounded)" } else { "supercompact" };
    let mut text = format!("{} {label} objects, {} morphisms\n", c.num_objects(), c.num_morphisms());
    for x in c.objects() {
        writeln!(text, "  {}: sizes {:?}", c.obj_name(x), sc.sheaves[x].sizes()).unwrap();
    }
    for x in c.objects() {
        for y in c.objects() {
            let n = c.hom(x, y).len();
            if n > 0 {
                writeln!(text, "  hom({}, {}) = {n}", c.obj_name(x), c.obj_name(y)).unwrap();
            }
        }
    }
    let sizes: serde_json::Map<String, Value> =
        c.objects().map(|x| (c.obj_name(x).to_string(), json!(sc.sheaves[x].sizes()))).collect();
    let json = json!({"category": io::category_doc(c), "sheaf_sizes": sizes});
    Ok(Outcome::new(text, json, Status::Pass))
}

pub fn quotient_site(site: &Site) -> CommandResult {
    let cat = site.cat();
    let q = canonical_congruence(site);
    let classes: Vec<Vec<String>> =
        q.classes().iter().map(|c| c.iter().map(|&m| cat.mor_name(m).to_string()).collect()).collect();
    let qc = q.quotient.cat();
    let mut text = format!("{} nontrivial classes\n", classes.len());
    for c in &classes {
        writeln!(text, "  {}", c.join(" ~ ")).unwrap();
    }
    writeln!(text, "quotient: {} objects, {} morphisms", qc.num_objects(), qc.num_morphisms()).unwrap();
    text.push_str(&io::emit(&Document::Site(q.quotient.clone())));
    let json = json!({"classes": classes, "quotient": io::site_doc(&q.quotient)});
    Ok(Outcome::new(text, json, Status::Pass))
}

pub fn morphism_check(functor: &io::FunctorDoc, source: &Site, target: &Site) -> CommandResult {
    let f = io::resolve_functor(functor, source.cat(), target.cat())?;
    let law = |e: supercompact::fincat::FunctorError| CommandError::Input(InputError::Law(e.to_string()));
    let r = is_morphism_of_sites(&f, source, target).map_err(law)?;
    let co = is_comorphism_of_sites(&f, source, target).map_err(law)?;
    let mut text = String::new();
    for (name, v) in [("covering families", &r.cond1), ("covering by image", &r.cond2), ("spans", &r.cond3), ("equalizers", &r.cond4)] {
        writeln!(text, "{name}: {v}").unwrap();
    }
    writeln!(text, "morphism of sites: {}", r.holds()).unwrap();
    writeln!(text, "comorphism of sites: {co}").unwrap();
    let verdicts = [&r.cond1, &r.cond2, &r.cond3, &r.cond4];
    let status = if r.holds() {
        Status::Pass
    } else if verdicts.iter().any(|v| v.is_false()) {
        Status::Fail
    } else {
        Status::Inconclusive
    };
    let json = json!({"conditions": r, "morphism": r.holds(), "comorphism": co});
    Ok(Outcome::new(text, json, status))
}

fn set_names(p: &FinPoset, xs: &[usize]) -> String {
    format!("{{{}}}", xs.iter().map(|&x| p.name(x)).collect::<Vec<_>>().join(","))
}

pub fn spectrum(s: &JoinSemilattice) -> CommandResult {
    let d = is_distributive(s);
    let mut text = format!("distributive: {d}\n");
    if !d.is_true() {
        return Ok(Outcome::new(text, json!({"distributive": d}), Status::Pass));
    }
    let frame = ideal_frame(s)?;
    let pf = prime_filters(s)?;
    writeln!(text, "ideals: {}", frame.opens.len()).unwrap();
    writeln!(text, "prime filters: {}", pf.len()).unwrap();
    let named: Vec<Vec<&str>> = pf.iter().map(|f| f.iter().map(|&x| s.name(x)).collect()).collect();
    for f in &pf {
        writeln!(text, "  {}", set_names(s.poset(), f)).unwrap();
    }
    let json = json!({"distributive": d, "ideals": frame.opens.len(), "prime_filters": named});
    Ok(Outcome::new(text, json, Status::Pass))
}

fn round_trip_outcome(p: &FinPoset, rt: &RoundTrip, what: &str) -> Outcome {
    let f = &rt.frame.frame;
    let mut text = format!("{}: frame of {} opens, {} recovered\n", what, f.len(), rt.recovered.len());
    let pairs: Vec<(String, String)> = match &rt.iso {
        Some(iso) => (0..p.len()).map(|a| (p.name(a).to_string(), f.lattice().name(iso[a]).to_string())).collect(),
        None => Vec::new(),
    };
    match &rt.iso {
        Some(_) => {
            writeln!(text, "isomorphism found").unwrap();
            for (a, b) in &pairs {
                writeln!(text, "  {a} -> {b}").unwrap();
            }
        }
        None => writeln!(text, "no isomorphism").unwrap(),
    }
    let json = json!({
        "opens": f.len(),
        "recovered": rt.recovered.iter().map(|&i| f.lattice().name(i)).collect::<Vec<_>>(),
        "isomorphism": rt.iso.as_ref().map(|_| pairs),
    });
    Outcome::new(text, json, if rt.succeeded() { Status::Pass } else { Status::Fail })
}

pub fn stone(s: &JoinSemilattice) -> CommandResult {
    let rt = stone_round_trip(s)?;
    Ok(round_trip_outcome(s.poset(), &rt, "stone round trip"))
}

pub fn alexandroff_command(p: &FinPoset) -> CommandResult {
    let rt = alexandroff_round_trip(p);
    Ok(round_trip_outcome(p, &rt, "alexandroff round trip"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Kind {
    Poset,
    Jsl,
    DistributiveJsl,
}

pub const MAX_ENUMERATION_SIZE: usize = 8;

pub fn enumerate(kind: Kind, max_size: usize) -> CommandResult {
    if max_size > MAX_ENUMERATION_SIZE {
        return Err(InputError::Usage(format!("--max-size is limited to {MAX_ENUMERATION_SIZE}")).into());
    }
    let docs: Vec<Document> = match kind {
        Kind::Poset => enumerate_posets(max_size).into_iter().map(Document::Poset).collect(),
        Kind::Jsl => enumerate_jsls(max_size).into_iter().map(Document::Semilattice).collect(),
        Kind::DistributiveJsl => enumerate_jsls(max_size)
            .into_iter()
            .filter(|s| is_distributive(s).is_true())
            .map(Document::Semilattice)
            .collect(),
    };
    let values: Vec<Value> = docs.iter().map(io::document_value).collect();
    let mut text = String::new();
    for v in &values {
        writeln!(text, "{}", serde_json::to_string(v).expect("documents serialize")).unwrap();
    }
    Ok(Outcome::new(text, Value::Array(values), Status::Pass))
}
