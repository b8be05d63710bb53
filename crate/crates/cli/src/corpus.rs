//! Self-verifying example corpus: each entry holds an input document and the
//! results expected of it, every expectation labelled with where it comes from.

use std::cell::OnceCell;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use supercompact::arch::{arch_components, representable_category};
use supercompact::classify::{classify, correspondence_round_trip, ClassificationReport, RoundTripError};
use supercompact::crosscheck::compare_arches_with_sheaves;
use supercompact::duality::{
    alexandroff, alexandroff_round_trip, ideal_frame, is_distributive, join_cover_report, prime_filters,
    stone_round_trip, FinPoset, JoinSemilattice,
};
use supercompact::fincat::{find_equivalence, FiniteCategory};
use supercompact::sheaf::{ell, hom_sheaves, supercompact_category};
use supercompact::site::{canonical_congruence, check_stable_class, generated_sieve, is_effective_epimorphic_sieve, Site};
use supercompact::verdict::{Caps, Verdict, Witness};

use crate::commands::{CommandError, Status};
use crate::io::{self, Document, InputError};

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    #[serde(rename = "PAPER")]
    Paper,
    #[serde(rename = "TRIVIAL")]
    Trivial,
    #[serde(rename = "DERIVED")]
    Derived,
}

impl Provenance {
    pub fn label(self) -> &'static str {
        match self {
            Provenance::Paper => "PAPER",
            Provenance::Trivial => "TRIVIAL",
            Provenance::Derived => "DERIVED",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum Check {
    /// A named yes/no property of the entry.
    Verdict { property: String, value: bool },
    /// The property fails with exactly these witness items.
    Witness { property: String, items: Vec<String> },
    ArchComponents { source: String, target: String, count: usize },
    SheafHoms { source: String, target: String, count: usize },
    ArchesMatchSheaves { value: bool },
    SupercompactObjects { count: usize },
    /// The supercompact category is equivalent to the category of another
    /// entry.
    SupercompactEquivalent { target: String, value: bool },
    /// The representable category is equivalent to that of the canonical
    /// quotient site.
    QuotientRepresentablesEquivalent { value: bool },
    QuotientClasses { count: usize },
    StrictEpi { morphism: String, value: bool },
    EffectiveEpiSieve { object: String, generators: Vec<String>, value: bool },
    CorrespondenceRoundTrip { value: bool },
    Ideals { count: usize },
    PrimeFilters { sets: Vec<Vec<String>> },
    StoneRoundTrip { value: bool },
    Opens { count: usize },
    AlexandroffRoundTrip { value: bool },
}

impl Check {
    pub fn describe(&self) -> String {
        match self {
            Check::Verdict { property, value } => format!("{property} = {value}"),
            Check::Witness { property, items } => format!("{property} fails at [{}]", items.join(", ")),
            Check::ArchComponents { source, target, count } => format!("arch components {source} -> {target} = {count}"),
            Check::SheafHoms { source, target, count } => format!("sheaf homs {source} -> {target} = {count}"),
            Check::ArchesMatchSheaves { value } => format!("arches match sheaves = {value}"),
            Check::SupercompactObjects { count } => format!("supercompact objects = {count}"),
            Check::SupercompactEquivalent { target, value } => format!("supercompact category ~ {target} = {value}"),
            Check::QuotientRepresentablesEquivalent { value } => format!("representables ~ quotient representables = {value}"),
            Check::QuotientClasses { count } => format!("congruence classes = {count}"),
            Check::StrictEpi { morphism, value } => format!("strict epi {morphism} = {value}"),
            Check::EffectiveEpiSieve { object, generators, value } => {
                format!("effective-epimorphic sieve on {object} by [{}] = {value}", generators.join(", "))
            }
            Check::CorrespondenceRoundTrip { value } => format!("correspondence round trip = {value}"),
            Check::Ideals { count } => format!("ideals = {count}"),
            Check::PrimeFilters { sets } => format!("prime filters = {sets:?}"),
            Check::StoneRoundTrip { value } => format!("stone round trip = {value}"),
            Check::Opens { count } => format!("opens = {count}"),
            Check::AlexandroffRoundTrip { value } => format!("alexandroff round trip = {value}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expectation {
    #[serde(flatten)]
    pub check: Check,
    pub tag: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub citation: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusEntry {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub input: Value,
    pub expect: Vec<Expectation>,
}

/// The corpus shipped with the binary, by file name.
pub const BUNDLED: &[(&str, &str)] = &[
    ("antichain2.json", include_str!("../corpus/antichain2.json")),
    ("chain2_augmented_reductive.json", include_str!("../corpus/chain2_augmented_reductive.json")),
    ("chain2_jsl.json", include_str!("../corpus/chain2_jsl.json")),
    ("chain3.json", include_str!("../corpus/chain3.json")),
    ("chain3_coalescent.json", include_str!("../corpus/chain3_coalescent.json")),
    ("coequalizer.json", include_str!("../corpus/coequalizer.json")),
    ("coequalizer_reductive.json", include_str!("../corpus/coequalizer_reductive.json")),
    ("congruence_t.json", include_str!("../corpus/congruence_t.json")),
    ("diamond.json", include_str!("../corpus/diamond.json")),
    ("diamond_augmented_reductive.json", include_str!("../corpus/diamond_augmented_reductive.json")),
    ("diamond_coalescent.json", include_str!("../corpus/diamond_coalescent.json")),
    ("diamond_jsl.json", include_str!("../corpus/diamond_jsl.json")),
    ("diamond_poset.json", include_str!("../corpus/diamond_poset.json")),
    ("diamond_trivial.json", include_str!("../corpus/diamond_trivial.json")),
    ("idempotent_monoid_all.json", include_str!("../corpus/idempotent_monoid_all.json")),
    ("njsl5.json", include_str!("../corpus/njsl5.json")),
    ("parallel_pair.json", include_str!("../corpus/parallel_pair.json")),
    ("parallel_pair_trivial.json", include_str!("../corpus/parallel_pair_trivial.json")),
    ("right_zero_monoid_all.json", include_str!("../corpus/right_zero_monoid_all.json")),
    ("split_idempotent_split_epis.json", include_str!("../corpus/split_idempotent_split_epis.json")),
    ("terminal.json", include_str!("../corpus/terminal.json")),
    ("terminal_trivial.json", include_str!("../corpus/terminal_trivial.json")),
    ("tworel_c.json", include_str!("../corpus/tworel_c.json")),
    ("tworel_c_prime.json", include_str!("../corpus/tworel_c_prime.json")),
    ("tworel_c_reductive.json", include_str!("../corpus/tworel_c_reductive.json")),
    ("vee.json", include_str!("../corpus/vee.json")),
    ("vee_join_cover.json", include_str!("../corpus/vee_join_cover.json")),
];

/// A parsed entry.
#[derive(Clone, Debug)]
pub struct LoadedEntry {
    pub entry: CorpusEntry,
    pub document: Document,
}

fn load_one(file: &str, text: &str) -> Result<LoadedEntry, InputError> {
    let entry: CorpusEntry = serde_json::from_str(text).map_err(|e| InputError::Json(format!("{file}: {e}")))?;
    let document = io::parse_value(&entry.input).map_err(|e| InputError::Usage(format!("{file}: {e}")))?;
    for (i, ex) in entry.expect.iter().enumerate() {
        if ex.tag == Provenance::Paper && ex.citation.as_deref().is_none_or(str::is_empty) {
            return Err(InputError::Schema {
                path: format!("{file}: $.expect[{i}]"),
                message: "expectations taken from the source need a citation".into(),
            });
        }
    }
    Ok(LoadedEntry { entry, document })
}

/// Loads entries from `(file name, text)` pairs, sorted by entry name.
pub fn load(files: &[(String, String)]) -> Result<Vec<LoadedEntry>, InputError> {
    let mut out = files.iter().map(|(f, t)| load_one(f, t)).collect::<Result<Vec<_>, _>>()?;
    out.sort_by(|a, b| a.entry.name.cmp(&b.entry.name));
    if let Some(w) = out.windows(2).find(|w| w[0].entry.name == w[1].entry.name) {
        return Err(InputError::Usage(format!("duplicate corpus entry {}", w[0].entry.name)));
    }
    Ok(out)
}

pub fn bundled() -> Vec<LoadedEntry> {
    let files: Vec<(String, String)> = BUNDLED.iter().map(|(f, t)| (f.to_string(), t.to_string())).collect();
    load(&files).expect("bundled corpus parses")
}

/// Reads every `*.json` file of a directory.
pub fn load_dir(dir: &Path) -> Result<Vec<LoadedEntry>, InputError> {
    let io_err = |e: std::io::Error| InputError::Io { path: dir.display().to_string(), message: e.to_string() };
    let mut files = Vec::new();
    for item in std::fs::read_dir(dir).map_err(io_err)? {
        let path = item.map_err(io_err)?.path();
        if path.extension().is_some_and(|e| e == "json") {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| InputError::Io { path: path.display().to_string(), message: e.to_string() })?;
            files.push((path.file_name().unwrap_or_default().to_string_lossy().into_owned(), text));
        }
    }
    load(&files)
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub entry: String,
    pub check: String,
    pub tag: Provenance,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusReport {
    pub entries: usize,
    pub results: Vec<CheckResult>,
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
}

impl CorpusReport {
    pub fn status(&self) -> Status {
        if self.failed > 0 {
            Status::Fail
        } else if self.inconclusive > 0 {
            Status::Inconclusive
        } else {
            Status::Pass
        }
    }

    pub fn text(&self) -> String {
        let mut s = format!("corpus: {} entries, {} expectations\n", self.entries, self.results.len());
        for r in &self.results {
            let mark = match r.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Inconclusive => "inconclusive",
            };
            write!(s, "{mark} {}: {} [{}]", r.entry, r.check, r.tag.label()).unwrap();
            if r.status != Status::Pass {
                write!(s, " ({})", r.detail).unwrap();
            }
            s.push('\n');
        }
        writeln!(s, "summary: {} passed, {} failed, {} inconclusive", self.passed, self.failed, self.inconclusive)
            .unwrap();
        s
    }
}

/// Lazily computed facts about one entry, shared by its expectations.
struct Context<'a> {
    doc: &'a Document,
    others: &'a BTreeMap<&'a str, &'a Document>,
    caps: Caps,
    classification: OnceCell<Option<ClassificationReport>>,
}

/// The observed value and an optional note explaining it.
type Actual = Result<(String, Option<String>), CommandError>;

fn problem(message: impl Into<String>) -> CommandError {
    CommandError::Input(InputError::Usage(message.into()))
}

impl Context<'_> {
    fn site(&self) -> Result<Site, CommandError> {
        Ok(self.doc.clone().into_site()?)
    }

    fn category(&self) -> Result<FiniteCategory, CommandError> {
        Ok(self.doc.clone().into_category()?)
    }

    fn semilattice(&self) -> Result<JoinSemilattice, CommandError> {
        Ok(self.doc.clone().into_semilattice()?)
    }

    fn poset(&self) -> Result<FinPoset, CommandError> {
        Ok(self.doc.clone().into_poset()?)
    }

    fn classification(&self) -> Option<&ClassificationReport> {
        self.classification
            .get_or_init(|| self.category().ok().map(|c| classify(&c, &self.caps)))
            .as_ref()
    }

    fn verdict(&self, property: &str) -> Result<Verdict, CommandError> {
        if let Some(r) = self.classification() {
            let v = match property {
                "reductive" => Some(&r.reductive),
                "coalescent" => Some(&r.coalescent),
                "effectual" => Some(&r.effectual),
                "positive" => Some(&r.positive),
                "has_pullbacks" => Some(&r.has_pullbacks),
                "has_equalizers" => Some(&r.has_equalizers),
                "locally_regular" => Some(&r.locally_regular),
                "regular" => Some(&r.regular),
                "effective" => Some(&r.effective),
                "augmented" => Some(&r.augmented),
                "funneling_colimits" => Some(&r.funneling_colimits),
                "finite_colimits" => Some(&r.finite_colimits),
                "strict_initial" => Some(&r.strict_initial),
                _ => None,
            };
            if let Some(v) = v {
                return Ok(v.clone());
            }
        }
        match (property, self.doc) {
            ("subcanonical", Document::Site(s)) => Ok(Verdict::from_bool(s.is_subcanonical(), || {
                Witness::new("some representable presheaf is not a sheaf", Vec::<String>::new())
            })),
            ("stable_class", Document::Site(s)) if s.is_principal() => {
                let r = check_stable_class(s.cat(), s.class_members());
                Ok(r.ax1.and(|| r.ax2).and(|| r.ax3).and(|| r.ax4))
            }
            ("distributive", Document::Semilattice(s)) => Ok(is_distributive(s)),
            ("join_cover_axiom_3'", Document::Semilattice(s)) => Ok(join_cover_report(s).ax3),
            _ => Err(problem(format!("unknown property {property} for a {}", self.doc.kind()))),
        }
    }

    fn equivalent_to(&self, cat: &FiniteCategory, target: &str) -> Result<bool, CommandError> {
        let other = self.others.get(target).ok_or_else(|| problem(format!("no corpus entry {target}")))?;
        let tc = (*other).clone().into_category()?;
        Ok(find_equivalence(cat, &tc).is_some())
    }

    /// The observed value as text.
    fn actual(&self, check: &Check) -> Actual {
        let caps = &self.caps;
        let mut note = None;
        let value = match check {
            Check::Verdict { property, .. } | Check::Witness { property, .. } => self.verdict(property)?.to_string(),
            Check::ArchComponents { source, target, .. } => {
                let site = self.site()?;
                let (a, b) = objects(site.cat(), source, target)?;
                arch_components(&site, a, b, caps)?.len().to_string()
            }
            Check::SheafHoms { source, target, .. } => {
                let site = self.site()?;
                let (a, b) = objects(site.cat(), source, target)?;
                hom_sheaves(&site, ell(&site, a).sheaf(), ell(&site, b).sheaf()).len().to_string()
            }
            Check::ArchesMatchSheaves { .. } => compare_arches_with_sheaves(&self.site()?, caps)?.agrees().to_string(),
            Check::SupercompactObjects { .. } => {
                supercompact_category(&self.site()?, caps)?.category.num_objects().to_string()
            }
            Check::SupercompactEquivalent { target, .. } => {
                let sc = supercompact_category(&self.site()?, caps)?;
                self.equivalent_to(&sc.category, target)?.to_string()
            }
            Check::QuotientRepresentablesEquivalent { .. } => {
                let site = self.site()?;
                let q = canonical_congruence(&site);
                let a = representable_category(&site, caps)?;
                let b = representable_category(&q.quotient, caps)?;
                find_equivalence(&a.category, &b.category).is_some().to_string()
            }
            Check::QuotientClasses { .. } => canonical_congruence(&self.site()?).classes().len().to_string(),
            Check::StrictEpi { morphism, .. } => {
                let cat = self.category()?;
                let m = cat.mor_by_name(morphism).ok_or_else(|| problem(format!("unknown morphism {morphism}")))?;
                cat.is_strict_epi(m).to_string()
            }
            Check::EffectiveEpiSieve { object, generators, .. } => {
                let cat = self.category()?;
                let c = cat.obj_by_name(object).ok_or_else(|| problem(format!("unknown object {object}")))?;
                let gens = generators
                    .iter()
                    .map(|g| cat.mor_by_name(g).ok_or_else(|| problem(format!("unknown morphism {g}"))))
                    .collect::<Result<Vec<_>, _>>()?;
                is_effective_epimorphic_sieve(&cat, &generated_sieve(&cat, c, &gens)).to_string()
            }
            Check::CorrespondenceRoundTrip { .. } => match correspondence_round_trip(&self.category()?, caps) {
                Ok(f) => f.is_some().to_string(),
                Err(RoundTripError::Precondition(p)) => {
                    note = Some(p.to_string());
                    "false".to_string()
                }
                Err(RoundTripError::Site(e)) => return Err(e.into()),
                Err(RoundTripError::Sheaf(e)) => return Err(e.into()),
            },
            Check::Ideals { .. } => ideal_frame(&self.semilattice()?)?.opens.len().to_string(),
            Check::PrimeFilters { .. } => {
                let s = self.semilattice()?;
                let named: Vec<Vec<String>> = prime_filters(&s)?
                    .iter()
                    .map(|f| f.iter().map(|&x| s.name(x).to_string()).collect())
                    .collect();
                format!("{named:?}")
            }
            Check::StoneRoundTrip { .. } => stone_round_trip(&self.semilattice()?)?.succeeded().to_string(),
            Check::Opens { .. } => alexandroff(&self.poset()?).opens.len().to_string(),
            Check::AlexandroffRoundTrip { .. } => alexandroff_round_trip(&self.poset()?).succeeded().to_string(),
        };
        Ok((value, note))
    }
}

fn objects(cat: &FiniteCategory, a: &str, b: &str) -> Result<(usize, usize), CommandError> {
    let find = |n: &str| cat.obj_by_name(n).ok_or_else(|| problem(format!("unknown object {n}")));
    Ok((find(a)?, find(b)?))
}

fn expected(check: &Check) -> String {
    match check {
        Check::Verdict { value, .. } => (if *value { "true" } else { "false" }).to_string(),
        Check::Witness { .. } => "false".to_string(),
        Check::ArchComponents { count, .. }
        | Check::SheafHoms { count, .. }
        | Check::SupercompactObjects { count }
        | Check::QuotientClasses { count }
        | Check::Ideals { count }
        | Check::Opens { count } => count.to_string(),
        Check::PrimeFilters { sets } => format!("{sets:?}"),
        Check::ArchesMatchSheaves { value }
        | Check::SupercompactEquivalent { value, .. }
        | Check::QuotientRepresentablesEquivalent { value }
        | Check::StrictEpi { value, .. }
        | Check::EffectiveEpiSieve { value, .. }
        | Check::CorrespondenceRoundTrip { value }
        | Check::StoneRoundTrip { value }
        | Check::AlexandroffRoundTrip { value } => value.to_string(),
    }
}

fn judge(ctx: &Context, check: &Check) -> (Status, String) {
    let want = expected(check);
    match check {
        Check::Verdict { property, value } => match ctx.verdict(property) {
            Ok(v) if v.is_inconclusive() => (Status::Inconclusive, v.to_string()),
            Ok(v) if v.is_true() == *value => (Status::Pass, v.to_string()),
            Ok(v) => (Status::Fail, format!("expected {want}, got {v}")),
            Err(e) => (Status::Fail, e.to_string()),
        },
        Check::Witness { property, items } => match ctx.verdict(property) {
            Ok(v) if v.is_inconclusive() => (Status::Inconclusive, v.to_string()),
            Ok(v) if v.witness().is_some_and(|w| w.items == *items) => (Status::Pass, v.to_string()),
            Ok(v) => (Status::Fail, format!("expected a failure at [{}], got {v}", items.join(", "))),
            Err(e) => (Status::Fail, e.to_string()),
        },
        _ => match ctx.actual(check) {
            Ok((got, note)) => {
                let status = if got == want { Status::Pass } else { Status::Fail };
                let shown = match note {
                    Some(n) => format!("{got} ({n})"),
                    None => got,
                };
                match status {
                    Status::Pass => (status, shown),
                    _ => (status, format!("expected {want}, got {shown}")),
                }
            }
            Err(e @ CommandError::Cap(_)) => (Status::Inconclusive, e.to_string()),
            Err(e) => (Status::Fail, e.to_string()),
        },
    }
}

fn evaluate_entry(e: &LoadedEntry, others: &BTreeMap<&str, &Document>, caps: &Caps) -> Vec<CheckResult> {
    let ctx = Context { doc: &e.document, others, caps: *caps, classification: OnceCell::new() };
    e.entry
        .expect
        .iter()
        .map(|ex| {
            let (status, detail) = judge(&ctx, &ex.check);
            CheckResult { entry: e.entry.name.clone(), check: ex.check.describe(), tag: ex.tag, status, detail }
        })
        .collect()
}

/// Evaluates every expectation, one entry per task on `threads` workers.
/// The report lists entries in name order whatever the thread count.
pub fn run(entries: &[LoadedEntry], caps: &Caps, threads: usize) -> Result<CorpusReport, String> {
    let others: BTreeMap<&str, &Document> = entries.iter().map(|e| (e.entry.name.as_str(), &e.document)).collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build().map_err(|e| e.to_string())?;
    let per_entry: Vec<Vec<CheckResult>> =
        pool.install(|| entries.par_iter().map(|e| evaluate_entry(e, &others, caps)).collect());
    let results: Vec<CheckResult> = per_entry.into_iter().flatten().collect();
    let count = |s: Status| results.iter().filter(|r| r.status == s).count();
    Ok(CorpusReport {
        entries: entries.len(),
        passed: count(Status::Pass),
        failed: count(Status::Fail),
        inconclusive: count(Status::Inconclusive),
        results,
    })
}
