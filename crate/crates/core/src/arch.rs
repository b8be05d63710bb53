//! Arches: spans `A ← X → B` whose left leg covers, subject to a local
//! compatibility condition. Components of the arch category between two
//! objects index the morphisms between their representable sheaves.

use std::collections::BTreeMap;

use petgraph::unionfind::UnionFind;
use serde::Serialize;

use crate::fincat::{validate, FiniteCategory, Mor, Obj, ValidationReport};
use crate::site::{canonical_congruence, generated_sieve, Generators, Site};
use crate::verdict::Caps;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Span {
    pub apex: Obj,
    pub left: Mor,
    pub right: Mor,
}

/// A (multi)arch from `source` to `target`. On principal sites an arch has a
/// single span, except for the empty arch over an empty-covered source.
/// Spans are kept sorted and distinct.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Arch {
    pub source: Obj,
    pub target: Obj,
    pub spans: Vec<Span>,
}

impl Arch {
    pub fn new(source: Obj, target: Obj, mut spans: Vec<Span>) -> Arch {
        spans.sort_unstable();
        spans.dedup();
        Arch { source, target, spans }
    }

    pub fn identity(cat: &FiniteCategory, a: Obj) -> Arch {
        let id = cat.id(a);
        Arch::new(a, a, vec![Span { apex: a, left: id, right: id }])
    }

    pub fn describe(&self, cat: &FiniteCategory) -> String {
        let parts: Vec<String> = self
            .spans
            .iter()
            .map(|s| format!("({},{})", cat.mor_name(s.left), cat.mor_name(s.right)))
            .collect();
        match parts.len() {
            1 => parts[0].clone(),
            _ => format!("{{{}}}", parts.join(",")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ArchError {
    #[error("{count} candidate spans from {source_obj} to {target_obj} exceed the cap of {cap}")]
    SpanCap { source_obj: String, target_obj: String, count: usize, cap: usize },
    #[error("more than {cap} multiarches from {source_obj} to {target_obj}")]
    ArchCap { source_obj: String, target_obj: String, cap: usize },
    #[error("arches {0} and {1} do not have matching feet")]
    FeetMismatch(String, String),
    #[error("no stability square for ({0}, {1}); the site violates axiom 3")]
    NoSquare(String, String),
    #[error("representable category fails the category laws: {0}")]
    Laws(ValidationReport),
}

/// Local equality of parallel morphisms, precomputed as the least locally
/// equal representative of each morphism.
pub struct LocalEquality {
    rep: Vec<Mor>,
}

impl LocalEquality {
    pub fn new(site: &Site) -> LocalEquality {
        LocalEquality { rep: canonical_congruence(site).representative }
    }

    pub fn equal(&self, h: Mor, k: Mor) -> bool {
        self.rep[h] == self.rep[k]
    }
}

/// `h ≡ k` on the site: some covering sieve equalizes them.
pub fn locally_equal(site: &Site, h: Mor, k: Mor) -> bool {
    site.locally_equal(h, k)
}

/// For all `h, k` with `s1.left ∘ h = s2.left ∘ k`: `s1.right ∘ h ≡ s2.right ∘ k`.
fn compatible(cat: &FiniteCategory, le: &LocalEquality, s1: &Span, s2: &Span) -> bool {
    cat.objects().all(|d| {
        cat.hom(d, s1.apex).iter().all(|&h| {
            let th = cat.compose(s1.left, h);
            let gh = cat.compose(s1.right, h);
            cat.hom(d, s2.apex)
                .iter()
                .all(|&k| cat.compose(s2.left, k) != th || le.equal(gh, cat.compose(s2.right, k)))
        })
    })
}

/// Every span of `from` factors through some span of `to` by a common map.
pub fn arch_morphism_exists(cat: &FiniteCategory, from: &Arch, to: &Arch) -> bool {
    from.spans.iter().all(|s| {
        to.spans.iter().any(|s2| {
            cat.hom(s.apex, s2.apex)
                .iter()
                .any(|&x| cat.compose(s2.left, x) == s.left && cat.compose(s2.right, x) == s.right)
        })
    })
}

/// Every arch from `a` to `b`, ordered by apex and then morphism ids.
///
/// On principal sites the left legs range over the saturated class. On
/// finitely generated sites a multiarch is a set of pairwise compatible
/// spans whose left legs generate a covering sieve; the candidate spans are
/// bounded by `caps.family_cap` and the result by `caps.search_cap`.
pub fn enumerate_arches(site: &Site, a: Obj, b: Obj, caps: &Caps) -> Result<Vec<Arch>, ArchError> {
    let le = LocalEquality::new(site);
    enumerate_with(site, &le, a, b, caps)
}

fn enumerate_with(site: &Site, le: &LocalEquality, a: Obj, b: Obj, caps: &Caps) -> Result<Vec<Arch>, ArchError> {
    let cat = site.cat();
    let mut out = Vec::new();
    if site.is_principal() {
        if site.is_empty_covered(a) {
            out.push(Arch::new(a, b, Vec::new()));
        }
        for x in cat.objects() {
            for &t in cat.hom(x, a) {
                if !site.in_saturation(t) {
                    continue;
                }
                for &g in cat.hom(x, b) {
                    let s = Span { apex: x, left: t, right: g };
                    if compatible(cat, le, &s, &s) {
                        out.push(Arch::new(a, b, vec![s]));
                    }
                }
            }
        }
        return Ok(out);
    }
    let mut spans = Vec::new();
    for x in cat.objects() {
        for &t in cat.hom(x, a) {
            for &g in cat.hom(x, b) {
                let s = Span { apex: x, left: t, right: g };
                if compatible(cat, le, &s, &s) {
                    spans.push(s);
                }
            }
        }
    }
    if spans.len() > caps.family_cap {
        return Err(ArchError::SpanCap {
            source_obj: cat.obj_name(a).to_string(),
            target_obj: cat.obj_name(b).to_string(),
            count: spans.len(),
            cap: caps.family_cap,
        });
    }
    let n = spans.len();
    let compat: Vec<Vec<bool>> =
        (0..n).map(|i| (0..n).map(|j| compatible(cat, le, &spans[i], &spans[j])).collect()).collect();
    let mut chosen: Vec<usize> = Vec::new();
    let mut overflow = false;
    cliques(&compat, 0, &mut chosen, &mut |c: &[usize]| {
        let ts: Vec<Mor> = c.iter().map(|&i| spans[i].left).collect();
        if site.is_covering(&generated_sieve(cat, a, &ts)) {
            out.push(Arch::new(a, b, c.iter().map(|&i| spans[i]).collect()));
            if out.len() > caps.search_cap {
                overflow = true;
            }
        }
        !overflow
    });
    if overflow {
        return Err(ArchError::ArchCap {
            source_obj: cat.obj_name(a).to_string(),
            target_obj: cat.obj_name(b).to_string(),
            cap: caps.search_cap,
        });
    }
    out.sort();
    Ok(out)
}

/// Visits every clique of the compatibility graph containing only indices
/// `>= from` beyond `chosen`, stopping when `visit` returns false.
fn cliques(compat: &[Vec<bool>], from: usize, chosen: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if !visit(chosen) {
        return false;
    }
    for i in from..compat.len() {
        if chosen.iter().all(|&j| compat[i][j]) {
            chosen.push(i);
            let keep = cliques(compat, i + 1, chosen, visit);
            chosen.pop();
            if !keep {
                return false;
            }
        }
    }
    true
}

fn components_of(cat: &FiniteCategory, arches: Vec<Arch>) -> Vec<Vec<Arch>> {
    let n = arches.len();
    let mut uf = UnionFind::<usize>::new(n);
    for i in 0..n {
        for j in 0..n {
            if i != j && arch_morphism_exists(cat, &arches[i], &arches[j]) {
                uf.union(i, j);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<Arch>> = BTreeMap::new();
    let mut first_of_root: Vec<Option<usize>> = vec![None; n];
    for (i, arch) in arches.into_iter().enumerate() {
        let r = uf.find_mut(i);
        let key = *first_of_root[r].get_or_insert(i);
        groups.entry(key).or_default().push(arch);
    }
    groups.into_values().collect()
}

/// Connected components of the arch category from `a` to `b`, each in
/// enumeration order, listed by least member.
pub fn arch_components(site: &Site, a: Obj, b: Obj, caps: &Caps) -> Result<Vec<Vec<Arch>>, ArchError> {
    Ok(components_of(site.cat(), enumerate_arches(site, a, b, caps)?))
}

/// Composite arch `second ∘ first`, using the least stability square on
/// principal sites.
pub fn compose_arches(site: &Site, second: &Arch, first: &Arch) -> Result<Arch, ArchError> {
    let mut all = composite_candidates(site, second, first)?;
    Ok(all.swap_remove(0))
}

/// Every composite obtained from some choice of stability square (a single
/// composite on finitely generated sites).
pub fn composite_candidates(site: &Site, second: &Arch, first: &Arch) -> Result<Vec<Arch>, ArchError> {
    let cat = site.cat();
    if first.target != second.source {
        return Err(ArchError::FeetMismatch(first.describe(cat), second.describe(cat)));
    }
    let (a, c) = (first.source, second.target);
    match site.generators() {
        Generators::Class { saturated, .. } => {
            if site.is_empty_covered(a) {
                return Ok(vec![Arch::new(a, c, Vec::new())]);
            }
            let (s1, s2) = (first.spans[0], second.spans[0]);
            let squares = crate::site::stability_squares(cat, saturated, s2.left, s1.right);
            if squares.is_empty() {
                return Err(ArchError::NoSquare(cat.mor_name(s2.left).to_string(), cat.mor_name(s1.right).to_string()));
            }
            Ok(squares
                .into_iter()
                .map(|sq| {
                    let apex = cat.dom(sq.t_prime);
                    Arch::new(
                        a,
                        c,
                        vec![Span {
                            apex,
                            left: cat.compose(s1.left, sq.t_prime),
                            right: cat.compose(s2.right, sq.g_prime),
                        }],
                    )
                })
                .collect())
        }
        Generators::Families(_) => {
            let mut spans = Vec::new();
            for s1 in &first.spans {
                for u in cat.into_obj(s1.apex) {
                    let gu = cat.compose(s1.right, u);
                    for s2 in &second.spans {
                        for &v in cat.hom(cat.dom(u), s2.apex) {
                            if cat.compose(s2.left, v) == gu {
                                spans.push(Span {
                                    apex: cat.dom(u),
                                    left: cat.compose(s1.left, u),
                                    right: cat.compose(s2.right, v),
                                });
                            }
                        }
                    }
                }
            }
            Ok(vec![Arch::new(a, c, spans)])
        }
    }
}

/// The category whose morphisms `A → B` are the arch components, with
/// component representatives kept alongside.
#[derive(Clone, Debug)]
pub struct RepresentableCategory {
    pub category: FiniteCategory,
    /// Least arch of the component each morphism stands for.
    pub arches: Vec<Arch>,
    /// Every arch of that component.
    pub components: Vec<Vec<Arch>>,
}

impl RepresentableCategory {
    /// The morphism whose component contains `arch`.
    pub fn morphism_of(&self, arch: &Arch) -> Option<Mor> {
        self.components.iter().position(|c| c.binary_search(arch).is_ok())
    }
}

pub fn representable_category(site: &Site, caps: &Caps) -> Result<RepresentableCategory, ArchError> {
    let cat = site.cat();
    let le = LocalEquality::new(site);
    let mut names = Vec::new();
    let mut dom = Vec::new();
    let mut cod = Vec::new();
    let mut arches = Vec::new();
    let mut components = Vec::new();
    for a in cat.objects() {
        for b in cat.objects() {
            for comp in components_of(cat, enumerate_with(site, &le, a, b, caps)?) {
                let mut sorted = comp.clone();
                sorted.sort();
                // Prefer a name read off a span (id, f) when there is one.
                let name = comp
                    .iter()
                    .find_map(|ar| match ar.spans.as_slice() {
                        [s] if s.left == cat.id(a) => Some(cat.mor_name(s.right).to_string()),
                        _ => None,
                    })
                    .unwrap_or_else(|| comp[0].describe(cat));
                names.push(name);
                dom.push(a);
                cod.push(b);
                arches.push(comp[0].clone());
                components.push(sorted);
            }
        }
    }
    dedupe_names(&mut names);
    let rc_tmp = RepresentableCategory {
        category: FiniteCategory::discrete(&[]),
        arches: arches.clone(),
        components: components.clone(),
    };
    let ident: Vec<Mor> = cat
        .objects()
        .map(|a| rc_tmp.morphism_of(&Arch::identity(cat, a)).expect("identity arch is enumerated"))
        .collect();
    let mut table = vec![vec![0; arches.len()]; arches.len()];
    for g in 0..arches.len() {
        for f in 0..arches.len() {
            if cod[f] == dom[g] {
                let comp = compose_arches(site, &arches[g], &arches[f])?;
                table[g][f] = rc_tmp.morphism_of(&comp).expect("composite arch is enumerated");
            }
        }
    }
    let category = FiniteCategory::from_tables(cat.obj_names().to_vec(), names, dom, cod, ident, |g, f| table[g][f]);
    let report = validate(&category.to_raw());
    if !report.is_valid() {
        return Err(ArchError::Laws(report));
    }
    Ok(RepresentableCategory { category, arches, components })
}

fn dedupe_names(names: &mut [String]) {
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    for n in names.iter_mut() {
        let count = seen.entry(n.clone()).or_insert(0);
        *count += 1;
        if *count > 1 {
            *n = format!("{n}#{count}");
        }
    }
}
