//! Category-level properties of finite categories: reductive, coalescent,
//! effectual and positive categories, the regular family of exactness
//! conditions, and the round trip through the supercompact objects of the
//! reductive topos.

use std::collections::HashMap;

use serde::Serialize;

use crate::fincat::{
    coproduct, equalizer, find_equivalence, is_limit, joint_coequalizer, pullback, under_comma_components, Cone,
    Diagram, FiniteCategory, Functor, Mor, Obj,
};
use crate::sheaf::{supercompact_category, SheafError};
use crate::site::{check_stable_class, check_stable_family_class, strictly_epic_families, Site, SiteError};
use crate::verdict::{Caps, Verdict};

fn mname(cat: &FiniteCategory, m: Mor) -> String {
    cat.mor_name(m).to_string()
}

fn oname(cat: &FiniteCategory, x: Obj) -> String {
    cat.obj_name(x).to_string()
}

/// Nontrivial parallel pairs `(p, q)`, `p < q`, with codomain `d0`.
pub fn pairs_into(cat: &FiniteCategory, d0: Obj) -> Vec<(Mor, Mor)> {
    let mut out = Vec::new();
    for x in cat.objects() {
        let hs = cat.hom(x, d0);
        for (i, &p) in hs.iter().enumerate() {
            for &q in &hs[i + 1..] {
                out.push((p, q));
            }
        }
    }
    out
}

fn select(pairs: &[(Mor, Mor)], mask: &[bool]) -> Vec<(Mor, Mor)> {
    pairs.iter().zip(mask).filter(|(_, &b)| b).map(|(&p, _)| p).collect()
}

/// The pairs into `d0` coequalized by every map coequalizing the selected
/// ones. Two pair sets with the same closure have the same cocones.
fn closure(cat: &FiniteCategory, d0: Obj, pairs: &[(Mor, Mor)], mask: &[bool]) -> Vec<bool> {
    let chosen = select(pairs, mask);
    let ks = crate::fincat::coequalizing_maps(cat, d0, &chosen);
    pairs.iter().map(|&(p, q)| ks.iter().all(|&k| cat.compose(k, p) == cat.compose(k, q))).collect()
}

fn describe_funnel(cat: &FiniteCategory, d0: Obj, pairs: &[(Mor, Mor)]) -> String {
    let ps: Vec<String> = pairs.iter().map(|&(p, q)| format!("({},{})", cat.mor_name(p), cat.mor_name(q))).collect();
    format!("funnel into {} on {{{}}}", cat.obj_name(d0), ps.join(","))
}

/// Every funneling diagram has a colimit. Funnels are normalized to sets of
/// parallel pairs into the weakly terminal object, and only closed sets are
/// visited since the colimit depends on the closure alone.
pub fn has_funneling_colimits(cat: &FiniteCategory, caps: &Caps) -> Verdict {
    for d0 in cat.objects() {
        let pairs = pairs_into(cat, d0);
        let start = closure(cat, d0, &pairs, &vec![false; pairs.len()]);
        let mut seen = vec![start.clone()];
        let mut queue = vec![start];
        while let Some(set) = queue.pop() {
            let chosen = select(&pairs, &set);
            if joint_coequalizer(cat, d0, &chosen).expect("pairs target d0").is_none() {
                return Verdict::fail("funnel without a colimit", [describe_funnel(cat, d0, &chosen)]);
            }
            for i in 0..pairs.len() {
                if set[i] {
                    continue;
                }
                let mut next = set.clone();
                next[i] = true;
                let next = closure(cat, d0, &pairs, &next);
                if !seen.contains(&next) {
                    if seen.len() >= caps.funnel_cap {
                        return Verdict::Inconclusive {
                            cap: format!("funnel_cap = {} closed pair sets into {}", caps.funnel_cap, oname(cat, d0)),
                        };
                    }
                    seen.push(next.clone());
                    queue.push(next);
                }
            }
        }
    }
    Verdict::True
}

/// Initial object, binary coproducts, and coequalizers of all parallel pairs.
pub fn has_finite_colimits(cat: &FiniteCategory) -> Verdict {
    has_finite_coproducts(cat).and(|| {
        for d0 in cat.objects() {
            for (p, q) in pairs_into(cat, d0) {
                if joint_coequalizer(cat, d0, &[(p, q)]).expect("pairs target d0").is_none() {
                    return Verdict::fail("coequalizer missing", [mname(cat, p), mname(cat, q)]);
                }
            }
        }
        Verdict::True
    })
}

pub fn has_finite_coproducts(cat: &FiniteCategory) -> Verdict {
    if cat.initial_objects().is_empty() {
        return Verdict::fail("no initial object", Vec::<String>::new());
    }
    for a in cat.objects() {
        for b in a..cat.num_objects() {
            if coproduct(cat, &[a, b]).is_none() {
                return Verdict::fail("coproduct missing", [oname(cat, a), oname(cat, b)]);
            }
        }
    }
    Verdict::True
}

pub fn has_strict_initial(cat: &FiniteCategory) -> Verdict {
    let init = cat.initial_objects();
    match init.first() {
        None => Verdict::fail("no initial object", Vec::<String>::new()),
        Some(&x) => Verdict::from_bool(cat.is_strict_initial(x), || {
            let m = cat.into_obj(x).into_iter().find(|&m| !cat.is_iso(m)).expect("non-iso into the initial object");
            crate::verdict::Witness::new("morphism into the initial object is not an isomorphism", [mname(cat, m)])
        }),
    }
}

fn strict_epi_table(cat: &FiniteCategory) -> Vec<bool> {
    cat.morphisms().map(|m| cat.is_strict_epi(m)).collect()
}

/// Funneling colimits, and the strict epimorphisms form a stable class.
pub fn is_reductive(cat: &FiniteCategory, caps: &Caps) -> Verdict {
    has_funneling_colimits(cat, caps).and(|| {
        let r = check_stable_class(cat, &strict_epi_table(cat));
        r.ax1.and(|| r.ax2).and(|| r.ax3)
    })
}

/// Finite coproducts, funneling colimits, and the strictly epic finite
/// families form a stable class.
pub fn is_coalescent(cat: &FiniteCategory, caps: &Caps) -> Verdict {
    has_finite_coproducts(cat).and(|| has_funneling_colimits(cat, caps)).and(|| {
        let (fams, empty) = match strictly_epic_families(cat, caps) {
            Ok(x) => x,
            Err(SiteError::FamilyCap(c)) => {
                return Verdict::Inconclusive { cap: format!("family_cap = {} morphisms into {c}", caps.family_cap) }
            }
            Err(e) => return Verdict::fail(e.to_string(), Vec::<String>::new()),
        };
        let mut listed: Vec<(Obj, Vec<Mor>)> = empty.into_iter().map(|c| (c, Vec::new())).collect();
        listed.extend(fams.into_iter().map(|f| (cat.cod(f[0]), f)));
        let r = check_stable_family_class(cat, &listed);
        r.ax1.and(|| r.ax2).and(|| r.ax3)
    })
}

/// Reductive with an initial object.
pub fn is_augmented(cat: &FiniteCategory, caps: &Caps) -> Verdict {
    is_reductive(cat, caps).and(|| {
        Verdict::from_bool(!cat.initial_objects().is_empty(), || {
            crate::verdict::Witness::new("no initial object", Vec::<String>::new())
        })
    })
}

/// Effectuality, quantified over normalized funnels. A pair set containing
/// a pair already forced by the others imposes a weaker condition than the
/// smaller set, so only independent pair sets are visited.
pub fn is_effectual(cat: &FiniteCategory, caps: &Caps) -> Verdict {
    let strict = strict_epi_table(cat);
    for d0 in cat.objects() {
        let pairs = pairs_into(cat, d0);
        let mut visited = 0usize;
        let mut stack: Vec<(Vec<bool>, usize)> = vec![(vec![false; pairs.len()], 0)];
        while let Some((set, from)) = stack.pop() {
            visited += 1;
            if visited > caps.funnel_cap {
                return Verdict::Inconclusive {
                    cap: format!("funnel_cap = {} pair sets into {}", caps.funnel_cap, oname(cat, d0)),
                };
            }
            if let Some(w) = effectual_at(cat, &strict, d0, &select(&pairs, &set)) {
                return w;
            }
            for i in (from..pairs.len()).rev() {
                let mut next = set.clone();
                next[i] = true;
                if independent(cat, d0, &pairs, &next) {
                    stack.push((next, i + 1));
                }
            }
        }
    }
    Verdict::True
}

fn independent(cat: &FiniteCategory, d0: Obj, pairs: &[(Mor, Mor)], set: &[bool]) -> bool {
    (0..pairs.len()).filter(|&i| set[i]).all(|i| {
        let mut rest = set.to_vec();
        rest[i] = false;
        !closure(cat, d0, pairs, &rest)[i]
    })
}

/// The effectuality condition for one normalized funnel; `None` when it
/// holds or the funnel has no colimit.
fn effectual_at(cat: &FiniteCategory, strict: &[bool], d0: Obj, chosen: &[(Mor, Mor)]) -> Option<Verdict> {
    let (lambda, _) = joint_coequalizer(cat, d0, chosen).expect("pairs target d0")?;
    let diag = Diagram::funnel(cat, d0, chosen).expect("pairs target d0");
    let mut comps: HashMap<Obj, HashMap<Mor, usize>> = HashMap::new();
    let mut component = |x: Obj, m: Mor| -> usize {
        let ix = comps.entry(x).or_insert_with(|| {
            under_comma_components(cat, x, &diag)
                .into_iter()
                .enumerate()
                .flat_map(|(k, comp)| comp.into_iter().filter(|&(i, _)| i == 0).map(move |(_, m)| (m, k)))
                .collect()
        });
        ix[&m]
    };
    for c in cat.objects() {
        let hs = cat.hom(c, d0);
        for (i, &g1) in hs.iter().enumerate() {
            for &g2 in &hs[i + 1..] {
                if cat.compose(lambda, g1) != cat.compose(lambda, g2) {
                    continue;
                }
                let joined = cat.into_obj(c).into_iter().filter(|&t| strict[t]).any(|t| {
                    let x = cat.dom(t);
                    component(x, cat.compose(g1, t)) == component(x, cat.compose(g2, t))
                });
                if !joined {
                    return Some(Verdict::fail(
                        "identified maps never locally connected",
                        [describe_funnel(cat, d0, chosen), oname(cat, c), mname(cat, g1), mname(cat, g2)],
                    ));
                }
            }
        }
    }
    None
}

/// Finite coproducts are disjoint and their injections are monic: for every
/// pair of objects (a repeated object included) the two injections are
/// monic and their pullback is a strict initial object.
pub fn is_positive(cat: &FiniteCategory) -> Verdict {
    for a in cat.objects() {
        for b in a..cat.num_objects() {
            let Some(co) = coproduct(cat, &[a, b]) else {
                return Verdict::fail("coproduct missing", [oname(cat, a), oname(cat, b)]);
            };
            for &i in &co.legs {
                if !cat.is_mono(i) {
                    return Verdict::fail("coproduct injection is not monic", [mname(cat, i)]);
                }
            }
            let (i, j) = (co.legs[0], co.legs[1]);
            match pullback(cat, i, j) {
                None => return Verdict::fail("injections have no pullback", [mname(cat, i), mname(cat, j)]),
                Some((p, _, _)) if !cat.is_strict_initial(p) => {
                    return Verdict::fail(
                        "coproduct not disjoint",
                        [oname(cat, a), oname(cat, b), format!("intersection {}", cat.obj_name(p))],
                    )
                }
                Some(_) => {}
            }
        }
    }
    Verdict::True
}

pub fn has_pullbacks(cat: &FiniteCategory) -> Verdict {
    for c in cat.objects() {
        let into = cat.into_obj(c);
        for (i, &f) in into.iter().enumerate() {
            for &g in &into[i..] {
                if pullback(cat, f, g).is_none() {
                    return Verdict::fail("pullback missing", [mname(cat, f), mname(cat, g)]);
                }
            }
        }
    }
    Verdict::True
}

pub fn has_equalizers(cat: &FiniteCategory) -> Verdict {
    for d0 in cat.objects() {
        for (p, q) in pairs_into(cat, d0) {
            if equalizer(cat, p, q).is_none() {
                return Verdict::fail("equalizer missing", [mname(cat, p), mname(cat, q)]);
            }
        }
    }
    Verdict::True
}

/// Epimorphisms that factor through no proper monomorphism.
pub fn is_extremal_epi(cat: &FiniteCategory, e: Mor) -> bool {
    cat.is_epi(e)
        && cat.into_obj(cat.cod(e)).into_iter().all(|m| {
            cat.is_iso(m) || !cat.is_mono(m) || cat.hom(cat.dom(e), cat.dom(m)).iter().all(|&g| cat.compose(m, g) != e)
        })
}

pub fn is_jointly_monic(cat: &FiniteCategory, f: Mor, g: Mor) -> bool {
    let b = cat.dom(f);
    cat.objects().all(|z| {
        let hs = cat.hom(z, b);
        hs.iter().enumerate().all(|(i, &h)| {
            hs[i + 1..].iter().all(|&k| cat.compose(f, h) != cat.compose(f, k) || cat.compose(g, h) != cat.compose(g, k))
        })
    })
}

/// Pullbacks, equalizers, an orthogonal (extremal epi, mono) factorization
/// system whose left class is stable under pullback, and every span factors
/// through a jointly monic pair via an extremal epimorphism.
pub fn is_locally_regular(cat: &FiniteCategory) -> Verdict {
    has_pullbacks(cat).and(|| has_equalizers(cat)).and(|| {
        let extremal: Vec<bool> = cat.morphisms().map(|m| is_extremal_epi(cat, m)).collect();
        let mono: Vec<bool> = cat.morphisms().map(|m| cat.is_mono(m)).collect();
        for f in cat.morphisms() {
            let factors = cat.morphisms().filter(|&e| extremal[e] && cat.dom(e) == cat.dom(f)).any(|e| {
                cat.hom(cat.cod(e), cat.cod(f)).iter().any(|&m| mono[m] && cat.compose(m, e) == f)
            });
            if !factors {
                return Verdict::fail("no (extremal epi, mono) factorization", [mname(cat, f)]);
            }
        }
        for e in cat.morphisms().filter(|&e| extremal[e]) {
            for m in cat.morphisms().filter(|&m| mono[m]) {
                for &u in cat.hom(cat.dom(e), cat.dom(m)) {
                    for &v in cat.hom(cat.cod(e), cat.cod(m)) {
                        if cat.compose(m, u) != cat.compose(v, e) {
                            continue;
                        }
                        let diagonal = cat
                            .hom(cat.cod(e), cat.dom(m))
                            .iter()
                            .any(|&d| cat.compose(d, e) == u && cat.compose(m, d) == v);
                        if !diagonal {
                            return Verdict::fail(
                                "square without a diagonal",
                                [mname(cat, e), mname(cat, m), mname(cat, u), mname(cat, v)],
                            );
                        }
                    }
                }
            }
        }
        for e in cat.morphisms().filter(|&e| extremal[e]) {
            for g in cat.into_obj(cat.cod(e)) {
                let (_, e2, _) = pullback(cat, g, e).expect("pullbacks exist");
                if !extremal[e2] {
                    return Verdict::fail("extremal epimorphism not stable under pullback", [mname(cat, e), mname(cat, g)]);
                }
            }
        }
        for a in cat.objects() {
            let out = cat.out_of(a);
            for &f in &out {
                for &g in &out {
                    let factors = cat.morphisms().filter(|&e| extremal[e] && cat.dom(e) == a).any(|e| {
                        let b = cat.cod(e);
                        cat.hom(b, cat.cod(f)).iter().any(|&f2| {
                            cat.compose(f2, e) == f
                                && cat.hom(b, cat.cod(g)).iter().any(|&g2| {
                                    cat.compose(g2, e) == g && is_jointly_monic(cat, f2, g2)
                                })
                        })
                    });
                    if !factors {
                        return Verdict::fail("span without a jointly monic image", [mname(cat, f), mname(cat, g)]);
                    }
                }
            }
        }
        Verdict::True
    })
}

/// Locally regular with a terminal object.
pub fn is_regular(cat: &FiniteCategory) -> Verdict {
    is_locally_regular(cat).and(|| {
        Verdict::from_bool(!cat.terminal_objects().is_empty(), || {
            crate::verdict::Witness::new("no terminal object", Vec::<String>::new())
        })
    })
}

/// Whether the jointly monic pair `a, b: R ⇉ A` induces an equivalence
/// relation on every hom-set `C(Z, A)`.
pub fn is_equivalence_relation(cat: &FiniteCategory, a: Mor, b: Mor) -> bool {
    let (r, x) = (cat.dom(a), cat.cod(a));
    if cat.dom(b) != r || cat.cod(b) != x || !is_jointly_monic(cat, a, b) {
        return false;
    }
    cat.objects().all(|z| {
        let hs = cat.hom(z, x);
        let rel: Vec<(Mor, Mor)> = cat.hom(z, r).iter().map(|&u| (cat.compose(a, u), cat.compose(b, u))).collect();
        let has = |p: Mor, q: Mor| rel.contains(&(p, q));
        hs.iter().all(|&h| has(h, h))
            && rel.iter().all(|&(p, q)| has(q, p))
            && rel.iter().all(|&(p, q)| rel.iter().filter(|&&(q2, _)| q2 == q).all(|&(_, s)| has(p, s)))
    })
}

/// Every equivalence relation is the kernel pair of some morphism.
pub fn is_effective(cat: &FiniteCategory) -> Verdict {
    for r in cat.objects() {
        for x in cat.objects() {
            let hs = cat.hom(r, x);
            for &a in hs {
                for &b in hs {
                    if !is_equivalence_relation(cat, a, b) {
                        continue;
                    }
                    let kernel = cat.out_of(x).into_iter().any(|f| {
                        is_limit(cat, &Diagram::cospan(cat, f, f), &Cone { vertex: r, legs: vec![a, b] })
                    });
                    if !kernel {
                        return Verdict::fail("equivalence relation is not a kernel pair", [mname(cat, a), mname(cat, b)]);
                    }
                }
            }
        }
    }
    Verdict::True
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub reductive: Verdict,
    pub coalescent: Verdict,
    pub effectual: Verdict,
    pub positive: Verdict,
    pub has_pullbacks: Verdict,
    pub has_equalizers: Verdict,
    pub locally_regular: Verdict,
    pub regular: Verdict,
    pub effective: Verdict,
    pub augmented: Verdict,
    pub funneling_colimits: Verdict,
    pub finite_colimits: Verdict,
    pub strict_initial: Verdict,
    /// Properties that are only meaningful under another one which failed.
    pub notes: Vec<String>,
}

pub fn classify(cat: &FiniteCategory, caps: &Caps) -> ClassificationReport {
    let reductive = is_reductive(cat, caps);
    let coalescent = is_coalescent(cat, caps);
    let effectual = is_effectual(cat, caps);
    let positive = is_positive(cat);
    let mut notes = Vec::new();
    if !reductive.is_true() && !coalescent.is_true() {
        notes.push("effectual is defined for reductive or coalescent categories only".to_string());
    }
    if !coalescent.is_true() {
        notes.push("positive is defined for coalescent categories only".to_string());
    }
    let augmented = if reductive.is_true() {
        Verdict::from_bool(!cat.initial_objects().is_empty(), || {
            crate::verdict::Witness::new("no initial object", Vec::<String>::new())
        })
    } else {
        reductive.clone()
    };
    let locally_regular = is_locally_regular(cat);
    let regular = locally_regular.clone().and(|| {
        Verdict::from_bool(!cat.terminal_objects().is_empty(), || {
            crate::verdict::Witness::new("no terminal object", Vec::<String>::new())
        })
    });
    ClassificationReport {
        reductive,
        coalescent,
        effectual,
        positive,
        has_pullbacks: has_pullbacks(cat),
        has_equalizers: has_equalizers(cat),
        locally_regular,
        regular,
        effective: is_effective(cat),
        augmented,
        funneling_colimits: has_funneling_colimits(cat, caps),
        finite_colimits: has_finite_colimits(cat),
        strict_initial: has_strict_initial(cat),
        notes,
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RoundTripError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Site(#[from] SiteError),
    #[error(transparent)]
    Sheaf(#[from] SheafError),
}

/// Builds the reductive site on `cat`, computes the supercompact sheaves and
/// searches for an equivalence from them back to `cat`.
pub fn correspondence_round_trip(cat: &FiniteCategory, caps: &Caps) -> Result<Option<Functor>, RoundTripError> {
    let r = is_reductive(cat, caps);
    if !r.is_true() {
        return Err(RoundTripError::Precondition(format!("reductive: {r}")));
    }
    let e = is_effectual(cat, caps);
    if !e.is_true() {
        return Err(RoundTripError::Precondition(format!("effectual: {e}")));
    }
    let site = Site::reductive(cat.clone())?;
    let sc = supercompact_category(&site, caps)?;
    Ok(find_equivalence(&sc.category, cat))
}
