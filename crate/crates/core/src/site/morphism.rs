use serde::Serialize;

use super::{generated_sieve, Sieve, Site};
use crate::fincat::{FiniteCategory, Functor, FunctorError, Mor, Obj};
use crate::verdict::Verdict;

/// The four conditions on a functor between sites, each with the first
/// failure found.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SiteMorphismReport {
    /// Covering families go to covering families.
    pub cond1: Verdict,
    /// Every object is covered by objects mapping into the image.
    pub cond2: Verdict,
    /// Spans into the image locally factor through images of spans.
    pub cond3: Verdict,
    /// Maps equalizing an image pair locally factor through images of maps
    /// equalizing the pair.
    pub cond4: Verdict,
}

impl SiteMorphismReport {
    pub fn holds(&self) -> bool {
        self.cond1.is_true() && self.cond2.is_true() && self.cond3.is_true() && self.cond4.is_true()
    }
}

/// Sieve on `d` of the maps `g` for which `ok(g)` holds; `ok` must be stable
/// under precomposition for the result to be a sieve.
fn sieve_where(cat: &FiniteCategory, d: Obj, mut ok: impl FnMut(Mor) -> bool) -> Sieve {
    Sieve { codomain: d, members: cat.morphisms().map(|g| cat.cod(g) == d && ok(g)).collect() }
}

/// Whether some `h: dom g → F(C')` satisfies `F(λ_j) ∘ h = targets_j` for a
/// tuple `λ` of maps out of `C'` drawn from `legs(C')`.
fn lifts_through(
    b: &FiniteCategory,
    f: &Functor,
    x: Obj,
    apexes: &[(Obj, Vec<Vec<Mor>>)],
    targets: &[Mor],
) -> bool {
    apexes.iter().any(|(c, cones)| {
        b.hom(x, f.on_objects[*c]).iter().any(|&h| {
            cones.iter().any(|legs| legs.iter().zip(targets).all(|(&l, &t)| b.compose(f.on_morphisms[l], h) == t))
        })
    })
}

pub fn is_morphism_of_sites(f: &Functor, sa: &Site, sb: &Site) -> Result<SiteMorphismReport, FunctorError> {
    let (a, b) = (sa.cat(), sb.cat());
    f.check(a, b)?;
    let fo = |x: Obj| f.on_objects[x];
    let fm = |m: Mor| f.on_morphisms[m];

    let mut cond1 = Verdict::True;
    'c1: for c in a.objects() {
        for fam in sa.covering_families(c) {
            let image: Vec<Mor> = fam.iter().map(|&m| fm(m)).collect();
            if !sb.is_covering(&generated_sieve(b, fo(c), &image)) {
                let mut items = vec![a.obj_name(c).to_string()];
                items.extend(fam.iter().map(|&m| a.mor_name(m).to_string()));
                cond1 = Verdict::fail("image of a covering family does not cover", items);
                break 'c1;
            }
        }
    }

    let mut cond2 = Verdict::True;
    for d in b.objects() {
        let s = sieve_where(b, d, |g| a.objects().any(|c| !b.hom(b.dom(g), fo(c)).is_empty()));
        if !sb.is_covering(&s) {
            cond2 = Verdict::fail("object not covered by the image", [b.obj_name(d)]);
            break;
        }
    }

    let mut cond3 = Verdict::True;
    'c3: for c1 in a.objects() {
        for c2 in a.objects() {
            let apexes: Vec<(Obj, Vec<Vec<Mor>>)> = a
                .objects()
                .map(|c| {
                    let mut spans = Vec::new();
                    for &l1 in a.hom(c, c1) {
                        for &l2 in a.hom(c, c2) {
                            spans.push(vec![l1, l2]);
                        }
                    }
                    (c, spans)
                })
                .collect();
            for d in b.objects() {
                for &l1 in b.hom(d, fo(c1)) {
                    for &l2 in b.hom(d, fo(c2)) {
                        let s = sieve_where(b, d, |g| {
                            lifts_through(b, f, b.dom(g), &apexes, &[b.compose(l1, g), b.compose(l2, g)])
                        });
                        if !sb.is_covering(&s) {
                            cond3 = Verdict::fail(
                                "span is not locally an image span",
                                [a.obj_name(c1), a.obj_name(c2), b.mor_name(l1), b.mor_name(l2)],
                            );
                            break 'c3;
                        }
                    }
                }
            }
        }
    }

    let mut cond4 = Verdict::True;
    'c4: for c1 in a.objects() {
        for c2 in a.objects() {
            let hs = a.hom(c1, c2);
            for (i, &f1) in hs.iter().enumerate() {
                for &f2 in &hs[i + 1..] {
                    let apexes: Vec<(Obj, Vec<Vec<Mor>>)> = a
                        .objects()
                        .map(|c| {
                            let ls = a.hom(c, c1).iter().filter(|&&l| a.compose(f1, l) == a.compose(f2, l));
                            (c, ls.map(|&l| vec![l]).collect())
                        })
                        .collect();
                    for d in b.objects() {
                        for &l in b.hom(d, fo(c1)) {
                            if b.compose(fm(f1), l) != b.compose(fm(f2), l) {
                                continue;
                            }
                            let s = sieve_where(b, d, |g| lifts_through(b, f, b.dom(g), &apexes, &[b.compose(l, g)]));
                            if !sb.is_covering(&s) {
                                cond4 = Verdict::fail(
                                    "equalizing map is not locally an image of an equalizing map",
                                    [a.mor_name(f1), a.mor_name(f2), b.mor_name(l)],
                                );
                                break 'c4;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(SiteMorphismReport { cond1, cond2, cond3, cond4 })
}

/// Cover lifting: every covering sieve on `F(C)` contains the image of some
/// covering sieve on `C`. Minimal covering sieves make this a single
/// inclusion per object.
pub fn is_comorphism_of_sites(f: &Functor, sa: &Site, sb: &Site) -> Result<bool, FunctorError> {
    f.check(sa.cat(), sb.cat())?;
    Ok(sa.cat().objects().all(|c| {
        let target = sb.minimal_covering_sieve(f.on_objects[c]);
        sa.minimal_covering_sieve(c).iter().all(|m| target.contains(f.on_morphisms[m]))
    }))
}
