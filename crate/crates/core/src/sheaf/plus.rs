use std::collections::HashMap;

use super::{for_each_nat, sieve_presheaf, yoneda, yoneda_map, FinPresheaf, NatTrans};
use crate::fincat::{FiniteCategory, Mor, Obj};
use crate::site::{generated_sieve, Sieve, Site};

/// Matching families for `f` on the sieve `s`, each listed as one element per
/// member of `s` in index order.
pub(crate) fn matching_families(cat: &FiniteCategory, s: &Sieve, f: &FinPresheaf) -> Vec<Vec<usize>> {
    let (sp, elems) = sieve_presheaf(cat, s);
    let members: Vec<Mor> = s.iter().collect();
    let slot: Vec<(Obj, usize)> = members
        .iter()
        .map(|&m| {
            let d = cat.dom(m);
            (d, elems[d].iter().position(|&g| g == m).unwrap())
        })
        .collect();
    let mut out = Vec::new();
    for_each_nat(cat, &sp, f, false, &[], &mut |n| {
        out.push(slot.iter().map(|&(d, i)| n.components[d][i]).collect());
        true
    });
    out
}

/// One stage of the plus construction: `F⁺(C)` is the set of matching
/// families on the minimal covering sieve of `C`.
#[derive(Clone, Debug)]
pub struct Plus {
    pub presheaf: FinPresheaf,
    /// Members of the minimal covering sieve of each object.
    pub members: Vec<Vec<Mor>>,
    /// Elements of `F⁺(C)` as matching families over `members[C]`.
    pub families: Vec<Vec<Vec<usize>>>,
    /// `F → F⁺`.
    pub unit: NatTrans,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

impl Plus {
    pub fn element(&self, c: Obj, family: &[usize]) -> Option<usize> {
        self.index[c].get(family).copied()
    }
}

pub fn plus(site: &Site, f: &FinPresheaf) -> Plus {
    let cat = site.cat();
    let sieves: Vec<Sieve> = cat.objects().map(|c| site.minimal_covering_sieve(c)).collect();
    let members: Vec<Vec<Mor>> = sieves.iter().map(|s| s.iter().collect()).collect();
    let families: Vec<Vec<Vec<usize>>> = sieves.iter().map(|s| matching_families(cat, s, f)).collect();
    let index: Vec<HashMap<Vec<usize>, usize>> = families
        .iter()
        .map(|fams| fams.iter().enumerate().map(|(i, x)| (x.clone(), i)).collect())
        .collect();
    let action = cat
        .morphisms()
        .map(|m| {
            let (d, c) = (cat.dom(m), cat.cod(m));
            let pos: Vec<usize> = members[d]
                .iter()
                .map(|&h| {
                    let mh = cat.compose(m, h);
                    members[c].iter().position(|&k| k == mh).expect("pullback of a covering sieve covers")
                })
                .collect();
            families[c]
                .iter()
                .map(|x| {
                    let y: Vec<usize> = pos.iter().map(|&p| x[p]).collect();
                    index[d][&y]
                })
                .collect()
        })
        .collect();
    let unit = NatTrans {
        components: cat
            .objects()
            .map(|c| {
                (0..f.size(c))
                    .map(|e| {
                        let fam: Vec<usize> = members[c].iter().map(|&g| f.act(g, e)).collect();
                        index[c][&fam]
                    })
                    .collect()
            })
            .collect(),
    };
    let presheaf = FinPresheaf::from_parts(families.iter().map(Vec::len).collect(), action);
    debug_assert!(presheaf.check(cat).is_ok());
    Plus { presheaf, members, families, unit, index }
}

/// `ψ⁺: F⁺ → G⁺` for `ψ: F → G`.
pub fn plus_map(pf: &Plus, pg: &Plus, psi: &NatTrans, cat: &FiniteCategory) -> NatTrans {
    NatTrans {
        components: cat
            .objects()
            .map(|c| {
                pf.families[c]
                    .iter()
                    .map(|x| {
                        let y: Vec<usize> = pf.members[c]
                            .iter()
                            .zip(x)
                            .map(|(&g, &e)| psi.components[cat.dom(g)][e])
                            .collect();
                        pg.element(c, &y).expect("image of a matching family matches")
                    })
                    .collect()
            })
            .collect(),
    }
}

/// Both plus stages of a sheafification, with the composite unit.
#[derive(Clone, Debug)]
pub struct Sheafification {
    pub first: Plus,
    pub second: Plus,
    pub unit: NatTrans,
}

impl Sheafification {
    pub fn sheaf(&self) -> &FinPresheaf {
        &self.second.presheaf
    }
}

pub fn sheafify(site: &Site, f: &FinPresheaf) -> Sheafification {
    let first = plus(site, f);
    let second = plus(site, &first.presheaf);
    let unit = second.unit.compose_after(&first.unit);
    Sheafification { first, second, unit }
}

/// `a(ψ): aF → aG`, the unique map with `a(ψ) ∘ η_F = η_G ∘ ψ`.
pub fn sheafify_map(site: &Site, af: &Sheafification, ag: &Sheafification, psi: &NatTrans) -> NatTrans {
    let cat = site.cat();
    let once = plus_map(&af.first, &ag.first, psi, cat);
    plus_map(&af.second, &ag.second, &once, cat)
}

/// Whether every matching family on every generating cover has exactly one
/// amalgamation.
pub fn is_sheaf(site: &Site, f: &FinPresheaf) -> bool {
    let cat = site.cat();
    cat.objects().all(|c| {
        site.covering_families(c).iter().all(|fam| {
            let s = generated_sieve(cat, c, fam);
            let families = matching_families(cat, &s, f);
            let mut restricted: Vec<Vec<usize>> =
                (0..f.size(c)).map(|e| s.iter().map(|g| f.act(g, e)).collect()).collect();
            restricted.sort();
            restricted.dedup();
            restricted.len() == f.size(c) && families.len() == f.size(c)
        })
    })
}

/// Every morphism of sheaves `x → y`.
pub fn hom_sheaves(site: &Site, x: &FinPresheaf, y: &FinPresheaf) -> Vec<NatTrans> {
    super::all_nats(site.cat(), x, y)
}

/// `ℓ(A)`, the sheafified representable, with its unit.
pub fn ell(site: &Site, a: Obj) -> Sheafification {
    sheafify(site, &yoneda(site.cat(), a))
}

/// The functor `ℓ` on a whole site: the sheafified representables and the
/// images of morphisms between them.
pub struct Ell<'a> {
    site: &'a Site,
    stages: Vec<Sheafification>,
}

impl<'a> Ell<'a> {
    pub fn new(site: &'a Site) -> Ell<'a> {
        Ell { site, stages: site.cat().objects().map(|a| ell(site, a)).collect() }
    }

    pub fn object(&self, a: Obj) -> &FinPresheaf {
        self.stages[a].sheaf()
    }

    pub fn stage(&self, a: Obj) -> &Sheafification {
        &self.stages[a]
    }

    pub fn morphism(&self, m: Mor) -> NatTrans {
        let cat = self.site.cat();
        sheafify_map(self.site, &self.stages[cat.dom(m)], &self.stages[cat.cod(m)], &yoneda_map(cat, m))
    }
}
