//! Finite presheaves and sheaves on a site, computed directly: matching
//! families, the plus construction, subobjects and quotients. This is the
//! independent route against which the arch calculus is checked.

mod colim;
mod objects;
mod plus;

pub use colim::{check_colim_criteria, is_multifunnel, preserves_funnel_colimit, presheaf_colimit};
pub use objects::{
    compact_bound_stabilizes, compact_category_bounded, coproduct, is_supercompact_object, join_of_subsheaves, quotient_objects,
    subobject_lattice, supercompact_category, Quotient, SheafCategory, Subpresheaf,
};
pub use plus::{ell, hom_sheaves, is_sheaf, plus, sheafify, sheafify_map, Ell, Plus, Sheafification};

use serde::Serialize;

use crate::fincat::{FiniteCategory, Mor, Obj};
use crate::site::{Sieve, Site};

/// A presheaf with finite carriers. Elements of the carrier at `c` are
/// `0..sizes[c]`; `action[m]` sends an element at `cod m` to its restriction
/// along `m`, an element at `dom m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FinPresheaf {
    sizes: Vec<usize>,
    action: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SheafError {
    #[error("presheaf tables have the wrong shape")]
    Shape,
    #[error("restriction along {0} leaves the carrier")]
    OutOfRange(String),
    #[error("identity {0} does not act trivially")]
    Identity(String),
    #[error("restriction is not functorial at ({0},{1})")]
    Composite(String, String),
    #[error("diagram is not a multifunnel: component containing {0} has no weakly terminal object")]
    NotFunnel(String),
    #[error("cocone does not commute with the diagram")]
    NotCocone,
    #[error("enumeration exceeded the cap of {0}")]
    Cap(usize),
}

impl FinPresheaf {
    pub fn new(cat: &FiniteCategory, sizes: Vec<usize>, action: Vec<Vec<usize>>) -> Result<FinPresheaf, SheafError> {
        let p = FinPresheaf { sizes, action };
        p.check(cat)?;
        Ok(p)
    }

    pub(crate) fn from_parts(sizes: Vec<usize>, action: Vec<Vec<usize>>) -> FinPresheaf {
        FinPresheaf { sizes, action }
    }

    pub fn check(&self, cat: &FiniteCategory) -> Result<(), SheafError> {
        if self.sizes.len() != cat.num_objects() || self.action.len() != cat.num_morphisms() {
            return Err(SheafError::Shape);
        }
        for m in cat.morphisms() {
            let row = &self.action[m];
            if row.len() != self.sizes[cat.cod(m)] || row.iter().any(|&e| e >= self.sizes[cat.dom(m)]) {
                return Err(SheafError::OutOfRange(cat.mor_name(m).to_string()));
            }
        }
        for x in cat.objects() {
            if self.action[cat.id(x)].iter().enumerate().any(|(i, &e)| i != e) {
                return Err(SheafError::Identity(cat.mor_name(cat.id(x)).to_string()));
            }
        }
        for g in cat.morphisms() {
            for f in cat.morphisms() {
                if let Some(gf) = cat.try_compose(g, f) {
                    let ok = (0..self.sizes[cat.cod(g)]).all(|e| self.act(gf, e) == self.act(f, self.act(g, e)));
                    if !ok {
                        return Err(SheafError::Composite(cat.mor_name(g).to_string(), cat.mor_name(f).to_string()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn size(&self, c: Obj) -> usize {
        self.sizes[c]
    }

    pub fn action(&self) -> &[Vec<usize>] {
        &self.action
    }

    /// Restriction of `e ∈ F(cod m)` along `m`.
    pub fn act(&self, m: Mor, e: usize) -> usize {
        self.action[m][e]
    }

    /// The presheaf with every carrier empty.
    pub fn empty(cat: &FiniteCategory) -> FinPresheaf {
        FinPresheaf { sizes: vec![0; cat.num_objects()], action: vec![Vec::new(); cat.num_morphisms()] }
    }

    pub fn terminal(cat: &FiniteCategory) -> FinPresheaf {
        FinPresheaf { sizes: vec![1; cat.num_objects()], action: vec![vec![0]; cat.num_morphisms()] }
    }

    /// Every carrier has at most one element.
    pub fn is_subterminal(&self) -> bool {
        self.sizes.iter().all(|&s| s <= 1)
    }

    pub fn total_size(&self) -> usize {
        self.sizes.iter().sum()
    }
}

/// `y(A)`: the carrier at `C` is `hom(C, A)` in index order, acted on by
/// precomposition.
pub fn yoneda(cat: &FiniteCategory, a: Obj) -> FinPresheaf {
    let sizes = cat.objects().map(|c| cat.hom(c, a).len()).collect();
    let action = cat
        .morphisms()
        .map(|m| {
            let target = cat.hom(cat.dom(m), a);
            cat.hom(cat.cod(m), a)
                .iter()
                .map(|&u| target.iter().position(|&v| v == cat.compose(u, m)).expect("composite lies in the hom-set"))
                .collect()
        })
        .collect();
    FinPresheaf { sizes, action }
}

/// Position of `u` in `hom(dom u, a)`, the matching element of `y(A)`.
pub fn yoneda_element(cat: &FiniteCategory, a: Obj, u: Mor) -> usize {
    cat.hom(cat.dom(u), a).iter().position(|&v| v == u).expect("morphism into a")
}

/// `y(f): y(A) → y(B)` for `f: A → B`.
pub fn yoneda_map(cat: &FiniteCategory, f: Mor) -> NatTrans {
    let (a, b) = (cat.dom(f), cat.cod(f));
    NatTrans {
        components: cat
            .objects()
            .map(|c| cat.hom(c, a).iter().map(|&u| yoneda_element(cat, b, cat.compose(f, u))).collect())
            .collect(),
    }
}

/// A sieve viewed as a subpresheaf of `y(C)`, together with the member
/// standing for each element.
pub(crate) fn sieve_presheaf(cat: &FiniteCategory, s: &Sieve) -> (FinPresheaf, Vec<Vec<Mor>>) {
    let mut elems: Vec<Vec<Mor>> = vec![Vec::new(); cat.num_objects()];
    for f in s.iter() {
        elems[cat.dom(f)].push(f);
    }
    let sizes = elems.iter().map(Vec::len).collect();
    let action = cat
        .morphisms()
        .map(|m| {
            elems[cat.cod(m)]
                .iter()
                .map(|&f| {
                    let fm = cat.compose(f, m);
                    elems[cat.dom(m)].iter().position(|&g| g == fm).expect("sieve is closed under precomposition")
                })
                .collect()
        })
        .collect();
    (FinPresheaf { sizes, action }, elems)
}

/// A morphism of presheaves, one component per object.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct NatTrans {
    pub components: Vec<Vec<usize>>,
}

impl NatTrans {
    pub fn identity(x: &FinPresheaf) -> NatTrans {
        NatTrans { components: x.sizes.iter().map(|&n| (0..n).collect()).collect() }
    }

    /// `self ∘ first`.
    pub fn compose_after(&self, first: &NatTrans) -> NatTrans {
        NatTrans {
            components: first
                .components
                .iter()
                .zip(&self.components)
                .map(|(f, g)| f.iter().map(|&e| g[e]).collect())
                .collect(),
        }
    }

    pub fn is_natural(&self, cat: &FiniteCategory, x: &FinPresheaf, y: &FinPresheaf) -> bool {
        cat.objects().all(|c| self.components[c].len() == x.size(c) && self.components[c].iter().all(|&e| e < y.size(c)))
            && cat.morphisms().all(|m| {
                let (d, c) = (cat.dom(m), cat.cod(m));
                (0..x.size(c)).all(|e| self.components[d][x.act(m, e)] == y.act(m, self.components[c][e]))
            })
    }

    pub fn is_injective(&self) -> bool {
        self.components.iter().all(|comp| {
            let mut seen = comp.clone();
            seen.sort_unstable();
            seen.windows(2).all(|w| w[0] != w[1])
        })
    }

    pub fn is_surjective(&self, y: &FinPresheaf) -> bool {
        self.components.iter().enumerate().all(|(c, comp)| {
            let mut hit = vec![false; y.size(c)];
            for &e in comp {
                hit[e] = true;
            }
            hit.into_iter().all(|h| h)
        })
    }

    pub fn is_bijective(&self, y: &FinPresheaf) -> bool {
        self.is_injective() && self.is_surjective(y)
    }
}

struct NatSearch<'a> {
    cat: &'a FiniteCategory,
    x: &'a FinPresheaf,
    y: &'a FinPresheaf,
    into: Vec<Vec<Mor>>,
    injective: bool,
    assign: Vec<Vec<usize>>,
    used: Vec<Vec<bool>>,
    trail: Vec<(Obj, usize)>,
}

const UNSET: usize = usize::MAX;

impl NatSearch<'_> {
    /// Sets `α_c(e) = v` and every value forced by naturality.
    fn set(&mut self, c: Obj, e: usize, v: usize) -> bool {
        let mut stack = vec![(c, e, v)];
        while let Some((c, e, v)) = stack.pop() {
            let cur = self.assign[c][e];
            if cur == v {
                continue;
            }
            if cur != UNSET || (self.injective && self.used[c][v]) {
                return false;
            }
            self.assign[c][e] = v;
            self.used[c][v] = true;
            self.trail.push((c, e));
            for &m in &self.into[c] {
                stack.push((self.cat.dom(m), self.x.act(m, e), self.y.act(m, v)));
            }
        }
        true
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let (c, e) = self.trail.pop().unwrap();
            let v = std::mem::replace(&mut self.assign[c][e], UNSET);
            self.used[c][v] = false;
        }
    }

    fn search(&mut self, c0: Obj, visit: &mut dyn FnMut(&NatTrans) -> bool) -> bool {
        let mut next = None;
        'find: for c in c0..self.cat.num_objects() {
            for e in 0..self.x.size(c) {
                if self.assign[c][e] == UNSET {
                    next = Some((c, e));
                    break 'find;
                }
            }
        }
        let Some((c, e)) = next else {
            return visit(&NatTrans { components: self.assign.clone() });
        };
        for v in 0..self.y.size(c) {
            let mark = self.trail.len();
            if self.set(c, e, v) && !self.search(c, visit) {
                return false;
            }
            self.undo_to(mark);
        }
        true
    }
}

/// Calls `visit` on every natural transformation `x → y` (injective ones
/// only if asked) satisfying the preassigned values `fixed` (`(c, e, v)`
/// meaning `α_c(e) = v`), in lexicographic order of components, until it
/// returns false.
pub fn for_each_nat(
    cat: &FiniteCategory,
    x: &FinPresheaf,
    y: &FinPresheaf,
    injective: bool,
    fixed: &[(Obj, usize, usize)],
    visit: &mut dyn FnMut(&NatTrans) -> bool,
) {
    let mut s = NatSearch {
        cat,
        x,
        y,
        into: cat.objects().map(|c| cat.into_obj(c)).collect(),
        injective,
        assign: x.sizes.iter().map(|&n| vec![UNSET; n]).collect(),
        used: y.sizes.iter().map(|&n| vec![false; n]).collect(),
        trail: Vec::new(),
    };
    for &(c, e, v) in fixed {
        if !s.set(c, e, v) {
            return;
        }
    }
    s.search(0, visit);
}

pub fn all_nats(cat: &FiniteCategory, x: &FinPresheaf, y: &FinPresheaf) -> Vec<NatTrans> {
    let mut out = Vec::new();
    for_each_nat(cat, x, y, false, &[], &mut |n| {
        out.push(n.clone());
        true
    });
    out
}

/// An isomorphism `x → y`, if any.
pub fn find_presheaf_iso(cat: &FiniteCategory, x: &FinPresheaf, y: &FinPresheaf) -> Option<NatTrans> {
    if x.sizes != y.sizes || profile(cat, x) != profile(cat, y) {
        return None;
    }
    let mut found = None;
    for_each_nat(cat, x, y, true, &[], &mut |n| {
        found = Some(n.clone());
        false
    });
    found
}

/// Per-object multiset of restriction fibre sizes, invariant under iso.
fn profile(cat: &FiniteCategory, x: &FinPresheaf) -> Vec<Vec<usize>> {
    cat.morphisms()
        .map(|m| {
            let mut counts = vec![0; x.size(cat.dom(m))];
            for &e in &x.action[m] {
                counts[e] += 1;
            }
            counts.sort_unstable();
            counts
        })
        .collect()
}

/// Minimal covering sieve on `c`; a thin wrapper kept next to the other
/// sheaf operations.
pub fn minimal_covering_sieve(site: &Site, c: Obj) -> Sieve {
    site.minimal_covering_sieve(c)
}
