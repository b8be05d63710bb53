//! Finite categories given by explicit composition tables.

mod concrete;
mod diagram;
mod equiv;
mod validate;

pub use concrete::{ConcreteBuilder, ConcreteError};
pub use diagram::{
    coequalizer, coequalizing_maps, colimit, cocones_at, cones_at, coproduct, equalizer, is_colimit, is_limit,
    joint_coequalizer, limit, product, pullback, pushout, under_comma_components, Cocone, Cone, Diagram,
    DiagramError,
};
pub use equiv::{find_equivalence, find_isomorphism, is_equivalence, Functor, FunctorError};
pub use validate::{validate, RawCategory, RawMorphism, ValidationReport, Violation};

use std::collections::HashMap;

pub type Obj = usize;
pub type Mor = usize;

/// A category with finitely many objects and morphisms.
///
/// Objects and morphisms are addressed by dense indices; names are kept for
/// reporting and serialization only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCategory {
    obj_names: Vec<String>,
    mor_names: Vec<String>,
    dom: Vec<Obj>,
    cod: Vec<Obj>,
    ident: Vec<Mor>,
    comp: Vec<Option<Mor>>,
    homs: Vec<Vec<Mor>>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct MorphismFlags {
    pub mono: bool,
    pub epi: bool,
    pub split_epi: bool,
    pub iso: bool,
}

impl FiniteCategory {
    /// Assembles a category from index data. `compose(g, f)` is queried for
    /// every composable pair; the result is not checked against the laws,
    /// callers that cannot guarantee them should go through [`RawCategory`].
    pub(crate) fn from_tables(
        obj_names: Vec<String>,
        mor_names: Vec<String>,
        dom: Vec<Obj>,
        cod: Vec<Obj>,
        ident: Vec<Mor>,
        mut compose: impl FnMut(Mor, Mor) -> Mor,
    ) -> Self {
        let n = mor_names.len();
        let k = obj_names.len();
        let mut comp = vec![None; n * n];
        for g in 0..n {
            for f in 0..n {
                if cod[f] == dom[g] {
                    comp[g * n + f] = Some(compose(g, f));
                }
            }
        }
        let mut homs = vec![Vec::new(); k * k];
        for m in 0..n {
            homs[dom[m] * k + cod[m]].push(m);
        }
        FiniteCategory { obj_names, mor_names, dom, cod, ident, comp, homs }
    }

    /// The poset `names` ordered by `leq`, one morphism per related pair.
    pub fn from_poset(names: &[String], leq: &[Vec<bool>]) -> Self {
        let k = names.len();
        let mut mor_names = Vec::new();
        let mut dom = Vec::new();
        let mut cod = Vec::new();
        let mut index = HashMap::new();
        let mut ident = vec![0; k];
        for a in 0..k {
            for b in 0..k {
                if leq[a][b] {
                    index.insert((a, b), mor_names.len());
                    if a == b {
                        ident[a] = mor_names.len();
                        mor_names.push(format!("1_{}", names[a]));
                    } else {
                        mor_names.push(format!("{}<{}", names[a], names[b]));
                    }
                    dom.push(a);
                    cod.push(b);
                }
            }
        }
        let (d, c) = (dom.clone(), cod.clone());
        FiniteCategory::from_tables(names.to_vec(), mor_names, dom, cod, ident, |g, f| {
            index[&(d[f], c[g])]
        })
    }

    /// Discrete category on the given object names.
    pub fn discrete(names: &[&str]) -> Self {
        let k = names.len();
        let leq: Vec<Vec<bool>> = (0..k).map(|a| (0..k).map(|b| a == b).collect()).collect();
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        FiniteCategory::from_poset(&names, &leq)
    }

    pub fn num_objects(&self) -> usize {
        self.obj_names.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.mor_names.len()
    }

    pub fn objects(&self) -> std::ops::Range<Obj> {
        0..self.obj_names.len()
    }

    pub fn morphisms(&self) -> std::ops::Range<Mor> {
        0..self.mor_names.len()
    }

    pub fn obj_name(&self, x: Obj) -> &str {
        &self.obj_names[x]
    }

    pub fn mor_name(&self, m: Mor) -> &str {
        &self.mor_names[m]
    }

    pub fn obj_names(&self) -> &[String] {
        &self.obj_names
    }

    pub fn mor_names(&self) -> &[String] {
        &self.mor_names
    }

    pub fn obj_by_name(&self, name: &str) -> Option<Obj> {
        self.obj_names.iter().position(|n| n == name)
    }

    pub fn mor_by_name(&self, name: &str) -> Option<Mor> {
        self.mor_names.iter().position(|n| n == name)
    }

    pub fn dom(&self, m: Mor) -> Obj {
        self.dom[m]
    }

    pub fn cod(&self, m: Mor) -> Obj {
        self.cod[m]
    }

    pub fn id(&self, x: Obj) -> Mor {
        self.ident[x]
    }

    pub fn is_identity(&self, m: Mor) -> bool {
        self.ident[self.dom[m]] == m
    }

    /// `g ∘ f`, or `None` when `cod f != dom g`.
    pub fn try_compose(&self, g: Mor, f: Mor) -> Option<Mor> {
        self.comp[g * self.mor_names.len() + f]
    }

    /// `g ∘ f`; panics when the pair is not composable.
    pub fn compose(&self, g: Mor, f: Mor) -> Mor {
        self.try_compose(g, f).unwrap_or_else(|| {
            panic!("{} and {} are not composable", self.mor_names[g], self.mor_names[f])
        })
    }

    pub fn hom(&self, a: Obj, b: Obj) -> &[Mor] {
        &self.homs[a * self.obj_names.len() + b]
    }

    /// All morphisms with codomain `b`, ordered by index.
    pub fn into_obj(&self, b: Obj) -> Vec<Mor> {
        self.morphisms().filter(|&m| self.cod[m] == b).collect()
    }

    /// All morphisms with domain `a`, ordered by index.
    pub fn out_of(&self, a: Obj) -> Vec<Mor> {
        self.morphisms().filter(|&m| self.dom[m] == a).collect()
    }

    pub fn opposite(&self) -> FiniteCategory {
        let n = self.num_morphisms();
        let k = self.num_objects();
        let mut comp = vec![None; n * n];
        for g in 0..n {
            for f in 0..n {
                comp[g * n + f] = self.comp[f * n + g];
            }
        }
        let mut homs = vec![Vec::new(); k * k];
        for a in 0..k {
            for b in 0..k {
                homs[a * k + b] = self.homs[b * k + a].clone();
            }
        }
        FiniteCategory {
            obj_names: self.obj_names.clone(),
            mor_names: self.mor_names.clone(),
            dom: self.cod.clone(),
            cod: self.dom.clone(),
            ident: self.ident.clone(),
            comp,
            homs,
        }
    }

    /// Full subcategory on `objs`, with objects renumbered in the given order.
    pub fn full_subcategory(&self, objs: &[Obj]) -> (FiniteCategory, Vec<Mor>) {
        let pos: HashMap<Obj, usize> = objs.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let kept: Vec<Mor> = self
            .morphisms()
            .filter(|&m| pos.contains_key(&self.dom[m]) && pos.contains_key(&self.cod[m]))
            .collect();
        let new_index: HashMap<Mor, usize> = kept.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let sub = FiniteCategory::from_tables(
            objs.iter().map(|&x| self.obj_names[x].clone()).collect(),
            kept.iter().map(|&m| self.mor_names[m].clone()).collect(),
            kept.iter().map(|&m| pos[&self.dom[m]]).collect(),
            kept.iter().map(|&m| pos[&self.cod[m]]).collect(),
            objs.iter().map(|&x| new_index[&self.ident[x]]).collect(),
            |g, f| new_index[&self.compose(kept[g], kept[f])],
        );
        (sub, kept)
    }

    /// Mono, epi, split epi and iso flags, decided by quantifying over every
    /// morphism of the category.
    pub fn classify_morphism(&self, m: Mor) -> MorphismFlags {
        let (a, b) = (self.dom[m], self.cod[m]);
        let mono = self.objects().all(|x| {
            let hs = self.hom(x, a);
            hs.iter().all(|&g| {
                hs.iter().all(|&h| g == h || self.compose(m, g) != self.compose(m, h))
            })
        });
        let epi = self.objects().all(|x| {
            let hs = self.hom(b, x);
            hs.iter().all(|&g| {
                hs.iter().all(|&h| g == h || self.compose(g, m) != self.compose(h, m))
            })
        });
        let sections: Vec<Mor> =
            self.hom(b, a).iter().copied().filter(|&s| self.compose(m, s) == self.ident[b]).collect();
        let split_epi = !sections.is_empty();
        let iso = sections.iter().any(|&s| self.compose(s, m) == self.ident[a]);
        MorphismFlags { mono, epi, split_epi, iso }
    }

    pub fn is_mono(&self, m: Mor) -> bool {
        self.classify_morphism(m).mono
    }

    pub fn is_epi(&self, m: Mor) -> bool {
        self.classify_morphism(m).epi
    }

    pub fn is_iso(&self, m: Mor) -> bool {
        self.classify_morphism(m).iso
    }

    /// Parallel pairs `(p, q)` with `p < q` coequalized by `h`.
    pub fn pairs_coequalized_by(&self, h: Mor) -> Vec<(Mor, Mor)> {
        let d = self.dom[h];
        let mut out = Vec::new();
        for x in self.objects() {
            let hs = self.hom(x, d);
            for (i, &p) in hs.iter().enumerate() {
                for &q in &hs[i + 1..] {
                    if self.compose(h, p) == self.compose(h, q) {
                        out.push((p, q));
                    }
                }
            }
        }
        out
    }

    /// Whether `h: D → C` is a strict epimorphism: every `k: D → E`
    /// coequalizing all pairs that `h` coequalizes factors uniquely through `h`.
    pub fn is_strict_epi(&self, h: Mor) -> bool {
        let pairs = self.pairs_coequalized_by(h);
        let (d, c) = (self.dom[h], self.cod[h]);
        self.out_of(d).into_iter().all(|k| {
            if !pairs.iter().all(|&(p, q)| self.compose(k, p) == self.compose(k, q)) {
                return true;
            }
            let e = self.cod[k];
            self.hom(c, e).iter().filter(|&&u| self.compose(u, h) == k).count() == 1
        })
    }

    pub fn strict_epis(&self) -> Vec<Mor> {
        self.morphisms().filter(|&m| self.is_strict_epi(m)).collect()
    }

    /// Whether the family `fs` (common codomain `c`) is strictly epic: every
    /// family `k_i` compatible with all identifications made by the `f_i`
    /// factors uniquely through it. The empty family is strictly epic exactly
    /// over initial objects.
    pub fn is_strictly_epic_family(&self, c: Obj, fs: &[Mor]) -> bool {
        debug_assert!(fs.iter().all(|&f| self.cod[f] == c));
        // Identifications: (i, g, j, h) with f_i g = f_j h.
        let mut ids = Vec::new();
        for (i, &fi) in fs.iter().enumerate() {
            for (j, &fj) in fs.iter().enumerate() {
                for x in self.objects() {
                    for &g in self.hom(x, self.dom[fi]) {
                        for &h in self.hom(x, self.dom[fj]) {
                            if self.compose(fi, g) == self.compose(fj, h) && (i, g) != (j, h) {
                                ids.push((i, g, j, h));
                            }
                        }
                    }
                }
            }
        }
        self.objects().all(|e| {
            let choices: Vec<&[Mor]> = fs.iter().map(|&f| self.hom(self.dom[f], e)).collect();
            let mut ok = true;
            for_each_product(&choices, &mut |ks: &[Mor]| {
                let compatible = ids
                    .iter()
                    .all(|&(i, g, j, h)| self.compose(ks[i], g) == self.compose(ks[j], h));
                if compatible {
                    let n = self
                        .hom(c, e)
                        .iter()
                        .filter(|&&u| fs.iter().zip(ks).all(|(&f, &k)| self.compose(u, f) == k))
                        .count();
                    if n != 1 {
                        ok = false;
                    }
                }
                ok
            });
            ok
        })
    }

    pub fn initial_objects(&self) -> Vec<Obj> {
        self.objects()
            .filter(|&x| self.objects().all(|y| self.hom(x, y).len() == 1))
            .collect()
    }

    pub fn terminal_objects(&self) -> Vec<Obj> {
        self.objects()
            .filter(|&x| self.objects().all(|y| self.hom(y, x).len() == 1))
            .collect()
    }

    /// Initial, and every morphism into it is an isomorphism.
    pub fn is_strict_initial(&self, x: Obj) -> bool {
        self.objects().all(|y| self.hom(x, y).len() == 1)
            && self.into_obj(x).into_iter().all(|m| self.is_iso(m))
    }

    /// Objects isomorphic to `x`.
    pub fn isomorphic(&self, x: Obj, y: Obj) -> bool {
        self.hom(x, y).iter().any(|&m| self.is_iso(m))
    }
}

/// Calls `f` on every tuple of the cartesian product, in lexicographic order,
/// until it returns `false`.
pub(crate) fn for_each_product<T: Copy>(choices: &[&[T]], f: &mut dyn FnMut(&[T]) -> bool) -> bool {
    fn go<T: Copy>(choices: &[&[T]], acc: &mut Vec<T>, f: &mut dyn FnMut(&[T]) -> bool) -> bool {
        if acc.len() == choices.len() {
            return f(acc);
        }
        for &c in choices[acc.len()] {
            acc.push(c);
            let keep = go(choices, acc, f);
            acc.pop();
            if !keep {
                return false;
            }
        }
        true
    }
    go(choices, &mut Vec::with_capacity(choices.len()), f)
}
