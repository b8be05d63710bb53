use petgraph::unionfind::UnionFind;

use super::{FiniteCategory, Mor, Obj};

/// A functor from a finite shape category into some target category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    pub shape: FiniteCategory,
    pub on_objects: Vec<Obj>,
    pub on_morphisms: Vec<Mor>,
}

/// A cocone under a diagram: one leg `F(i) → vertex` per shape object.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cocone {
    pub vertex: Obj,
    pub legs: Vec<Mor>,
}

/// A cone over a diagram: one leg `vertex → F(i)` per shape object.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cone {
    pub vertex: Obj,
    pub legs: Vec<Mor>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DiagramError {
    #[error("diagram is not a functor: {0}")]
    NotFunctorial(String),
    #[error("pair ({0},{1}) does not target the chosen object")]
    PairNotIntoTarget(String, String),
}

impl Diagram {
    pub fn new(
        cat: &FiniteCategory,
        shape: FiniteCategory,
        on_objects: Vec<Obj>,
        on_morphisms: Vec<Mor>,
    ) -> Result<Diagram, DiagramError> {
        let d = Diagram { shape, on_objects, on_morphisms };
        d.check(cat)?;
        Ok(d)
    }

    fn check(&self, cat: &FiniteCategory) -> Result<(), DiagramError> {
        let s = &self.shape;
        if self.on_objects.len() != s.num_objects() || self.on_morphisms.len() != s.num_morphisms() {
            return Err(DiagramError::NotFunctorial("table sizes do not match the shape".into()));
        }
        for a in s.morphisms() {
            let m = self.on_morphisms[a];
            if cat.dom(m) != self.on_objects[s.dom(a)] || cat.cod(m) != self.on_objects[s.cod(a)] {
                return Err(DiagramError::NotFunctorial(format!("{} has the wrong type", s.mor_name(a))));
            }
        }
        for x in s.objects() {
            if self.on_morphisms[s.id(x)] != cat.id(self.on_objects[x]) {
                return Err(DiagramError::NotFunctorial(format!("identity of {}", s.obj_name(x))));
            }
        }
        for g in s.morphisms() {
            for f in s.morphisms() {
                if let Some(gf) = s.try_compose(g, f) {
                    if cat.compose(self.on_morphisms[g], self.on_morphisms[f]) != self.on_morphisms[gf] {
                        return Err(DiagramError::NotFunctorial(format!(
                            "composite ({},{})",
                            s.mor_name(g),
                            s.mor_name(f)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn opposite(&self) -> Diagram {
        Diagram {
            shape: self.shape.opposite(),
            on_objects: self.on_objects.clone(),
            on_morphisms: self.on_morphisms.clone(),
        }
    }

    /// The one-object diagram picking out `x`.
    pub fn single(cat: &FiniteCategory, x: Obj) -> Diagram {
        Diagram { shape: FiniteCategory::discrete(&["*"]), on_objects: vec![x], on_morphisms: vec![cat.id(x)] }
    }

    /// The discrete diagram on `objs`.
    pub fn discrete(cat: &FiniteCategory, objs: &[Obj]) -> Diagram {
        let names: Vec<String> = (0..objs.len()).map(|i| format!("d{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        Diagram {
            shape: FiniteCategory::discrete(&refs),
            on_objects: objs.to_vec(),
            on_morphisms: objs.iter().map(|&x| cat.id(x)).collect(),
        }
    }

    /// A normalized funnel: the object `d0` together with one object per pair,
    /// sent to the common domain of the pair, with two arrows into `d0`.
    /// With a single pair this is the parallel pair diagram.
    pub fn funnel(cat: &FiniteCategory, d0: Obj, pairs: &[(Mor, Mor)]) -> Result<Diagram, DiagramError> {
        for &(p, q) in pairs {
            if cat.cod(p) != d0 || cat.cod(q) != d0 || cat.dom(p) != cat.dom(q) {
                return Err(DiagramError::PairNotIntoTarget(
                    cat.mor_name(p).to_string(),
                    cat.mor_name(q).to_string(),
                ));
            }
        }
        let k = pairs.len();
        let mut obj_names = vec!["d0".to_string()];
        obj_names.extend((0..k).map(|i| format!("r{i}")));
        let mut mor_names: Vec<String> = (0..=k).map(|i| format!("1_{}", obj_names[i])).collect();
        let mut dom: Vec<Obj> = (0..=k).collect();
        let mut cod: Vec<Obj> = (0..=k).collect();
        let mut on_morphisms: Vec<Mor> =
            std::iter::once(cat.id(d0)).chain(pairs.iter().map(|&(p, _)| cat.id(cat.dom(p)))).collect();
        for (i, &(p, q)) in pairs.iter().enumerate() {
            for (side, m) in [("p", p), ("q", q)] {
                mor_names.push(format!("{side}{i}"));
                dom.push(i + 1);
                cod.push(0);
                on_morphisms.push(m);
            }
        }
        let ident: Vec<Mor> = (0..=k).collect();
        let shape = FiniteCategory::from_tables(obj_names, mor_names, dom.clone(), cod, ident, |g, f| {
            if g <= k {
                f
            } else {
                debug_assert!(f == dom[g]);
                g
            }
        });
        let mut on_objects = vec![d0];
        on_objects.extend(pairs.iter().map(|&(p, _)| cat.dom(p)));
        Ok(Diagram { shape, on_objects, on_morphisms })
    }

    /// The cospan `a → c ← b`, shape objects ordered `a, b, c`.
    pub fn cospan(cat: &FiniteCategory, f: Mor, g: Mor) -> Diagram {
        assert_eq!(cat.cod(f), cat.cod(g));
        let shape = FiniteCategory::from_tables(
            vec!["a".into(), "b".into(), "c".into()],
            vec!["1_a".into(), "1_b".into(), "1_c".into(), "f".into(), "g".into()],
            vec![0, 1, 2, 0, 1],
            vec![0, 1, 2, 2, 2],
            vec![0, 1, 2],
            |g, f| if g <= 2 { f } else { g },
        );
        Diagram {
            shape,
            on_objects: vec![cat.dom(f), cat.dom(g), cat.cod(f)],
            on_morphisms: vec![cat.id(cat.dom(f)), cat.id(cat.dom(g)), cat.id(cat.cod(f)), f, g],
        }
    }

    /// The span `a ← c → b`, shape objects ordered `a, b, c`.
    pub fn span(cat: &FiniteCategory, f: Mor, g: Mor) -> Diagram {
        let d = Diagram::cospan(&cat.opposite(), f, g);
        Diagram { shape: d.shape.opposite(), ..d }
    }

    /// Shape objects that receive an arrow from every shape object.
    pub fn weakly_terminal(&self) -> Option<Obj> {
        let s = &self.shape;
        s.objects().find(|&t| s.objects().all(|x| !s.hom(x, t).is_empty()))
    }
}

fn backtrack_legs(
    cat: &FiniteCategory,
    diag: &Diagram,
    vertex: Obj,
    out: &mut Vec<Vec<Mor>>,
    legs: &mut Vec<Mor>,
    into_vertex: bool,
) {
    let s = &diag.shape;
    let i = legs.len();
    if i == s.num_objects() {
        out.push(legs.clone());
        return;
    }
    let fi = diag.on_objects[i];
    let candidates = if into_vertex { cat.hom(fi, vertex) } else { cat.hom(vertex, fi) };
    for &leg in candidates {
        legs.push(leg);
        let ok = s.morphisms().filter(|&a| !s.is_identity(a)).all(|a| {
            let (x, y) = (s.dom(a), s.cod(a));
            if x.max(y) != i {
                return true;
            }
            let fa = diag.on_morphisms[a];
            if into_vertex {
                cat.compose(legs[y], fa) == legs[x]
            } else {
                cat.compose(fa, legs[x]) == legs[y]
            }
        });
        if ok {
            backtrack_legs(cat, diag, vertex, out, legs, into_vertex);
        }
        legs.pop();
    }
}

/// All cocones under `diag` with the given vertex, in lexicographic order.
pub fn cocones_at(cat: &FiniteCategory, diag: &Diagram, vertex: Obj) -> Vec<Vec<Mor>> {
    let mut out = Vec::new();
    backtrack_legs(cat, diag, vertex, &mut out, &mut Vec::new(), true);
    out
}

/// All cones over `diag` with the given vertex, in lexicographic order.
pub fn cones_at(cat: &FiniteCategory, diag: &Diagram, vertex: Obj) -> Vec<Vec<Mor>> {
    let mut out = Vec::new();
    backtrack_legs(cat, diag, vertex, &mut out, &mut Vec::new(), false);
    out
}

fn all_cocones(cat: &FiniteCategory, diag: &Diagram) -> Vec<Cocone> {
    cat.objects()
        .flat_map(|v| cocones_at(cat, diag, v).into_iter().map(move |legs| Cocone { vertex: v, legs }))
        .collect()
}

fn factors_uniquely(cat: &FiniteCategory, cocone: &Cocone, other: &Cocone) -> bool {
    cat.hom(cocone.vertex, other.vertex)
        .iter()
        .filter(|&&u| cocone.legs.iter().zip(&other.legs).all(|(&l, &m)| cat.compose(u, l) == m))
        .count()
        == 1
}

/// Whether `cocone` is a colimit cocone: every cocone factors through it
/// uniquely.
pub fn is_colimit(cat: &FiniteCategory, diag: &Diagram, cocone: &Cocone) -> bool {
    all_cocones(cat, diag).iter().all(|other| factors_uniquely(cat, cocone, other))
}

/// The colimit of `diag`, found by enumerating cocones; among the isomorphic
/// answers the least vertex and then the lexicographically least legs win.
pub fn colimit(cat: &FiniteCategory, diag: &Diagram) -> Option<Cocone> {
    let all = all_cocones(cat, diag);
    all.iter().find(|c| all.iter().all(|other| factors_uniquely(cat, c, other))).cloned()
}

/// The limit of `diag`, dual to [`colimit`].
pub fn limit(cat: &FiniteCategory, diag: &Diagram) -> Option<Cone> {
    colimit(&cat.opposite(), &diag.opposite()).map(|c| Cone { vertex: c.vertex, legs: c.legs })
}

pub fn is_limit(cat: &FiniteCategory, diag: &Diagram, cone: &Cone) -> bool {
    let c = Cocone { vertex: cone.vertex, legs: cone.legs.clone() };
    is_colimit(&cat.opposite(), &diag.opposite(), &c)
}

/// Pullback of the cospan `f, g`, legs ordered `(to dom f, to dom g)`.
pub fn pullback(cat: &FiniteCategory, f: Mor, g: Mor) -> Option<(Obj, Mor, Mor)> {
    limit(cat, &Diagram::cospan(cat, f, g)).map(|c| (c.vertex, c.legs[0], c.legs[1]))
}

/// Pushout of the span `f, g`, legs ordered `(from cod f, from cod g)`.
pub fn pushout(cat: &FiniteCategory, f: Mor, g: Mor) -> Option<(Obj, Mor, Mor)> {
    colimit(cat, &Diagram::span(cat, f, g)).map(|c| (c.vertex, c.legs[0], c.legs[1]))
}

/// Equalizer of the parallel pair `f, g`.
pub fn equalizer(cat: &FiniteCategory, f: Mor, g: Mor) -> Option<(Obj, Mor)> {
    let d = Diagram::funnel(&cat.opposite(), cat.dom(f), &[(f, g)]).ok()?;
    colimit(&cat.opposite(), &d).map(|c| (c.vertex, c.legs[0]))
}

/// Coequalizer of the parallel pair `f, g`.
pub fn coequalizer(cat: &FiniteCategory, f: Mor, g: Mor) -> Option<(Obj, Mor)> {
    joint_coequalizer(cat, cat.cod(f), &[(f, g)]).ok().flatten().map(|(m, v)| (v, m))
}

pub fn coproduct(cat: &FiniteCategory, objs: &[Obj]) -> Option<Cocone> {
    colimit(cat, &Diagram::discrete(cat, objs))
}

pub fn product(cat: &FiniteCategory, objs: &[Obj]) -> Option<Cone> {
    limit(cat, &Diagram::discrete(cat, objs))
}

/// Morphisms out of `d0` coequalizing every pair.
pub fn coequalizing_maps(cat: &FiniteCategory, d0: Obj, pairs: &[(Mor, Mor)]) -> Vec<Mor> {
    cat.out_of(d0)
        .into_iter()
        .filter(|&k| pairs.iter().all(|&(p, q)| cat.compose(k, p) == cat.compose(k, q)))
        .collect()
}

/// Colimit of the normalized funnel given by `pairs` into `d0`: the least
/// coequalizing map out of `d0` through which every other one factors
/// uniquely. Returns `(leg, vertex)`.
pub fn joint_coequalizer(
    cat: &FiniteCategory,
    d0: Obj,
    pairs: &[(Mor, Mor)],
) -> Result<Option<(Mor, Obj)>, DiagramError> {
    for &(p, q) in pairs {
        if cat.cod(p) != d0 || cat.cod(q) != d0 || cat.dom(p) != cat.dom(q) {
            return Err(DiagramError::PairNotIntoTarget(cat.mor_name(p).to_string(), cat.mor_name(q).to_string()));
        }
    }
    let ks = coequalizing_maps(cat, d0, pairs);
    Ok(universal_among(cat, &ks).map(|k| (k, cat.cod(k))))
}

/// The first map of `ks` (ordered by vertex, then index) through which every
/// member of `ks` factors uniquely.
pub(crate) fn universal_among(cat: &FiniteCategory, ks: &[Mor]) -> Option<Mor> {
    let mut order = ks.to_vec();
    order.sort_by_key(|&k| (cat.cod(k), k));
    order.into_iter().find(|&k| {
        ks.iter().all(|&k2| {
            cat.hom(cat.cod(k), cat.cod(k2)).iter().filter(|&&u| cat.compose(u, k) == k2).count() == 1
        })
    })
}

/// Connected components of the comma category `(x ↓ diag)`: its objects are
/// pairs `(i, m)` with `m: x → F(i)`, joined whenever a shape arrow
/// `a: i → j` has `F(a) ∘ m = m'`. Components are listed by least element.
pub fn under_comma_components(cat: &FiniteCategory, x: Obj, diag: &Diagram) -> Vec<Vec<(Obj, Mor)>> {
    let s = &diag.shape;
    let mut elems = Vec::new();
    let mut offset = Vec::new();
    for i in s.objects() {
        offset.push(elems.len());
        for &m in cat.hom(x, diag.on_objects[i]) {
            elems.push((i, m));
        }
    }
    let index = |i: Obj, m: Mor| {
        let row = cat.hom(x, diag.on_objects[i]);
        offset[i] + row.iter().position(|&r| r == m).expect("element of the comma category")
    };
    let mut uf = UnionFind::new(elems.len());
    for a in s.morphisms() {
        let (i, j) = (s.dom(a), s.cod(a));
        for &m in cat.hom(x, diag.on_objects[i]) {
            uf.union(index(i, m), index(j, cat.compose(diag.on_morphisms[a], m)));
        }
    }
    let mut comps: Vec<Vec<(Obj, Mor)>> = Vec::new();
    let mut rep_pos = std::collections::HashMap::new();
    for (e, &el) in elems.iter().enumerate() {
        let r = uf.find_mut(e);
        let k = *rep_pos.entry(r).or_insert_with(|| {
            comps.push(Vec::new());
            comps.len() - 1
        });
        comps[k].push(el);
    }
    comps
}
