use std::collections::HashMap;

use serde::Serialize;

use super::{FiniteCategory, Mor, Obj};

/// A functor between finite categories, as index tables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Functor {
    pub on_objects: Vec<Obj>,
    pub on_morphisms: Vec<Mor>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FunctorError {
    #[error("functor tables have the wrong size")]
    WrongSize,
    #[error("image of {0} has the wrong type")]
    WrongType(String),
    #[error("identity of {0} is not preserved")]
    Identity(String),
    #[error("composite ({0},{1}) is not preserved")]
    Composite(String, String),
}

impl Functor {
    pub fn identity(cat: &FiniteCategory) -> Functor {
        Functor { on_objects: cat.objects().collect(), on_morphisms: cat.morphisms().collect() }
    }

    pub fn check(&self, a: &FiniteCategory, b: &FiniteCategory) -> Result<(), FunctorError> {
        if self.on_objects.len() != a.num_objects() || self.on_morphisms.len() != a.num_morphisms() {
            return Err(FunctorError::WrongSize);
        }
        if self.on_objects.iter().any(|&x| x >= b.num_objects())
            || self.on_morphisms.iter().any(|&m| m >= b.num_morphisms())
        {
            return Err(FunctorError::WrongSize);
        }
        for m in a.morphisms() {
            let fm = self.on_morphisms[m];
            if b.dom(fm) != self.on_objects[a.dom(m)] || b.cod(fm) != self.on_objects[a.cod(m)] {
                return Err(FunctorError::WrongType(a.mor_name(m).to_string()));
            }
        }
        for x in a.objects() {
            if self.on_morphisms[a.id(x)] != b.id(self.on_objects[x]) {
                return Err(FunctorError::Identity(a.obj_name(x).to_string()));
            }
        }
        for g in a.morphisms() {
            for f in a.morphisms() {
                if let Some(gf) = a.try_compose(g, f) {
                    if b.compose(self.on_morphisms[g], self.on_morphisms[f]) != self.on_morphisms[gf] {
                        return Err(FunctorError::Composite(a.mor_name(g).to_string(), a.mor_name(f).to_string()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn compose_after(&self, first: &Functor) -> Functor {
        Functor {
            on_objects: first.on_objects.iter().map(|&x| self.on_objects[x]).collect(),
            on_morphisms: first.on_morphisms.iter().map(|&m| self.on_morphisms[m]).collect(),
        }
    }
}

/// Whether `f` is a full, faithful and essentially surjective functor.
pub fn is_equivalence(f: &Functor, a: &FiniteCategory, b: &FiniteCategory) -> bool {
    if f.check(a, b).is_err() {
        return false;
    }
    for x in a.objects() {
        for y in a.objects() {
            let mut image: Vec<Mor> = a.hom(x, y).iter().map(|&m| f.on_morphisms[m]).collect();
            image.sort_unstable();
            image.dedup();
            if image.len() != a.hom(x, y).len() || image.len() != b.hom(f.on_objects[x], f.on_objects[y]).len() {
                return false;
            }
        }
    }
    b.objects().all(|z| f.on_objects.iter().any(|&fx| b.isomorphic(fx, z)))
}

/// Least representative of each isomorphism class, plus for each object a
/// chosen isomorphism into its representative.
fn skeleton_data(cat: &FiniteCategory) -> (Vec<Obj>, Vec<Obj>, Vec<Mor>) {
    let mut rep = vec![usize::MAX; cat.num_objects()];
    let mut to_rep = vec![0; cat.num_objects()];
    let mut reps = Vec::new();
    for x in cat.objects() {
        if rep[x] != usize::MAX {
            continue;
        }
        reps.push(x);
        for y in cat.objects() {
            if rep[y] == usize::MAX {
                if let Some(&iso) = cat.hom(y, x).iter().find(|&&m| cat.is_iso(m)) {
                    rep[y] = x;
                    to_rep[y] = iso;
                }
            }
        }
    }
    (reps, rep, to_rep)
}

fn inverse(cat: &FiniteCategory, m: Mor) -> Mor {
    *cat.hom(cat.cod(m), cat.dom(m))
        .iter()
        .find(|&&n| cat.compose(n, m) == cat.id(cat.dom(m)) && cat.compose(m, n) == cat.id(cat.cod(m)))
        .expect("isomorphism has an inverse")
}

/// A functor `a → b` that is an equivalence of categories, if one exists.
/// Both categories are reduced to skeleta, which are then matched by
/// backtracking search.
pub fn find_equivalence(a: &FiniteCategory, b: &FiniteCategory) -> Option<Functor> {
    let (reps_a, rep_a, to_rep_a) = skeleton_data(a);
    let (reps_b, _, _) = skeleton_data(b);
    if reps_a.len() != reps_b.len() {
        return None;
    }
    let (sk_a, kept_a) = a.full_subcategory(&reps_a);
    let (sk_b, kept_b) = b.full_subcategory(&reps_b);
    let iso = find_isomorphism(&sk_a, &sk_b)?;
    let pos_a: HashMap<Obj, usize> = reps_a.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let kept_pos_a: HashMap<Mor, usize> = kept_a.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let on_objects: Vec<Obj> = a.objects().map(|x| reps_b[iso.on_objects[pos_a[&rep_a[x]]]]).collect();
    let on_morphisms: Vec<Mor> = a
        .morphisms()
        .map(|f| {
            let (x, y) = (a.dom(f), a.cod(f));
            let m = a.compose(to_rep_a[y], a.compose(f, inverse(a, to_rep_a[x])));
            kept_b[iso.on_morphisms[kept_pos_a[&m]]]
        })
        .collect();
    let functor = Functor { on_objects, on_morphisms };
    debug_assert!(is_equivalence(&functor, a, b));
    Some(functor)
}

fn object_signature(cat: &FiniteCategory, x: Obj) -> (usize, Vec<(usize, usize, usize)>) {
    let mut around: Vec<(usize, usize, usize)> = cat
        .objects()
        .map(|y| (cat.hom(x, y).len(), cat.hom(y, x).len(), cat.hom(y, y).len()))
        .collect();
    around.sort_unstable();
    (cat.hom(x, x).len(), around)
}

/// An isomorphism of categories `a → b`, if one exists. Objects are matched
/// first, pruned by hom-set size profiles; morphisms are then assigned with
/// forced composites propagated eagerly.
pub fn find_isomorphism(a: &FiniteCategory, b: &FiniteCategory) -> Option<Functor> {
    if a.num_objects() != b.num_objects() || a.num_morphisms() != b.num_morphisms() {
        return None;
    }
    let sig_a: Vec<_> = a.objects().map(|x| object_signature(a, x)).collect();
    let sig_b: Vec<_> = b.objects().map(|x| object_signature(b, x)).collect();
    let mut obj_map = Vec::new();
    let mut used = vec![false; b.num_objects()];
    let mut result = None;
    match_objects(a, b, &sig_a, &sig_b, &mut obj_map, &mut used, &mut result);
    result
}

fn match_objects(
    a: &FiniteCategory,
    b: &FiniteCategory,
    sig_a: &[(usize, Vec<(usize, usize, usize)>)],
    sig_b: &[(usize, Vec<(usize, usize, usize)>)],
    obj_map: &mut Vec<Obj>,
    used: &mut Vec<bool>,
    result: &mut Option<Functor>,
) {
    let x = obj_map.len();
    if x == a.num_objects() {
        *result = match_morphisms(a, b, obj_map);
        return;
    }
    for y in b.objects() {
        if used[y] || sig_a[x] != sig_b[y] {
            continue;
        }
        let consistent = (0..x).all(|z| {
            a.hom(x, z).len() == b.hom(y, obj_map[z]).len() && a.hom(z, x).len() == b.hom(obj_map[z], y).len()
        });
        if !consistent {
            continue;
        }
        used[y] = true;
        obj_map.push(y);
        match_objects(a, b, sig_a, sig_b, obj_map, used, result);
        obj_map.pop();
        used[y] = false;
        if result.is_some() {
            return;
        }
    }
}

struct MorSearch<'a> {
    a: &'a FiniteCategory,
    b: &'a FiniteCategory,
    obj_map: &'a [Obj],
    map: Vec<Option<Mor>>,
    used: Vec<bool>,
    trail: Vec<Mor>,
}

impl MorSearch<'_> {
    /// Assigns `m ↦ n` and everything it forces; returns false on conflict.
    fn assign(&mut self, m: Mor, n: Mor) -> bool {
        let mut stack = vec![(m, n)];
        while let Some((m, n)) = stack.pop() {
            match self.map[m] {
                Some(prev) if prev == n => continue,
                Some(_) => return false,
                None => {}
            }
            if self.used[n] {
                return false;
            }
            self.map[m] = Some(n);
            self.used[n] = true;
            self.trail.push(m);
            for f in self.a.morphisms() {
                let Some(fi) = self.map[f] else { continue };
                if let Some(mf) = self.a.try_compose(m, f) {
                    stack.push((mf, self.b.compose(n, fi)));
                }
                if let Some(fm) = self.a.try_compose(f, m) {
                    stack.push((fm, self.b.compose(fi, n)));
                }
            }
        }
        true
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let m = self.trail.pop().unwrap();
            let n = self.map[m].take().unwrap();
            self.used[n] = false;
        }
    }

    fn search(&mut self) -> bool {
        let Some(m) = self.a.morphisms().find(|&m| self.map[m].is_none()) else {
            return true;
        };
        let targets: Vec<Mor> = self.b.hom(self.obj_map[self.a.dom(m)], self.obj_map[self.a.cod(m)]).to_vec();
        for n in targets {
            if self.used[n] {
                continue;
            }
            let mark = self.trail.len();
            if self.assign(m, n) && self.search() {
                return true;
            }
            self.undo_to(mark);
        }
        false
    }
}

fn match_morphisms(a: &FiniteCategory, b: &FiniteCategory, obj_map: &[Obj]) -> Option<Functor> {
    let mut s = MorSearch {
        a,
        b,
        obj_map,
        map: vec![None; a.num_morphisms()],
        used: vec![false; b.num_morphisms()],
        trail: Vec::new(),
    };
    for x in a.objects() {
        if !s.assign(a.id(x), b.id(obj_map[x])) {
            return None;
        }
    }
    if !s.search() {
        return None;
    }
    let f = Functor { on_objects: obj_map.to_vec(), on_morphisms: s.map.iter().map(|m| m.unwrap()).collect() };
    debug_assert!(f.check(a, b).is_ok());
    Some(f)
}
