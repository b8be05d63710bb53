use std::collections::HashMap;

use petgraph::unionfind::UnionFind;

use super::{ell, sheafify, sheafify_map, yoneda_element, FinPresheaf, NatTrans, SheafError};
use crate::fincat::{under_comma_components, Cocone, Diagram, FiniteCategory, Mor, Obj};
use crate::site::{generated_sieve, Sieve, Site};

/// The least weakly terminal object of each connected component of the
/// shape, components listed by least object.
pub fn is_multifunnel(diag: &Diagram) -> Result<Vec<Obj>, SheafError> {
    let s = &diag.shape;
    let mut uf = UnionFind::<usize>::new(s.num_objects());
    for a in s.morphisms() {
        uf.union(s.dom(a), s.cod(a));
    }
    let roots: Vec<usize> = s.objects().map(|x| uf.find_mut(x)).collect();
    let mut out = Vec::new();
    let mut done = Vec::new();
    for x in s.objects() {
        if done.contains(&roots[x]) {
            continue;
        }
        done.push(roots[x]);
        let comp: Vec<Obj> = s.objects().filter(|&y| roots[y] == roots[x]).collect();
        match comp.iter().copied().find(|&t| comp.iter().all(|&y| !s.hom(y, t).is_empty())) {
            Some(t) => out.push(t),
            None => return Err(SheafError::NotFunnel(s.obj_name(x).to_string())),
        }
    }
    Ok(out)
}

fn check_cocone(cat: &FiniteCategory, diag: &Diagram, cocone: &Cocone) -> Result<(), SheafError> {
    let s = &diag.shape;
    let ok = cocone.legs.len() == s.num_objects()
        && s.objects().all(|i| cat.dom(cocone.legs[i]) == diag.on_objects[i] && cat.cod(cocone.legs[i]) == cocone.vertex)
        && s.morphisms()
            .all(|a| cat.compose(cocone.legs[s.cod(a)], diag.on_morphisms[a]) == cocone.legs[s.dom(a)]);
    if ok {
        Ok(())
    } else {
        Err(SheafError::NotCocone)
    }
}

/// Component index of each element `(i, u)` of `(X ↓ D)`, per object `X`.
fn comma_index(cat: &FiniteCategory, diag: &Diagram) -> Vec<HashMap<(Obj, Mor), usize>> {
    cat.objects()
        .map(|x| {
            under_comma_components(cat, x, diag)
                .into_iter()
                .enumerate()
                .flat_map(|(k, comp)| comp.into_iter().map(move |el| (el, k)))
                .collect()
        })
        .collect()
}

/// The colimit of `y ∘ D` in presheaves: the carrier at `X` is the set of
/// components of `(X ↓ D)`. Returns the presheaf and the component index.
pub fn presheaf_colimit(cat: &FiniteCategory, diag: &Diagram) -> (FinPresheaf, Vec<HashMap<(Obj, Mor), usize>>) {
    let index = comma_index(cat, diag);
    let sizes: Vec<usize> = index.iter().map(|ix| ix.values().max().map_or(0, |&k| k + 1)).collect();
    let reps: Vec<Vec<(Obj, Mor)>> = index
        .iter()
        .zip(&sizes)
        .map(|(ix, &n)| {
            let mut r = vec![(usize::MAX, usize::MAX); n];
            for (&el, &k) in ix {
                if el < r[k] {
                    r[k] = el;
                }
            }
            r
        })
        .collect();
    let action = cat
        .morphisms()
        .map(|m| {
            let (d, c) = (cat.dom(m), cat.cod(m));
            reps[c].iter().map(|&(i, u)| index[d][&(i, cat.compose(u, m))]).collect()
        })
        .collect();
    (FinPresheaf::from_parts(sizes, action), index)
}

/// Whether `ℓ` sends the cocone to a colimit cocone of sheaves: the map from
/// the sheafified presheaf colimit to `ℓ(vertex)` is an isomorphism.
pub fn preserves_funnel_colimit(site: &Site, diag: &Diagram, cocone: &Cocone) -> Result<bool, SheafError> {
    let cat = site.cat();
    is_multifunnel(diag)?;
    check_cocone(cat, diag, cocone)?;
    let (p, index) = presheaf_colimit(cat, diag);
    let mut psi = NatTrans { components: p.sizes().iter().map(|&n| vec![0; n]).collect() };
    for x in cat.objects() {
        for (&(i, u), &k) in &index[x] {
            psi.components[x][k] = yoneda_element(cat, cocone.vertex, cat.compose(cocone.legs[i], u));
        }
    }
    let ap = sheafify(site, &p);
    let ay = ell(site, cocone.vertex);
    let phi = sheafify_map(site, &ap, &ay, &psi);
    Ok(phi.is_bijective(ay.sheaf()))
}

/// The colimit criteria read off the site: the legs at the weakly terminal
/// objects form a covering family, and any two maps into those objects
/// identified by the cocone are locally in one component of the comma
/// category.
pub fn check_colim_criteria(site: &Site, diag: &Diagram, cocone: &Cocone) -> Result<bool, SheafError> {
    let cat = site.cat();
    let tops = is_multifunnel(diag)?;
    check_cocone(cat, diag, cocone)?;
    let c0 = cocone.vertex;
    let legs: Vec<Mor> = tops.iter().map(|&t| cocone.legs[t]).collect();
    if !site.is_covering(&generated_sieve(cat, c0, &legs)) {
        return Ok(false);
    }
    let index = comma_index(cat, diag);
    for x in cat.objects() {
        for &k in &tops {
            for &l in &tops {
                for &g1 in cat.hom(x, diag.on_objects[k]) {
                    for &g2 in cat.hom(x, diag.on_objects[l]) {
                        if (k, g1) >= (l, g2) || cat.compose(cocone.legs[k], g1) != cat.compose(cocone.legs[l], g2) {
                            continue;
                        }
                        let s = Sieve {
                            codomain: x,
                            members: cat
                                .morphisms()
                                .map(|f| {
                                    cat.cod(f) == x && {
                                        let y = cat.dom(f);
                                        index[y][&(k, cat.compose(g1, f))] == index[y][&(l, cat.compose(g2, f))]
                                    }
                                })
                                .collect(),
                        };
                        if !site.is_covering(&s) {
                            return Ok(false);
                        }
                    }
                }
            }
        }
    }
    Ok(true)
}
