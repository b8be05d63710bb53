use std::collections::{BTreeSet, VecDeque};

use petgraph::unionfind::UnionFind;
use serde::Serialize;

use super::{all_nats, find_presheaf_iso, sheafify, yoneda, FinPresheaf, NatTrans, SheafError};
use crate::fincat::{FiniteCategory, Obj};
use crate::site::{Sieve, Site};
use crate::verdict::Caps;

/// Membership table per object.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Subpresheaf {
    pub members: Vec<Vec<bool>>,
}

impl Subpresheaf {
    pub fn empty(x: &FinPresheaf) -> Subpresheaf {
        Subpresheaf { members: x.sizes().iter().map(|&n| vec![false; n]).collect() }
    }

    pub fn full(x: &FinPresheaf) -> Subpresheaf {
        Subpresheaf { members: x.sizes().iter().map(|&n| vec![true; n]).collect() }
    }

    pub fn union(&self, other: &Subpresheaf) -> Subpresheaf {
        Subpresheaf {
            members: self
                .members
                .iter()
                .zip(&other.members)
                .map(|(a, b)| a.iter().zip(b).map(|(&p, &q)| p || q).collect())
                .collect(),
        }
    }

    pub fn is_subset(&self, other: &Subpresheaf) -> bool {
        self.members.iter().zip(&other.members).all(|(a, b)| a.iter().zip(b).all(|(&p, &q)| !p || q))
    }

    pub fn is_full(&self) -> bool {
        self.members.iter().all(|row| row.iter().all(|&b| b))
    }

    /// The subpresheaf generated by `e ∈ X(c)`.
    pub fn principal(cat: &FiniteCategory, x: &FinPresheaf, c: Obj, e: usize) -> Subpresheaf {
        let mut s = Subpresheaf::empty(x);
        for m in cat.into_obj(c) {
            s.members[cat.dom(m)][x.act(m, e)] = true;
        }
        s
    }

    /// Elements of `x` that belong locally: the sieve of restrictions landing
    /// in `self` covers.
    pub fn closure(&self, site: &Site, x: &FinPresheaf) -> Subpresheaf {
        let cat = site.cat();
        Subpresheaf {
            members: cat
                .objects()
                .map(|c| {
                    (0..x.size(c))
                        .map(|e| {
                            let s = Sieve {
                                codomain: c,
                                members: cat
                                    .morphisms()
                                    .map(|m| cat.cod(m) == c && self.members[cat.dom(m)][x.act(m, e)])
                                    .collect(),
                            };
                            site.is_covering(&s)
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

/// All subsheaves of the sheaf `x`, from the least one upward; closed
/// subpresheaves are generated as closures of unions of principal ones.
pub fn subobject_lattice(site: &Site, x: &FinPresheaf, caps: &Caps) -> Result<Vec<Subpresheaf>, SheafError> {
    let cat = site.cat();
    let principals: Vec<Subpresheaf> = cat
        .objects()
        .flat_map(|c| (0..x.size(c)).map(move |e| (c, e)))
        .map(|(c, e)| Subpresheaf::principal(cat, x, c, e))
        .collect();
    let bottom = Subpresheaf::empty(x).closure(site, x);
    let mut seen = BTreeSet::from([bottom.clone()]);
    let mut queue = VecDeque::from([bottom]);
    while let Some(s) = queue.pop_front() {
        for p in &principals {
            if p.is_subset(&s) {
                continue;
            }
            let u = s.union(p).closure(site, x);
            if seen.insert(u.clone()) {
                if seen.len() > caps.search_cap {
                    return Err(SheafError::Cap(caps.search_cap));
                }
                queue.push_back(u);
            }
        }
    }
    let mut out: Vec<Subpresheaf> = seen.into_iter().collect();
    out.sort_by_key(|s| (s.members.iter().map(|r| r.iter().filter(|&&b| b).count()).sum::<usize>(), s.clone()));
    Ok(out)
}

/// Closure of the pointwise union.
pub fn join_of_subsheaves(site: &Site, x: &FinPresheaf, parts: &[Subpresheaf]) -> Subpresheaf {
    parts.iter().fold(Subpresheaf::empty(x), |acc, p| acc.union(p)).closure(site, x)
}

/// Not initial, and not the join of its proper subsheaves.
pub fn is_supercompact_object(site: &Site, x: &FinPresheaf, caps: &Caps) -> Result<bool, SheafError> {
    let subs = subobject_lattice(site, x, caps)?;
    let proper: Vec<Subpresheaf> = subs.into_iter().filter(|s| !s.is_full()).collect();
    Ok(!join_of_subsheaves(site, x, &proper).is_full())
}

/// A quotient `map: X ↠ sheaf` of a sheaf.
#[derive(Clone, Debug, Serialize)]
pub struct Quotient {
    pub map: NatTrans,
    pub sheaf: FinPresheaf,
}

/// A congruence as the least element of each class, per object.
type Congruence = Vec<Vec<usize>>;

fn close_congruence(cat: &FiniteCategory, x: &FinPresheaf, rel: &Congruence, extra: Option<(Obj, usize, usize)>) -> Congruence {
    let offsets: Vec<usize> = x
        .sizes()
        .iter()
        .scan(0, |acc, &n| {
            let o = *acc;
            *acc += n;
            Some(o)
        })
        .collect();
    let mut uf = UnionFind::<usize>::new(x.total_size());
    let mut pending: Vec<(Obj, usize, usize)> = Vec::new();
    for c in cat.objects() {
        for (e, &r) in rel[c].iter().enumerate() {
            if r != e {
                pending.push((c, e, r));
            }
        }
    }
    pending.extend(extra);
    while let Some((c, e, f)) = pending.pop() {
        if uf.union(offsets[c] + e, offsets[c] + f) {
            for m in cat.into_obj(c) {
                let (a, b) = (x.act(m, e), x.act(m, f));
                if a != b {
                    pending.push((cat.dom(m), a, b));
                }
            }
        }
    }
    cat.objects()
        .map(|c| {
            let mut least = vec![usize::MAX; x.size(c)];
            (0..x.size(c))
                .map(|e| {
                    let r = uf.find_mut(offsets[c] + e) - offsets[c];
                    if least[r] == usize::MAX {
                        least[r] = e;
                    }
                    least[r]
                })
                .collect()
        })
        .collect()
}

/// Pairs related locally: the sieve of maps identifying them covers.
fn local_closure(site: &Site, x: &FinPresheaf, rel: &Congruence) -> Congruence {
    let cat = site.cat();
    cat.objects()
        .map(|c| {
            (0..x.size(c))
                .map(|e| {
                    (0..=e)
                        .find(|&f| {
                            let s = Sieve {
                                codomain: c,
                                members: cat
                                    .morphisms()
                                    .map(|m| {
                                        cat.cod(m) == c
                                            && rel[cat.dom(m)][x.act(m, e)] == rel[cat.dom(m)][x.act(m, f)]
                                    })
                                    .collect(),
                            };
                            site.is_covering(&s)
                        })
                        .unwrap()
                })
                .collect()
        })
        .collect()
}

fn quotient_presheaf(cat: &FiniteCategory, x: &FinPresheaf, rel: &Congruence) -> (FinPresheaf, NatTrans) {
    let class_ix: Vec<Vec<usize>> = rel
        .iter()
        .map(|row| {
            let mut ix = vec![usize::MAX; row.len()];
            let mut next = 0;
            for (e, &r) in row.iter().enumerate() {
                if r == e {
                    ix[e] = next;
                    next += 1;
                }
            }
            row.iter().map(|&r| ix[r]).collect()
        })
        .collect();
    let sizes: Vec<usize> = rel.iter().map(|row| row.iter().enumerate().filter(|&(e, &r)| r == e).count()).collect();
    let action = cat
        .morphisms()
        .map(|m| {
            let (d, c) = (cat.dom(m), cat.cod(m));
            (0..x.size(c)).filter(|&e| rel[c][e] == e).map(|e| class_ix[d][x.act(m, e)]).collect()
        })
        .collect();
    (FinPresheaf::from_parts(sizes, action), NatTrans { components: class_ix })
}

/// Quotients of the sheaf `x` in the sheaf category, one per closed
/// congruence, starting with `x` itself.
pub fn quotient_objects(site: &Site, x: &FinPresheaf, caps: &Caps) -> Result<Vec<Quotient>, SheafError> {
    let cat = site.cat();
    let discrete: Congruence = x.sizes().iter().map(|&n| (0..n).collect()).collect();
    let mut seen = BTreeSet::from([discrete.clone()]);
    let mut order = vec![discrete.clone()];
    let mut queue = VecDeque::from([discrete]);
    while let Some(rel) = queue.pop_front() {
        for c in cat.objects() {
            for e in 0..x.size(c) {
                for f in 0..e {
                    if rel[c][e] == rel[c][f] {
                        continue;
                    }
                    let next = local_closure(site, x, &close_congruence(cat, x, &rel, Some((c, e, f))));
                    if seen.insert(next.clone()) {
                        if seen.len() > caps.search_cap {
                            return Err(SheafError::Cap(caps.search_cap));
                        }
                        order.push(next.clone());
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    Ok(order
        .into_iter()
        .map(|rel| {
            let (q, proj) = quotient_presheaf(cat, x, &rel);
            let sh = sheafify(site, &q);
            Quotient { map: sh.unit.compose_after(&proj), sheaf: sh.second.presheaf }
        })
        .collect())
}

/// Sheafified disjoint union.
pub fn coproduct(site: &Site, parts: &[&FinPresheaf]) -> FinPresheaf {
    let cat = site.cat();
    let sizes: Vec<usize> = cat.objects().map(|c| parts.iter().map(|p| p.size(c)).sum()).collect();
    let action = cat
        .morphisms()
        .map(|m| {
            let d = cat.dom(m);
            let mut row = Vec::new();
            let mut off = 0;
            for p in parts {
                row.extend(p.action()[m].iter().map(|&e| e + off));
                off += p.size(d);
            }
            row
        })
        .collect();
    sheafify(site, &FinPresheaf::from_parts(sizes, action)).second.presheaf
}

/// A full subcategory of the sheaf category on a finite list of sheaves.
#[derive(Clone, Debug)]
pub struct SheafCategory {
    pub category: FiniteCategory,
    pub sheaves: Vec<FinPresheaf>,
    pub maps: Vec<NatTrans>,
}

impl SheafCategory {
    fn build(site: &Site, names: Vec<String>, sheaves: Vec<FinPresheaf>) -> SheafCategory {
        let cat = site.cat();
        let k = sheaves.len();
        let mut mor_names = Vec::new();
        let mut dom = Vec::new();
        let mut cod = Vec::new();
        let mut maps = Vec::new();
        let mut ident = vec![0; k];
        for a in 0..k {
            for b in 0..k {
                for (i, n) in all_nats(cat, &sheaves[a], &sheaves[b]).into_iter().enumerate() {
                    if a == b && n == NatTrans::identity(&sheaves[a]) {
                        ident[a] = maps.len();
                        mor_names.push(format!("1_{}", names[a]));
                    } else {
                        mor_names.push(format!("{}>{}:{}", names[a], names[b], i));
                    }
                    dom.push(a);
                    cod.push(b);
                    maps.push(n);
                }
            }
        }
        let lookup: std::collections::HashMap<(usize, usize, NatTrans), usize> =
            maps.iter().enumerate().map(|(i, n)| ((dom[i], cod[i], n.clone()), i)).collect();
        let (d2, c2) = (dom.clone(), cod.clone());
        let category = FiniteCategory::from_tables(names, mor_names, dom, cod, ident, |g, f| {
            lookup[&(d2[f], c2[g], maps[g].compose_after(&maps[f]))]
        });
        SheafCategory { category, sheaves, maps }
    }
}

fn push_unique(site: &Site, names: &mut Vec<String>, sheaves: &mut Vec<FinPresheaf>, name: String, s: FinPresheaf) {
    if !sheaves.iter().any(|t| find_presheaf_iso(site.cat(), t, &s).is_some()) {
        names.push(name);
        sheaves.push(s);
    }
}

/// Quotients of the sheafified representables, one per isomorphism class,
/// with every morphism of sheaves between them. A quotient isomorphic to
/// `ℓ(C)` is named after `C`.
pub fn supercompact_category(site: &Site, caps: &Caps) -> Result<SheafCategory, SheafError> {
    let cat = site.cat();
    let mut names = Vec::new();
    let mut sheaves: Vec<FinPresheaf> = Vec::new();
    for c in cat.objects() {
        let lc = sheafify(site, &yoneda(cat, c)).second.presheaf;
        for (i, q) in quotient_objects(site, &lc, caps)?.into_iter().enumerate() {
            let name = if i == 0 { cat.obj_name(c).to_string() } else { format!("{}/{}", cat.obj_name(c), i) };
            push_unique(site, &mut names, &mut sheaves, name, q.sheaf);
        }
    }
    Ok(SheafCategory::build(site, names, sheaves))
}

/// Quotients of coproducts of at most `k` sheafified representables, up to
/// isomorphism. This is a truncation of the compact objects.
pub fn compact_category_bounded(site: &Site, k: usize, caps: &Caps) -> Result<SheafCategory, SheafError> {
    let cat = site.cat();
    let ells: Vec<FinPresheaf> = cat.objects().map(|c| sheafify(site, &yoneda(cat, c)).second.presheaf).collect();
    let mut names = Vec::new();
    let mut sheaves: Vec<FinPresheaf> = Vec::new();
    let mut multisets: Vec<Vec<Obj>> = vec![Vec::new()];
    let mut frontier: Vec<Vec<Obj>> = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::new();
        for ms in &frontier {
            let from = ms.last().copied().unwrap_or(0);
            for c in from..cat.num_objects() {
                let mut m = ms.clone();
                m.push(c);
                next.push(m);
            }
        }
        multisets.extend(next.iter().cloned());
        frontier = next;
    }
    for ms in multisets {
        let parts: Vec<&FinPresheaf> = ms.iter().map(|&c| &ells[c]).collect();
        let sum = coproduct(site, &parts);
        let base = if ms.is_empty() {
            "0".to_string()
        } else {
            ms.iter().map(|&c| cat.obj_name(c)).collect::<Vec<_>>().join("+")
        };
        for (i, q) in quotient_objects(site, &sum, caps)?.into_iter().enumerate() {
            let name = if i == 0 { base.clone() } else { format!("{base}/{i}") };
            push_unique(site, &mut names, &mut sheaves, name, q.sheaf);
        }
    }
    Ok(SheafCategory::build(site, names, sheaves))
}

/// Whether raising the coproduct bound from `k` to `k + 1` adds no new
/// isomorphism classes.
pub fn compact_bound_stabilizes(site: &Site, k: usize, caps: &Caps) -> Result<bool, SheafError> {
    let a = compact_category_bounded(site, k, caps)?;
    let b = compact_category_bounded(site, k + 1, caps)?;
    Ok(a.sheaves.len() == b.sheaves.len())
}
