use petgraph::unionfind::UnionFind;

use super::{Generators, Site};
use crate::fincat::{FiniteCategory, Functor, Mor};

/// The quotient of a site by local equality of parallel morphisms.
#[derive(Clone, Debug)]
pub struct CanonicalQuotient {
    /// For each morphism, the least morphism locally equal to it.
    pub representative: Vec<Mor>,
    pub quotient: Site,
    pub functor: Functor,
}

impl CanonicalQuotient {
    pub fn related(&self, f: Mor, g: Mor) -> bool {
        self.representative[f] == self.representative[g]
    }

    /// Non-singleton classes, each sorted, in order of least member.
    pub fn classes(&self) -> Vec<Vec<Mor>> {
        let mut out: Vec<Vec<Mor>> = Vec::new();
        for (m, &r) in self.representative.iter().enumerate() {
            if m == r {
                out.push(vec![m]);
            } else if let Some(c) = out.iter_mut().find(|c| c[0] == r) {
                c.push(m);
            }
        }
        out.retain(|c| c.len() > 1);
        out
    }
}

/// Identifies `f` and `f'` when some covering sieve equalizes them, and
/// pushes the topology forward along the quotient functor.
pub fn canonical_congruence(site: &Site) -> CanonicalQuotient {
    let cat = site.cat();
    let n = cat.num_morphisms();
    let mut uf = UnionFind::<usize>::new(n);
    for a in cat.objects() {
        for b in cat.objects() {
            let hs = cat.hom(a, b);
            for (i, &f) in hs.iter().enumerate() {
                for &g in &hs[i + 1..] {
                    if site.locally_equal(f, g) {
                        uf.union(f, g);
                    }
                }
            }
        }
    }
    let mut representative = vec![usize::MAX; n];
    let mut least = vec![usize::MAX; n];
    for m in 0..n {
        let root = uf.find_mut(m);
        if least[root] == usize::MAX {
            least[root] = m;
        }
        representative[m] = least[root];
    }
    for g in 0..n {
        for f in 0..n {
            if let Some(gf) = cat.try_compose(g, f) {
                let rep = cat.compose(representative[g], representative[f]);
                assert_eq!(representative[gf], representative[rep], "local equality is not a congruence");
            }
        }
    }

    let reps: Vec<Mor> = (0..n).filter(|&m| representative[m] == m).collect();
    let index_of: Vec<usize> = {
        let mut ix = vec![0; n];
        for (i, &r) in reps.iter().enumerate() {
            ix[r] = i;
        }
        (0..n).map(|m| ix[representative[m]]).collect()
    };
    let qcat = FiniteCategory::from_tables(
        cat.obj_names().to_vec(),
        reps.iter().map(|&r| cat.mor_name(r).to_string()).collect(),
        reps.iter().map(|&r| cat.dom(r)).collect(),
        reps.iter().map(|&r| cat.cod(r)).collect(),
        cat.objects().map(|x| index_of[cat.id(x)]).collect(),
        |g, f| index_of[cat.compose(reps[g], reps[f])],
    );
    let functor = Functor { on_objects: cat.objects().collect(), on_morphisms: index_of.clone() };
    let empty = site.empty_covered();
    let quotient = match site.generators() {
        Generators::Class { class, .. } => {
            let mut t: Vec<Mor> = (0..n).filter(|&m| class[m]).map(|m| index_of[m]).collect();
            t.sort_unstable();
            t.dedup();
            Site::principal_unchecked(qcat, &t, &empty)
        }
        Generators::Families(fams) => {
            let images: Vec<Vec<Mor>> =
                fams.iter().map(|f| f.iter().map(|&m| index_of[m]).collect()).collect();
            Site::finitely_generated_unchecked(qcat, &images, &empty).expect("images of nonempty families")
        }
    };
    CanonicalQuotient { representative, quotient, functor }
}
