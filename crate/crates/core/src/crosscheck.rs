//! Agreement between the arch calculus and direct sheaf computations.

use serde::Serialize;

use crate::arch::{representable_category, Arch, ArchError};
use crate::classify::pairs_into;
use crate::fincat::{cocones_at, Cocone, Diagram, FiniteCategory, Mor};
use crate::sheaf::{hom_sheaves, Ell, NatTrans};
use crate::site::Site;
use crate::verdict::{Caps, Verdict};

/// The unique sheaf map `φ: ℓA → ℓB` with `φ ∘ ℓ(t) = ℓ(g)` for every span
/// `(t, g)` of the arch, searched among `homs`.
pub fn sheaf_map_of_arch(ell: &Ell, homs: &[NatTrans], arch: &Arch) -> Option<usize> {
    let legs: Vec<(NatTrans, NatTrans)> =
        arch.spans.iter().map(|s| (ell.morphism(s.left), ell.morphism(s.right))).collect();
    let matches: Vec<usize> = homs
        .iter()
        .enumerate()
        .filter(|(_, phi)| legs.iter().all(|(lt, lg)| phi.compose_after(lt) == *lg))
        .map(|(i, _)| i)
        .collect();
    match matches.as_slice() {
        [i] => Some(*i),
        _ => None,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HomComparison {
    pub source: String,
    pub target: String,
    pub arch_components: usize,
    pub sheaf_morphisms: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ArchSheafReport {
    pub homs: Vec<HomComparison>,
    /// Every arch determines a sheaf map, constant on components, giving a
    /// bijection on each hom-set.
    pub bijective: Verdict,
    /// The bijections send arch composition to composition of sheaf maps.
    pub functorial: Verdict,
}

impl ArchSheafReport {
    pub fn agrees(&self) -> bool {
        self.bijective.is_true() && self.functorial.is_true() && self.homs.iter().all(|h| h.arch_components == h.sheaf_morphisms)
    }
}

pub fn compare_arches_with_sheaves(site: &Site, caps: &Caps) -> Result<ArchSheafReport, ArchError> {
    let cat = site.cat();
    let rc = representable_category(site, caps)?;
    let ell = Ell::new(site);
    let k = cat.num_objects();
    let homs: Vec<Vec<NatTrans>> = (0..k * k)
        .map(|i| hom_sheaves(site, ell.object(i / k), ell.object(i % k)))
        .collect();
    let mut report = Vec::new();
    let mut bijective = Verdict::True;
    // The sheaf map assigned to each morphism of the representable category.
    let mut image: Vec<Option<usize>> = vec![None; rc.category.num_morphisms()];
    for a in cat.objects() {
        for b in cat.objects() {
            let hs = &homs[a * k + b];
            let mors: Vec<Mor> = rc.category.hom(a, b).to_vec();
            report.push(HomComparison {
                source: cat.obj_name(a).to_string(),
                target: cat.obj_name(b).to_string(),
                arch_components: mors.len(),
                sheaf_morphisms: hs.len(),
            });
            let mut hit = vec![false; hs.len()];
            for &m in &mors {
                let comp = &rc.components[m];
                let phis: Vec<Option<usize>> = comp.iter().map(|ar| sheaf_map_of_arch(&ell, hs, ar)).collect();
                let first = phis[0];
                if bijective.is_true() {
                    if let Some(pos) = phis.iter().position(|p| p.is_none() || *p != first) {
                        bijective = Verdict::fail(
                            "arch without a well-defined sheaf map",
                            [comp[pos].describe(cat)],
                        );
                    }
                }
                if let Some(i) = first {
                    if hit[i] && bijective.is_true() {
                        bijective = Verdict::fail("two components give the same sheaf map", [comp[0].describe(cat)]);
                    }
                    hit[i] = true;
                }
                image[m] = first;
            }
            if bijective.is_true() && hit.iter().any(|h| !h) {
                bijective = Verdict::fail(
                    "sheaf map not reached by any arch",
                    [cat.obj_name(a).to_string(), cat.obj_name(b).to_string()],
                );
            }
        }
    }
    let mut functorial = Verdict::True;
    let rcat = &rc.category;
    'outer: for g in rcat.morphisms() {
        for f in rcat.morphisms() {
            let Some(gf) = rcat.try_compose(g, f) else { continue };
            let (Some(ig), Some(i_f), Some(igf)) = (image[g], image[f], image[gf]) else { continue };
            let (a, b, c) = (rcat.dom(f), rcat.cod(f), rcat.cod(g));
            let composite = homs[b * k + c][ig].compose_after(&homs[a * k + b][i_f]);
            if composite != homs[a * k + c][igf] {
                functorial = Verdict::fail("composition not preserved", [rcat.mor_name(g), rcat.mor_name(f)]);
                break 'outer;
            }
        }
    }
    Ok(ArchSheafReport { homs: report, bijective, functorial })
}

/// Every cocone over funnels into each object built from at most two of its
/// parallel pairs, plus triples drawn from its first four pairs, keeping the
/// first `shapes_per_object` funnel shapes.
pub fn funnel_cocones(cat: &FiniteCategory, shapes_per_object: usize) -> Vec<(Diagram, Cocone)> {
    let mut out = Vec::new();
    for d0 in cat.objects() {
        let pairs = pairs_into(cat, d0);
        let mut shapes: Vec<Vec<(Mor, Mor)>> = vec![vec![]];
        shapes.extend(pairs.iter().map(|&p| vec![p]));
        for i in 0..pairs.len() {
            for j in i + 1..pairs.len() {
                shapes.push(vec![pairs[i], pairs[j]]);
            }
        }
        let few = pairs.len().min(4);
        for i in 0..few {
            for j in i + 1..few {
                for k in j + 1..few {
                    shapes.push(vec![pairs[i], pairs[j], pairs[k]]);
                }
            }
        }
        for sub in shapes.into_iter().take(shapes_per_object) {
            let diag = Diagram::funnel(cat, d0, &sub).expect("pairs share the target");
            for v in cat.objects() {
                for legs in cocones_at(cat, &diag, v) {
                    out.push((diag.clone(), Cocone { vertex: v, legs }));
                }
            }
        }
    }
    out
}
