use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use super::{generated_sieve, pullback_sieve};
use crate::fincat::{FiniteCategory, Mor, Obj};
use crate::verdict::{Caps, Verdict};

/// A commuting square `f ∘ g' = g ∘ t'` with `t'` in the class, answering
/// the pair `(f, g)` in axiom 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StabilitySquare {
    pub f: Mor,
    pub g: Mor,
    pub t_prime: Mor,
    pub g_prime: Mor,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StableClassReport {
    pub ax1: Verdict,
    pub ax2: Verdict,
    pub ax3: Verdict,
    pub ax4: Verdict,
    /// The least square found for each `(f, g)` pair, when axiom 3 holds
    /// for it.
    pub squares: Vec<StabilitySquare>,
}

impl StableClassReport {
    /// Axioms 1 to 3, the ones a site requires.
    pub fn is_stable(&self) -> bool {
        self.ax1.is_true() && self.ax2.is_true() && self.ax3.is_true()
    }
}

/// Decides the four stable class axioms for `class` (a membership table).
pub fn check_stable_class(cat: &FiniteCategory, class: &[bool]) -> StableClassReport {
    let name = |m: Mor| cat.mor_name(m).to_string();
    let ax1 = match cat.objects().find(|&x| !class[cat.id(x)]) {
        None => Verdict::True,
        Some(x) => Verdict::fail("identity missing from the class", [name(cat.id(x))]),
    };
    let mut ax2 = Verdict::True;
    'outer: for f in cat.morphisms().filter(|&f| class[f]) {
        for g in cat.morphisms().filter(|&g| class[g]) {
            if let Some(gf) = cat.try_compose(g, f) {
                if !class[gf] {
                    ax2 = Verdict::fail("composite leaves the class", [name(g), name(f)]);
                    break 'outer;
                }
            }
        }
    }
    let mut ax3 = Verdict::True;
    let mut squares = Vec::new();
    for f in cat.morphisms().filter(|&f| class[f]) {
        for g in cat.into_obj(cat.cod(f)) {
            match stability_square(cat, class, f, g) {
                Some(sq) => squares.push(sq),
                None => {
                    if ax3.is_true() {
                        ax3 = Verdict::fail("no stability square", [name(f), name(g)]);
                    }
                }
            }
        }
    }
    let mut ax4 = Verdict::True;
    'outer4: for f in cat.morphisms().filter(|&f| !class[f]) {
        for g in cat.into_obj(cat.dom(f)) {
            if class[cat.compose(f, g)] {
                ax4 = Verdict::fail("composite in the class with a first factor outside it", [name(f), name(g)]);
                break 'outer4;
            }
        }
    }
    StableClassReport { ax1, ax2, ax3, ax4, squares }
}

/// The least square (by apex, then `t'`, then `g'`) completing `f ∈ T` and
/// `g` with common codomain.
pub(crate) fn stability_square(cat: &FiniteCategory, class: &[bool], f: Mor, g: Mor) -> Option<StabilitySquare> {
    all_stability_squares(cat, class, f, g).into_iter().next()
}

pub(crate) fn all_stability_squares(cat: &FiniteCategory, class: &[bool], f: Mor, g: Mor) -> Vec<StabilitySquare> {
    let (c, b) = (cat.dom(f), cat.dom(g));
    let mut out = Vec::new();
    for a in cat.objects() {
        for &t in cat.hom(a, b) {
            if !class[t] {
                continue;
            }
            let gt = cat.compose(g, t);
            for &gp in cat.hom(a, c) {
                if cat.compose(f, gp) == gt {
                    out.push(StabilitySquare { f, g, t_prime: t, g_prime: gp });
                }
            }
        }
    }
    out
}

/// `T̂ = { f | f ∘ g ∈ T for some g }`.
pub fn saturate(cat: &FiniteCategory, class: &[bool]) -> Vec<bool> {
    cat.morphisms().map(|f| cat.into_obj(cat.dom(f)).into_iter().any(|g| class[cat.compose(f, g)])).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyClassReport {
    pub ax1: Verdict,
    pub ax2: Verdict,
    pub ax3: Verdict,
    pub ax4: Verdict,
    pub ax5: Verdict,
}

impl FamilyClassReport {
    pub fn is_stable(&self) -> bool {
        self.ax1.is_true() && self.ax2.is_true() && self.ax3.is_true()
    }
}

fn family_names(cat: &FiniteCategory, c: Obj, fam: &[Mor]) -> String {
    let parts: Vec<&str> = fam.iter().map(|&m| cat.mor_name(m)).collect();
    format!("{{{}}} over {}", parts.join(","), cat.obj_name(c))
}

/// Decides axioms 1' to 5' for a class of finite families, each given with
/// its codomain (so that empty families can be listed).
pub fn check_stable_family_class(cat: &FiniteCategory, families: &[(Obj, Vec<Mor>)]) -> FamilyClassReport {
    let mut by_obj: Vec<BTreeSet<Vec<Mor>>> = vec![BTreeSet::new(); cat.num_objects()];
    for (c, f) in families {
        let mut f = f.clone();
        f.sort_unstable();
        f.dedup();
        by_obj[*c].insert(f);
    }
    let ax1 = match cat.objects().find(|&x| !by_obj[x].contains(&vec![cat.id(x)])) {
        None => Verdict::True,
        Some(x) => Verdict::fail("identity family missing", [family_names(cat, x, &[cat.id(x)])]),
    };

    // Multicomposition, by accumulating the distinct unions reachable by
    // replacing each member with one of the families over its domain.
    let mut ax2 = Verdict::True;
    'outer2: for c in cat.objects() {
        for fam in &by_obj[c] {
            let mut reach: HashSet<Vec<Mor>> = HashSet::from([Vec::new()]);
            for &f in fam {
                let options: Vec<Vec<Mor>> = by_obj[cat.dom(f)]
                    .iter()
                    .map(|g| g.iter().map(|&gj| cat.compose(f, gj)).collect())
                    .collect();
                let mut next = HashSet::new();
                for r in &reach {
                    for o in &options {
                        let mut u = r.clone();
                        u.extend(o);
                        u.sort_unstable();
                        u.dedup();
                        next.insert(u);
                    }
                }
                reach = next;
            }
            let mut reach: Vec<Vec<Mor>> = reach.into_iter().collect();
            reach.sort();
            if let Some(bad) = reach.iter().find(|u| !by_obj[c].contains(*u)) {
                ax2 = Verdict::fail(
                    "multicomposite leaves the class",
                    [family_names(cat, c, fam), family_names(cat, c, bad)],
                );
                break 'outer2;
            }
        }
    }

    let mut ax3 = Verdict::True;
    'outer3: for c in cat.objects() {
        for fam in &by_obj[c] {
            let sieve = generated_sieve(cat, c, fam);
            for g in cat.into_obj(c) {
                let pulled = pullback_sieve(cat, &sieve, g);
                let b = cat.dom(g);
                if !by_obj[b].iter().any(|h| h.iter().all(|&m| pulled.contains(m))) {
                    ax3 = Verdict::fail(
                        "no refining family after pulling back",
                        [family_names(cat, c, fam), cat.mor_name(g).to_string()],
                    );
                    break 'outer3;
                }
            }
        }
    }

    let cap = Caps::default().family_cap;
    let mut ax4 = Verdict::True;
    let mut ax5 = Verdict::True;
    for c in cat.objects() {
        let into = cat.into_obj(c);
        if into.len() > cap {
            if ax4.is_true() {
                ax4 = Verdict::Inconclusive { cap: format!("more than {cap} morphisms into {}", cat.obj_name(c)) };
            }
            continue;
        }
        for mask in 0u64..(1u64 << into.len()) {
            let fam: Vec<Mor> = (0..into.len()).filter(|&i| mask >> i & 1 == 1).map(|i| into[i]).collect();
            if by_obj[c].contains(&fam) {
                continue;
            }
            let gen = generated_sieve(cat, c, &fam);
            let refines = by_obj[c].iter().any(|t| t.iter().all(|&m| gen.contains(m)));
            if refines && ax4.is_true() {
                ax4 = Verdict::fail("family refined by a class member is missing", [family_names(cat, c, &fam)]);
            }
            let contains = by_obj[c].iter().any(|t| t.iter().all(|m| fam.contains(m)));
            if contains && ax5.is_true() {
                ax5 = Verdict::fail("superset of a class member is missing", [family_names(cat, c, &fam)]);
            }
        }
    }
    FamilyClassReport { ax1, ax2, ax3, ax4, ax5 }
}
