//! Principal and finitely generated sites on finite categories.
//!
//! A topology is kept intensionally: a class of morphisms (or of finite
//! families) together with the objects on which the empty sieve covers.
//! Covering is decided on demand.

mod congruence;
mod morphism;
mod stable;

pub use congruence::{canonical_congruence, CanonicalQuotient};
pub use morphism::{is_comorphism_of_sites, is_morphism_of_sites, SiteMorphismReport};
pub(crate) use stable::all_stability_squares as stability_squares;
pub use stable::{
    check_stable_class, check_stable_family_class, saturate, FamilyClassReport, StabilitySquare,
    StableClassReport,
};

use crate::fincat::{FiniteCategory, Mor, Obj};
use crate::verdict::Caps;

/// A set of morphisms into a fixed object, closed under precomposition when
/// built through [`generated_sieve`] or [`pullback_sieve`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sieve {
    pub codomain: Obj,
    pub members: Vec<bool>,
}

impl Sieve {
    pub fn empty(cat: &FiniteCategory, c: Obj) -> Sieve {
        Sieve { codomain: c, members: vec![false; cat.num_morphisms()] }
    }

    pub fn maximal(cat: &FiniteCategory, c: Obj) -> Sieve {
        Sieve { codomain: c, members: cat.morphisms().map(|m| cat.cod(m) == c).collect() }
    }

    pub fn contains(&self, m: Mor) -> bool {
        self.members[m]
    }

    pub fn iter(&self) -> impl Iterator<Item = Mor> + '_ {
        self.members.iter().enumerate().filter(|(_, &b)| b).map(|(m, _)| m)
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&b| b)
    }

    pub fn is_subset(&self, other: &Sieve) -> bool {
        self.members.iter().zip(&other.members).all(|(&a, &b)| !a || b)
    }

    pub fn intersect(&self, other: &Sieve) -> Sieve {
        Sieve {
            codomain: self.codomain,
            members: self.members.iter().zip(&other.members).map(|(&a, &b)| a && b).collect(),
        }
    }

    /// Whether the member set is closed under precomposition.
    pub fn is_sieve(&self, cat: &FiniteCategory) -> bool {
        self.iter().all(|m| cat.cod(m) == self.codomain)
            && self.iter().all(|m| cat.into_obj(cat.dom(m)).into_iter().all(|g| self.contains(cat.compose(m, g))))
    }

    pub fn names(&self, cat: &FiniteCategory) -> Vec<String> {
        self.iter().map(|m| cat.mor_name(m).to_string()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SiteError {
    #[error("morphism {0} does not share the codomain of its family")]
    CodomainMismatch(String),
    #[error("stable class axiom {axiom} fails: {witness}")]
    Axiom { axiom: &'static str, witness: crate::verdict::Witness },
    #[error("empty-covered object {0} receives a map from {1}, which is not empty-covered")]
    EmptyCoverNotStable(String, String),
    #[error("generator {0} has an empty-covered domain but its codomain is not empty-covered")]
    EmptyCoverNotTransitive(String),
    #[error("finite family enumeration over {0} exceeds the family cap")]
    FamilyCap(String),
    #[error("site has an empty generating family; list its codomain as empty-covered instead")]
    EmptyFamily,
}

/// Generators of the topology.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generators {
    /// A stable class `T`, stored together with its saturation.
    Class { class: Vec<bool>, saturated: Vec<bool> },
    /// A stable class of nonempty finite families, each sorted by index.
    Families(Vec<Vec<Mor>>),
}

/// A finite category with a principal or finitely generated topology,
/// optionally augmented by objects on which the empty sieve covers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Site {
    cat: FiniteCategory,
    gens: Generators,
    empty_covered: Vec<bool>,
}

impl Site {
    /// A principal site; axioms 1 to 3 of the class are checked, as is
    /// compatibility of the empty-covered objects with the class.
    pub fn principal(cat: FiniteCategory, class: &[Mor], empty_covered: &[Obj]) -> Result<Site, SiteError> {
        let site = Site::principal_unchecked(cat, class, empty_covered);
        let report = check_stable_class(&site.cat, site.class_members());
        for (name, v) in [("1", &report.ax1), ("2", &report.ax2), ("3", &report.ax3)] {
            if let Some(w) = v.witness() {
                return Err(SiteError::Axiom { axiom: name, witness: w.clone() });
            }
        }
        site.check_empty_covers()?;
        Ok(site)
    }

    pub fn principal_unchecked(cat: FiniteCategory, class: &[Mor], empty_covered: &[Obj]) -> Site {
        let mut members = vec![false; cat.num_morphisms()];
        for &m in class {
            members[m] = true;
        }
        let saturated = saturate(&cat, &members);
        let mut flagged = vec![false; cat.num_objects()];
        for &x in empty_covered {
            flagged[x] = true;
        }
        Site { cat, gens: Generators::Class { class: members, saturated }, empty_covered: flagged }
    }

    /// A finitely generated site. Empty families are not listed; their
    /// codomains go into `empty_covered`. Axioms 1' to 3' are checked with
    /// those empty families included.
    pub fn finitely_generated(
        cat: FiniteCategory,
        families: &[Vec<Mor>],
        empty_covered: &[Obj],
    ) -> Result<Site, SiteError> {
        let site = Site::finitely_generated_unchecked(cat, families, empty_covered)?;
        let report = check_stable_family_class(&site.cat, site.families_with_empty().as_slice());
        for (name, v) in [("1'", &report.ax1), ("2'", &report.ax2), ("3'", &report.ax3)] {
            if let Some(w) = v.witness() {
                return Err(SiteError::Axiom { axiom: name, witness: w.clone() });
            }
        }
        site.check_empty_covers()?;
        Ok(site)
    }

    pub fn finitely_generated_unchecked(
        cat: FiniteCategory,
        families: &[Vec<Mor>],
        empty_covered: &[Obj],
    ) -> Result<Site, SiteError> {
        let mut fams: Vec<Vec<Mor>> = Vec::new();
        for fam in families {
            let mut f = fam.clone();
            f.sort_unstable();
            f.dedup();
            let Some(&first) = f.first() else { return Err(SiteError::EmptyFamily) };
            if let Some(&bad) = f.iter().find(|&&m| cat.cod(m) != cat.cod(first)) {
                return Err(SiteError::CodomainMismatch(cat.mor_name(bad).to_string()));
            }
            fams.push(f);
        }
        fams.sort_by_key(|f| (cat.cod(f[0]), f.clone()));
        fams.dedup();
        let mut flagged = vec![false; cat.num_objects()];
        for &x in empty_covered {
            flagged[x] = true;
        }
        Ok(Site { cat, gens: Generators::Families(fams), empty_covered: flagged })
    }

    /// The trivial topology: only maximal sieves cover.
    pub fn trivial(cat: FiniteCategory) -> Site {
        let ids: Vec<Mor> = cat.objects().map(|x| cat.id(x)).collect();
        Site::principal_unchecked(cat, &ids, &[])
    }

    /// The principal topology generated by the strict epimorphisms.
    pub fn reductive(cat: FiniteCategory) -> Result<Site, SiteError> {
        let t = cat.strict_epis();
        Site::principal(cat, &t, &[])
    }

    /// The reductive topology with the empty sieve covering initial objects.
    pub fn augmented_reductive(cat: FiniteCategory) -> Result<Site, SiteError> {
        let t = cat.strict_epis();
        let init = cat.initial_objects();
        Site::principal(cat, &t, &init)
    }

    /// The topology generated by the strictly epic finite families. Families
    /// are enumerated as subsets of each hom-set into an object, so objects
    /// receiving more than `caps.family_cap` morphisms are refused.
    pub fn coalescent(cat: FiniteCategory, caps: &Caps) -> Result<Site, SiteError> {
        let (fams, empty) = strictly_epic_families(&cat, caps)?;
        Site::finitely_generated(cat, &fams, &empty)
    }

    pub fn cat(&self) -> &FiniteCategory {
        &self.cat
    }

    pub fn generators(&self) -> &Generators {
        &self.gens
    }

    pub fn is_principal(&self) -> bool {
        matches!(self.gens, Generators::Class { .. })
    }

    pub fn is_empty_covered(&self, x: Obj) -> bool {
        self.empty_covered[x]
    }

    pub fn empty_covered(&self) -> Vec<Obj> {
        self.cat.objects().filter(|&x| self.empty_covered[x]).collect()
    }

    /// Members of the generating class; every morphism for which some
    /// singleton family is a generator when the site is finitely generated.
    pub fn class_members(&self) -> &[bool] {
        match &self.gens {
            Generators::Class { class, .. } => class,
            Generators::Families(_) => &[],
        }
    }

    /// Whether `m` generates a covering sieve on its codomain.
    pub fn in_saturation(&self, m: Mor) -> bool {
        match &self.gens {
            Generators::Class { saturated, .. } => saturated[m] || self.empty_covered[self.cat.cod(m)],
            Generators::Families(_) => self.is_covering(&generated_sieve(&self.cat, self.cat.cod(m), &[m])),
        }
    }

    /// Generating covering families on `c`: singletons of the class, or the
    /// listed families, plus the empty family on empty-covered objects.
    pub fn covering_families(&self, c: Obj) -> Vec<Vec<Mor>> {
        let mut out = Vec::new();
        if self.empty_covered[c] {
            out.push(Vec::new());
        }
        match &self.gens {
            Generators::Class { class, .. } => {
                out.extend(self.cat.into_obj(c).into_iter().filter(|&m| class[m]).map(|m| vec![m]))
            }
            Generators::Families(fams) => {
                out.extend(fams.iter().filter(|f| self.cat.cod(f[0]) == c).cloned())
            }
        }
        out
    }

    /// The listed families together with an empty family per empty-covered
    /// object, tagged with their codomain.
    pub(crate) fn families_with_empty(&self) -> Vec<(Obj, Vec<Mor>)> {
        self.cat.objects().flat_map(|c| self.covering_families(c).into_iter().map(move |f| (c, f))).collect()
    }

    pub fn is_covering(&self, s: &Sieve) -> bool {
        if self.empty_covered[s.codomain] {
            return true;
        }
        match &self.gens {
            Generators::Class { class, .. } => s.iter().any(|m| class[m]),
            Generators::Families(fams) => fams
                .iter()
                .any(|f| self.cat.cod(f[0]) == s.codomain && f.iter().all(|&m| s.contains(m))),
        }
    }

    /// Intersection of all covering sieves on `c`, itself covering.
    pub fn minimal_covering_sieve(&self, c: Obj) -> Sieve {
        let mut s = Sieve::maximal(&self.cat, c);
        for fam in self.covering_families(c) {
            s = s.intersect(&generated_sieve(&self.cat, c, &fam));
        }
        debug_assert!(self.is_covering(&s), "covering sieves are closed under intersection");
        s
    }

    /// `h ≡ k` locally: the sieve of maps equalizing them covers.
    pub fn locally_equal(&self, h: Mor, k: Mor) -> bool {
        assert!(self.cat.dom(h) == self.cat.dom(k) && self.cat.cod(h) == self.cat.cod(k), "not parallel");
        h == k || self.is_covering(&equalizing_sieve(&self.cat, h, k))
    }

    /// Every generating class member is a strict epimorphism, or every
    /// generating family (empty ones included) is effective-epimorphic.
    pub fn is_subcanonical(&self) -> bool {
        let cat = &self.cat;
        match &self.gens {
            Generators::Class { class, .. } => {
                cat.morphisms().all(|m| !class[m] || cat.is_strict_epi(m))
                    && self.empty_covered().into_iter().all(|c| is_effective_epimorphic_sieve(cat, &Sieve::empty(cat, c)))
            }
            Generators::Families(_) => self
                .families_with_empty()
                .iter()
                .all(|(c, f)| is_effective_epimorphic_sieve(cat, &generated_sieve(cat, *c, f))),
        }
    }

    fn check_empty_covers(&self) -> Result<(), SiteError> {
        let cat = &self.cat;
        for m in cat.morphisms() {
            if self.empty_covered[cat.cod(m)] && !self.empty_covered[cat.dom(m)] {
                return Err(SiteError::EmptyCoverNotStable(
                    cat.obj_name(cat.cod(m)).to_string(),
                    cat.obj_name(cat.dom(m)).to_string(),
                ));
            }
        }
        if let Generators::Class { saturated, .. } = &self.gens {
            for m in cat.morphisms() {
                if saturated[m] && self.empty_covered[cat.dom(m)] && !self.empty_covered[cat.cod(m)] {
                    return Err(SiteError::EmptyCoverNotTransitive(cat.mor_name(m).to_string()));
                }
            }
        }
        Ok(())
    }
}

/// Smallest sieve on `c` containing `presieve`.
pub fn generated_sieve(cat: &FiniteCategory, c: Obj, presieve: &[Mor]) -> Sieve {
    let mut s = Sieve::empty(cat, c);
    for &f in presieve {
        assert_eq!(cat.cod(f), c, "presieve member {} does not target the sieve codomain", cat.mor_name(f));
        for g in cat.into_obj(cat.dom(f)) {
            s.members[cat.compose(f, g)] = true;
        }
    }
    s
}

/// `f*(S) = { g | f ∘ g ∈ S }`.
pub fn pullback_sieve(cat: &FiniteCategory, s: &Sieve, f: Mor) -> Sieve {
    assert_eq!(cat.cod(f), s.codomain, "pullback along a map not into the sieve codomain");
    let d = cat.dom(f);
    Sieve { codomain: d, members: cat.morphisms().map(|g| cat.cod(g) == d && s.contains(cat.compose(f, g))).collect() }
}

/// Sieve of maps `u` with `h ∘ u = k ∘ u`.
pub fn equalizing_sieve(cat: &FiniteCategory, h: Mor, k: Mor) -> Sieve {
    let d = cat.dom(h);
    Sieve {
        codomain: d,
        members: cat.morphisms().map(|u| cat.cod(u) == d && cat.compose(h, u) == cat.compose(k, u)).collect(),
    }
}

/// Every sieve on `c`, by closing principal sieves under unions.
pub fn all_sieves(cat: &FiniteCategory, c: Obj) -> Vec<Sieve> {
    let mut seen = std::collections::BTreeSet::new();
    let mut stack = vec![Sieve::empty(cat, c)];
    seen.insert(stack[0].clone());
    while let Some(s) = stack.pop() {
        for f in cat.into_obj(c) {
            if s.contains(f) {
                continue;
            }
            let p = generated_sieve(cat, c, &[f]);
            let u = Sieve { codomain: c, members: s.members.iter().zip(&p.members).map(|(&a, &b)| a || b).collect() };
            if seen.insert(u.clone()) {
                stack.push(u);
            }
        }
    }
    seen.into_iter().collect()
}

/// The diagram of a sieve: the full subcategory of the slice over its
/// codomain on the members, mapped to their domains. Its shape objects are
/// the members in index order.
pub fn sieve_diagram(cat: &FiniteCategory, s: &Sieve) -> crate::fincat::Diagram {
    let members: Vec<Mor> = s.iter().collect();
    let mut names = Vec::new();
    let mut dom = Vec::new();
    let mut cod = Vec::new();
    let mut on_morphisms = Vec::new();
    let mut index = std::collections::HashMap::new();
    let mut ident = vec![0; members.len()];
    for (i, &f) in members.iter().enumerate() {
        for (j, &g) in members.iter().enumerate() {
            for &u in cat.hom(cat.dom(f), cat.dom(g)) {
                if cat.compose(g, u) == f {
                    if u == cat.id(cat.dom(f)) && i == j {
                        ident[i] = names.len();
                    }
                    index.insert((i, j, u), names.len());
                    names.push(format!("{}:{}", cat.mor_name(u), i));
                    dom.push(i);
                    cod.push(j);
                    on_morphisms.push(u);
                }
            }
        }
    }
    let (d2, c2, u2) = (dom.clone(), cod.clone(), on_morphisms.clone());
    let shape = FiniteCategory::from_tables(
        members.iter().map(|&f| cat.mor_name(f).to_string()).collect(),
        names,
        dom,
        cod,
        ident,
        |g, f| index[&(d2[f], c2[g], cat.compose(u2[g], u2[f]))],
    );
    crate::fincat::Diagram {
        on_objects: members.iter().map(|&f| cat.dom(f)).collect(),
        shape,
        on_morphisms,
    }
}

/// Whether the codomain of `s` is the colimit of its sieve diagram, with the
/// members as colimit legs.
pub fn is_effective_epimorphic_sieve(cat: &FiniteCategory, s: &Sieve) -> bool {
    let diag = sieve_diagram(cat, s);
    let canonical = crate::fincat::Cocone { vertex: s.codomain, legs: s.iter().collect() };
    match crate::fincat::colimit(cat, &diag) {
        None => false,
        Some(col) => cat.hom(col.vertex, s.codomain).iter().any(|&u| {
            cat.is_iso(u) && col.legs.iter().zip(&canonical.legs).all(|(&l, &m)| cat.compose(u, l) == m)
        }),
    }
}

/// Effective-epimorphic, and so is every pullback.
pub fn is_universally_effective_epimorphic(cat: &FiniteCategory, s: &Sieve) -> bool {
    cat.into_obj(s.codomain).into_iter().all(|f| is_effective_epimorphic_sieve(cat, &pullback_sieve(cat, s, f)))
}

/// Nonempty strictly epic families per object, plus the objects over which
/// the empty family is strictly epic.
pub fn strictly_epic_families(cat: &FiniteCategory, caps: &Caps) -> Result<(Vec<Vec<Mor>>, Vec<Obj>), SiteError> {
    let mut fams = Vec::new();
    let mut empty = Vec::new();
    for c in cat.objects() {
        let into = cat.into_obj(c);
        if into.len() > caps.family_cap {
            return Err(SiteError::FamilyCap(cat.obj_name(c).to_string()));
        }
        if cat.is_strictly_epic_family(c, &[]) {
            empty.push(c);
        }
        for mask in 1u64..(1u64 << into.len()) {
            let fam: Vec<Mor> = (0..into.len()).filter(|&i| mask >> i & 1 == 1).map(|i| into[i]).collect();
            if cat.is_strictly_epic_family(c, &fam) {
                fams.push(fam);
            }
        }
    }
    Ok((fams, empty))
}

/// Whether the sieve is the whole hom-set into its codomain.
pub fn is_maximal(cat: &FiniteCategory, s: &Sieve) -> bool {
    s.contains(cat.id(s.codomain))
}
