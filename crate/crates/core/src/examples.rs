//! Named small categories and sites used by the tests, the corpus and the
//! command line tool.
//!
//! The two four- and six-object categories `tworel_c` and `tworel_c_prime`
//! are encoded concretely: each object is the set of morphisms into it, and
//! each generator acts by postcomposition. In `tworel_c` both relation pairs
//! `R1 ⇉ A` and `R2 ⇉ A` are coequalized by the unique map `A ↠ B` into the
//! terminal object. In `tworel_c_prime` the object `C` coequalizes the `R2`
//! pair and `D` coequalizes the `R1` pair, both mapping onto the terminal
//! `B`; the two maps `R1 → C` (and `R2 → D`) stay distinct.

use crate::fincat::{ConcreteBuilder, FiniteCategory};
use crate::site::Site;
use crate::verdict::Caps;

fn concrete(b: ConcreteBuilder) -> FiniteCategory {
    b.build().expect("catalog categories are well formed")
}

fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// The poset on `elements` whose order is the reflexive transitive closure
/// of `covers` (pairs `(lower, upper)`).
pub fn poset(elements: &[&str], covers: &[(&str, &str)]) -> FiniteCategory {
    let k = elements.len();
    let ix = |s: &str| elements.iter().position(|e| *e == s).expect("element of the poset");
    let mut leq = vec![vec![false; k]; k];
    for (i, row) in leq.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in covers {
        leq[ix(a)][ix(b)] = true;
    }
    for m in 0..k {
        for i in 0..k {
            for j in 0..k {
                if leq[i][m] && leq[m][j] {
                    leq[i][j] = true;
                }
            }
        }
    }
    FiniteCategory::from_poset(&names(elements), &leq)
}

pub fn terminal() -> FiniteCategory {
    FiniteCategory::discrete(&["*"])
}

/// `f, g: A ⇉ B`.
pub fn parallel_pair() -> FiniteCategory {
    concrete(ConcreteBuilder::new().object("A", 1).object("B", 2).arrow("f", "A", "B", &[0]).arrow("g", "A", "B", &[1]))
}

/// `f, g: A ⇉ B` followed by their coequalizer `q: B ↠ Q`.
pub fn coequalizer_diagram() -> FiniteCategory {
    concrete(
        ConcreteBuilder::new()
            .object("A", 1)
            .object("B", 2)
            .object("Q", 1)
            .arrow("f", "A", "B", &[0])
            .arrow("g", "A", "B", &[1])
            .arrow("q", "B", "Q", &[0, 0]),
    )
}

/// `0 < a, b < 1`.
pub fn diamond() -> FiniteCategory {
    poset(&["0", "a", "b", "1"], &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")])
}

/// `0 < 1 < … < n-1`.
pub fn chain(n: usize) -> FiniteCategory {
    let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    let covers: Vec<(&str, &str)> = refs.windows(2).map(|w| (w[0], w[1])).collect();
    poset(&refs, &covers)
}

/// `a, b < 1` with no bottom.
pub fn vee() -> FiniteCategory {
    poset(&["a", "b", "1"], &[("a", "1"), ("b", "1")])
}

/// `t: X → Y` and `f, g: Y ⇉ Z` with `f ∘ t = g ∘ t`.
pub fn congruence_example() -> FiniteCategory {
    concrete(
        ConcreteBuilder::new()
            .object("X", 1)
            .object("Y", 2)
            .object("Z", 3)
            .arrow("t", "X", "Y", &[0])
            .arrow("f", "Y", "Z", &[0, 1])
            .arrow("g", "Y", "Z", &[0, 2]),
    )
}

/// The monoid `{1, z}` with `z ∘ z = z`.
pub fn idempotent_monoid() -> FiniteCategory {
    concrete(ConcreteBuilder::new().object("*", 2).arrow("z", "*", "*", &[0, 0]))
}

/// The monoid `{1, a, b}` in which `x ∘ y = y` for `x, y ∈ {a, b}`.
pub fn right_zero_monoid() -> FiniteCategory {
    concrete(ConcreteBuilder::new().object("*", 3).arrow("a", "*", "*", &[0, 1, 0]).arrow("b", "*", "*", &[0, 1, 1]))
}

/// A retraction `p: X → Y` with section `s: Y → X`.
pub fn split_idempotent() -> FiniteCategory {
    concrete(
        ConcreteBuilder::new()
            .object("Y", 2)
            .object("X", 3)
            .arrow("s", "Y", "X", &[0, 1])
            .arrow("p", "X", "Y", &[0, 1, 1]),
    )
}

/// Two parallel pairs `R1 ⇉ A`, `R2 ⇉ A` and the terminal `A ↠ B`.
pub fn tworel_c() -> FiniteCategory {
    // A = {r1, r1', r2, r2', 1_A}, B = {from R1, from R2, from A, 1_B}.
    concrete(
        ConcreteBuilder::new()
            .object("R1", 1)
            .object("R2", 1)
            .object("A", 5)
            .object("B", 4)
            .arrow("r1", "R1", "A", &[0])
            .arrow("r1'", "R1", "A", &[1])
            .arrow("r2", "R2", "A", &[2])
            .arrow("r2'", "R2", "A", &[3])
            .arrow("e", "A", "B", &[0, 0, 1, 1, 2]),
    )
}

/// `tworel_c` with the separate coequalizers `C` of the `R2` pair and `D` of
/// the `R1` pair inserted above `A`.
pub fn tworel_c_prime() -> FiniteCategory {
    // C = {c r1, c r1', c r2, c, 1_C}, D = {d r1, d r2, d r2', d, 1_D},
    // B = {from R1, from R2, from A, from C, from D, 1_B}.
    concrete(
        ConcreteBuilder::new()
            .object("R1", 1)
            .object("R2", 1)
            .object("A", 5)
            .object("C", 5)
            .object("D", 5)
            .object("B", 6)
            .arrow("r1", "R1", "A", &[0])
            .arrow("r1'", "R1", "A", &[1])
            .arrow("r2", "R2", "A", &[2])
            .arrow("r2'", "R2", "A", &[3])
            .arrow("c", "A", "C", &[0, 1, 2, 2, 3])
            .arrow("d", "A", "D", &[0, 0, 1, 2, 3])
            .arrow("cb", "C", "B", &[0, 0, 1, 2, 3])
            .arrow("db", "D", "B", &[0, 1, 1, 2, 4]),
    )
}

/// A site together with the name it is filed under.
#[derive(Clone, Debug)]
pub struct NamedSite {
    pub name: &'static str,
    pub site: Site,
}

fn named(name: &'static str, site: Site) -> NamedSite {
    NamedSite { name, site }
}

fn by_names(cat: &FiniteCategory, ms: &[&str]) -> Vec<usize> {
    ms.iter().map(|m| cat.mor_by_name(m).expect("catalog morphism")).collect()
}

pub fn congruence_site() -> Site {
    let cat = congruence_example();
    let mut t = by_names(&cat, &["t"]);
    t.extend(cat.objects().map(|x| cat.id(x)));
    Site::principal(cat, &t, &[]).expect("stable class")
}

pub fn all_morphisms_site(cat: FiniteCategory) -> Site {
    let t: Vec<usize> = cat.morphisms().collect();
    Site::principal(cat, &t, &[]).expect("stable class")
}

pub fn split_epi_site(cat: FiniteCategory) -> Site {
    let t: Vec<usize> = cat.morphisms().filter(|&m| cat.classify_morphism(m).split_epi).collect();
    Site::principal(cat, &t, &[]).expect("split epimorphisms are stable")
}

/// The finitely generated site on `vee` in which `{a < 1, b < 1}` covers.
pub fn vee_site() -> Site {
    let cat = vee();
    let fam = by_names(&cat, &["a<1", "b<1"]);
    let mut fams: Vec<Vec<usize>> = cat.objects().map(|x| vec![cat.id(x)]).collect();
    fams.push(fam);
    Site::finitely_generated(cat, &fams, &[]).expect("stable family class")
}

/// The sites on which arch components and sheaf morphisms are compared:
/// at most six objects and twenty morphisms each.
pub fn comparison_sites() -> Vec<NamedSite> {
    let caps = Caps::default();
    vec![
        named("terminal/trivial", Site::trivial(terminal())),
        named("parallel-pair/trivial", Site::trivial(parallel_pair())),
        named("coequalizer/reductive", Site::reductive(coequalizer_diagram()).expect("reductive")),
        named("diamond/trivial", Site::trivial(diamond())),
        named("diamond/augmented-reductive", Site::augmented_reductive(diamond()).expect("reductive")),
        named("diamond/coalescent", Site::coalescent(diamond(), &caps).expect("coalescent")),
        named("chain3/coalescent", Site::coalescent(chain(3), &caps).expect("coalescent")),
        named("tworel-c/reductive", Site::reductive(tworel_c()).expect("reductive")),
        named("congruence/t", congruence_site()),
        named("idempotent-monoid/all", all_morphisms_site(idempotent_monoid())),
        named("right-zero-monoid/all", all_morphisms_site(right_zero_monoid())),
        named("split-idempotent/split-epis", split_epi_site(split_idempotent())),
        named("vee/join-cover", vee_site()),
        named("chain2/augmented-reductive", Site::augmented_reductive(chain(2)).expect("reductive")),
    ]
}
