mod common;

use proptest::prelude::*;
use supercompact::examples;
use supercompact::fincat::*;
use supercompact::site::{generated_sieve, is_effective_epimorphic_sieve};

fn catalog() -> Vec<(&'static str, FiniteCategory)> {
    vec![
        ("terminal", examples::terminal()),
        ("parallel_pair", examples::parallel_pair()),
        ("coequalizer", examples::coequalizer_diagram()),
        ("diamond", examples::diamond()),
        ("chain3", examples::chain(3)),
        ("vee", examples::vee()),
        ("congruence", examples::congruence_example()),
        ("idempotent", examples::idempotent_monoid()),
        ("right_zero", examples::right_zero_monoid()),
        ("split", examples::split_idempotent()),
        ("tworel_c", examples::tworel_c()),
        ("tworel_c_prime", examples::tworel_c_prime()),
    ]
}

fn m(cat: &FiniteCategory, name: &str) -> Mor {
    cat.mor_by_name(name).unwrap_or_else(|| panic!("no morphism {name}"))
}

fn o(cat: &FiniteCategory, name: &str) -> Obj {
    cat.obj_by_name(name).unwrap_or_else(|| panic!("no object {name}"))
}

fn raw_one_object() -> RawCategory {
    examples::terminal().to_raw()
}

#[test]
fn one_object_identity_only_is_valid() {
    assert!(validate(&raw_one_object()).is_valid());
}

#[test]
fn missing_composite_is_reported() {
    let mut raw = examples::chain(3).to_raw();
    let pos = raw.composition.iter().position(|t| t[0] == "1<2" && t[1] == "0<1").unwrap();
    raw.composition.remove(pos);
    let report = validate(&raw);
    assert!(!report.is_malformed());
    assert!(report
        .violations
        .contains(&Violation::MissingComposite { g: "1<2".into(), f: "0<1".into() }));
}

#[test]
fn non_associative_table_names_the_triple() {
    // One object with `a∘a = a, a∘b = a, b∘a = b, b∘b = a`: `(b∘b)∘b ≠ b∘(b∘b)`.
    let s = |x: &str| x.to_string();
    let mor = |n: &str| RawMorphism { name: s(n), dom: s("*"), cod: s("*") };
    let mut composition = vec![];
    for (g, f, gf) in [("a", "a", "a"), ("a", "b", "a"), ("b", "a", "b"), ("b", "b", "a")] {
        composition.push([s(g), s(f), s(gf)]);
    }
    for x in ["1", "a", "b"] {
        composition.push([s("1"), s(x), s(x)]);
        if x != "1" {
            composition.push([s(x), s("1"), s(x)]);
        }
    }
    let raw = RawCategory {
        objects: vec![s("*")],
        morphisms: vec![mor("1"), mor("a"), mor("b")],
        identities: [(s("*"), s("1"))].into_iter().collect(),
        composition,
    };
    let report = validate(&raw);
    assert!(!report.is_malformed());
    assert!(report.violations.iter().any(|v| matches!(v, Violation::NonAssociative { .. })), "{report}");
}

#[test]
fn dangling_ids_are_malformed() {
    let mut raw = raw_one_object();
    raw.morphisms.push(RawMorphism { name: "f".into(), dom: "*".into(), cod: "nowhere".into() });
    assert!(validate(&raw).is_malformed());
}

#[test]
fn raw_round_trip_is_identity() {
    for (name, cat) in catalog() {
        let back = FiniteCategory::from_raw(&cat.to_raw()).expect(name);
        assert_eq!(back, cat, "{name}");
    }
}

#[test]
fn identity_has_all_flags() {
    for (_, cat) in catalog() {
        for x in cat.objects() {
            let fl = cat.classify_morphism(cat.id(x));
            assert!(fl.mono && fl.epi && fl.split_epi && fl.iso);
        }
    }
}

#[test]
fn diamond_a_to_top_is_mono_epi_not_split() {
    let d = examples::diamond();
    let fl = d.classify_morphism(m(&d, "a<1"));
    assert!(fl.mono && fl.epi && !fl.split_epi && !fl.iso);
}

/// Cancellability checked straight from the composition table.
fn oracle_mono(cat: &FiniteCategory, f: Mor) -> bool {
    cat.morphisms().all(|g| {
        cat.morphisms()
            .all(|h| cat.cod(g) != cat.dom(f) || cat.cod(h) != cat.dom(f) || cat.dom(g) != cat.dom(h) || g == h || cat.compose(f, g) != cat.compose(f, h))
    })
}

fn oracle_epi(cat: &FiniteCategory, f: Mor) -> bool {
    oracle_mono(&cat.opposite(), f)
}

#[test]
fn parallel_pair_f_is_epi_only_vacuously() {
    // `id_B` is the only arrow out of B, so right cancellation never fails.
    let c = examples::parallel_pair();
    let f = m(&c, "f");
    assert!(c.classify_morphism(f).epi);
    assert!(oracle_epi(&c, f));
    assert!(!c.classify_morphism(f).split_epi);
    assert!(!c.is_strict_epi(f));
}

#[test]
fn flags_agree_with_cancellability_oracle() {
    for (name, cat) in catalog() {
        for f in cat.morphisms() {
            let fl = cat.classify_morphism(f);
            assert_eq!(fl.mono, oracle_mono(&cat, f), "{name} {}", cat.mor_name(f));
            assert_eq!(fl.epi, oracle_epi(&cat, f), "{name} {}", cat.mor_name(f));
        }
    }
}

#[test]
fn split_epis_are_strict() {
    for (name, cat) in catalog() {
        for f in cat.morphisms() {
            if cat.classify_morphism(f).split_epi {
                assert!(cat.is_strict_epi(f), "{name} {}", cat.mor_name(f));
            }
        }
    }
}

#[test]
fn diamond_a_to_top_is_not_strict() {
    let d = examples::diamond();
    assert!(!d.is_strict_epi(m(&d, "a<1")));
}

#[test]
fn strict_epis_are_epic_and_match_principal_sieves() {
    for (name, cat) in catalog() {
        for h in cat.morphisms() {
            let strict = cat.is_strict_epi(h);
            if strict {
                assert!(cat.is_epi(h), "{name} {}", cat.mor_name(h));
            }
            let s = generated_sieve(&cat, cat.cod(h), &[h]);
            assert_eq!(strict, is_effective_epimorphic_sieve(&cat, &s), "{name} {}", cat.mor_name(h));
        }
    }
}

#[test]
fn colimit_of_single_object() {
    let c = examples::diamond();
    let a = o(&c, "a");
    let co = colimit(&c, &Diagram::single(&c, a)).unwrap();
    assert_eq!(co, Cocone { vertex: a, legs: vec![c.id(a)] });
}

#[test]
fn parallel_pair_has_no_coequalizer_or_equalizer() {
    let c = examples::parallel_pair();
    let (f, g) = (m(&c, "f"), m(&c, "g"));
    assert!(colimit(&c, &Diagram::funnel(&c, o(&c, "B"), &[(f, g)]).unwrap()).is_none());
    assert!(equalizer(&c, f, g).is_none());
    assert!(pullback(&c, f, g).is_none());
}

#[test]
fn tworel_r1_pair_coequalizes_to_terminal() {
    let c = examples::tworel_c();
    let (v, leg) = coequalizer(&c, m(&c, "r1"), m(&c, "r1'")).unwrap();
    assert_eq!(c.obj_name(v), "B");
    assert_eq!(c.mor_name(leg), "e");
    let both = [(m(&c, "r1"), m(&c, "r1'")), (m(&c, "r2"), m(&c, "r2'"))];
    let (leg, v) = joint_coequalizer(&c, o(&c, "A"), &both).unwrap().unwrap();
    assert_eq!((c.obj_name(v), c.mor_name(leg)), ("B", "e"));
}

#[test]
fn joint_coequalizer_trivial_cases() {
    for (_, cat) in catalog() {
        for d0 in cat.objects() {
            assert_eq!(joint_coequalizer(&cat, d0, &[]).unwrap(), Some((cat.id(d0), d0)));
        }
    }
    let d = examples::diamond();
    let ab = m(&d, "a<1");
    assert_eq!(joint_coequalizer(&d, o(&d, "1"), &[(ab, ab)]).unwrap(), Some((d.id(o(&d, "1")), o(&d, "1"))));
}

#[test]
fn joint_coequalizer_rejects_foreign_pairs() {
    let c = examples::tworel_c();
    assert!(joint_coequalizer(&c, o(&c, "B"), &[(m(&c, "r1"), m(&c, "r1'"))]).is_err());
}

#[test]
fn limits_on_small_examples() {
    let d = examples::diamond();
    let one = o(&d, "1");
    let (v, _, _) = pullback(&d, d.id(one), d.id(one)).unwrap();
    assert_eq!(v, one);
    let (v, _, _) = pullback(&d, m(&d, "a<1"), m(&d, "b<1")).unwrap();
    assert_eq!(d.obj_name(v), "0");
}

fn nontrivial_pairs(cat: &FiniteCategory, d0: Obj) -> Vec<(Mor, Mor)> {
    let mut out = Vec::new();
    for x in cat.objects() {
        let hs = cat.hom(x, d0);
        for i in 0..hs.len() {
            for j in i + 1..hs.len() {
                out.push((hs[i], hs[j]));
            }
        }
    }
    out
}

/// Both answers are colimits, so they must agree up to a unique iso.
fn same_up_to_iso(cat: &FiniteCategory, a: (Mor, Obj), b: (Mor, Obj)) -> bool {
    cat.hom(a.1, b.1).iter().any(|&u| cat.is_iso(u) && cat.compose(u, a.0) == b.0)
}

#[test]
fn colimit_agrees_with_joint_coequalizer_on_all_funnels() {
    for (name, cat) in catalog() {
        for d0 in cat.objects() {
            let pairs = nontrivial_pairs(&cat, d0);
            if pairs.len() > 8 {
                continue;
            }
            for sub in common::subsets(&pairs) {
                let direct = colimit(&cat, &Diagram::funnel(&cat, d0, &sub).unwrap()).map(|c| (c.legs[0], c.vertex));
                let joint = joint_coequalizer(&cat, d0, &sub).unwrap();
                match (direct, joint) {
                    (None, None) => {}
                    (Some(a), Some(b)) => assert!(same_up_to_iso(&cat, a, b), "{name}"),
                    _ => panic!("{name}: colimit and joint coequalizer disagree"),
                }
            }
        }
    }
}

/// Components of `(x ↓ D)` by breadth-first search over zigzags.
fn oracle_components(cat: &FiniteCategory, x: Obj, diag: &Diagram) -> Vec<Vec<(Obj, Mor)>> {
    let s = &diag.shape;
    let elems: Vec<(Obj, Mor)> =
        s.objects().flat_map(|i| cat.hom(x, diag.on_objects[i]).iter().map(move |&m| (i, m))).collect();
    let adjacent = |p: (Obj, Mor), q: (Obj, Mor)| {
        s.morphisms().any(|a| {
            (s.dom(a) == p.0 && s.cod(a) == q.0 && cat.compose(diag.on_morphisms[a], p.1) == q.1)
                || (s.dom(a) == q.0 && s.cod(a) == p.0 && cat.compose(diag.on_morphisms[a], q.1) == p.1)
        })
    };
    let mut label = vec![usize::MAX; elems.len()];
    let mut comps = Vec::new();
    for start in 0..elems.len() {
        if label[start] != usize::MAX {
            continue;
        }
        let k = comps.len();
        let mut comp = vec![];
        let mut stack = vec![start];
        label[start] = k;
        while let Some(e) = stack.pop() {
            comp.push(elems[e]);
            for f in 0..elems.len() {
                if label[f] == usize::MAX && adjacent(elems[e], elems[f]) {
                    label[f] = k;
                    stack.push(f);
                }
            }
        }
        comp.sort();
        comps.push(comp);
    }
    comps.sort();
    comps
}

fn normalized(mut comps: Vec<Vec<(Obj, Mor)>>) -> Vec<Vec<(Obj, Mor)>> {
    for c in comps.iter_mut() {
        c.sort();
    }
    comps.sort();
    comps
}

#[test]
fn under_comma_components_match_zigzag_search() {
    for (name, cat) in catalog() {
        for d0 in cat.objects() {
            let pairs = nontrivial_pairs(&cat, d0);
            for sub in common::subsets(&pairs).into_iter().take(32) {
                let diag = Diagram::funnel(&cat, d0, &sub).unwrap();
                for x in cat.objects() {
                    assert_eq!(
                        normalized(under_comma_components(&cat, x, &diag)),
                        oracle_components(&cat, x, &diag),
                        "{name}"
                    );
                }
            }
        }
    }
}

#[test]
fn under_comma_components_examples() {
    let c = examples::diamond();
    let a = o(&c, "a");
    let comps = under_comma_components(&c, o(&c, "0"), &Diagram::single(&c, a));
    assert_eq!(comps.len(), 1);
    let comps = under_comma_components(&c, o(&c, "0"), &Diagram::discrete(&c, &[a, o(&c, "b")]));
    assert_eq!(comps.len(), 2);

    let t = examples::tworel_c();
    let diag = Diagram::funnel(&t, o(&t, "A"), &[(m(&t, "r1"), m(&t, "r1'"))]).unwrap();
    let comps = under_comma_components(&t, o(&t, "R2"), &diag);
    let find = |mm: Mor| comps.iter().position(|c| c.contains(&(0, mm))).unwrap();
    assert_ne!(find(m(&t, "r2")), find(m(&t, "r2'")));
}

#[test]
fn find_equivalence_examples() {
    for (name, cat) in catalog() {
        let f = find_equivalence(&cat, &cat).expect(name);
        assert!(is_equivalence(&f, &cat, &cat));
    }
    assert!(find_equivalence(&examples::chain(2), &examples::chain(3)).is_none());
    assert!(find_equivalence(&examples::tworel_c(), &examples::tworel_c_prime()).is_none());
}

#[test]
fn find_equivalence_is_symmetric_on_catalog() {
    let cats = catalog();
    for (na, a) in &cats {
        for (nb, b) in &cats {
            assert_eq!(find_equivalence(a, b).is_some(), find_equivalence(b, a).is_some(), "{na} {nb}");
        }
    }
}

#[test]
fn split_idempotent_is_equivalent_to_its_retract_only_when_split_trivially() {
    // The category with a split idempotent is not equivalent to the one
    // object category: the idempotent on X is not an iso.
    assert!(find_equivalence(&examples::split_idempotent(), &examples::terminal()).is_none());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_categories_validate(cat in common::arb_concrete()) {
        prop_assert!(validate(&cat.to_raw()).is_valid());
    }

    #[test]
    fn strict_epi_implies_epi(cat in common::arb_concrete()) {
        for h in cat.morphisms() {
            if cat.is_strict_epi(h) {
                prop_assert!(oracle_epi(&cat, h));
            }
        }
    }

    #[test]
    fn strict_epi_matches_effective_epimorphic_sieve(cat in common::arb_concrete()) {
        for h in cat.morphisms() {
            let s = generated_sieve(&cat, cat.cod(h), &[h]);
            prop_assert_eq!(cat.is_strict_epi(h), is_effective_epimorphic_sieve(&cat, &s));
        }
    }

    #[test]
    fn colimit_matches_joint_coequalizer_on_random_categories(cat in common::arb_concrete()) {
        for d0 in cat.objects() {
            let pairs = nontrivial_pairs(&cat, d0);
            for sub in common::subsets(&pairs).into_iter().take(16) {
                let direct = colimit(&cat, &Diagram::funnel(&cat, d0, &sub).unwrap()).map(|c| (c.legs[0], c.vertex));
                let joint = joint_coequalizer(&cat, d0, &sub).unwrap();
                prop_assert_eq!(direct.is_some(), joint.is_some());
                if let (Some(a), Some(b)) = (direct, joint) {
                    prop_assert!(same_up_to_iso(&cat, a, b));
                }
            }
        }
    }

    #[test]
    fn equivalence_search_finds_relabelings(p in common::arb_poset(5)) {
        let cat = p.to_category();
        let rev: Vec<String> = p.elements().iter().rev().cloned().collect();
        let n = p.len();
        let leq: Vec<Vec<bool>> = (0..n).map(|a| (0..n).map(|b| p.leq(n - 1 - a, n - 1 - b)).collect()).collect();
        let shuffled = FiniteCategory::from_poset(&rev, &leq);
        prop_assert!(find_equivalence(&cat, &shuffled).is_some());
        prop_assert!(find_equivalence(&shuffled, &cat).is_some());
    }
}
