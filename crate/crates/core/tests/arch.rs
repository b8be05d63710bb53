mod common;

use proptest::prelude::*;
use supercompact::arch::*;
use supercompact::crosscheck::compare_arches_with_sheaves;
use supercompact::examples;
use supercompact::fincat::*;
use supercompact::site::Site;
use supercompact::verdict::Caps;

fn m(cat: &FiniteCategory, name: &str) -> Mor {
    cat.mor_by_name(name).unwrap_or_else(|| panic!("no morphism {name}"))
}

fn o(cat: &FiniteCategory, name: &str) -> Obj {
    cat.obj_by_name(name).unwrap_or_else(|| panic!("no object {name}"))
}

fn single(a: Obj, b: Obj, apex: Obj, left: Mor, right: Mor) -> Arch {
    Arch::new(a, b, vec![Span { apex, left, right }])
}

#[test]
fn local_equality_examples() {
    let pp = examples::parallel_pair();
    let trivial = Site::trivial(pp.clone());
    let (f, g) = (m(&pp, "f"), m(&pp, "g"));
    assert!(locally_equal(&trivial, f, f));
    assert!(!locally_equal(&trivial, f, g));
    let site = examples::congruence_site();
    let cat = site.cat();
    assert!(locally_equal(&site, m(cat, "f"), m(cat, "g")));
    let le = LocalEquality::new(&site);
    assert!(le.equal(m(cat, "f"), m(cat, "g")));
}

#[test]
fn trivial_topology_endo_arches() {
    for cat in [examples::idempotent_monoid(), examples::right_zero_monoid(), examples::diamond()] {
        let site = Site::trivial(cat.clone());
        for a in cat.objects() {
            let arches = enumerate_arches(&site, a, a, &Caps::default()).unwrap();
            assert!(arches.contains(&Arch::identity(&cat, a)));
            for &g in cat.hom(a, a) {
                assert!(arches.contains(&single(a, a, a, cat.id(a), g)));
            }
        }
    }
}

/// Spans `(t, g)` with `t` covering, checked against the arch condition
/// directly with the site's local equality.
fn oracle_arches(site: &Site, a: Obj, b: Obj) -> Vec<Arch> {
    let cat = site.cat();
    let mut out = Vec::new();
    for x in cat.objects() {
        for &t in cat.hom(x, a) {
            if !site.in_saturation(t) {
                continue;
            }
            for &g in cat.hom(x, b) {
                let ok = cat.objects().all(|d| {
                    cat.hom(d, x).iter().all(|&h| {
                        cat.hom(d, x).iter().all(|&k| {
                            cat.compose(t, h) != cat.compose(t, k)
                                || site.locally_equal(cat.compose(g, h), cat.compose(g, k))
                        })
                    })
                });
                if ok {
                    out.push(single(a, b, x, t, g));
                }
            }
        }
    }
    out.sort();
    out
}

#[test]
fn principal_enumeration_matches_direct_oracle() {
    for ns in examples::comparison_sites() {
        let site = &ns.site;
        if !site.is_principal() {
            continue;
        }
        let cat = site.cat();
        for a in cat.objects().filter(|&a| !site.is_empty_covered(a)) {
            for b in cat.objects() {
                let mut got = enumerate_arches(site, a, b, &Caps::default()).unwrap();
                got.sort();
                assert_eq!(got, oracle_arches(site, a, b), "{} {a} {b}", ns.name);
            }
        }
    }
}

#[test]
fn enumeration_is_deterministic_and_sorted_by_apex() {
    let site = Site::reductive(examples::tworel_c()).unwrap();
    let cat = site.cat();
    let (a, b) = (o(cat, "A"), o(cat, "B"));
    let first = enumerate_arches(&site, a, b, &Caps::default()).unwrap();
    let second = enumerate_arches(&site, a, b, &Caps::default()).unwrap();
    assert_eq!(first, second);
    let apexes: Vec<Obj> = first.iter().map(|ar| ar.spans[0].apex).collect();
    let mut sorted = apexes.clone();
    sorted.sort();
    assert_eq!(apexes, sorted);
}

#[test]
fn subcanonical_components_contain_an_identity_legged_arch() {
    for ns in examples::comparison_sites() {
        if !ns.site.is_subcanonical() {
            continue;
        }
        let cat = ns.site.cat();
        for a in cat.objects() {
            for b in cat.objects() {
                for comp in arch_components(&ns.site, a, b, &Caps::default()).unwrap() {
                    let n = comp
                        .iter()
                        .filter(|ar| matches!(ar.spans.as_slice(), [s] if s.left == cat.id(a)))
                        .count();
                    assert_eq!(n, 1, "{} {a}->{b}", ns.name);
                }
            }
        }
    }
}

#[test]
fn diamond_reductive_bottom_to_top_has_one_component() {
    let site = Site::reductive(examples::diamond()).unwrap();
    let cat = site.cat();
    let comps = arch_components(&site, o(cat, "0"), o(cat, "1"), &Caps::default()).unwrap();
    assert_eq!(comps.len(), 1);
}

#[test]
fn precomposition_by_covering_maps_stays_in_component() {
    for ns in examples::comparison_sites() {
        let site = &ns.site;
        if !site.is_principal() {
            continue;
        }
        let cat = site.cat();
        for a in cat.objects() {
            for b in cat.objects() {
                let comps = arch_components(site, a, b, &Caps::default()).unwrap();
                if comps.len() == 1 && comps[0].len() == 1 {
                    continue;
                }
                let find = |ar: &Arch| comps.iter().position(|c| c.contains(ar));
                for comp in &comps {
                    for ar in comp {
                        let Some(s) = ar.spans.first() else { continue };
                        for x in cat.into_obj(s.apex) {
                            let pre = single(a, b, cat.dom(x), cat.compose(s.left, x), cat.compose(s.right, x));
                            if let Some(i) = find(&pre) {
                                assert_eq!(Some(i), find(ar), "{}", ns.name);
                            }
                        }
                    }
                }
            }
        }
    }
}

fn component_of(rc: &RepresentableCategory, ar: &Arch) -> Mor {
    rc.morphism_of(ar).expect("arch is enumerated")
}

#[test]
fn composition_is_independent_of_representatives_and_squares() {
    let caps = Caps::default();
    for ns in examples::comparison_sites() {
        let site = &ns.site;
        let rc = representable_category(site, &caps).unwrap();
        let rcat = &rc.category;
        for g in rcat.morphisms() {
            for f in rcat.morphisms() {
                let Some(gf) = rcat.try_compose(g, f) else { continue };
                for second in &rc.components[g] {
                    for first in &rc.components[f] {
                        for cand in composite_candidates(site, second, first).unwrap() {
                            assert_eq!(component_of(&rc, &cand), gf, "{}", ns.name);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn composition_with_identity_and_plain_maps() {
    let caps = Caps::default();
    for ns in examples::comparison_sites() {
        let site = &ns.site;
        if !site.is_principal() {
            continue;
        }
        let cat = site.cat();
        let rc = representable_category(site, &caps).unwrap();
        for (i, ar) in rc.arches.iter().enumerate() {
            let (a, b) = (ar.source, ar.target);
            let left = compose_arches(site, &Arch::identity(cat, b), ar).unwrap();
            let right = compose_arches(site, ar, &Arch::identity(cat, a)).unwrap();
            assert_eq!(component_of(&rc, &left), i);
            assert_eq!(component_of(&rc, &right), i);
            if site.is_empty_covered(a) {
                continue;
            }
            let s = ar.spans[0];
            for f in cat.out_of(b) {
                let plain = single(b, cat.cod(f), b, cat.id(b), f);
                let comp = compose_arches(site, &plain, ar).unwrap();
                let direct = single(a, cat.cod(f), s.apex, s.left, cat.compose(f, s.right));
                assert_eq!(component_of(&rc, &comp), component_of(&rc, &direct), "{}", ns.name);
            }
        }
    }
}

#[test]
fn representable_categories_are_associative() {
    for ns in examples::comparison_sites() {
        let rc = representable_category(&ns.site, &Caps::default()).unwrap();
        let c = &rc.category;
        for h in c.morphisms() {
            for g in c.morphisms() {
                let Some(hg) = c.try_compose(h, g) else { continue };
                for f in c.into_obj(c.dom(g)) {
                    assert_eq!(c.compose(hg, f), c.compose(h, c.compose(g, f)), "{}", ns.name);
                }
            }
        }
    }
}

#[test]
fn trivial_topology_reproduces_the_category() {
    for cat in [
        examples::terminal(),
        examples::parallel_pair(),
        examples::diamond(),
        examples::right_zero_monoid(),
        examples::split_idempotent(),
        examples::tworel_c(),
    ] {
        let rc = representable_category(&Site::trivial(cat.clone()), &Caps::default()).unwrap();
        assert!(find_isomorphism(&rc.category, &cat).is_some());
    }
}

#[test]
fn subcanonical_sites_reproduce_the_category() {
    for ns in examples::comparison_sites() {
        if !ns.site.is_subcanonical() {
            continue;
        }
        let rc = representable_category(&ns.site, &Caps::default()).unwrap();
        assert!(find_equivalence(&rc.category, ns.site.cat()).is_some(), "{}", ns.name);
    }
}

#[test]
fn tworel_reductive_representables_stay_tworel() {
    // The reductive site on tworel C is subcanonical, so its representable
    // sheaves reproduce C itself rather than the six-object category.
    let rc = representable_category(&Site::reductive(examples::tworel_c()).unwrap(), &Caps::default()).unwrap();
    assert!(find_equivalence(&rc.category, &examples::tworel_c()).is_some());
    assert!(find_equivalence(&rc.category, &examples::tworel_c_prime()).is_none());
}

#[test]
fn arch_components_agree_with_sheaf_morphisms_on_corpus() {
    for ns in examples::comparison_sites() {
        let cat = ns.site.cat();
        assert!(cat.num_objects() <= 6 && cat.num_morphisms() <= 20, "{}", ns.name);
        let report = compare_arches_with_sheaves(&ns.site, &Caps::default()).unwrap();
        assert!(report.agrees(), "{}: {:?} {:?}", ns.name, report.bijective, report.functorial);
    }
}

#[test]
fn feet_mismatch_is_an_error() {
    let site = Site::trivial(examples::diamond());
    let cat = site.cat();
    let a = Arch::identity(cat, o(cat, "a"));
    let b = Arch::identity(cat, o(cat, "b"));
    assert!(matches!(compose_arches(&site, &a, &b), Err(ArchError::FeetMismatch(..))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn arches_match_sheaves_on_random_split_epi_sites(cat in common::arb_concrete()) {
        let site = examples::split_epi_site(cat);
        let report = compare_arches_with_sheaves(&site, &Caps::default()).unwrap();
        prop_assert!(report.agrees());
    }

    #[test]
    fn arches_match_sheaves_on_random_coalescent_posets(p in common::arb_poset(4)) {
        if let Ok(site) = Site::coalescent(p.to_category(), &Caps::default()) {
            let report = compare_arches_with_sheaves(&site, &Caps::default()).unwrap();
            prop_assert!(report.agrees());
        }
    }
}
