use std::collections::BTreeSet;

use supercompact::duality::{chain2_jsl, diamond_jsl, njsl5, FinPoset};
use supercompact::examples;
use supercompact::site::Site;
use supercompact::verdict::Caps;
use supercompact_cli::commands::Status;
use supercompact_cli::corpus::{self, Provenance, BUNDLED};
use supercompact_cli::io::{self, Document, InputError};

fn document(name: &str) -> Document {
    corpus::bundled().into_iter().find(|e| e.entry.name == name).unwrap_or_else(|| panic!("{name}")).document
}

#[test]
fn bundled_list_matches_directory() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/corpus");
    let on_disk: BTreeSet<String> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".json"))
        .collect();
    let listed: BTreeSet<String> = BUNDLED.iter().map(|(f, _)| f.to_string()).collect();
    assert_eq!(on_disk, listed);
    for e in corpus::bundled() {
        assert!(listed.contains(&format!("{}.json", e.entry.name)));
    }
    assert_eq!(corpus::load_dir(std::path::Path::new(dir)).unwrap().len(), BUNDLED.len());
}

#[test]
fn corpus_inputs_match_the_catalog() {
    let caps = Caps::default();
    let cats = [
        ("terminal", examples::terminal()),
        ("parallel_pair", examples::parallel_pair()),
        ("coequalizer", examples::coequalizer_diagram()),
        ("diamond", examples::diamond()),
        ("chain3", examples::chain(3)),
        ("vee", examples::vee()),
        ("antichain2", FinPoset::antichain(2).to_category()),
        ("tworel_c", examples::tworel_c()),
        ("tworel_c_prime", examples::tworel_c_prime()),
    ];
    for (name, cat) in cats {
        assert_eq!(document(name), Document::Category(cat), "{name}");
    }
    let sites = [
        ("terminal_trivial", Site::trivial(examples::terminal())),
        ("parallel_pair_trivial", Site::trivial(examples::parallel_pair())),
        ("coequalizer_reductive", Site::reductive(examples::coequalizer_diagram()).unwrap()),
        ("diamond_trivial", Site::trivial(examples::diamond())),
        ("diamond_augmented_reductive", Site::augmented_reductive(examples::diamond()).unwrap()),
        ("diamond_coalescent", Site::coalescent(examples::diamond(), &caps).unwrap()),
        ("chain3_coalescent", Site::coalescent(examples::chain(3), &caps).unwrap()),
        ("tworel_c_reductive", Site::reductive(examples::tworel_c()).unwrap()),
        ("congruence_t", examples::congruence_site()),
        ("idempotent_monoid_all", examples::all_morphisms_site(examples::idempotent_monoid())),
        ("right_zero_monoid_all", examples::all_morphisms_site(examples::right_zero_monoid())),
        ("split_idempotent_split_epis", examples::split_epi_site(examples::split_idempotent())),
        ("vee_join_cover", examples::vee_site()),
        ("chain2_augmented_reductive", Site::augmented_reductive(examples::chain(2)).unwrap()),
    ];
    for (name, site) in sites {
        assert_eq!(document(name), Document::Site(site), "{name}");
    }
    assert_eq!(document("diamond_poset"), Document::Poset(diamond_jsl().poset().clone()));
    assert_eq!(document("diamond_jsl"), Document::Semilattice(diamond_jsl()));
    assert_eq!(document("chain2_jsl"), Document::Semilattice(chain2_jsl()));
    assert_eq!(document("njsl5"), Document::Semilattice(njsl5()));
}

#[test]
fn corpus_inputs_are_in_canonical_form() {
    for e in corpus::bundled() {
        assert_eq!(io::document_value(&e.document), e.entry.input, "{}", e.entry.name);
    }
}

#[test]
fn every_expectation_is_labelled() {
    let mut tags = BTreeSet::new();
    for e in corpus::bundled() {
        assert!(!e.entry.expect.is_empty(), "{}", e.entry.name);
        for ex in &e.entry.expect {
            tags.insert(ex.tag.label());
            if ex.tag == Provenance::Paper {
                assert!(ex.citation.as_deref().is_some_and(|c| !c.is_empty()));
            }
        }
    }
    assert_eq!(tags.len(), 3);
}

#[test]
fn uncited_source_expectation_is_rejected() {
    let text = r#"{"name": "t", "input": {"elements": [], "leq": []},
        "expect": [{"check": "opens", "count": 1, "tag": "PAPER"}]}"#;
    let err = corpus::load(&[("t.json".into(), text.into())]).unwrap_err();
    assert!(matches!(err, InputError::Schema { .. }), "{err}");
    let ok = text.replace(r#""PAPER""#, r#""TRIVIAL""#);
    assert_eq!(corpus::load(&[("t.json".into(), ok.clone())]).unwrap().len(), 1);
    assert!(corpus::load(&[("a.json".into(), ok.clone()), ("b.json".into(), ok)]).is_err());
}

#[test]
fn failing_expectation_fails_the_report() {
    let text = r#"{"name": "t", "input": {"elements": ["x"], "leq": []},
        "expect": [{"check": "opens", "count": 3, "tag": "TRIVIAL"}]}"#;
    let entries = corpus::load(&[("t.json".into(), text.into())]).unwrap();
    let report = corpus::run(&entries, &Caps::default(), 1).unwrap();
    assert_eq!((report.passed, report.failed), (0, 1));
    assert_eq!(report.status(), Status::Fail);
    assert!(report.results[0].detail.contains("expected 3, got 2"));
}

#[test]
fn tight_caps_make_the_report_inconclusive() {
    let text = r#"{"name": "t", "input": {"elements": ["x"], "leq": []},
        "expect": [{"check": "opens", "count": 2, "tag": "TRIVIAL"}]}"#;
    let mut files = vec![("t.json".to_string(), text.to_string())];
    files.extend(BUNDLED.iter().filter(|(f, _)| *f == "tworel_c.json").map(|(f, t)| (f.to_string(), t.to_string())));
    let entries = corpus::load(&files).unwrap();
    let report = corpus::run(&entries, &Caps { funnel_cap: 1, ..Caps::default() }, 2).unwrap();
    assert_eq!(report.failed, 0);
    assert!(report.inconclusive > 0);
    assert_eq!(report.status(), Status::Inconclusive);
}

#[test]
fn bundled_corpus_passes_and_is_deterministic() {
    let entries = corpus::bundled();
    let one = corpus::run(&entries, &Caps::default(), 1).unwrap();
    assert_eq!(one.failed, 0, "{}", one.text());
    assert_eq!(one.inconclusive, 0, "{}", one.text());
    assert_eq!(one.status(), Status::Pass);
    for threads in [2, 8] {
        let other = corpus::run(&entries, &Caps::default(), threads).unwrap();
        assert_eq!(other.text(), one.text());
        assert_eq!(serde_json::to_string(&other).unwrap(), serde_json::to_string(&one).unwrap());
    }
}
