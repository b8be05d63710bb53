use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{json, Value};
use supercompact_cli::corpus;

struct Run {
    stdout: String,
    stderr: String,
    code: i32,
}

fn bin(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_supercompact")).args(args).output().unwrap();
    Run {
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
        code: out.status.code().unwrap(),
    }
}

fn scratch(test: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("supercompact-cli-{}-{test}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

/// Writes the input document of a corpus entry and returns its path.
fn fixture(dir: &Path, name: &str) -> String {
    let e = corpus::bundled().into_iter().find(|e| e.entry.name == name).unwrap();
    write(dir, name, &e.entry.input)
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let p = dir.join(format!("{name}.json"));
    std::fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn classify_diamond() {
    let d = scratch("classify");
    let r = bin(&["classify", &fixture(&d, "diamond")]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    for row in ["reductive: true", "effectual: true", "locallyRegular: true", "regular: true"] {
        assert!(r.stdout.lines().any(|l| l == row), "{row} in\n{}", r.stdout);
    }
    let j = bin(&["--json", "classify", &fixture(&d, "diamond")]);
    let v: Value = serde_json::from_str(&j.stdout).unwrap();
    assert!(v.is_object());
}

#[test]
fn arch_homs_on_parallel_pair() {
    let d = scratch("arch");
    let f = fixture(&d, "parallel_pair");
    let r = bin(&["arch-homs", "A", "B", &f]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.starts_with("A -> B: 2 arch components"), "{}", r.stdout);
    let j: Value = serde_json::from_str(&bin(&["--json", "arch-homs", "A", "B", &f]).stdout).unwrap();
    assert_eq!(j["count"], 2);
    let s = bin(&["sheaf-homs", "A", "B", &f]);
    assert!(s.stdout.contains("2 sheaf morphisms"));
    let bad = bin(&["arch-homs", "A", "Z", &f]);
    assert_eq!(bad.code, 2);
}

#[test]
fn supercompact_category_of_parallel_pair() {
    let d = scratch("sc");
    let r = bin(&["supercompact-category", &fixture(&d, "parallel_pair")]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.starts_with("3 supercompact objects"), "{}", r.stdout);
    let c = bin(&["--coproduct-bound", "1", "supercompact-category", "--compact", &fixture(&d, "terminal")]);
    assert_eq!(c.code, 0, "{}", c.stderr);
}

#[test]
fn missing_composite_exits_with_input_error() {
    let d = scratch("missing");
    let e = corpus::bundled().into_iter().find(|e| e.entry.name == "parallel_pair").unwrap();
    let mut v = e.entry.input.clone();
    v["composition"].as_array_mut().unwrap().pop();
    let r = bin(&["validate", &write(&d, "broken", &v)]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("missing composite at ("), "{}", r.stderr);
    assert!(r.stdout.is_empty());
}

#[test]
fn input_errors_exit_with_two() {
    let d = scratch("input");
    assert_eq!(bin(&["classify", "/nonexistent/x.json"]).code, 2);
    assert_eq!(bin(&["frobnicate"]).code, 2);
    let schema = bin(&["validate", &write(&d, "schema", &json!({"objects": "A"}))]);
    assert_eq!(schema.code, 2);
    assert!(schema.stderr.contains("$.objects"), "{}", schema.stderr);
    assert_eq!(bin(&["spectrum", &fixture(&d, "diamond")]).code, 2);
    assert_eq!(bin(&["stone-roundtrip", &fixture(&d, "njsl5")]).code, 2);
    assert_eq!(bin(&["--help"]).code, 0);
}

#[test]
fn tight_caps_exit_with_three() {
    let d = scratch("caps");
    let r = bin(&["--funnel-cap", "1", "classify", &fixture(&d, "tworel_c")]);
    assert_eq!(r.code, 3);
    assert!(r.stdout.contains("inconclusive"));
}

#[test]
fn morphism_check_exit_codes() {
    let d = scratch("morphism");
    let terminal = fixture(&d, "terminal");
    let to_point = |cat: &str| {
        let e = corpus::bundled().into_iter().find(|e| e.entry.name == cat).unwrap();
        let objs: serde_json::Map<String, Value> =
            e.entry.input["objects"].as_array().unwrap().iter().map(|o| (o.as_str().unwrap().into(), json!("*"))).collect();
        let mors: serde_json::Map<String, Value> = e.entry.input["morphisms"]
            .as_array()
            .unwrap()
            .iter()
            .map(|m| (m["name"].as_str().unwrap().into(), json!("1_*")))
            .collect();
        write(&d, &format!("{cat}_to_point"), &json!({"on_objects": objs, "on_morphisms": mors}))
    };
    let ok = bin(&["morphism-check", &to_point("diamond"), &fixture(&d, "diamond"), &terminal]);
    assert_eq!(ok.code, 0, "{}", ok.stdout);
    assert!(ok.stdout.contains("morphism of sites: true"));
    let no = bin(&["morphism-check", &to_point("vee"), &fixture(&d, "vee"), &terminal]);
    assert_eq!(no.code, 1, "{}", no.stdout);
    assert!(no.stdout.contains("morphism of sites: false"));
    let ident = bin(&["morphism-check", &to_point("terminal"), &terminal]);
    assert_eq!(ident.code, 0);
    let not_functor = bin(&["morphism-check", &terminal, &terminal]);
    assert_eq!(not_functor.code, 2);
}

#[test]
fn duality_commands() {
    let d = scratch("duality");
    let s = bin(&["spectrum", &fixture(&d, "diamond_jsl")]);
    assert_eq!(s.code, 0);
    assert!(s.stdout.contains("ideals: 4") && s.stdout.contains("prime filters: 2"), "{}", s.stdout);
    let n = bin(&["spectrum", &fixture(&d, "njsl5")]);
    assert!(n.stdout.contains("distributive: false") && n.stdout.contains("[c, a, b]"), "{}", n.stdout);
    assert_eq!(bin(&["stone-roundtrip", &fixture(&d, "diamond_jsl")]).code, 0);
    let a = bin(&["alexandroff-roundtrip", &fixture(&d, "diamond_poset")]);
    assert_eq!(a.code, 0);
    assert!(a.stdout.contains("6 opens"));
}

#[test]
fn enumerate_counts() {
    let count = |kind: &str, n: &str| bin(&["enumerate", "--kind", kind, "--max-size", n]).stdout.lines().count();
    assert_eq!(count("poset", "5"), 1 + 1 + 2 + 5 + 16 + 63);
    assert_eq!(count("jsl", "5"), 1 + 1 + 2 + 5 + 1);
    assert_eq!(count("distributive-jsl", "5"), 1 + 1 + 2 + 3 + 1);
    let j: Value = serde_json::from_str(&bin(&["--json", "enumerate", "--kind", "poset", "--max-size", "3"]).stdout).unwrap();
    assert_eq!(j.as_array().unwrap().len(), 9);
    for line in bin(&["enumerate", "--kind", "jsl", "--max-size", "4"]).stdout.lines() {
        let doc = supercompact_cli::io::parse(line).unwrap();
        assert_eq!(doc.kind(), "semilattice");
    }
}

#[test]
fn quotient_site_emits_a_site() {
    let d = scratch("quotient");
    let r = bin(&["quotient-site", &fixture(&d, "congruence_t")]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.starts_with("1 nontrivial classes"), "{}", r.stdout);
}

#[test]
fn corpus_command() {
    let r = bin(&["corpus", "--parallel", "4"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert!(r.stdout.lines().last().unwrap().starts_with("summary:"));
    let d = scratch("corpus");
    let bad = json!({"name": "bad", "input": {"elements": ["x"], "leq": []},
        "expect": [{"check": "opens", "count": 5, "tag": "TRIVIAL"}]});
    write(&d, "bad", &bad);
    let f = bin(&["corpus", "--dir", d.to_str().unwrap()]);
    assert_eq!(f.code, 1);
    assert!(f.stdout.contains("FAIL bad"));
}
