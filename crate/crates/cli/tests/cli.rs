use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::{Command, Output};

use proptest::prelude::*;
use varseq::parse::{parse_ast, Ast, Scope};
use varseq::render::{expr_latex, expr_plain};
use varseq_core::expr::{BundleSpec, ConstFamily, Expr, IndexSymmetry, MultiIndex};
use varseq_core::random::{FixtureRng, Shape};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn varseq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_varseq"))
        .args(args)
        .env_remove("VARSEQ_SEED")
        .output()
        .expect("binary runs")
}

fn temp_problem(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("varseq-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn constants() -> BTreeMap<String, ConstFamily> {
    let mut c = BTreeMap::new();
    c.insert("eta".into(), ConstFamily::opaque("eta", 2, IndexSymmetry::Symmetric));
    c.insert("c".into(), ConstFamily::opaque("c", 3, IndexSymmetry::AntisymmetricLastTwo));
    c.insert("k".into(), ConstFamily::opaque("k", 0, IndexSymmetry::None));
    c
}

fn random_expr(b: &BundleSpec, c: &BTreeMap<String, ConstFamily>, seed: u64) -> Expr {
    let mut rng = FixtureRng::new(seed);
    let mut vars = FixtureRng::jet_variables(b, 2);
    for a in 0..b.aux_names().len() {
        vars.push(Expr::aux(a, MultiIndex::empty()));
        vars.push(Expr::aux(a, MultiIndex::new([0, b.n() - 1])));
    }
    vars.push(c["eta"].get(&[2, 1]).unwrap());
    vars.push(c["c"].get(&[1, 3, 2]).unwrap());
    vars.push(c["k"].get(&[]).unwrap());
    let shape = Shape {
        terms: 4,
        max_degree: 3,
        max_coeff: 7,
    };
    let num = rng.polynomial(&vars, shape);
    let d = rng.gen_range(1, 6) as i64;
    num.scale(&varseq_core::expr::rat(1, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rendered_expressions_parse_back(seed in any::<u64>(), n in 1usize..=3, m in 1usize..=2) {
        let b = BundleSpec::new(n, m, 4).unwrap().with_aux(vec!["f".into()]).unwrap();
        let c = constants();
        let e = random_expr(&b, &c, seed);
        let text = expr_plain(&b, &e);
        let back = Scope::new(&b, &c).parse(&text).unwrap();
        prop_assert_eq!(back, e);
    }

    #[test]
    fn bracket_names_parse_back_for_large_bases(seed in any::<u64>()) {
        let b = BundleSpec::new(11, 1, 3).unwrap();
        let c = constants();
        let e = random_expr(&b, &c, seed);
        let text = expr_plain(&b, &e);
        let back = Scope::new(&b, &c).parse(&text).unwrap();
        prop_assert_eq!(back, e);
        prop_assert!(!expr_latex(&b, &Expr::jet(0, MultiIndex::new([9, 10]))).is_empty());
    }

    #[test]
    fn ast_json_round_trip(seed in any::<u64>()) {
        let b = BundleSpec::new(2, 2, 4).unwrap();
        let c = constants();
        let e = random_expr(&b, &c, seed);
        let ast = parse_ast(&expr_plain(&b, &e)).unwrap();
        let json = serde_json::to_string(&ast).unwrap();
        let back: Ast = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(Scope::new(&b, &c).lower(&back).unwrap(), e);
    }
}

#[test]
fn free_particle_euler_lagrange() {
    let out = varseq(&["el", fixture("free_particle.toml").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "E[y1] = -y1_11\n");
}

#[test]
fn json_items_lower_to_the_plain_expressions() {
    let out = varseq(&["jacobi", "--format", "json", fixture("free_particle.toml").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["schema_version"], 1);
    let p = varseq::load(&fixture("free_particle.toml")).unwrap();
    let scope = Scope::new(&p.bundle, &p.constants);
    let mut seen = 0;
    for item in doc["items"].as_array().unwrap() {
        if item["kind"] != "expr" {
            continue;
        }
        let ast: Ast = serde_json::from_value(item["value"]["ast"].clone()).unwrap();
        let plain = item["value"]["plain"].as_str().unwrap();
        assert_eq!(scope.lower(&ast).unwrap(), scope.parse(plain).unwrap());
        seen += 1;
    }
    assert!(seen > 0);
}

#[test]
fn exit_code_two_on_parse_errors() {
    let p = temp_problem("bad_expr.toml", "lagrangian = \"y1_1 / y1\"\n[bundle]\nn = 1\nm = 1\n");
    let out = varseq(&["el", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains(":1:20:") && err.contains("non-constant"), "{err}");

    let p = temp_problem("bad_toml.toml", "lagrangian = [\n");
    assert_eq!(varseq(&["el", p.to_str().unwrap()]).status.code(), Some(2));

    let p = temp_problem("undeclared.toml", "lagrangian = \"z_1^2\"\n[bundle]\nn = 1\nm = 1\n");
    assert_eq!(varseq(&["el", p.to_str().unwrap()]).status.code(), Some(2));

    let p = temp_problem("nonpoly.toml", "lagrangian = \"sqrt(y1_1)\"\n[bundle]\nn = 1\nm = 1\n");
    assert_eq!(varseq(&["el", p.to_str().unwrap()]).status.code(), Some(2));

    let p = temp_problem("overflow.toml", "lagrangian = \"y1_111\"\n[bundle]\nn = 1\nm = 1\norder = 2\n");
    assert_eq!(varseq(&["el", p.to_str().unwrap()]).status.code(), Some(2));

    let missing = fixture("no_such_file.toml");
    assert_eq!(varseq(&["el", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn exit_code_one_on_derivation_errors() {
    // The third variation of a first-order Lagrangian needs order 15.
    let f = fixture("jacobivar.toml");
    let out = varseq(&["variation", "--field", "J", "--order", "3", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("order"));
}

#[test]
fn failing_identity_exits_one() {
    let p = temp_problem(
        "tight.toml",
        "lagrangian = \"1/2*y1_1^2\"\n[bundle]\nn = 1\nm = 1\norder = 4\n[fields.S]\nfibre = [\"1\"]\n",
    );
    let out = varseq(&["check", "--suite", "variation", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("FAIL second_variation[S,S]"), "{text}");
}

#[test]
fn output_is_deterministic_and_seeded() {
    let p = temp_problem("seeded.toml", "lagrangian = \"y1_1^2 + x1*y1\"\n[bundle]\nn = 1\nm = 1\norder = 7\n");
    let path = p.to_str().unwrap();
    let a = varseq(&["check", "--seed", "5", "--format", "json", path]);
    let b = varseq(&["check", "--seed", "5", "--format", "json", path]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);

    let c = varseq(&["check", "--seed", "6", "--format", "json", path]);
    let doc: serde_json::Value = serde_json::from_slice(&c.stdout).unwrap();
    assert_eq!(doc["seed"], 6);

    let env = Command::new(env!("CARGO_BIN_EXE_varseq"))
        .args(["check", "--seed", "6", "--format", "json", path])
        .env("VARSEQ_SEED", "5")
        .output()
        .unwrap();
    assert_eq!(env.stdout, a.stdout);
}

#[test]
fn every_fixture_passes_its_checks() {
    for f in ["free_particle.toml", "shift_invariant.toml", "jacobivar.toml", "maxwell.toml", "yang_mills_su2.toml"] {
        let out = varseq(&["check", "--suite", "all", fixture(f).to_str().unwrap()]);
        let text = String::from_utf8(out.stdout).unwrap();
        assert_eq!(out.status.code(), Some(0), "{f}:\n{text}");
        assert!(!text.contains("FAIL"));
    }
    for f in ["maxwell.toml", "yang_mills_su2.toml"] {
        let out = varseq(&["ym", fixture(f).to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{f}");
    }
}

#[test]
fn usage_errors() {
    let f = fixture("free_particle.toml");
    let out = varseq(&["noether", "--field", "Nope", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = varseq(&["ym", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = varseq(&["variation", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
