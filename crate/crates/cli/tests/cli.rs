use std::process::{Command, Output};

use fieldunits::gf::FieldSpec;
use fieldunits::hahn::HahnSeries;
use fieldunits::norm::SimpleExtension;
use fieldunits::perfect::{DyadicRatFunc, PcDecomposition};
use fieldunits::ratfunc::{recompose, RatFunc, UnitDecomposition};
use fieldunits::valued::GroupKind;
use serde_json::{json, Value};

const EXT2: &str = "GF(2)(t)[y]/(y^2+y+t)";

fn fieldunits(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fieldunits")).args(args).output().expect("binary runs")
}

fn json_of(args: &[&str]) -> (Value, i32) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = fieldunits(&all);
    let stdout = String::from_utf8(out.stdout).expect("utf-8");
    let v = serde_json::from_str(stdout.trim()).unwrap_or_else(|e| panic!("{args:?}: {e}: {stdout:?}"));
    (v, out.status.code().expect("exit code"))
}

fn field(s: &str) -> FieldSpec {
    s.parse().unwrap()
}

#[test]
fn decompose_example() {
    let (v, code) = json_of(&["decompose", "--field", "GF(2)", "x/(x+1)"]);
    assert_eq!(code, 0);
    assert_eq!(
        v,
        json!({"constant":"1","factors":[{"poly":"x","exp":1},{"poly":"x+1","exp":-1}]})
    );
}

#[test]
fn padic_example() {
    assert_eq!(json_of(&["padic", "-p", "3", "1/9"]), (json!(-2), 0));
    let out = fieldunits(&["padic", "-p", "3", "1/9"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "-2");
}

#[test]
fn norm_example() {
    assert_eq!(json_of(&["norm", "--ext", EXT2, "y"]), (json!("t"), 0));
}

#[test]
fn classify_scan_small_bounds() {
    let qs = |bound: &str| -> Vec<u64> {
        let (v, code) = json_of(&["classify-scan", "--bound", bound]);
        assert_eq!(code, 0);
        v.as_array()
            .unwrap()
            .iter()
            .map(|e| {
                assert_eq!(e["oracle_indecomposable"], json!(true));
                e["q"].as_u64().unwrap()
            })
            .collect()
    };
    assert_eq!(qs("10"), [2, 3, 4, 5, 8, 9]);
    assert_eq!(qs("2"), [2]);
}

#[test]
fn classify_scan_bound_out_of_range() {
    let (v, code) = json_of(&["classify-scan", "--bound", "1"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "domain");
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| fieldunits(args).status.code().unwrap();
    assert_eq!(code(&["factor", "x^3+x+1"]), 0);
    assert_eq!(code(&["padic", "-p", "4", "12"]), 1);
    assert_eq!(code(&["padic", "-p", "3", "0"]), 1);
    assert_eq!(code(&["axioms", "degree", "--trials", "10"]), 1);
    assert_eq!(code(&["factor", "x^^2"]), 2);
    assert_eq!(code(&["decompose", "--field", "GF(6)", "x"]), 1);
    assert_eq!(code(&["decompose", "--field", "GF(two)", "x"]), 2);
    assert_eq!(code(&["norm", "y"]), 2);
    assert_eq!(code(&["no-such-command"]), 2);
    assert_eq!(code(&["padic", "3"]), 2);
}

#[test]
fn error_documents_are_json() {
    let (v, code) = json_of(&["factor", "x+"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "parse");
    assert!(!v["error"]["message"].as_str().unwrap().is_empty());
}

#[test]
fn axioms_reports() {
    let (v, code) = json_of(&["axioms", "degree"]);
    assert_eq!(code, 1);
    assert_eq!(v, json!({"probe":"degree","result":"counterexample","x":"x","y":"x+1","axiom":"ultrametric"}));
    for probe in ["padic:2", "poly:x^2+x+1", "hahn:Z[1/2]"] {
        let (v, code) = json_of(&["axioms", probe, "--trials", "200"]);
        assert_eq!(code, 0, "{probe}");
        assert_eq!(v["result"], "pass");
    }
}

#[test]
fn selftest_is_deterministic() {
    let a = fieldunits(&["--json", "--seed", "11", "selftest"]);
    let b = fieldunits(&["--json", "--seed", "11", "selftest"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["seed"], 11);
    assert_eq!(v["failed"], 0);
    assert_eq!(v["suites"].as_array().unwrap().len(), 10);
}

#[test]
fn factor_round_trips() {
    let f9 = field("GF(3^2)");
    let (v, code) = json_of(&["factor", "--field", "GF(3^2)", "x^6+2*x^3+x"]);
    assert_eq!(code, 0);
    let mut prod = fieldunits::gf::Poly::parse(v["unit"].as_str().unwrap(), &f9, 'x').unwrap();
    for f in v["factors"].as_array().unwrap() {
        let p = fieldunits::gf::Poly::parse(f["poly"].as_str().unwrap(), &f9, 'x').unwrap();
        assert!(p.is_irreducible().unwrap());
        for _ in 0..f["exp"].as_u64().unwrap() {
            prod = &prod * &p;
        }
    }
    assert_eq!(prod, fieldunits::gf::Poly::parse("x^6+2*x^3+x", &f9, 'x').unwrap());
}

#[test]
fn decompose_round_trips() {
    for (fs, expr) in [("GF(3)", "(x^2+1)^2/(x^3+2*x)"), ("GF(2)", "(x^5+x+1)/x^4"), ("GF(3^2)", "a*x^2/(x+a)")] {
        let f = field(fs);
        let (v, code) = json_of(&["decompose", "--field", fs, expr]);
        assert_eq!(code, 0);
        let d = UnitDecomposition::from_json(&v, &f, 'x').unwrap();
        assert_eq!(recompose(&d), RatFunc::parse(expr, &f, 'x').unwrap(), "{expr}");
    }
}

#[test]
fn hahn_round_trips() {
    let f3 = field("GF(3)");
    let (v, code) = json_of(&["--field", "GF(3)", "--terms", "5", "hahn", "--group", "Z[1/2]", "x^(-1/2)+2+x^(3/4)", "1+x"]);
    assert_eq!(code, 0);
    let g: GroupKind = v["group"].as_str().unwrap().parse().unwrap();
    assert_eq!(g, GroupKind::Dyadic);
    let parse = |k: &str| HahnSeries::parse(v[k].as_str().unwrap(), &f3, g).unwrap();
    let (a, b) = (parse("series"), parse("other"));
    assert_eq!(parse("sum"), a.try_add(&b).unwrap());
    assert_eq!(parse("product"), a.try_mul(&b).unwrap());
    assert_eq!(parse("inverse"), a.inverse(5).unwrap());
    assert_eq!(v["valuation"], "-1/2");
    let unit = parse("unit");
    assert_eq!(unit.valuation().unwrap().to_string(), "0");
}

#[test]
fn pc_round_trips() {
    let (v, code) = json_of(&["pc", "(t^(3/2)+t^(1/2))/(t+1)^(1/4)"]);
    assert_eq!(code, 0);
    let q = DyadicRatFunc::parse(v["value"].as_str().unwrap()).unwrap();
    assert_eq!(v["level"], 2);
    assert_eq!(DyadicRatFunc::parse(v["frobenius"].as_str().unwrap()).unwrap(), q.frobenius());
    assert_eq!(DyadicRatFunc::parse(v["frobenius_inv"].as_str().unwrap()).unwrap(), q.frobenius_inv());
    let d = PcDecomposition::from_json(&v["decomposition"]).unwrap();
    assert_eq!(fieldunits::perfect::pc_recompose(&d), q);
}

#[test]
fn norm_round_trips() {
    let ext = SimpleExtension::parse("GF(2)(t)[y]/(y^3+y+t)").unwrap();
    for elem in ["y", "y+1", "t*y^2+1/(t+1)"] {
        let (v, code) = json_of(&["norm", "--ext", "GF(2)(t)[y]/(y^3+y+t)", elem]);
        assert_eq!(code, 0);
        let n = RatFunc::parse(v.as_str().unwrap(), &field("GF(2)"), 't').unwrap();
        assert_eq!(n, ext.parse_elem(elem).unwrap().norm().unwrap(), "{elem}");
    }
}

#[test]
fn rank_of_dependent_elements() {
    assert_eq!(json_of(&["rank", "x", "x+1", "x^2/(x+1)^3"]), (json!(2), 0));
    assert_eq!(json_of(&["--field", "GF(3)", "rank", "2", "x^2+1"]), (json!(1), 0));
}

#[test]
fn text_mode_renders() {
    let out = fieldunits(&["classify", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("decomposable"));
    let out = fieldunits(&["padic", "-p", "4", "12"]);
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}
