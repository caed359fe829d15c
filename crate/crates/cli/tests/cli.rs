use std::fs;
use std::path::PathBuf;

use serde_json::{json, Value};
use so8_triality::exact::Rational;
use so8_triality::invariants::{block_model, invariant_vector, sigma_transform_invariants};
use so8_triality::so8::Sampler;
use so8_triality_cli::{run, EXIT_FAILED, EXIT_OK, EXIT_USAGE};
use tempfile::TempDir;

fn triality(args: &[&str]) -> so8_triality_cli::Outcome {
    run(std::iter::once("triality").chain(args.iter().copied()))
}

fn write(dir: &TempDir, name: &str, v: &Value) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, v.to_string()).unwrap();
    p
}

fn parse(out: &so8_triality_cli::Outcome) -> Value {
    serde_json::from_str(&out.stdout).unwrap()
}

fn zero_rows() -> Vec<Vec<i64>> {
    vec![vec![0; 8]; 8]
}

#[test]
fn eval_zero_matrix() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "zero.json", &json!({ "matrix": zero_rows() }));
    let out = triality(&["eval", "--json", "--input", p.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let v = parse(&out);
    for k in ["p1", "p2", "p3", "pf", "e1", "e2", "e3", "e4"] {
        assert_eq!(v[k], "0", "{k}");
    }
}

#[test]
fn eval_block_model() {
    let dir = TempDir::new().unwrap();
    let mut rows = zero_rows();
    for (k, l) in [1, 2, 3, 4].into_iter().enumerate() {
        rows[2 * k][2 * k + 1] = l;
        rows[2 * k + 1][2 * k] = -l;
    }
    let p = write(&dir, "block.json", &json!({ "matrix": rows }));
    let out = triality(&["eval", "--json", "--input", p.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let v = parse(&out);
    assert_eq!(v["pf"], "24");
    assert_eq!(
        [&v["e1"], &v["e2"], &v["e3"], &v["e4"]],
        ["30", "273", "820", "576"]
    );
    assert_eq!(v["p1"], "-60");
}

#[test]
fn eval_text_output() {
    let dir = TempDir::new().unwrap();
    let mut coeffs = vec!["0"; 28];
    coeffs[0] = "1/2";
    let p = write(&dir, "c.json", &json!({ "coeffs": coeffs }));
    let out = triality(&["eval", "--input", p.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("p1 = -1/2"), "{}", out.stdout);
}

#[test]
fn non_antisymmetric_input_is_invalid_data() {
    let dir = TempDir::new().unwrap();
    let mut rows = zero_rows();
    rows[0][1] = 3;
    rows[1][0] = 2;
    let p = write(&dir, "bad.json", &json!({ "matrix": rows }));
    let out = triality(&["eval", "--input", p.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_FAILED);
    assert!(
        out.stderr.contains("(0,1)") && out.stderr.contains("(1,0)"),
        "{}",
        out.stderr
    );
}

#[test]
fn disagreeing_encodings_are_invalid_data() {
    let dir = TempDir::new().unwrap();
    let mut coeffs = vec![0; 28];
    coeffs[0] = 1;
    let p = write(
        &dir,
        "both.json",
        &json!({ "coeffs": coeffs, "matrix": zero_rows() }),
    );
    assert_eq!(
        triality(&["eval", "--input", p.to_str().unwrap()]).code,
        EXIT_FAILED
    );
}

#[test]
fn usage_errors() {
    let dir = TempDir::new().unwrap();
    let junk = dir.path().join("junk.json");
    fs::write(&junk, "{not json").unwrap();
    let missing = dir.path().join("missing.json");
    let wrong_len = write(&dir, "short.json", &json!({ "coeffs": [1, 2, 3] }));
    let unknown_key = write(&dir, "key.json", &json!({ "coef": [] }));
    for args in [
        vec!["eval", "--input", junk.to_str().unwrap()],
        vec!["eval", "--input", missing.to_str().unwrap()],
        vec!["eval", "--input", wrong_len.to_str().unwrap()],
        vec!["eval", "--input", unknown_key.to_str().unwrap()],
        vec!["eval"],
        vec!["verify", "--samples", "0"],
        vec!["verify", "--bound", "0"],
        vec!["verify", "--suite", "nope"],
        vec!["verify", "--no-such-flag"],
        vec!["frobnicate"],
        vec![],
    ] {
        let out = triality(&args);
        assert_eq!(out.code, EXIT_USAGE, "{args:?}: {}", out.stderr);
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(triality(&["--help"]).code, EXIT_OK);
}

#[test]
fn sigma_powers() {
    let dir = TempDir::new().unwrap();
    let mut s = Sampler::new(3, 9).unwrap();
    let m = s.next_element();
    let p = write(&dir, "m.json", &json!({ "coeffs": m.coeffs() }));
    let input = p.to_str().unwrap();
    for (power, same) in [("0", true), ("3", true), ("1", false), ("300", true)] {
        let out = triality(&["sigma", "--json", "--power", power, "--input", input]);
        assert_eq!(out.code, EXIT_OK);
        let v = parse(&out);
        assert_eq!(v["output"] == v["input"], same, "power {power}");
        assert_eq!(v["invariants_after"], v["invariants_predicted"]);
    }
}

#[test]
fn sigma_of_g01() {
    let dir = TempDir::new().unwrap();
    let mut coeffs = vec![0; 28];
    coeffs[0] = 1;
    let p = write(&dir, "g01.json", &json!({ "coeffs": coeffs }));
    let v = parse(&triality(&[
        "sigma",
        "--json",
        "--input",
        p.to_str().unwrap(),
    ]));
    let out: Vec<String> = serde_json::from_value(v["output"]["coeffs"].clone()).unwrap();
    let nonzero: Vec<(usize, &str)> = out
        .iter()
        .enumerate()
        .filter(|(_, c)| *c != "0")
        .map(|(k, c)| (k, c.as_str()))
        .collect();
    // G_0,1, G_2,4, G_3,7, G_5,6 sit at lexicographic indices 0, 14, 21, 25.
    assert_eq!(
        nonzero,
        vec![(0, "-1/2"), (14, "1/2"), (21, "1/2"), (25, "1/2")]
    );
}

#[test]
fn eval_after_sigma_matches_transform() {
    let dir = TempDir::new().unwrap();
    let mut s = Sampler::new(11, 9).unwrap();
    for n in 0..3 {
        let m = s.next_element();
        let p = write(
            &dir,
            &format!("m{n}.json"),
            &json!({ "matrix": m.matrix() }),
        );
        let sig = parse(&triality(&[
            "sigma",
            "--json",
            "--input",
            p.to_str().unwrap(),
        ]));
        let q = write(&dir, &format!("s{n}.json"), &sig["output"]);
        let evaluated = parse(&triality(&[
            "eval",
            "--json",
            "--input",
            q.to_str().unwrap(),
        ]));
        let t = sigma_transform_invariants(&invariant_vector(&m));
        for (k, x) in [("p1", &t.p1), ("p2", &t.p2), ("p3", &t.p3), ("pf", &t.pf)] {
            assert_eq!(evaluated[k], x.to_string());
        }
    }
}

#[test]
fn dump_sections() {
    let out = triality(&["dump"]);
    assert_eq!(out.code, EXIT_OK);
    let v = parse(&out);
    assert_eq!(
        v["quadruples"][0],
        json!(["+G_0,1", "+G_2,4", "+G_3,7", "+G_5,6"])
    );
    assert_eq!(v["g2_basis"].as_array().unwrap().len(), 14);
    assert_eq!(v["so7_basis"].as_array().unwrap().len(), 21);
    assert_eq!(v["generators"].as_array().unwrap().len(), 28);
    assert_eq!(
        v["t"],
        json!([
            ["1", "0", "0", "0"],
            ["3/8", "-1/2", "-12", "0"],
            ["-1/64", "1/16", "-1/2", "0"],
            ["15/64", "-15/16", "-15/2", "1"]
        ])
    );
    assert_eq!(v["octonion_table"][5][2], "+e3");
}

#[test]
fn fixed_reports_structure() {
    let out = triality(&["fixed", "--json"]);
    assert_eq!(out.code, EXIT_OK);
    let v = parse(&out);
    assert_eq!(
        v["g2"]["structure"],
        json!({"dim": 14, "killing_nondegenerate": true, "rank": 2})
    );
    assert_eq!(
        v["so7"]["structure"],
        json!({"dim": 21, "killing_nondegenerate": true, "rank": 3})
    );
}

#[test]
fn verify_small_run_is_deterministic() {
    let a = triality(&["verify", "--json", "--samples", "5", "--seed", "7"]);
    let b = triality(&["verify", "--json", "--samples", "5", "--seed", "7"]);
    assert_eq!(a.code, EXIT_OK, "{}", a.stderr);
    assert_eq!(a, b);
    let v = parse(&a);
    assert_eq!(v["config"]["seed"], 7);
    assert_eq!(v["passed"], true);
}

#[test]
fn verify_suite_filter() {
    let out = triality(&["verify", "--json", "--samples", "2", "--suite", "so8"]);
    assert_eq!(out.code, EXIT_OK);
    let v = parse(&out);
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["check_id"].as_str().unwrap().starts_with("so8_")));
}

#[test]
fn block_flag_rejects_malformed_blocks() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "b.json", &json!([["1", "0"], ["0", "1"]]));
    assert_eq!(
        triality(&["verify", "--block", p.to_str().unwrap()]).code,
        EXIT_USAGE
    );
}

#[test]
fn pf_of_block_model_file() {
    let l = [1, -2, 3, 5].map(Rational::from);
    let m = block_model(&l);
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "m.json", &serde_json::to_value(m.document()).unwrap());
    let v = parse(&triality(&[
        "eval",
        "--json",
        "--input",
        p.to_str().unwrap(),
    ]));
    assert_eq!(v["pf"], "-30");
}
