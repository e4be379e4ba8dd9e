use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn data(rel: &str) -> String {
    root().join("data").join(rel).to_string_lossy().into_owned()
}

fn mtv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mtv")).args(args).output().expect("run mtv")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn stderr_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr).expect("json on stderr")
}

#[test]
fn tv_values() {
    let o = mtv(&["tv", &data("backends/vec_z2.json"), &data("triangulations/s3_boundary4simplex.json")]);
    assert!(o.status.success());
    assert_eq!(String::from_utf8_lossy(&o.stdout).lines().next(), Some("1"));

    let o = mtv(&["--json", "tv", &data("backends/vec_s3.json"), &data("triangulations/s3_boundary4simplex_s3.json")]);
    assert_eq!(stdout_json(&o)["value"]["exact"], 1);

    let fib = |t: &str| {
        let o = mtv(&["--json", "tv", &data("backends/fib.json"), &data(t)]);
        assert!(o.status.success());
        stdout_json(&o)["value"]["exact"].clone()
    };
    let a = fib("triangulations/s3_boundary4simplex.json");
    assert_eq!(a, fib("triangulations/s3_pachner.json"));
    // 1/(2+φ) = (3-φ)/5 with φ = -ζ²-ζ³
    assert_eq!(a, serde_json::json!({"coeffs": [3, 0, 1, 1], "den": 5}));
}

#[test]
fn structured_errors() {
    let o = mtv(&["tv", &data("backends/fib_bad_gram.json"), &data("triangulations/s3_boundary4simplex.json")]);
    assert_eq!(o.status.code(), Some(3));
    let e = stderr_json(&o);
    assert_eq!(e["error"], "invariant");
    assert_eq!(e["witness"], "(t,t,t)");

    let o = mtv(&["tv", &data("backends/missing.json"), &data("triangulations/s3_boundary4simplex.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"], "schema");

    let dir = std::env::temp_dir().join(format!("mtv-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let broken = dir.join("broken.json");
    std::fs::write(&broken, "{\"tets\": [[0,1,2,3]]").unwrap();
    let o = mtv(&["tv", &data("backends/fib.json"), broken.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    // a decoration through the bad set of the relative backend
    let bad = dir.join("bad_phi.json");
    std::fs::write(
        &bad,
        r#"{"tets": [[1,2,3,4],[0,2,3,4],[0,1,3,4],[0,1,2,4],[0,1,2,3]],
            "phi": [{"edge": [0,1], "g": "3"}, {"edge": [0,2], "g": "3"}, {"edge": [0,3], "g": "3"}, {"edge": [0,4], "g": "3"}]}"#,
    )
    .unwrap();
    let o = mtv(&["tv", &data("backends/vec_z6_relative.json"), bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(stderr_json(&o)["error"], "unsupported_decoration");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn validate_reports() {
    for name in ["vec_s3.json", "fib.json"] {
        let o = mtv(&["--json", "validate", &data(&format!("backends/{name}"))]);
        assert!(o.status.success(), "{name}");
        assert_eq!(stdout_json(&o)["pass"], true);
    }
    let o = mtv(&["--json", "validate", &data("backends/fib_bad_b.json")]);
    assert_eq!(o.status.code(), Some(3));
    let r = stdout_json(&o);
    for c in r["checks"].as_array().unwrap() {
        let failed = c["failures"].as_u64().unwrap() > 0;
        assert_eq!(failed, c["name"] == "validate_b", "{c}");
        assert_eq!(failed, !c["witness"].is_null());
    }
}

#[test]
fn fuzz_is_deterministic_and_catches_bad_data() {
    let args = ["--json", "--seed", "7", "--moves", "100", "fuzz"];
    let run = |backend: &str, extra: &[&str]| {
        let mut a: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        a.push(data(backend));
        a.push(data("triangulations/s3_boundary4simplex.json"));
        a.extend(extra.iter().map(|s| s.to_string()));
        let refs: Vec<&str> = a.iter().map(String::as_str).collect();
        mtv(&refs)
    };
    let a = run("backends/vec_z2.json", &[]);
    assert!(a.status.success());
    assert_eq!(a.stdout, run("backends/vec_z2.json", &[]).stdout);
    assert_eq!(stdout_json(&a)["pass"], true);

    let f = run("backends/fib.json", &["--max-tets", "10"]);
    assert!(f.status.success());

    let bad = run("backends/fib_bad_tet_scaled.json", &["--mix", "pachner"]);
    assert_eq!(bad.status.code(), Some(3));
    let r = stdout_json(&bad);
    assert_eq!(r["pass"], false);
    let i = r["first_divergent_move"].as_u64().unwrap() as usize;
    assert_eq!(r["log"].as_array().unwrap().len(), i + 1);
}

#[test]
fn normal_forms() {
    let o = mtv(&["--json", "normal-form", &data("words/identity.json")]);
    assert!(o.status.success());
    let r = stdout_json(&o);
    assert_eq!(r["from"], r["to"]);
    assert!(r["phi"].as_array().unwrap().iter().all(|p| p[1] == "0"));
    assert_eq!(r["verified"], true);

    let o = mtv(&["--json", "normal-form", &data("words/relation2_s3.json")]);
    let r = stdout_json(&o);
    assert_eq!(r["to"], serde_json::json!([0, 2]));
    assert_eq!(r["phi"], serde_json::json!([[0, "(12)"], [2, "(13)"]]));

    let o = mtv(&["--json", "normal-form", &data("words/word8_z6.json")]);
    assert_eq!(stdout_json(&o)["verified"], true);

    let o = mtv(&["normal-form", &data("words/non_composable.json")]);
    assert_eq!(o.status.code(), Some(5));
    assert_eq!(stderr_json(&o)["error"], "non_composable");

    let o = mtv(&["normal-form", &data("backends/fib.json")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn rep_check_passes() {
    let o = mtv(&["--json", "--seed", "5", "rep-check", "--cases", "30"]);
    assert!(o.status.success());
    let r = stdout_json(&o);
    assert_eq!(r["pass"], true);
    assert_eq!(r["suites"].as_array().unwrap().len(), 12);
}
