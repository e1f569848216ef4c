use std::path::Path;
use std::process::{Command, Output};
use std::sync::Arc;

use num_rational::BigRational;
use serde_json::Value;

use exchstruct::finstruct::{write_structure, FinStructure, Signature};
use exchstruct::lemmas::SymCoeffTable;
use exchstruct::measures::Weight;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_exchstruct"))
        .args(args)
        .env_remove("EXCHSTRUCT_SEED")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn validate(schema: &str, doc: &Value) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("schemas")
        .join(schema);
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}\n{doc:#}");
}

fn weight_file(dir: &Path, name: &str, upper: i64) -> String {
    let w = Weight::split_at(0.0, BigRational::new(upper.into(), 10.into())).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, w.to_json().to_string()).unwrap();
    validate("weight.schema.json", &w.to_json());
    path.to_str().unwrap().to_owned()
}

#[test]
fn enumerate_counts() {
    for (kind, n, alpha) in [
        ("betweenness", "3", 3),
        ("pure-set", "5", 1),
        ("betweenness", "4", 12),
    ] {
        let o = run(&["enumerate", "--structure", kind, "--n", n]);
        assert_eq!(o.status.code(), Some(0));
        let v = json(&o);
        assert_eq!(v["alpha"], alpha);
        assert_eq!(v["types"].as_array().unwrap().len(), alpha);
        validate("enumerate.schema.json", &v);
    }
    let o = run(&[
        "enumerate",
        "--structure",
        "order",
        "--n",
        "3",
        "--format",
        "csv",
    ]);
    assert_eq!(stdout(&o), "structure,n,alpha\norder,3,6\n");
}

#[test]
fn uniqueness_passes_for_a_reduct() {
    let args = [
        "test-uniqueness",
        "--structure",
        "betweenness",
        "--n",
        "3",
        "--samples",
        "100000",
        "--seed",
        "7",
    ];
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v = json(&o);
    assert_eq!(v["decision"], "pass");
    validate("test-report.schema.json", &v);
    let csv = run(&[&args[..], &["--format", "csv"]].concat());
    assert!(stdout(&csv).lines().count() == 4, "{}", stdout(&csv));
}

#[test]
fn distinguish_different_weights() {
    let dir = tempfile::tempdir().unwrap();
    let w1 = weight_file(dir.path(), "w03.json", 3);
    let w2 = weight_file(dir.path(), "w05.json", 5);
    let o = run(&[
        "distinguish",
        "--structure",
        "unary-split",
        "--w1",
        &w1,
        "--w2",
        &w2,
        "--seed",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v = json(&o);
    assert_eq!(v["detail"], "distinguishable");
    validate("test-report.schema.json", &v);

    let same = run(&[
        "distinguish",
        "--structure",
        "unary-split",
        "--w1",
        &w1,
        "--w2",
        &w1,
        "--seed",
        "1",
    ]);
    assert_eq!(same.status.code(), Some(1));
    assert_eq!(json(&same)["detail"], "not distinguishable");
}

#[test]
fn invariance_and_sampling_validate() {
    let o = run(&[
        "test-invariance",
        "--structure",
        "circular",
        "--samples",
        "5000",
        "--seed",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    validate("test-report.schema.json", &json(&o));

    let o = run(&[
        "sample",
        "--structure",
        "separation",
        "--n",
        "4",
        "--samples",
        "3",
        "--seed",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    validate("sample.schema.json", &json(&o));

    let o = run(&[
        "sample",
        "--structure",
        "erdos-renyi",
        "--p",
        "0.3",
        "--n",
        "5",
        "--seed",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    validate("sample.schema.json", &json(&o));
}

#[test]
fn verify_lemmas_passes() {
    let o = run(&["verify-lemmas", "--tables", "50"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v = json(&o);
    assert_eq!(v["passed"], true);
    validate("verification.schema.json", &v);
}

#[test]
fn check_hh_fails_for_erdos_renyi() {
    let o = run(&[
        "check-hh",
        "--structure",
        "erdos-renyi",
        "--n",
        "10",
        "--k",
        "2",
        "--seed",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(1));
    validate("test-report.schema.json", &json(&o));
    let o = run(&[
        "check-hh",
        "--structure",
        "betweenness",
        "--n",
        "8",
        "--k",
        "3",
        "--trials",
        "20",
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["enumerate", "--structure", "nonsense", "--n", "3"][..],
        &["enumerate", "--structure", "order"],
        &["frobnicate"],
        &["test-uniqueness", "--structure", "unary-split"],
        &["check-hh", "--structure", "order", "--n", "40"],
        &[
            "sample",
            "--structure",
            "order",
            "--n",
            "2",
            "--seed",
            "not-a-number",
        ],
        &["inspect", "/nonexistent/file"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn output_is_reproducible() {
    let base = [
        "test-uniqueness",
        "--structure",
        "separation",
        "--n",
        "4",
        "--samples",
        "20000",
        "--seed",
        "11",
    ];
    let a = run(&[&base[..], &["--workers", "1"]].concat());
    let b = run(&[&base[..], &["--workers", "4"]].concat());
    let c = run(&base);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);

    let other = run(&[
        "test-uniqueness",
        "--structure",
        "separation",
        "--n",
        "4",
        "--samples",
        "20000",
        "--seed",
        "12",
    ]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn seed_comes_from_the_environment() {
    let args = [
        "sample",
        "--structure",
        "order",
        "--n",
        "4",
        "--samples",
        "2",
    ];
    let with_env = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_exchstruct"))
            .args(args)
            .env("EXCHSTRUCT_SEED", seed)
            .output()
            .unwrap()
    };
    let flagged = run(&[&args[..], &["--seed", "99"]].concat());
    assert_eq!(with_env("99").stdout, flagged.stdout);
    assert_ne!(with_env("98").stdout, flagged.stdout);
}

#[test]
fn out_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = run(&[
        "enumerate",
        "--structure",
        "circular",
        "--n",
        "4",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["alpha"], 6);
}

#[test]
fn inspect_reports_types() {
    let dir = tempfile::tempdir().unwrap();
    let sig = Arc::new(Signature::new([("E", 2)]).unwrap());
    // In the 4-cycle a pair may or may not be adjacent, so k = 2 fails.
    let cycle = FinStructure::from_predicate(sig, 4, |_, t| {
        (t[0] + 4 - t[1]) % 4 == 1 || (t[1] + 4 - t[0]) % 4 == 1
    });
    let path = dir.path().join("c4.txt");
    std::fs::write(&path, write_structure(&cycle)).unwrap();
    let o = run(&["inspect", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v = json(&o);
    validate("inspect.schema.json", &v);
    assert_eq!(v["size"], 4);
    assert_eq!(v["automorphisms"], 8);
    assert_eq!(v["highly_homogeneous_k"], serde_json::json!([1, 3, 4]));
}

#[test]
fn coefficient_tables_validate() {
    let t = SymCoeffTable::from_sorted(3, 2, |s| {
        BigRational::from_integer((s.iter().sum::<usize>() as i64).into())
    })
    .unwrap();
    validate("coeff-table.schema.json", &t.to_json());
}
