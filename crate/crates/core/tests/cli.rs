use std::path::{Path, PathBuf};
use std::process::Command;

use concomitant::cli::{run, Output};
use concomitant::linalg::{identity, matrix_unit, real_matrix};
use concomitant::mattuple::{conjugate, evaluate, random_invertible, random_tuple, Ensemble, FiberPoint, MatTuple};
use concomitant::ncpoly::parse_expression;
use concomitant::rng::seeded;
use serde_json::Value;

fn cli(args: &[&str]) -> Output {
    cli_stdin(args, "")
}

fn cli_stdin(args: &[&str], stdin: &str) -> Output {
    let mut argv = vec!["concomitant"];
    argv.extend_from_slice(args);
    run(argv, &mut stdin.as_bytes())
}

struct Scratch(PathBuf);

impl Scratch {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("concomitant-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn write(&self, name: &str, text: &str) -> String {
        let p = self.0.join(name);
        std::fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn identity_pair() -> String {
    MatTuple::new(vec![identity(2), identity(2)]).unwrap().to_json()
}

fn swap_pair() -> MatTuple {
    MatTuple::new(vec![real_matrix(2, &[1.0, 0.0, 0.0, -1.0]), real_matrix(2, &[0.0, 1.0, 1.0, 0.0])]).unwrap()
}

#[test]
fn coords22_of_identity_pair() {
    let s = Scratch::new("c22");
    let f = s.write("pair.json", &identity_pair());
    let out = cli(&["coords22", "--file", &f, "--json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    let want: Value = serde_json::from_str("[[2,0],[2,0],[1,0],[1,0],[2,0]]").unwrap();
    let got: Vec<[f64; 2]> = serde_json::from_value(v).unwrap();
    let want: Vec<[f64; 2]> = serde_json::from_value(want).unwrap();
    assert_eq!(got, want);
    assert_eq!(cli_stdin(&["coords22"], &identity_pair()).stdout, "2 2 1 1 2\n");
}

#[test]
fn equivariance_of_trace_times_word_passes() {
    let out = cli(&["equivariance", "--expr", "tr(X1)*X2", "--d", "2", "--n", "3", "--trials", "100", "--seed", "7"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("verdict: pass"));
}

#[test]
fn xk_dim_example() {
    let out = cli(&["xk-dim", "--d", "2", "--n", "2", "--k", "1", "--seed", "1"]);
    assert_eq!((out.code, out.stdout.as_str()), (0, "7\n"));
}

#[test]
fn failing_checks_exit_one_with_report() {
    let out = cli(&["pit", "--expr", "X1*X2 - X2*X1", "--n", "2", "--trials", "5", "--json"]);
    assert_eq!(out.code, 1);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["verdict"], "fail");
    assert!(!v["witnesses"].as_array().unwrap().is_empty());

    assert_eq!(cli(&["central", "--expr", "X1", "--n", "2"]).code, 1);
    assert_eq!(cli(&["equivariance", "--expr", "X1", "--d", "1", "--n", "2", "--tol", "-1"]).code, 2);
}

#[test]
fn wagner_and_rv_normalize_on_swap_pair() {
    let z = swap_pair().to_json();
    assert_eq!(cli_stdin(&["wagner"], &z).stdout, "-4\n");
    assert_eq!(cli_stdin(&["rv-normalize", "--max-word-len", "3"], &z).stdout, "-0.25*X1*X2*X1*X2 + 0.25*X1*X2^2*X1 + 0.25*X2*X1^2*X2 - 0.25*X2*X1*X2*X1\n");
    let unipotent = MatTuple::new(vec![matrix_unit(2, 1, 2), matrix_unit(2, 1, 2)]).unwrap().to_json();
    let out = cli_stdin(&["rv-normalize"], &unipotent);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("not irreducible"));
}

#[test]
fn nonextension_csv() {
    let out = cli(&["nonextension", "--steps", "3", "--csv"]);
    assert_eq!(out.stdout, "t,inverse_det\n1,0.25\n0.5,1\n0.25,4\n");
}

/// One invocation per subcommand, each in JSON mode, paired with its schema.
fn json_invocations(s: &Scratch) -> Vec<(&'static str, Vec<String>, String)> {
    let z = random_tuple(2, 2, Ensemble::Ginibre, 1).unwrap();
    let zf = s.write("z.json", &z.to_json());
    let zr = s.write("zr.json", &random_tuple(2, 3, Ensemble::Reducible(1), 2).unwrap().to_json());
    let sconj = random_invertible(2, &mut seeded(3), 1e3);
    let w = conjugate(&z, &sconj).unwrap();
    let wf = s.write("w.json", &w.to_json());
    let phi = parse_expression("X1*X2", 2).unwrap();
    let a = FiberPoint::new(z.clone(), evaluate(&phi, &z).unwrap()).unwrap();
    let b = FiberPoint::new(w.clone(), evaluate(&phi, &w).unwrap()).unwrap();
    let af = s.write("a.json", &serde_json::to_string(&a).unwrap());
    let bf = s.write("b.json", &serde_json::to_string(&b).unwrap());
    let dir = random_tuple(2, 2, Ensemble::Ginibre, 4).unwrap();
    let df = s.write("dir.json", &dir.to_json());
    let samples: Vec<MatTuple> = (0..5).map(|i| random_tuple(2, 2, Ensemble::Disc, 10 + i).unwrap()).collect();
    let sf = s.write("samples.json", &serde_json::to_string(&samples).unwrap());

    let cases: Vec<(&str, Vec<&str>)> = vec![
        ("parse", vec!["parse", "--expr", "tr(X1)*X2 + 2i"]),
        ("eval", vec!["eval", "--expr", "X1*X2", "--file", &zf]),
        ("check_report", vec!["equivariance", "--expr", "X1*X2", "--trials", "5"]),
        ("generators", vec!["generators", "--d", "2", "--n", "3"]),
        ("coords", vec!["coords", "--file", &zf]),
        ("coords22", vec!["coords22", "--file", &zf]),
        ("similar", vec!["similar", "--file", &zf, "--file2", &wf]),
        ("irreducible", vec!["irreducible", "--file", &zr]),
        ("subspace", vec!["subspace", "--file", &zr]),
        ("reynolds", vec!["reynolds", "--expr", "X1", "--file", &zf, "--samples", "16"]),
        ("expect", vec!["expect", "--expr", "X1*X2 + tr(X1)"]),
        ("fiber_eq", vec!["fiber-eq", "--file", &af, "--file2", &bf]),
        ("check_report", vec!["maxmod", "--expr", "tr(X1*X2)", "--file", &zf, "--file2", &df, "--samples", "32", "--interior", "32"]),
        ("nonextension", vec!["nonextension", "--steps", "4"]),
        ("xk_dim", vec!["xk-dim", "--k", "1"]),
        ("check_report", vec!["pit", "--expr", "X1*X2 - X2*X1", "--n", "1", "--trials", "3"]),
        ("central", vec!["central", "--expr", "(X1*X2 - X2*X1)^2", "--trials", "3"]),
        ("wagner", vec!["wagner", "--file", &zf]),
        ("rv_normalize", vec!["rv-normalize", "--file", &zf]),
        ("cover", vec!["cover", "--file", &sf]),
    ];
    cases
        .into_iter()
        .map(|(schema, args)| {
            let mut v: Vec<String> = args.iter().map(|a| a.to_string()).collect();
            v.push("--json".into());
            (schema, v, args[0].to_string())
        })
        .collect()
}

fn schema(name: &str) -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn every_subcommand_json_validates_and_is_deterministic() {
    let s = Scratch::new("schemas");
    let cases = json_invocations(&s);
    let covered: std::collections::BTreeSet<String> = cases.iter().map(|c| c.2.clone()).collect();
    assert_eq!(covered.len(), 20, "{covered:?}");
    for (name, args, sub) in cases {
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = cli(&argv);
        assert!(out.code == 0 || out.code == 1, "{sub}: {}", out.stderr);
        let doc: Value = serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{sub}: {e}"));
        let validator = jsonschema::validator_for(&schema(name)).unwrap();
        let errors: Vec<String> = validator.iter_errors(&doc).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{sub} does not match {name}: {errors:?}\n{doc}");
        assert_eq!(cli(&argv), out, "{sub} output is not reproducible");
    }
}

#[test]
fn input_formats_match_their_schemas() {
    let z = random_tuple(3, 2, Ensemble::Ginibre, 1).unwrap();
    let doc: Value = serde_json::from_str(&z.to_json()).unwrap();
    assert!(jsonschema::validator_for(&schema("mattuple")).unwrap().is_valid(&doc));
    let f = FiberPoint::new(z, identity(2)).unwrap();
    let doc = serde_json::to_value(&f).unwrap();
    assert!(jsonschema::validator_for(&schema("fiber_point")).unwrap().is_valid(&doc));

    let short: Value = serde_json::from_str("[[2,0],[2,0],[1,0],[1,0]]").unwrap();
    assert!(!jsonschema::validator_for(&schema("coords22")).unwrap().is_valid(&short));
    let bad_verdict: Value = serde_json::from_str(
        r#"{"trials":1,"seed":0,"max_defect":0.0,"tolerance":1e-8,"verdict":"maybe","witnesses":[]}"#,
    )
    .unwrap();
    assert!(!jsonschema::validator_for(&schema("check_report")).unwrap().is_valid(&bad_verdict));
}

#[test]
fn malformed_inputs_exit_two_with_one_line() {
    let s = Scratch::new("bad");
    let bad_json = s.write("bad.json", "{\"d\": 2, \"n\": 2, \"matrices\": [[[[1, 0]]]]}");
    let not_json = s.write("nj.json", "this is not json");
    let cases: Vec<Vec<&str>> = vec![
        vec![],
        vec!["frobnicate"],
        vec!["parse"],
        vec!["parse", "--expr", "X1 +"],
        vec!["eval", "--expr", "X1", "--file", &bad_json],
        vec!["eval", "--expr", "X1", "--file", &not_json],
        vec!["eval", "--expr", "X1", "--file", "/nonexistent/path.json"],
        vec!["equivariance", "--expr", "X1", "--trials", "0"],
        vec!["equivariance", "--expr", "X1", "--group", "h"],
        vec!["generators", "--d", "0"],
        vec!["xk-dim", "--k", "2", "--n", "2"],
        vec!["nonextension", "--steps", "1"],
        vec!["central", "--expr", "1 + X1"],
        vec!["maxmod", "--expr", "X1"],
        vec!["maxmod", "--expr", "tr(X1)", "--file", &bad_json],
        vec!["wagner", "--i", "1", "--j", "1", "--file", &bad_json],
        vec!["cover", "--delta", "0", "--samples", "2"],
        vec!["pit", "--expr", "X3", "--d", "2"],
        vec!["reynolds", "--expr", "X1", "--samples", "0", "--file", &not_json],
        vec!["--seed", "minus-one", "generators"],
    ];
    for args in cases {
        let out = cli(&args);
        assert_eq!(out.code, 2, "{args:?}: {out:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert_eq!(out.stderr.trim_end().lines().count(), 1, "{args:?}: {}", out.stderr);
    }
}

#[test]
fn parse_errors_carry_positions() {
    let out = cli(&["parse", "--expr", "X1*X3"]);
    assert_eq!(out.stderr, "error: generator X3 at position 3 is out of range (d = 2)\n");
    let out = cli(&["parse", "--expr", "tr(X1"]);
    assert!(out.stderr.contains("position 5"));
}

#[test]
fn help_and_version_exit_zero() {
    let out = cli(&["--help"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("rv-normalize"));
    assert_eq!(cli(&["--version"]).code, 0);
}

#[test]
fn binary_reads_seed_from_environment() {
    let bin = env!("CARGO_BIN_EXE_concomitant");
    let run_with = |env: Option<&str>, extra: &[&str]| {
        let mut c = Command::new(bin);
        c.args(["equivariance", "--expr", "X1*X2", "--trials", "3", "--json"]);
        c.args(extra);
        c.env_remove("CONCOMITANT_SEED");
        if let Some(v) = env {
            c.env("CONCOMITANT_SEED", v);
        }
        let out = c.output().unwrap();
        assert_eq!(out.status.code(), Some(0));
        serde_json::from_slice::<Value>(&out.stdout).unwrap()
    };
    assert_eq!(run_with(None, &[])["seed"], 0);
    assert_eq!(run_with(Some("41"), &[])["seed"], 41);
    assert_eq!(run_with(Some("41"), &["--seed", "5"])["seed"], 5);
}
