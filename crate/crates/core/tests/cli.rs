use std::path::PathBuf;

use critsym::cli::{run, EXIT_MISMATCH, EXIT_NOT_CRITICAL, EXIT_OK, EXIT_PARSE, EXIT_VERIFY};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn critsym(args: &[&str]) -> (i32, String, String) {
    let argv = std::iter::once("critsym").chain(args.iter().copied()).map(std::ffi::OsString::from);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn analyze_model_file() {
    let (code, out, _) = critsym(&["analyze", &fixture("poisson.model")]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("p = (n + 2)/(n - 2)"), "{out}");
}

#[test]
fn analyze_concrete_dimension_cross_checks() {
    let (code, out, _) = critsym(&["analyze", &fixture("poisson.model"), "--dim", "n=4,p=3"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("check noether: pass"), "{out}");
    assert!(out.contains("cross-check with symbolic solution: pass"), "{out}");
}

#[test]
fn json_output_is_valid() {
    let (code, out, _) = critsym(&["analyze", "--model", "kohn_laplace", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["model"], "kohn_laplace");
}

#[test]
fn syntax_error_exits_with_parse_code() {
    let (code, _, err) = critsym(&["analyze", &fixture("syntax_error.model")]);
    assert_eq!(code, EXIT_PARSE);
    assert!(err.contains("syntax_error.model:6:1"), "{err}");
}

#[test]
fn usage_errors_exit_with_parse_code() {
    assert_eq!(critsym(&["analyze"]).0, EXIT_PARSE);
    assert_eq!(critsym(&["frobnicate"]).0, EXIT_PARSE);
    assert_eq!(critsym(&["analyze", "--model", "poisson", "--dim", "n"]).0, EXIT_PARSE);
    assert_eq!(critsym(&["analyze", "--model", "no_such_model"]).0, EXIT_PARSE);
}

#[test]
fn degenerate_parameters_are_rejected() {
    let (code, _, err) = critsym(&["analyze", "--model", "ode_class_e1", "--dim", "alpha=2,beta=1"]);
    assert_eq!(code, EXIT_PARSE);
    assert!(err.contains("alpha - beta - 1 > 0"), "{err}");
    assert_eq!(critsym(&["analyze", "--model", "polyharmonic_even", "--dim", "n=4,k=2"]).0, EXIT_PARSE);
    assert_eq!(critsym(&["analyze", "--model", "poisson", "--dim", "n=2"]).0, EXIT_PARSE);
}

#[test]
fn wrong_equation_exits_with_mismatch_code() {
    let (code, _, err) = critsym(&["analyze", &fixture("wrong_equation.model")]);
    assert_eq!(code, EXIT_MISMATCH, "{err}");
}

#[test]
fn fixed_weights_exit_with_not_critical_code() {
    let (code, _, err) = critsym(&["analyze", &fixture("fixed_weights.model")]);
    assert_eq!(code, EXIT_NOT_CRITICAL, "{err}");
}

#[test]
fn off_critical_instance_is_not_critical() {
    let (code, _, _) = critsym(&["analyze", "--model", "poisson", "--dim", "n=3,p=4"]);
    assert_eq!(code, EXIT_NOT_CRITICAL);
}

#[test]
fn failed_reconstruction_exits_with_verify_code() {
    let (code, _, err) = critsym(&["reconstruct", &fixture("weighted_potential.model"), "--dims", "3..6"]);
    assert_eq!(code, EXIT_VERIFY, "{err}");
}

#[test]
fn reconstruct_matches_symbolic() {
    let (code, out, _) = critsym(&["reconstruct", "--model", "poisson"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("reconstructed: (n + 2)/(n - 2)"), "{out}");
}

#[test]
fn verify_and_pokhozhaev() {
    let (code, out, _) = critsym(&["verify", "--model", "poisson", "--trials", "20", "--seed", "3"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("noether identity pass"), "{out}");
    let (code, out, _) = critsym(&["pokhozhaev", "--model", "poisson", "--dim", "n=3,p=5"]);
    assert!(out.contains("interior"), "{out}");
    assert_eq!(code, EXIT_OK, "{out}");
}

#[test]
fn catalog_list_and_export() {
    let (code, out, _) = critsym(&["catalog", "--list"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 12);
    let dir = std::env::temp_dir().join(format!("critsym-export-{}", std::process::id()));
    let (code, _, _) = critsym(&["export", "--dir", dir.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let poisson = dir.join("poisson.model");
    let (code, out, _) = critsym(&["analyze", poisson.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{out}");
    std::fs::remove_dir_all(dir).unwrap();
}
