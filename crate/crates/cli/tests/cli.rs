use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn thetak(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thetak")).args(args).env_remove("THETAK_DEFAULT_P").output().expect("run thetak")
}

fn stdout(args: &[&str]) -> String {
    let out = thetak(args);
    assert!(out.status.success(), "thetak {args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap().trim().to_string()
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--format", "json"];
    all.extend(args);
    serde_json::from_str(&stdout(&all)).expect("valid json")
}

fn fixture(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "fixtures", name].iter().collect();
    path.to_str().unwrap().to_string()
}

#[test]
fn q_of_one_is_zero() {
    assert_eq!(stdout(&["apply", "q", "1"]), "0");
}

#[test]
fn apply_operations() {
    assert_eq!(stdout(&["apply", "q", "w"]), "1/2*w - 1/2*w^2");
    assert_eq!(stdout(&["apply", "qtilde", "Theta[1]"]), "1/8 - 1/8*w^2");
    assert_eq!(stdout(&["apply", "chi", "w^3 + 2"]), "w^-3 + 2");
    assert_eq!(stdout(&["apply", "coproduct", "w^2"]), "w1^2*w2^2");
    assert_eq!(stdout(&["apply", "psi", "3", "w"]), "1/3*w");
    assert_eq!(stdout(&["apply", "psi", "-1", "Theta[0]"]), "1/2 + 1/2*w");
}

#[test]
fn flags_after_the_subcommand() {
    assert_eq!(stdout(&["einvariant", "2", "--p", "2"]), "order 8, generator Theta[1]");
    assert_eq!(stdout(&["--p", "3", "apply", "q", "w"]), "1/3*w - 1/3*w^3");
}

#[test]
fn default_prime_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_thetak"))
        .args(["apply", "q", "w"])
        .env("THETAK_DEFAULT_P", "5")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "1/5*w - 1/5*w^5");
}

#[test]
fn evaluation_and_theta() {
    assert_eq!(stdout(&["eval", "Theta[2]", "at", "-3"]), "-1");
    assert_eq!(stdout(&["eval", "(1 - w)/2", "at", "1/3"]), "1/3");
    assert_eq!(stdout(&["theta", "1", "--big"]), "Theta[1] = 1/8 - 1/8*w^2");
    assert_eq!(stdout(&["--p", "3", "theta", "1"]), "theta[1] = 1/3*w - 1/3*w^3");
    assert_eq!(thetak(&["eval", "w", "at", "2"]).status.code(), Some(2));
}

#[test]
fn numerical_predicate() {
    assert_eq!(stdout(&["is-numerical", "(1 - w^2)/8"]), "numerical");
    let out = thetak(&["is-numerical", "(1 - w)/4"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "not numerical: f(3) = -1/2");
    let out = thetak(&["--format", "json", "--p", "3", "is-numerical", "(w - w^3)/9"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["numerical"], false);
    assert_eq!(v["witness"]["at"], "2");
}

#[test]
fn expansion() {
    assert_eq!(stdout(&["expand", "w^3", "--level", "3", "--precision", "8"]), "16*Theta[0]*Theta[1] - 8*Theta[1] - 2*Theta[0] + 1  (mod 2^8, level 3)");
    let v = json(&["expand", "w^2"]);
    assert_eq!(v["text"], "-8*Theta[1] + 1");
    assert_eq!(v["residual_bound"], 16);
}

#[test]
fn coactions() {
    assert_eq!(stdout(&["coaction", "eta", "Q(x2)"]), "w*Q(x2) + w*Theta0*x2^2 - w*Theta0*x2 + Theta1");
    assert_eq!(stdout(&["coaction", "nu", "x4"]), "w^2*x4 + 2*Theta1");
    assert_eq!(stdout(&["coaction", "sigma", "x8"]), "w^4*x8 + 2*Theta2 - 3*Theta1^2");
    assert_eq!(stdout(&["coaction", "eta", "x2^2"]), "w^2*x2^2 + 2*w*Theta0*x2 + Theta0^2");
}

#[test]
fn ko_check_basis_reports_theta1_family() {
    let text = stdout(&["ko", "check-basis", "--level", "3"]);
    assert!(text.contains("not even: Theta[0]"), "{text}");
    assert!(text.ends_with("result: Theta[1..] spans KO"), "{text}");
}

#[test]
fn comodule_commands() {
    let v = json(&["comodule", "to-action", &fixture("scalar_w.json"), "--units-mod", "2"]);
    // A(3) = E(1/3) = 1/3 mod 2^8
    assert_eq!(v["samples"][1]["gamma"], "3");
    assert_eq!(v["samples"][1]["matrix"][0][0], "171");
    let text = stdout(&["comodule", "invariants", &fixture("upper_theta0.json")]);
    assert_eq!(text, "invariants mod 2^16\n(1, 0) of order 2^16");
}

#[test]
fn verify_exit_codes() {
    assert!(thetak(&["verify", "einvariant"]).status.success());
    let digits = thetak(&["verify", "digits"]);
    assert_eq!(digits.status.code(), Some(1));
    assert!(String::from_utf8(digits.stdout).unwrap().contains("[pass] Theta_r mod 2 depends only on a_0..a_r"));
}

#[test]
fn verify_is_deterministic_under_seed() {
    let a = stdout(&["verify", "hopf", "--trials", "30", "--seed", "11", "--format", "json"]);
    let b = stdout(&["verify", "hopf", "--trials", "30", "--seed", "11", "--format", "json"]);
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["seed"], 11);
    assert_eq!(v["passed"], true);
}

#[test]
fn usage_errors() {
    assert!(!thetak(&["verify", "nope"]).status.success());
    assert!(!thetak(&["--bogus", "theta", "1"]).status.success());
    let out = thetak(&["apply", "q", "(1 + w"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("syntax error at line 1, column"));
}

#[test]
fn json_results_parse_back() {
    for expr in ["Q(Theta[2])", "psi[3](w^-2 + Theta[1])", "chi(Q(w))"] {
        let v = json(&["apply", "qtilde", expr]);
        let text = v["text"].as_str().unwrap();
        assert_eq!(stdout(&["apply", "qtilde", text]), text, "{expr}");
    }
}
