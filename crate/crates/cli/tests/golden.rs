//! Schema-stable JSON output. Regenerate with `UPDATE_GOLDEN=1`.

use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ortho-moments"))
        .args(args)
        .env_remove("ORTHO_MOMENTS_LIMIT_K")
        .output()
        .expect("binary runs");
    (out.status.code().expect("exit code"), String::from_utf8(out.stdout).expect("utf-8"))
}

fn mask(v: &mut Value) {
    match v {
        Value::Object(map) => {
            if let Some(t) = map.get_mut("elapsed_ms") {
                *t = Value::from(0);
            }
            map.values_mut().for_each(mask);
        }
        Value::Array(items) => items.iter_mut().for_each(mask),
        _ => {}
    }
}

fn check(name: &str, args: &[&str], code: i32) {
    let (got_code, stdout) = run(args);
    assert_eq!(got_code, code, "{name}: {stdout}");
    let mut v: Value = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("{name}: {e}: {stdout}"));
    mask(&mut v);
    let text = serde_json::to_string_pretty(&v).unwrap() + "\n";
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &text).unwrap();
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden {}", path.display()));
    assert_eq!(text, want, "{name}");
}

#[test]
fn integral_closed() {
    check("integral_closed", &["integral", "--matrix", "4", "--n", "3", "--method", "closed", "--json"], 0);
}

#[test]
fn integral_oracle_range() {
    check(
        "integral_oracle_range",
        &["integral", "--matrix", "2,0;0,2", "--n", "3:5", "--method", "oracle", "--json"],
        0,
    );
}

#[test]
fn integral_vanishing() {
    check("integral_vanishing", &["integral", "--matrix", "1", "--n", "5", "--json"], 0);
}

#[test]
fn integral_monte_carlo_fallback() {
    check(
        "integral_mc_fallback",
        &["integral", "--matrix", "2,2,2;2,2,2;2,2,0", "--n", "4", "--samples", "5000", "--seed", "3", "--json"],
        0,
    );
}

#[test]
fn phi() {
    check("phi", &["phi", "--a", "2", "--b", "2", "--n", "3", "--json"], 0);
}

#[test]
fn phi_oracle() {
    check("phi_oracle", &["phi", "--a", "2,2", "--b", "2,0", "--n", "3", "--method", "oracle", "--json"], 0);
}

#[test]
fn moments() {
    check("moments", &["moments", "--alpha", "2", "--beta", "2", "--n", "3", "--json"], 0);
}

#[test]
fn weingarten_matrix() {
    check("weingarten_matrix", &["weingarten", "--k", "2", "--n", "3", "--json"], 0);
}

#[test]
fn weingarten_entry() {
    check(
        "weingarten_entry",
        &["weingarten", "--k", "2", "--n", "3", "--entry", "(1 2)(3 4)", "(1 3)(2 4)", "--json"],
        0,
    );
}

#[test]
fn oracle() {
    check("oracle", &["oracle", "--matrix", "1,1;1,1", "--n", "4", "--json"], 0);
}

#[test]
fn oracle_singular() {
    check("oracle_singular", &["oracle", "--matrix", "2,2;2,2", "--n", "3", "--json"], 2);
}

#[test]
fn mc() {
    check("mc", &["mc", "--matrix", "4", "--n", "3", "--samples", "20000", "--seed", "7", "--json"], 0);
}

#[test]
fn verify_report() {
    check("verify_n2", &["verify", "n2-vs-oracle", "--json"], 0);
}

#[test]
fn conjecture_odd() {
    check("conjecture_odd", &["conjecture", "odd", "--max-sum", "6", "--n", "4:5", "--json"], 0);
}

#[test]
fn conjecture_even() {
    check("conjecture_even", &["conjecture", "even", "--max-entry", "2", "--n", "4:5", "--json"], 0);
}

#[test]
fn parse_error() {
    check("parse_error", &["integral", "--matrix", "2,0;0", "--n", "3", "--json"], 3);
}
