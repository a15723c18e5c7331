//! End-to-end tests of the qchar binary: golden outputs, exit codes,
//! and JSON round-tripping.

use std::process::{Command, Output};

use qchar::cli::{ExpandJson, VerifyJson};

fn qchar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qchar"))
        .args(args)
        .output()
        .expect("spawn qchar")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8 stdout")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn expand_delta_golden() {
    let o = qchar(&["expand", "delta", "--order", "8"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "1 + q^1 + q^3 + q^6 + O(q^(8))\n");
}

#[test]
fn expand_eta_json() {
    let o = qchar(&["expand", "eta", "--order", "2", "--json"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let doc: ExpandJson = serde_json::from_str(text.trim_end()).expect("valid JSON");
    assert_eq!(doc.object, "eta");
    assert_eq!(doc.l, 24);
    assert_eq!(doc.terms[0], ("1/24".to_string(), "1".to_string()));
    // byte-identical round trip
    assert_eq!(serde_json::to_string(&doc).unwrap(), text.trim_end());
}

#[test]
fn expand_cp3_leading_term() {
    let o = qchar(&["expand", "cp:3", "--order", "5", "--json"]);
    assert_eq!(code(&o), 0);
    let doc: ExpandJson = serde_json::from_str(stdout(&o).trim_end()).unwrap();
    assert_eq!(doc.terms[0], ("5/12".to_string(), "1".to_string()));
}

#[test]
fn verify_named_identities() {
    for name in ["lemma71", "gauss", "legendre", "a2eta"] {
        let o = qchar(&["verify", name, "--order", "15"]);
        assert_eq!(code(&o), 0, "{name}: {}", stdout(&o));
        assert!(stdout(&o).contains("EQUAL"));
    }
    let o = qchar(&["verify", "partition:50:50"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn verify_pair_mismatch() {
    let o = qchar(&["verify", "--lhs", "delta", "--rhs", "eta", "--order", "5"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("MISMATCH"));
}

#[test]
fn verify_mismatch_json() {
    let o = qchar(&[
        "verify", "--lhs", "cp:2", "--rhs", "cp:3", "--order", "10", "--json",
    ]);
    assert_eq!(code(&o), 1);
    let text = stdout(&o);
    let doc: VerifyJson = serde_json::from_str(text.trim_end()).unwrap();
    assert!(!doc.equal);
    assert_eq!(doc.first_mismatch.as_ref().unwrap().exp, "1/8");
    assert_eq!(serde_json::to_string(&doc).unwrap(), text.trim_end());
}

#[test]
fn verify_equal_json_golden() {
    let o = qchar(&["verify", "legendre", "--order", "25", "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o),
        "{\"name\":\"legendre\",\"order\":\"25\",\"equal\":true,\"first_mismatch\":null}\n"
    );
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&qchar(&["expand", "bogus"])), 2);
    assert_eq!(code(&qchar(&["expand", "cp:x"])), 2);
    assert_eq!(code(&qchar(&["verify"])), 2);
    assert_eq!(code(&qchar(&["verify", "lemma71", "--lhs", "delta"])), 2);
    assert_eq!(code(&qchar(&["mlde", "find", "--series", "cp:2"])), 2);
    assert_eq!(code(&qchar(&["levels", "g2"])), 2);
    assert_eq!(code(&qchar(&["expand", "delta", "--order", "x"])), 2);
    let o = qchar(&["expand", "cp:x"]);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("position 3"), "{err}");
}

#[test]
fn mlde_verify_and_find() {
    let o = qchar(&["mlde", "verify:3", "--trunc", "20"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("E4 = -75"));

    let o = qchar(&[
        "mlde", "find", "--series", "cp:2", "--order", "1", "--group", "gamma2", "--trunc", "20",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o),
        "Unique: Theta_{1,0} = -1/8, Theta_{0,1} = -1/8\n"
    );

    let o = qchar(&[
        "mlde", "find", "--series", "eta", "--order", "1", "--group", "gamma1", "--trunc", "20",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "Inconsistent\n");
}

#[test]
fn levels_golden() {
    let o = qchar(&["levels", "f4"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("-23/4, -5, -9/2, -4"));

    let o = qchar(&["levels", "e8"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("-119/5, -70/3, -23"));
}

#[test]
fn quiet_suppresses_output() {
    let o = qchar(&["verify", "gauss", "--order", "10", "--quiet"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "");
}
