use std::path::PathBuf;
use std::process::{Command, Output};

fn itsub(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_itsub"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("itsub-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn check_exit_codes() {
    assert_eq!(itsub(&["check", "c0 & c1", "c1"]).status.code(), Some(0));
    assert_eq!(itsub(&["check", "c0", "c1"]).status.code(), Some(1));
    assert_eq!(itsub(&["check", "c0 ->", "c1"]).status.code(), Some(2));
    assert_eq!(itsub(&["check", "c0"]).status.code(), Some(2));
    assert_eq!(itsub(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn parse_errors_name_the_position() {
    let out = itsub(&["check", "c0 & )", "U"]);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("at 5"), "{err}");
}

#[test]
fn derive_prints_a_certificate() {
    let out = itsub(&["derive", "c0", "c0"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out).trim(),
        r#"{"rule":"refl_atom","lhs":"c0","rhs":"c0","premises":[]}"#
    );
    let tree = itsub(&["derive", "c0 & c1", "c1 & c0", "--format", "tree"]);
    let text = stdout(&tree);
    assert!(text.starts_with("c0 & c1 <: c1 & c0  [glb]"), "{text}");
    assert_eq!(itsub(&["derive", "c0", "c1"]).status.code(), Some(1));
}

#[test]
fn unicode_aliases() {
    let out = itsub(&["check", "(c0 → c1) ∩ (c0 → c2)", "c0 -> c1 & c2"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn bcd_search_and_inconclusive() {
    let out = itsub(&["bcd", "(c0 -> c1) & (c0 -> c2)", "c0 -> c1 & c2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains(r#""rule":"arrow_inter""#));
    let none = itsub(&["bcd", "c0", "c1"]);
    assert_eq!(none.status.code(), Some(1));
    assert_eq!(stdout(&none).trim(), "inconclusive");
    let shallow = itsub(&["bcd", "c0 & c1", "c1 & c0", "--max-depth", "1"]);
    assert_eq!(stdout(&shallow).trim(), "inconclusive");
}

#[test]
fn translate_both_ways() {
    let a = "(c0 -> c1) & (c0 -> c2)";
    let b = "c0 -> c1 & c2";
    let cert = stdout(&itsub(&["derive", a, b]));
    let file = scratch("new.json", &cert);
    let out = itsub(&["translate", file.to_str().unwrap(), "--to", "bcd"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let bcd = stdout(&out);
    assert!(bcd.contains(&format!(r#""lhs":"{a}","rhs":"{b}""#)), "{bcd}");

    let file = scratch("bcd.json", &bcd);
    let back = itsub(&["translate", file.to_str().unwrap(), "--to", "new"]);
    assert!(back.status.success());
    assert!(stdout(&back).contains(r#""rule":"arrow_prime""#));
}

#[test]
fn translate_rejects_bad_certificates() {
    let bogus = r#"{"rule":"refl_atom","lhs":"c0","rhs":"c1","premises":[]}"#;
    let file = scratch("bogus.json", bogus);
    let out = itsub(&["translate", file.to_str().unwrap(), "--to", "bcd"]);
    assert_eq!(out.status.code(), Some(2));
    let missing = itsub(&["translate", "/nonexistent/cert.json", "--to", "bcd"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn trans_composes() {
    let out = itsub(&["trans", "(c0 -> c1) & (c0 -> c2)", "c0 -> c1 & c2", "c0 -> c2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains(r#""lhs":"(c0 -> c1) & (c0 -> c2)","rhs":"c0 -> c2""#), "{text}");
    assert_eq!(itsub(&["trans", "c0", "c1", "c1"]).status.code(), Some(1));
}

#[test]
fn consistency_commands() {
    assert_eq!(itsub(&["consistent", "c0 -> c1", "c1 -> c0"]).status.code(), Some(0));
    assert_eq!(itsub(&["consistent", "c0 -> c1", "c0 -> c2"]).status.code(), Some(1));
    assert_eq!(itsub(&["self-consistent", "c0 & c1"]).status.code(), Some(1));
    assert_eq!(itsub(&["self-consistent", "U & c1"]).status.code(), Some(0));
}

#[test]
fn suite_reports() {
    let out = itsub(&["suite", "prop1", "--max-size", "1"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("PASS prop1 (atoms=2 max_size=1)"));

    let json = itsub(&["suite", "transitivity", "--max-size", "1", "--report", "json"]);
    let text = stdout(&json);
    assert!(text.contains(r#""name": "transitivity""#), "{text}");
    assert!(text.contains(r#""failure_count": 0"#));
    assert!(!text.contains("wall_time"));

    let again = itsub(&["suite", "transitivity", "--max-size", "1", "--report", "json", "--jobs", "1"]);
    assert_eq!(stdout(&again), text);

    let unknown = itsub(&["suite", "nope"]);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn shallow_consistency_pairs_are_noted() {
    let out = itsub(&["suite", "consistency-derivation", "--max-size", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("note: shallow endpoints"));
}
