use std::io::Write;
use std::process::{Command, Output, Stdio};

use catgram_core::prover::Derivation;

fn catgram(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catgram")).args(args).output().expect("binary runs")
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_catgram"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn temp_file(name: &str, contents: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("catgram-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn prove_exit_codes() {
    let o = catgram(&["a/b, b/c => a/c"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("/e"));

    let o = catgram(&["n => np"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("free-group check failed"));

    assert_eq!(code(&catgram(&[" => n/n"])), 1);
    assert_eq!(code(&catgram(&["--allow-empty", " => n/n"])), 0);

    let o = catgram(&["a/(b => a"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn json_round_trip_is_idempotent() {
    let o = catgram(&["--output", "json", "--all", "a, (a\\b)/c, c => b"]);
    assert_eq!(code(&o), 0);
    let first = stdout(&o);
    let parsed: Vec<Derivation> = serde_json::from_str(&first).unwrap();
    assert!(!parsed.is_empty());
    let again = serde_json::to_string_pretty(&parsed).unwrap();
    assert_eq!(again.trim(), first.trim());
    let reparsed: Vec<Derivation> = serde_json::from_str(&again).unwrap();
    assert_eq!(reparsed, parsed);
}

#[test]
fn latex_output() {
    let o = catgram(&["--output", "latex", "a/b, b => a"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("\\infer"));
}

#[test]
fn semantics_of_the_sosta_sentence() {
    let o = catgram(&["--lexicon", "builtin:sosta", "--mode", "semantics", "some statements speak_about themselves"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "exists x:e. (statement(x) /\\ speak_about(x,x))");

    let o = catgram(&[
        "--lexicon",
        "builtin:sosta",
        "--mode",
        "semantics",
        "--output",
        "json",
        "some statements speak_about themselves",
    ]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let reading = &v.as_array().unwrap()[0];
    for key in ["derivation", "term", "formula"] {
        assert!(reading.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn unknown_word_and_no_parse() {
    let o = catgram(&["--lexicon", "builtin:sosta", "--mode", "semantics", "some zzz"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("zzz"));
    let o = catgram(&["--lexicon", "builtin:sosta", "--mode", "semantics", "themselves some"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn italian_parse_tree() {
    let o = catgram(&["--lexicon", "builtin:italian", "--mode", "parse", "guarda passare il treno"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert_eq!(out.matches("/e").count(), 3, "{out}");
    for w in ["S/inf", "inf/np", "np/n"] {
        assert!(out.contains(w), "{out}");
    }
}

#[test]
fn check_lexicon_reports() {
    let o = catgram(&["--mode", "check-lexicon", "--lexicon", "builtin:sosta"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("OK   line")).count(), 4);

    let empty = temp_file("empty.lex", "");
    let o = catgram(&["--mode", "check-lexicon", "--lexicon", empty.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("0 entries"));
    assert!(stderr(&o).contains("warning"));

    let bad = temp_file("bad.lex", "const r : e -> e -> t\nw :: np\\S :: \\x:e. \\y:e. r x y\n");
    let o = catgram(&["--mode", "check-lexicon", "--lexicon", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let line = stdout(&o).lines().find(|l| l.starts_with("FAIL line")).unwrap().to_string();
    assert!(line.contains("e -> t") && line.contains("e -> e -> t"), "{line}");

    let o = catgram(&["--mode", "check-lexicon", "--lexicon", "/nonexistent/lexicon.lex"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn fictive_mode() {
    let o = catgram(&["--mode", "fictive"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("monte(e,x)"));
    let o = catgram(&["--mode", "fictive", "livre volumineux intéressant"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("f_phys(livre)"));
    let o = catgram(&["--mode", "fictive", "livre volumineux"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn batch_mode_reports_the_worst_outcome() {
    let o = with_stdin(&[], "a/b, b => a\nb => a\n");
    assert_eq!(code(&o), 1);
    let o = with_stdin(&[], "a/b, b => a\n\na => a\n");
    assert_eq!(code(&o), 0);
    let o = with_stdin(&[], "a => a\n((\n");
    assert_eq!(code(&o), 2);
    let o = with_stdin(
        &["--lexicon", "builtin:sosta", "--mode", "semantics"],
        "some statements speak_about themselves\nsome zzz\n",
    );
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("statement(x)"));
}

#[test]
fn bad_arguments_are_input_errors() {
    assert_eq!(code(&catgram(&["--max-derivations", "0", "a => a"])), 2);
    assert_eq!(code(&catgram(&["--mode", "nonsense", "a => a"])), 2);
    assert_eq!(code(&catgram(&["--goal", "(S", "--lexicon", "builtin:sosta", "--mode", "parse", "statements"])), 2);
}
