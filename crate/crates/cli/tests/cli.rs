//! End-to-end checks of the command-line surface: the documented corpus
//! runs, exit codes, error paths, and byte-reproducibility.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_omegasep"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn separate_sigma2_inf_from_fin_is_not_separable() {
    let input = corpus("infa.alg");
    let out = run(&[
        "separate",
        "--logic",
        "sigma2",
        "--input",
        input.to_str().unwrap(),
        "--l1",
        "INF",
        "--l2",
        "FIN",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("answer: not-separable"), "{text}");
    assert!(text.contains("((INF,INF),{a,b})"), "{text}");
    assert!(text.contains("((FIN,FIN),{a,b})"), "{text}");
}

#[test]
fn separate_sigma2_fin_from_inf_is_separable() {
    let input = corpus("infa.alg");
    let out = run(&[
        "separate",
        "--logic",
        "sigma2",
        "--input",
        input.to_str().unwrap(),
        "--l1",
        "FIN",
        "--l2",
        "INF",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("answer: separable"));
}

#[test]
fn member_bsigma2_inf_is_member() {
    let input = corpus("infa.alg");
    let out = run(&[
        "member",
        "--logic",
        "bsigma2",
        "--input",
        input.to_str().unwrap(),
        "--lang",
        "INF",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("answer: member"));
}

#[test]
fn validate_rejects_missing_table_entry() {
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.alg");
    let text = std::fs::read_to_string(corpus("infa.alg"))
        .unwrap()
        .replace("\"1,0\" = \"1\"\n", "");
    std::fs::write(&broken, text).unwrap();
    let out = run(&["validate", "--input", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("missing entry"), "{err}");
}

#[test]
fn validate_accepts_corpus_algebras() {
    for name in ["infa.alg", "evena.alg", "allb.alg", "universal.alg"] {
        let out = run(&["validate", "--input", corpus(name).to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{name}");
    }
}

#[test]
fn eval_word_and_lasso() {
    let input = corpus("infa.alg");
    let out = run(&[
        "eval",
        "--input",
        input.to_str().unwrap(),
        "--word",
        "ba",
    ]);
    assert_eq!(stdout(&out).trim(), "1");
    let out = run(&[
        "eval",
        "--input",
        input.to_str().unwrap(),
        "--lasso",
        "b(ab)^w",
    ]);
    assert_eq!(stdout(&out).trim(), "INF");
}

#[test]
fn convert_then_eval_agrees_with_direct_acceptance() {
    let dir = tempfile::tempdir().unwrap();
    let alg = dir.path().join("inf.alg");
    let out = run(&[
        "convert",
        "--buchi",
        corpus("infa.aut").to_str().unwrap(),
        "--out",
        alg.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    // Validate the produced file and check a few lasso evaluations against
    // known acceptance of "infinitely many a".
    let out = run(&["validate", "--input", alg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));

    let doc = omegasep_core::format::parse_algebra(&std::fs::read_to_string(&alg).unwrap()).unwrap();
    let lang = doc.language("INF").unwrap();
    let aut = omegasep_core::corpus::infa_automaton();
    for text in ["b(ab)^w", "a(b)^w", "(ab)^w", "ab(ba)^w", "(b)^w"] {
        let w = omegasep_core::words::parse_lasso(doc.morphism.alphabet(), text).unwrap();
        assert_eq!(
            lang.contains_lasso(&w).unwrap(),
            aut.accepts_lasso(&w),
            "{text}"
        );
    }
}

#[test]
fn graph_export_writes_dot() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("g.dot");
    let out = run(&[
        "graph",
        "--input",
        corpus("infa.alg").to_str().unwrap(),
        "--lang",
        "INF",
        "--dot",
        dot.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("digraph"));
    assert!(stdout(&out).contains("not recursive"));
}

#[test]
fn chains_dump_lists_tuples() {
    let out = run(&[
        "chains",
        "--level",
        "2",
        "--length",
        "2",
        "--input",
        corpus("infa.alg").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("realized by"));
}

#[test]
fn unknown_language_is_an_error() {
    let out = run(&[
        "member",
        "--logic",
        "bsigma2",
        "--input",
        corpus("infa.alg").to_str().unwrap(),
        "--lang",
        "NOPE",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reports_are_byte_reproducible() {
    let input = corpus("infa.alg");
    let args = [
        "separate",
        "--logic",
        "sigma2",
        "--input",
        input.to_str().unwrap(),
        "--l1",
        "INF",
        "--l2",
        "FIN",
        "--format",
        "structured",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);
    assert!(!first.stdout.is_empty());

    let member_args = [
        "member",
        "--logic",
        "bsigma2",
        "--input",
        corpus("evena.alg").to_str().unwrap(),
        "--lang",
        "EVENA",
        "--format",
        "structured",
    ];
    let first = run(&member_args);
    let second = run(&member_args);
    assert_eq!(first.stdout, second.stdout);
}
