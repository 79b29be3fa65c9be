//! The shipped binary honors its exit-code contract: 0 success, 1 no
//! results or failed checks, 2 usage and configuration errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn copy_tree(from: &Path, to: &Path) {
    fs::create_dir_all(to).unwrap();
    for entry in fs::read_dir(from).unwrap() {
        let entry = entry.unwrap();
        let target = to.join(entry.file_name());
        if entry.file_type().unwrap().is_dir() {
            copy_tree(&entry.path(), &target);
        } else {
            fs::copy(entry.path(), &target).unwrap();
        }
    }
}

/// Fresh copy of the fixture directory, safe to mutate.
fn setup() -> (tempfile::TempDir, PathBuf) {
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let dir = tempfile::tempdir().unwrap();
    let fx = dir.path().join("fx");
    copy_tree(&fixtures, &fx);
    // never inherit an index produced by ad-hoc runs against the fixtures
    let _ = fs::remove_file(fx.join("index.jsonl"));
    (dir, fx)
}

fn parsens(fx: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_parsens"))
        .arg("--config")
        .arg(fx.join("config.toml"))
        .args(args)
        .output()
        .unwrap()
}

fn build(fx: &Path) -> Output {
    let rome = fx.join("corpus/rome.txt");
    let empire = fx.join("corpus/empire.txt");
    parsens(fx, &["build", rome.to_str().unwrap(), empire.to_str().unwrap()])
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn build_is_deterministic_and_the_golden_question_answers() {
    let (_dir, fx) = setup();

    let out = build(&fx);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("sentences:             5"), "{}", stdout(&out));
    let first = fs::read(fx.join("index.jsonl")).unwrap();

    let out = build(&fx);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(first, fs::read(fx.join("index.jsonl")).unwrap(), "index not byte-stable");

    let out = parsens(
        &fx,
        &["ask", "De quel chef Domitien est-il le successeur ?", "--explain"],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("rome#0"), "{text}");
    assert!(text.contains("filler: empereur"), "{text}");
    assert!(text.contains("score 0.350"), "{text}");
    assert!(text.contains("derived"), "{text}");
}

#[test]
fn ask_errors_without_an_index_and_finds_nothing_politely() {
    let (_dir, fx) = setup();

    let out = parsens(&fx, &["ask", "Qui combattit les Parthes ?"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("build"), "{}", stderr(&out));

    build(&fx);
    let out = parsens(&fx, &["ask", "Qui combattit les Parthes ?"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("Trajan"), "{}", stdout(&out));

    let out = parsens(&fx, &["ask", "Le chef gouverne le vin ?"]);
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
    assert!(stdout(&out).contains("no answers"));
}

#[test]
fn search_exit_codes_follow_results() {
    let (_dir, fx) = setup();
    build(&fx);

    let out = parsens(&fx, &["search", "dep=VARG[DIR](remporter,*) & trait=MIL"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("victoire"), "{}", stdout(&out));

    // present only through expansion: invisible by default
    let out = parsens(&fx, &["search", "lemma=successeur"]);
    assert_eq!(out.status.code(), Some(1));
    let out = parsens(&fx, &["search", "lemma=successeur", "--expanded"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("rome#0"));

    let out = parsens(&fx, &["search", "sense=succéder@1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("succéda"));

    let out = parsens(&fx, &["search", "frequency=high"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("bad constraint"), "{}", stderr(&out));

    let out = parsens(&fx, &["search", "  "]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_reports_and_detects_staleness() {
    let (_dir, fx) = setup();

    let out = parsens(&fx, &["check"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("all checks passed"));

    build(&fx);

    // any fixture edit after the build must be caught
    let lex = fx.join("lexicon.tsv");
    let mut data = fs::read(&lex).unwrap();
    data.push(b'\n');
    fs::write(&lex, data).unwrap();

    let out = parsens(&fx, &["ask", "Qui combattit les Parthes ?"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("stale"), "{}", stderr(&out));

    let out = parsens(&fx, &["check"]);
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
    assert!(stdout(&out).contains("stale"));
}

#[test]
fn build_skips_unreadable_files_but_continues() {
    let (_dir, fx) = setup();
    let rome = fx.join("corpus/rome.txt");
    let out = parsens(
        &fx,
        &["build", fx.join("corpus/missing.txt").to_str().unwrap(), rome.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stderr(&out).contains("skipping"), "{}", stderr(&out));
    assert!(stdout(&out).contains("sentences:             3"), "{}", stdout(&out));
}

#[test]
fn empty_corpus_builds_a_valid_empty_index() {
    let (_dir, fx) = setup();
    let out = parsens(&fx, &["build"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("sentences:             0"));

    let out = parsens(&fx, &["search", "lemma=victoire"]);
    assert_eq!(out.status.code(), Some(1), "{}", stderr(&out));
}

#[test]
fn config_and_usage_errors_exit_two() {
    let (_dir, fx) = setup();

    let out = Command::new(env!("CARGO_BIN_EXE_parsens"))
        .args(["--config", "/nonexistent/config.toml", "check"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // bad scoring configuration
    let config = fx.join("config.toml");
    let text = fs::read_to_string(&config).unwrap();
    fs::write(&config, text.replace("synonym = 0.7", "synonym = 1.3")).unwrap();
    let out = parsens(&fx, &["check"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("synonym"), "{}", stderr(&out));

    // clap's own usage handling
    let out = Command::new(env!("CARGO_BIN_EXE_parsens"))
        .arg("frobnicate")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
