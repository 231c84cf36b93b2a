//! End-to-end behavior of the `orbas` binary: repository lifecycle, env
//! resolution, exit codes, and frozen search output.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn crate_dir() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

fn corpus_paths() -> Vec<String> {
    let dir = crate_dir().join("tests/fixtures/corpus");
    let mut paths: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            p.strip_prefix(crate_dir()).unwrap().to_string_lossy().into_owned()
        })
        .collect();
    paths.sort();
    paths
}

/// Runs the binary from the crate root with a clean environment.
fn orbas(args: &[&str]) -> Output {
    orbas_with_env(args, &[])
}

fn orbas_with_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_orbas"));
    cmd.args(args).current_dir(crate_dir()).env_remove("ORBAS_REPO");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

/// init + add the 12-file corpus into a fresh temp repository.
fn seeded_repo() -> (TempDir, String) {
    let dir = TempDir::new().unwrap();
    let repo = dir.path().to_string_lossy().into_owned();
    assert_eq!(code(&orbas(&["init", &repo])), 0);
    let paths = corpus_paths();
    let mut args: Vec<&str> = vec!["add", &repo];
    args.extend(paths.iter().map(String::as_str));
    let out = orbas(&args);
    assert_eq!(code(&out), 0, "add failed: {}", stderr(&out));
    (dir, repo)
}

#[test]
fn lifecycle_init_add_stats_remove() {
    let (_guard, repo) = seeded_repo();

    let out = orbas(&["stats", &repo]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "entries: 12\nsequences: 13\nmethod keys: 38\n");

    let out = orbas(&["remove", &repo, "tests/fixtures/corpus/db_basic.java"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "removed 1\n");

    let out = orbas(&["stats", &repo]);
    assert!(stdout(&out).starts_with("entries: 11\n"));

    let out = orbas(&["remove", &repo, "f000099"]);
    assert_eq!(stdout(&out), "removed 0\n");
}

#[test]
fn add_reports_unchanged_and_updated() {
    let (_guard, repo) = seeded_repo();
    let out = orbas(&["add", &repo, "tests/fixtures/corpus/db_basic.java"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("unchanged f000002 "));
}

#[test]
fn search_matches_frozen_text_golden() {
    let (_guard, repo) = seeded_repo();
    let out = orbas(&["search", &repo, "Connection.open"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let golden =
        fs::read_to_string(crate_dir().join("tests/golden/search_connection_open.txt")).unwrap();
    assert_eq!(stdout(&out), golden);
}

#[test]
fn search_matches_frozen_json_golden() {
    let (_guard, repo) = seeded_repo();
    let out = orbas(&["search", &repo, "Connection.open", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let golden =
        fs::read_to_string(crate_dir().join("tests/golden/search_connection_open.json")).unwrap();
    assert_eq!(stdout(&out), golden);

    let parsed: orbas_cli::render::JsonReport = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed.query, "Connection.open");
    assert!(parsed.recommendations.iter().all(|r| r.calls.contains(&"java.sql.Connection.open".to_string())));
}

#[test]
fn search_for_absent_method_is_empty_and_ok() {
    let (_guard, repo) = seeded_repo();
    let out = orbas(&["search", &repo, "Imaginary.thing"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "no patterns found\n");
}

#[test]
fn unanimous_identical_sequences_yield_one_recommendation() {
    let dir = TempDir::new().unwrap();
    let repo = dir.path().join("repo").to_string_lossy().into_owned();
    assert_eq!(code(&orbas(&["init", &repo])), 0);

    let src = "import java.sql.Connection; class T { Connection c; void m() { c.open(); c.close(); } }";
    let mut paths = Vec::new();
    for n in 0..3 {
        let p = dir.path().join(format!("copy{n}.java"));
        fs::write(&p, src).unwrap();
        paths.push(p.to_string_lossy().into_owned());
    }
    let mut args = vec!["add", repo.as_str()];
    args.extend(paths.iter().map(String::as_str));
    assert_eq!(code(&orbas(&args)), 0);

    let out = orbas(&["search", &repo, "open", "--min-sup", "1.0"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("#1 coverage=3 support=1.00 merged=1\n"), "got:\n{text}");
    assert!(!text.contains("#2 "));
}

#[test]
fn env_variable_supplies_the_repository() {
    let (_guard, repo) = seeded_repo();
    let out = orbas_with_env(&["stats"], &[("ORBAS_REPO", repo.as_str())]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("entries: 12\n"));

    // With the env set, every `add` argument is a source path.
    let out = orbas_with_env(
        &["add", "tests/fixtures/corpus/db_basic.java"],
        &[("ORBAS_REPO", repo.as_str())],
    );
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("unchanged "));

    let out = orbas_with_env(&["search", "Connection.open"], &[("ORBAS_REPO", repo.as_str())]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("#1 "));
}

#[test]
fn usage_errors_exit_1() {
    let out = orbas(&["stats"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("ORBAS_REPO"));

    let out = orbas(&["definitely-not-a-command"]);
    assert_eq!(code(&out), 1);

    let (_guard, repo) = seeded_repo();
    let out = orbas(&["search", &repo, "open", "--tau1", "1.5"]);
    assert_eq!(code(&out), 1);
    let out = orbas(&["search", &repo, "open", "--min-sup", "bogus"]);
    assert_eq!(code(&out), 1);
    let out = orbas(&["search", &repo, "open", "--top", "0"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn corrupt_repository_exits_2() {
    let (_guard, repo) = seeded_repo();
    let file = PathBuf::from(&repo).join("repo.xml");
    let text = fs::read_to_string(&file).unwrap();
    fs::write(&file, &text[..text.len() / 3]).unwrap();

    let out = orbas(&["search", &repo, "open"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("corrupt"));

    let out = orbas(&["stats", &repo]);
    assert_eq!(code(&out), 2);
}

#[test]
fn io_failures_exit_3_with_partial_success() {
    let (_guard, repo) = seeded_repo();

    let out = orbas(&["search", "/nonexistent/repo", "open"]);
    assert_eq!(code(&out), 3);

    let dir = TempDir::new().unwrap();
    let good = dir.path().join("ok.java");
    fs::write(&good, "class K { A a; void m() { a.b(); } }").unwrap();
    let good = good.to_string_lossy().into_owned();
    let out = orbas(&["add", &repo, "/nonexistent/source.java", &good]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("/nonexistent/source.java"));
    // The readable file still made it in.
    assert!(stdout(&out).contains("added "));

    // Re-running init over an existing repository is an I/O-level refusal.
    let out = orbas(&["init", &repo]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("already exists"));
}

#[test]
fn search_output_is_byte_deterministic() {
    let (_guard, repo) = seeded_repo();
    for format in ["text", "json"] {
        let a = orbas(&["search", &repo, "close", "--format", format]);
        let b = orbas(&["search", &repo, "close", "--format", format]);
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout, "{format} output changed between runs");
    }
}

#[test]
fn rendered_representatives_always_contain_a_query_match() {
    let (_guard, repo) = seeded_repo();
    for query in ["Connection.open", "close", "Socket.send", "query", "write"] {
        let out = orbas(&["search", &repo, query, "--format", "json"]);
        assert_eq!(code(&out), 0);
        let parsed: orbas_cli::render::JsonReport = serde_json::from_str(&stdout(&out)).unwrap();
        let parsed_query = orbas_core::MethodQuery::parse(query).unwrap();
        for rec in &parsed.recommendations {
            let any = rec.calls.iter().any(|c| {
                let (class, method) = c.rsplit_once('.').unwrap();
                parsed_query.matches(&orbas_core::ApiCall::new(class, method))
            });
            assert!(any, "query {query}: representative without a matching call: {:?}", rec.calls);
        }
    }
}
