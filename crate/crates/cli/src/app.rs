//! Command dispatch. Every command resolves its repository directory from
//! the positional argument or `ORBAS_REPO`, acts, and maps failures onto the
//! documented exit codes.

use std::env;
use std::path::PathBuf;

use orbas_core::pipeline::{run_search, PipelineError, SearchParams};
use orbas_core::rational::parse_rational;
use orbas_core::repository::{AddStatus, RepositoryError, RepositoryIndex};

use crate::args::{Cli, Command, OutputFormat, REPO_ENV};
use crate::render::render;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CORRUPT: i32 = 2;
pub const EXIT_IO: i32 = 3;

enum CliError {
    Usage(String),
    Corrupt(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Corrupt(_) => EXIT_CORRUPT,
            CliError::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Corrupt(m) | CliError::Io(m) => m,
        }
    }
}

impl From<RepositoryError> for CliError {
    fn from(err: RepositoryError) -> CliError {
        match err {
            RepositoryError::Corrupt(_) => CliError::Corrupt(err.to_string()),
            RepositoryError::AlreadyExists(_) | RepositoryError::Io { .. } => {
                CliError::Io(err.to_string())
            }
        }
    }
}

impl From<PipelineError> for CliError {
    fn from(err: PipelineError) -> CliError {
        CliError::Usage(err.to_string())
    }
}

pub fn run(cli: Cli) -> i32 {
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("orbas: error: {}", err.message());
            err.code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Init { dir } => cmd_init(dir),
        Command::Add { args } => cmd_add(args),
        Command::Remove { args } => cmd_remove(args),
        Command::Stats { dir } => cmd_stats(dir),
        Command::Search { args, min_sup, tau1, tau2, top, min_len, format } => {
            cmd_search(args, &min_sup, &tau1, &tau2, top, min_len, format)
        }
    }
}

fn env_repo() -> Option<String> {
    env::var(REPO_ENV).ok().filter(|v| !v.is_empty())
}

/// Explicit positional first, environment second.
fn resolve_repo(explicit: Option<String>) -> Result<PathBuf, CliError> {
    explicit
        .or_else(env_repo)
        .map(PathBuf::from)
        .ok_or_else(|| CliError::Usage(format!("no repository directory given and ${REPO_ENV} is unset")))
}

fn cmd_init(dir: Option<String>) -> Result<i32, CliError> {
    let dir = resolve_repo(dir)?;
    RepositoryIndex::init(&dir)?;
    println!("initialized empty repository at {}", dir.display());
    Ok(EXIT_OK)
}

fn cmd_add(args: Vec<String>) -> Result<i32, CliError> {
    // With ORBAS_REPO exported every argument is a source path; otherwise
    // the first argument names the repository.
    let (dir, paths) = match env_repo() {
        Some(repo) => (PathBuf::from(repo), args),
        None => {
            let mut it = args.into_iter();
            let dir = it.next().expect("clap requires at least one argument");
            (PathBuf::from(dir), it.collect())
        }
    };
    if paths.is_empty() {
        return Err(CliError::Usage("no source paths given".into()));
    }

    let mut index = RepositoryIndex::load(&dir)?;
    let results = index.add_files(&paths);
    let mut failures = 0usize;
    for result in &results {
        match &result.outcome {
            Ok((id, AddStatus::Added)) => println!("added {id} {}", result.path),
            Ok((id, AddStatus::Unchanged)) => println!("unchanged {id} {}", result.path),
            Ok((id, AddStatus::Updated)) => println!("updated {id} {}", result.path),
            Err(err) => {
                failures += 1;
                eprintln!("orbas: error: {err}");
            }
        }
    }
    index.save(&dir)?;
    Ok(if failures > 0 { EXIT_IO } else { EXIT_OK })
}

fn cmd_remove(args: Vec<String>) -> Result<i32, CliError> {
    let (dir, selector) = split_repo_and_one(args, "file id or path")?;
    let mut index = RepositoryIndex::load(&dir)?;
    let removed = index.remove_file(&selector);
    index.save(&dir)?;
    println!("removed {removed}");
    Ok(EXIT_OK)
}

fn cmd_stats(dir: Option<String>) -> Result<i32, CliError> {
    let dir = resolve_repo(dir)?;
    let index = RepositoryIndex::load(&dir)?;
    let stats = index.stats();
    println!("entries: {}", stats.entries);
    println!("sequences: {}", stats.sequences);
    println!("method keys: {}", stats.method_keys);
    Ok(EXIT_OK)
}

fn cmd_search(
    args: Vec<String>,
    min_sup: &str,
    tau1: &str,
    tau2: &str,
    top: usize,
    min_len: usize,
    format: OutputFormat,
) -> Result<i32, CliError> {
    let (dir, query) = split_repo_and_one(args, "method query")?;
    let params = SearchParams {
        min_sup: parse_threshold("--min-sup", min_sup)?,
        tau1: parse_threshold("--tau1", tau1)?,
        tau2_sim: parse_threshold("--tau2", tau2)?,
        top_k: top,
        min_pattern_length: min_len,
    };
    params.validate()?;

    let index = RepositoryIndex::load(&dir)?;
    let outcome = run_search(&index, &query, &params)?;
    print!("{}", render(&query, &params, &outcome.recommendations, format));
    Ok(EXIT_OK)
}

/// Resolves `[repo] value` positionals: two arguments are (repo, value), one
/// argument is (env repo, value).
fn split_repo_and_one(args: Vec<String>, what: &str) -> Result<(PathBuf, String), CliError> {
    match args.len() {
        1 => {
            let dir = resolve_repo(None)?;
            Ok((dir, args.into_iter().next().expect("one argument")))
        }
        2 => {
            let mut it = args.into_iter();
            let dir = PathBuf::from(it.next().expect("two arguments"));
            Ok((dir, it.next().expect("two arguments")))
        }
        n => Err(CliError::Usage(format!(
            "expected repository directory and {what} (or ${REPO_ENV} plus {what}), got {n} arguments"
        ))),
    }
}

fn parse_threshold(flag: &str, text: &str) -> Result<orbas_core::Rational, CliError> {
    parse_rational(text).map_err(|err| CliError::Usage(format!("{flag}: {err}")))
}
