//! Argument definitions. The repository directory is the first positional
//! argument of every command; when `ORBAS_REPO` is set it may be omitted,
//! and for `add` an exported `ORBAS_REPO` means every argument is a source
//! path.

use clap::{Parser, Subcommand, ValueEnum};

pub const REPO_ENV: &str = "ORBAS_REPO";

#[derive(Parser, Debug)]
#[command(
    name = "orbas",
    version,
    about = "Offline API usage pattern search over an indexed source repository",
    after_help = "The repository directory may come from $ORBAS_REPO instead of the \
                  positional argument."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Create an empty repository
    Init {
        /// Repository directory (or $ORBAS_REPO)
        dir: Option<String>,
    },

    /// Extract and index source files
    Add {
        /// Repository directory followed by source paths; with $ORBAS_REPO
        /// set, every argument is a source path
        #[arg(required = true)]
        args: Vec<String>,
    },

    /// Remove one file by id (f000001) or path
    Remove {
        /// Repository directory (or $ORBAS_REPO) and selector
        #[arg(required = true)]
        args: Vec<String>,
    },

    /// Print entry, sequence and method-key counts
    Stats {
        /// Repository directory (or $ORBAS_REPO)
        dir: Option<String>,
    },

    /// Mine and rank usage patterns for an API method
    Search {
        /// Repository directory (or $ORBAS_REPO) and dotted method query
        #[arg(required = true)]
        args: Vec<String>,

        /// Minimum in-cluster support, e.g. 0.5 or 1/2
        #[arg(long, default_value = "0.5")]
        min_sup: String,

        /// Stage-1 clustering distance threshold between 0 and 1
        #[arg(long, default_value = "0.7")]
        tau1: String,

        /// Stage-2 consolidation similarity threshold between 0 and 1
        #[arg(long = "tau2", default_value = "0.15")]
        tau2: String,

        /// How many recommendations to render
        #[arg(long = "top", default_value_t = 10)]
        top: usize,

        /// Minimum pattern length in calls
        #[arg(long = "min-len", default_value_t = 2)]
        min_len: usize,

        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    /// Human-readable blocks
    Text,
    /// Machine-readable report
    Json,
}
