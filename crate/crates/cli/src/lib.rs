//! File formats, reports and the command pipeline behind the `torific`
//! binary.

pub mod commands;
pub mod format;
pub mod paper;
pub mod report;
pub mod trace;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;

use commands::{CliError, Outcome, TorifyOptions};
use format::{FanFile, IdealFile};

#[derive(Debug, Parser)]
#[command(name = "torific", version, about = "Toric cobordisms, their pieces and torific blowups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the artifact (the cobordism file for `cobordize`, the JSON
    /// report otherwise) to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print an indented text rendering instead of JSON.
    #[arg(long, global = true)]
    pub text: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a fan and describe its cones and support.
    Check { fan: PathBuf },
    /// Dual cones and their Hilbert bases for each maximal cone.
    Dual { fan: PathBuf },
    /// Boundary subfans of a cobordism and their quotients.
    Boundary { cobordism: PathBuf },
    /// Build the cobordism of the blowup of a smooth fan along an ideal.
    Cobordize {
        base: PathBuf,
        ideals: PathBuf,
        /// Fan expected as the lower quotient.
        #[arg(long)]
        expect_lower: Option<PathBuf>,
        /// Fan expected as the upper quotient.
        #[arg(long)]
        expect_upper: Option<PathBuf>,
    },
    /// Order on dependent cones and an increasing labeling.
    Chi { cobordism: PathBuf },
    /// Quasi-elementary pieces.
    Pieces { cobordism: PathBuf },
    /// Torific blowup of every smooth maximal chart.
    Torify {
        cobordism: PathBuf,
        #[command(flatten)]
        torific: TorificArgs,
    },
    /// Full factorization trace between the two quotients.
    Factor {
        cobordism: PathBuf,
        #[command(flatten)]
        torific: TorificArgs,
    },
    /// Recompute the built-in A³ example and compare with the pinned values.
    PaperExample {
        /// Also append the balancing character.
        #[arg(long)]
        balanced: bool,
        /// Compare against this fixture instead of the built-in one.
        #[arg(long)]
        fixture: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct TorificArgs {
    /// Append the character making the sum of characters zero.
    #[arg(long)]
    pub balanced: bool,
    /// Extra characters, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub characters: Vec<BigInt>,
}

impl From<&TorificArgs> for TorifyOptions {
    fn from(a: &TorificArgs) -> Self {
        TorifyOptions { balanced: a.balanced, characters: a.characters.clone() }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

pub fn read_fan_file(path: &Path) -> Result<FanFile, CliError> {
    FanFile::parse(&read(path)?).map_err(|source| CliError::Parse { path: path.display().to_string(), source })
}

pub fn read_ideal_file(path: &Path) -> Result<IdealFile, CliError> {
    IdealFile::parse(&read(path)?).map_err(|source| CliError::Parse { path: path.display().to_string(), source })
}

/// Runs one subcommand; writing output is left to the caller.
pub fn execute(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Check { fan } => Ok(commands::check(&read_fan_file(fan)?)),
        Command::Dual { fan } => commands::dual(&read_fan_file(fan)?),
        Command::Boundary { cobordism } => {
            commands::boundary(&commands::load_cobordism(&read_fan_file(cobordism)?)?)
        }
        Command::Cobordize { base, ideals, expect_lower, expect_upper } => {
            let load = |p: &Option<PathBuf>| -> Result<_, CliError> {
                p.as_deref().map(|p| commands::load_fan(&read_fan_file(p)?)).transpose()
            };
            let lower = load(expect_lower)?;
            let upper = load(expect_upper)?;
            commands::cobordize(&read_fan_file(base)?, &read_ideal_file(ideals)?, lower.as_ref(), upper.as_ref())
        }
        Command::Chi { cobordism } => commands::chi(&commands::load_cobordism(&read_fan_file(cobordism)?)?),
        Command::Pieces { cobordism } => {
            commands::pieces(&commands::load_cobordism(&read_fan_file(cobordism)?)?)
        }
        Command::Torify { cobordism, torific } => {
            let cob = commands::load_cobordism(&read_fan_file(cobordism)?)?;
            Ok(commands::torify(&cob, &torific.into()))
        }
        Command::Factor { cobordism, torific } => {
            let cob = commands::load_cobordism(&read_fan_file(cobordism)?)?;
            commands::factor(&cob, &torific.into())
        }
        Command::PaperExample { balanced, fixture } => {
            let text = match fixture {
                Some(p) => read(p)?,
                None => paper::PINNED_FIXTURE.to_string(),
            };
            commands::paper_example(*balanced, &text)
        }
    }
}
