//! `fitype`: validate finite categories, build Grothendieck constructions and
//! audit fibrations and FI-type conditions.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use input::Inputs;

#[derive(Parser)]
#[command(name = "fitype", version, about)]
struct Cli {
    /// Print a machine-readable report with stable key order.
    #[arg(long, global = true)]
    json: bool,
    /// Suppress the human-readable report; only the exit code remains.
    #[arg(long, global = true)]
    quiet: bool,
    /// Write the built-in corpus of indexed categories and witnesses to a
    /// directory before running the command.
    #[arg(long, value_name = "DIR")]
    seed_corpus: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a category, functor or indexed-category file.
    Validate { file: PathBuf },
    /// Validate a functor and report fullness, faithfulness and essential surjectivity.
    Functor { file: PathBuf },
    /// Audit the seven FI-type conditions of a category.
    Fitype {
        /// Category file or built-in name.
        category: String,
    },
    /// Build the Grothendieck construction of an indexed category.
    Groth {
        file: PathBuf,
        /// Where to write the total category.
        #[arg(short, long)]
        output: PathBuf,
        /// Where to write the projection functor.
        #[arg(long)]
        projection: Option<PathBuf>,
    },
    /// Decide whether a functor is a fibration.
    Fibration { file: PathBuf },
    /// Choose cartesian lifts for a fibration and test the split law.
    Cleaving { file: PathBuf },
    /// Check the hypotheses and the conclusion of the main theorem.
    Theorem(TheoremArgs),
    /// Group extensions and twisted actions.
    #[command(subcommand)]
    Group(GroupCommand),
    /// Generate categories and indexed categories.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Run every check on the built-in corpus.
    Corpus,
}

#[derive(Args)]
struct TheoremArgs {
    file: PathBuf,
    /// Witness file with pushforward functors and units.
    #[arg(long, conflicts_with = "search")]
    witness: Option<PathBuf>,
    /// Search for a witness when none is given.
    #[arg(long)]
    search: bool,
    /// Candidate budget for the witness search.
    #[arg(long, default_value_t = 1_000_000, requires = "search")]
    budget: usize,
}

#[derive(Subcommand)]
enum GroupCommand {
    /// Build the extension group of a twisted action.
    Ext {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Derive the twisted action of a surjective homomorphism and a section.
    Twist {
        file: PathBuf,
        /// Section images of the target's elements in order, comma-separated;
        /// the least section by default.
        #[arg(long)]
        section: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decide whether a surjective homomorphism has a homomorphic section.
    Split { file: PathBuf },
}

#[derive(Subcommand)]
enum GenCommand {
    /// FI truncated at `--max`.
    Fi {
        #[arg(long)]
        max: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decorated injections over a group, built directly.
    Fig {
        #[arg(long)]
        group: String,
        #[arg(long)]
        max: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// `n ↦ Gⁿ` over truncated FI, with its reversibility witness.
    Gpow {
        #[arg(long)]
        group: String,
        #[arg(long)]
        max: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        witness_output: Option<PathBuf>,
    },
    /// The constant indexed category.
    Delta {
        /// Base category file or built-in name.
        #[arg(long)]
        base: String,
        /// Fiber category file or built-in name.
        #[arg(long)]
        fiber: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Block permutations `n ↦ FI(≤inner)ⁿ` over `FI(≤max)`.
    Blocks {
        #[arg(long)]
        max: usize,
        #[arg(long)]
        inner: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Slices reindexed by chosen pullbacks.
    Slice {
        /// Category file or built-in name.
        category: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// A command's verdict, its human-readable lines and its JSON report, all
/// derived from one computation.
pub struct Outcome {
    pub holds: Option<bool>,
    pub lines: Vec<String>,
    pub report: Value,
}

fn run(command: &Command, inputs: &mut Inputs) -> anyhow::Result<(&'static str, Outcome)> {
    use commands as c;
    Ok(match command {
        Command::Validate { file } => ("validate", c::validate(inputs, file)?),
        Command::Functor { file } => ("functor", c::functor(inputs, file)?),
        Command::Fitype { category } => ("fitype", c::fitype(inputs, category)?),
        Command::Groth {
            file,
            output,
            projection,
        } => ("groth", c::groth(inputs, file, output, projection.as_deref())?),
        Command::Fibration { file } => ("fibration", c::fibration(inputs, file)?),
        Command::Cleaving { file } => ("cleaving", c::cleaving(inputs, file)?),
        Command::Theorem(a) => (
            "theorem",
            c::theorem(inputs, &a.file, a.witness.as_deref(), a.search.then_some(a.budget))?,
        ),
        Command::Group(g) => match g {
            GroupCommand::Ext { file, output } => ("group ext", c::group_ext(inputs, file, output.as_deref())?),
            GroupCommand::Twist { file, section, output } => (
                "group twist",
                c::group_twist(inputs, file, section.as_deref(), output.as_deref())?,
            ),
            GroupCommand::Split { file } => ("group split", c::group_split(inputs, file)?),
        },
        Command::Gen(g) => ("gen", c::generate(inputs, g)?),
        Command::Corpus => ("corpus", c::corpus()?),
    })
}

fn emit(cli: &Cli, command: &str, inputs: &Inputs, outcome: &Outcome) {
    if cli.json {
        let envelope = json!({
            "tool": "fitype",
            "version": env!("CARGO_PKG_VERSION"),
            "command": command,
            "inputs": inputs.digests,
            "holds": outcome.holds,
            "report": outcome.report,
        });
        println!("{}", serde_json::to_string_pretty(&envelope).expect("JSON report"));
    } else if !cli.quiet {
        for l in &outcome.lines {
            println!("{l}");
        }
        match outcome.holds {
            Some(true) => println!("verdict: holds"),
            Some(false) => println!("verdict: fails"),
            None => {}
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(dir) = &cli.seed_corpus {
        match commands::seed_corpus(dir) {
            Ok(n) if !cli.quiet && !cli.json => println!("seeded {n} corpus files into {}", dir.display()),
            Ok(_) => {}
            Err(e) => {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
        }
    }
    let Some(command) = &cli.command else {
        if cli.seed_corpus.is_some() {
            return ExitCode::SUCCESS;
        }
        eprintln!("error: no command given; see `fitype --help`");
        return ExitCode::from(2);
    };
    let mut inputs = Inputs::default();
    match run(command, &mut inputs) {
        Ok((name, outcome)) => {
            emit(&cli, name, &inputs, &outcome);
            if outcome.holds == Some(false) {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
