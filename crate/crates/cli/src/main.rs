//! `asmm`: run litmus tests against the SC, RC11, x86 and mixed models.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use asmm::compile::Scheme;
use asmm::lang::ModelId;

#[derive(Parser)]
#[command(name = "asmm", version, about = "Litmus checker for C11 programs with x86 inline assembly")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
pub struct Common {
    /// Read-value domain, e.g. `0,1`. Defaults to the file's `values` line, else a closure of the program's literals.
    #[arg(long, value_delimiter = ',', global = true)]
    pub values: Option<Vec<u64>>,
    /// Step bound for graph enumeration.
    #[arg(long, default_value_t = asmm::opsem::DEFAULT_BOUND, global = true)]
    pub bound: usize,
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Directory for Graphviz files of the executions examined.
    #[arg(long, global = true)]
    pub dot: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run litmus files and check their expectations.
    Run {
        files: Vec<PathBuf>,
        /// Models to run; defaults to those named by expectations, else every applicable model.
        #[arg(long, short)]
        model: Vec<ModelId>,
    },
    /// Compare the behavior sets of one file under two models.
    Compare {
        file: PathBuf,
        a: ModelId,
        b: ModelId,
    },
    /// Print the compiled assembly program.
    Compile {
        file: PathBuf,
        #[arg(long, default_value = "standard")]
        scheme: Scheme,
    },
    /// Check that compiled final memories are final memories of the source.
    CheckCompilation {
        file: PathBuf,
        /// Scheme to check; both when omitted.
        #[arg(long)]
        scheme: Option<Scheme>,
    },
    /// Check that a program transformation adds no behavior.
    CheckTransform {
        file: PathBuf,
        /// Transformation spec such as `strengthen:0/1:rel`, `merge:0/0`, `deorder:1`,
        /// `promote:z:0`, `seq-nitia:0,1`; `all` sweeps every applicable sound transformation.
        #[arg(long, short, required = true)]
        transform: Vec<String>,
    },
    /// Check data-race freedom and, when it holds, equality with SC behaviors.
    CheckDrf {
        file: PathBuf,
    },
    /// Check the transfer principle over every compiled execution.
    CheckTransfer {
        file: PathBuf,
        #[arg(long)]
        scheme: Option<Scheme>,
        /// Use the literal ordering rule for sfence-headed writes.
        #[arg(long)]
        literal: bool,
    },
    /// Run the built-in corpus with every check.
    Corpus {
        /// Print the names of the corpus tests.
        #[arg(long)]
        list: bool,
        /// Print the source of one corpus test.
        #[arg(long)]
        show: Option<String>,
    },
}

/// How a command ended; maps to the process exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass = 0,
    Fail = 1,
    Overflow = 3,
}

impl Status {
    pub fn of(pass: bool, overflow: bool) -> Status {
        match (pass, overflow) {
            (_, true) => Status::Overflow,
            (true, false) => Status::Pass,
            (false, false) => Status::Fail,
        }
    }
}

fn configure_threads() -> Result<(), commands::CliError> {
    if let Ok(n) = std::env::var("ASMM_THREADS") {
        let n: usize = n.parse().map_err(|_| commands::CliError::Usage(format!("ASMM_THREADS must be a number, got `{n}`")))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| commands::CliError::Usage(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = cli.common;
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Run { files, model } => commands::run(&files, &model, &common),
        Command::Compare { file, a, b } => commands::compare(&file, a, b, &common),
        Command::Compile { file, scheme } => commands::compile(&file, scheme),
        Command::CheckCompilation { file, scheme } => commands::check_compilation(&file, scheme, &common),
        Command::CheckTransform { file, transform } => commands::check_transform(&file, &transform, &common),
        Command::CheckDrf { file } => commands::check_drf(&file, &common),
        Command::CheckTransfer { file, scheme, literal } => commands::check_transfer(&file, scheme, literal, &common),
        Command::Corpus { list, show } => commands::corpus(list, show.as_deref(), &common),
    });
    match result {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
