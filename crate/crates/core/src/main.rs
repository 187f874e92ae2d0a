use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use obinv::cli::{self, Command, Flags, OutputFormat};
use obinv::mapping::Stabilization;

#[derive(Parser)]
#[command(name = "obinv", version, about = "Invariants of contact structures from open books and surgery diagrams")]
struct Args {
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Exit with 2 when a result is undefined or inconclusive.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Pos,
    Neg,
}

#[derive(Subcommand)]
enum Cmd {
    /// Everything: homology, e, d3, Gamma, bounds and notes.
    Report { input: String },
    H1 { input: String },
    Euler { input: String },
    D3 { input: String },
    Gamma { input: String },
    /// Fundamental group presentation from `image`/`arcimage` lines.
    Pi1 { input: String },
    /// Prints the document with a stabilization appended.
    Stabilize { input: String, kind: Kind, b1: usize, b2: usize },
    /// Runs the bundled corpus.
    Corpus {
        #[arg(long)]
        filter: Option<String>,
    },
}

fn main() -> ExitCode {
    let args = Args::parse();
    let mut flags = Flags {
        format: match args.format {
            Format::Text => OutputFormat::Text,
            Format::Machine => OutputFormat::Machine,
        },
        strict: args.strict,
        filter: None,
    };
    let (command, input) = match args.command {
        Cmd::Corpus { filter } => {
            flags.filter = filter;
            let out = cli::corpus_outcome(&flags);
            print!("{}", out.stdout);
            return ExitCode::from(out.code as u8);
        }
        Cmd::Report { input } => (Command::Report, input),
        Cmd::H1 { input } => (Command::H1, input),
        Cmd::Euler { input } => (Command::Euler, input),
        Cmd::D3 { input } => (Command::D3, input),
        Cmd::Gamma { input } => (Command::Gamma, input),
        Cmd::Pi1 { input } => (Command::Pi1, input),
        Cmd::Stabilize { input, kind, b1, b2 } => {
            let kind = match kind {
                Kind::Pos => Stabilization::Positive,
                Kind::Neg => Stabilization::Negative,
            };
            (Command::Stabilize { kind, feet: (b1, b2) }, input)
        }
    };
    match cli::load(&input).and_then(|doc| cli::run(&command, &doc, &flags)) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("obinv: {e}");
            ExitCode::from(cli::EXIT_INPUT as u8)
        }
    }
}
