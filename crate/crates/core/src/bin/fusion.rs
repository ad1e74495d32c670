use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use fusion_core::dual::{Annihilation, ConstraintFamily};
use fusion_core::linalg::Rat;
use fusion_core::report::{emit, run, Format, RunConfig, RunError, SingularLevel, Subcommand};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Command {
    Singular,
    ModuleBasis,
    Fuse,
    Dual,
    Crosscheck,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    Standard,
    Extended,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kill {
    Words,
    Modes,
}

/// Exact fusion computations for Virasoro and Heisenberg modules.
#[derive(Debug, Parser)]
#[command(name = "fusion", version)]
struct Cli {
    command: Command,
    /// virasoro or heisenberg
    #[arg(long, default_value = "virasoro")]
    algebra: String,
    #[arg(long, allow_hyphen_values = true)]
    central_charge: Option<Rat>,
    #[arg(long, allow_hyphen_values = true)]
    h1: Option<Rat>,
    /// Defaults to --h1
    #[arg(long, allow_hyphen_values = true)]
    h2: Option<Rat>,
    #[arg(long, allow_hyphen_values = true)]
    lambda1: Option<Rat>,
    /// Defaults to --lambda1
    #[arg(long, allow_hyphen_values = true)]
    lambda2: Option<Rat>,
    /// Level of a singular vector to impose: N for both modules, 1=N or 2=N for one
    #[arg(long = "singular-level")]
    singular_levels: Vec<SingularLevel>,
    /// Detect singular vectors up to this level when none are given
    #[arg(long)]
    auto_singular_max: Option<usize>,
    #[arg(long, default_value_t = 0)]
    depth: usize,
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    w: Rat,
    /// Truncation level; defaults to depth + deepest singular level + 2
    #[arg(long)]
    lmax: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
    /// Also solve the dual system and compare
    #[arg(long)]
    check_dual: bool,
    #[arg(long, value_enum, default_value = "standard")]
    constraint_family: Family,
    #[arg(long, value_enum, default_value = "words")]
    annihilation: Kill,
}

impl Cli {
    fn config(self) -> RunConfig {
        let mut c = RunConfig::new(match self.command {
            Command::Singular => Subcommand::Singular,
            Command::ModuleBasis => Subcommand::ModuleBasis,
            Command::Fuse => Subcommand::Fuse,
            Command::Dual => Subcommand::Dual,
            Command::Crosscheck => Subcommand::Crosscheck,
        });
        c.algebra = self.algebra;
        c.central_charge = self.central_charge;
        c.h1 = self.h1;
        c.h2 = self.h2;
        c.lambda1 = self.lambda1;
        c.lambda2 = self.lambda2;
        c.singular_levels = self.singular_levels;
        c.auto_singular_max = self.auto_singular_max;
        c.depth = self.depth;
        c.w = self.w;
        c.lmax = self.lmax;
        c.format = match self.format {
            OutputFormat::Json => Format::Json,
            OutputFormat::Text => Format::Text,
        };
        c.check_dual = self.check_dual;
        c.constraint_family = match self.constraint_family {
            Family::Standard => ConstraintFamily::Standard,
            Family::Extended => ConstraintFamily::Extended,
        };
        c.annihilation = match self.annihilation {
            Kill::Words => Annihilation::Words,
            Kill::Modes => Annihilation::Modes,
        };
        c
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let config = cli.config();
    let mut out = std::io::stdout().lock();
    match run(&config) {
        Ok(doc) => {
            let _ = out.write_all(emit(&doc, config.format).as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            if let RunError::Mismatch(doc) = &e {
                let _ = out.write_all(emit(doc, config.format).as_bytes());
            }
            eprintln!("fusion: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
