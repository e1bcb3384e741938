use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use jfy_cli::commands::{self, ExplainFormat, Failure, OpensDefault};
use jfy_cli::server::{self, AppState};
use jfy_core::branch::BranchEvaluation;
use jfy_core::fuzz::FuzzConfig;

#[derive(Parser)]
#[command(name = "jfy", version, about = "Justification-based semantics, explanations and decision sessions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the ground instantiation of a program.
    Ground { file: PathBuf },
    /// Compute the models of a program under one semantics.
    Models {
        /// wf, stable, kk or sp.
        #[arg(long)]
        semantics: BranchEvaluation,
        file: PathBuf,
        /// Open-atom assignment: a JSON file or an inline JSON object.
        #[arg(long)]
        opens: Option<String>,
        #[arg(long, value_enum, default_value_t)]
        opens_default: OpensDefault,
    },
    /// Print the witness justification of a fact.
    Explain {
        #[arg(long)]
        fact: String,
        #[arg(long)]
        semantics: BranchEvaluation,
        file: PathBuf,
        #[arg(long)]
        opens: Option<String>,
        #[arg(long, value_enum, default_value_t)]
        opens_default: OpensDefault,
        #[arg(long, value_enum, default_value_t)]
        format: ExplainFormat,
    },
    /// Compare the engine with the classical oracles on random programs.
    Check {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 6)]
        max_atoms: usize,
        #[arg(long, default_value_t = 12)]
        max_rules: usize,
        #[arg(long, default_value_t = 3)]
        max_body: usize,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        /// Persist sessions as JSON files in this directory.
        #[arg(long)]
        state_dir: Option<PathBuf>,
    },
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn opens(arg: &Option<String>) -> Result<Option<String>, Failure> {
    arg.as_deref().map(commands::read_opens).transpose()
}

fn run(command: Command) -> Result<String, Failure> {
    match command {
        Command::Ground { file } => commands::ground(&read(&file)?),
        Command::Models {
            semantics,
            file,
            opens: o,
            opens_default,
        } => commands::models(&read(&file)?, semantics, opens(&o)?.as_deref(), opens_default),
        Command::Explain {
            fact,
            semantics,
            file,
            opens: o,
            opens_default,
            format,
        } => commands::explain(&read(&file)?, &fact, semantics, opens(&o)?.as_deref(), opens_default, format),
        Command::Check {
            seed,
            count,
            max_atoms,
            max_rules,
            max_body,
        } => {
            let outcome = commands::check(&FuzzConfig {
                seed,
                count,
                max_atoms,
                max_rules,
                max_body,
            });
            print!("{}", outcome.report);
            eprintln!("{}", outcome.summary);
            if outcome.clean {
                Ok(String::new())
            } else {
                Err(Failure::Semantic("engine and oracles disagree".into()))
            }
        }
        Command::Serve { port, state_dir } => {
            let state = match state_dir {
                Some(dir) => AppState::with_state_dir(&dir).map_err(|e| Failure::Usage(e.to_string()))?,
                None => AppState::default(),
            };
            let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::Usage(e.to_string()))?;
            runtime
                .block_on(server::serve(port, state))
                .map_err(|e| Failure::Usage(e.to_string()))?;
            Ok(String::new())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
