mod args;
mod commands;
mod output;

use std::panic;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// Exit statuses: 1 usage, 2 data or numerics, 3 internal.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Internal(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<causalkit::Error> for CliError {
    fn from(e: causalkit::Error) -> Self {
        use causalkit::Error as E;
        let msg = e.to_string();
        match e {
            E::InvalidParameter(_) | E::GuardExceeded { .. } => CliError::Usage(msg),
            E::InvalidQuery(_) => CliError::Internal(msg),
            _ => CliError::Data(msg),
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("CAUSALKIT_THREADS") else {
        return Ok(());
    };
    let n: usize = value.trim().parse().map_err(|_| {
        CliError::Usage(format!(
            "CAUSALKIT_THREADS must be a non-negative integer, got '{value}'"
        ))
    })?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Internal(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn dispatch(command: &Command) -> Result<(), CliError> {
    match command {
        Command::Simulate(a) => commands::simulate(a),
        Command::Discover(a) => commands::discover(a),
        Command::OrientInterventional(a) => commands::orient(a),
        Command::Eval(a) => commands::eval(a),
        Command::FaithfulnessVolume(a) => commands::faithfulness_volume(a),
        Command::CiBench(a) => commands::ci_bench(a),
        Command::Mec(a) => commands::mec(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let outcome = configure_threads().and_then(|()| {
        panic::catch_unwind(|| dispatch(&cli.command)).unwrap_or_else(|payload| {
            let what = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            Err(CliError::Internal(what))
        })
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("causalkit {}: error: {}", cli.command.name(), e.message());
            ExitCode::from(e.code())
        }
    }
}
