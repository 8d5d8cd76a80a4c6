mod args;
mod commands;
mod config;
mod error;
mod output;

use std::collections::BTreeSet;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser};
use serde::de::DeserializeOwned;
use serde::Serialize;

use args::{Cli, Command, Common};
use error::CliError;
use output::Report;

/// Long flag names of a subcommand, spelled as config keys.
fn config_keys(subcommand: &str) -> BTreeSet<String> {
    let cmd = Cli::command();
    cmd.find_subcommand(subcommand)
        .map(|sc| {
            sc.get_arguments()
                .filter_map(|a| a.get_long())
                .filter(|l| *l != "config" && *l != "help")
                .map(|l| l.replace('-', "_"))
                .collect()
        })
        .unwrap_or_default()
}

fn with_config<T>(args: &T, common: &Common, name: &str) -> Result<T, CliError>
where
    T: Serialize + DeserializeOwned + Clone,
{
    match &common.config {
        Some(path) => config::overlay(args, path, name, &config_keys(name)),
        None => Ok(args.clone()),
    }
}

fn dispatch(command: &Command) -> Result<(Report, args::Common), CliError> {
    macro_rules! run {
        ($a:expr, $name:literal, $f:path) => {{
            let a = with_config($a, &$a.common, $name)?;
            ($f(&a)?, a.common.clone())
        }};
    }
    Ok(match command {
        Command::Tomogram(a) => run!(a, "tomogram", commands::tomogram),
        Command::Wigner(a) => run!(a, "wigner", commands::wigner),
        Command::Reconstruct(a) => run!(a, "reconstruct", commands::reconstruct),
        Command::Measure(a) => run!(a, "measure", commands::measure),
        Command::Spin(a) => run!(a, "spin", commands::spin),
        Command::Star(a) => run!(a, "star", commands::star),
        Command::Evolve(a) => run!(a, "evolve", commands::evolve),
        Command::Validate(a) => run!(a, "validate", commands::validate),
    })
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let (report, common) = dispatch(&cli.command)?;
    output::emit(&report, common.format, common.output.as_deref())?;
    if matches!(cli.command, Command::Validate(_)) {
        if let Some(e) = commands::validation_failure(&report) {
            return Err(e);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
