mod args;
mod commands;
mod common;
mod play;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use common::{CliError, Output, Status};

fn out_path(c: &Command) -> Option<std::path::PathBuf> {
    match c {
        Command::Play(a) => a.game.out.clone(),
        Command::Simulate(a) => a.game.out.clone(),
        Command::Transform(a) => a.game.out.clone(),
        Command::VerifyWitness(a) => a.out.clone(),
        Command::Tree(a) => a.out.clone(),
        Command::OracleCheck(a) => a.out.clone(),
        Command::Replay(a) => a.out.clone(),
    }
}

fn run(cli: Cli) -> Result<Status, CliError> {
    let mut out = Output::new(out_path(&cli.command));
    let status = match cli.command {
        Command::Play(a) => play::play(a, &mut io::stdin().lock(), &mut io::stderr(), &mut out)?,
        Command::Simulate(a) => commands::simulate(a, &mut out)?,
        Command::Transform(a) => commands::transform(a, &mut out)?,
        Command::VerifyWitness(a) => commands::verify_witness(a, &mut out)?,
        Command::Tree(a) => commands::tree(a, &mut out)?,
        Command::OracleCheck(a) => commands::oracle_check(a, &mut out)?,
        Command::Replay(a) => commands::replay(a, &mut out)?,
    };
    out.finish(&mut io::stdout().lock())?;
    Ok(status)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(s) => ExitCode::from(s.code()),
        Err(e) => {
            let _ = writeln!(io::stderr(), "error: {e}");
            ExitCode::from(2)
        }
    }
}
