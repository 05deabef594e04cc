//! The `captionprobe` command line. `run` is the whole program minus
//! `process::exit`, so tests can drive it in-process.

pub mod args;
pub mod commands;
pub mod error;
pub mod provenance;

use std::ffi::OsString;

use clap::Parser;

use args::{Cli, Command};
pub use error::{CliError, CliResult};

fn dispatch(command: &Command) -> CliResult<()> {
    match command {
        Command::Ingest(a) => commands::ingest(a),
        Command::TagTrain(a) => commands::tag_train(a),
        Command::Vocab(a) => commands::vocab(a),
        Command::Perturb(a) => commands::perturb(a),
        Command::Eval(a) => commands::eval(a),
        Command::Report(a) => commands::report(a),
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// exit code: 0 success, 1 usage, 2 data/alignment, 3 I/O.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // --help and --version are not errors
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            provenance::write_error_summary(
                cli.command.out_dir(),
                cli.command.name(),
                e.kind_name(),
                e.exit_code(),
                &e.message,
            );
            e.exit_code()
        }
    }
}
