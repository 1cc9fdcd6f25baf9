mod args;
mod commands;
mod output;

use std::io;
use std::process::ExitCode;

use clap::Parser;
use kge_core::Error;

use args::{Cli, Command};

const EXIT_USAGE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_IO: u8 = 3;

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::Io(_) => EXIT_IO,
                Error::Parse(_) | Error::Format { .. } | Error::UnknownId(_) | Error::MissingTerm(_) => {
                    EXIT_PARSE
                }
                Error::InvalidArgument(_) | Error::AbsentPredicate(_) | Error::Internal(_) => EXIT_USAGE,
            };
        }
        if cause.downcast_ref::<io::Error>().is_some() || cause.downcast_ref::<tempfile::PersistError>().is_some() {
            return EXIT_IO;
        }
        if cause.downcast_ref::<serde_json::Error>().is_some() {
            return EXIT_IO;
        }
    }
    EXIT_USAGE
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("KGE_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Encode(a) => commands::encode_cmd(a),
        Command::Decode(a) => commands::decode_cmd(a),
        Command::Topk(a) => commands::topk_cmd(a),
        Command::Count(a) => commands::count_cmd(a),
        Command::Taxonomy(a) => commands::taxonomy_cmd(a),
        Command::Gen(a) => commands::gen_cmd(a),
        Command::Compare(a) => commands::compare_cmd(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if e.downcast_ref::<io::Error>().is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe) {
                return ExitCode::SUCCESS;
            }
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
