//! `tbs` — command-line front end for the periodic check/attack game engine.

mod args;
mod commands;
mod render;

use clap::error::ErrorKind;
use clap::Parser;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match args::Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{err}");
                    0
                }
                _ => {
                    eprint!("{err}");
                    1
                }
            };
            std::process::exit(code);
        }
    };
    match commands::execute(cli) {
        Ok(()) => {}
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(err.exit_code());
        }
    }
}
