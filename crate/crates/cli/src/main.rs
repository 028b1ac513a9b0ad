use clap::Parser;

use binsum_cli::config::{Cli, RunConfig};
use binsum_cli::{run, EXIT_ERROR};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let status = match RunConfig::from_cli(cli) {
        Ok(config) => run(&config),
        Err(msg) => {
            eprintln!("error: {msg}");
            EXIT_ERROR
        }
    };
    std::process::exit(status);
}
