use clap::Parser;
use maxconf::cli::{run, RunConfig};

fn main() {
    let config = RunConfig::parse();
    let outcome = run(&config);
    print!("{}", outcome.output);
    if let Some(msg) = outcome.message {
        eprintln!("{msg}");
    }
    std::process::exit(outcome.code);
}
