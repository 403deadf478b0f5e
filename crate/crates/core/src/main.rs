use std::io::Write;

use clap::Parser;
use irrq::cli::{run, RunConfig};

fn main() {
    let cfg = RunConfig::parse();
    let out = run(&cfg);
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    std::process::exit(out.exit_code);
}
