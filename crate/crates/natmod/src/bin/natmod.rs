use clap::Parser;
use natmod::cli::{run_and_emit, RunConfig};

fn main() {
    let cfg = RunConfig::parse();
    std::process::exit(run_and_emit(&cfg));
}
