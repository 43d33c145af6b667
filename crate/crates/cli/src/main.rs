use clap::Parser;
use mixmetro_cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
