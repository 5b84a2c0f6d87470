use clap::Parser;

use liminf::cli::{execute, Cli};

fn main() {
    std::process::exit(execute(Cli::parse()));
}
