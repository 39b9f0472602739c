use clap::Parser;
use tumorstrip::cli::{execute, Cli};

fn main() {
    std::process::exit(execute(Cli::parse()));
}
