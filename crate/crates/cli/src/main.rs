use alphamu_relay_cli::{run, Args};
use clap::Parser;

fn main() {
    let args = Args::parse();
    std::process::exit(run(&args));
}
