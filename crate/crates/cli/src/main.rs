use clap::Parser;
use hypernym_cli::{run, Cli};

fn main() -> anyhow::Result<()> {
    run(Cli::parse())
}
