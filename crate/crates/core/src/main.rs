use clap::Parser;

use entpot::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        eprintln!("entpot: {e}");
        std::process::exit(e.exit_code());
    }
}
