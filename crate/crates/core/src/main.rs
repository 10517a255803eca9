use clap::Parser;

use covosc::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        eprintln!("covosc: {e}");
        std::process::exit(e.code);
    }
}
