use clap::Parser;

use bichroma_cli::commands::{run, Cli};

fn main() {
    // Clap handles --help/--version and reports usage errors with exit
    // code 2, matching the input-validation convention.
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
