use std::io::Write;

use clap::Parser;
use nonplanarity_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let out = run(&cli);
    let text = serde_json::to_string_pretty(&out.report).expect("reports serialise");
    // A closed pipe downstream is not our failure.
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    std::process::exit(out.code);
}
