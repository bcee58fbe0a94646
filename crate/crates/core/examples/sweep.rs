//! Parameter sweep driven by an experiment file, as the `sweep` subcommand
//! does, printed as CSV.
//!
//!     cargo run --example sweep -- crates/core/examples/configs/sweep.toml

use ness_chain::cli::{run_command, Command, ExperimentConfig, Format};

fn main() {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs/sweep.toml").to_string()
    });
    let cfg = ExperimentConfig::load(path.as_ref()).expect("config");
    let report = run_command(Command::Sweep, &cfg).unwrap_or_else(|f| panic!("{}", f.error()));
    report
        .table
        .write(std::io::stdout(), Format::Csv, &report.resolved)
        .expect("stdout");
}
