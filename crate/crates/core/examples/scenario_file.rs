// Loads a scenario document, runs its task and prints the CSV. Defaults to the
// bundled 35 mm scenario; pass another path as the first argument.

use std::path::PathBuf;

use mcf_delay::scenario::{emit_scenario, parse_scenario};
use mcf_delay::tasks::run_scenario;

pub fn run_file(path: &std::path::Path) -> mcf_delay::Result<String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| mcf_delay::Error::InvalidArgument(format!("{}: {e}", path.display())))?;
    let scenario = parse_scenario(&text)?;
    // The canonical form parses back to the same scenario.
    assert_eq!(parse_scenario(&emit_scenario(&scenario))?, scenario);
    Ok(run_scenario(&scenario)?.table.to_csv())
}

pub fn run() -> mcf_delay::Result<()> {
    let default = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios/bend_35mm.json");
    let path = std::env::args_os().nth(1).map(PathBuf::from).unwrap_or(default);
    print!("{}", run_file(&path)?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}
