// DGD against bend radius for a family of total twists between 0 and 6.5 pi,
// written as CSV to stdout through the scenario task runner.

use mcf_delay::scenario::parse_scenario;
use mcf_delay::tasks::run_scenario;

const SCENARIO: &str = r#"{
  "fiber": { "pitch_um": 35, "clad_um": 125, "length_m": 3 },
  "profile": { "segments": [ { "length_m": 3, "bend_radius_mm": "straight" } ] },
  "task": {
    "name": "sweep-bend",
    "params": {
      "radii_mm": [30, 35, 50, 75, 100, 150, 200, 300],
      "twist_pi": [0, 0.75, 1.5, 3.25, 6.5]
    }
  }
}"#;

pub fn run() -> mcf_delay::Result<()> {
    let scenario = parse_scenario(SCENARIO)?;
    let output = run_scenario(&scenario)?;
    print!("{}", output.table.to_csv());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}
