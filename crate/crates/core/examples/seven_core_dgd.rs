// Per-core group delay of the 7-core fiber wound on a 35 mm radius, with and
// without three turns of twist over the 3 m link.

use std::f64::consts::PI;

use mcf_delay::{dgd_matrix, seven_core_layout, Bend, DeploymentProfile, PerturbationMode};

pub fn run() -> mcf_delay::Result<()> {
    let fiber = seven_core_layout(35e-6, 1.45, 1.468, 3.0, 125e-6)?;
    for (label, twist_rate) in [("no twist", 0.0), ("3 turns", 2.0 * PI)] {
        let profile = DeploymentProfile::uniform(3.0, Bend::Radius(0.035), twist_rate)?;
        let report = dgd_matrix(&fiber, &profile, PerturbationMode::FirstOrder)?;
        println!("R_b = 35 mm, {label}");
        println!("  core  azimuth[deg]  DGD vs center [ps]");
        for core in &fiber.cores {
            let dgd = report.dgd_between(core.id, 0).expect("core present");
            println!(
                "  {:>4}  {:>12.1}  {:>+18.4}",
                core.id,
                core.theta0.to_degrees(),
                dgd * 1e12
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}
