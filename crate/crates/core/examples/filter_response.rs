// 7-tap FIR filter with a 100 ps basic delay built on the fiber cores, under
// the straight, 35 mm, 75 mm and 35 mm + 3 turns conditions.

use std::f64::consts::PI;

use mcf_delay::filter::{build_filter_from_fiber, fsr_estimate_within, sidelobe_level, transfer_function};
use mcf_delay::{seven_core_layout, Bend, DeploymentProfile, PerturbationMode};

pub fn run() -> mcf_delay::Result<()> {
    let fiber = seven_core_layout(35e-6, 1.45, 1.468, 3.0, 125e-6)?;
    let conditions = [
        ("straight", DeploymentProfile::straight(3.0)?),
        (
            "35 mm",
            DeploymentProfile::uniform(3.0, Bend::Radius(0.035), 0.0)?,
        ),
        (
            "75 mm",
            DeploymentProfile::uniform(3.0, Bend::Radius(0.075), 0.0)?,
        ),
        (
            "35 mm + 3 turns",
            DeploymentProfile::uniform(3.0, Bend::Radius(0.035), 2.0 * PI)?,
        ),
    ];
    println!(
        "{:<16} {:>10} {:>14}  tap offsets [ps]",
        "condition", "FSR [GHz]", "sidelobe [dB]"
    );
    for (name, profile) in &conditions {
        let filter =
            build_filter_from_fiber(&fiber, profile, 100e-12, &[1.0; 7], PerturbationMode::FirstOrder)?;
        let resp = transfer_function(&filter, 0.0, 20e9, 8001)?;
        let fsr = fsr_estimate_within(&resp, 3.0)?;
        let sidelobe = sidelobe_level(&resp, filter.nominal_fsr())?.unwrap_or(f64::NEG_INFINITY);
        let offsets: Vec<String> = filter
            .taps
            .iter()
            .enumerate()
            .map(|(k, t)| format!("{:+.2}", (t.delay - k as f64 * 100e-12) * 1e12))
            .collect();
        println!(
            "{name:<16} {:>10.3} {:>14.3}  {}",
            fsr * 1e-9,
            sidelobe,
            offsets.join(" ")
        );
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
