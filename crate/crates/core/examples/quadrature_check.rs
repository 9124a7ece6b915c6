// Closed-form delay accumulation against midpoint quadrature on a multi-segment
// route, and the size of the first-order linearization error.

use mcf_delay::deployment::Segment;
use mcf_delay::{
    accumulated_delay, integrate_delay_numeric, straight_delay, CoreSpec, DeploymentProfile, PerturbationMode,
};

pub fn run() -> mcf_delay::Result<()> {
    let profile = DeploymentProfile::new(vec![
        Segment::bent(0.8, 0.035)?.with_twist_rate(4.0)?,
        Segment::straight(0.4)?.with_twist_rate(-1.0)?,
        Segment::bent(1.8, 0.075)?.with_bend_plane(0.6)?,
    ])?;
    let core = CoreSpec::new(1, 35e-6, 0.3, 1.45, 1.468)?;
    let straight = straight_delay(&core, profile.total_length())?;

    let closed = accumulated_delay(&core, &profile, PerturbationMode::FirstOrder)?;
    println!("first-order closed form: {:+.6} ps", (closed - straight) * 1e12);
    for steps in [10, 100, 1_000, 10_000] {
        let numeric = integrate_delay_numeric(&core, &profile, PerturbationMode::FirstOrder, steps)?;
        println!(
            "  midpoint, {steps:>6} steps: {:+.6} ps (rel. diff {:.2e})",
            (numeric - straight) * 1e12,
            ((numeric - closed) / closed).abs()
        );
    }
    let exact = accumulated_delay(&core, &profile, PerturbationMode::ExactSqrt)?;
    println!(
        "square-root index: {:+.6} ps (linearization error {:.3e} ps)",
        (exact - straight) * 1e12,
        (exact - closed) * 1e12
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}
