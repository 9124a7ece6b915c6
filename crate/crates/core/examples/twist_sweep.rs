// Worst-case DGD against total twist for the 35 mm and 75 mm bends, comparing
// the in-plane law (zeros every half turn) with the maximum over input azimuth
// (zeros every full turn).

use std::f64::consts::PI;

use mcf_delay::{max_over_start_angle_dgd, worst_case_dgd};

pub fn run() -> mcf_delay::Result<()> {
    let (ng, r, length) = (1.468, 35e-6, 3.0);
    println!("twist[pi]  R_b[mm]  in-plane[ps]  max-over-azimuth[ps]");
    for step in 0..=26 {
        let twist = step as f64 * 0.25 * PI;
        for radius in [0.035, 0.075] {
            let gamma = twist / length;
            let inplane = worst_case_dgd(ng, r, length, radius, gamma)?;
            let envelope = max_over_start_angle_dgd(ng, r, length, radius, gamma)?;
            println!(
                "{:>9.2}  {:>7.0}  {:>12.4}  {:>20.4}",
                twist / PI,
                radius * 1e3,
                inplane * 1e12,
                envelope * 1e12
            );
        }
    }
    let base = worst_case_dgd(ng, r, length, 0.035, 0.0)?;
    let residual = worst_case_dgd(ng, r, length, 0.035, 0.75 * PI / length)?;
    println!(
        "residual twist of 0.75 pi: {:.2} ps, {:.0}% below the untwisted {:.2} ps",
        residual * 1e12,
        (1.0 - residual / base) * 100.0,
        base * 1e12
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
