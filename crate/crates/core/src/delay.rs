//! Group-delay accumulation along a bent and twisted multicore fiber.
//!
//! A core at offset `r` and azimuth `theta` (measured from the curvature plane)
//! of a fiber bent with radius `R_b` behaves like a straight core with the
//! equivalent index
//!
//! ```text
//! n_eq^2 = n^2 (1 + 2 (r / R_b) cos(theta))
//! ```
//!
//! The same relative perturbation is applied to the group-delay density
//! `ng / c`. To first order the excess delay density is
//! `(ng / c) (r / R_b) cos(theta(z))`, and with a constant twist rate `gamma`
//! the integral over a segment of length `l` starting at azimuth `theta_s` is
//!
//! ```text
//! (ng / c) (r / R_b) l cos(theta_s + gamma l / 2) sinc(gamma l / 2)
//! ```
//!
//! which is `(sin(theta_s + gamma l) - sin(theta_s)) / gamma` written without
//! the cancellation at small `gamma l`.

use std::f64::consts::PI;

use crate::deployment::{angle_at, Bend, DeploymentProfile, SegmentPlacement};
use crate::error::{Error, Result};
use crate::fiber::{straight_delay, CoreSpec, FiberSpec};
use crate::numeric::{sinc_u, SPEED_OF_LIGHT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PerturbationMode {
    /// `n (1 + (r / R_b) cos theta)`, the linearization behind the closed forms.
    #[default]
    FirstOrder,
    /// `n sqrt(1 + 2 (r / R_b) cos theta)`.
    ExactSqrt,
}

/// Equivalent straight-fiber index of a core in a bent fiber.
pub fn equivalent_index(n: f64, r: f64, bend_radius: f64, theta: f64, mode: PerturbationMode) -> Result<f64> {
    Ok(n * relative_index(r, bend_radius, theta, mode)?)
}

/// `n_eq / n` for the given geometry.
fn relative_index(r: f64, bend_radius: f64, theta: f64, mode: PerturbationMode) -> Result<f64> {
    Ok(1.0 + relative_excess(r, bend_radius, theta, mode)?)
}

/// `n_eq / n - 1`, evaluated without forming `1 + small` where avoidable.
fn relative_excess(r: f64, bend_radius: f64, theta: f64, mode: PerturbationMode) -> Result<f64> {
    if !(bend_radius > 0.0 && bend_radius.is_finite()) {
        return Err(Error::invalid(format!(
            "bend radius must be > 0, got {bend_radius}"
        )));
    }
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::invalid(format!("core offset must be >= 0, got {r}")));
    }
    let u = r / bend_radius * theta.cos();
    if 1.0 + 2.0 * u <= 0.0 {
        return Err(Error::ModelValidity(format!(
            "bend radius {bend_radius} m too tight for core offset {r} m (radicand {})",
            1.0 + 2.0 * u
        )));
    }
    Ok(match mode {
        PerturbationMode::FirstOrder => u,
        // sqrt(1 + 2u) - 1
        PerturbationMode::ExactSqrt => 2.0 * u / ((1.0 + 2.0 * u).sqrt() + 1.0),
    })
}

/// Excess group delay of `core` over the profile relative to the straight fiber.
///
/// Cores on the axis get exactly zero in both modes.
pub fn bend_deviation(core: &CoreSpec, profile: &DeploymentProfile, mode: PerturbationMode) -> Result<f64> {
    core.validate()?;
    profile.validate()?;
    profile.check_core(core)?;
    if core.is_central() {
        return Ok(0.0);
    }
    let per_meter = core.delay_per_meter();
    let mut excess = 0.0;
    for placement in profile.walk() {
        let Bend::Radius(radius) = placement.segment.bend else {
            continue;
        };
        excess += match mode {
            PerturbationMode::FirstOrder => first_order_segment(core, &placement, radius),
            PerturbationMode::ExactSqrt => exact_segment(core, &placement, radius)?,
        };
    }
    Ok(per_meter * excess)
}

/// `(r / R_b) * integral of cos(theta(z)) dz` over one bent segment.
fn first_order_segment(core: &CoreSpec, placement: &SegmentPlacement<'_>, radius: f64) -> f64 {
    let seg = placement.segment;
    let half_twist = 0.5 * seg.twist();
    let theta_mid = placement.start_angle(core) + half_twist;
    core.r / radius * seg.length * theta_mid.cos() * sinc_u(half_twist)
}

// Five-point Gauss-Legendre nodes and weights on [-1, 1].
const GL5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664, 0.236_926_885_056_189_08),
    (0.906_179_845_938_664, 0.236_926_885_056_189_08),
];

/// Integral of `sqrt(1 + 2 (r/R_b) cos(theta(z))) - 1` over one bent segment,
/// composite Gauss-Legendre with at least 32 panels per turn.
fn exact_segment(core: &CoreSpec, placement: &SegmentPlacement<'_>, radius: f64) -> Result<f64> {
    let seg = placement.segment;
    let theta_s = placement.start_angle(core);
    if seg.twist_rate == 0.0 {
        return Ok(seg.length * relative_excess(core.r, radius, theta_s, PerturbationMode::ExactSqrt)?);
    }
    let turns = seg.twist().abs() / (2.0 * PI);
    let panels = ((turns * 32.0).ceil() as usize).max(16);
    let h = seg.length / panels as f64;
    let mut sum = 0.0;
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * h;
        let mut panel = 0.0;
        for (x, w) in GL5 {
            let z = mid + 0.5 * h * x;
            let theta = theta_s + seg.twist_rate * z;
            panel += w * relative_excess(core.r, radius, theta, PerturbationMode::ExactSqrt)?;
        }
        sum += 0.5 * h * panel;
    }
    Ok(sum)
}

/// Total group delay of `core` over the profile, s.
pub fn accumulated_delay(
    core: &CoreSpec,
    profile: &DeploymentProfile,
    mode: PerturbationMode,
) -> Result<f64> {
    let deviation = bend_deviation(core, profile, mode)?;
    Ok(straight_delay(core, profile.total_length())? + deviation)
}

/// Composite midpoint quadrature of the pointwise delay density, `steps`
/// points per segment. Independent of the closed form in [`accumulated_delay`].
pub fn integrate_delay_numeric(
    core: &CoreSpec,
    profile: &DeploymentProfile,
    mode: PerturbationMode,
    steps: usize,
) -> Result<f64> {
    if steps == 0 {
        return Err(Error::invalid("quadrature needs at least one step"));
    }
    core.validate()?;
    profile.validate()?;
    profile.check_core(core)?;
    let per_meter = core.ng / SPEED_OF_LIGHT;
    let mut excess = 0.0;
    let mut start = 0.0;
    for seg in &profile.segments {
        if let Bend::Radius(radius) = seg.bend {
            let h = seg.length / steps as f64;
            let mut sum = 0.0;
            for i in 0..steps {
                let z = start + (i as f64 + 0.5) * h;
                let theta = angle_at(core, profile, z)?;
                let n_eq = equivalent_index(core.n, core.r, radius, theta, mode)?;
                sum += n_eq / core.n - 1.0;
            }
            excess += sum * h;
        }
        start += seg.length;
    }
    Ok(straight_delay(core, profile.total_length())? + per_meter * excess)
}

/// Per-core delays of a fiber under a deployment profile.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayReport {
    /// Core ids, in fiber order; all other vectors are indexed the same way.
    pub ids: Vec<u32>,
    /// Total accumulated group delay, s.
    pub per_core_delay: Vec<f64>,
    /// Delay minus the straight-fiber delay, s.
    pub deviation: Vec<f64>,
    /// `dgd[i][j] = delay_i - delay_j`, s.
    pub dgd: Vec<Vec<f64>>,
}

impl DelayReport {
    fn index(&self, id: u32) -> Option<usize> {
        self.ids.iter().position(|&x| x == id)
    }

    pub fn delay_of(&self, id: u32) -> Option<f64> {
        self.index(id).map(|i| self.per_core_delay[i])
    }

    pub fn deviation_of(&self, id: u32) -> Option<f64> {
        self.index(id).map(|i| self.deviation[i])
    }

    pub fn dgd_between(&self, a: u32, b: u32) -> Option<f64> {
        Some(self.dgd[self.index(a)?][self.index(b)?])
    }
}

pub fn dgd_matrix(
    fiber: &FiberSpec,
    profile: &DeploymentProfile,
    mode: PerturbationMode,
) -> Result<DelayReport> {
    fiber.validate()?;
    profile.validate()?;
    profile.check_length(fiber.length)?;

    let mut straight = Vec::with_capacity(fiber.cores.len());
    let mut deviation = Vec::with_capacity(fiber.cores.len());
    for core in &fiber.cores {
        straight.push(straight_delay(core, fiber.length)?);
        deviation.push(bend_deviation(core, profile, mode)?);
    }
    let per_core_delay = straight.iter().zip(&deviation).map(|(s, d)| s + d).collect();
    // Differences of the straight and excess parts are formed separately so
    // that identical cores cancel exactly.
    let dgd = (0..fiber.cores.len())
        .map(|i| {
            (0..fiber.cores.len())
                .map(|j| (straight[i] - straight[j]) + (deviation[i] - deviation[j]))
                .collect()
        })
        .collect();

    Ok(DelayReport {
        ids: fiber.cores.iter().map(|c| c.id).collect(),
        per_core_delay,
        deviation,
        dgd,
    })
}

fn check_closed_form_args(r: f64, length: f64, bend_radius: f64, gamma: f64) -> Result<()> {
    if !(bend_radius > 0.0 && bend_radius.is_finite()) {
        return Err(Error::invalid(format!(
            "bend radius must be > 0, got {bend_radius}"
        )));
    }
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::invalid(format!("length must be > 0, got {length}")));
    }
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::invalid(format!("core offset must be >= 0, got {r}")));
    }
    if !gamma.is_finite() {
        return Err(Error::invalid("twist rate must be finite"));
    }
    Ok(())
}

/// Closed-form worst-case DGD of an off-axis core against the central core,
/// `(ng / c) (r L / R_b) |sinc(gamma L)|`.
///
/// This is the accumulated deviation of a core that enters the fiber lying in
/// the curvature plane. It vanishes at every half turn of total twist.
pub fn worst_case_dgd(ng: f64, r: f64, length: f64, bend_radius: f64, gamma: f64) -> Result<f64> {
    check_closed_form_args(r, length, bend_radius, gamma)?;
    let envelope = ng / SPEED_OF_LIGHT * r * length / bend_radius;
    Ok(envelope * sinc_u(gamma * length).abs())
}

/// Largest DGD over all input azimuths of the core,
/// `(ng / c) (r L / R_b) |sinc(gamma L / 2)|`. Vanishes only at full turns.
pub fn max_over_start_angle_dgd(ng: f64, r: f64, length: f64, bend_radius: f64, gamma: f64) -> Result<f64> {
    check_closed_form_args(r, length, bend_radius, gamma)?;
    let envelope = ng / SPEED_OF_LIGHT * r * length / bend_radius;
    Ok(envelope * sinc_u(0.5 * gamma * length).abs())
}
