//! Fiber geometry and per-core optical constants.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numeric::SPEED_OF_LIGHT;

/// Phase index assumed when a fiber datasheet gives none.
pub const DEFAULT_PHASE_INDEX: f64 = 1.45;
/// Group index assumed when a fiber datasheet gives none.
pub const DEFAULT_GROUP_INDEX: f64 = 1.468;

/// One core of a multicore fiber.
///
/// `r` and `theta0` are the local polar coordinates of the core in the
/// cross-section at the fiber input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoreSpec {
    pub id: u32,
    /// Radial offset from the fiber axis, m.
    pub r: f64,
    /// Azimuth at the fiber input, rad.
    pub theta0: f64,
    /// Phase refractive index.
    pub n: f64,
    /// Group refractive index.
    pub ng: f64,
}

impl CoreSpec {
    pub fn new(id: u32, r: f64, theta0: f64, n: f64, ng: f64) -> Result<Self> {
        let core = CoreSpec { id, r, theta0, n, ng };
        core.validate()?;
        Ok(core)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r.is_finite() && self.r >= 0.0) {
            return Err(Error::invalid(format!(
                "core {}: radial offset must be >= 0, got {}",
                self.id, self.r
            )));
        }
        if !self.theta0.is_finite() {
            return Err(Error::invalid(format!("core {}: azimuth not finite", self.id)));
        }
        if !(self.n > 1.0 && self.n.is_finite()) || !(self.ng > 1.0 && self.ng.is_finite()) {
            return Err(Error::invalid(format!(
                "core {}: indices must exceed 1 (n = {}, ng = {})",
                self.id, self.n, self.ng
            )));
        }
        Ok(())
    }

    pub fn is_central(&self) -> bool {
        self.r == 0.0
    }

    /// Group delay per unit length in the straight fiber, s/m.
    pub fn delay_per_meter(&self) -> f64 {
        self.ng / SPEED_OF_LIGHT
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiberSpec {
    /// Fiber length, m.
    pub length: f64,
    pub cladding_diameter: f64,
    pub cores: Vec<CoreSpec>,
}

impl FiberSpec {
    pub fn new(length: f64, cladding_diameter: f64, cores: Vec<CoreSpec>) -> Result<Self> {
        let fiber = FiberSpec {
            length,
            cladding_diameter,
            cores,
        };
        fiber.validate()?;
        Ok(fiber)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.length > 0.0 && self.length.is_finite()) {
            return Err(Error::invalid(format!(
                "fiber length must be > 0, got {}",
                self.length
            )));
        }
        if !(self.cladding_diameter > 0.0 && self.cladding_diameter.is_finite()) {
            return Err(Error::invalid(format!(
                "cladding diameter must be > 0, got {}",
                self.cladding_diameter
            )));
        }
        let clad_radius = self.cladding_diameter / 2.0;
        let mut ids = BTreeSet::new();
        for core in &self.cores {
            core.validate()?;
            if !ids.insert(core.id) {
                return Err(Error::invalid(format!("duplicate core id {}", core.id)));
            }
            if core.r > clad_radius {
                return Err(Error::GeometryViolation(format!(
                    "core {} at r = {} m lies outside the cladding radius {} m",
                    core.id, core.r, clad_radius
                )));
            }
        }
        Ok(())
    }

    /// Largest radial core offset, m.
    pub fn max_core_offset(&self) -> f64 {
        self.cores.iter().map(|c| c.r).fold(0.0, f64::max)
    }

    pub fn core(&self, id: u32) -> Option<&CoreSpec> {
        self.cores.iter().find(|c| c.id == id)
    }
}

/// Homogeneous hexagonal 7-core fiber: core 0 on axis, cores 1..=6 at
/// `r = pitch` and azimuth `(id - 1) * pi / 3`.
pub fn seven_core_layout(
    pitch: f64,
    n: f64,
    ng: f64,
    length: f64,
    cladding_diameter: f64,
) -> Result<FiberSpec> {
    if !(pitch > 0.0 && pitch.is_finite()) {
        return Err(Error::invalid(format!("pitch must be > 0, got {pitch}")));
    }
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::invalid(format!("length must be > 0, got {length}")));
    }
    let mut cores = Vec::with_capacity(7);
    cores.push(CoreSpec::new(0, 0.0, 0.0, n, ng)?);
    for k in 0..6u32 {
        let theta0 = f64::from(k) * PI / 3.0;
        cores.push(CoreSpec::new(k + 1, pitch, theta0, n, ng)?);
    }
    FiberSpec::new(length, cladding_diameter, cores)
}

/// Group delay of `core` over `length` meters of straight fiber, `ng * L / c`.
pub fn straight_delay(core: &CoreSpec, length: f64) -> Result<f64> {
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::invalid(format!("length must be > 0, got {length}")));
    }
    Ok(core.ng * length / SPEED_OF_LIGHT)
}
