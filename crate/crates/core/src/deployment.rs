//! Piecewise bend/twist description of how a fiber is laid out.
//!
//! A twist rate rotates the whole cross-section, so every core azimuth grows
//! linearly with `z` inside a segment and the accumulated rotation carries over
//! into the next segment. The bend plane may change from one segment to the
//! next; core azimuths are always reported relative to the bend plane of the
//! segment that contains `z`.

use crate::error::{Error, Result};
use crate::fiber::CoreSpec;

/// Minimum allowed ratio between bend radius and the largest core offset.
pub const DEFAULT_MIN_BEND_RATIO: f64 = 1000.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bend {
    Straight,
    /// Bent with the given radius of curvature, m.
    Radius(f64),
}

impl Bend {
    pub fn radius(&self) -> Option<f64> {
        match *self {
            Bend::Straight => None,
            Bend::Radius(r) => Some(r),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    /// Segment length, m.
    pub length: f64,
    pub bend: Bend,
    /// Twist rate, rad/m. Sign gives the rotation direction.
    pub twist_rate: f64,
    /// Azimuth of the curvature plane in the input cross-section frame, rad.
    pub bend_plane_offset: f64,
}

impl Segment {
    pub fn new(length: f64, bend: Bend, twist_rate: f64, bend_plane_offset: f64) -> Result<Self> {
        let seg = Segment {
            length,
            bend,
            twist_rate,
            bend_plane_offset,
        };
        seg.validate()?;
        Ok(seg)
    }

    pub fn straight(length: f64) -> Result<Self> {
        Self::new(length, Bend::Straight, 0.0, 0.0)
    }

    pub fn bent(length: f64, radius: f64) -> Result<Self> {
        Self::new(length, Bend::Radius(radius), 0.0, 0.0)
    }

    pub fn with_twist_rate(mut self, twist_rate: f64) -> Result<Self> {
        self.twist_rate = twist_rate;
        self.validate()?;
        Ok(self)
    }

    pub fn with_bend_plane(mut self, offset: f64) -> Result<Self> {
        self.bend_plane_offset = offset;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.length > 0.0 && self.length.is_finite()) {
            return Err(Error::invalid(format!(
                "segment length must be > 0, got {}",
                self.length
            )));
        }
        if let Bend::Radius(r) = self.bend {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::invalid(format!("bend radius must be > 0, got {r}")));
            }
        }
        if !self.twist_rate.is_finite() || !self.bend_plane_offset.is_finite() {
            return Err(Error::invalid("twist rate and bend plane must be finite"));
        }
        Ok(())
    }

    /// Rotation accumulated across the whole segment, rad.
    pub fn twist(&self) -> f64 {
        self.twist_rate * self.length
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeploymentProfile {
    pub segments: Vec<Segment>,
    /// Bent segments must satisfy `radius >= min_bend_ratio * r` for every core.
    pub min_bend_ratio: f64,
}

impl DeploymentProfile {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        let profile = DeploymentProfile {
            segments,
            min_bend_ratio: DEFAULT_MIN_BEND_RATIO,
        };
        profile.validate()?;
        Ok(profile)
    }

    /// Single segment spanning `length`.
    pub fn uniform(length: f64, bend: Bend, twist_rate: f64) -> Result<Self> {
        Self::new(vec![Segment::new(length, bend, twist_rate, 0.0)?])
    }

    pub fn straight(length: f64) -> Result<Self> {
        Self::uniform(length, Bend::Straight, 0.0)
    }

    pub fn with_min_bend_ratio(mut self, ratio: f64) -> Result<Self> {
        if !(ratio > 0.0 && ratio.is_finite()) {
            return Err(Error::invalid(format!(
                "bend ratio guard must be > 0, got {ratio}"
            )));
        }
        self.min_bend_ratio = ratio;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.segments.is_empty() {
            return Err(Error::invalid("deployment profile has no segments"));
        }
        self.segments.iter().try_for_each(Segment::validate)
    }

    pub fn total_length(&self) -> f64 {
        self.segments.iter().map(|s| s.length).sum()
    }

    /// Checks that the profile spans `fiber_length` (relative tolerance 1e-9).
    pub fn check_length(&self, fiber_length: f64) -> Result<()> {
        let total = self.total_length();
        if (total - fiber_length).abs() > 1e-9 * fiber_length.abs().max(total.abs()) {
            return Err(Error::LengthMismatch {
                profile_m: total,
                fiber_m: fiber_length,
            });
        }
        Ok(())
    }

    /// First-order validity guard: every bend radius must dwarf the core offset.
    pub fn check_core(&self, core: &CoreSpec) -> Result<()> {
        for (i, seg) in self.segments.iter().enumerate() {
            if let Bend::Radius(radius) = seg.bend {
                // Relative slack so that R_b == ratio * r passes despite rounding.
                if core.r * self.min_bend_ratio > radius * (1.0 + 1e-9) {
                    return Err(Error::ModelValidity(format!(
                        "segment {i}: bend radius {radius} m is below {} x core {} offset {} m",
                        self.min_bend_ratio, core.id, core.r
                    )));
                }
            }
        }
        Ok(())
    }

    /// Iterates segments together with their start position and the rotation
    /// accumulated before them.
    pub fn walk(&self) -> impl Iterator<Item = SegmentPlacement<'_>> {
        let mut start = 0.0;
        let mut twist_before = 0.0;
        self.segments.iter().map(move |seg| {
            let placement = SegmentPlacement {
                segment: seg,
                start,
                twist_before,
            };
            start += seg.length;
            twist_before += seg.twist();
            placement
        })
    }
}

/// A segment located along the profile.
#[derive(Debug, Clone, Copy)]
pub struct SegmentPlacement<'a> {
    pub segment: &'a Segment,
    /// Position of the segment start, m.
    pub start: f64,
    /// Rotation accumulated by all earlier segments, rad.
    pub twist_before: f64,
}

impl SegmentPlacement<'_> {
    /// Azimuth of `core` relative to this segment's bend plane at the segment start.
    pub fn start_angle(&self, core: &CoreSpec) -> f64 {
        core.theta0 - self.segment.bend_plane_offset + self.twist_before
    }
}

/// Azimuth of `core` relative to the local bend plane at position `z`.
///
/// At a segment boundary the later segment's bend plane applies, except at the
/// very end of the profile.
pub fn angle_at(core: &CoreSpec, profile: &DeploymentProfile, z: f64) -> Result<f64> {
    profile.validate()?;
    let total = profile.total_length();
    if !(z.is_finite() && (0.0..=total).contains(&z)) {
        return Err(Error::invalid(format!(
            "position {z} m outside profile [0, {total}] m"
        )));
    }
    let mut found = None;
    for placement in profile.walk() {
        found = Some(placement);
        if z < placement.start + placement.segment.length {
            break;
        }
    }
    let p = found.expect("validated profile has a segment");
    let local = (z - p.start).clamp(0.0, p.segment.length);
    Ok(p.start_angle(core) + p.segment.twist_rate * local)
}

/// Signed total rotation of the cross-section over the profile, rad.
pub fn total_twist(profile: &DeploymentProfile) -> f64 {
    profile.segments.iter().map(Segment::twist).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn core(theta0: f64) -> CoreSpec {
        CoreSpec::new(1, 35e-6, theta0, 1.45, 1.468).unwrap()
    }

    #[test]
    fn untwisted_angle_is_constant() {
        let p = DeploymentProfile::uniform(3.0, Bend::Radius(0.035), 0.0).unwrap();
        assert_eq!(angle_at(&core(0.0), &p, 1.7).unwrap(), 0.0);
    }

    #[test]
    fn forced_twist_rate() {
        let p = DeploymentProfile::uniform(3.0, Bend::Radius(0.035), 2.0 * PI).unwrap();
        let a = angle_at(&core(PI / 6.0), &p, 1.5).unwrap();
        assert!((a - (PI / 6.0 + 3.0 * PI)).abs() < 1e-14);
        assert!((total_twist(&p) - 6.0 * PI).abs() < 1e-14);
    }

    #[test]
    fn twist_accumulates_across_segments() {
        let p = DeploymentProfile::new(vec![
            Segment::straight(1.0).unwrap().with_twist_rate(PI).unwrap(),
            Segment::bent(2.0, 0.1).unwrap(),
        ])
        .unwrap();
        let a = angle_at(&core(0.0), &p, 2.0).unwrap();
        assert!((a - PI).abs() < 1e-15);
        assert!((angle_at(&core(0.0), &p, 0.5).unwrap() - PI / 2.0).abs() < 1e-15);
        assert!((angle_at(&core(0.0), &p, 3.0).unwrap() - PI).abs() < 1e-15);
    }

    #[test]
    fn opposite_twists_cancel() {
        let p = DeploymentProfile::new(vec![
            Segment::straight(1.0).unwrap().with_twist_rate(PI).unwrap(),
            Segment::straight(1.0).unwrap().with_twist_rate(-PI).unwrap(),
        ])
        .unwrap();
        assert_eq!(total_twist(&p), 0.0);
        assert_eq!(total_twist(&DeploymentProfile::straight(3.0).unwrap()), 0.0);
    }

    #[test]
    fn bend_plane_is_per_segment() {
        let p = DeploymentProfile::new(vec![
            Segment::bent(1.0, 0.1).unwrap(),
            Segment::bent(1.0, 0.1)
                .unwrap()
                .with_bend_plane(PI / 2.0)
                .unwrap(),
        ])
        .unwrap();
        assert_eq!(angle_at(&core(0.0), &p, 0.5).unwrap(), 0.0);
        assert_eq!(angle_at(&core(0.0), &p, 1.5).unwrap(), -PI / 2.0);
    }

    #[test]
    fn out_of_range_position() {
        let p = DeploymentProfile::straight(3.0).unwrap();
        assert!(angle_at(&core(0.0), &p, -0.1).is_err());
        assert!(angle_at(&core(0.0), &p, 3.1).is_err());
        assert!(angle_at(&core(0.0), &p, f64::NAN).is_err());
        assert!(angle_at(&core(0.0), &p, 3.0).is_ok());
    }

    #[test]
    fn invalid_segments() {
        assert!(Segment::straight(0.0).is_err());
        assert!(Segment::bent(1.0, -0.005).is_err());
        assert!(Segment::bent(1.0, 0.0).is_err());
        assert!(DeploymentProfile::new(vec![]).is_err());
    }

    #[test]
    fn validity_guard() {
        let p = DeploymentProfile::uniform(3.0, Bend::Radius(0.035), 0.0).unwrap();
        assert!(p.check_core(&core(0.0)).is_ok());
        let tight = DeploymentProfile::uniform(3.0, Bend::Radius(0.02), 0.0).unwrap();
        assert!(matches!(
            tight.check_core(&core(0.0)),
            Err(Error::ModelValidity(_))
        ));
        let relaxed = tight.with_min_bend_ratio(100.0).unwrap();
        assert!(relaxed.check_core(&core(0.0)).is_ok());
    }

    #[test]
    fn length_check() {
        let p = DeploymentProfile::straight(3.0).unwrap();
        assert!(p.check_length(3.0).is_ok());
        assert!(matches!(p.check_length(2.0), Err(Error::LengthMismatch { .. })));
    }
}
