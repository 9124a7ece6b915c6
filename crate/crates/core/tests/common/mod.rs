//! Property checks shared by the proptest suite and the acceptance harness.
#![allow(dead_code)]

use std::f64::consts::PI;

use mcf_delay::deployment::{Bend, DeploymentProfile, Segment};
use mcf_delay::{
    accumulated_delay, bend_deviation, dgd_matrix, integrate_delay_numeric, max_over_start_angle_dgd,
    seven_core_layout, transfer_function, worst_case_dgd, CoreSpec, FilterSpec, PerturbationMode, Tap,
};
use proptest::prelude::*;

pub const NG: f64 = 1.468;
pub const N: f64 = 1.45;
pub const PITCH: f64 = 35e-6;
pub const LENGTH: f64 = 3.0;
pub const C: f64 = 299_792_458.0;

pub type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn outer_core(theta0: f64) -> CoreSpec {
    CoreSpec::new(1, PITCH, theta0, N, NG).unwrap()
}

/// `(ng / c) r L / R_b`, the untwisted worst-case magnitude.
pub fn envelope(length: f64, radius: f64) -> f64 {
    NG / C * PITCH * length / radius
}

#[derive(Debug, Clone)]
pub struct SegmentCase {
    pub length: f64,
    /// `None` for straight.
    pub radius: Option<f64>,
    /// Total twist over the segment, rad.
    pub twist: f64,
    pub plane: f64,
}

#[derive(Debug, Clone)]
pub struct ProfileCase {
    pub theta0: f64,
    pub segments: Vec<SegmentCase>,
}

impl ProfileCase {
    pub fn profile(&self) -> DeploymentProfile {
        let segments = self
            .segments
            .iter()
            .map(|s| {
                let bend = s.radius.map_or(Bend::Straight, Bend::Radius);
                Segment::new(s.length, bend, s.twist / s.length, s.plane).unwrap()
            })
            .collect();
        // Radii down to 20 mm put 35 um cores below the default 1000x guard.
        DeploymentProfile::new(segments)
            .unwrap()
            .with_min_bend_ratio(500.0)
            .unwrap()
    }
}

pub fn segment_strategy() -> impl Strategy<Value = SegmentCase> {
    (
        0.1f64..3.0,
        prop_oneof![1 => Just(None), 4 => (0.02f64..1.0).prop_map(Some)],
        -8.0 * PI..8.0 * PI,
        0.0..2.0 * PI,
    )
        .prop_map(|(length, radius, twist, plane)| SegmentCase {
            length,
            radius,
            twist,
            plane,
        })
}

pub fn profile_strategy() -> impl Strategy<Value = ProfileCase> {
    (0.0..2.0 * PI, prop::collection::vec(segment_strategy(), 1..=4))
        .prop_map(|(theta0, segments)| ProfileCase { theta0, segments })
        .prop_filter("needs a bent segment", |c| {
            c.segments.iter().any(|s| s.radius.is_some())
        })
}

/// Closed form against the midpoint oracle, 1e5 steps per segment.
pub fn check_oracle_equivalence(case: &ProfileCase) -> Check {
    let core = outer_core(case.theta0);
    let profile = case.profile();
    let closed =
        accumulated_delay(&core, &profile, PerturbationMode::FirstOrder).map_err(|e| e.to_string())?;
    let numeric = integrate_delay_numeric(&core, &profile, PerturbationMode::FirstOrder, 100_000)
        .map_err(|e| e.to_string())?;
    let rel = ((closed - numeric) / closed).abs();
    ensure(rel < 1e-8, || {
        format!("closed {closed:e} vs numeric {numeric:e}: rel {rel:e}")
    })
}

fn single(radius: f64, total_twist: f64) -> DeploymentProfile {
    DeploymentProfile::uniform(LENGTH, Bend::Radius(radius), total_twist / LENGTH)
        .unwrap()
        .with_min_bend_ratio(500.0)
        .unwrap()
}

/// Eq.-style worst case equals the deviation of a core starting in the bend plane.
pub fn check_worst_case_consistency(radius: f64, total_twist: f64) -> Check {
    let w = worst_case_dgd(NG, PITCH, LENGTH, radius, total_twist / LENGTH).unwrap();
    let d = bend_deviation(
        &outer_core(0.0),
        &single(radius, total_twist),
        PerturbationMode::FirstOrder,
    )
    .unwrap();
    let scale = envelope(LENGTH, radius);
    ensure((w - d.abs()).abs() <= 1e-12 * scale, || {
        format!("worst {w:e} vs |deviation| {:e}", d.abs())
    })
}

/// The max-over-start-angle law bounds the deviation for every input azimuth.
pub fn check_max_over_start_angle_bound(radius: f64, total_twist: f64) -> Check {
    let bound = max_over_start_angle_dgd(NG, PITCH, LENGTH, radius, total_twist / LENGTH).unwrap();
    let profile = single(radius, total_twist);
    let scale = envelope(LENGTH, radius);
    let mut best: f64 = 0.0;
    for k in 0..1000 {
        let theta = 2.0 * PI * k as f64 / 1000.0;
        let d = bend_deviation(&outer_core(theta), &profile, PerturbationMode::FirstOrder).unwrap();
        ensure(d.abs() <= bound + 1e-12 * scale, || {
            format!("theta {theta}: |dev| {:e} > bound {bound:e}", d.abs())
        })?;
        best = best.max(d.abs());
    }
    // The bound is attained on the grid up to its resolution.
    ensure(bound - best <= 1e-4 * scale, || {
        format!("bound {bound:e} not attained ({best:e})")
    })
}

pub fn check_antisymmetry(case: &ProfileCase) -> Check {
    let profile = case.profile();
    let a = outer_core(case.theta0);
    let b = outer_core(case.theta0 + PI);
    let scale: f64 = case
        .segments
        .iter()
        .filter_map(|s| s.radius.map(|r| envelope(s.length, r)))
        .sum();
    let fo = |c| bend_deviation(c, &profile, PerturbationMode::FirstOrder).unwrap();
    let (da, db) = (fo(&a), fo(&b));
    ensure((da + db).abs() <= 1e-12 * scale, || {
        format!("first order: {da:e} vs {db:e}")
    })?;

    let ex = |c| bend_deviation(c, &profile, PerturbationMode::ExactSqrt).unwrap();
    let (ea, eb) = (ex(&a), ex(&b));
    let max_ratio = case
        .segments
        .iter()
        .filter_map(|s| s.radius.map(|r| PITCH / r))
        .fold(0.0, f64::max);
    ensure((ea + eb).abs() <= 2.0 * max_ratio * scale, || {
        format!(
            "exact sqrt residual {:e} exceeds {:e}",
            (ea + eb).abs(),
            2.0 * max_ratio * scale
        )
    })
}

pub fn check_radius_scaling(case: &ProfileCase, k: f64) -> Check {
    let base = case.profile();
    let mut tight = base.clone();
    for seg in &mut tight.segments {
        if let Bend::Radius(r) = seg.bend {
            seg.bend = Bend::Radius(r / k);
        }
    }
    let tight = tight.with_min_bend_ratio(500.0 / k).unwrap();
    let core = outer_core(case.theta0);
    let d1 = bend_deviation(&core, &base, PerturbationMode::FirstOrder).unwrap();
    let dk = bend_deviation(&core, &tight, PerturbationMode::FirstOrder).unwrap();
    let scale: f64 = case
        .segments
        .iter()
        .filter_map(|s| s.radius.map(|r| envelope(s.length, r)))
        .sum();
    ensure((dk - k * d1).abs() <= 1e-12 * k * scale, || {
        format!("{dk:e} vs {k} x {d1:e}")
    })
}

pub fn check_central_core(case: &ProfileCase) -> Check {
    let center = CoreSpec::new(0, 0.0, case.theta0, N, NG).unwrap();
    let profile = case.profile();
    for mode in [PerturbationMode::FirstOrder, PerturbationMode::ExactSqrt] {
        let d = bend_deviation(&center, &profile, mode).unwrap();
        ensure(d == 0.0, || format!("{mode:?}: central deviation {d:e}"))?;
    }
    Ok(())
}

/// Rotating every core and every bend plane by `delta` leaves the DGD matrix unchanged.
pub fn check_rotation_invariance(case: &ProfileCase, delta: f64) -> Check {
    let fiber =
        seven_core_layout(PITCH, N, NG, case.segments.iter().map(|s| s.length).sum(), 125e-6).unwrap();
    let profile = case.profile();
    let mut rotated_fiber = fiber.clone();
    for core in &mut rotated_fiber.cores {
        core.theta0 += delta;
    }
    let mut rotated_profile = profile.clone();
    for seg in &mut rotated_profile.segments {
        seg.bend_plane_offset += delta;
    }
    let a = dgd_matrix(&fiber, &profile, PerturbationMode::FirstOrder).unwrap();
    let b = dgd_matrix(&rotated_fiber, &rotated_profile, PerturbationMode::FirstOrder).unwrap();
    for (ra, rb) in a.dgd.iter().zip(&b.dgd) {
        for (x, y) in ra.iter().zip(rb) {
            ensure((x - y).abs() < 1e-15, || format!("dgd {x:e} vs rotated {y:e}"))?;
        }
    }
    Ok(())
}

pub fn check_gamma_continuity(radius: f64) -> Check {
    let f0 = worst_case_dgd(NG, PITCH, LENGTH, radius, 0.0).unwrap();
    let f1 = worst_case_dgd(NG, PITCH, LENGTH, radius, 1e-12).unwrap();
    let g0 = max_over_start_angle_dgd(NG, PITCH, LENGTH, radius, 0.0).unwrap();
    let g1 = max_over_start_angle_dgd(NG, PITCH, LENGTH, radius, 1e-12).unwrap();
    ensure((f1 - f0).abs() < 1e-20 && (g1 - g0).abs() < 1e-20, || {
        format!("jump {:e} / {:e}", (f1 - f0).abs(), (g1 - g0).abs())
    })
}

#[derive(Debug, Clone)]
pub struct TapCase {
    pub amplitudes: Vec<f64>,
    /// Delays in units of 100 ps, before any jitter.
    pub jitter_ps: Vec<f64>,
}

pub fn tap_strategy() -> impl Strategy<Value = TapCase> {
    (1usize..=9).prop_flat_map(|n| {
        (
            prop::collection::vec(0.1f64..1.0, n),
            prop::collection::vec(-30.0f64..30.0, n),
        )
            .prop_map(|(amplitudes, jitter_ps)| TapCase {
                amplitudes,
                jitter_ps,
            })
    })
}

impl TapCase {
    pub fn filter(&self, jitter: bool) -> FilterSpec {
        let taps = self
            .amplitudes
            .iter()
            .zip(&self.jitter_ps)
            .enumerate()
            .map(|(k, (&a, &j))| Tap {
                amplitude: a,
                delay: k as f64 * 100e-12 + if jitter { j * 1e-12 } else { 0.0 },
            })
            .collect();
        FilterSpec::new(taps, 100e-12).unwrap()
    }
}

pub fn check_common_delay_invariance(case: &TapCase, offset: f64) -> Check {
    let filter = case.filter(true);
    let shifted = FilterSpec::new(
        filter
            .taps
            .iter()
            .map(|t| Tap {
                amplitude: t.amplitude,
                delay: t.delay + offset,
            })
            .collect(),
        filter.base_delay_increment,
    )
    .unwrap();
    let a = transfer_function(&filter, 0.0, 20e9, 801).unwrap();
    let b = transfer_function(&shifted, 0.0, 20e9, 801).unwrap();
    for (i, (x, y)) in a.magnitude_db.iter().zip(&b.magnitude_db).enumerate() {
        // Depth of a near-null is set by rounding noise, not by the filter.
        if *x < -120.0 && *y < -120.0 {
            continue;
        }
        ensure((x - y).abs() < 1e-9, || format!("point {i}: {x} dB vs {y} dB"))?;
    }
    Ok(())
}

pub fn check_periodicity(case: &TapCase) -> Check {
    let filter = case.filter(false);
    // 400 points per FSR, two FSRs, so index i + 400 is f + 1/delta_tau.
    let resp = transfer_function(&filter, 0.0, 20e9, 801).unwrap();
    for i in 0..=400 {
        let (x, y) = (resp.magnitude_db[i], resp.magnitude_db[i + 400]);
        if x < -120.0 && y < -120.0 {
            continue;
        }
        ensure((x - y).abs() < 1e-9, || format!("f index {i}: {x} vs {y} dB"))?;
    }
    Ok(())
}

pub fn check_peak_value(case: &TapCase) -> Check {
    let filter = case.filter(true);
    let (re, im) = filter.response_at(0.0);
    let sum: f64 = case.amplitudes.iter().sum();
    ensure((re.hypot(im) - sum).abs() <= 1e-12 * sum, || {
        format!("|H(0)| {re} vs {sum}")
    })?;
    let resp = transfer_function(&filter, 0.0, 20e9, 801).unwrap();
    ensure(resp.magnitude_db[0].abs() < 1e-12, || {
        format!("H(0) at {} dB", resp.magnitude_db[0])
    })
}

pub fn check_even_symmetry(case: &TapCase) -> Check {
    let filter = case.filter(true);
    for i in 0..200 {
        let f = i as f64 * 0.1e9;
        let (a, b) = (filter.response_at(f), filter.response_at(-f));
        let (ma, mb) = (a.0.hypot(a.1), b.0.hypot(b.1));
        ensure((ma - mb).abs() <= 1e-12 * ma.max(1.0), || {
            format!("f {f}: {ma} vs {mb}")
        })?;
    }
    Ok(())
}

/// Sidelobe level of the N-tap uniform Dirichlet kernel by dense grid search
/// over one period, `points` samples, main lobe `|x| < 2 pi / N` excluded.
pub fn dirichlet_sidelobe_db(taps: usize, points: usize) -> f64 {
    let n = taps as f64;
    let mut best: f64 = 0.0;
    for i in 0..points {
        let x = 2.0 * PI * (i as f64 + 0.5) / points as f64;
        if x < 2.0 * PI / n || x > 2.0 * PI - 2.0 * PI / n {
            continue;
        }
        let d = ((n * x / 2.0).sin() / (n * (x / 2.0).sin())).abs();
        best = best.max(d);
    }
    20.0 * best.log10()
}
