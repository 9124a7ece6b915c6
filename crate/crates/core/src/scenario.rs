//! Scenario documents (JSON) in human units, and their validated SI form.
//!
//! ```json
//! {
//!   "fiber": { "pitch_um": 35, "clad_um": 125, "length_m": 3, "n": 1.45, "ng": 1.468 },
//!   "profile": { "segments": [
//!     { "length_m": 3, "bend_radius_mm": 35, "twist_turns": 3, "bend_plane_deg": 0 }
//!   ] },
//!   "mode": "first_order",
//!   "task": { "name": "dgd" }
//! }
//! ```
//!
//! `bend_radius_mm` may be the string `"straight"`. A segment gives its twist
//! either as `twist_turns` or as `twist_rad` (total over the segment), not both.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::delay::PerturbationMode;
use crate::deployment::{Bend, DeploymentProfile, Segment};
use crate::error::{Error, Result};
use crate::fiber::{seven_core_layout, FiberSpec, DEFAULT_GROUP_INDEX, DEFAULT_PHASE_INDEX};

pub const DEFAULT_CLADDING_UM: f64 = 125.0;
pub const DEFAULT_FREQ_GRID: FreqGridDoc = FreqGridDoc {
    start: 0.0,
    stop: 25.0,
    points: 2001,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDocument {
    pub fiber: FiberDoc,
    pub profile: ProfileDoc,
    #[serde(default)]
    pub mode: ModeDoc,
    pub task: TaskDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberDoc {
    pub pitch_um: f64,
    #[serde(default = "default_clad")]
    pub clad_um: f64,
    pub length_m: f64,
    #[serde(default = "default_n")]
    pub n: f64,
    #[serde(default = "default_ng")]
    pub ng: f64,
}

fn default_clad() -> f64 {
    DEFAULT_CLADDING_UM
}
fn default_n() -> f64 {
    DEFAULT_PHASE_INDEX
}
fn default_ng() -> f64 {
    DEFAULT_GROUP_INDEX
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileDoc {
    pub segments: Vec<SegmentDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_bend_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentDoc {
    pub length_m: f64,
    pub bend_radius_mm: BendDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist_turns: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist_rad: Option<f64>,
    #[serde(default)]
    pub bend_plane_deg: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BendDoc {
    Straight(StraightTag),
    Radius(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StraightTag {
    Straight,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeDoc {
    #[default]
    FirstOrder,
    ExactSqrt,
}

impl From<ModeDoc> for PerturbationMode {
    fn from(m: ModeDoc) -> Self {
        match m {
            ModeDoc::FirstOrder => PerturbationMode::FirstOrder,
            ModeDoc::ExactSqrt => PerturbationMode::ExactSqrt,
        }
    }
}

impl std::str::FromStr for ModeDoc {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "first_order" => Ok(ModeDoc::FirstOrder),
            "exact_sqrt" => Ok(ModeDoc::ExactSqrt),
            other => Err(Error::Validation {
                key: "mode".into(),
                message: format!("expected `first_order` or `exact_sqrt`, got `{other}`"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TaskName {
    Dgd,
    SweepBend,
    SweepTwist,
    Filter,
}

impl TaskName {
    pub fn as_str(&self) -> &'static str {
        match self {
            TaskName::Dgd => "dgd",
            TaskName::SweepBend => "sweep-bend",
            TaskName::SweepTwist => "sweep-twist",
            TaskName::Filter => "filter",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskDoc {
    pub name: TaskName,
    #[serde(default)]
    pub params: TaskParams,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radii_mm: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist_turns: Option<Vec<f64>>,
    /// Total twists as multiples of pi.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist_pi: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_tau_ps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub freq_ghz: Option<FreqGridDoc>,
    /// Evaluate the straight / 35 mm / 75 mm / 35 mm + 3 turns set instead of
    /// the scenario profile.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_conditions: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FreqGridDoc {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl std::str::FromStr for FreqGridDoc {
    type Err = Error;

    /// `start:stop:points`, GHz.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Validation {
            key: "task.params.freq_ghz".into(),
            message: format!("expected `start:stop:points`, got `{s}`"),
        };
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, points] = parts.as_slice() else {
            return Err(bad());
        };
        Ok(FreqGridDoc {
            start: start.trim().parse().map_err(|_| bad())?,
            stop: stop.trim().parse().map_err(|_| bad())?,
            points: points.trim().parse().map_err(|_| bad())?,
        })
    }
}

/// Total twists and bend radii for a DGD sweep, SI.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    /// m
    pub radii: Vec<f64>,
    /// Total twist over the fiber, rad.
    pub twists: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterTask {
    /// s
    pub delta_tau: f64,
    pub amplitudes: Vec<f64>,
    /// Hz
    pub f_start: f64,
    /// Hz
    pub f_stop: f64,
    pub points: usize,
    pub reference_conditions: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Task {
    Dgd,
    SweepBend(SweepGrid),
    SweepTwist(SweepGrid),
    Filter(FilterTask),
}

/// A validated scenario. Keeps the source document so it can be emitted again.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub document: ScenarioDocument,
    pub fiber: FiberSpec,
    pub profile: DeploymentProfile,
    pub mode: PerturbationMode,
    pub task: Task,
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    Scenario::from_document(parse_document(text)?)
}

/// Parses the document without physical validation.
pub fn parse_document(text: &str) -> Result<ScenarioDocument> {
    let mut de = serde_json::Deserializer::from_str(text);
    let doc: ScenarioDocument = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        Error::Parse {
            key: if path == "." { "<document>".into() } else { path },
            line: inner.line(),
            message: inner.to_string(),
        }
    })?;
    de.end().map_err(|e| Error::Parse {
        key: "<document>".into(),
        line: e.line(),
        message: e.to_string(),
    })?;
    Ok(doc)
}

/// Canonical JSON form of a scenario; parses back to an equal scenario.
pub fn emit_scenario(scenario: &Scenario) -> String {
    let mut text =
        serde_json::to_string_pretty(&scenario.document).expect("scenario documents always serialize");
    text.push('\n');
    text
}

fn invalid(key: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Validation {
        key: key.into(),
        message: message.into(),
    }
}

fn positive(key: &str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(invalid(key, format!("must be a positive number, got {value}")))
    }
}

fn finite(key: &str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(invalid(key, "must be finite"))
    }
}

/// Re-keys errors raised by the model constructors.
fn at(key: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        Error::Validation { .. } => e,
        other => invalid(key, other.to_string()),
    }
}

impl Scenario {
    pub fn from_document(document: ScenarioDocument) -> Result<Self> {
        let fiber = build_fiber(&document.fiber)?;
        let profile = build_profile(&document.profile)?;
        profile
            .check_length(fiber.length)
            .map_err(at("profile.segments"))?;
        for core in &fiber.cores {
            profile.check_core(core).map_err(at("profile.segments"))?;
        }
        let task = build_task(&document.task, &fiber)?;
        Ok(Scenario {
            mode: document.mode.into(),
            document,
            fiber,
            profile,
            task,
        })
    }

    pub fn task_name(&self) -> TaskName {
        self.document.task.name
    }
}

fn build_fiber(doc: &FiberDoc) -> Result<FiberSpec> {
    let pitch = positive("fiber.pitch_um", doc.pitch_um)? * 1e-6;
    let clad = positive("fiber.clad_um", doc.clad_um)? * 1e-6;
    let length = positive("fiber.length_m", doc.length_m)?;
    for (key, value) in [("fiber.n", doc.n), ("fiber.ng", doc.ng)] {
        if !(value > 1.0 && value.is_finite()) {
            return Err(invalid(key, format!("index must exceed 1, got {value}")));
        }
    }
    seven_core_layout(pitch, doc.n, doc.ng, length, clad).map_err(at("fiber"))
}

fn build_profile(doc: &ProfileDoc) -> Result<DeploymentProfile> {
    if doc.segments.is_empty() {
        return Err(invalid("profile.segments", "at least one segment is required"));
    }
    let mut segments = Vec::with_capacity(doc.segments.len());
    for (i, s) in doc.segments.iter().enumerate() {
        let key = |field: &str| format!("profile.segments[{i}].{field}");
        let length = positive(&key("length_m"), s.length_m)?;
        let bend = match s.bend_radius_mm {
            BendDoc::Straight(_) => Bend::Straight,
            BendDoc::Radius(mm) => Bend::Radius(positive(&key("bend_radius_mm"), mm)? * 1e-3),
        };
        let twist = match (s.twist_turns, s.twist_rad) {
            (Some(_), Some(_)) => {
                return Err(invalid(
                    key("twist_turns"),
                    "give either twist_turns or twist_rad, not both",
                ))
            }
            (Some(turns), None) => finite(&key("twist_turns"), turns)? * 2.0 * PI,
            (None, Some(rad)) => finite(&key("twist_rad"), rad)?,
            (None, None) => 0.0,
        };
        let plane = finite(&key("bend_plane_deg"), s.bend_plane_deg)?.to_radians();
        segments.push(Segment::new(length, bend, twist / length, plane).map_err(at(&key("length_m")))?);
    }
    let profile = DeploymentProfile::new(segments).map_err(at("profile.segments"))?;
    match doc.min_bend_ratio {
        Some(ratio) => profile
            .with_min_bend_ratio(positive("profile.min_bend_ratio", ratio)?)
            .map_err(at("profile.min_bend_ratio")),
        None => Ok(profile),
    }
}

fn build_task(doc: &TaskDoc, fiber: &FiberSpec) -> Result<Task> {
    let p = &doc.params;
    Ok(match doc.name {
        TaskName::Dgd => Task::Dgd,
        TaskName::SweepBend => Task::SweepBend(build_grid(p)?),
        TaskName::SweepTwist => Task::SweepTwist(build_grid(p)?),
        TaskName::Filter => Task::Filter(build_filter_task(p, fiber)?),
    })
}

fn build_grid(p: &TaskParams) -> Result<SweepGrid> {
    let radii_mm = p.radii_mm.as_ref().filter(|r| !r.is_empty()).ok_or_else(|| {
        invalid(
            "task.params.radii_mm",
            "a non-empty list of bend radii is required",
        )
    })?;
    let radii = radii_mm
        .iter()
        .enumerate()
        .map(|(i, &mm)| positive(&format!("task.params.radii_mm[{i}]"), mm).map(|v| v * 1e-3))
        .collect::<Result<Vec<_>>>()?;
    let (key, values, scale) = match (&p.twist_turns, &p.twist_pi) {
        (Some(_), Some(_)) => {
            return Err(invalid(
                "task.params.twist_turns",
                "give either twist_turns or twist_pi, not both",
            ))
        }
        (Some(t), None) => ("task.params.twist_turns", t, 2.0 * PI),
        (None, Some(t)) => ("task.params.twist_pi", t, PI),
        (None, None) => return Err(invalid("task.params.twist_turns", "a twist grid is required")),
    };
    if values.is_empty() {
        return Err(invalid(key, "twist grid must not be empty"));
    }
    let twists = values
        .iter()
        .enumerate()
        .map(|(i, &t)| finite(&format!("{key}[{i}]"), t).map(|v| v * scale))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepGrid { radii, twists })
}

fn build_filter_task(p: &TaskParams, fiber: &FiberSpec) -> Result<FilterTask> {
    let delta_tau_ps = p
        .delta_tau_ps
        .ok_or_else(|| invalid("task.params.delta_tau_ps", "basic differential delay is required"))?;
    let delta_tau = positive("task.params.delta_tau_ps", delta_tau_ps)? * 1e-12;
    let amplitudes = match &p.amplitudes {
        Some(a) => {
            if a.len() != fiber.cores.len() {
                return Err(invalid(
                    "task.params.amplitudes",
                    format!("{} amplitudes for {} cores", a.len(), fiber.cores.len()),
                ));
            }
            if let Some(i) = a.iter().position(|x| !(x.is_finite() && *x >= 0.0)) {
                return Err(invalid(format!("task.params.amplitudes[{i}]"), "must be >= 0"));
            }
            a.clone()
        }
        None => vec![1.0; fiber.cores.len()],
    };
    let grid = p.freq_ghz.unwrap_or(DEFAULT_FREQ_GRID);
    if !(grid.start >= 0.0 && grid.start < grid.stop && grid.stop.is_finite()) {
        return Err(invalid("task.params.freq_ghz", "need 0 <= start < stop"));
    }
    if grid.points < 2 {
        return Err(invalid("task.params.freq_ghz.points", "need at least 2 points"));
    }
    Ok(FilterTask {
        delta_tau,
        amplitudes,
        f_start: grid.start * 1e9,
        f_stop: grid.stop * 1e9,
        points: grid.points,
        reference_conditions: p.reference_conditions.unwrap_or(false),
    })
}
