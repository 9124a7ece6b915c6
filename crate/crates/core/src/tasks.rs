//! Scenario task runners and their CSV tables.
//!
//! Every runner returns rows in grid order, so output is byte-identical
//! between runs of the same scenario.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::delay::{dgd_matrix, max_over_start_angle_dgd, worst_case_dgd, PerturbationMode};
use crate::deployment::{Bend, DeploymentProfile};
use crate::error::{Error, Result};
use crate::filter::{
    build_filter_from_fiber, fsr_estimate_within, sidelobe_level, transfer_function, FrequencyResponse,
};
use crate::numeric::format_sig;
use crate::scenario::{FilterTask, Scenario, SweepGrid, Task};

/// Significant digits of every numeric CSV cell.
pub const CSV_DIGITS: usize = 9;

/// Peak tolerance used for the FSR reported in filter metrics, dB. Wider than
/// the strict 0 dB criterion so that bend-degraded responses still resolve
/// their second passband.
pub const METRIC_FSR_TOLERANCE_DB: f64 = 3.0;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

/// A CSV table: one header line, comma separators, LF line endings.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                match cell {
                    Cell::Num(x) => out.push_str(&format_sig(*x, CSV_DIGITS)),
                    Cell::Text(s) => out.push_str(s),
                    Cell::Empty => {}
                }
            }
            out.push('\n');
        }
        out
    }

    /// Numeric column by header name; non-numeric cells become NaN.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.header.iter().position(|h| *h == name)?;
        Some(
            self.rows
                .iter()
                .map(|r| match r[idx] {
                    Cell::Num(x) => x,
                    _ => f64::NAN,
                })
                .collect(),
        )
    }
}

/// Per-core delays and DGD against the central core.
pub fn run_dgd(scenario: &Scenario) -> Result<Table> {
    let report = dgd_matrix(&scenario.fiber, &scenario.profile, scenario.mode)?;
    let reference = scenario
        .fiber
        .cores
        .iter()
        .position(|c| c.is_central())
        .unwrap_or(0);
    let mut table = Table::new(vec![
        "core_id",
        "r_m",
        "theta0_rad",
        "delay_s",
        "deviation_s",
        "deviation_ps",
        "dgd_vs_center_s",
        "dgd_vs_center_ps",
    ]);
    for (i, core) in scenario.fiber.cores.iter().enumerate() {
        let dgd = report.dgd[i][reference];
        table.push(vec![
            f64::from(core.id).into(),
            core.r.into(),
            core.theta0.into(),
            report.per_core_delay[i].into(),
            report.deviation[i].into(),
            (report.deviation[i] * 1e12).into(),
            dgd.into(),
            (dgd * 1e12).into(),
        ]);
    }
    Ok(table)
}

/// One sweep point of the closed-form DGD laws, SI.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub bend_radius: f64,
    pub total_twist: f64,
    pub worst_case_dgd: f64,
    pub max_over_start_angle_dgd: f64,
}

fn sweep_point(scenario: &Scenario, bend_radius: f64, total_twist: f64) -> Result<SweepRow> {
    let fiber = &scenario.fiber;
    let outer = fiber
        .cores
        .iter()
        .max_by(|a, b| a.r.total_cmp(&b.r))
        .ok_or_else(|| Error::invalid("fiber has no cores"))?;
    let gamma = total_twist / fiber.length;
    Ok(SweepRow {
        bend_radius,
        total_twist,
        worst_case_dgd: worst_case_dgd(outer.ng, outer.r, fiber.length, bend_radius, gamma)?,
        max_over_start_angle_dgd: max_over_start_angle_dgd(
            outer.ng,
            outer.r,
            fiber.length,
            bend_radius,
            gamma,
        )?,
    })
}

fn check_grid(radii: &[f64], twists: &[f64]) -> Result<()> {
    if radii.is_empty() || twists.is_empty() {
        return Err(Error::invalid("sweep grids must not be empty"));
    }
    Ok(())
}

/// Worst-case DGD over a (bend radius x total twist) grid, sorted by radius then twist.
pub fn run_sweep_bend(scenario: &Scenario, radii: &[f64], twists: &[f64]) -> Result<Vec<SweepRow>> {
    check_grid(radii, twists)?;
    let mut rows = Vec::with_capacity(radii.len() * twists.len());
    for &r in radii {
        for &t in twists {
            rows.push(sweep_point(scenario, r, t)?);
        }
    }
    rows.sort_by(|a, b| {
        a.bend_radius
            .total_cmp(&b.bend_radius)
            .then(a.total_twist.total_cmp(&b.total_twist))
    });
    Ok(rows)
}

/// Same grid as [`run_sweep_bend`], sorted by twist then radius.
pub fn run_sweep_twist(scenario: &Scenario, radii: &[f64], twists: &[f64]) -> Result<Vec<SweepRow>> {
    let mut rows = run_sweep_bend(scenario, radii, twists)?;
    rows.sort_by(|a, b| {
        a.total_twist
            .total_cmp(&b.total_twist)
            .then(a.bend_radius.total_cmp(&b.bend_radius))
    });
    Ok(rows)
}

pub fn sweep_bend_table(rows: &[SweepRow]) -> Table {
    let mut table = Table::new(vec![
        "bend_radius_m",
        "bend_radius_mm",
        "total_twist_rad",
        "total_twist_pi",
        "worst_case_dgd_s",
        "worst_case_dgd_ps",
        "max_over_start_angle_dgd_s",
        "max_over_start_angle_dgd_ps",
    ]);
    for r in rows {
        table.push(vec![
            r.bend_radius.into(),
            (r.bend_radius * 1e3).into(),
            r.total_twist.into(),
            (r.total_twist / PI).into(),
            r.worst_case_dgd.into(),
            (r.worst_case_dgd * 1e12).into(),
            r.max_over_start_angle_dgd.into(),
            (r.max_over_start_angle_dgd * 1e12).into(),
        ]);
    }
    table
}

pub fn sweep_twist_table(rows: &[SweepRow]) -> Table {
    let mut table = Table::new(vec![
        "total_twist_rad",
        "total_twist_pi",
        "bend_radius_m",
        "bend_radius_mm",
        "worst_case_dgd_s",
        "worst_case_dgd_ps",
        "max_over_start_angle_dgd_s",
        "max_over_start_angle_dgd_ps",
    ]);
    for r in rows {
        table.push(vec![
            r.total_twist.into(),
            (r.total_twist / PI).into(),
            r.bend_radius.into(),
            (r.bend_radius * 1e3).into(),
            r.worst_case_dgd.into(),
            (r.worst_case_dgd * 1e12).into(),
            r.max_over_start_angle_dgd.into(),
            (r.max_over_start_angle_dgd * 1e12).into(),
        ]);
    }
    table
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterMetrics {
    /// Hz; `None` when fewer than two passbands are resolved.
    pub fsr: Option<f64>,
    /// dB relative to the main peak; `None` when there are no sidelobes.
    pub sidelobe_db: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterTrace {
    pub condition: String,
    pub response: FrequencyResponse,
    pub metrics: FilterMetrics,
}

/// The four fiber conditions of the reference filter measurement: straight,
/// 35 mm bend, 75 mm bend, and 35 mm bend with three full turns of twist.
pub fn reference_conditions(length: f64) -> Result<Vec<(&'static str, DeploymentProfile)>> {
    Ok(vec![
        ("straight", DeploymentProfile::straight(length)?),
        (
            "bend_35mm",
            DeploymentProfile::uniform(length, Bend::Radius(0.035), 0.0)?,
        ),
        (
            "bend_75mm",
            DeploymentProfile::uniform(length, Bend::Radius(0.075), 0.0)?,
        ),
        (
            "bend_35mm_twist_3turns",
            DeploymentProfile::uniform(length, Bend::Radius(0.035), 3.0 * 2.0 * PI / length)?,
        ),
    ])
}

fn filter_trace(
    scenario: &Scenario,
    task: &FilterTask,
    condition: &str,
    profile: &DeploymentProfile,
    mode: PerturbationMode,
) -> Result<FilterTrace> {
    let filter = build_filter_from_fiber(&scenario.fiber, profile, task.delta_tau, &task.amplitudes, mode)?;
    let response = transfer_function(&filter, task.f_start, task.f_stop, task.points)?;
    let fsr = fsr_estimate_within(&response, METRIC_FSR_TOLERANCE_DB).ok();
    let sidelobe_db = sidelobe_level(&response, filter.nominal_fsr())?;
    Ok(FilterTrace {
        condition: condition.to_string(),
        response,
        metrics: FilterMetrics { fsr, sidelobe_db },
    })
}

/// Filter responses for the scenario profile, or for the reference conditions
/// when the task asks for them.
pub fn run_filter_task(scenario: &Scenario) -> Result<Vec<FilterTrace>> {
    let Task::Filter(task) = &scenario.task else {
        return Err(Error::invalid("scenario task is not `filter`"));
    };
    if task.reference_conditions {
        reference_conditions(scenario.fiber.length)?
            .iter()
            .map(|(name, profile)| filter_trace(scenario, task, name, profile, scenario.mode))
            .collect()
    } else {
        Ok(vec![filter_trace(
            scenario,
            task,
            "scenario",
            &scenario.profile,
            scenario.mode,
        )?])
    }
}

pub fn filter_response_table(traces: &[FilterTrace]) -> Table {
    let mut table = Table::new(vec!["condition", "frequency_hz", "frequency_ghz", "magnitude_db"]);
    for trace in traces {
        let r = &trace.response;
        for (f, m) in r.frequencies.iter().zip(&r.magnitude_db) {
            table.push(vec![
                trace.condition.as_str().into(),
                (*f).into(),
                (f * 1e-9).into(),
                (*m).into(),
            ]);
        }
    }
    table
}

pub fn filter_metrics_table(traces: &[FilterTrace]) -> Table {
    let mut table = Table::new(vec!["condition", "fsr_hz", "fsr_ghz", "sidelobe_db"]);
    for trace in traces {
        let m = &trace.metrics;
        table.push(vec![
            trace.condition.as_str().into(),
            m.fsr.into(),
            m.fsr.map(|f| f * 1e-9).into(),
            m.sidelobe_db.into(),
        ]);
    }
    table
}

/// Output of a scenario run: the task CSV plus, for filters, a metrics table.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub table: Table,
    pub metrics: Option<Table>,
}

/// Runs whatever task the scenario names.
pub fn run_scenario(scenario: &Scenario) -> Result<RunOutput> {
    let (table, metrics) = match &scenario.task {
        Task::Dgd => (run_dgd(scenario)?, None),
        Task::SweepBend(SweepGrid { radii, twists }) => {
            (sweep_bend_table(&run_sweep_bend(scenario, radii, twists)?), None)
        }
        Task::SweepTwist(SweepGrid { radii, twists }) => (
            sweep_twist_table(&run_sweep_twist(scenario, radii, twists)?),
            None,
        ),
        Task::Filter(_) => {
            let traces = run_filter_task(scenario)?;
            (
                filter_response_table(&traces),
                Some(filter_metrics_table(&traces)),
            )
        }
    };
    Ok(RunOutput { table, metrics })
}

/// Human-readable one-line summary of filter metrics.
pub fn describe_metrics(traces: &[FilterTrace]) -> String {
    let mut out = String::new();
    for t in traces {
        let fsr = t
            .metrics
            .fsr
            .map_or("n/a".into(), |f| format!("{:.4} GHz", f * 1e-9));
        let sl = t
            .metrics
            .sidelobe_db
            .map_or("none".into(), |s| format!("{s:.3} dB"));
        let _ = writeln!(out, "{}: FSR {fsr}, sidelobe {sl}", t.condition);
    }
    out
}
