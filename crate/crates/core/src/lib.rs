//! Group-delay simulation of weakly-coupled multicore fibers under bending and
//! twisting, and the microwave-photonic FIR filters that use their cores as
//! true-time-delay taps.
//!
//! The crate is organized bottom-up:
//!
//! - [`fiber`]: core geometry and optical constants, the hexagonal 7-core layout;
//! - [`deployment`]: piecewise bend/twist profiles and core azimuths along `z`;
//! - [`delay`]: equivalent index, accumulated delays, DGD matrices and the
//!   closed-form worst-case laws;
//! - [`filter`]: taps built from per-core delays, magnitude response, FSR and
//!   sidelobe metrics;
//! - [`scenario`] and [`tasks`]: JSON scenario documents, sweeps and CSV output.
//!
//! All quantities are SI (m, s, rad, Hz) unless a name says otherwise.

pub mod delay;
pub mod deployment;
pub mod error;
pub mod fiber;
pub mod filter;
pub mod numeric;
pub mod scenario;
pub mod tasks;

pub use delay::{
    accumulated_delay, bend_deviation, dgd_matrix, equivalent_index, integrate_delay_numeric,
    max_over_start_angle_dgd, worst_case_dgd, DelayReport, PerturbationMode,
};
pub use deployment::{angle_at, total_twist, Bend, DeploymentProfile, Segment};
pub use error::{Error, Result};
pub use fiber::{seven_core_layout, straight_delay, CoreSpec, FiberSpec};
pub use filter::{
    build_filter_from_fiber, fsr_estimate, fsr_estimate_within, sidelobe_level, transfer_function,
    FilterSpec, FrequencyResponse, Tap,
};
pub use numeric::{sinc_u, SPEED_OF_LIGHT};
pub use scenario::{emit_scenario, parse_scenario, Scenario};
