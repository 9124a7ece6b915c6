//! Discrete-time microwave-photonic FIR filter fed by the fiber cores.
//!
//! Each core carries one tap. After straight-fiber calibration tap `k` sits at
//! `k * delta_tau`; bending adds the per-core deviation on top of that.

use std::f64::consts::PI;

use crate::delay::{dgd_matrix, PerturbationMode};
use crate::deployment::DeploymentProfile;
use crate::error::{Error, Result};
use crate::fiber::FiberSpec;

/// Magnitude floor for exact nulls, dB.
pub const DB_FLOOR: f64 = -200.0;

/// Level tolerance for a grid point to count as a main (0 dB) peak, dB.
pub const MAIN_PEAK_TOLERANCE_DB: f64 = 0.01;

/// Minimum number of grid points per free spectral range for sidelobe search.
pub const MIN_POINTS_PER_FSR: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tap {
    /// Linear field-amplitude weight.
    pub amplitude: f64,
    /// Absolute delay, s.
    pub delay: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterSpec {
    pub taps: Vec<Tap>,
    /// Basic differential delay between adjacent taps, s.
    pub base_delay_increment: f64,
}

impl FilterSpec {
    pub fn new(taps: Vec<Tap>, base_delay_increment: f64) -> Result<Self> {
        let spec = FilterSpec {
            taps,
            base_delay_increment,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// `count` equal taps at `k * delta_tau`.
    pub fn uniform(count: usize, delta_tau: f64) -> Result<Self> {
        Self::new(
            (0..count)
                .map(|k| Tap {
                    amplitude: 1.0,
                    delay: k as f64 * delta_tau,
                })
                .collect(),
            delta_tau,
        )
    }

    /// Same filter with `offsets[k]` added to the delay of tap `k`.
    pub fn with_delay_offsets(&self, offsets: &[f64]) -> Result<Self> {
        if offsets.len() != self.taps.len() {
            return Err(Error::invalid(format!(
                "{} delay offsets for {} taps",
                offsets.len(),
                self.taps.len()
            )));
        }
        let taps = self
            .taps
            .iter()
            .zip(offsets)
            .map(|(t, d)| Tap {
                amplitude: t.amplitude,
                delay: t.delay + d,
            })
            .collect();
        Self::new(taps, self.base_delay_increment)
    }

    pub fn validate(&self) -> Result<()> {
        if self.taps.is_empty() {
            return Err(Error::invalid("filter needs at least one tap"));
        }
        if !(self.base_delay_increment > 0.0 && self.base_delay_increment.is_finite()) {
            return Err(Error::invalid(format!(
                "basic differential delay must be > 0, got {}",
                self.base_delay_increment
            )));
        }
        for (k, tap) in self.taps.iter().enumerate() {
            if !(tap.amplitude >= 0.0 && tap.amplitude.is_finite()) {
                return Err(Error::invalid(format!("tap {k}: amplitude must be >= 0")));
            }
            if !tap.delay.is_finite() {
                return Err(Error::invalid(format!("tap {k}: delay not finite")));
            }
        }
        Ok(())
    }

    /// Nominal free spectral range `1 / delta_tau`, Hz.
    pub fn nominal_fsr(&self) -> f64 {
        1.0 / self.base_delay_increment
    }

    /// Complex response `sum_k a_k exp(-i 2 pi f tau_k)` as `(re, im)`.
    pub fn response_at(&self, f: f64) -> (f64, f64) {
        self.taps.iter().fold((0.0, 0.0), |(re, im), tap| {
            let phase = -2.0 * PI * f * tap.delay;
            (re + tap.amplitude * phase.cos(), im + tap.amplitude * phase.sin())
        })
    }
}

/// Sampled magnitude response normalized to a 0 dB maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyResponse {
    /// Hz, strictly increasing.
    pub frequencies: Vec<f64>,
    pub magnitude_db: Vec<f64>,
    /// Number of taps of the filter that produced the response.
    pub tap_count: usize,
}

impl FrequencyResponse {
    fn step(&self) -> f64 {
        let n = self.frequencies.len();
        (self.frequencies[n - 1] - self.frequencies[0]) / (n - 1) as f64
    }

    fn is_local_max(&self, i: usize) -> bool {
        let m = &self.magnitude_db;
        let left = i == 0 || m[i] >= m[i - 1];
        let right = i + 1 == m.len() || m[i] >= m[i + 1];
        left && right
    }
}

/// Builds one tap per core, ordered by core id, with straight-calibrated delays
/// `k * delta_tau + deviation_k`.
pub fn build_filter_from_fiber(
    fiber: &FiberSpec,
    profile: &DeploymentProfile,
    delta_tau: f64,
    amplitudes: &[f64],
    mode: PerturbationMode,
) -> Result<FilterSpec> {
    if amplitudes.len() != fiber.cores.len() {
        return Err(Error::invalid(format!(
            "{} amplitudes for {} cores",
            amplitudes.len(),
            fiber.cores.len()
        )));
    }
    if !(delta_tau > 0.0 && delta_tau.is_finite()) {
        return Err(Error::invalid(format!(
            "basic differential delay must be > 0, got {delta_tau}"
        )));
    }
    let report = dgd_matrix(fiber, profile, mode)?;
    let mut order: Vec<usize> = (0..fiber.cores.len()).collect();
    order.sort_by_key(|&i| fiber.cores[i].id);
    let taps = order
        .iter()
        .enumerate()
        .map(|(k, &i)| Tap {
            amplitude: amplitudes[i],
            delay: k as f64 * delta_tau + report.deviation[i],
        })
        .collect();
    FilterSpec::new(taps, delta_tau)
}

/// Uniform grid of `n_points` frequencies including both endpoints.
pub fn frequency_grid(f_start: f64, f_stop: f64, n_points: usize) -> Result<Vec<f64>> {
    if !(f_start >= 0.0 && f_start < f_stop && f_stop.is_finite()) {
        return Err(Error::invalid(format!(
            "frequency range must satisfy 0 <= start < stop, got [{f_start}, {f_stop}]"
        )));
    }
    if n_points < 2 {
        return Err(Error::invalid("frequency grid needs at least 2 points"));
    }
    let step = (f_stop - f_start) / (n_points - 1) as f64;
    Ok((0..n_points)
        .map(|i| {
            if i + 1 == n_points {
                f_stop
            } else {
                f_start + i as f64 * step
            }
        })
        .collect())
}

pub fn transfer_function(
    filter: &FilterSpec,
    f_start: f64,
    f_stop: f64,
    n_points: usize,
) -> Result<FrequencyResponse> {
    filter.validate()?;
    if filter.taps.iter().all(|t| t.amplitude == 0.0) {
        return Err(Error::DegenerateFilter("all tap amplitudes are zero".into()));
    }
    let frequencies = frequency_grid(f_start, f_stop, n_points)?;
    let magnitude: Vec<f64> = frequencies
        .iter()
        .map(|&f| {
            let (re, im) = filter.response_at(f);
            re.hypot(im)
        })
        .collect();
    let peak = magnitude.iter().copied().fold(0.0, f64::max);
    if peak == 0.0 {
        return Err(Error::DegenerateFilter(
            "response vanishes on the whole grid".into(),
        ));
    }
    let magnitude_db = magnitude
        .iter()
        .map(|&m| {
            if m == peak {
                0.0
            } else {
                (20.0 * (m / peak).log10()).max(DB_FLOOR)
            }
        })
        .collect();
    Ok(FrequencyResponse {
        frequencies,
        magnitude_db,
        tap_count: filter.taps.len(),
    })
}

/// Highest secondary maximum relative to the 0 dB main peak, dB.
///
/// Main lobes are the windows of half-width `fsr / N` around the global maximum
/// and its translates by multiples of `fsr`. Returns `None` when no local
/// maximum lies outside them.
pub fn sidelobe_level(resp: &FrequencyResponse, fsr_hint: f64) -> Result<Option<f64>> {
    check_response(resp)?;
    if !(fsr_hint > 0.0 && fsr_hint.is_finite()) {
        return Err(Error::invalid(format!("FSR hint must be > 0, got {fsr_hint}")));
    }
    let f = &resp.frequencies;
    let span = f[f.len() - 1] - f[0];
    if span < fsr_hint * (1.0 - 1e-9) {
        return Err(Error::Resolution(format!(
            "grid spans {span} Hz, less than one FSR of {fsr_hint} Hz"
        )));
    }
    let per_fsr = fsr_hint / resp.step();
    if per_fsr < MIN_POINTS_PER_FSR {
        return Err(Error::Resolution(format!(
            "{per_fsr:.1} points per FSR, need at least {MIN_POINTS_PER_FSR}"
        )));
    }

    let peak_idx = argmax(&resp.magnitude_db);
    let f_peak = f[peak_idx];
    let half_width = fsr_hint / resp.tap_count.max(1) as f64;
    let in_main_lobe = |x: f64| {
        let k = ((x - f_peak) / fsr_hint).round();
        (x - (f_peak + k * fsr_hint)).abs() <= half_width
    };

    Ok((0..f.len())
        .filter(|&i| !in_main_lobe(f[i]) && resp.is_local_max(i))
        // Grid edges only bound a lobe from one side.
        .filter(|&i| i != 0 && i + 1 != f.len())
        .map(|i| resp.magnitude_db[i])
        .fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |a| a.max(x)))))
}

/// Spacing between consecutive 0 dB peaks (within 0.01 dB), Hz.
pub fn fsr_estimate(resp: &FrequencyResponse) -> Result<f64> {
    fsr_estimate_within(resp, MAIN_PEAK_TOLERANCE_DB)
}

/// [`fsr_estimate`] with a caller-chosen peak tolerance in dB.
///
/// Runs of adjacent grid points within `tolerance_db` of 0 dB form one peak,
/// located at the highest point of the run; the estimate is the mean spacing
/// of those peaks.
pub fn fsr_estimate_within(resp: &FrequencyResponse, tolerance_db: f64) -> Result<f64> {
    check_response(resp)?;
    let m = &resp.magnitude_db;
    let mut peaks = Vec::new();
    // Index of the highest point in the current run above the threshold.
    let mut run: Option<usize> = None;
    for (i, &level) in m.iter().enumerate() {
        if level >= -tolerance_db {
            run = match run {
                Some(best) if m[best] >= level => Some(best),
                _ => Some(i),
            };
        } else if let Some(best) = run.take() {
            peaks.push(resp.frequencies[best]);
        }
    }
    if let Some(best) = run {
        peaks.push(resp.frequencies[best]);
    }
    if peaks.len() < 2 {
        return Err(Error::Resolution(format!(
            "found {} peak(s) within {tolerance_db} dB of the maximum, need 2",
            peaks.len()
        )));
    }
    Ok((peaks[peaks.len() - 1] - peaks[0]) / (peaks.len() - 1) as f64)
}

fn check_response(resp: &FrequencyResponse) -> Result<()> {
    if resp.frequencies.len() < 2 || resp.frequencies.len() != resp.magnitude_db.len() {
        return Err(Error::invalid("response needs at least 2 matching samples"));
    }
    Ok(())
}

fn argmax(xs: &[f64]) -> usize {
    xs.iter()
        .enumerate()
        .fold(
            (0, f64::NEG_INFINITY),
            |(bi, bx), (i, &x)| if x > bx { (i, x) } else { (bi, bx) },
        )
        .0
}
