//! Small numerical helpers shared by the delay and filter code.

use std::f64::consts::PI;

/// Speed of light in vacuum, m/s (exact SI value).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// `sin(pi * t)` with exact argument reduction.
///
/// Integer `t` yields exactly `0.0`, which `(PI * t).sin()` does not.
pub fn sin_pi(t: f64) -> f64 {
    if !t.is_finite() {
        return f64::NAN;
    }
    // `%` is exact for floats; the shifts below stay exact by Sterbenz.
    let mut r = t % 2.0;
    if r > 1.0 {
        r -= 2.0;
    } else if r < -1.0 {
        r += 2.0;
    }
    if r == 0.0 || r.abs() == 1.0 {
        return 0.0;
    }
    if r > 0.5 {
        (PI * (1.0 - r)).sin()
    } else if r < -0.5 {
        -(PI * (1.0 + r)).sin()
    } else {
        (PI * r).sin()
    }
}

/// Unnormalized sinc, `sin(x) / x` with `sinc_u(0) = 1`.
///
/// Zeros at `x = k*pi` come out as exact zeros whenever `x / pi` rounds to an
/// integer.
pub fn sinc_u(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0 - x2 * x2 * x2 / 5040.0
    } else {
        sin_pi(x / PI) / x
    }
}

/// Formats `x` with `sig` significant digits, `%g` style, trailing zeros trimmed.
pub fn format_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sig = sig.max(1);
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent in scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= sig as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
