//! Unit conversion at the boundary. Internally frequencies are angular (rad/s)
//! and times are seconds; configs and tables quote `f/2pi` in Hz multiples.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Angular frequency of `1 GHz` (`2 pi 1e9 rad/s`).
pub const GHZ: f64 = 2.0 * PI * 1e9;
pub const MHZ: f64 = 2.0 * PI * 1e6;
pub const KHZ: f64 = 2.0 * PI * 1e3;
pub const HZ: f64 = 2.0 * PI;

pub const NS: f64 = 1e-9;
pub const US: f64 = 1e-6;
pub const MS: f64 = 1e-3;

/// Elementary charge (C) and Planck constant (J s), exact SI values.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
pub const PLANCK: f64 = 6.626_070_15e-34;
pub const FEMTOFARAD: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Frequency,
    Time,
}

/// Parses strings such as `"40 MHz"`, `"30us"`, `"30 µs"`, `"50 ns"`.
/// Frequencies return angular values, times seconds.
pub fn parse_quantity(s: &str) -> Result<(f64, Dimension)> {
    let t = s.trim();
    // longest prefix that reads as a number; the rest is the unit
    let (value, unit) = t
        .char_indices()
        .map(|(i, _)| i)
        .chain(std::iter::once(t.len()))
        .rev()
        .find_map(|i| t[..i].trim().parse::<f64>().ok().map(|v| (v, &t[i..])))
        .ok_or_else(|| Error::Parse(format!("bad number in quantity '{s}'")))?;
    if !value.is_finite() {
        return Err(Error::Parse(format!("non-finite quantity '{s}'")));
    }
    let (scale, dim) = match unit.trim() {
        "GHz" => (GHZ, Dimension::Frequency),
        "MHz" => (MHZ, Dimension::Frequency),
        "kHz" => (KHZ, Dimension::Frequency),
        "Hz" => (HZ, Dimension::Frequency),
        "s" => (1.0, Dimension::Time),
        "ms" => (MS, Dimension::Time),
        "us" | "µs" | "μs" => (US, Dimension::Time),
        "ns" => (NS, Dimension::Time),
        other => return Err(Error::Parse(format!("unknown unit '{other}' in '{s}'"))),
    };
    Ok((value * scale, dim))
}

pub fn parse_frequency(s: &str) -> Result<f64> {
    match parse_quantity(s)? {
        (v, Dimension::Frequency) => Ok(v),
        _ => Err(Error::Parse(format!("'{s}' is not a frequency"))),
    }
}

pub fn parse_time(s: &str) -> Result<f64> {
    match parse_quantity(s)? {
        (v, Dimension::Time) => Ok(v),
        _ => Err(Error::Parse(format!("'{s}' is not a time"))),
    }
}
