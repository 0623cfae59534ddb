//! Conversions between trace, geodesic length, multiplier, ring modulus and
//! `rho`, plus the two elementary modulus bounds used for the A-constants.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

/// `acosh(x)` for `x >= 1`, written as `log1p(t + sqrt(t (t + 2)))` with
/// `t = x - 1` so arguments near 1 keep full relative accuracy.
pub fn acosh(x: f64) -> f64 {
    let t = x - 1.0;
    (t + (t * (t + 2.0)).sqrt()).ln_1p()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RingInvariants {
    pub modulus: f64,
    pub rho: f64,
    pub lambda: f64,
    pub length: f64,
    pub trace: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingField {
    Modulus,
    Rho,
    Lambda,
    Length,
    Trace,
}

impl std::str::FromStr for RingField {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "modulus" => Ok(RingField::Modulus),
            "rho" => Ok(RingField::Rho),
            "lambda" => Ok(RingField::Lambda),
            "length" => Ok(RingField::Length),
            "trace" => Ok(RingField::Trace),
            _ => Err(Error::domain(format!("unknown ring field `{s}`"))),
        }
    }
}

/// Fills in all five invariants from one of them.
pub fn ring_from(field: RingField, value: f64) -> Result<RingInvariants> {
    if !value.is_finite() {
        return Err(Error::domain("ring invariant must be finite"));
    }
    let length = match field {
        RingField::Trace => {
            if value <= 2.0 {
                return Err(Error::domain(format!(
                    "trace {value} <= 2 does not define a ring"
                )));
            }
            2.0 * acosh(value / 2.0)
        }
        RingField::Length => {
            if value <= 0.0 {
                return Err(Error::domain("length must be positive"));
            }
            value
        }
        RingField::Lambda => {
            if value <= 1.0 {
                return Err(Error::domain("multiplier must exceed 1"));
            }
            value.ln()
        }
        RingField::Rho => {
            if !(value > 0.0 && value < 1.0) {
                return Err(Error::domain("rho must lie in (0, 1)"));
            }
            -2.0 * PI * PI / value.ln()
        }
        RingField::Modulus => {
            if value <= 0.0 {
                return Err(Error::domain("modulus must be positive"));
            }
            PI / value
        }
    };
    let mut inv = RingInvariants {
        modulus: PI / length,
        rho: (-2.0 * PI * PI / length).exp(),
        lambda: length.exp(),
        length,
        trace: 2.0 * (length / 2.0).cosh(),
    };
    // Keep the given field bit-exact.
    match field {
        RingField::Trace => inv.trace = value,
        RingField::Length => {}
        RingField::Lambda => inv.lambda = value,
        RingField::Rho => inv.rho = value,
        RingField::Modulus => inv.modulus = value,
    }
    Ok(inv)
}

/// `exp(-pi^2 / acosh(trace / 2))`: the `rho` of the ring whose core geodesic
/// has the given trace.
pub fn rho_from_trace(trace: f64) -> f64 {
    (-PI * PI / acosh(trace / 2.0)).exp()
}

/// Lower bound on the modulus of the unit disk minus a radial slit of length
/// `t`: `(1/2pi) log((1 + sqrt(1 - t^2))^2 / t)`.
pub fn grotzsch_lower_modulus(t: f64) -> Result<f64> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::domain(format!("slit length {t} outside (0, 1)")));
    }
    let s = 1.0 + (1.0 - t * t).sqrt();
    Ok((s * s / t).ln() / (2.0 * PI))
}

/// `(1 + sqrt(1 - 16 a0^{2q}))^{2/q} a0`, or `a0` itself when the radicand is
/// negative.
pub fn aaa_lower_bound(a0: f64, q: u32) -> Result<f64> {
    if !(a0 > 0.0 && a0 < 1.0) {
        return Err(Error::domain(format!("a0 = {a0} outside (0, 1)")));
    }
    if q == 0 {
        return Err(Error::domain("q must be at least 1"));
    }
    let x = 16.0 * a0.powi(2 * q as i32);
    if x > 1.0 {
        return Ok(a0);
    }
    Ok((1.0 + (1.0 - x).sqrt()).powf(2.0 / q as f64) * a0)
}
