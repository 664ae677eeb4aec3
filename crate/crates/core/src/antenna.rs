//! Vertical element pattern and uniform-linear-array factor.
//!
//! Each sector is a vertical array of identical elements, omnidirectional in
//! azimuth. The composite gain toward an elevation angle is the element gain
//! plus the array-factor gain for the electrical steering angle (positive
//! steering points up, negative down).

use crate::{Error, Result};
use std::f64::consts::FRAC_PI_2;

/// Array-factor magnitude-squared floor; gains below this are reported as
/// [`ARRAY_GAIN_FLOOR_DB`] instead of diverging to -inf at pattern nulls.
const ARRAY_POW_FLOOR: f64 = 1e-30;

/// Gain reported at (and below) the array-factor power floor.
pub const ARRAY_GAIN_FLOOR_DB: f64 = -300.0;

/// Half-width of the guard band around the array-factor singularities where
/// the analytic limit replaces the sine ratio.
const MAIN_LOBE_GUARD: f64 = 1e-12;

// ── Element pattern ─────────────────────────────────────────────────────────

/// Vertical radiation pattern of a single array element: a parabolic roll-off
/// in elevation capped by a side-lobe attenuation floor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementPattern {
    /// Peak element gain in dBi.
    pub max_gain_dbi: f64,
    /// 3 dB beamwidth in degrees.
    pub beamwidth_deg: f64,
    /// Side-lobe attenuation cap in dB.
    pub sidelobe_att_db: f64,
}

impl ElementPattern {
    pub fn new(max_gain_dbi: f64, beamwidth_deg: f64, sidelobe_att_db: f64) -> Result<Self> {
        if !max_gain_dbi.is_finite() {
            return Err(Error::param("max_gain_dbi", "must be finite"));
        }
        if !beamwidth_deg.is_finite() || beamwidth_deg <= 0.0 {
            return Err(Error::param("beamwidth_deg", "must be finite and > 0"));
        }
        if !sidelobe_att_db.is_finite() || sidelobe_att_db <= 0.0 {
            return Err(Error::param("sidelobe_att_db", "must be finite and > 0"));
        }
        Ok(ElementPattern {
            max_gain_dbi,
            beamwidth_deg,
            sidelobe_att_db,
        })
    }
}

impl Default for ElementPattern {
    /// 8 dBi peak, 65-degree beamwidth, 30 dB side-lobe attenuation.
    fn default() -> Self {
        ElementPattern {
            max_gain_dbi: 8.0,
            beamwidth_deg: 65.0,
            sidelobe_att_db: 30.0,
        }
    }
}

/// Element gain in dBi toward elevation `theta_deg` (degrees, boresight 0,
/// positive up). Valid for -90..=90 degrees.
pub fn element_gain_db(theta_deg: f64, pattern: &ElementPattern) -> Result<f64> {
    if !(theta_deg.is_finite() && (-90.0..=90.0).contains(&theta_deg)) {
        return Err(Error::InvalidAngle {
            angle_deg: theta_deg,
        });
    }
    let ratio = theta_deg / pattern.beamwidth_deg;
    let rolloff = (12.0 * ratio * ratio).min(pattern.sidelobe_att_db);
    Ok(pattern.max_gain_dbi - rolloff)
}

// ── Array factor ────────────────────────────────────────────────────────────

/// A vertical uniform linear array at half-wavelength element spacing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayConfig {
    /// Number of vertically stacked elements.
    pub n_elements: usize,
}

impl ArrayConfig {
    pub fn new(n_elements: usize) -> Result<Self> {
        if n_elements == 0 {
            return Err(Error::param("n_elements", "must be at least 1"));
        }
        Ok(ArrayConfig { n_elements })
    }
}

impl Default for ArrayConfig {
    fn default() -> Self {
        ArrayConfig { n_elements: 8 }
    }
}

/// Normalized array-factor power |A|^2 as a function of the elevation and
/// steering sines. The sine ratio is singular wherever `sin(theta) -
/// sin(phi)` is an even integer; there both sines vanish and the power tends
/// to the element count, which the guard band returns directly. Deep nulls
/// are floored at [`ARRAY_POW_FLOOR`].
pub(crate) fn array_factor_pow(sin_theta: f64, sin_phi: f64, n_elements: usize) -> f64 {
    let n = n_elements as f64;
    let x = sin_theta - sin_phi;
    let nearest_even = 2.0 * (x / 2.0).round();
    if (x - nearest_even).abs() < MAIN_LOBE_GUARD {
        return n;
    }
    let num = (n * FRAC_PI_2 * x).sin();
    let den = (FRAC_PI_2 * x).sin();
    let amp = num / (n.sqrt() * den);
    (amp * amp).max(ARRAY_POW_FLOOR)
}

/// Array-factor gain in dB toward elevation `theta_rad` for electrical
/// steering angle `phi_rad` (radians, positive up). Peaks at
/// `10 log10(n_elements)` when the two sines coincide; nulls are floored at
/// [`ARRAY_GAIN_FLOOR_DB`].
pub fn array_factor_gain_db(theta_rad: f64, phi_rad: f64, array: &ArrayConfig) -> f64 {
    let pow = array_factor_pow(theta_rad.sin(), phi_rad.sin(), array.n_elements);
    if pow <= ARRAY_POW_FLOOR {
        ARRAY_GAIN_FLOOR_DB
    } else {
        10.0 * pow.log10()
    }
}

/// Composite sector gain in dB: element pattern plus array factor, both in
/// the vertical plane (the pattern is omnidirectional in azimuth).
pub fn composite_gain_db(
    theta_rad: f64,
    phi_rad: f64,
    pattern: &ElementPattern,
    array: &ArrayConfig,
) -> Result<f64> {
    let element = element_gain_db(theta_rad.to_degrees(), pattern)?;
    Ok(element + array_factor_gain_db(theta_rad, phi_rad, array))
}
