//! Two-ray ground-reflection link budget with a height-dependent path-loss
//! exponent.
//!
//! Every link is evaluated in linear watts. The direct ray carries the
//! composite sector gain toward the receiver; the reflected ray (downtilted
//! sectors only) leaves the array at the downward departure elevation toward
//! the ground intercept, is attenuated by a vertically polarized Fresnel
//! reflection off lossless ground, and is power-summed with the direct ray.
//! The uptilted sector has no significant ground reflection and uses the
//! direct ray alone.

use crate::antenna::{composite_gain_db, ArrayConfig, ElementPattern};
use crate::geometry::Vec2;
use crate::{Error, Result};
use std::f64::consts::PI;

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Height of the downtilted (ground-serving) sector above ground, metres.
pub const DT_SECTOR_HEIGHT_M: f64 = 30.0;

/// Height of the uptilted (aerial-serving) sector, one metre above the
/// downtilted one.
pub const UT_SECTOR_HEIGHT_M: f64 = 31.0;

// ── Unit conversions ────────────────────────────────────────────────────────

/// dBm to watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

/// dB to linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Linear power ratio to dB.
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

// ── Radio parameters ────────────────────────────────────────────────────────

/// Carrier, transmit power, and ground-level propagation constants shared by
/// every link in a scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadioParams {
    /// Carrier frequency in Hz.
    pub carrier_freq_hz: f64,
    /// Carrier wavelength in metres (speed of light over frequency).
    pub wavelength_m: f64,
    /// Per-sector transmit power in watts.
    pub tx_power_w: f64,
    /// Ground-level path-loss exponent.
    pub alpha0: f64,
    /// Relative permittivity of the ground.
    pub eps_r: f64,
}

impl RadioParams {
    pub fn new(carrier_freq_hz: f64, tx_power_dbm: f64, alpha0: f64, eps_r: f64) -> Result<Self> {
        if !carrier_freq_hz.is_finite() || carrier_freq_hz <= 0.0 {
            return Err(Error::param("carrier_freq_hz", "must be finite and > 0"));
        }
        if !tx_power_dbm.is_finite() {
            return Err(Error::param("tx_power_dbm", "must be finite"));
        }
        if !alpha0.is_finite() || alpha0 < 2.0 {
            return Err(Error::param(
                "alpha0",
                "must be at least the free-space exponent 2",
            ));
        }
        if !eps_r.is_finite() || eps_r <= 1.0 {
            return Err(Error::param("eps_r", "must be > 1 for a dielectric ground"));
        }
        Ok(RadioParams {
            carrier_freq_hz,
            wavelength_m: SPEED_OF_LIGHT / carrier_freq_hz,
            tx_power_w: dbm_to_watts(tx_power_dbm),
            alpha0,
            eps_r,
        })
    }
}

impl Default for RadioParams {
    /// 3.5 GHz carrier, 46 dBm per sector, ground exponent 3.5, permittivity 15.
    fn default() -> Self {
        RadioParams::new(3.5e9, 46.0, 3.5, 15.0).expect("default radio parameters are valid")
    }
}

// ── Link geometry ───────────────────────────────────────────────────────────

/// Direct-ray geometry between one sector and one receiver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorGeometry {
    /// Horizontal distance in metres.
    pub d2d: f64,
    /// Receiver height minus sector height, metres.
    pub delta_h: f64,
    /// 3D slant distance in metres.
    pub dist_3d: f64,
    /// Elevation of the receiver seen from the sector, radians; positive up,
    /// exactly ±π/2 for vertical links.
    pub elevation_rad: f64,
}

/// Resolves the direct-ray geometry for a horizontal displacement and the
/// two endpoint heights.
pub fn link_geometry(displacement: Vec2, sector_height: f64, rx_height: f64) -> SectorGeometry {
    debug_assert!(sector_height > 0.0 && rx_height >= 0.0);
    let d2d = displacement.norm();
    let delta_h = rx_height - sector_height;
    SectorGeometry {
        d2d,
        delta_h,
        dist_3d: d2d.hypot(delta_h),
        elevation_rad: delta_h.atan2(d2d),
    }
}

/// Effective path-loss exponent at receiver height `h` for a transmitter at
/// height `h_b`: the ground-level exponent `alpha0` relaxes linearly with
/// altitude and settles at the free-space exponent 2 from twice the
/// transmitter height upward. The linear branch is clamped below at 2 so the
/// profile stays continuous and non-increasing.
pub fn pathloss_exponent(h: f64, h_b: f64, alpha0: f64) -> f64 {
    debug_assert!(h >= 0.0 && h_b > 0.0);
    if h >= 2.0 * h_b {
        2.0
    } else {
        (alpha0 - (h / h_b) * (alpha0 - 2.0)).max(2.0)
    }
}

// ── Ground reflection ───────────────────────────────────────────────────────

/// Image-method geometry of the ground-reflected ray.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionGeometry {
    /// Transmitter-to-intercept path length, metres.
    pub r1: f64,
    /// Intercept-to-receiver path length, metres.
    pub r2: f64,
    /// Grazing angle at the ground intercept, radians; π/2 for vertical links.
    pub grazing_rad: f64,
}

impl ReflectionGeometry {
    /// Total reflected path length r1 + r2.
    pub fn path_len(&self) -> f64 {
        self.r1 + self.r2
    }
}

/// Locates the ground intercept by mirroring the transmitter below ground:
/// the total path is the straight line to the image, and the two legs split
/// in proportion to the endpoint heights (similar triangles at the
/// intercept).
pub fn reflection_geometry(d2d: f64, h_tx: f64, h_rx: f64) -> ReflectionGeometry {
    debug_assert!(h_tx > 0.0 && h_rx > 0.0);
    let h_sum = h_tx + h_rx;
    let total = d2d.hypot(h_sum);
    let r1 = total * (h_tx / h_sum);
    ReflectionGeometry {
        r1,
        r2: total - r1,
        grazing_rad: h_sum.atan2(d2d),
    }
}

/// Magnitude of the Fresnel reflection coefficient for vertical (TM)
/// polarization off a lossless dielectric ground. Tends to 1 at grazing
/// incidence and vanishes at the Brewster angle.
pub fn fresnel_magnitude(grazing_rad: f64, eps_r: f64) -> f64 {
    debug_assert!((0.0..=std::f64::consts::FRAC_PI_2).contains(&grazing_rad));
    debug_assert!(eps_r > 1.0);
    let s = grazing_rad.sin();
    let c = grazing_rad.cos();
    let root = (eps_r - c * c).sqrt();
    ((eps_r * s - root) / (eps_r * s + root)).abs()
}

// ── Received power ──────────────────────────────────────────────────────────

/// Friis-style spherical spreading constant (λ/4π)².
fn friis_factor(params: &RadioParams) -> f64 {
    let x = params.wavelength_m / (4.0 * PI);
    x * x
}

/// Received power in watts from a downtilted sector at horizontal
/// displacement `displacement` (receiver minus sector base), for a receiver
/// at `rx_height`. `phi_dt_deg` is the electrical steering angle (negative =
/// downward). With `ground_reflection` the Fresnel-attenuated reflected ray
/// is power-summed onto the direct ray.
pub fn rx_power_dt(
    displacement: Vec2,
    rx_height: f64,
    phi_dt_deg: f64,
    ground_reflection: bool,
    params: &RadioParams,
    pattern: &ElementPattern,
    array: &ArrayConfig,
) -> Result<f64> {
    let geom = link_geometry(displacement, DT_SECTOR_HEIGHT_M, rx_height);
    if geom.dist_3d == 0.0 {
        return Err(Error::InvalidGeometry(
            "receiver coincides with the downtilted sector antenna".into(),
        ));
    }
    let alpha = pathloss_exponent(rx_height, DT_SECTOR_HEIGHT_M, params.alpha0);
    let phi_rad = phi_dt_deg.to_radians();
    let scale = params.tx_power_w * friis_factor(params);

    let g_dir = composite_gain_db(geom.elevation_rad, phi_rad, pattern, array)?;
    let mut power = scale * db_to_linear(g_dir) / geom.dist_3d.powf(alpha);

    if ground_reflection {
        let refl = reflection_geometry(geom.d2d, DT_SECTOR_HEIGHT_M, rx_height);
        let r_mag = fresnel_magnitude(refl.grazing_rad, params.eps_r);
        // The reflected ray departs the array downward toward the intercept.
        let g_refl = composite_gain_db(-refl.grazing_rad, phi_rad, pattern, array)?;
        power += scale * r_mag * r_mag * db_to_linear(g_refl) / refl.path_len().powf(alpha);
    }
    Ok(power)
}

/// Received power in watts from an uptilted sector steered to `phi_ut_deg`
/// (positive = upward). Direct ray only.
pub fn rx_power_ut(
    displacement: Vec2,
    rx_height: f64,
    phi_ut_deg: f64,
    params: &RadioParams,
    pattern: &ElementPattern,
    array: &ArrayConfig,
) -> Result<f64> {
    let geom = link_geometry(displacement, UT_SECTOR_HEIGHT_M, rx_height);
    if geom.dist_3d == 0.0 {
        return Err(Error::InvalidGeometry(
            "receiver coincides with the uptilted sector antenna".into(),
        ));
    }
    let alpha = pathloss_exponent(rx_height, DT_SECTOR_HEIGHT_M, params.alpha0);
    let g = composite_gain_db(geom.elevation_rad, phi_ut_deg.to_radians(), pattern, array)?;
    Ok(params.tx_power_w * friis_factor(params) * db_to_linear(g) / geom.dist_3d.powf(alpha))
}
