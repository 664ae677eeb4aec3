//! Scenario configuration: one JSON document describes one experiment.
//!
//! Every field has a default, so the empty document `{}` is a complete
//! scenario. Unknown keys are rejected rather than ignored, and every
//! validation error names the offending key.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, Context, Result};
use serde::{Deserialize, Serialize};
use uptilt_core::antenna::{ArrayConfig, ElementPattern};
use uptilt_core::optimize::TiltBounds;
use uptilt_core::propagation::RadioParams;

/// Radio-chain parameters shared by every link in a scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RadioConfig {
    /// Carrier frequency in Hz.
    pub carrier_freq_hz: f64,
    /// Per-sector transmit power in dBm.
    pub tx_power_dbm: f64,
    /// Ground-level path-loss exponent; decays toward 2 with receiver height.
    pub alpha0: f64,
    /// Relative permittivity of the ground for the reflected ray.
    pub eps_r: f64,
}

impl Default for RadioConfig {
    fn default() -> Self {
        Self {
            carrier_freq_hz: 3.5e9,
            tx_power_dbm: 46.0,
            alpha0: 3.5,
            eps_r: 15.0,
        }
    }
}

/// A complete experiment description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Scenario {
    /// Inter-site distance in meters.
    pub isd: f64,
    /// Altitude of the aerial receiver grid in meters.
    pub uav_height: f64,
    /// Height of ground users in meters.
    pub gue_height: f64,
    /// Receiver grid spacing in meters.
    pub grid_spacing: f64,
    /// Downtilt angle of the ground-serving sectors in degrees (negative =
    /// below the horizon).
    pub phi_dt: f64,
    /// Vertical array elements per sector.
    pub n_elements: usize,
    /// Radio-chain parameters.
    pub radio: RadioConfig,
    /// Allowed uptilt range in degrees, `[min, max]`.
    pub tilt_bounds: [f64; 2],
    /// Fraction of time slots granted to the downtilted sectors.
    pub beta: f64,
    /// Master seed for every randomized scheme.
    pub seed: u64,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            isd: 500.0,
            uav_height: 200.0,
            gue_height: 1.5,
            grid_spacing: 10.0,
            phi_dt: -6.0,
            n_elements: 8,
            radio: RadioConfig::default(),
            tilt_bounds: [5.0, 89.0],
            beta: 0.5,
            seed: 0,
        }
    }
}

impl Scenario {
    /// Checks every field, naming the offending key on failure.
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("isd", self.isd),
            ("uav_height", self.uav_height),
            ("gue_height", self.gue_height),
            ("grid_spacing", self.grid_spacing),
        ];
        for (key, value) in positive {
            if !value.is_finite() || value <= 0.0 {
                return Err(anyhow!("{key}: must be positive and finite (got {value})"));
            }
        }
        if !self.phi_dt.is_finite() || self.phi_dt.abs() >= 90.0 {
            return Err(anyhow!(
                "phi_dt: must lie strictly inside (-90, 90) degrees (got {})",
                self.phi_dt
            ));
        }
        if self.n_elements == 0 {
            return Err(anyhow!("n_elements: must be at least 1"));
        }
        if !(self.radio.carrier_freq_hz.is_finite() && self.radio.carrier_freq_hz > 0.0) {
            return Err(anyhow!(
                "radio.carrier_freq_hz: must be positive (got {})",
                self.radio.carrier_freq_hz
            ));
        }
        if !self.radio.tx_power_dbm.is_finite() {
            return Err(anyhow!(
                "radio.tx_power_dbm: must be finite (got {})",
                self.radio.tx_power_dbm
            ));
        }
        if !(self.radio.alpha0.is_finite() && self.radio.alpha0 >= 2.0) {
            return Err(anyhow!(
                "radio.alpha0: must be at least 2 (got {})",
                self.radio.alpha0
            ));
        }
        if !(self.radio.eps_r.is_finite() && self.radio.eps_r > 1.0) {
            return Err(anyhow!(
                "radio.eps_r: must exceed 1 (got {})",
                self.radio.eps_r
            ));
        }
        TiltBounds::new(self.tilt_bounds[0], self.tilt_bounds[1])
            .map_err(|e| anyhow!("tilt_bounds: {e}"))?;
        if !(self.beta.is_finite() && (0.0..=1.0).contains(&self.beta)) {
            return Err(anyhow!("beta: must lie in [0, 1] (got {})", self.beta));
        }
        Ok(())
    }

    /// The validated radio parameters for this scenario.
    pub fn radio_params(&self) -> Result<RadioParams> {
        RadioParams::new(
            self.radio.carrier_freq_hz,
            self.radio.tx_power_dbm,
            self.radio.alpha0,
            self.radio.eps_r,
        )
        .map_err(|e| anyhow!("radio: {e}"))
    }

    /// The element pattern used by every sector.
    pub fn element_pattern(&self) -> ElementPattern {
        ElementPattern::default()
    }

    /// The vertical array layout used by every sector.
    pub fn array_config(&self) -> ArrayConfig {
        ArrayConfig {
            n_elements: self.n_elements,
        }
    }

    /// The allowed uptilt interval.
    pub fn bounds(&self) -> Result<TiltBounds> {
        TiltBounds::new(self.tilt_bounds[0], self.tilt_bounds[1])
            .map_err(|e| anyhow!("tilt_bounds: {e}"))
    }
}

/// Loads and validates a scenario from a JSON file.
pub fn load_config(path: &Path) -> Result<Scenario> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    let scenario: Scenario = serde_json::from_str(&text)
        .with_context(|| format!("parsing config {}", path.display()))?;
    scenario.validate()?;
    Ok(scenario)
}
