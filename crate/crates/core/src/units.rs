//! Gaussian unit system, physical constants, and the handful of SI
//! conversions the reporting layer needs.
//!
//! Every formula in this crate consumes Gaussian quantities (cm, s, Oe, statA,
//! erg/Oe). SI shows up only at I/O boundaries.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Speed of light in cm/s (exact).
pub const SPEED_OF_LIGHT_CM_S: f64 = 2.99792458e10;

/// 1 Oe = 1e-4 T.
pub const OERSTED_TO_TESLA: f64 = 1e-4;

/// 1 Oe = 79.5775 A/m.
pub const OERSTED_TO_AMPERE_PER_METER: f64 = 79.5775;

/// 1 statA = 1/(2.99792458e9) A.
pub const STATAMPERE_TO_AMPERE: f64 = 1.0 / 2.99792458e9;

/// Bundle of the constants above, for callers that prefer a record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Speed of light, cm/s.
    pub c: f64,
    pub oersted_to_tesla: f64,
    pub oersted_to_ampere_per_meter: f64,
    pub statampere_to_ampere: f64,
}

impl PhysicalConstants {
    pub const fn gaussian() -> Self {
        Self {
            c: SPEED_OF_LIGHT_CM_S,
            oersted_to_tesla: OERSTED_TO_TESLA,
            oersted_to_ampere_per_meter: OERSTED_TO_AMPERE_PER_METER,
            statampere_to_ampere: STATAMPERE_TO_AMPERE,
        }
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::gaussian()
    }
}

/// Output unit for magnetic field amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldUnit {
    #[serde(rename = "Oe")]
    Oersted,
    #[serde(rename = "mOe")]
    MilliOersted,
    #[serde(rename = "T")]
    Tesla,
    #[serde(rename = "A/m")]
    AmperePerMeter,
}

impl FieldUnit {
    /// Multiplier taking a value in Oe to this unit.
    pub fn factor_from_oersted(self) -> f64 {
        match self {
            FieldUnit::Oersted => 1.0,
            FieldUnit::MilliOersted => 1e3,
            FieldUnit::Tesla => OERSTED_TO_TESLA,
            FieldUnit::AmperePerMeter => OERSTED_TO_AMPERE_PER_METER,
        }
    }
}

impl fmt::Display for FieldUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FieldUnit::Oersted => "Oe",
            FieldUnit::MilliOersted => "mOe",
            FieldUnit::Tesla => "T",
            FieldUnit::AmperePerMeter => "A/m",
        };
        f.write_str(s)
    }
}

impl FromStr for FieldUnit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "Oe" | "oe" => Ok(FieldUnit::Oersted),
            "mOe" | "moe" => Ok(FieldUnit::MilliOersted),
            "T" | "t" => Ok(FieldUnit::Tesla),
            "A/m" | "A_per_m" | "a_per_m" => Ok(FieldUnit::AmperePerMeter),
            other => Err(Error::UnknownUnit(other.to_string())),
        }
    }
}

/// Convert a field amplitude given in Oe to `target`.
pub fn convert_field(value_oe: f64, target: FieldUnit) -> f64 {
    value_oe * target.factor_from_oersted()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurrentUnit {
    Statampere,
    Ampere,
}

/// Convert an electric current between statA and A.
pub fn convert_current(value: f64, from: CurrentUnit, to: CurrentUnit) -> f64 {
    match (from, to) {
        (CurrentUnit::Statampere, CurrentUnit::Ampere) => value * STATAMPERE_TO_AMPERE,
        (CurrentUnit::Ampere, CurrentUnit::Statampere) => value / STATAMPERE_TO_AMPERE,
        _ => value,
    }
}
