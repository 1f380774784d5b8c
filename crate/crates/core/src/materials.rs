//! Dielectric response models of the plate metal and the derived scaling
//! quantities: the response strength K(omega), the geometric frequency
//! omega_h = c/h, and the crossover frequency Omega below which the Drude
//! reflection of evanescent waves collapses.
//!
//! Time convention is e^{-i omega t} throughout, so lossy media carry
//! Im eps > 0. Anything with Im eps < 0 is refused as unphysical.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{ensure_non_negative, ensure_positive, Error, Result};
use crate::units::SPEED_OF_LIGHT_CM_S;

/// Drude parameters of the plate metal, rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetalParams {
    /// Plasma frequency, rad/s.
    pub omega_p: f64,
    /// Relaxation parameter, rad/s.
    pub gamma: f64,
}

impl MetalParams {
    pub fn new(omega_p: f64, gamma: f64) -> Result<Self> {
        ensure_positive(omega_p, "plasma frequency")?;
        ensure_non_negative(gamma, "relaxation parameter")?;
        Ok(Self { omega_p, gamma })
    }

    /// Copper: omega_p = 1.12e16 rad/s, gamma = 1.38e13 rad/s.
    pub const fn copper() -> Self {
        Self {
            omega_p: 1.12e16,
            gamma: 1.38e13,
        }
    }
}

/// Hook type for user-supplied reflection coefficients:
/// `(omega rad/s, k_t 1/cm) -> R_s`.
pub type ReflectionHook = Arc<dyn Fn(f64, f64) -> Complex64 + Send + Sync>;

/// Which dielectric/reflection model responds at the plate surface.
///
/// `IdealMetal` is defined by R_s = -1 for every (omega, k_t).
/// `CustomReflection` bypasses the permittivity entirely; the hook is
/// responsible for its own physics (this is the extension point for
/// nonlocal response models).
#[derive(Clone)]
pub enum ResponseModel {
    Drude(MetalParams),
    Plasma(MetalParams),
    IdealMetal,
    CustomReflection(ReflectionHook),
}

impl ResponseModel {
    pub fn kind(&self) -> ModelKind {
        match self {
            ResponseModel::Drude(_) => ModelKind::Drude,
            ResponseModel::Plasma(_) => ModelKind::Plasma,
            ResponseModel::IdealMetal => ModelKind::IdealMetal,
            ResponseModel::CustomReflection(_) => ModelKind::Custom,
        }
    }
}

impl fmt::Debug for ResponseModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResponseModel::Drude(m) => f.debug_tuple("Drude").field(m).finish(),
            ResponseModel::Plasma(m) => f.debug_tuple("Plasma").field(m).finish(),
            ResponseModel::IdealMetal => f.write_str("IdealMetal"),
            ResponseModel::CustomReflection(_) => f.write_str("CustomReflection(..)"),
        }
    }
}

/// Plain tag naming a response model, used in result rows and CSV.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum ModelKind {
    #[serde(rename = "drude")]
    Drude,
    #[serde(rename = "plasma")]
    Plasma,
    #[serde(rename = "ideal")]
    IdealMetal,
    #[serde(rename = "custom")]
    Custom,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ModelKind::Drude => "drude",
            ModelKind::Plasma => "plasma",
            ModelKind::IdealMetal => "ideal",
            ModelKind::Custom => "custom",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "drude" => Ok(ModelKind::Drude),
            "plasma" => Ok(ModelKind::Plasma),
            "ideal" | "ideal_metal" => Ok(ModelKind::IdealMetal),
            "custom" => Ok(ModelKind::Custom),
            other => Err(Error::UnknownModel(other.to_string())),
        }
    }
}

fn check_omega(omega: f64) -> Result<()> {
    ensure_positive(
        omega,
        "frequency (omega = 0 is singular under e^(-i omega t))",
    )
}

/// Drude permittivity eps(omega) = 1 - omega_p^2 / (omega (omega + i gamma)).
pub fn eps_drude(omega: f64, metal: &MetalParams) -> Result<Complex64> {
    check_omega(omega)?;
    let denom = Complex64::new(omega, 0.0) * Complex64::new(omega, metal.gamma);
    Ok(Complex64::new(1.0, 0.0) - metal.omega_p.powi(2) / denom)
}

/// Plasma permittivity eps(omega) = 1 - omega_p^2 / omega^2 (real, negative
/// below omega_p).
pub fn eps_plasma(omega: f64, metal: &MetalParams) -> Result<f64> {
    check_omega(omega)?;
    Ok(1.0 - (metal.omega_p / omega).powi(2))
}

/// Response strength K(omega) = (eps - 1) omega^2 / omega_h^2 with
/// omega_h = c/h. |K| >> 1 means near-ideal reflection of evanescent waves,
/// |K| << 1 means the plate barely reflects them.
pub fn k_factor(omega: f64, h: f64, eps: Complex64) -> Result<Complex64> {
    check_omega(omega)?;
    ensure_positive(h, "height")?;
    let omega_h = SPEED_OF_LIGHT_CM_S / h;
    Ok((eps - 1.0) * (omega / omega_h).powi(2))
}

/// Crossover frequency Omega = gamma omega_h^2 / omega_p^2. For a Drude
/// metal, dipole frequencies at or below Omega give |K| <~ 1 and hence a
/// collapsed reflection of the evanescent band.
pub fn omega_threshold(metal: &MetalParams, h: f64) -> Result<f64> {
    ensure_positive(h, "height")?;
    let omega_h = SPEED_OF_LIGHT_CM_S / h;
    Ok(metal.gamma * omega_h.powi(2) / metal.omega_p.powi(2))
}
