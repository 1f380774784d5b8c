//! Magnetic field of a small oscillating magnetic dipole held above a thick
//! metal plate, with the dipole moment normal to the surface.
//!
//! At the dipole height the lateral field component is carried entirely by
//! s-polarized low-frequency evanescent waves, which makes it a sharp probe
//! of how the metal responds to that band: the Drude and plasma
//! permittivities predict lateral fields differing by orders of magnitude at
//! hertz-scale dipole frequencies. This crate evaluates those fields by
//! error-controlled quadrature of the underlying Bessel-kernel integrals and
//! ships a CLI for separation/frequency sweeps, parameter reports, and
//! model-discrimination ratios.
//!
//! Gaussian units throughout (cm, rad/s, Oe, erg/Oe); conversions to SI
//! happen only in the reporting layer.

pub mod bessel;
pub mod config;
pub mod dipole;
mod error;
pub mod materials;
mod quad;
pub mod reflected;
pub mod reflection;
pub mod sweep;
pub mod units;

pub use bessel::{bessel_j0, bessel_j1, j1_zero, j1_zeros, BesselZeroTable};
pub use dipole::{
    coil_moment, e_free, h_fourier_free, h_free, h_x_ideal_closed, CoilSpec, DipoleConfig,
    FieldVector,
};
pub use error::{Error, Result};
pub use materials::{
    eps_drude, eps_plasma, k_factor, omega_threshold, MetalParams, ModelKind, ReflectionHook,
    ResponseModel,
};
pub use reflected::{
    h_fourier_above_plate, h_x_propagating_band, h_x_reflected, h_y_reflected, h_z_above_plate,
    h_z_reflected, propagating_suppression_factor, FieldResult, QuadratureConfig,
};
pub use reflection::{r_p, r_s, r_s_scaled, transverse_q, WaveNumbers};
pub use sweep::{
    discrimination_ratio, emit_csv, params_report, parse_csv, re_magnitude_ratio, run_sweep,
    DiscriminationRatio, ParamsReport, ResultRow, SweepOutcome, SweepSpec, SweepVariable,
};
pub use units::{convert_current, convert_field, CurrentUnit, FieldUnit, PhysicalConstants};
