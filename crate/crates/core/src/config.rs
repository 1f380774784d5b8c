//! JSON scenario configuration for the CLI. A config file is one document
//! with optional sections {metal, coil | m0, geometry, sweep, quadrature,
//! output}; anything missing falls back to the copper / 10 mm reference
//! scenario, so the figure presets reproduce with zero flags.

use serde::Deserialize;

use crate::dipole::{coil_moment, CoilSpec, DipoleConfig};
use crate::error::{Error, Result};
use crate::materials::{MetalParams, ModelKind, ResponseModel};
use crate::reflected::QuadratureConfig;
use crate::sweep::{linspace, logspace, SweepSpec, SweepVariable};
use crate::units::FieldUnit;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub metal: Option<MetalSection>,
    pub coil: Option<CoilSection>,
    /// Magnetic moment, erg/Oe. Takes precedence over `coil`.
    pub m0: Option<f64>,
    pub geometry: Option<GeometrySection>,
    pub sweep: Option<SweepSection>,
    pub quadrature: Option<QuadratureConfig>,
    pub output: Option<OutputSection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetalSection {
    pub omega_p: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoilSection {
    pub turns: u32,
    pub current_statampere: f64,
    pub radius_cm: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySection {
    pub h_cm: Option<f64>,
    pub x_cm: Option<f64>,
    pub omega_rad_s: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default)]
    pub log: bool,
    pub models: Vec<ModelKind>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub unit: Option<FieldUnit>,
    pub format: Option<OutputFormat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum OutputFormat {
    #[serde(rename = "csv")]
    Csv,
    #[serde(rename = "json")]
    Json,
}

/// Fully resolved scenario: file config plus defaults, before CLI flag
/// overrides.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub metal: MetalParams,
    pub coil: CoilSpec,
    pub m0: f64,
    pub h: f64,
    pub x: f64,
    pub omega: f64,
    pub quadrature: QuadratureConfig,
    pub unit: FieldUnit,
    pub format: OutputFormat,
    pub sweep: Option<SweepSection>,
}

impl Default for Scenario {
    fn default() -> Self {
        let coil = CoilSpec {
            turns: 10,
            current: 3e9,
            radius: 0.1,
        };
        Scenario {
            metal: MetalParams::copper(),
            coil,
            m0: coil_moment(&coil),
            h: 1.0,
            x: 1.0,
            omega: 100.0,
            quadrature: QuadratureConfig::default(),
            unit: FieldUnit::Oersted,
            format: OutputFormat::Csv,
            sweep: None,
        }
    }
}

impl Scenario {
    pub fn from_file(cfg: FileConfig) -> Result<Self> {
        let mut s = Scenario::default();
        if let Some(m) = cfg.metal {
            s.metal = MetalParams::new(m.omega_p, m.gamma).map_err(as_config)?;
        }
        if let Some(c) = cfg.coil {
            s.coil =
                CoilSpec::new(c.turns, c.current_statampere, c.radius_cm).map_err(as_config)?;
            s.m0 = coil_moment(&s.coil);
        }
        if let Some(m0) = cfg.m0 {
            crate::error::ensure_positive(m0, "m0").map_err(as_config)?;
            s.m0 = m0;
        }
        if let Some(g) = cfg.geometry {
            if let Some(h) = g.h_cm {
                s.h = h;
            }
            if let Some(x) = g.x_cm {
                s.x = x;
            }
            if let Some(om) = g.omega_rad_s {
                s.omega = om;
            }
        }
        if let Some(q) = cfg.quadrature {
            q.validate()?;
            s.quadrature = q;
        }
        if let Some(o) = cfg.output {
            if let Some(u) = o.unit {
                s.unit = u;
            }
            if let Some(f) = o.format {
                s.format = f;
            }
        }
        s.sweep = cfg.sweep;
        // surface invalid geometry as a config error now, not at first use
        s.dipole()?;
        Ok(s)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let cfg: FileConfig = serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_file(cfg)
    }

    pub fn dipole(&self) -> Result<DipoleConfig> {
        DipoleConfig::new(self.m0, self.h, self.omega).map_err(as_config)
    }

    pub fn model(&self, kind: ModelKind) -> Result<ResponseModel> {
        Ok(match kind {
            ModelKind::Drude => ResponseModel::Drude(self.metal),
            ModelKind::Plasma => ResponseModel::Plasma(self.metal),
            ModelKind::IdealMetal => ResponseModel::IdealMetal,
            ModelKind::Custom => {
                return Err(Error::Config(
                    "custom reflection models are only constructible through the library API"
                        .into(),
                ))
            }
        })
    }

    /// Build the sweep spec from the config's sweep section.
    pub fn sweep_spec(&self) -> Result<Option<SweepSpec>> {
        let Some(sw) = &self.sweep else {
            return Ok(None);
        };
        if sw.points == 0 {
            return Err(Error::Config("sweep needs at least one point".into()));
        }
        let grid = if sw.log {
            crate::error::ensure_positive(sw.start, "log grid start").map_err(as_config)?;
            logspace(sw.start, sw.stop, sw.points)
        } else {
            linspace(sw.start, sw.stop, sw.points)
        };
        let models = sw
            .models
            .iter()
            .map(|&k| self.model(k))
            .collect::<Result<Vec<_>>>()?;
        Ok(Some(SweepSpec {
            variable: sw.variable,
            grid,
            dipole: self.dipole()?,
            x: self.x,
            models,
            output_unit: self.unit,
        }))
    }
}

fn as_config(e: Error) -> Error {
    Error::Config(e.to_string())
}
