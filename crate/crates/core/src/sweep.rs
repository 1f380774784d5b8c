//! Sweeps, parameter reports, and the discrimination ratio: the operations
//! behind the CLI subcommands, plus CSV/JSON row emission.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dipole::{coil_moment, CoilSpec, DipoleConfig};
use crate::error::{Error, Result};
use crate::materials::{eps_drude, eps_plasma, k_factor, MetalParams, ModelKind, ResponseModel};
use crate::reflected::{
    h_x_reflected, propagating_suppression_factor, FieldResult, QuadratureConfig,
};
use crate::units::{convert_field, FieldUnit, SPEED_OF_LIGHT_CM_S};

/// Which scenario parameter a sweep walks over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepVariable {
    #[serde(rename = "separation_x")]
    SeparationX,
    #[serde(rename = "frequency")]
    Frequency,
}

/// One sweep: a grid over the chosen variable, evaluated for each model at
/// otherwise fixed scenario parameters.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    /// Grid values: cm for separation sweeps, rad/s for frequency sweeps.
    pub grid: Vec<f64>,
    /// Fixed dipole parameters (omega is ignored by frequency sweeps).
    pub dipole: DipoleConfig,
    /// Fixed separation, used by frequency sweeps.
    pub x: f64,
    pub models: Vec<ResponseModel>,
    pub output_unit: FieldUnit,
}

impl SweepSpec {
    fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::Config("sweep grid must not be empty".into()));
        }
        if self.grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config(
                "sweep grid must be strictly increasing".into(),
            ));
        }
        if self.models.is_empty() {
            return Err(Error::Config("sweep needs at least one model".into()));
        }
        if self.variable == SweepVariable::Frequency && self.grid[0] <= 0.0 {
            return Err(Error::Config("frequencies must be positive".into()));
        }
        Ok(())
    }
}

/// One evaluated grid point, in the requested output unit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub model: ModelKind,
    pub omega_rad_s: f64,
    pub x_cm: f64,
    pub h_cm: f64,
    pub re_hx: f64,
    pub im_hx: f64,
    pub abs_re_hx: f64,
    pub unit: FieldUnit,
    pub est_error: f64,
    pub segments: usize,
}

impl ResultRow {
    fn from_field(field: &FieldResult, omega: f64, x: f64, h: f64, unit: FieldUnit) -> Self {
        ResultRow {
            model: field.model,
            omega_rad_s: omega,
            x_cm: x,
            h_cm: h,
            re_hx: convert_field(field.value.re, unit),
            im_hx: convert_field(field.value.im, unit),
            abs_re_hx: convert_field(field.value.re.abs(), unit),
            unit,
            est_error: convert_field(field.est_error, unit),
            segments: field.segments_used,
        }
    }
}

/// Rows of a finished sweep plus how many grid points failed to converge
/// (their partial values are still present as rows).
#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub rows: Vec<ResultRow>,
    pub non_converged: usize,
}

/// Evaluate the sweep. Output ordering is (model, grid value) regardless of
/// how the evaluations are scheduled, so results are reproducible
/// byte-for-byte.
pub fn run_sweep(spec: &SweepSpec, cfg: &QuadratureConfig) -> Result<SweepOutcome> {
    spec.validate()?;
    cfg.validate()?;
    let mut rows = Vec::with_capacity(spec.models.len() * spec.grid.len());
    let mut non_converged = 0;

    for model in &spec.models {
        for &g in &spec.grid {
            let (dipole, x) = match spec.variable {
                SweepVariable::SeparationX => (spec.dipole, g),
                SweepVariable::Frequency => {
                    (DipoleConfig::new(spec.dipole.m0, spec.dipole.h, g)?, spec.x)
                }
            };
            let field = match h_x_reflected(x, 0.0, &dipole, model, cfg) {
                Ok(f) => f,
                Err(Error::NonConvergence { partial }) => {
                    non_converged += 1;
                    partial
                }
                Err(other) => return Err(other),
            };
            rows.push(ResultRow::from_field(
                &field,
                dipole.omega,
                x,
                dipole.h,
                spec.output_unit,
            ));
        }
    }
    Ok(SweepOutcome {
        rows,
        non_converged,
    })
}

/// Exact CSV header, in emission order.
pub const CSV_HEADER: &str =
    "model,omega_rad_s,x_cm,h_cm,re_Hx,im_Hx,abs_re_Hx,unit,est_error,segments";

fn fmt_f64(v: f64) -> String {
    // 17 significant digits round-trip f64 exactly
    format!("{v:.16e}")
}

/// Render rows as CSV (header + one line per row).
pub fn emit_csv(rows: &[ResultRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.model,
            fmt_f64(r.omega_rad_s),
            fmt_f64(r.x_cm),
            fmt_f64(r.h_cm),
            fmt_f64(r.re_hx),
            fmt_f64(r.im_hx),
            fmt_f64(r.abs_re_hx),
            r.unit,
            fmt_f64(r.est_error),
            r.segments,
        ));
    }
    out
}

/// Parse CSV produced by [`emit_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<ResultRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        other => return Err(Error::Csv(format!("bad header: {other:?}"))),
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 10 {
            return Err(Error::Csv(format!(
                "line {}: expected 10 fields, got {}",
                i + 2,
                f.len()
            )));
        }
        let num = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|e| Error::Csv(format!("line {}: {e}", i + 2)))
        };
        rows.push(ResultRow {
            model: f[0].parse()?,
            omega_rad_s: num(f[1])?,
            x_cm: num(f[2])?,
            h_cm: num(f[3])?,
            re_hx: num(f[4])?,
            im_hx: num(f[5])?,
            abs_re_hx: num(f[6])?,
            unit: f[7].parse()?,
            est_error: num(f[8])?,
            segments: f[9]
                .parse()
                .map_err(|e| Error::Csv(format!("line {}: {e}", i + 2)))?,
        });
    }
    Ok(rows)
}

/// Scenario diagnostics at one frequency.
#[derive(Debug, Clone, Serialize)]
pub struct OmegaDiagnostics {
    pub omega_rad_s: f64,
    pub k_drude_re: f64,
    pub k_drude_im: f64,
    pub k_drude_abs: f64,
    pub k0_h: f64,
    /// 1/(k0 h)^3: how strongly the propagating band is suppressed.
    pub propagating_suppression: f64,
    /// k0 r with r ~ h: the electric field is weaker than the magnetic one
    /// by this factor.
    pub electric_suppression: f64,
}

/// Coil, scaling, and regime report for a scenario.
#[derive(Debug, Clone, Serialize)]
pub struct ParamsReport {
    pub m0_erg_per_oe: f64,
    pub omega_h_rad_s: f64,
    /// Crossover frequency Omega = gamma omega_h^2 / omega_p^2.
    pub omega_cross_rad_s: f64,
    /// gamma = 0 collapses Drude onto plasma at every frequency.
    pub plasma_like_at_all_frequencies: bool,
    pub k_plasma: f64,
    pub per_omega: Vec<OmegaDiagnostics>,
}

impl fmt::Display for ParamsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "m0          = {:.6e} erg/Oe", self.m0_erg_per_oe)?;
        writeln!(f, "omega_h     = {:.6e} rad/s", self.omega_h_rad_s)?;
        if self.plasma_like_at_all_frequencies {
            writeln!(
                f,
                "Omega       = 0 (gamma = 0: plasma-like at all frequencies)"
            )?;
        } else {
            writeln!(f, "Omega       = {:.6e} rad/s", self.omega_cross_rad_s)?;
        }
        writeln!(f, "K_plasma    = {:.6e}", self.k_plasma)?;
        for d in &self.per_omega {
            writeln!(
                f,
                "omega = {:>10.4e} rad/s: K_drude = {:.4e}{:+.4e}i (|K| = {:.4e}), k0 h = {:.3e}, \
                 propagating suppression = {:.3e}, E/H ~ {:.3e}",
                d.omega_rad_s,
                d.k_drude_re,
                d.k_drude_im,
                d.k_drude_abs,
                d.k0_h,
                d.propagating_suppression,
                d.electric_suppression,
            )?;
        }
        Ok(())
    }
}

/// Assemble the parameter report for a metal/coil/height scenario.
pub fn params_report(
    metal: &MetalParams,
    coil: &CoilSpec,
    h: f64,
    omegas: &[f64],
) -> Result<ParamsReport> {
    crate::error::ensure_positive(h, "height")?;
    let omega_h = SPEED_OF_LIGHT_CM_S / h;
    let omega_cross = crate::materials::omega_threshold(metal, h)?;
    let mut per_omega = Vec::with_capacity(omegas.len());
    for &omega in omegas {
        let k_d = k_factor(omega, h, eps_drude(omega, metal)?)?;
        let k0_h = omega * h / SPEED_OF_LIGHT_CM_S;
        per_omega.push(OmegaDiagnostics {
            omega_rad_s: omega,
            k_drude_re: k_d.re,
            k_drude_im: k_d.im,
            k_drude_abs: k_d.norm(),
            k0_h,
            propagating_suppression: propagating_suppression_factor(omega, h),
            electric_suppression: k0_h,
        });
    }
    // plasma K is frequency independent; evaluate at any positive omega
    let k_plasma = k_factor(1.0, h, eps_plasma(1.0, metal)?.into())?.re;
    Ok(ParamsReport {
        m0_erg_per_oe: coil_moment(coil),
        omega_h_rad_s: omega_h,
        omega_cross_rad_s: omega_cross,
        plasma_like_at_all_frequencies: metal.gamma == 0.0,
        k_plasma,
        per_omega,
    })
}

/// |Re H_x| ratio between two response models at one point, with the two
/// field evaluations kept as diagnostics.
#[derive(Debug, Clone)]
pub struct DiscriminationRatio {
    pub ratio: f64,
    pub numerator: FieldResult,
    pub denominator: FieldResult,
}

/// Ratio of |Re H_x| between two arbitrary models at separation x.
pub fn re_magnitude_ratio(
    x: f64,
    omega: f64,
    dipole: &DipoleConfig,
    numerator: &ResponseModel,
    denominator: &ResponseModel,
    cfg: &QuadratureConfig,
) -> Result<DiscriminationRatio> {
    let d = DipoleConfig::new(dipole.m0, dipole.h, omega)?;
    let num = h_x_reflected(x, 0.0, &d, numerator, cfg)?;
    let den = h_x_reflected(x, 0.0, &d, denominator, cfg)?;
    // absolute floor in field units
    let floor = cfg.abs_tol_floor * d.m0 / d.h.powi(3);
    let ratio = if den.value.re.abs() <= floor {
        f64::INFINITY
    } else {
        num.value.re.abs() / den.value.re.abs()
    };
    Ok(DiscriminationRatio {
        ratio,
        numerator: num,
        denominator: den,
    })
}

/// Plasma-over-Drude |Re H_x| ratio at separation x: the headline number
/// telling the two response models apart experimentally.
pub fn discrimination_ratio(
    x: f64,
    omega: f64,
    dipole: &DipoleConfig,
    metal: &MetalParams,
    cfg: &QuadratureConfig,
) -> Result<DiscriminationRatio> {
    re_magnitude_ratio(
        x,
        omega,
        dipole,
        &ResponseModel::Plasma(*metal),
        &ResponseModel::Drude(*metal),
        cfg,
    )
}

/// Linearly spaced grid, inclusive of both endpoints.
pub fn linspace(start: f64, stop: f64, points: usize) -> Vec<f64> {
    if points <= 1 {
        return vec![start];
    }
    let step = (stop - start) / (points - 1) as f64;
    (0..points).map(|i| start + i as f64 * step).collect()
}

/// Logarithmically spaced grid, inclusive of both endpoints.
pub fn logspace(start: f64, stop: f64, points: usize) -> Vec<f64> {
    if points <= 1 {
        return vec![start];
    }
    let (a, b) = (start.ln(), stop.ln());
    let step = (b - a) / (points - 1) as f64;
    (0..points).map(|i| (a + i as f64 * step).exp()).collect()
}

/// Figure panels reproduced by the presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigurePanel {
    Separation,
    Frequency,
}

/// Magnitude-of-Re sweep preset: Drude at 2, 10, 100 rad/s plus the plasma
/// model. Panel a walks separation over 10-25 mm; panel b walks frequency
/// over 1-100 rad/s at 10 and 20 mm separation.
pub fn figure2(
    panel: FigurePanel,
    metal: &MetalParams,
    dipole: &DipoleConfig,
    unit: FieldUnit,
    cfg: &QuadratureConfig,
) -> Result<SweepOutcome> {
    preset_sweep(panel, metal, dipole, unit, cfg, true)
}

/// Im-part sweep preset: same grids as [`figure2`], Drude model only (the
/// plasma model has identically zero Im H_x).
pub fn figure3(
    panel: FigurePanel,
    metal: &MetalParams,
    dipole: &DipoleConfig,
    unit: FieldUnit,
    cfg: &QuadratureConfig,
) -> Result<SweepOutcome> {
    preset_sweep(panel, metal, dipole, unit, cfg, false)
}

fn preset_sweep(
    panel: FigurePanel,
    metal: &MetalParams,
    dipole: &DipoleConfig,
    unit: FieldUnit,
    cfg: &QuadratureConfig,
    include_plasma: bool,
) -> Result<SweepOutcome> {
    let drude = ResponseModel::Drude(*metal);
    let plasma = ResponseModel::Plasma(*metal);
    let mut rows = Vec::new();
    let mut non_converged = 0;

    match panel {
        FigurePanel::Separation => {
            let grid = linspace(1.0, 2.5, 61);
            let mut model_runs: Vec<(ResponseModel, f64)> =
                vec![(drude.clone(), 2.0), (drude.clone(), 10.0), (drude, 100.0)];
            if include_plasma {
                model_runs.push((plasma, 100.0));
            }
            for (model, omega) in model_runs {
                let spec = SweepSpec {
                    variable: SweepVariable::SeparationX,
                    grid: grid.clone(),
                    dipole: DipoleConfig::new(dipole.m0, dipole.h, omega)?,
                    x: dipole.h,
                    models: vec![model],
                    output_unit: unit,
                };
                let out = run_sweep(&spec, cfg)?;
                rows.extend(out.rows);
                non_converged += out.non_converged;
            }
        }
        FigurePanel::Frequency => {
            let grid = logspace(1.0, 100.0, 41);
            let mut models = vec![drude];
            if include_plasma {
                models.push(plasma);
            }
            for model in models {
                for &x in &[1.0, 2.0] {
                    let spec = SweepSpec {
                        variable: SweepVariable::Frequency,
                        grid: grid.clone(),
                        dipole: *dipole,
                        x,
                        models: vec![model.clone()],
                        output_unit: unit,
                    };
                    let out = run_sweep(&spec, cfg)?;
                    rows.extend(out.rows);
                    non_converged += out.non_converged;
                }
            }
        }
    }
    Ok(SweepOutcome {
        rows,
        non_converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn scenario() -> (DipoleConfig, MetalParams, QuadratureConfig) {
        (
            DipoleConfig::new(3.14e-2, 1.0, 100.0).unwrap(),
            MetalParams::copper(),
            QuadratureConfig::default(),
        )
    }

    #[test]
    fn single_point_sweep_equals_direct_call() {
        let (d, cu, cfg) = scenario();
        let spec = SweepSpec {
            variable: SweepVariable::SeparationX,
            grid: vec![1.0],
            dipole: d,
            x: 1.0,
            models: vec![ResponseModel::Drude(cu)],
            output_unit: FieldUnit::Oersted,
        };
        let out = run_sweep(&spec, &cfg).unwrap();
        assert_eq!(out.rows.len(), 1);
        let direct = h_x_reflected(1.0, 0.0, &d, &ResponseModel::Drude(cu), &cfg).unwrap();
        assert_eq!(out.rows[0].re_hx, direct.value.re);
        assert_eq!(out.rows[0].im_hx, direct.value.im);
        assert_eq!(out.rows[0].segments, direct.segments_used);
    }

    #[test]
    fn sweep_spec_validation() {
        let (d, cu, cfg) = scenario();
        let mut spec = SweepSpec {
            variable: SweepVariable::SeparationX,
            grid: vec![],
            dipole: d,
            x: 1.0,
            models: vec![ResponseModel::Drude(cu)],
            output_unit: FieldUnit::Oersted,
        };
        assert!(run_sweep(&spec, &cfg).is_err());
        spec.grid = vec![1.0, 1.0];
        assert!(run_sweep(&spec, &cfg).is_err());
        spec.grid = vec![2.0, 1.0];
        assert!(run_sweep(&spec, &cfg).is_err());
    }

    #[test]
    fn figure2_separation_panel_keeps_plasma_on_top() {
        let (d, cu, cfg) = scenario();
        let out = figure2(FigurePanel::Separation, &cu, &d, FieldUnit::Oersted, &cfg).unwrap();
        assert_eq!(out.rows.len(), 4 * 61);
        assert_eq!(out.non_converged, 0);

        let plasma_rows: Vec<&ResultRow> = out
            .rows
            .iter()
            .filter(|r| r.model == ModelKind::Plasma)
            .collect();
        assert_eq!(plasma_rows.len(), 61);
        for p in &plasma_rows {
            for r in out
                .rows
                .iter()
                .filter(|r| r.model == ModelKind::Drude && r.x_cm == p.x_cm)
            {
                assert!(p.abs_re_hx > r.abs_re_hx, "x = {}", p.x_cm);
            }
        }
    }

    #[test]
    fn figure3_im_curves_order_with_frequency() {
        let (d, cu, cfg) = scenario();
        let out = figure3(FigurePanel::Separation, &cu, &d, FieldUnit::Oersted, &cfg).unwrap();
        // Drude only
        assert!(out.rows.iter().all(|r| r.model == ModelKind::Drude));
        // at every separation the Im curves stack bottom-to-top as 2, 10, 100
        let at = |omega: f64, x: f64| {
            out.rows
                .iter()
                .find(|r| r.omega_rad_s == omega && (r.x_cm - x).abs() < 1e-12)
                .unwrap()
                .im_hx
        };
        for &x in &[1.0, 1.75, 2.5] {
            assert!(at(2.0, x) < at(10.0, x));
            assert!(at(10.0, x) < at(100.0, x));
        }
    }

    #[test]
    fn csv_round_trip() {
        let (d, cu, cfg) = scenario();
        let spec = SweepSpec {
            variable: SweepVariable::Frequency,
            grid: logspace(1.0, 100.0, 7),
            dipole: d,
            x: 1.3,
            models: vec![
                ResponseModel::Drude(cu),
                ResponseModel::Plasma(cu),
                ResponseModel::IdealMetal,
            ],
            output_unit: FieldUnit::MilliOersted,
        };
        let out = run_sweep(&spec, &cfg).unwrap();
        let text = emit_csv(&out.rows);
        assert!(text.starts_with(CSV_HEADER));
        let parsed = parse_csv(&text).unwrap();
        assert_eq!(parsed, out.rows);
    }

    #[test]
    fn csv_rejects_garbage() {
        assert!(parse_csv("nope\n1,2,3\n").is_err());
        let bad = format!("{CSV_HEADER}\nfoo,1,1,1,1,1,1,Oe,1,1\n");
        assert!(parse_csv(&bad).is_err());
        let short = format!("{CSV_HEADER}\ndrude,1,1\n");
        assert!(parse_csv(&short).is_err());
    }

    #[test]
    fn sweep_is_deterministic() {
        let (d, cu, cfg) = scenario();
        let spec = SweepSpec {
            variable: SweepVariable::SeparationX,
            grid: linspace(1.0, 2.0, 5),
            dipole: d,
            x: 1.0,
            models: vec![ResponseModel::Drude(cu), ResponseModel::Plasma(cu)],
            output_unit: FieldUnit::Oersted,
        };
        let a = emit_csv(&run_sweep(&spec, &cfg).unwrap().rows);
        let b = emit_csv(&run_sweep(&spec, &cfg).unwrap().rows);
        assert_eq!(a, b);
    }

    #[test]
    fn params_report_reference_scenario() {
        let coil = CoilSpec::new(10, 3e9, 0.1).unwrap();
        let cu = MetalParams::copper();
        let rep = params_report(&cu, &coil, 1.0, &[2.0, 10.0, 100.0]).unwrap();
        assert_relative_eq!(rep.m0_erg_per_oe, 3.14e-2, max_relative = 2e-3);
        assert_relative_eq!(rep.omega_cross_rad_s, 100.0, max_relative = 2e-2);
        assert!(!rep.plasma_like_at_all_frequencies);
        assert_relative_eq!(rep.k_plasma, -1.394e11, max_relative = 3e-3);

        // electric field suppression ~ 1e-9 for the 100 rad/s entry
        let d100 = &rep.per_omega[2];
        assert!(d100.electric_suppression > 1e-9 && d100.electric_suppression < 1e-8);
        assert_relative_eq!(d100.k_drude_abs, 1.0, max_relative = 2e-2);

        let text = rep.to_string();
        assert!(text.contains("m0"));
        assert!(text.contains("Omega"));
    }

    #[test]
    fn params_report_flags_lossless_metal() {
        let coil = CoilSpec::new(10, 3e9, 0.1).unwrap();
        let lossless = MetalParams::new(1.12e16, 0.0).unwrap();
        let rep = params_report(&lossless, &coil, 1.0, &[100.0]).unwrap();
        assert_eq!(rep.omega_cross_rad_s, 0.0);
        assert!(rep.plasma_like_at_all_frequencies);
        assert!(rep.to_string().contains("plasma-like at all frequencies"));
    }

    #[test]
    fn identical_models_give_unit_ratio() {
        let (d, _, cfg) = scenario();
        let r = re_magnitude_ratio(
            1.0,
            100.0,
            &d,
            &ResponseModel::IdealMetal,
            &ResponseModel::IdealMetal,
            &cfg,
        )
        .unwrap();
        assert_eq!(r.ratio, 1.0);
    }

    #[test]
    fn vanishing_denominator_reports_infinity() {
        let (d, _, cfg) = scenario();
        let zero_hook: crate::materials::ReflectionHook =
            std::sync::Arc::new(|_, _| num_complex::Complex64::new(0.0, 0.0));
        let r = re_magnitude_ratio(
            1.0,
            100.0,
            &d,
            &ResponseModel::IdealMetal,
            &ResponseModel::CustomReflection(zero_hook),
            &cfg,
        )
        .unwrap();
        assert!(r.ratio.is_infinite());
    }

    #[test]
    fn grids() {
        assert_eq!(linspace(1.0, 2.0, 3), vec![1.0, 1.5, 2.0]);
        assert_eq!(linspace(1.0, 2.0, 1), vec![1.0]);
        let lg = logspace(1.0, 100.0, 3);
        assert_relative_eq!(lg[1], 10.0, max_relative = 1e-12);
        assert_relative_eq!(lg[2], 100.0, max_relative = 1e-12);
    }
}
