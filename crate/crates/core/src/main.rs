use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dipole_plate::config::{OutputFormat, Scenario};
use dipole_plate::sweep::{self, FigurePanel, SweepSpec};
use dipole_plate::{
    discrimination_ratio, emit_csv, h_x_reflected, params_report, Error, ModelKind, ResultRow,
    SweepVariable,
};

/// Lateral magnetic field of an oscillating magnetic dipole above a thick
/// metal plate: the evanescent-band probe of the metal's low-frequency
/// response.
#[derive(Parser)]
#[command(name = "dipole-plate", version, disable_help_subcommand = true)]
struct Cli {
    /// JSON scenario config; command-line flags override file values
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Write output to this file instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Emit JSON instead of CSV/text
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lateral field H_x at a single point at the dipole height
    Field {
        /// Response model: drude | plasma | ideal
        #[arg(long)]
        model: Option<String>,
        /// Dipole frequency, rad/s
        #[arg(long)]
        omega: Option<f64>,
        /// Dipole height above the plate, cm
        #[arg(long)]
        h: Option<f64>,
        /// Separation along x, cm
        #[arg(long)]
        x: Option<f64>,
        /// Separation along y, cm
        #[arg(long, default_value_t = 0.0)]
        y: f64,
        /// Output unit: Oe | mOe | T | A_per_m
        #[arg(long)]
        unit: Option<String>,
        /// Relative quadrature tolerance
        #[arg(long)]
        tol: Option<f64>,
    },

    /// Sweep H_x over separation or frequency for one or more models
    Sweep {
        /// Comma-separated models: drude,plasma,ideal
        #[arg(long)]
        model: Option<String>,
        /// Separation grid CM[:CM:N] (linear)
        #[arg(long, value_name = "CM[:CM:N]")]
        x: Option<String>,
        /// Frequency grid RAD_S[:RAD_S:N] (log-spaced)
        #[arg(long, value_name = "RAD_S[:RAD_S:N]", conflicts_with = "x")]
        freq: Option<String>,
        /// Fixed frequency for separation sweeps, rad/s
        #[arg(long)]
        omega: Option<f64>,
        #[arg(long)]
        h: Option<f64>,
        #[arg(long)]
        unit: Option<String>,
        #[arg(long)]
        tol: Option<f64>,
    },

    /// Preset: |Re H_x| sweeps, Drude at 2/10/100 rad/s against plasma
    Figure2 {
        /// a = separation sweep, b = frequency sweep
        #[arg(long, default_value = "a")]
        panel: String,
        #[arg(long)]
        h: Option<f64>,
        #[arg(long)]
        unit: Option<String>,
        #[arg(long)]
        tol: Option<f64>,
    },

    /// Preset: Im H_x sweeps for the Drude model
    Figure3 {
        /// a = separation sweep, b = frequency sweep
        #[arg(long, default_value = "a")]
        panel: String,
        #[arg(long)]
        h: Option<f64>,
        #[arg(long)]
        unit: Option<String>,
        #[arg(long)]
        tol: Option<f64>,
    },

    /// Coil moment, scaling factors, and regime flags for the scenario
    Params {
        #[arg(long)]
        h: Option<f64>,
        /// Comma-separated frequencies, rad/s
        #[arg(long)]
        omega: Option<String>,
    },

    /// Plasma-over-Drude |Re H_x| discrimination ratio at one point
    Ratio {
        #[arg(long)]
        x: Option<f64>,
        #[arg(long)]
        omega: Option<f64>,
        #[arg(long)]
        h: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let Cli {
        config,
        out,
        json,
        command,
    } = cli;
    let mut scenario = match &config {
        Some(path) => Scenario::load(path)?,
        None => Scenario::default(),
    };
    if json {
        scenario.format = OutputFormat::Json;
    }

    match command {
        Command::Field {
            model,
            omega,
            h,
            x,
            y,
            unit,
            tol,
        } => {
            apply_overrides(&mut scenario, omega, h, unit, tol)?;
            let kind = parse_model_kind(model.as_deref().unwrap_or("drude"))?;
            let x = x.unwrap_or(scenario.x);
            let dipole = scenario.dipole()?;
            warn_near_zone(&dipole);
            let model = scenario.model(kind)?;
            let (field, failed) = match h_x_reflected(x, y, &dipole, &model, &scenario.quadrature) {
                Ok(f) => (f, false),
                Err(Error::NonConvergence { partial }) => (partial, true),
                Err(e) => return Err(e),
            };
            let row = row_from(&field, &scenario, dipole.omega, x);
            emit_rows(out.as_deref(), &scenario, &[row])?;
            Ok(exit_for(failed as usize))
        }

        Command::Sweep {
            model,
            x,
            freq,
            omega,
            h,
            unit,
            tol,
        } => {
            apply_overrides(&mut scenario, omega, h, unit, tol)?;
            let spec = build_sweep_spec(&scenario, model, x, freq)?;
            warn_near_zone(&spec.dipole);
            let result = sweep::run_sweep(&spec, &scenario.quadrature)?;
            emit_rows(out.as_deref(), &scenario, &result.rows)?;
            Ok(exit_for(result.non_converged))
        }

        Command::Figure2 {
            panel,
            h,
            unit,
            tol,
        } => {
            apply_overrides(&mut scenario, None, h, unit, tol)?;
            let result = sweep::figure2(
                parse_panel(&panel)?,
                &scenario.metal,
                &scenario.dipole()?,
                scenario.unit,
                &scenario.quadrature,
            )?;
            emit_rows(out.as_deref(), &scenario, &result.rows)?;
            Ok(exit_for(result.non_converged))
        }

        Command::Figure3 {
            panel,
            h,
            unit,
            tol,
        } => {
            apply_overrides(&mut scenario, None, h, unit, tol)?;
            let result = sweep::figure3(
                parse_panel(&panel)?,
                &scenario.metal,
                &scenario.dipole()?,
                scenario.unit,
                &scenario.quadrature,
            )?;
            emit_rows(out.as_deref(), &scenario, &result.rows)?;
            Ok(exit_for(result.non_converged))
        }

        Command::Params { h, omega } => {
            if let Some(h) = h {
                scenario.h = h;
            }
            let omegas = match omega {
                Some(list) => parse_f64_list(&list)?,
                None => vec![2.0, 10.0, 100.0],
            };
            let report = params_report(&scenario.metal, &scenario.coil, scenario.h, &omegas)?;
            let text = if scenario.format == OutputFormat::Json {
                serde_json::to_string_pretty(&report)? + "\n"
            } else {
                report.to_string()
            };
            write_output(out.as_deref(), &text)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Ratio { x, omega, h, tol } => {
            apply_overrides(&mut scenario, omega, h, None, tol)?;
            let x = x.unwrap_or(scenario.x);
            let dipole = scenario.dipole()?;
            warn_near_zone(&dipole);
            let r = discrimination_ratio(
                x,
                dipole.omega,
                &dipole,
                &scenario.metal,
                &scenario.quadrature,
            )?;
            let text = if scenario.format == OutputFormat::Json {
                serde_json::to_string_pretty(&serde_json::json!({
                    "x_cm": x,
                    "omega_rad_s": dipole.omega,
                    "ratio": r.ratio,
                    "plasma_re_hx_oe": r.numerator.value.re,
                    "drude_re_hx_oe": r.denominator.value.re,
                    "drude_im_hx_oe": r.denominator.value.im,
                }))? + "\n"
            } else {
                format!(
                    "plasma/drude |Re Hx| ratio at x = {} cm, omega = {} rad/s: {:.6}\n\
                     (plasma Re Hx = {:.6e} Oe, drude Re Hx = {:.6e} Oe)\n",
                    x, dipole.omega, r.ratio, r.numerator.value.re, r.denominator.value.re,
                )
            };
            write_output(out.as_deref(), &text)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn apply_overrides(
    scenario: &mut Scenario,
    omega: Option<f64>,
    h: Option<f64>,
    unit: Option<String>,
    tol: Option<f64>,
) -> Result<(), Error> {
    if let Some(om) = omega {
        scenario.omega = om;
    }
    if let Some(h) = h {
        scenario.h = h;
    }
    if let Some(u) = unit {
        scenario.unit = u.parse()?;
    }
    if let Some(t) = tol {
        scenario.quadrature.rel_tol = t;
        scenario.quadrature.validate()?;
    }
    Ok(())
}

fn parse_model_kind(s: &str) -> Result<ModelKind, Error> {
    s.parse()
}

fn parse_panel(s: &str) -> Result<FigurePanel, Error> {
    match s {
        "a" => Ok(FigurePanel::Separation),
        "b" => Ok(FigurePanel::Frequency),
        other => Err(Error::Config(format!(
            "panel must be 'a' or 'b', got {other:?}"
        ))),
    }
}

fn parse_f64_list(s: &str) -> Result<Vec<f64>, Error> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|e| Error::Config(format!("bad number {tok:?}: {e}")))
        })
        .collect()
}

// START[:STOP:N] -> grid; a bare number is a one-point grid
fn parse_grid(s: &str, log: bool) -> Result<Vec<f64>, Error> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |tok: &str| {
        tok.parse::<f64>()
            .map_err(|e| Error::Config(format!("bad grid value {tok:?}: {e}")))
    };
    match parts.as_slice() {
        [single] => Ok(vec![num(single)?]),
        [start, stop, n] => {
            let n: usize = n
                .parse()
                .map_err(|e| Error::Config(format!("bad grid count {n:?}: {e}")))?;
            if n == 0 {
                return Err(Error::Config("grid needs at least one point".into()));
            }
            let (a, b) = (num(start)?, num(stop)?);
            Ok(if log {
                sweep::logspace(a, b, n)
            } else {
                sweep::linspace(a, b, n)
            })
        }
        _ => Err(Error::Config(format!(
            "grid must be VALUE or START:STOP:N, got {s:?}"
        ))),
    }
}

fn build_sweep_spec(
    scenario: &Scenario,
    model: Option<String>,
    x: Option<String>,
    freq: Option<String>,
) -> Result<SweepSpec, Error> {
    // CLI grid flags win; otherwise fall back to the config's sweep section
    let (variable, grid) = if let Some(xs) = x {
        (SweepVariable::SeparationX, parse_grid(&xs, false)?)
    } else if let Some(fs) = freq {
        (SweepVariable::Frequency, parse_grid(&fs, true)?)
    } else if let Some(spec) = scenario.sweep_spec()? {
        let models = match model {
            Some(list) => parse_models(scenario, &list)?,
            None => spec.models.clone(),
        };
        return Ok(SweepSpec { models, ..spec });
    } else {
        return Err(Error::Config(
            "sweep needs --x or --freq (or a sweep section in the config file)".into(),
        ));
    };

    let models = match model {
        Some(list) => parse_models(scenario, &list)?,
        None => vec![
            scenario.model(ModelKind::Drude)?,
            scenario.model(ModelKind::Plasma)?,
        ],
    };
    Ok(SweepSpec {
        variable,
        grid,
        dipole: scenario.dipole()?,
        x: scenario.x,
        models,
        output_unit: scenario.unit,
    })
}

fn parse_models(
    scenario: &Scenario,
    list: &str,
) -> Result<Vec<dipole_plate::ResponseModel>, Error> {
    list.split(',')
        .map(|tok| scenario.model(tok.trim().parse()?))
        .collect()
}

fn row_from(
    field: &dipole_plate::FieldResult,
    scenario: &Scenario,
    omega: f64,
    x: f64,
) -> ResultRow {
    let unit = scenario.unit;
    let conv = |v: f64| dipole_plate::convert_field(v, unit);
    ResultRow {
        model: field.model,
        omega_rad_s: omega,
        x_cm: x,
        h_cm: scenario.h,
        re_hx: conv(field.value.re),
        im_hx: conv(field.value.im),
        abs_re_hx: conv(field.value.re.abs()),
        unit,
        est_error: conv(field.est_error),
        segments: field.segments_used,
    }
}

fn warn_near_zone(dipole: &dipole_plate::DipoleConfig) {
    if let Some(k0h) = dipole.near_zone_violation() {
        eprintln!(
            "warning: k0 h = {k0h:.3e} exceeds 1e-3; the evanescent-band treatment assumes k0 h << 1"
        );
    }
}

fn emit_rows(
    out: Option<&std::path::Path>,
    scenario: &Scenario,
    rows: &[ResultRow],
) -> Result<(), Error> {
    let text = if scenario.format == OutputFormat::Json {
        serde_json::to_string_pretty(rows)? + "\n"
    } else {
        emit_csv(rows)
    };
    write_output(out, &text)
}

fn write_output(out: Option<&std::path::Path>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => {
            let mut f = std::fs::File::create(path)?;
            f.write_all(text.as_bytes())?;
        }
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

fn exit_for(non_converged: usize) -> ExitCode {
    if non_converged > 0 {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    }
}
