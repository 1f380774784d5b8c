//! End-to-end checks of the command-line interface: output formats,
//! determinism, and exit codes.

use std::io::Write;
use std::process::{Command, Output};

use dipole_plate::{
    h_x_reflected, parse_csv, DipoleConfig, MetalParams, ModelKind, QuadratureConfig, ResponseModel,
};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dipole-plate"))
}

fn run(args: &[&str]) -> Output {
    bin()
        .args(args)
        .output()
        .expect("failed to spawn dipole-plate")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn field_emits_one_csv_row_matching_the_library() {
    let out = run(&["field", "--model", "drude", "--x", "1.0"]);
    assert!(out.status.success(), "{out:?}");
    let rows = parse_csv(&stdout_of(&out)).unwrap();
    assert_eq!(rows.len(), 1);
    let row = &rows[0];
    assert_eq!(row.model, ModelKind::Drude);
    assert_eq!(row.omega_rad_s, 100.0);

    // default scenario: copper, coil-derived moment, h = 1 cm
    let coil_m0 = dipole_plate::coil_moment(&dipole_plate::CoilSpec::new(10, 3e9, 0.1).unwrap());
    let d = DipoleConfig::new(coil_m0, 1.0, 100.0).unwrap();
    let f = h_x_reflected(
        1.0,
        0.0,
        &d,
        &ResponseModel::Drude(MetalParams::copper()),
        &QuadratureConfig::default(),
    )
    .unwrap();
    assert_eq!(row.re_hx, f.value.re);
    assert_eq!(row.im_hx, f.value.im);
}

#[test]
fn unit_flag_converts_output() {
    let oe = parse_csv(&stdout_of(&run(&["field", "--x", "1.0"]))).unwrap();
    let moe = parse_csv(&stdout_of(&run(&["field", "--x", "1.0", "--unit", "mOe"]))).unwrap();
    assert_eq!(moe[0].unit.to_string(), "mOe");
    assert!((moe[0].re_hx - 1e3 * oe[0].re_hx).abs() <= 1e-12 * moe[0].re_hx.abs());
}

#[test]
fn json_flag_emits_parseable_rows() {
    let out = run(&["field", "--x", "1.0", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["model"], "drude");
    assert_eq!(rows[0]["unit"], "Oe");
    assert!(rows[0]["re_hx"].as_f64().unwrap() < 0.0);
}

#[test]
fn figure2_is_deterministic_and_orders_models() {
    let a = run(&["figure2", "--panel", "a"]);
    let b = run(&["figure2", "--panel", "a"]);
    assert!(a.status.success());
    assert_eq!(
        a.stdout, b.stdout,
        "two identical runs must emit identical bytes"
    );

    let rows = parse_csv(&stdout_of(&a)).unwrap();
    assert_eq!(rows.len(), 4 * 61);
    let plasma_max = rows
        .iter()
        .filter(|r| r.model == ModelKind::Plasma)
        .map(|r| r.abs_re_hx)
        .fold(0.0f64, f64::max);
    let drude_max = rows
        .iter()
        .filter(|r| r.model == ModelKind::Drude)
        .map(|r| r.abs_re_hx)
        .fold(0.0f64, f64::max);
    assert!(plasma_max > drude_max);
}

#[test]
fn sweep_frequency_grid_is_log_spaced() {
    let out = run(&["sweep", "--model", "drude", "--freq", "1:100:5"]);
    assert!(out.status.success());
    let rows = parse_csv(&stdout_of(&out)).unwrap();
    assert_eq!(rows.len(), 5);
    let ratio01 = rows[1].omega_rad_s / rows[0].omega_rad_s;
    let ratio12 = rows[2].omega_rad_s / rows[1].omega_rad_s;
    assert!((ratio01 - ratio12).abs() < 1e-9);
}

#[test]
fn params_reports_the_crossover_frequency() {
    let out = run(&["params"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("Omega"));
    assert!(text.contains("m0"));

    let json = run(&["params", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&json)).unwrap();
    let omega_cross = v["omega_cross_rad_s"].as_f64().unwrap();
    assert!((omega_cross - 98.87).abs() < 0.5);
}

#[test]
fn ratio_matches_the_headline_numbers() {
    let out = run(&["ratio", "--omega", "10"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let ratio: f64 = text
        .split("ratio at")
        .nth(1)
        .and_then(|s| s.split(':').nth(1))
        .and_then(|s| s.split_whitespace().next())
        .unwrap()
        .parse()
        .unwrap();
    assert!((ratio - 283.0).abs() < 15.0, "{ratio}");
}

#[test]
fn out_flag_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rows.csv");
    let out = run(&["field", "--x", "1.0", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let rows = parse_csv(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(rows.len(), 1);
}

#[test]
fn config_file_drives_the_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scenario.json");
    let mut f = std::fs::File::create(&path).unwrap();
    write!(
        f,
        r#"{{
            "m0": 3.14e-2,
            "geometry": {{"h_cm": 1.0, "omega_rad_s": 10.0}},
            "sweep": {{"variable": "separation_x", "start": 1.0, "stop": 2.0,
                       "points": 3, "models": ["drude"]}},
            "output": {{"unit": "mOe"}}
        }}"#
    )
    .unwrap();
    drop(f);

    let out = run(&["--config", path.to_str().unwrap(), "sweep"]);
    assert!(out.status.success(), "{out:?}");
    let rows = parse_csv(&stdout_of(&out)).unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows
        .iter()
        .all(|r| r.omega_rad_s == 10.0 && r.unit.to_string() == "mOe"));
}

#[test]
fn invalid_config_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"metla": {"omega_p": 1.0}}"#).unwrap();
    let out = run(&["--config", path.to_str().unwrap(), "field", "--x", "1.0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!String::from_utf8(out.stderr).unwrap().is_empty());
}

#[test]
fn unknown_model_exits_with_2() {
    let out = run(&["field", "--x", "1.0", "--model", "superconductor"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_flag_exits_with_2() {
    let out = run(&["field", "--nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn non_convergence_exits_with_3_but_emits_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tight.json");
    std::fs::write(&path, r#"{"quadrature": {"max_segments": 16}}"#).unwrap();
    // x = 5 h needs ~30 zero-aligned panels
    let out = run(&[
        "--config",
        path.to_str().unwrap(),
        "sweep",
        "--model",
        "ideal",
        "--x",
        "5.0",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let rows = parse_csv(&stdout_of(&out)).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].segments, 16);
}
