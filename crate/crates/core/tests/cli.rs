use std::path::{Path, PathBuf};
use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_surflink"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        o.status.code().unwrap_or(-1),
        String::from_utf8(o.stdout).unwrap(),
        String::from_utf8(o.stderr).unwrap(),
    )
}

fn ok(args: &[&str]) -> String {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    assert!(err.is_empty(), "{err}");
    out
}

fn value(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .unwrap_or_else(|| panic!("no `{key}` in\n{text}"))
        .parse()
        .unwrap()
}

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

#[test]
fn skin_depth_examples() {
    let out = ok(&["skin-depth", "--freq", "50e6", "--sigma", "3.475"]);
    assert!(out.starts_with("delta_m = 0.0381819\n"), "{out}");
    assert!((value(&out, "delta_m") - 0.0382).abs() < 5e-5);
    let out = ok(&["skin-depth", "--freq", "2.45e9", "--sigma", "3.475"]);
    assert!((value(&out, "delta_m") - 0.00545).abs() < 5e-6);
    let out = ok(&["skin-depth", "--freq", "50e6", "--salinity", "3.5"]);
    assert_eq!(value(&out, "sigma_s_per_m"), 3.475);

    let (code, out, err) = run(&["skin-depth", "--freq", "50e6", "--sigma", "0"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("lossless"), "{err}");
    let (code, ..) = run(&["skin-depth", "--freq", "50e6", "--sigma", "3", "--salinity", "3"]);
    assert_eq!(code, 2);
}

#[test]
fn surface_params_examples() {
    let out = ok(&["surface-params", "--freq", "50e6", "--eps-im", "31.43"]);
    assert!((value(&out, "L_r_m") / 60.0 - 1.0).abs() < 0.005);
    assert!(!out.contains("note:"));

    let out = ok(&["surface-params", "--freq", "50e6", "--eps-im", &std::f64::consts::PI.to_string()]);
    assert_eq!(value(&out, "L_r_m"), value(&out, "lambda0_m"));

    let out = ok(&["surface-params", "--freq", "50e6", "--eps-real", "81", "--sigma", "3.475"]);
    assert_eq!(value(&out, "L_r_m"), 2384.28);
    assert!(out.contains("Surface-wave length discrepancy"));

    let (code, ..) = run(&["surface-params", "--freq", "50e6"]);
    assert_eq!(code, 2);
    let (code, ..) = run(&["surface-params", "--freq", "50e6", "--eps-im", "10", "--level-db", "5"]);
    assert_eq!(code, 2);
}

#[test]
fn json_output_round_trips() {
    let out = ok(&["surface-params", "--freq", "50e6", "--eps-im", "31.43", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let freq = 299_792_458.0 / v["lambda0_m"].as_f64().unwrap();
    let eps_im = v["eps_im"].as_f64().unwrap().to_string();
    let again = ok(&["surface-params", "--freq", &freq.to_string(), "--eps-im", &eps_im, "--json"]);
    assert_eq!(out, again);

    let out = ok(&["simulate", "--prob", "0.3", "--attempts", "500", "--seed", "9", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let again = ok(&[
        "simulate",
        "--prob",
        &v["prob"].to_string(),
        "--attempts",
        &v["attempts"].to_string(),
        "--seed",
        &v["seed"].to_string(),
        "--json",
    ]);
    assert_eq!(out, again);
}

#[test]
fn simulate_examples() {
    assert_eq!(value(&ok(&["simulate", "--prob", "1", "--attempts", "10"]), "successes"), 10.0);
    assert_eq!(value(&ok(&["simulate", "--prob", "0", "--attempts", "10"]), "successes"), 0.0);
    let out = ok(&["simulate", "--prob", "0.5", "--attempts", "1000000", "--seed", "42"]);
    assert!((value(&out, "estimate") - 0.5).abs() <= 0.002);
    assert_eq!(out, ok(&["simulate", "--prob", "0.5", "--attempts", "1000000", "--seed", "42"]));

    let cell = ok(&[
        "simulate",
        "--scenario",
        scenario("diver_link.scn").to_str().unwrap(),
        "--depth",
        "0.1",
        "--range",
        "1",
    ]);
    assert_eq!(value(&cell, "attempts"), 10.0);
    let (code, ..) = run(&["simulate", "--prob", "1.5"]);
    assert_eq!(code, 2);
    let (code, ..) = run(&["simulate", "--scenario", scenario("diver_link.scn").to_str().unwrap()]);
    assert_eq!(code, 2);
}

#[test]
fn antenna_scale_examples() {
    let out = ok(&["antenna-scale", "--f-air", "450e6", "--eps-r", "81"]);
    assert_eq!(value(&out, "f_medium_hz"), 50e6);
    assert_eq!(value(&out, "size_factor"), 9.0);
    let out = ok(&["antenna-scale", "--f-air", "450e6", "--eps-r", "1"]);
    assert_eq!(value(&out, "f_medium_hz"), 450e6);
    let out = ok(&["antenna-scale", "--f-air", "450e6", "--eps-r", "80"]);
    assert_eq!(value(&out, "size_factor"), 8.94427);

    let v: serde_json::Value = serde_json::from_str(&ok(&["antenna-scale", "--reference"])).unwrap();
    assert_eq!(v["f_medium_hz"], 50e6);
    assert_eq!(v["enclosure_advantage_db"]["kind"], "measurement");
}

#[test]
fn single_cell_field_map_is_zero_db() {
    let dir = tempfile::tempdir().unwrap();
    let scn = dir.path().join("one.scn");
    std::fs::write(
        &scn,
        "source_depth_m = -0.5\nrange_min_m = 1\nrange_max_m = 1\nrange_steps = 1\n\
         depth_min_m = -0.2\ndepth_max_m = -0.2\ndepth_steps = 1\n",
    )
    .unwrap();
    let csv = dir.path().join("one.csv");
    ok(&["field-map", "--scenario", scn.to_str().unwrap(), "--out", csv.to_str().unwrap()]);
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), "range_m,depth_m,magnitude_db\n1.0,-0.2,0.0\n");
}

#[test]
fn field_map_marks_failed_points_with_empty_cells() {
    let dir = tempfile::tempdir().unwrap();
    let scn = dir.path().join("hit.scn");
    std::fs::write(
        &scn,
        "source_depth_m = -0.5\nrange_min_m = 0\nrange_max_m = 1\nrange_steps = 2\n\
         depth_min_m = -0.5\ndepth_max_m = -0.2\ndepth_steps = 2\n",
    )
    .unwrap();
    let csv = dir.path().join("hit.csv");
    let out = ok(&["field-map", "--scenario", scn.to_str().unwrap(), "--out", csv.to_str().unwrap()]);
    assert!(out.contains("failed = 1"));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().nth(1), Some("0.0,-0.5,"));
}

#[test]
fn scenario_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let scn = dir.path().join("bad.scn");
    std::fs::write(&scn, "freq_hz = 50e6\nsigma_s_per_m = 3\nsalinity_percent = 3\n").unwrap();
    let csv = dir.path().join("x.csv");
    let (code, _, err) = run(&["link-map", "--scenario", scn.to_str().unwrap(), "--out", csv.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 3"), "{err}");
    let (code, _, err) = run(&["link-map", "--scenario", "/no/such/file.scn", "--out", csv.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("/no/such/file.scn"));
}

#[test]
fn fit_bounds_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    let link = scenario("diver_link.scn");
    ok(&["simulate", "--scenario", link.to_str().unwrap(), "--attempts", "200", "--seed", "3", "--out", csv.to_str().unwrap()]);
    let out = ok(&[
        "fit",
        "--trials",
        csv.to_str().unwrap(),
        "--free",
        "L_r",
        "--bounds",
        "L_r=2:20",
        "--scenario",
        link.to_str().unwrap(),
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let lr = v["fitted"]["L_r"].as_f64().unwrap();
    assert!((2.0..=20.0).contains(&lr));
    assert!((lr / 9.0 - 1.0).abs() < 0.25, "{lr}");

    for bad in [["--bounds", "L_z=1:2"], ["--bounds", "L_r=5"], ["--free", "nonsense"]] {
        let mut args = vec!["fit", "--trials", csv.to_str().unwrap()];
        if bad[0] != "--free" {
            args.extend(["--free", "L_r"]);
        }
        args.extend(bad);
        let (code, ..) = run(&args);
        assert_eq!(code, 2, "{args:?}");
    }
    let header_only = dir.path().join("h.csv");
    std::fs::write(&header_only, "depth_m,range_m,attempts,successes\n").unwrap();
    let (code, ..) = run(&["fit", "--trials", header_only.to_str().unwrap(), "--free", "L_r"]);
    assert_eq!(code, 2);
}

#[test]
fn help_and_version_exit_zero() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("field-map"));
    assert_eq!(run(&["--version"]).0, 0);
    assert_eq!(run(&[]).0, 2);
}
