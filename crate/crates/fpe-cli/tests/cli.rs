//! End-to-end tests of the `fpe` binary: exit codes, output layout,
//! determinism of reruns, and exact snapshot round-trips.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use fpe_cli::config::ExperimentConfig;
use fpe_cli::output::read_snapshot;
use fpe_core::evolution::run;

fn fpe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fpe"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).expect("config written");
    path.to_string_lossy().into_owned()
}

#[test]
fn minimal_simulate_writes_the_full_output_layout() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("run");
    let config = format!(
        r#"{{"alpha":1.5,"nu_h":0.1,"nx":64,"nz":129,"kind":"simulate","t_end":1.0,
            "output":"{}"}}"#,
        out.display()
    );
    let path = write_config(tmp.path(), "sim.json", &config);
    let result = fpe(&["simulate", &path]);
    assert!(result.status.success(), "stderr: {}", String::from_utf8_lossy(&result.stderr));

    let series = fs::read_to_string(out.join("series.csv")).unwrap();
    assert!(
        series.starts_with("t,E0,E1,E2,Et1,Et2,Et3,omega_inf,w_inf,u_inf,bkm_integrand,Y0,Y1,Y2\n"),
        "unexpected header: {}",
        series.lines().next().unwrap_or("")
    );
    let echo = fs::read_to_string(out.join("config.json")).unwrap();
    assert!(echo.contains("\"dealias\": true"), "defaults echoed: {echo}");
    assert!(echo.contains("\"seed\": 0"));
    let payload = fs::read(out.join("final.bin")).unwrap();
    assert_eq!(payload.len(), 64 * 129 * 8);
    let run_info = fs::read_to_string(out.join("run.json")).unwrap();
    assert!(run_info.contains("completed"));
    assert!(out.join("probes.csv").exists());
}

#[test]
fn reruns_are_byte_identical_and_snapshots_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let dirs = [tmp.path().join("a"), tmp.path().join("b")];
    let mut outputs = Vec::new();
    for dir in &dirs {
        let config = format!(
            r#"{{"alpha":1.0,"nu_h":0.05,"nx":32,"nz":65,"kind":"simulate","t_end":0.2,
                "seed":7,"initial":{{"type":"random-trig","kx_max":4,"mz_max":3,"amp":0.01}},
                "output":"{}"}}"#,
            dir.display()
        );
        let path = write_config(tmp.path(), "rand.json", &config);
        let result = fpe(&["simulate", &path]);
        assert!(result.status.success(), "stderr: {}", String::from_utf8_lossy(&result.stderr));
        outputs.push((
            fs::read(dir.join("series.csv")).unwrap(),
            fs::read(dir.join("final.bin")).unwrap(),
            fs::read(dir.join("probes.csv")).unwrap(),
        ));
    }
    assert_eq!(outputs[0].0, outputs[1].0, "series.csv must be byte-identical across reruns");
    assert_eq!(outputs[0].1, outputs[1].1, "final.bin must be byte-identical across reruns");
    assert_eq!(outputs[0].2, outputs[1].2, "probes.csv must be byte-identical across reruns");

    // The stored snapshot equals an in-process rerun of the same config,
    // bit for bit.
    let (stored, sidecar) = read_snapshot(&dirs[0], "final").unwrap();
    assert_eq!(sidecar.seed, 7);
    assert_eq!(sidecar.rng, "ChaCha8");
    let config = ExperimentConfig::load(Path::new(&write_config(
        tmp.path(),
        "rand_a.json",
        &format!(
            r#"{{"alpha":1.0,"nu_h":0.05,"nx":32,"nz":65,"kind":"simulate","t_end":0.2,
                "seed":7,"initial":{{"type":"random-trig","kx_max":4,"mz_max":3,"amp":0.01}},
                "output":"{}"}}"#,
            dirs[0].display()
        ),
    )))
    .unwrap();
    let traj = run(&config.to_run_config().unwrap()).unwrap();
    assert_eq!(stored.values, traj.final_state.values, "snapshot equals in-process state");
}

#[test]
fn validation_failures_exit_with_code_2() {
    let tmp = tempfile::tempdir().unwrap();

    // Out-of-range alpha, named in the message.
    let path = write_config(
        tmp.path(),
        "bad_alpha.json",
        r#"{"alpha":2.5,"nu_h":0.1,"nx":64,"nz":129,"kind":"simulate","t_end":1.0}"#,
    );
    let result = fpe(&["simulate", &path]);
    assert_eq!(result.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&result.stderr).contains("alpha"));

    // Unknown key.
    let path = write_config(
        tmp.path(),
        "unknown.json",
        r#"{"alpha":1.5,"nu_h":0.1,"nx":64,"nz":129,"kind":"simulate","t_end":1.0,"vorticity":1}"#,
    );
    let result = fpe(&["simulate", &path]);
    assert_eq!(result.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&result.stderr).contains("vorticity"));

    // Missing kind.
    let path = write_config(
        tmp.path(),
        "no_kind.json",
        r#"{"alpha":1.5,"nu_h":0.1,"nx":64,"nz":129,"t_end":1.0}"#,
    );
    let result = fpe(&["simulate", &path]);
    assert_eq!(result.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&result.stderr).contains("kind"));

    // Config written for a different subcommand.
    let path = write_config(
        tmp.path(),
        "wrong_kind.json",
        r#"{"alpha":1.5,"nu_h":0.1,"nx":64,"nz":129,"kind":"linear-evolve","t_end":1.0}"#,
    );
    let result = fpe(&["simulate", &path]);
    assert_eq!(result.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&result.stderr).contains("linear-evolve"));
}

#[test]
fn blowup_completion_exits_with_code_3_and_keeps_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("boom");
    // A fixed step far above the vertical CFL limit destabilizes the
    // advection within a few steps; the run must flag it, not crash.
    let config = format!(
        r#"{{"alpha":1.0,"nu_h":0.01,"nx":32,"nz":129,"kind":"simulate","t_end":1.0,
            "dt":0.05,"initial":{{"type":"mode","kx":1,"mz":1,"amp":2.0}},
            "output":"{}"}}"#,
        out.display()
    );
    let path = write_config(tmp.path(), "boom.json", &config);
    let result = fpe(&["simulate", &path]);
    assert_eq!(result.status.code(), Some(3), "stderr: {}", String::from_utf8_lossy(&result.stderr));
    let run_info = fs::read_to_string(out.join("run.json")).unwrap();
    assert!(run_info.contains("blowup"), "run.json: {run_info}");
    assert!(out.join("series.csv").exists());
    assert!(out.join("final.bin").exists());
}

#[test]
fn linear_evolve_records_stream_function_probes() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("lin");
    let config = format!(
        r#"{{"alpha":0.5,"nu_h":0.05,"nx":32,"nz":257,"kind":"linear-evolve","t_end":0.1,
            "energy_levels":0,"initial":{{"type":"eigenmode","n":1,"amp":1.0}},
            "output":"{}"}}"#,
        out.display()
    );
    let path = write_config(tmp.path(), "lin.json", &config);
    let result = fpe(&["linear-evolve", &path]);
    assert!(result.status.success(), "stderr: {}", String::from_utf8_lossy(&result.stderr));
    let psi = fs::read_to_string(out.join("psi_probes.csv")).unwrap();
    assert!(psi.starts_with("t,psi0,psi1"), "psi probe header: {}", psi.lines().next().unwrap());
    let run_info = fs::read_to_string(out.join("run.json")).unwrap();
    assert!(run_info.contains("gamma"), "gamma recorded: {run_info}");
}

#[test]
fn criticality_scan_writes_cells_thresholds_and_subdirectories() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("scan");
    let config = format!(
        r#"{{"alpha":1.0,"nu_h":0.1,"nx":16,"nz":129,"kind":"criticality-scan","t_end":2.0,
            "lambdas":[0.08,0.10,0.12,0.15],"nus":[0.1],"fit_window":[0.5,2.0],
            "output":"{}"}}"#,
        out.display()
    );
    let path = write_config(tmp.path(), "scan.json", &config);
    let result = fpe(&["criticality-scan", &path]);
    assert!(result.status.success(), "stderr: {}", String::from_utf8_lossy(&result.stderr));

    let cells = fs::read_to_string(out.join("cells.csv")).unwrap();
    assert_eq!(cells.lines().count(), 5, "header + 4 cells: {cells}");
    assert!(cells.starts_with("lambda,nu,rate,predicted_rate,nonlinear_rate\n"));
    let thresholds = fs::read_to_string(out.join("thresholds.csv")).unwrap();
    let row = thresholds.lines().nth(1).expect("one threshold row");
    let lambda_star: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
    assert!((0.10..0.13).contains(&lambda_star), "threshold near 0.115: {lambda_star}");
    assert!(out.join("cell_nu00_lam00/cell.json").exists());
    assert!(out.join("cell_nu00_lam03/cell.json").exists());
}

#[test]
fn dispersion_and_eigenmode_report_the_root() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("disp");
    let result = fpe(&[
        "dispersion", "--shear", "tanh", "--L", "20", "--nz", "513",
        "--output", out.to_str().unwrap(),
    ]);
    assert!(result.status.success());
    let stdout = String::from_utf8_lossy(&result.stdout);
    assert!(stdout.contains("gamma = 0.86688"), "stdout: {stdout}");
    assert!(out.join("dispersion.json").exists());
    assert!(out.join("config.json").exists());

    let out2 = tmp.path().join("eig");
    let result = fpe(&[
        "eigenmode", "--n", "4", "--alpha", "0.5", "--nu", "0.05", "--nz", "513",
        "--output", out2.to_str().unwrap(),
    ]);
    assert!(result.status.success());
    let stdout = String::from_utf8_lossy(&result.stdout);
    assert!(stdout.contains("beta_4"), "stdout: {stdout}");
    let chi = fs::read_to_string(out2.join("chi.csv")).unwrap();
    assert!(chi.starts_with("z,chi_re,chi_im,chi_zz_re,chi_zz_im\n"));
    assert_eq!(chi.lines().count(), 514, "header + nz rows");

    // An unsupported shear family is a validation error.
    let result = fpe(&["dispersion", "--shear", "cosine"]);
    assert_eq!(result.status.code(), Some(2));
}

#[test]
fn verify_inequalities_writes_both_ensembles_at_two_resolutions() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("ineq");
    let result = fpe(&[
        "verify-inequalities", "--seeds", "12", "--s", "0.5", "--nx", "32",
        "--degree", "8", "--output", out.to_str().unwrap(),
    ]);
    assert!(result.status.success(), "stderr: {}", String::from_utf8_lossy(&result.stderr));
    for name in ["leibniz_nx32.csv", "leibniz_nx64.csv", "borderline_nx32.csv", "borderline_nx64.csv"] {
        let table = fs::read_to_string(out.join(name)).unwrap();
        assert_eq!(table.lines().count(), 13, "{name}: header + 12 seeds");
        assert!(table.starts_with("seed,s,nx,degree,ratio\n"));
    }
    assert!(out.join("summary.json").exists());

    // s outside (0, 1) is rejected up front.
    let result = fpe(&["verify-inequalities", "--seeds", "4", "--s", "1.5"]);
    assert_eq!(result.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&result.stderr).contains("s"));
}
