//! `fpe` — command-line driver for the pseudo-spectral primitive-equation
//! laboratory: dispersion roots, eigenpairs, configured evolution runs,
//! criticality scans, and the inequality ensembles, all written to
//! reproducible CSV/JSON/raw-float64 files.
//!
//! Exit codes: 0 on success, 2 on configuration or parameter errors, 3 when
//! a run completes flagged as a blow-up (outputs are still written).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fpe_cli::config::{ExperimentConfig, ExperimentKind};
use fpe_cli::{output, validation, CliError, Result};
use fpe_core::diagnostics::{
    borderline_ensemble, ensemble_max, leibniz_ensemble, EnsembleRow, DEFAULT_EXPONENTS,
};
use fpe_core::evolution::{criticality_scan, run, RunStatus};
use fpe_core::shear::{find_gamma_default, residual_orr_sommerfeld, EigenSolution, ShearProfile};
use fpe_core::SymbolScale;

#[derive(Parser)]
#[command(
    name = "fpe",
    version,
    about = "Pseudo-spectral laboratory for the 2D primitive equations with fractional horizontal dissipation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Locate the unstable dispersion root of a shear profile.
    Dispersion {
        /// Shear family (`tanh` is the built-in one).
        #[arg(long, default_value = "tanh")]
        shear: String,
        /// Steepness of the tanh profile.
        #[arg(long = "L", default_value_t = 20.0)]
        l: f64,
        /// Amplitude of the profile.
        #[arg(long, default_value_t = 1.0)]
        amplitude: f64,
        /// Vertical quadrature resolution (odd, at least 5).
        #[arg(long, default_value_t = 2049)]
        nz: usize,
        /// Directory for dispersion.json and the config echo.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Build the unstable eigenpair at one horizontal mode and report its growth rate.
    Eigenmode {
        /// Horizontal mode number.
        #[arg(long)]
        n: usize,
        /// Fractional dissipation exponent in (0, 2].
        #[arg(long)]
        alpha: f64,
        /// Horizontal viscosity.
        #[arg(long)]
        nu: f64,
        /// Steepness of the tanh profile.
        #[arg(long = "L", default_value_t = 20.0)]
        l: f64,
        /// Amplitude of the profile.
        #[arg(long, default_value_t = 1.0)]
        amplitude: f64,
        /// Vertical quadrature resolution (odd, at least 5).
        #[arg(long, default_value_t = 2049)]
        nz: usize,
        /// Directory for eigenmode.json, chi.csv, and the config echo.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Integrate the linearization around a shear profile (JSON config).
    LinearEvolve { config: PathBuf },
    /// Integrate the full equation (JSON config).
    Simulate { config: PathBuf },
    /// Map fitted growth rates over a (lambda, nu) grid (JSON config).
    CriticalityScan { config: PathBuf },
    /// Measure the product-rule inequality ratios over seeded ensembles.
    VerifyInequalities {
        /// Number of seeds; the ensembles use seeds 0..seeds.
        #[arg(long, default_value_t = 1000)]
        seeds: u64,
        /// Fractional order, in (0, 1).
        #[arg(long, default_value_t = 0.5)]
        s: f64,
        /// Base horizontal resolution; the drift check reruns at 2*nx.
        #[arg(long, default_value_t = 128)]
        nx: usize,
        /// Trigonometric degree of the random polynomials.
        #[arg(long, default_value_t = 32)]
        degree: usize,
        /// Directory for the ensemble CSVs and summary.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

enum Outcome {
    Clean,
    Blowup,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(Outcome::Clean) => ExitCode::SUCCESS,
        Ok(Outcome::Blowup) => ExitCode::from(3),
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(command: Command) -> Result<Outcome> {
    match command {
        Command::Dispersion { shear, l, amplitude, nz, output } => {
            cmd_dispersion(&shear, l, amplitude, nz, output.as_deref())
        }
        Command::Eigenmode { n, alpha, nu, l, amplitude, nz, output } => {
            cmd_eigenmode(n, alpha, nu, l, amplitude, nz, output.as_deref())
        }
        Command::LinearEvolve { config } => cmd_evolve(&config, ExperimentKind::LinearEvolve),
        Command::Simulate { config } => cmd_evolve(&config, ExperimentKind::Simulate),
        Command::CriticalityScan { config } => cmd_scan(&config),
        Command::VerifyInequalities { seeds, s, nx, degree, output } => {
            cmd_inequalities(seeds, s, nx, degree, output.as_deref())
        }
    }
}

fn tanh_profile(shear: &str, nz: usize, l: f64, amplitude: f64) -> Result<ShearProfile> {
    if shear != "tanh" {
        return Err(validation(format!(
            "invalid `shear`: only the `tanh` family is built in, got `{shear}`"
        )));
    }
    Ok(ShearProfile::tanh(nz, l, amplitude)?)
}

fn echo_args(dir: &Path, args: serde_json::Value) -> Result<()> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Other(anyhow::anyhow!("creating {}: {e}", dir.display())))?;
    let text = serde_json::to_string_pretty(&args)
        .map_err(|e| CliError::Other(e.into()))?;
    std::fs::write(dir.join("config.json"), text + "\n")
        .map_err(|e| CliError::Other(anyhow::anyhow!("writing config echo: {e}")))?;
    Ok(())
}

fn cmd_dispersion(
    shear: &str,
    l: f64,
    amplitude: f64,
    nz: usize,
    output: Option<&Path>,
) -> Result<Outcome> {
    let profile = tanh_profile(shear, nz, l, amplitude)?;
    let root = find_gamma_default(&profile)?;
    println!("gamma = {}", root.gamma);
    println!("residual = {:e}", root.residual);
    println!("c = {} + {}i", root.c.re, root.c.im);
    println!("symmetry_violation = {}", root.symmetry_violation);

    if let Some(dir) = output {
        echo_args(
            dir,
            serde_json::json!({
                "kind": "dispersion", "shear": shear, "L": l,
                "amplitude": amplitude, "nz": nz,
            }),
        )?;
        let body = serde_json::json!({
            "gamma": root.gamma,
            "residual": root.residual,
            "c_re": root.c.re,
            "c_im": root.c.im,
            "symmetry_violation": root.symmetry_violation,
            "nz": nz,
        });
        std::fs::write(dir.join("dispersion.json"), body.to_string() + "\n")
            .map_err(|e| CliError::Other(anyhow::anyhow!("writing dispersion.json: {e}")))?;
    }
    Ok(Outcome::Clean)
}

fn cmd_eigenmode(
    n: usize,
    alpha: f64,
    nu: f64,
    l: f64,
    amplitude: f64,
    nz: usize,
    output: Option<&Path>,
) -> Result<Outcome> {
    let profile = tanh_profile("tanh", nz, l, amplitude)?;
    let root = find_gamma_default(&profile)?;
    let sol = EigenSolution::build(&profile, root.gamma, alpha, nu, SymbolScale::TwoPi, n)?;
    let beta = sol.beta(n);
    let residual =
        residual_orr_sommerfeld(&profile, root.gamma, &sol.chi, n, alpha, nu, SymbolScale::TwoPi)?;
    println!("gamma = {}", root.gamma);
    println!("beta_{n} = {beta}");
    println!("rate = {}", n as f64 * beta);
    println!("residual = {residual:e}");

    if let Some(dir) = output {
        echo_args(
            dir,
            serde_json::json!({
                "kind": "eigenmode", "n": n, "alpha": alpha, "nu": nu,
                "L": l, "amplitude": amplitude, "nz": nz,
            }),
        )?;
        let body = serde_json::json!({
            "gamma": root.gamma,
            "n": n,
            "beta_n": beta,
            "rate": n as f64 * beta,
            "residual": residual,
        });
        std::fs::write(dir.join("eigenmode.json"), body.to_string() + "\n")
            .map_err(|e| CliError::Other(anyhow::anyhow!("writing eigenmode.json: {e}")))?;

        let mut csv = String::from("z,chi_re,chi_im,chi_zz_re,chi_zz_im\n");
        let h = 1.0 / (nz - 1) as f64;
        for i in 0..nz {
            csv.push_str(&format!(
                "{},{},{},{},{}\n",
                i as f64 * h,
                sol.chi[i].re,
                sol.chi[i].im,
                sol.chi_zz[i].re,
                sol.chi_zz[i].im
            ));
        }
        std::fs::write(dir.join("chi.csv"), csv)
            .map_err(|e| CliError::Other(anyhow::anyhow!("writing chi.csv: {e}")))?;
    }
    Ok(Outcome::Clean)
}

fn cmd_evolve(config_path: &Path, kind: ExperimentKind) -> Result<Outcome> {
    let config = ExperimentConfig::load(config_path)?;
    config.expect_kind(kind)?;
    let run_config = config.to_run_config()?;
    let traj = run(&run_config)?;

    let dir = config.output_dir();
    output::prepare_dir(&dir, &config)?;
    output::write_series(&dir, &traj)?;
    output::write_probes(&dir, &traj)?;
    let t_final = *traj.times.last().expect("runs record at least t = 0");
    output::write_snapshot(&dir, "final", &traj.final_state, t_final, config.seed)?;

    let status = match traj.status {
        RunStatus::Completed => "completed".to_string(),
        RunStatus::Blowup { t } => format!("blowup at t = {t}"),
    };
    let body = serde_json::json!({
        "status": status,
        "steps": traj.steps,
        "samples": traj.times.len(),
        "t_final": t_final,
        "gamma": traj.gamma,
    });
    std::fs::write(dir.join("run.json"), body.to_string() + "\n")
        .map_err(|e| CliError::Other(anyhow::anyhow!("writing run.json: {e}")))?;

    println!("status = {status}");
    println!("steps = {}", traj.steps);
    println!("outputs in {}", dir.display());
    if traj.blew_up() {
        eprintln!("run flagged a blow-up; outputs were written up to the last finite sample");
        return Ok(Outcome::Blowup);
    }
    Ok(Outcome::Clean)
}

fn cmd_scan(config_path: &Path) -> Result<Outcome> {
    let config = ExperimentConfig::load(config_path)?;
    config.expect_kind(ExperimentKind::CriticalityScan)?;
    let scan_config = config.to_scan_config()?;
    let n_lambda = scan_config.lambdas.len();
    let result = criticality_scan(&scan_config)?;

    let dir = config.output_dir();
    output::prepare_dir(&dir, &config)?;
    output::write_scan(&dir, &result, n_lambda)?;

    println!("gamma_base = {}", result.gamma_base);
    for th in &result.thresholds {
        match th.lambda_star {
            Some(l) => println!("nu = {}: lambda_star = {l}", th.nu),
            None => println!("nu = {}: no sign change inside the scanned range", th.nu),
        }
    }
    println!("outputs in {}", dir.display());
    Ok(Outcome::Clean)
}

fn ensemble_csv(rows: &[EnsembleRow]) -> String {
    let mut out = String::from("seed,s,nx,degree,ratio\n");
    for row in rows {
        out.push_str(&row.csv_line());
        out.push('\n');
    }
    out
}

fn cmd_inequalities(
    seeds: u64,
    s: f64,
    nx: usize,
    degree: usize,
    output: Option<&Path>,
) -> Result<Outcome> {
    if !(s > 0.0 && s < 1.0) {
        return Err(validation(format!("invalid `s`: must lie in (0, 1), got {s}")));
    }
    if seeds == 0 {
        return Err(validation("invalid `seeds`: need at least one seed"));
    }
    if nx == 0 || nx % 2 != 0 {
        return Err(validation(format!("invalid `nx`: must be positive and even, got {nx}")));
    }
    if degree == 0 || degree > nx / 2 {
        return Err(validation(format!(
            "invalid `degree`: need 1 <= degree <= nx/2 = {}, got {degree}",
            nx / 2
        )));
    }
    let seed_list: Vec<u64> = (0..seeds).collect();
    let scale = SymbolScale::TwoPi;

    let mut tables = Vec::new();
    for resolution in [nx, 2 * nx] {
        let leibniz =
            leibniz_ensemble(&seed_list, resolution, degree, s, DEFAULT_EXPONENTS, scale)?;
        let borderline = borderline_ensemble(&seed_list, resolution, degree, s, scale)?;
        tables.push((resolution, leibniz, borderline));
    }

    let drift = |lo: f64, hi: f64| (hi / lo - 1.0).abs();
    let (l_lo, l_hi) = (ensemble_max(&tables[0].1), ensemble_max(&tables[1].1));
    let (b_lo, b_hi) = (ensemble_max(&tables[0].2), ensemble_max(&tables[1].2));
    println!("leibniz max: nx={} -> {l_lo}, nx={} -> {l_hi} (drift {:.3e})", nx, 2 * nx, drift(l_lo, l_hi));
    println!("borderline max: nx={} -> {b_lo}, nx={} -> {b_hi} (drift {:.3e})", nx, 2 * nx, drift(b_lo, b_hi));

    if let Some(dir) = output {
        echo_args(
            dir,
            serde_json::json!({
                "kind": "verify-inequalities", "seeds": seeds, "s": s,
                "nx": nx, "degree": degree,
            }),
        )?;
        for (resolution, leibniz, borderline) in &tables {
            std::fs::write(dir.join(format!("leibniz_nx{resolution}.csv")), ensemble_csv(leibniz))
                .map_err(|e| CliError::Other(anyhow::anyhow!("writing leibniz csv: {e}")))?;
            std::fs::write(
                dir.join(format!("borderline_nx{resolution}.csv")),
                ensemble_csv(borderline),
            )
            .map_err(|e| CliError::Other(anyhow::anyhow!("writing borderline csv: {e}")))?;
        }
        let body = serde_json::json!({
            "leibniz_max": { nx.to_string(): l_lo, (2 * nx).to_string(): l_hi },
            "borderline_max": { nx.to_string(): b_lo, (2 * nx).to_string(): b_hi },
            "leibniz_drift": drift(l_lo, l_hi),
            "borderline_drift": drift(b_lo, b_hi),
        });
        std::fs::write(dir.join("summary.json"), body.to_string() + "\n")
            .map_err(|e| CliError::Other(anyhow::anyhow!("writing summary.json: {e}")))?;
    }
    Ok(Outcome::Clean)
}
