//! On-disk formats: CSV time series, raw little-endian float64 snapshots
//! with JSON sidecars, scan tables, and the effective-config echo.  All
//! float formatting goes through `Display` (shortest round-trip), so rerun
//! outputs are byte-identical for identical config and seed.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::{Deserialize, Serialize};

use fpe_core::evolution::{ScanResult, Trajectory};
use fpe_core::{Field, GridSpec, SymbolScale};

use crate::config::ExperimentConfig;
use crate::Result;

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(Into::into)
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    write_bytes(path, text.as_bytes())
}

/// Create the output directory and echo the effective configuration into it.
pub fn prepare_dir(dir: &Path, config: &ExperimentConfig) -> Result<()> {
    fs::create_dir_all(dir)
        .with_context(|| format!("creating {}", dir.display()))?;
    let echo = serde_json::to_string_pretty(config)
        .context("serializing config echo")?;
    write_text(&dir.join("config.json"), &(echo + "\n"))
}

/// Time series of the energy reports: one row per sample, with the hierarchy
/// levels, sup norms, the regularity integrand, and the running Y budget.
pub fn write_series(dir: &Path, traj: &Trajectory) -> Result<PathBuf> {
    let levels = traj.reports.first().map(|r| r.levels()).unwrap_or(0);
    let mut head = String::from("t");
    for k in 0..=levels {
        head.push_str(&format!(",E{k}"));
    }
    for k in 0..=levels {
        head.push_str(&format!(",Et{}", k + 1));
    }
    head.push_str(",omega_inf,w_inf,u_inf,bkm_integrand");
    for k in 0..=levels {
        head.push_str(&format!(",Y{k}"));
    }

    let mut out = head;
    out.push('\n');
    for rep in &traj.reports {
        out.push_str(&format!("{}", rep.t));
        for v in &rep.e {
            out.push_str(&format!(",{v}"));
        }
        for v in &rep.etilde {
            out.push_str(&format!(",{v}"));
        }
        out.push_str(&format!(
            ",{},{},{},{}",
            rep.omega_inf, rep.w_inf, rep.u_inf, rep.bkm_integrand
        ));
        for v in &rep.y {
            out.push_str(&format!(",{v}"));
        }
        out.push('\n');
    }
    let path = dir.join("series.csv");
    write_text(&path, &out)?;
    Ok(path)
}

/// Per-mode amplitude histories (of the evolved state, and of the stream
/// function for linearized runs).
pub fn write_probes(dir: &Path, traj: &Trajectory) -> Result<()> {
    let table = |rows: &[Vec<f64>], prefix: &str| -> String {
        let n = rows.first().map(Vec::len).unwrap_or(0);
        let mut out = String::from("t");
        for k in 0..n {
            out.push_str(&format!(",{prefix}{k}"));
        }
        out.push('\n');
        for (t, row) in traj.times.iter().zip(rows) {
            out.push_str(&format!("{t}"));
            for v in row {
                out.push_str(&format!(",{v}"));
            }
            out.push('\n');
        }
        out
    };
    write_text(&dir.join("probes.csv"), &table(&traj.probes, "p"))?;
    if !traj.psi_probes.is_empty() {
        write_text(&dir.join("psi_probes.csv"), &table(&traj.psi_probes, "psi"))?;
    }
    Ok(())
}

/// Snapshot metadata stored next to each raw payload.
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
pub struct Sidecar {
    pub nx: usize,
    pub nz: usize,
    pub alpha: f64,
    pub nu_h: f64,
    /// `"two_pi"` or `"one"`.
    pub symbol_scale: String,
    /// Simulation time of the snapshot.
    pub t: f64,
    /// Row order of the payload: z varies slowest, then x.
    pub layout: String,
    pub dtype: String,
    pub code_version: String,
    /// Pinned generator behind every seeded random choice.
    pub rng: String,
    pub seed: u64,
}

impl Sidecar {
    pub fn new(grid: &GridSpec, t: f64, seed: u64) -> Self {
        Sidecar {
            nx: grid.nx,
            nz: grid.nz,
            alpha: grid.alpha,
            nu_h: grid.nu_h,
            symbol_scale: match grid.symbol_scale {
                SymbolScale::TwoPi => "two_pi".into(),
                SymbolScale::One => "one".into(),
            },
            t,
            layout: "z-major".into(),
            dtype: "float64-le".into(),
            code_version: env!("CARGO_PKG_VERSION").into(),
            rng: "ChaCha8".into(),
            seed,
        }
    }

    pub fn grid(&self) -> Result<GridSpec> {
        let scale = match self.symbol_scale.as_str() {
            "two_pi" => SymbolScale::TwoPi,
            "one" => SymbolScale::One,
            other => {
                return Err(crate::validation(format!(
                    "sidecar symbol_scale `{other}` is not recognized"
                )))
            }
        };
        Ok(GridSpec::with_scale(self.nx, self.nz, self.alpha, self.nu_h, scale)?)
    }
}

/// Raw little-endian float64 payload (`<name>.bin`, z-major then x) plus a
/// JSON sidecar (`<name>.json`).
pub fn write_snapshot(dir: &Path, name: &str, field: &Field, t: f64, seed: u64) -> Result<()> {
    let mut bytes = Vec::with_capacity(field.grid.nx * field.grid.nz * 8);
    for i in 0..field.grid.nz {
        for j in 0..field.grid.nx {
            bytes.extend_from_slice(&field.values[[i, j]].to_le_bytes());
        }
    }
    write_bytes(&dir.join(format!("{name}.bin")), &bytes)?;
    let sidecar = Sidecar::new(&field.grid, t, seed);
    let text = serde_json::to_string_pretty(&sidecar).context("serializing sidecar")?;
    write_text(&dir.join(format!("{name}.json")), &(text + "\n"))
}

/// Reload a snapshot bit-for-bit from its payload and sidecar.
pub fn read_snapshot(dir: &Path, name: &str) -> Result<(Field, Sidecar)> {
    let sidecar_path = dir.join(format!("{name}.json"));
    let text = fs::read_to_string(&sidecar_path)
        .with_context(|| format!("reading {}", sidecar_path.display()))?;
    let sidecar: Sidecar = serde_json::from_str(&text)
        .map_err(|e| crate::validation(format!("sidecar {}: {e}", sidecar_path.display())))?;
    let grid = sidecar.grid()?;

    let bin_path = dir.join(format!("{name}.bin"));
    let bytes = fs::read(&bin_path).with_context(|| format!("reading {}", bin_path.display()))?;
    let want = grid.nx * grid.nz * 8;
    if bytes.len() != want {
        return Err(crate::validation(format!(
            "payload {} has {} bytes, sidecar implies {want}",
            bin_path.display(),
            bytes.len()
        )));
    }
    let mut field = Field::zeros(grid);
    for i in 0..grid.nz {
        for j in 0..grid.nx {
            let off = (i * grid.nx + j) * 8;
            field.values[[i, j]] =
                f64::from_le_bytes(bytes[off..off + 8].try_into().expect("8-byte chunk"));
        }
    }
    Ok((field, sidecar))
}

/// Scan tables: a flat `cells.csv`, interpolated `thresholds.csv`, the base
/// dispersion root, and one subdirectory per cell holding its summary.
pub fn write_scan(dir: &Path, result: &ScanResult, n_lambda: usize) -> Result<()> {
    let mut cells = String::from("lambda,nu,rate,predicted_rate,nonlinear_rate\n");
    for cell in &result.cells {
        let nl = cell.nonlinear_rate.map(|r| r.to_string()).unwrap_or_default();
        cells.push_str(&format!(
            "{},{},{},{},{nl}\n",
            cell.lambda, cell.nu, cell.rate, cell.predicted_rate
        ));
    }
    write_text(&dir.join("cells.csv"), &cells)?;

    let mut th = String::from("nu,lambda_star\n");
    for t in &result.thresholds {
        let l = t.lambda_star.map(|v| v.to_string()).unwrap_or_default();
        th.push_str(&format!("{},{l}\n", t.nu));
    }
    write_text(&dir.join("thresholds.csv"), &th)?;

    let summary = serde_json::json!({ "gamma_base": result.gamma_base });
    write_text(&dir.join("scan.json"), &(summary.to_string() + "\n"))?;

    for (idx, cell) in result.cells.iter().enumerate() {
        let (i, j) = (idx / n_lambda, idx % n_lambda);
        let sub = dir.join(format!("cell_nu{i:02}_lam{j:02}"));
        fs::create_dir_all(&sub)
            .with_context(|| format!("creating {}", sub.display()))?;
        let body = serde_json::json!({
            "lambda": cell.lambda,
            "nu": cell.nu,
            "rate": cell.rate,
            "predicted_rate": cell.predicted_rate,
            "nonlinear_rate": cell.nonlinear_rate,
        });
        write_text(&sub.join("cell.json"), &(body.to_string() + "\n"))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_field_snapshot_is_all_zero_payload() {
        let dir = tempfile::tempdir().unwrap();
        let grid = GridSpec::new(8, 5, 1.0, 0.1).unwrap();
        let field = Field::zeros(grid);
        write_snapshot(dir.path(), "zero", &field, 0.0, 0).unwrap();

        let bytes = fs::read(dir.path().join("zero.bin")).unwrap();
        assert_eq!(bytes.len(), 8 * 5 * 8);
        assert!(bytes.iter().all(|&b| b == 0));
        let (back, sidecar) = read_snapshot(dir.path(), "zero").unwrap();
        assert_eq!(back.values, field.values);
        assert_eq!(sidecar.layout, "z-major");
        assert_eq!(sidecar.rng, "ChaCha8");
    }

    #[test]
    fn snapshot_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let grid = GridSpec::new(6, 7, 1.3, 0.02).unwrap();
        let field = Field::from_fn(grid, |x, z| (13.0 * x + 7.0 * z).sin() / 3.0);
        write_snapshot(dir.path(), "state", &field, 0.625, 42).unwrap();
        let (back, sidecar) = read_snapshot(dir.path(), "state").unwrap();
        assert_eq!(back.values, field.values, "payload must round-trip bit-for-bit");
        assert_eq!(back.grid, grid);
        assert_eq!(sidecar.t, 0.625);
        assert_eq!(sidecar.seed, 42);
        assert_eq!(sidecar.code_version, env!("CARGO_PKG_VERSION"));
    }
}
