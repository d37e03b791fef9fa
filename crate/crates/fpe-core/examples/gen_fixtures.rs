//! Regenerates the inequality-laboratory regression fixtures under
//! `tests/fixtures/`: per-seed product-rule and borderline ratios for
//! 1000 seeds at s = 0.5, degree 32, nx in {128, 256}.
//!
//! Run from the crate root with `cargo run --release --example gen_fixtures`.
//! The acceptance suite compares freshly computed rows against these files
//! line by line, so regenerate them only on purpose.

use std::fs;
use std::path::PathBuf;

use fpe_core::diagnostics::{borderline_ensemble, leibniz_ensemble, EnsembleRow, DEFAULT_EXPONENTS};
use fpe_core::SymbolScale;

fn write_fixture(path: &PathBuf, rows: &[EnsembleRow]) {
    let mut out = String::from("seed,s,nx,degree,ratio\n");
    for row in rows {
        out.push_str(&row.csv_line());
        out.push('\n');
    }
    fs::write(path, out).unwrap_or_else(|e| panic!("writing {}: {e}", path.display()));
    println!("wrote {} ({} rows)", path.display(), rows.len());
}

fn main() {
    let seeds: Vec<u64> = (0..1000).collect();
    let (s, degree) = (0.5, 32usize);
    let scale = SymbolScale::TwoPi;
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    fs::create_dir_all(&dir).expect("fixture directory");

    for nx in [128usize, 256] {
        let rows = leibniz_ensemble(&seeds, nx, degree, s, DEFAULT_EXPONENTS, scale)
            .expect("leibniz ensemble");
        write_fixture(&dir.join(format!("leibniz_s05_nx{nx}_deg32.csv")), &rows);

        let rows = borderline_ensemble(&seeds, nx, degree, s, scale).expect("borderline ensemble");
        write_fixture(&dir.join(format!("borderline_s05_nx{nx}_deg32.csv")), &rows);
    }
}
