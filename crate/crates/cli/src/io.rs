//! CSV and JSON persistence.
//!
//! CSV files are comma separated with a header row; floats are written in
//! scientific notation with 17 significant digits so they round-trip.

use anyhow::{bail, Context, Result};
use nalgebra::DMatrix;
use serde::Serialize;
use std::path::{Path, PathBuf};

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create output directory {}", dir.display()))
}

pub fn writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    csv::Writer::from_path(path).with_context(|| format!("cannot write {}", path.display()))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(path, text + "\n").with_context(|| format!("cannot write {}", path.display()))
}

/// Writes a design matrix with the given column names.
pub fn write_matrix(path: &Path, names: &[String], x: &DMatrix<f64>) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(names)?;
    for i in 0..x.nrows() {
        w.write_record(x.row(i).iter().map(|&v| fmt_f64(v)))?;
    }
    w.flush()?;
    Ok(())
}

fn reader(path: &Path) -> Result<csv::Reader<std::fs::File>> {
    csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("cannot open {}", path.display()))
}

fn parse_f64(s: &str, path: &Path, row: usize) -> Result<f64> {
    let v: f64 = s.parse().with_context(|| format!("{}: row {row}: cannot parse {s:?} as a number", path.display()))?;
    if !v.is_finite() {
        bail!("{}: row {row}: non-finite value {s:?}", path.display());
    }
    Ok(v)
}

/// Reads a numeric table: header names and the row-major values.
pub fn read_table(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut r = reader(path)?;
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header.is_empty() || header.iter().all(String::is_empty) {
        bail!("{} has no header row", path.display());
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.with_context(|| format!("{}: malformed row {}", path.display(), i + 2))?;
        if rec.len() != header.len() {
            bail!("{}: row {} has {} fields, header has {}", path.display(), i + 2, rec.len(), header.len());
        }
        rows.push(rec.iter().map(|s| parse_f64(s, path, i + 2)).collect::<Result<Vec<_>>>()?);
    }
    Ok((header, rows))
}

pub fn read_design(path: &Path) -> Result<(Vec<String>, DMatrix<f64>)> {
    let (names, rows) = read_table(path)?;
    if rows.is_empty() {
        bail!("{} has no rows", path.display());
    }
    let x = DMatrix::from_fn(rows.len(), names.len(), |i, j| rows[i][j]);
    Ok((names, x))
}

pub fn read_outcomes(path: &Path) -> Result<Vec<u8>> {
    let (names, rows) = read_table(path)?;
    if names.len() != 1 {
        bail!("{} must have exactly one column, found {}", path.display(), names.len());
    }
    rows.iter()
        .enumerate()
        .map(|(i, r)| match r[0] {
            0.0 => Ok(0),
            1.0 => Ok(1),
            v => bail!("{}: row {}: outcome {v} is not 0 or 1", path.display(), i + 2),
        })
        .collect()
}

/// Draws read back from `beta_draws.csv`.
pub struct DrawTable {
    pub names: Vec<String>,
    pub chain: Vec<usize>,
    pub iteration: Vec<usize>,
    /// One vector of draws per coordinate.
    pub columns: Vec<Vec<f64>>,
}

impl DrawTable {
    pub fn n_chains(&self) -> usize {
        self.chain.iter().max().map_or(0, |c| c + 1)
    }

    /// Draws of coordinate `j`, split by chain.
    pub fn by_chain(&self, j: usize) -> Vec<Vec<f64>> {
        let mut out = vec![Vec::new(); self.n_chains()];
        for (k, &c) in self.chain.iter().enumerate() {
            out[c].push(self.columns[j][k]);
        }
        out
    }
}

pub fn read_draws(path: &Path) -> Result<DrawTable> {
    let (header, rows) = read_table(path)?;
    if header.len() < 3 || header[0] != "chain" || header[1] != "iteration" {
        bail!("{} must start with `chain,iteration` followed by one column per coordinate", path.display());
    }
    if rows.is_empty() {
        bail!("{} contains no draws", path.display());
    }
    let p = header.len() - 2;
    let mut columns = vec![Vec::with_capacity(rows.len()); p];
    let mut chain = Vec::with_capacity(rows.len());
    let mut iteration = Vec::with_capacity(rows.len());
    for (i, r) in rows.iter().enumerate() {
        let as_index = |v: f64, what: &str| -> Result<usize> {
            if v < 0.0 || v.fract() != 0.0 {
                bail!("{}: row {}: {what} {v} is not a nonnegative integer", path.display(), i + 2);
            }
            Ok(v as usize)
        };
        chain.push(as_index(r[0], "chain")?);
        iteration.push(as_index(r[1], "iteration")?);
        for j in 0..p {
            columns[j].push(r[j + 2]);
        }
    }
    Ok(DrawTable { names: header[2..].to_vec(), chain, iteration, columns })
}

/// Ground truth from `beta_true.csv` (`coordinate,name,value,signal`).
pub struct Truth {
    pub names: Vec<String>,
    pub values: Vec<f64>,
    pub signal: Vec<bool>,
}

pub fn read_truth(path: &Path) -> Result<Truth> {
    let mut r = reader(path)?;
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    let col = |n: &str| header.iter().position(|h| h == n);
    let (Some(ni), Some(vi)) = (col("name"), col("value")) else {
        bail!("{} must have `name` and `value` columns", path.display());
    };
    let si = col("signal");
    let mut t = Truth { names: Vec::new(), values: Vec::new(), signal: Vec::new() };
    for (i, rec) in r.records().enumerate() {
        let rec = rec.with_context(|| format!("{}: malformed row {}", path.display(), i + 2))?;
        t.names.push(rec[ni].to_string());
        t.values.push(parse_f64(&rec[vi], path, i + 2)?);
        t.signal.push(si.is_some_and(|s| matches!(&rec[s], "true" | "1")));
    }
    Ok(t)
}

/// Resolves `name` inside `dir` unless an explicit path is given.
pub fn in_dir(explicit: &Option<PathBuf>, dir: &Option<PathBuf>, name: &str) -> Result<PathBuf> {
    match (explicit, dir) {
        (Some(p), _) => Ok(p.clone()),
        (None, Some(d)) => Ok(d.join(name)),
        (None, None) => bail!("give either --data DIR or an explicit path for {name}"),
    }
}

/// Metadata common to every manifest.
#[derive(Debug, Serialize)]
pub struct ManifestHeader {
    pub tool: &'static str,
    pub version: &'static str,
    pub library_version: &'static str,
    pub command: String,
    pub argv: Vec<String>,
    pub started: String,
    pub finished: String,
}

impl ManifestHeader {
    pub fn new(command: &str, started: chrono::DateTime<chrono::Utc>) -> Self {
        Self {
            tool: "regshrink",
            version: env!("CARGO_PKG_VERSION"),
            library_version: regshrink::VERSION,
            command: command.to_string(),
            argv: std::env::args().collect(),
            started: started.to_rfc3339(),
            finished: chrono::Utc::now().to_rfc3339(),
        }
    }
}

pub fn display_paths(paths: &[PathBuf]) -> Vec<String> {
    paths.iter().map(|p| p.display().to_string()).collect()
}
