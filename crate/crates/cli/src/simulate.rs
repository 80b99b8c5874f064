use crate::io::{create_dir, display_paths, fmt_f64, write_json, write_matrix, writer, ManifestHeader};
use anyhow::Result;
use clap::Args;
use regshrink::simulation::{simulate, SimConfig};
use serde::Serialize;
use std::path::PathBuf;

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    /// Number of observations.
    #[arg(long)]
    pub n: usize,
    /// Number of features (excluding the intercept column).
    #[arg(long)]
    pub p: usize,
    /// Number of nonzero coefficients; they occupy the first features.
    #[arg(long, default_value_t = 10)]
    pub signals: usize,
    /// Value of each nonzero coefficient.
    #[arg(long, default_value_t = 1.0)]
    pub signal_value: f64,
    /// Intercept beta_0 in P(y = 1) = logistic(-(beta_0 + x'beta)).
    #[arg(long, default_value_t = 1.5, allow_negative_numbers = true)]
    pub intercept: f64,
    /// First shape of the Beta law of 2 w_j.
    #[arg(long, default_value_t = 0.5)]
    pub freq_a: f64,
    /// Second shape of the Beta law of 2 w_j.
    #[arg(long, default_value_t = 2.0)]
    pub freq_b: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Serialize)]
struct Manifest<'a> {
    #[serde(flatten)]
    header: ManifestHeader,
    config: &'a SimulateArgs,
    seed: u64,
    n: usize,
    p_with_intercept: usize,
    incidence: f64,
    outputs: Vec<String>,
}

pub fn run(args: &SimulateArgs) -> Result<()> {
    let started = chrono::Utc::now();
    let cfg = SimConfig {
        n: args.n,
        p: args.p,
        n_signals: args.signals,
        signal_value: args.signal_value,
        intercept: args.intercept,
        beta_shape_a: args.freq_a,
        beta_shape_b: args.freq_b,
        seed: args.seed,
    };
    let (data, truth) = simulate(&cfg)?;
    create_dir(&args.out)?;
    let names = column_names(args.p);
    let x_path = args.out.join("X.csv");
    write_matrix(&x_path, &names, data.x())?;

    let y_path = args.out.join("y.csv");
    let mut w = writer(&y_path)?;
    w.write_record(["y"])?;
    for &y in data.y() {
        w.write_record([y.to_string()])?;
    }
    w.flush()?;

    // fitted-scale truth, intercept first
    let t_path = args.out.join("beta_true.csv");
    let mut w = writer(&t_path)?;
    w.write_record(["coordinate", "name", "value", "signal", "frequency"])?;
    let coefs = truth.model_coefficients();
    for (j, v) in coefs.iter().enumerate() {
        let (signal, freq) = if j == 0 { (false, 1.0) } else { (truth.beta[j - 1] != 0.0, truth.frequencies[j - 1]) };
        w.write_record([j.to_string(), names[j].clone(), fmt_f64(*v), signal.to_string(), fmt_f64(freq)])?;
    }
    w.flush()?;

    let incidence = data.y().iter().map(|&y| f64::from(y)).sum::<f64>() / data.n() as f64;
    let m_path = args.out.join("manifest.json");
    let outputs = display_paths(&[x_path, y_path, t_path, m_path.clone()]);
    let manifest = Manifest {
        header: ManifestHeader::new("simulate", started),
        config: args,
        seed: args.seed,
        n: data.n(),
        p_with_intercept: data.p(),
        incidence,
        outputs,
    };
    write_json(&m_path, &manifest)?;
    eprintln!("wrote {} x {} design to {} (incidence {incidence:.4})", data.n(), data.p(), args.out.display());
    Ok(())
}

/// `intercept, x1, ..., xp`.
pub fn column_names(p: usize) -> Vec<String> {
    std::iter::once("intercept".to_string()).chain((1..=p).map(|j| format!("x{j}"))).collect()
}
