use crate::io::{create_dir, display_paths, fmt_f64, read_draws, read_truth, write_json, writer, ManifestHeader};
use anyhow::{bail, Result};
use clap::Args;
use regshrink::diagnostics::{
    autocorrelation, coverage_width_curve, credible_interval, effective_sample_size_chains, split_rhat, top_k_widest,
    CoverageGroup, ESS_CAVEAT,
};
use serde::Serialize;
use std::path::PathBuf;

#[derive(Debug, Args, Serialize)]
pub struct DiagnoseArgs {
    /// Draws file written by `fit` (beta_draws.csv).
    #[arg(long)]
    pub draws: PathBuf,
    /// True coefficients (`beta_true.csv` from `simulate`) for coverage tables.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    /// Credible levels of the coverage-width table.
    #[arg(long, value_delimiter = ',', default_value = "0.5,0.8,0.9,0.95")]
    pub levels: Vec<f64>,
    /// Level of the per-coordinate intervals.
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
    /// Largest autocorrelation lag.
    #[arg(long, default_value_t = 50)]
    pub max_lag: usize,
    /// Select the k coordinates with the widest intervals; the trace and
    /// autocorrelation tables are then restricted to them.
    #[arg(long)]
    pub top_k: Option<usize>,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Serialize)]
struct Manifest<'a> {
    #[serde(flatten)]
    header: ManifestHeader,
    config: &'a DiagnoseArgs,
    coordinates: usize,
    chains: usize,
    draws: usize,
    widest: Option<Vec<String>>,
    ess_caveat: &'static str,
    outputs: Vec<String>,
}

fn group_name(g: CoverageGroup) -> &'static str {
    match g {
        CoverageGroup::All => "all",
        CoverageGroup::Signal => "signal",
        CoverageGroup::Null => "null",
    }
}

pub fn run(args: &DiagnoseArgs) -> Result<()> {
    let started = chrono::Utc::now();
    let table = read_draws(&args.draws)?;
    let p = table.names.len();
    if args.levels.iter().chain([&args.level]).any(|&l| !(l > 0.0 && l < 1.0)) {
        bail!("credible levels must lie in (0, 1)");
    }
    create_dir(&args.out)?;
    let mut outputs = Vec::new();

    let columns: Vec<&[f64]> = table.columns.iter().map(|c| c.as_slice()).collect();
    let widest = match args.top_k {
        Some(k) => Some(top_k_widest(&columns, args.level, k)?),
        None => None,
    };
    let selected: Vec<usize> = widest.clone().unwrap_or_else(|| (0..p).collect());

    let trace_path = args.out.join("trace.csv");
    let mut w = writer(&trace_path)?;
    w.write_record(["chain", "iteration", "coordinate", "value"])?;
    for &j in &selected {
        for k in 0..table.chain.len() {
            w.write_record([
                table.chain[k].to_string(),
                table.iteration[k].to_string(),
                table.names[j].clone(),
                fmt_f64(table.columns[j][k]),
            ])?;
        }
    }
    w.flush()?;
    outputs.push(trace_path);

    let acf_path = args.out.join("acf.csv");
    let mut w = writer(&acf_path)?;
    w.write_record(["coordinate", "chain", "lag", "autocorrelation", "degenerate"])?;
    for &j in &selected {
        for (c, draws) in table.by_chain(j).iter().enumerate() {
            if draws.len() < 2 {
                continue;
            }
            let acf = autocorrelation(draws, args.max_lag.min(draws.len() - 1))?;
            for (lag, v) in acf.values.iter().enumerate() {
                w.write_record([table.names[j].clone(), c.to_string(), lag.to_string(), fmt_f64(*v), acf.degenerate.to_string()])?;
            }
        }
    }
    w.flush()?;
    outputs.push(acf_path);

    let truth = match &args.truth {
        Some(path) => {
            let t = read_truth(path)?;
            let mut values = Vec::with_capacity(p);
            let mut signal = Vec::with_capacity(p);
            for name in &table.names {
                let Some(k) = t.names.iter().position(|n| n == name) else {
                    bail!("coordinate {name} has no entry in {}", path.display());
                };
                values.push(t.values[k]);
                signal.push(t.signal[k]);
            }
            Some((values, signal))
        }
        None => None,
    };

    let int_path = args.out.join("intervals.csv");
    let mut w = writer(&int_path)?;
    w.write_record(["coordinate", "mean", "median", "lo", "hi", "width", "level", "ess", "rhat", "truth", "covers_truth"])?;
    for j in 0..p {
        let by_chain = table.by_chain(j);
        let refs: Vec<&[f64]> = by_chain.iter().map(|c| c.as_slice()).collect();
        let mut iv = credible_interval(&table.columns[j], args.level)?;
        let ess = if refs.iter().all(|c| c.len() >= 10) { effective_sample_size_chains(&refs)?.ess } else { f64::NAN };
        let rhat = if refs.iter().all(|c| c.len() >= 4) { split_rhat(&refs)? } else { f64::NAN };
        let truth_cell = match &truth {
            Some((values, _)) => {
                iv = iv.with_truth(values[j]);
                fmt_f64(values[j])
            }
            None => String::new(),
        };
        w.write_record([
            table.names[j].clone(),
            fmt_f64(iv.mean),
            fmt_f64(iv.median),
            fmt_f64(iv.lo),
            fmt_f64(iv.hi),
            fmt_f64(iv.width),
            fmt_f64(iv.level),
            fmt_f64(ess),
            fmt_f64(rhat),
            truth_cell,
            iv.covers_truth.map_or(String::new(), |c| c.to_string()),
        ])?;
    }
    w.flush()?;
    outputs.push(int_path);

    if let Some((values, signal)) = &truth {
        let cov_path = args.out.join("coverage.csv");
        let mut w = writer(&cov_path)?;
        w.write_record(["level", "group", "count", "mean_width", "coverage"])?;
        let mask = signal.iter().any(|&s| s).then_some(signal.as_slice());
        for row in coverage_width_curve(&columns, values, &args.levels, mask)? {
            w.write_record([
                fmt_f64(row.level),
                group_name(row.group).to_string(),
                row.count.to_string(),
                fmt_f64(row.mean_width),
                fmt_f64(row.coverage),
            ])?;
        }
        w.flush()?;
        outputs.push(cov_path);
    }

    if let Some(idx) = &widest {
        let path = args.out.join("widest.csv");
        let mut w = writer(&path)?;
        w.write_record(["rank", "coordinate", "width"])?;
        for (rank, &j) in idx.iter().enumerate() {
            let iv = credible_interval(&table.columns[j], args.level)?;
            w.write_record([(rank + 1).to_string(), table.names[j].clone(), fmt_f64(iv.width)])?;
        }
        w.flush()?;
        outputs.push(path);
    }

    let m_path = args.out.join("diagnostics.json");
    outputs.push(m_path.clone());
    let manifest = Manifest {
        header: ManifestHeader::new("diagnose", started),
        config: args,
        coordinates: p,
        chains: table.n_chains(),
        draws: table.chain.len(),
        widest: widest.map(|idx| idx.iter().map(|&j| table.names[j].clone()).collect()),
        ess_caveat: ESS_CAVEAT,
        outputs: display_paths(&outputs),
    };
    write_json(&m_path, &manifest)?;
    Ok(())
}
