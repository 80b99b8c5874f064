use crate::io::{create_dir, display_paths, fmt_f64, in_dir, read_design, read_outcomes, write_json, writer, ManifestHeader};
use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use nalgebra::DMatrix;
use regshrink::chain::{ChainOutput, Init, RunOutput, SamplerConfig};
use regshrink::diagnostics::{credible_interval, effective_sample_size_chains, split_rhat, IntervalSummary, ESS_CAVEAT};
use regshrink::model::{Dataset, Family, GlobalScalePrior, PriorSpec};
use regshrink::scale::{BridgeLocalMethod, TauMethod};
use regshrink::{run_chain_logistic, run_chain_probit, Counters};
use serde::Serialize;
use std::path::{Path, PathBuf};

/// Version of the `summary.json` layout.
pub const SUMMARY_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Logistic,
    Probit,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Prior {
    Bridge,
    Horseshoe,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitKind {
    /// beta = 0 and unit local scales, then one beta draw.
    Zero,
    /// Draw the starting state from the prior.
    Prior,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TauUpdate {
    Exact,
    Slice,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BridgeLocal {
    TiltedStable,
    Slice,
}

#[derive(Debug, Args, Serialize)]
pub struct FitArgs {
    /// Directory holding X.csv and y.csv.
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Design matrix CSV; a first column named `intercept` is treated as
    /// the unshrunk intercept.
    #[arg(long)]
    pub x: Option<PathBuf>,
    /// Outcome CSV with a single 0/1 column.
    #[arg(long)]
    pub y: Option<PathBuf>,
    /// Treat every column as a shrunk coefficient even if the first is named `intercept`.
    #[arg(long)]
    pub no_intercept: bool,
    #[arg(long, value_enum, default_value_t = Model::Logistic)]
    pub model: Model,
    #[arg(long, value_enum, default_value_t = Prior::Bridge)]
    pub prior: Prior,
    /// Bridge exponent in (0, 1].
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    /// Slab width zeta.
    #[arg(long, default_value_t = 1.0)]
    pub slab: f64,
    /// Slab width of the intercept.
    #[arg(long, default_value_t = 10.0)]
    pub intercept_slab: f64,
    /// Gamma shape of the global prior on tau^-kappa (0 with rate 0: reference prior).
    #[arg(long, default_value_t = 0.0)]
    pub global_shape: f64,
    #[arg(long, default_value_t = 0.0)]
    pub global_rate: f64,
    /// Lower bound on E[|beta_j| | tau] under the bridge.
    #[arg(long, default_value_t = 1e-6)]
    pub mean_abs_lo: f64,
    /// Upper bound on E[|beta_j| | tau] under the bridge.
    #[arg(long, default_value_t = 1.0)]
    pub mean_abs_hi: f64,
    /// Lower end of the support of tau for the horseshoe.
    #[arg(long, default_value_t = 1e-6)]
    pub tau_min: f64,
    /// Upper end of the support of tau for the horseshoe.
    #[arg(long, default_value_t = 1.0)]
    pub tau_max: f64,
    #[arg(long, default_value_t = 2000)]
    pub iters: usize,
    #[arg(long, default_value_t = 1000)]
    pub burnin: usize,
    #[arg(long, default_value_t = 1)]
    pub thin: usize,
    #[arg(long, default_value_t = 1)]
    pub chains: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Hold tau at this value.
    #[arg(long)]
    pub fix_tau: Option<f64>,
    #[arg(long, value_enum, default_value_t = InitKind::Zero)]
    pub init: InitKind,
    #[arg(long, value_enum, default_value_t = TauUpdate::Exact)]
    pub tau_update: TauUpdate,
    #[arg(long, value_enum, default_value_t = BridgeLocal::TiltedStable)]
    pub bridge_local: BridgeLocal,
    /// Also write lambda_draws.csv.
    #[arg(long)]
    pub store_lambda: bool,
    /// Maximum proposals per probit beta draw.
    #[arg(long, default_value_t = 1_000_000)]
    pub sun_budget: u64,
    /// Credible level of the intervals in summary.json.
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

impl FitArgs {
    fn prior_spec(&self) -> PriorSpec {
        PriorSpec {
            family: match self.prior {
                Prior::Bridge => Family::Bridge { alpha: self.alpha },
                Prior::Horseshoe => Family::Horseshoe,
            },
            slab: self.slab,
            intercept_slab: self.intercept_slab,
            global: GlobalScalePrior {
                shape: self.global_shape,
                rate: self.global_rate,
                mean_abs_lo: self.mean_abs_lo,
                mean_abs_hi: self.mean_abs_hi,
                tau_min: self.tau_min,
                tau_max: self.tau_max,
            },
        }
    }

    fn sampler_config(&self) -> SamplerConfig {
        SamplerConfig {
            n_iter: self.iters,
            n_burnin: self.burnin,
            thin: self.thin,
            seed: self.seed,
            n_chains: self.chains,
            fix_tau: self.fix_tau,
            fix_lambda: false,
            init: match self.init {
                InitKind::Zero => Init::ZeroBeta,
                InitKind::Prior => Init::PriorDraw,
            },
            store_lambda: self.store_lambda,
            tau_method: match self.tau_update {
                TauUpdate::Exact => TauMethod::Exact,
                TauUpdate::Slice => TauMethod::Slice,
            },
            bridge_local: match self.bridge_local {
                BridgeLocal::TiltedStable => BridgeLocalMethod::TiltedStable,
                BridgeLocal::Slice => BridgeLocalMethod::Slice,
            },
            sun_budget: self.sun_budget,
        }
    }
}

#[derive(Serialize)]
struct CoordinateSummary {
    name: String,
    #[serde(flatten)]
    interval: IntervalSummary,
    ess: f64,
    rhat: f64,
}

#[derive(Serialize)]
struct Summary {
    schema_version: u32,
    model: Model,
    prior: Prior,
    n: usize,
    p: usize,
    has_intercept: bool,
    chains: usize,
    kept_per_chain: usize,
    level: f64,
    coordinates: Vec<CoordinateSummary>,
    tau: CoordinateSummary,
    counters: Counters,
    runtime_seconds: f64,
    ess_caveat: &'static str,
}

#[derive(Serialize)]
struct Manifest<'a> {
    #[serde(flatten)]
    header: ManifestHeader,
    config: &'a FitArgs,
    seed: u64,
    x_path: String,
    y_path: String,
    counters_per_chain: Vec<Counters>,
    outputs: Vec<String>,
}

pub fn run(args: &FitArgs) -> Result<()> {
    let started = chrono::Utc::now();
    if !(args.level > 0.0 && args.level < 1.0) {
        bail!("--level must lie in (0, 1)");
    }
    let x_path = in_dir(&args.x, &args.data, "X.csv")?;
    let y_path = in_dir(&args.y, &args.data, "y.csv")?;
    let (names, x) = read_design(&x_path)?;
    let y = read_outcomes(&y_path)?;
    if x.nrows() != y.len() {
        bail!("{} has {} rows but {} has {} outcomes", x_path.display(), x.nrows(), y_path.display(), y.len());
    }
    let has_intercept = !args.no_intercept && names[0] == "intercept";
    let data = Dataset::new(x, y, has_intercept)?;
    let prior = args.prior_spec();
    let cfg = args.sampler_config();
    create_dir(&args.out)?;
    let result = match args.model {
        Model::Logistic => run_chain_logistic(&data, &prior, &cfg),
        Model::Probit => run_chain_probit(&data, &prior, &cfg),
    };
    let run = match result {
        Ok(r) => r,
        Err(e) => {
            if let regshrink::Error::Divergence { snapshot, .. } = &e {
                let path = args.out.join("divergence_snapshot.json");
                write_json(&path, snapshot)?;
                eprintln!("state at divergence written to {}", path.display());
            }
            return Err(e).context("sampler failed");
        }
    };

    let mut outputs = Vec::new();
    let beta_path = args.out.join("beta_draws.csv");
    write_draws(&beta_path, &names, &run.chains, |c| Some(&c.beta_draws))?;
    outputs.push(beta_path);
    let tau_path = args.out.join("tau_draws.csv");
    let mut w = writer(&tau_path)?;
    w.write_record(["chain", "iteration", "tau"])?;
    for c in &run.chains {
        for (k, &t) in c.tau_draws.iter().enumerate() {
            w.write_record([c.chain.to_string(), c.iterations[k].to_string(), fmt_f64(t)])?;
        }
    }
    w.flush()?;
    outputs.push(tau_path);
    if args.store_lambda {
        let path = args.out.join("lambda_draws.csv");
        write_draws(&path, &names, &run.chains, |c| c.lambda_draws.as_ref())?;
        outputs.push(path);
    }

    let summary = summarize(args, &data, &names, &run)?;
    let s_path = args.out.join("summary.json");
    write_json(&s_path, &summary)?;
    outputs.push(s_path);
    let m_path = args.out.join("manifest.json");
    outputs.push(m_path.clone());
    let manifest = Manifest {
        header: ManifestHeader::new("fit", started),
        config: args,
        seed: args.seed,
        x_path: x_path.display().to_string(),
        y_path: y_path.display().to_string(),
        counters_per_chain: run.chains.iter().map(|c| c.counters).collect(),
        outputs: display_paths(&outputs),
    };
    write_json(&m_path, &manifest)?;
    eprintln!(
        "{} chain(s) x {} kept draws in {:.2} s, written to {}",
        run.chains.len(),
        cfg.kept_per_chain(),
        run.runtime_seconds,
        args.out.display()
    );
    Ok(())
}

fn write_draws(
    path: &Path,
    names: &[String],
    chains: &[ChainOutput],
    block: impl Fn(&ChainOutput) -> Option<&DMatrix<f64>>,
) -> Result<()> {
    let mut w = writer(path)?;
    let mut header = vec!["chain".to_string(), "iteration".to_string()];
    header.extend(names.iter().cloned());
    w.write_record(&header)?;
    for c in chains {
        let Some(m) = block(c) else { continue };
        for i in 0..m.nrows() {
            let mut rec = vec![c.chain.to_string(), c.iterations[i].to_string()];
            rec.extend(m.row(i).iter().map(|&v| fmt_f64(v)));
            w.write_record(&rec)?;
        }
    }
    w.flush()?;
    Ok(())
}

fn summarize_draws(name: &str, per_chain: &[&[f64]], level: f64) -> Result<CoordinateSummary> {
    let pooled: Vec<f64> = per_chain.iter().flat_map(|c| c.iter().copied()).collect();
    let interval = credible_interval(&pooled, level)?;
    let ess = if per_chain.iter().all(|c| c.len() >= 10) { effective_sample_size_chains(per_chain)?.ess } else { f64::NAN };
    let rhat = if per_chain.iter().all(|c| c.len() >= 4) { split_rhat(per_chain)? } else { f64::NAN };
    Ok(CoordinateSummary { name: name.to_string(), interval, ess, rhat })
}

fn summarize(args: &FitArgs, data: &Dataset, names: &[String], run: &RunOutput) -> Result<Summary> {
    let kept = run.chains.first().map_or(0, |c| c.n_kept());
    if kept < 100 {
        eprintln!("warning: only {kept} kept draws per chain; interval endpoints will be noisy");
    }
    let coordinates = (0..data.p())
        .map(|j| {
            let cols: Vec<&[f64]> = run.chains.iter().map(|c| c.beta_column(j)).collect();
            summarize_draws(&names[j], &cols, args.level)
        })
        .collect::<Result<Vec<_>>>()?;
    let taus: Vec<&[f64]> = run.chains.iter().map(|c| c.tau_draws.as_slice()).collect();
    Ok(Summary {
        schema_version: SUMMARY_SCHEMA_VERSION,
        model: args.model,
        prior: args.prior,
        n: data.n(),
        p: data.p(),
        has_intercept: data.has_intercept(),
        chains: run.chains.len(),
        kept_per_chain: kept,
        level: args.level,
        coordinates,
        tau: summarize_draws("tau", &taus, args.level)?,
        counters: run.counters(),
        runtime_seconds: run.runtime_seconds,
        ess_caveat: ESS_CAVEAT,
    })
}
