//! Chain configuration, output containers and the multi-chain runner shared
//! by the logistic and probit samplers.

use crate::error::{config, Error, Result};
use crate::model::{Dataset, Family, ModelState, PriorSpec};
use crate::rng::{chain_key, iteration_key, tag, StreamKey};
use crate::scale::bridge::{draw_bridge_local, slice_bridge_local};
use crate::scale::horseshoe::sample_horseshoe_lambda;
use crate::scale::stable;
use crate::scale::tau::{sample_tau_bridge_counted, sample_tau_conditional_counted, slice_tau_update};
use crate::scale::{BridgeLocalMethod, TauMethod};
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, Open01, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::Instant;

/// How each chain is initialized.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum Init {
    /// Draw `(tau, lambda, beta)` from the prior.
    PriorDraw,
    /// Use the same supplied state for every chain.
    Supplied(ModelState),
    /// One supplied state per chain.
    PerChain(Vec<ModelState>),
    /// `beta = 0`, `lambda = 1`, `tau` at the geometric midpoint of its
    /// support, `omega = 1/4`, followed by one draw of `beta` from its
    /// conditional so that the first scale update sees a nonzero `beta`.
    #[default]
    ZeroBeta,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplerConfig {
    pub n_iter: usize,
    pub n_burnin: usize,
    pub thin: usize,
    pub seed: u64,
    pub n_chains: usize,
    pub fix_tau: Option<f64>,
    pub fix_lambda: bool,
    pub init: Init,
    pub store_lambda: bool,
    pub tau_method: TauMethod,
    pub bridge_local: BridgeLocalMethod,
    pub sun_budget: u64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            n_iter: 2000,
            n_burnin: 1000,
            thin: 1,
            seed: 0,
            n_chains: 1,
            fix_tau: None,
            fix_lambda: false,
            init: Init::ZeroBeta,
            store_lambda: false,
            tau_method: TauMethod::Exact,
            bridge_local: BridgeLocalMethod::TiltedStable,
            sun_budget: 1_000_000,
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_iter == 0 || self.n_iter <= self.n_burnin {
            return config(format!(
                "need n_iter > n_burnin, got n_iter={} n_burnin={}",
                self.n_iter, self.n_burnin
            ));
        }
        if self.thin == 0 || self.n_chains == 0 {
            return config("thin and n_chains must be positive");
        }
        if let Some(t) = self.fix_tau {
            if !(t > 0.0 && t.is_finite()) {
                return config(format!("fixed tau must be positive and finite, got {t}"));
            }
        }
        if let Init::PerChain(states) = &self.init {
            if states.len() != self.n_chains {
                return config(format!("{} initial states for {} chains", states.len(), self.n_chains));
            }
        }
        Ok(())
    }

    /// Number of draws kept per chain.
    pub fn kept_per_chain(&self) -> usize {
        (self.n_iter - self.n_burnin).div_ceil(self.thin)
    }

    pub fn step_options(&self) -> StepOptions {
        StepOptions {
            fix_tau: self.fix_tau.is_some(),
            fix_lambda: self.fix_lambda,
            tau_method: self.tau_method,
            bridge_local: self.bridge_local,
            sun_budget: self.sun_budget,
            labels: None,
        }
    }
}

/// Per-sweep switches.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOptions {
    pub fix_tau: bool,
    pub fix_lambda: bool,
    pub tau_method: TauMethod,
    pub bridge_local: BridgeLocalMethod,
    pub sun_budget: u64,
    /// Stable labels for the coordinates; substreams for coordinate `j` are
    /// keyed by `labels[j]` (default `j`).
    pub labels: Option<Vec<u64>>,
}

impl Default for StepOptions {
    fn default() -> Self {
        SamplerConfig::default().step_options()
    }
}

impl StepOptions {
    pub(crate) fn label(&self, j: usize) -> u64 {
        self.labels.as_ref().map_or(j as u64, |l| l[j])
    }
}

/// Work counters accumulated over a chain.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counters {
    pub local_draws: u64,
    pub local_rejections: u64,
    pub pg_draws: u64,
    pub pg_rejections: u64,
    pub tau_rejections: u64,
    pub slice_expansions: u64,
    pub sun_draws: u64,
    pub sun_rejections: u64,
}

impl Counters {
    pub fn merge(&mut self, other: &Counters) {
        self.local_draws += other.local_draws;
        self.local_rejections += other.local_rejections;
        self.pg_draws += other.pg_draws;
        self.pg_rejections += other.pg_rejections;
        self.tau_rejections += other.tau_rejections;
        self.slice_expansions += other.slice_expansions;
        self.sun_draws += other.sun_draws;
        self.sun_rejections += other.sun_rejections;
    }
}

/// Draws kept from one chain.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainOutput {
    pub chain: usize,
    pub iterations: Vec<usize>,
    pub beta_draws: DMatrix<f64>,
    pub tau_draws: Vec<f64>,
    pub lambda_draws: Option<DMatrix<f64>>,
    pub runtime_seconds: f64,
    pub counters: Counters,
}

impl ChainOutput {
    pub fn n_kept(&self) -> usize {
        self.beta_draws.nrows()
    }

    /// Draws of coordinate `j`.
    pub fn beta_column(&self, j: usize) -> &[f64] {
        let n = self.beta_draws.nrows();
        &self.beta_draws.as_slice()[j * n..(j + 1) * n]
    }
}

/// Output of a multi-chain run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub chains: Vec<ChainOutput>,
    pub runtime_seconds: f64,
}

impl RunOutput {
    pub fn counters(&self) -> Counters {
        let mut c = Counters::default();
        for ch in &self.chains {
            c.merge(&ch.counters);
        }
        c
    }

    /// Draws of coordinate `j` pooled over chains.
    pub fn pooled_column(&self, j: usize) -> Vec<f64> {
        self.chains.iter().flat_map(|c| c.beta_column(j).iter().copied()).collect()
    }
}

/// Default starting value of tau.
pub fn initial_tau(prior: &PriorSpec) -> f64 {
    let (lo, hi) = prior.tau_support();
    if hi.is_finite() {
        (lo * hi).sqrt()
    } else {
        lo.max(1.0)
    }
}

/// Updates tau and then the local scales of the shrunk coordinates.
pub(crate) fn update_scales(
    state: &mut ModelState,
    data: &Dataset,
    prior: &PriorSpec,
    opts: &StepOptions,
    key: StreamKey,
    counters: &mut Counters,
) -> Result<()> {
    let idx = data.shrunk_indices();
    let beta_s = &state.beta[idx.clone()];
    if !opts.fix_tau {
        let mut rng = key.child(tag::TAU).rng();
        let (tau, extra) = match prior.family {
            Family::Bridge { alpha } => sample_tau_bridge_counted(beta_s, alpha, &prior.global, &mut rng)?,
            Family::Horseshoe => {
                let lambda_s = &state.lambda[idx.clone()];
                match opts.tau_method {
                    TauMethod::Exact => sample_tau_conditional_counted(beta_s, lambda_s, prior, &mut rng)?,
                    TauMethod::Slice => {
                        let (t, e) = slice_tau_update(state.tau, beta_s, lambda_s, prior, &mut rng)?;
                        counters.slice_expansions += e;
                        (t, 0)
                    }
                }
            }
        };
        counters.tau_rejections += extra;
        state.tau = tau;
    }
    if opts.fix_lambda {
        return Ok(());
    }
    let tau = state.tau;
    let local_key = key.child(tag::LOCAL);
    let draws: Vec<Result<(f64, u64, u64)>> = idx
        .clone()
        .into_par_iter()
        .map(|j| {
            let mut rng = local_key.child(opts.label(j)).rng();
            let c = state.beta[j] / tau;
            match prior.family {
                Family::Horseshoe => {
                    let b = (0.5 * c * c).max(f64::MIN_POSITIVE);
                    let (l, proposals) = sample_horseshoe_lambda(b, &mut rng)?;
                    Ok((l, proposals - 1, 0))
                }
                Family::Bridge { alpha } => match opts.bridge_local {
                    BridgeLocalMethod::TiltedStable => {
                        let (l, rej) = draw_bridge_local(c, alpha, &mut rng)?;
                        Ok((l, rej, 0))
                    }
                    BridgeLocalMethod::Slice => {
                        let (l, e) = slice_bridge_local(state.lambda[j], c, alpha, &mut rng)?;
                        Ok((l, 0, e))
                    }
                },
            }
        })
        .collect();
    for (j, d) in idx.zip(draws) {
        let (l, rej, exp) = d?;
        state.lambda[j] = l;
        counters.local_draws += 1;
        counters.local_rejections += rej;
        counters.slice_expansions += exp;
    }
    Ok(())
}

/// Draws `(tau, lambda, beta)` from the (truncated) prior.
pub(crate) fn prior_draw_state(data: &Dataset, prior: &PriorSpec, key: StreamKey) -> Result<ModelState> {
    let mut rng = key.rng();
    let (lo, hi) = prior.tau_support();
    let kappa = prior.global_exponent();
    let tau = if prior.global.shape > 0.0 {
        let (phi, _) = crate::scale::tau::sample_truncated_gamma(
            prior.global.shape,
            prior.global.rate,
            hi.powf(-kappa),
            lo.powf(-kappa),
            &mut rng,
        )?;
        phi.powf(-1.0 / kappa).clamp(lo, hi)
    } else {
        if !hi.is_finite() {
            return config("a prior draw of tau needs a finite upper bound under the reference prior");
        }
        let u: f64 = rng.sample(Open01);
        (lo.ln() + u * (hi.ln() - lo.ln())).exp()
    };
    let p = data.p();
    let mut lambda = vec![1.0; p];
    let mut beta = vec![0.0; p];
    for j in data.shrunk_indices() {
        lambda[j] = match prior.family {
            Family::Horseshoe => {
                let u: f64 = rng.sample(Open01);
                (0.5 * std::f64::consts::PI * u).tan()
            }
            Family::Bridge { alpha } => {
                let log_s = if alpha == 1.0 {
                    // Levy: 1 / (4 G) with G ~ Gamma(1/2, 1)
                    let z: f64 = StandardNormal.sample(&mut rng);
                    -(2.0 * z * z).ln()
                } else {
                    stable::sample_log(0.5 * alpha, &mut rng)
                };
                (-0.5 * (std::f64::consts::LN_2 + log_s)).exp()
            }
        };
        let v = crate::model::regularized_conditional_variance(tau, lambda[j], prior.slab)?;
        let z: f64 = StandardNormal.sample(&mut rng);
        beta[j] = v.sqrt() * z;
    }
    if data.has_intercept() && prior.intercept_slab.is_finite() {
        let z: f64 = StandardNormal.sample(&mut rng);
        beta[0] = prior.intercept_slab * z;
    }
    Ok(ModelState { beta, lambda, tau, omega: None })
}

/// Which sampler a chain runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum ModelKind {
    Logistic,
    Probit,
}

pub(crate) fn run_chains(kind: ModelKind, data: &Dataset, prior: &PriorSpec, cfg: &SamplerConfig) -> Result<RunOutput> {
    cfg.validate()?;
    prior.validate()?;
    let start = Instant::now();
    let chains: Vec<Result<ChainOutput>> =
        (0..cfg.n_chains).into_par_iter().map(|c| run_one_chain(kind, data, prior, cfg, c)).collect();
    let chains = chains.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(RunOutput { chains, runtime_seconds: start.elapsed().as_secs_f64() })
}

fn initial_state(kind: ModelKind, data: &Dataset, prior: &PriorSpec, cfg: &SamplerConfig, chain: usize) -> Result<ModelState> {
    let key = chain_key(cfg.seed, chain).child(tag::INIT);
    let p = data.p();
    let mut state = match &cfg.init {
        Init::ZeroBeta => ModelState {
            beta: vec![0.0; p],
            lambda: vec![1.0; p],
            tau: initial_tau(prior),
            omega: None,
        },
        Init::PriorDraw => prior_draw_state(data, prior, key.child(1))?,
        Init::Supplied(s) => s.clone(),
        Init::PerChain(states) => states[chain].clone(),
    };
    if state.beta.len() != p || state.lambda.len() != p {
        return Err(Error::Config(format!(
            "initial state has {} coefficients, data has {p} columns",
            state.beta.len()
        )));
    }
    if let Some(t) = cfg.fix_tau {
        state.tau = t;
    }
    if kind == ModelKind::Logistic && state.omega.as_ref().is_none_or(|o| o.len() != data.n()) {
        state.omega = Some(if matches!(cfg.init, Init::ZeroBeta) {
            vec![crate::polya_gamma::pg_mean(0.0); data.n()]
        } else {
            crate::logistic::draw_omega(&state.beta, data, key.child(2), &mut Counters::default())
        });
    }
    if kind == ModelKind::Probit {
        state.omega = None;
    }
    state.validate()?;
    if matches!(cfg.init, Init::ZeroBeta) {
        let opts = cfg.step_options();
        state.beta = match kind {
            ModelKind::Logistic => crate::logistic::beta_draw(&state, data, prior, &opts, key.child(3))?,
            ModelKind::Probit => {
                crate::probit::sun_draw(state.tau, &state.lambda, prior, data, &opts, key.child(3), &mut Counters::default())?
            }
        };
    }
    Ok(state)
}

fn run_one_chain(kind: ModelKind, data: &Dataset, prior: &PriorSpec, cfg: &SamplerConfig, chain: usize) -> Result<ChainOutput> {
    let start = Instant::now();
    let mut state = initial_state(kind, data, prior, cfg, chain)?;
    let opts = cfg.step_options();
    let kept = cfg.kept_per_chain();
    let p = data.p();
    let mut beta_draws = DMatrix::<f64>::zeros(kept, p);
    let mut lambda_draws = cfg.store_lambda.then(|| DMatrix::<f64>::zeros(kept, p));
    let mut tau_draws = Vec::with_capacity(kept);
    let mut iterations = Vec::with_capacity(kept);
    let mut counters = Counters::default();
    for it in 0..cfg.n_iter {
        let key = iteration_key(cfg.seed, chain, it);
        let next = match kind {
            ModelKind::Logistic => crate::logistic::gibbs_step_logistic_with(&state, data, prior, &opts, key, &mut counters),
            ModelKind::Probit => crate::probit::gibbs_step_probit_with(&state, data, prior, &opts, key, &mut counters),
        };
        state = match next.and_then(|s| s.validate().map(|_| s)) {
            Ok(s) => s,
            Err(e) => {
                return Err(Error::Divergence {
                    chain,
                    iteration: it,
                    reason: e.to_string(),
                    snapshot: Box::new(state),
                })
            }
        };
        if it >= cfg.n_burnin && (it - cfg.n_burnin).is_multiple_of(cfg.thin) {
            let row = iterations.len();
            for j in 0..p {
                beta_draws[(row, j)] = state.beta[j];
            }
            if let Some(ld) = lambda_draws.as_mut() {
                for j in 0..p {
                    ld[(row, j)] = state.lambda[j];
                }
            }
            tau_draws.push(state.tau);
            iterations.push(it);
        }
    }
    Ok(ChainOutput {
        chain,
        iterations,
        beta_draws,
        tau_draws,
        lambda_draws,
        runtime_seconds: start.elapsed().as_secs_f64(),
        counters,
    })
}
