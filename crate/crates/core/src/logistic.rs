//! Polya-Gamma Gibbs sampler for regularized logistic regression.
//!
//! One sweep updates, in order: tau (collapsed for the bridge), the local
//! scales, `omega_i ~ PG(1, x_i' beta)`, and
//! `beta ~ N(Phi^-1 X'(y - 1/2), Phi^-1)` with
//! `Phi = X' Omega X + zeta^-2 I + tau^-2 Lambda^-2`.

use crate::chain::{run_chains, update_scales, Counters, ModelKind, RunOutput, SamplerConfig, StepOptions};
use crate::error::{Error, Result};
use crate::model::{Dataset, ModelState, PriorSpec};
use crate::polya_gamma::sample_pg1_counted;
use crate::rng::{tag, StreamKey};
use nalgebra::{Cholesky, DMatrix, DVector};
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

/// Diagonal of the prior precision: `zeta^-2 + (tau lambda_j)^-2` for the
/// shrunk coordinates and `zeta_0^-2` for the intercept.
pub fn prior_precision(tau: f64, lambda: &[f64], prior: &PriorSpec, data: &Dataset) -> Vec<f64> {
    let slab = prior.slab.powi(-2);
    (0..data.p())
        .map(|j| {
            if j == 0 && data.has_intercept() {
                prior.intercept_slab.powi(-2)
            } else {
                slab + (tau * lambda[j]).powi(-2)
            }
        })
        .collect()
}

/// `Phi = X' Omega X + diag(precision)`.
pub fn posterior_precision(omega: &[f64], precision: &[f64], data: &Dataset) -> DMatrix<f64> {
    let x = data.x();
    let mut w = x.clone();
    for (i, &o) in omega.iter().enumerate() {
        let s = o.sqrt();
        w.row_mut(i).scale_mut(s);
    }
    let mut phi = w.tr_mul(&w);
    for (j, &d) in precision.iter().enumerate() {
        phi[(j, j)] += d;
    }
    phi
}

/// Conditional covariance `Phi^-1` of beta given `(omega, tau, lambda)`.
pub fn conditional_covariance(omega: &[f64], tau: f64, lambda: &[f64], prior: &PriorSpec, data: &Dataset) -> Result<DMatrix<f64>> {
    let phi = posterior_precision(omega, &prior_precision(tau, lambda, prior, data), data);
    let chol = Cholesky::new(phi).ok_or_else(|| Error::Computation("precision matrix is not positive definite".into()))?;
    Ok(chol.inverse())
}

/// Draws beta from its Gaussian conditional.
///
/// Uses the perturbation form `beta = Phi^-1 (X'(y - 1/2) + X' Omega^1/2 e1 + D^1/2 e2)`,
/// where `e1` is keyed by observation and `e2` by coordinate label, so that
/// relabeling the columns permutes the draw.
pub fn sample_beta_conditional(
    omega: &[f64],
    tau: f64,
    lambda: &[f64],
    prior: &PriorSpec,
    data: &Dataset,
    key: StreamKey,
) -> Result<Vec<f64>> {
    if omega.len() != data.n() || lambda.len() != data.p() {
        return Err(Error::Domain(format!(
            "dimension mismatch: omega {} vs n {}, lambda {} vs p {}",
            omega.len(),
            data.n(),
            lambda.len(),
            data.p()
        )));
    }
    if !(tau > 0.0) || lambda.iter().any(|&l| !(l > 0.0)) || omega.iter().any(|&o| !(o > 0.0)) {
        return Err(Error::Domain("scales and Polya-Gamma variables must be positive".into()));
    }
    draw_gaussian(omega, tau, lambda, prior, data, &StepOptions::default(), key)
}

fn draw_gaussian(
    omega: &[f64],
    tau: f64,
    lambda: &[f64],
    prior: &PriorSpec,
    data: &Dataset,
    opts: &StepOptions,
    key: StreamKey,
) -> Result<Vec<f64>> {
    let precision = prior_precision(tau, lambda, prior, data);
    let phi = posterior_precision(omega, &precision, data);
    let n = data.n();
    let p = data.p();
    let data_key = key.child(tag::BETA_DATA);
    let prior_key = key.child(tag::BETA_PRIOR);
    let mut t = DVector::<f64>::zeros(n);
    let y = data.y();
    for i in 0..n {
        let e: f64 = StandardNormal.sample(&mut data_key.child(i as u64).rng());
        t[i] = y[i] as f64 - 0.5 + omega[i].sqrt() * e;
    }
    let mut rhs = data.x().tr_mul(&t);
    for j in 0..p {
        let e: f64 = StandardNormal.sample(&mut prior_key.child(opts.label(j)).rng());
        rhs[j] += precision[j].sqrt() * e;
    }
    let chol = Cholesky::new(phi).ok_or_else(|| {
        Error::Computation(format!("precision matrix not positive definite (tau = {tau:e})"))
    })?;
    Ok(chol.solve(&rhs).iter().copied().collect())
}

/// Draws `omega_i ~ PG(1, x_i' beta)` on per-observation substreams.
pub(crate) fn draw_omega(beta: &[f64], data: &Dataset, key: StreamKey, counters: &mut Counters) -> Vec<f64> {
    let b = DVector::from_column_slice(beta);
    let eta = data.x() * b;
    let omega_key = key.child(tag::OMEGA);
    let draws: Vec<(f64, u64)> = (0..data.n())
        .into_par_iter()
        .map(|i| sample_pg1_counted(eta[i], &mut omega_key.child(i as u64).rng()))
        .collect();
    counters.pg_draws += draws.len() as u64;
    counters.pg_rejections += draws.iter().map(|d| d.1 - 1).sum::<u64>();
    draws.into_iter().map(|d| d.0).collect()
}

pub(crate) fn beta_draw(state: &ModelState, data: &Dataset, prior: &PriorSpec, opts: &StepOptions, key: StreamKey) -> Result<Vec<f64>> {
    let omega = state
        .omega
        .as_ref()
        .ok_or_else(|| Error::Domain("logistic state is missing omega".into()))?;
    draw_gaussian(omega, state.tau, &state.lambda, prior, data, opts, key)
}

/// One full sweep with default options.
pub fn gibbs_step_logistic(state: &ModelState, data: &Dataset, prior: &PriorSpec, key: StreamKey) -> Result<ModelState> {
    gibbs_step_logistic_with(state, data, prior, &StepOptions::default(), key, &mut Counters::default())
}

/// One full sweep: tau, local scales, omega, beta.
pub fn gibbs_step_logistic_with(
    state: &ModelState,
    data: &Dataset,
    prior: &PriorSpec,
    opts: &StepOptions,
    key: StreamKey,
    counters: &mut Counters,
) -> Result<ModelState> {
    if state.beta.len() != data.p() {
        return Err(Error::Domain("state and data dimensions differ".into()));
    }
    let mut next = state.clone();
    update_scales(&mut next, data, prior, opts, key, counters)?;
    next.omega = Some(draw_omega(&next.beta, data, key, counters));
    next.beta = beta_draw(&next, data, prior, opts, key)?;
    Ok(next)
}

/// Runs `config.n_chains` logistic chains in parallel.
pub fn run_chain_logistic(data: &Dataset, prior: &PriorSpec, config: &SamplerConfig) -> Result<RunOutput> {
    run_chains(ModelKind::Logistic, data, prior, config)
}
