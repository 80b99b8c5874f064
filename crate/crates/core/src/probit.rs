//! Conjugate Gibbs sampler for regularized probit regression.
//!
//! Given the scales, `beta | y` is unified skew-normal. Writing `S` for the
//! design with rows `(2 y_i - 1) x_i` and `D` for the prior precision, an
//! exact draw is obtained by sampling `z ~ N(0, I + S D^-1 S')` restricted
//! to the positive orthant, then `beta | z ~ N(M^-1 S' z, M^-1)` with
//! `M = D + S'S`.

use crate::chain::{run_chains, update_scales, Counters, ModelKind, RunOutput, SamplerConfig, StepOptions};
use crate::error::{config, Error, Result};
use crate::logistic::prior_precision;
use crate::model::{Dataset, ModelState, PriorSpec};
use crate::rng::{tag, StreamKey};
use crate::special::log_norm_cdf;
use nalgebra::{Cholesky, DMatrix, DVector};
use rand_distr::{Distribution, StandardNormal};

/// Pieces of the skew-normal conditional of beta.
#[derive(Debug, Clone)]
pub struct SunConditional {
    pub prior_precision: Vec<f64>,
    pub signed_design: DMatrix<f64>,
    /// Cholesky factor of `D + S'S`.
    pub gaussian_factor: DMatrix<f64>,
}

impl SunConditional {
    pub fn new(tau: f64, lambda: &[f64], prior: &PriorSpec, data: &Dataset) -> Result<Self> {
        let precision = prior_precision(tau, lambda, prior, data);
        if precision.iter().any(|&d| !(d > 0.0 && d.is_finite())) {
            return config("probit sampler needs a proper prior on every coefficient (finite intercept slab)");
        }
        let mut s = data.x().clone();
        for (i, &y) in data.y().iter().enumerate() {
            if y == 0 {
                s.row_mut(i).neg_mut();
            }
        }
        let mut m = s.tr_mul(&s);
        for (j, &d) in precision.iter().enumerate() {
            m[(j, j)] += d;
        }
        let chol = Cholesky::new(m).ok_or_else(|| Error::Computation("D + S'S is not positive definite".into()))?;
        Ok(Self { prior_precision: precision, signed_design: s, gaussian_factor: chol.l() })
    }
}

/// Sum of `log Phi((2 y_i - 1) x_i' beta)`.
pub fn probit_loglik(beta: &[f64], data: &Dataset) -> f64 {
    let eta = data.x() * DVector::from_column_slice(beta);
    eta.iter()
        .zip(data.y())
        .map(|(&e, &y)| log_norm_cdf(if y == 1 { e } else { -e }))
        .sum()
}

/// Exact draw from `pi(beta | tau, lambda, y, X)` under the probit likelihood.
pub fn sample_beta_sun(tau: f64, lambda: &[f64], prior: &PriorSpec, data: &Dataset, key: StreamKey) -> Result<Vec<f64>> {
    sun_draw(tau, lambda, prior, data, &StepOptions::default(), key, &mut Counters::default())
}

pub(crate) fn sun_draw(
    tau: f64,
    lambda: &[f64],
    prior: &PriorSpec,
    data: &Dataset,
    opts: &StepOptions,
    key: StreamKey,
    counters: &mut Counters,
) -> Result<Vec<f64>> {
    let sun = SunConditional::new(tau, lambda, prior, data)?;
    let n = data.n();
    let p = data.p();
    let s = &sun.signed_design;
    let sd: Vec<f64> = sun.prior_precision.iter().map(|d| d.sqrt().recip()).collect();
    let mut rng = key.child(tag::SUN).rng();
    let mut z = DVector::<f64>::zeros(n);
    let mut g = DVector::<f64>::zeros(p);
    let mut tries = 0u64;
    // z = S D^-1/2 g + e with all coordinates positive
    loop {
        if tries >= opts.sun_budget {
            return Err(Error::Computation(format!(
                "truncated-normal rejection budget of {} proposals exhausted with n = {n}; use fewer observations or a different method",
                opts.sun_budget
            )));
        }
        tries += 1;
        for j in 0..p {
            let e: f64 = StandardNormal.sample(&mut rng);
            g[j] = sd[j] * e;
        }
        let base = s * &g;
        let mut ok = true;
        for i in 0..n {
            let e: f64 = StandardNormal.sample(&mut rng);
            z[i] = base[i] + e;
            if z[i] <= 0.0 {
                ok = false;
                break;
            }
        }
        if ok {
            break;
        }
    }
    counters.sun_draws += 1;
    counters.sun_rejections += tries - 1;
    let l = &sun.gaussian_factor;
    let chol = Cholesky::pack_dirty(l.clone());
    let mean = chol.solve(&s.tr_mul(&z));
    let mut xi = DVector::<f64>::zeros(p);
    for j in 0..p {
        xi[j] = StandardNormal.sample(&mut rng);
    }
    let noise = l
        .tr_solve_lower_triangular(&xi)
        .ok_or_else(|| Error::Computation("singular Cholesky factor".into()))?;
    Ok((mean + noise).iter().copied().collect())
}

/// One sweep with default options.
pub fn gibbs_step_probit(state: &ModelState, data: &Dataset, prior: &PriorSpec, key: StreamKey) -> Result<ModelState> {
    gibbs_step_probit_with(state, data, prior, &StepOptions::default(), key, &mut Counters::default())
}

/// One sweep: tau, local scales, beta.
pub fn gibbs_step_probit_with(
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
    next.omega = None;
    update_scales(&mut next, data, prior, opts, key, counters)?;
    next.beta = sun_draw(next.tau, &next.lambda, prior, data, opts, key, counters)?;
    Ok(next)
}

/// Runs `config.n_chains` probit chains in parallel.
pub fn run_chain_probit(data: &Dataset, prior: &PriorSpec, config: &SamplerConfig) -> Result<RunOutput> {
    run_chains(ModelKind::Probit, data, prior, config)
}
