//! Regularized global-local shrinkage priors for sparse binary regression.
//!
//! The crate provides Gibbs samplers for logistic regression (Polya-Gamma
//! augmentation) and probit regression (unified skew-normal conditional)
//! under Bayesian bridge and horseshoe priors whose coefficients are
//! additionally capped by a Gaussian slab of width `zeta`. Alongside the
//! samplers sit quadrature oracles for every non-standard conditional, a
//! simulator for weak-signal benchmark data and the usual chain diagnostics.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chain;
pub mod diagnostics;
pub mod error;
pub mod logistic;
pub mod model;
pub mod polya_gamma;
pub mod probit;
pub mod quadrature;
pub mod rng;
pub mod scale;
pub mod simulation;
pub mod special;

pub use chain::{ChainOutput, Counters, Init, RunOutput, SamplerConfig, StepOptions};
pub use error::{Error, Result};
pub use logistic::{gibbs_step_logistic, run_chain_logistic, sample_beta_conditional};
pub use model::{Dataset, Family, GlobalScalePrior, ModelState, PriorSpec};
pub use polya_gamma::{pg_mean, sample_pg1};
pub use probit::{gibbs_step_probit, probit_loglik, run_chain_probit, sample_beta_sun, SunConditional};
pub use rng::StreamKey;
pub use simulation::{generate_weak_signal_dataset, SimConfig, SimTruth};

/// Library version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
