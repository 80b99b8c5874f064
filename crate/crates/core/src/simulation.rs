//! The "large n, weak signal" data-generating process.
//!
//! Feature frequencies are `w_j = W_j / 2` with `W_j ~ Beta(a, b)`,
//! `x_ij ~ Bernoulli(w_j)`, the first `n_signals` coefficients equal
//! `signal_value` and the rest are zero, and
//! `P(y_i = 1) = logistic(-(beta_0 + x_i' beta))`. An all-ones column is
//! placed first so that fitted models estimate the intercept; on the fitted
//! scale the true coefficients are `-(beta_0, beta)`.

use crate::error::{config, Result};
use crate::model::Dataset;
use crate::rng::{tag, StreamKey};
use crate::special::inv_logit;
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Beta, Distribution, Open01};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n: usize,
    pub p: usize,
    pub n_signals: usize,
    pub signal_value: f64,
    pub intercept: f64,
    pub beta_shape_a: f64,
    pub beta_shape_b: f64,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            n: 2500,
            p: 500,
            n_signals: 10,
            signal_value: 1.0,
            intercept: 1.5,
            beta_shape_a: 0.5,
            beta_shape_b: 2.0,
            seed: 0,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.p == 0 {
            return config("n and p must be positive");
        }
        if self.n_signals > self.p {
            return config(format!("n_signals = {} exceeds p = {}", self.n_signals, self.p));
        }
        if !(self.beta_shape_a > 0.0 && self.beta_shape_b > 0.0) {
            return config("Beta shapes must be positive");
        }
        if !(self.signal_value.is_finite() && self.intercept.is_finite()) {
            return config("signal value and intercept must be finite");
        }
        Ok(())
    }
}

/// Ground truth of a simulated dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimTruth {
    /// Coefficients of the `p` features in the generating convention.
    pub beta: Vec<f64>,
    pub intercept: f64,
    pub frequencies: Vec<f64>,
}

impl SimTruth {
    /// Coefficients on the fitted scale, intercept first: `-(beta_0, beta)`.
    pub fn model_coefficients(&self) -> Vec<f64> {
        std::iter::once(-self.intercept).chain(self.beta.iter().map(|b| -b)).collect()
    }

    pub fn signal_mask(&self) -> Vec<bool> {
        self.beta.iter().map(|&b| b != 0.0).collect()
    }
}

/// Generates a dataset with the intercept column at index 0.
pub fn generate_weak_signal_dataset(config: &SimConfig, key: StreamKey) -> Result<(Dataset, SimTruth)> {
    config.validate()?;
    let (n, p) = (config.n, config.p);
    let beta_law = Beta::new(config.beta_shape_a, config.beta_shape_b)
        .map_err(|e| crate::Error::Config(format!("invalid Beta law: {e}")))?;
    let freq_key = key.child(tag::SIM_FREQUENCY);
    let col_key = key.child(tag::SIM_COLUMN);
    let columns: Vec<(f64, Vec<f64>)> = (0..p)
        .into_par_iter()
        .map(|j| {
            let w = 0.5 * beta_law.sample(&mut freq_key.child(j as u64).rng());
            let mut rng = col_key.child(j as u64).rng();
            let col = (0..n).map(|_| if rng.random::<f64>() < w { 1.0 } else { 0.0 }).collect();
            (w, col)
        })
        .collect();
    let beta: Vec<f64> = (0..p).map(|j| if j < config.n_signals { config.signal_value } else { 0.0 }).collect();
    let mut x = DMatrix::<f64>::zeros(n, p + 1);
    x.column_mut(0).fill(1.0);
    let mut frequencies = Vec::with_capacity(p);
    for (j, (w, col)) in columns.into_iter().enumerate() {
        frequencies.push(w);
        x.column_mut(j + 1).copy_from_slice(&col);
    }
    let mut rng = key.child(tag::SIM_OUTCOME).rng();
    let y: Vec<u8> = (0..n)
        .map(|i| {
            let lin = config.intercept + (0..p).map(|j| x[(i, j + 1)] * beta[j]).sum::<f64>();
            let u: f64 = rng.sample(Open01);
            u8::from(u < inv_logit(-lin))
        })
        .collect();
    let data = Dataset::new(x, y, true)?;
    Ok((data, SimTruth { beta, intercept: config.intercept, frequencies }))
}

/// Generates a dataset from `config.seed`.
pub fn simulate(config: &SimConfig) -> Result<(Dataset, SimTruth)> {
    generate_weak_signal_dataset(config, StreamKey::new(config.seed))
}
