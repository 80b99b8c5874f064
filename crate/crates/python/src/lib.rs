//! Python bindings: data simulation, the two Gibbs samplers and a few of the
//! scalar samplers. Arrays cross the boundary as nested lists.

use nalgebra::DMatrix;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use regshrink::{Dataset, Error, PriorSpec, SamplerConfig, SimConfig, StreamKey};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Computation(_) | Error::Divergence { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn matrix(rows: &[Vec<f64>]) -> PyResult<DMatrix<f64>> {
    let n = rows.len();
    let p = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != p) {
        return Err(PyValueError::new_err("design rows have different lengths"));
    }
    Ok(DMatrix::from_fn(n, p, |i, j| rows[i][j]))
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

type Simulated = (Vec<Vec<f64>>, Vec<u8>, Vec<f64>);

/// Draws of one fit; `beta[c][t][j]` is coordinate `j` at kept draw `t` of chain `c`.
#[pyclass(module = "regshrink", get_all)]
struct FitResult {
    beta: Vec<Vec<Vec<f64>>>,
    tau: Vec<Vec<f64>>,
    lambda_draws: Option<Vec<Vec<Vec<f64>>>>,
    runtime_seconds: f64,
}

#[pymethods]
impl FitResult {
    /// Posterior means pooled over chains.
    fn posterior_mean(&self) -> Vec<f64> {
        let p = self.beta.first().and_then(|c| c.first()).map_or(0, Vec::len);
        let mut sum = vec![0.0; p];
        let mut count = 0usize;
        for draw in self.beta.iter().flatten() {
            for (s, b) in sum.iter_mut().zip(draw) {
                *s += b;
            }
            count += 1;
        }
        sum.into_iter().map(|s| s / count.max(1) as f64).collect()
    }

    fn __repr__(&self) -> String {
        let kept = self.tau.first().map_or(0, Vec::len);
        format!("FitResult(chains={}, kept={kept})", self.tau.len())
    }
}

/// Simulates a weak-signal dataset. Returns `(X, y, beta)` where `X` has an
/// intercept column first and `beta` is on the fitted scale.
#[pyfunction]
#[pyo3(signature = (n, p, n_signals=10, signal_value=1.0, intercept=1.5, freq_a=0.5, freq_b=2.0, seed=0))]
#[allow(clippy::too_many_arguments)]
fn simulate(
    n: usize,
    p: usize,
    n_signals: usize,
    signal_value: f64,
    intercept: f64,
    freq_a: f64,
    freq_b: f64,
    seed: u64,
) -> PyResult<Simulated> {
    let cfg = SimConfig { n, p, n_signals, signal_value, intercept, beta_shape_a: freq_a, beta_shape_b: freq_b, seed };
    let (data, truth) = regshrink::simulation::simulate(&cfg).map_err(to_py)?;
    Ok((rows(data.x()), data.y().to_vec(), truth.model_coefficients()))
}

/// Runs the Gibbs sampler. `model` is "logistic" or "probit", `prior` is
/// "bridge" or "horseshoe".
#[pyfunction]
#[pyo3(signature = (
    x, y, model="logistic", prior="bridge", alpha=0.5, slab=1.0, intercept=true, intercept_slab=10.0,
    iters=2000, burnin=1000, thin=1, chains=1, seed=0, fix_tau=None, store_lambda=false
))]
#[allow(clippy::too_many_arguments)]
fn fit(
    x: Vec<Vec<f64>>,
    y: Vec<u8>,
    model: &str,
    prior: &str,
    alpha: f64,
    slab: f64,
    intercept: bool,
    intercept_slab: f64,
    iters: usize,
    burnin: usize,
    thin: usize,
    chains: usize,
    seed: u64,
    fix_tau: Option<f64>,
    store_lambda: bool,
) -> PyResult<FitResult> {
    let data = Dataset::new(matrix(&x)?, y, intercept).map_err(to_py)?;
    let mut spec = match prior {
        "bridge" => PriorSpec::bridge(alpha, slab),
        "horseshoe" => PriorSpec::horseshoe(slab),
        other => return Err(PyValueError::new_err(format!("unknown prior {other:?}"))),
    };
    spec.intercept_slab = intercept_slab;
    let cfg = SamplerConfig {
        n_iter: iters,
        n_burnin: burnin,
        thin,
        seed,
        n_chains: chains,
        fix_tau,
        store_lambda,
        ..SamplerConfig::default()
    };
    let out = match model {
        "logistic" => regshrink::run_chain_logistic(&data, &spec, &cfg),
        "probit" => regshrink::run_chain_probit(&data, &spec, &cfg),
        other => return Err(PyValueError::new_err(format!("unknown model {other:?}"))),
    }
    .map_err(to_py)?;
    let lambda = store_lambda.then(|| out.chains.iter().filter_map(|c| c.lambda_draws.as_ref().map(rows)).collect());
    Ok(FitResult {
        beta: out.chains.iter().map(|c| rows(&c.beta_draws)).collect(),
        tau: out.chains.iter().map(|c| c.tau_draws.clone()).collect(),
        lambda_draws: lambda,
        runtime_seconds: out.runtime_seconds,
    })
}

/// `size` draws from PG(1, c).
#[pyfunction]
#[pyo3(signature = (c, size, seed=0))]
fn sample_pg(c: f64, size: usize, seed: u64) -> Vec<f64> {
    let mut rng = StreamKey::new(seed).rng();
    (0..size).map(|_| regshrink::sample_pg1(c, &mut rng)).collect()
}

#[pyfunction]
fn pg_mean(c: f64) -> f64 {
    regshrink::pg_mean(c)
}

/// Exact acceptance probability of the horseshoe local-scale rejection sampler.
#[pyfunction]
fn horseshoe_acceptance_rate(b: f64) -> PyResult<f64> {
    regshrink::scale::horseshoe_acceptance_rate(b).map_err(to_py)
}

/// `n` draws of the bridge local scale given `|beta| / tau`.
#[pyfunction]
#[pyo3(signature = (beta_over_tau, alpha, size, seed=0))]
fn sample_bridge_local(beta_over_tau: f64, alpha: f64, size: usize, seed: u64) -> PyResult<Vec<f64>> {
    let key = StreamKey::new(seed);
    (0..size)
        .map(|i| regshrink::scale::sample_bridge_local(beta_over_tau, alpha, &mut key.child(i as u64).rng()))
        .collect::<regshrink::Result<_>>()
        .map_err(to_py)
}

#[pymodule]
#[pyo3(name = "regshrink")]
fn regshrink_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", regshrink::VERSION)?;
    m.add_class::<FitResult>()?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(fit, m)?)?;
    m.add_function(wrap_pyfunction!(sample_pg, m)?)?;
    m.add_function(wrap_pyfunction!(pg_mean, m)?)?;
    m.add_function(wrap_pyfunction!(horseshoe_acceptance_rate, m)?)?;
    m.add_function(wrap_pyfunction!(sample_bridge_local, m)?)?;
    Ok(())
}
