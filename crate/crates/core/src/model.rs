//! Data model, prior specification and the regularized prior identities.

use crate::error::{config, domain, Error, Result};
use crate::scale::stable;
use crate::special::ln_gamma;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_2_PI, PI};

/// Design matrix and binary outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    x: DMatrix<f64>,
    y: Vec<u8>,
    has_intercept: bool,
}

impl Dataset {
    pub fn new(x: DMatrix<f64>, y: Vec<u8>, has_intercept: bool) -> Result<Self> {
        if x.nrows() == 0 || x.ncols() == 0 {
            return Err(Error::Data("design matrix must have at least one row and one column".into()));
        }
        Self::validated(x, y, has_intercept)
    }

    /// A dataset with no observations, leaving only the prior.
    pub fn prior_only(p: usize, has_intercept: bool) -> Result<Self> {
        if p == 0 {
            return Err(Error::Data("p must be at least 1".into()));
        }
        Ok(Self { x: DMatrix::zeros(0, p), y: Vec::new(), has_intercept })
    }

    fn validated(x: DMatrix<f64>, y: Vec<u8>, has_intercept: bool) -> Result<Self> {
        if x.nrows() != y.len() {
            return Err(Error::Data(format!(
                "X has {} rows but y has {} entries",
                x.nrows(),
                y.len()
            )));
        }
        if let Some(bad) = y.iter().find(|&&v| v > 1) {
            return Err(Error::Data(format!("outcome {bad} is not 0 or 1")));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Data("X contains non-finite entries".into()));
        }
        if has_intercept && x.column(0).iter().any(|&v| v != 1.0) {
            return Err(Error::Data("intercept column 0 is not all ones".into()));
        }
        Ok(Self { x, y, has_intercept })
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn y(&self) -> &[u8] {
        &self.y
    }

    pub fn has_intercept(&self) -> bool {
        self.has_intercept
    }

    /// y - 1/2 as a vector.
    pub fn centered_y(&self) -> DVector<f64> {
        DVector::from_iterator(self.n(), self.y.iter().map(|&v| v as f64 - 0.5))
    }

    /// Indices of the coordinates that carry local and global shrinkage.
    pub fn shrunk_indices(&self) -> std::ops::Range<usize> {
        usize::from(self.has_intercept)..self.p()
    }

    /// Swaps two columns; used for relabeling checks.
    pub fn swap_columns(&self, a: usize, b: usize) -> Result<Self> {
        let mut x = self.x.clone();
        x.swap_columns(a, b);
        Self::validated(x, self.y.clone(), self.has_intercept)
    }
}

/// Shrinkage family of the local scales.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Bridge { alpha: f64 },
    Horseshoe,
}

/// Gamma prior on phi = tau^(-kappa) with kappa = alpha for the bridge and
/// kappa = 1 otherwise; shape = rate = 0 is the reference prior 1/tau.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GlobalScalePrior {
    pub shape: f64,
    pub rate: f64,
    pub mean_abs_lo: f64,
    pub mean_abs_hi: f64,
    pub tau_min: f64,
    pub tau_max: f64,
}

impl Default for GlobalScalePrior {
    fn default() -> Self {
        Self {
            shape: 0.0,
            rate: 0.0,
            mean_abs_lo: 1e-6,
            mean_abs_hi: 1.0,
            tau_min: 1e-6,
            tau_max: 1.0,
        }
    }
}

impl GlobalScalePrior {
    pub fn validate(&self) -> Result<()> {
        if !(self.shape >= 0.0 && self.rate >= 0.0 && self.shape.is_finite() && self.rate.is_finite()) {
            return config("global prior shape and rate must be finite and nonnegative");
        }
        if !(self.mean_abs_lo > 0.0 && self.mean_abs_lo < self.mean_abs_hi && self.mean_abs_hi.is_finite()) {
            return config(format!(
                "need 0 < mean_abs_lo < mean_abs_hi < inf, got ({}, {})",
                self.mean_abs_lo, self.mean_abs_hi
            ));
        }
        if !(self.tau_min > 0.0 && self.tau_min < self.tau_max) {
            return config(format!(
                "need 0 < tau_min < tau_max, got [{}, {}]",
                self.tau_min, self.tau_max
            ));
        }
        Ok(())
    }
}

/// Full prior specification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriorSpec {
    pub family: Family,
    pub slab: f64,
    pub global: GlobalScalePrior,
    pub intercept_slab: f64,
}

impl PriorSpec {
    pub fn bridge(alpha: f64, slab: f64) -> Self {
        Self {
            family: Family::Bridge { alpha },
            slab,
            global: GlobalScalePrior::default(),
            intercept_slab: 10.0,
        }
    }

    pub fn horseshoe(slab: f64) -> Self {
        Self {
            family: Family::Horseshoe,
            slab,
            global: GlobalScalePrior::default(),
            intercept_slab: 10.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.slab > 0.0 && self.slab.is_finite()) {
            return config(format!("slab width must be positive and finite, got {}", self.slab));
        }
        if !(self.intercept_slab > 0.0) {
            return config(format!("intercept slab must be positive, got {}", self.intercept_slab));
        }
        if let Family::Bridge { alpha } = self.family {
            if !(alpha > 0.0 && alpha <= 1.0) {
                return config(format!("bridge exponent must lie in (0, 1], got {alpha}"));
            }
        }
        self.global.validate()
    }

    /// Exponent kappa in phi = tau^(-kappa).
    pub fn global_exponent(&self) -> f64 {
        match self.family {
            Family::Bridge { alpha } => alpha,
            Family::Horseshoe => 1.0,
        }
    }

    /// Support of tau: induced by the mean-absolute bounds for the bridge,
    /// `[tau_min, tau_max]` otherwise.
    pub fn tau_support(&self) -> (f64, f64) {
        match self.family {
            Family::Bridge { alpha } => {
                let m = bridge_mean_abs_factor(alpha);
                (self.global.mean_abs_lo / m, self.global.mean_abs_hi / m)
            }
            Family::Horseshoe => (self.global.tau_min, self.global.tau_max),
        }
    }

    /// Log of pi_glo(tau) up to a constant, -inf outside the support.
    pub fn log_global_density(&self, tau: f64) -> f64 {
        let (lo, hi) = self.tau_support();
        if tau < lo || tau > hi {
            return f64::NEG_INFINITY;
        }
        let kappa = self.global_exponent();
        -(self.global.shape * kappa + 1.0) * tau.ln() - self.global.rate * tau.powf(-kappa)
    }

    /// Log of pi_loc(lambda), normalized.
    pub fn log_local_density(&self, lambda: f64) -> f64 {
        log_local_density(self.family, lambda)
    }
}

/// E[|beta| | tau] / tau under the bridge prior, Gamma(2/alpha)/Gamma(1/alpha).
pub fn bridge_mean_abs_factor(alpha: f64) -> f64 {
    (ln_gamma(2.0 / alpha) - ln_gamma(1.0 / alpha)).exp()
}

/// Normalized log density of the local scale.
///
/// Horseshoe: half-Cauchy `(2/pi)/(1+lambda^2)`. Bridge: proportional to
/// `lambda^-2 pi_st(lambda^-2 / 2)` with `pi_st` the positive stable law of
/// index alpha/2. At alpha = 1 the bridge mixing law is the Rayleigh-type
/// density of the Laplace prior.
pub fn log_local_density(family: Family, lambda: f64) -> f64 {
    if !(lambda > 0.0) {
        return f64::NEG_INFINITY;
    }
    match family {
        Family::Horseshoe => FRAC_2_PI.ln() - (lambda * lambda).ln_1p(),
        Family::Bridge { alpha } => {
            let a = 0.5 * alpha;
            // E[lambda] under the mixing law of lambda = (2S)^(-1/2)
            let log_norm = -0.5 * std::f64::consts::LN_2 + ln_gamma(1.0 + 1.0 / alpha) - ln_gamma(1.5);
            let x = 0.5 / (lambda * lambda);
            let log_st = if alpha == 1.0 {
                // Levy density with Laplace transform exp(-sqrt(s))
                -0.5 * (4.0 * PI).ln() - 1.5 * x.ln() - 0.25 / x
            } else {
                stable::log_pdf(x, a)
            };
            -2.0 * lambda.ln() + log_st - log_norm
        }
    }
}

/// Current Gibbs state; `omega` is present only in the logistic chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelState {
    pub beta: Vec<f64>,
    pub lambda: Vec<f64>,
    pub tau: f64,
    pub omega: Option<Vec<f64>>,
}

impl ModelState {
    pub fn validate(&self) -> Result<()> {
        if self.beta.len() != self.lambda.len() {
            return Err(Error::Data("beta and lambda lengths differ".into()));
        }
        if self.beta.iter().any(|v| !v.is_finite()) {
            return Err(Error::Computation("non-finite beta".into()));
        }
        if self.lambda.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
            return Err(Error::Computation("local scale not positive and finite".into()));
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::Computation(format!("global scale {} not positive and finite", self.tau)));
        }
        if let Some(omega) = &self.omega {
            if omega.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
                return Err(Error::Computation("Polya-Gamma variable not positive and finite".into()));
            }
        }
        Ok(())
    }
}

/// Conditional prior variance (zeta^-2 + tau^-2 lambda^-2)^-1.
pub fn regularized_conditional_variance(tau: f64, lambda: f64, zeta: f64) -> Result<f64> {
    for (name, v) in [("tau", tau), ("lambda", lambda), ("zeta", zeta)] {
        if !(v > 0.0) || v.is_nan() {
            return domain(format!("{name} must be positive, got {v}"));
        }
    }
    let local = tau * lambda;
    Ok(1.0 / (zeta.powi(-2) + local.powi(-2)))
}

/// Log of pi_glo(tau) prod_j (tau lambda_j)^-1 exp(-beta_j^2 / 2 tau^2 lambda_j^2) pi_loc(lambda_j).
pub fn scale_conditional_logdensity(tau: f64, lambda: &[f64], beta: &[f64], prior: &PriorSpec) -> Result<f64> {
    if lambda.len() != beta.len() {
        return domain("lambda and beta lengths differ");
    }
    if !(tau > 0.0) {
        return domain(format!("tau must be positive, got {tau}"));
    }
    let mut total = prior.log_global_density(tau);
    for (&l, &b) in lambda.iter().zip(beta) {
        if !(l > 0.0) {
            return domain(format!("local scale must be positive, got {l}"));
        }
        let s = tau * l;
        total += -s.ln() - 0.5 * (b / s).powi(2) + prior.log_local_density(l);
    }
    Ok(total)
}

/// Bridge marginal log density -log tau - |beta/tau|^alpha.
pub fn bridge_marginal_logdensity(beta: f64, tau: f64, alpha: f64) -> Result<f64> {
    if !(tau > 0.0) {
        return domain(format!("tau must be positive, got {tau}"));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return domain(format!("alpha must lie in (0, 1], got {alpha}"));
    }
    Ok(-tau.ln() - (beta / tau).abs().powf(alpha))
}

/// Log of N(beta; 0, v) (1 + tau^2 lambda^2 / zeta^2)^(-1/2) pi_loc(lambda)
/// with v the regularized conditional variance; `zeta = inf` is allowed.
pub fn regularized_joint_logdensity_alt(
    beta: f64,
    lambda: f64,
    tau: f64,
    zeta: f64,
    prior: &PriorSpec,
) -> Result<f64> {
    let v = regularized_conditional_variance(tau, lambda, zeta)?;
    let ratio = tau * lambda / zeta;
    Ok(-0.5 * (2.0 * PI * v).ln() - 0.5 * beta * beta / v - 0.5 * (ratio * ratio).ln_1p()
        + prior.log_local_density(lambda))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variance_examples() {
        assert_eq!(regularized_conditional_variance(1.0, 2.0, 2.0).unwrap(), 2.0);
        let v = regularized_conditional_variance(1e9, 1e9, 3.0).unwrap();
        assert!((v - 9.0).abs() < 1e-12);
        assert!(regularized_conditional_variance(0.0, 1.0, 1.0).is_err());
        assert!(regularized_conditional_variance(1.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn bridge_marginal_examples() {
        assert_eq!(bridge_marginal_logdensity(0.0, 3.0, 0.4).unwrap(), -(3f64.ln()));
        assert_eq!(bridge_marginal_logdensity(2.0, 1.0, 1.0).unwrap(), -2.0);
        let v = bridge_marginal_logdensity(2.0, 2.0, 0.5).unwrap();
        assert!((v - (-(2f64.ln()) - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn horseshoe_scale_density_difference() {
        let prior = PriorSpec::horseshoe(1.0);
        let a = scale_conditional_logdensity(1.0, &[1.0], &[1.0], &prior).unwrap();
        let b = scale_conditional_logdensity(1.0, &[2.0], &[1.0], &prior).unwrap();
        let direct = |l: f64| (1.0 / l * (-0.5 / (l * l)).exp() / (1.0 + l * l)).ln();
        assert!(((a - b) - (direct(1.0) - direct(2.0))).abs() < 1e-14);
    }

    #[test]
    fn dataset_validation() {
        let x = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 1.0, -0.5]);
        assert!(Dataset::new(x.clone(), vec![0, 1], true).is_ok());
        assert!(Dataset::new(x.clone(), vec![0, 2], true).is_err());
        assert!(Dataset::new(x.clone(), vec![0], true).is_err());
        let bad = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, -0.5]);
        assert!(Dataset::new(bad, vec![0, 1], true).is_err());
    }

    #[test]
    fn prior_validation() {
        assert!(PriorSpec::bridge(0.5, 1.0).validate().is_ok());
        assert!(PriorSpec::bridge(1.5, 1.0).validate().is_err());
        assert!(PriorSpec::bridge(0.5, f64::INFINITY).validate().is_err());
        let mut p = PriorSpec::horseshoe(1.0);
        p.global.tau_min = 2.0;
        assert!(p.validate().is_err());
    }

    #[test]
    fn bridge_mean_abs_factor_values() {
        assert!((bridge_mean_abs_factor(1.0) - 1.0).abs() < 1e-14);
        // Gamma(4)/Gamma(2) = 6
        assert!((bridge_mean_abs_factor(0.5) - 6.0).abs() < 1e-12);
    }
}
