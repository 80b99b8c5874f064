//! Bridge local-scale update.
//!
//! Given `beta / tau`, the variable `X = lambda^-2 / 2` has density
//! proportional to `exp(-(beta/tau)^2 X) pi_st(X)` with `pi_st` positive
//! stable of index `alpha / 2`. At `alpha = 1` this tilted law is inverse
//! Gaussian.

use super::stable;
use crate::error::{domain, Result};
use rand::Rng;
use rand_distr::{Distribution, InverseGaussian};
use serde::{Deserialize, Serialize};

/// Tilted stable parameters on the `X = lambda^-2 / 2` scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TiltedStableParams {
    pub alpha: f64,
    pub tilt: f64,
    pub scale: f64,
}

impl TiltedStableParams {
    pub fn new(beta_over_tau: f64, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return domain(format!("bridge exponent must lie in (0, 1), got {alpha}"));
        }
        Ok(Self {
            alpha,
            tilt: beta_over_tau * beta_over_tau,
            scale: (alpha * std::f64::consts::PI / 4.0).cos().powf(2.0 / alpha),
        })
    }
}

/// Which algorithm updates the bridge local scales.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BridgeLocalMethod {
    #[default]
    TiltedStable,
    Slice,
}

/// Draws `lambda` from `pi(lambda | beta, tau)` for the bridge with `0 < alpha < 1`.
pub fn sample_bridge_local<R: Rng + ?Sized>(beta_over_tau: f64, alpha: f64, rng: &mut R) -> Result<f64> {
    TiltedStableParams::new(beta_over_tau, alpha)?;
    draw_bridge_local(beta_over_tau, alpha, rng).map(|(l, _)| l)
}

/// Draw used inside the chains; also handles `alpha = 1` and reports the
/// number of rejected proposals.
pub(crate) fn draw_bridge_local<R: Rng + ?Sized>(beta_over_tau: f64, alpha: f64, rng: &mut R) -> Result<(f64, u64)> {
    let t = beta_over_tau * beta_over_tau;
    let (log_x, rejections) = if alpha == 1.0 && t > 0.0 {
        let mean = 0.5 / t.sqrt();
        let ig = InverseGaussian::new(mean, 0.5).map_err(|e| crate::Error::Computation(e.to_string()))?;
        (ig.sample(rng).ln(), 0)
    } else {
        stable::sample_tilted_log(0.5 * alpha, t, rng)?
    };
    Ok(((-0.5 * (std::f64::consts::LN_2 + log_x)).exp(), rejections))
}

/// Log-lambda stepping-out slice update for the bridge local scale.
pub(crate) fn slice_bridge_local<R: Rng + ?Sized>(
    current: f64,
    beta_over_tau: f64,
    alpha: f64,
    rng: &mut R,
) -> Result<(f64, u64)> {
    let family = crate::model::Family::Bridge { alpha };
    let t = beta_over_tau * beta_over_tau;
    // density of u = log lambda: lambda^-1 exp(-t / 2 lambda^2) pi_loc(lambda) * lambda
    let log_target = |u: f64| {
        let l = u.exp();
        -0.5 * t / (l * l) + crate::model::log_local_density(family, l)
    };
    let (u, expansions) = super::tau::slice_step(current.ln(), log_target, f64::NEG_INFINITY, f64::INFINITY, rng)?;
    Ok((u.exp(), expansions))
}

/// CDF of `lambda | beta, tau` at `lambda`, by quadrature.
pub fn bridge_local_cdf(lambda: f64, beta_over_tau: f64, alpha: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Ok(0.0);
    }
    // P(lambda <= l) = P(X >= 1 / 2 l^2)
    let x = 0.5 / (lambda * lambda);
    let t = beta_over_tau * beta_over_tau;
    let a = 0.5 * alpha;
    if t == 0.0 {
        return Ok(stable::sf(x, a));
    }
    Ok(1.0 - stable::tilted_cdf(x, a, t)?)
}

/// Total variation between `lambda | beta, tau` and the normalized
/// `lambda^-1 pi_loc(lambda)` limit.
///
/// The density ratio `e^{-tX} / e^{-t^a}` crosses one at `X* = t^(a-1)`, so
/// the distance is `int_0^{X*} e^{-tX} dF / e^{-t^a} - F(X*)`.
pub fn bridge_local_tv_to_limit(beta_over_tau: f64, alpha: f64) -> Result<f64> {
    TiltedStableParams::new(beta_over_tau, alpha)?;
    let t = beta_over_tau * beta_over_tau;
    if t == 0.0 {
        return Ok(0.0);
    }
    let a = 0.5 * alpha;
    let crossing = t.powf(a - 1.0);
    let (head, norm) = stable::tilted_partial_mass(crossing, a, t)?;
    Ok(head / norm - stable::cdf(crossing, a))
}
