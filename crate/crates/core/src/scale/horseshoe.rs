//! Horseshoe local-scale update.
//!
//! With `eta = lambda^-2` and `b = beta^2 / 2 tau^2`, the conditional is
//! `pi(eta) ∝ (1 + eta)^-1 exp(-b eta)`. On `psi = log(1 + eta)` the target
//! becomes `f_b(psi) = exp(-b e^psi)`, which is bounded by a simple envelope
//! `g_b` and sampled by rejection.

use crate::error::{domain, Error, Result};
use crate::quadrature::{integrate, QuadOptions};
use rand::Rng;
use rand_distr::{Distribution, Exp1, Open01};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvelopeBranch {
    BGe1,
    BLt1,
}

/// Envelope for `f_b(psi) = exp(-b e^psi)` on `psi >= 0`.
///
/// For `b >= 1`: `g_b(psi) = exp(-b (1 + psi))`. For `b < 1`, with
/// `L = log(1/b)`: `g_b = e^-b` on `[0, L]` and `exp(-1 - (psi - L))` beyond.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HorseshoeEnvelope {
    pub b: f64,
    pub branch: EnvelopeBranch,
    pub uniform_weight: f64,
}

impl HorseshoeEnvelope {
    pub fn new(b: f64) -> Result<Self> {
        if !(b > 0.0) || b.is_infinite() {
            return domain(format!("b must be positive and finite, got {b}"));
        }
        if b >= 1.0 {
            Ok(Self { b, branch: EnvelopeBranch::BGe1, uniform_weight: 0.0 })
        } else {
            let l = -b.ln();
            Ok(Self { b, branch: EnvelopeBranch::BLt1, uniform_weight: l / (l + (b - 1.0).exp()) })
        }
    }

    fn cut(&self) -> f64 {
        -self.b.ln()
    }

    pub fn log_target(&self, psi: f64) -> f64 {
        -self.b * psi.exp()
    }

    pub fn log_envelope(&self, psi: f64) -> f64 {
        match self.branch {
            EnvelopeBranch::BGe1 => -self.b * (1.0 + psi),
            EnvelopeBranch::BLt1 => {
                let l = self.cut();
                if psi <= l {
                    -self.b
                } else {
                    -1.0 - (psi - l)
                }
            }
        }
    }

    /// Total envelope mass, scaled by `e^b` when `b >= 1`.
    fn scaled_envelope_mass(&self) -> f64 {
        match self.branch {
            EnvelopeBranch::BGe1 => 1.0 / self.b,
            EnvelopeBranch::BLt1 => self.cut() * (-self.b).exp() + (-1f64).exp(),
        }
    }

    /// Proposes `psi` from the normalized envelope and returns it together
    /// with the log acceptance probability `log f_b(psi) - log g_b(psi)`.
    pub fn propose<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        let e: f64 = Exp1.sample(rng);
        match self.branch {
            EnvelopeBranch::BGe1 => {
                let psi = e / self.b;
                (psi, -self.b * (psi.exp_m1() - psi))
            }
            EnvelopeBranch::BLt1 => {
                let l = self.cut();
                let u: f64 = rng.sample(Open01);
                if u < self.uniform_weight {
                    let psi = l * (u / self.uniform_weight);
                    (psi, -self.b * psi.exp_m1())
                } else {
                    (l + e, -e.exp() + 1.0 + e)
                }
            }
        }
    }
}

/// Draws `eta` from `(1 + eta)^-1 exp(-b eta)`.
pub fn sample_horseshoe_eta<R: Rng + ?Sized>(b: f64, rng: &mut R) -> Result<f64> {
    sample_horseshoe_eta_counted(b, rng).map(|(eta, _)| eta)
}

/// As [`sample_horseshoe_eta`], also returning the number of proposals used.
pub fn sample_horseshoe_eta_counted<R: Rng + ?Sized>(b: f64, rng: &mut R) -> Result<(f64, u64)> {
    let env = HorseshoeEnvelope::new(b)?;
    let mut proposals = 0u64;
    loop {
        proposals += 1;
        let (psi, log_accept) = env.propose(rng);
        let e: f64 = Exp1.sample(rng);
        if -e <= log_accept {
            return Ok((psi.exp_m1(), proposals));
        }
    }
}

/// Log of `eta`, computed without cancellation for small `psi`.
pub fn log_eta_from_psi(psi: f64) -> f64 {
    psi + crate::special::log1mexp(psi)
}

/// Draws the local scale `lambda` given `b = beta^2 / 2 tau^2`.
pub fn sample_horseshoe_lambda<R: Rng + ?Sized>(b: f64, rng: &mut R) -> Result<(f64, u64)> {
    let (eta, proposals) = sample_horseshoe_eta_counted(b, rng)?;
    if !(eta > 0.0) {
        return Err(Error::Computation(format!("horseshoe draw eta = {eta} at b = {b:e}")));
    }
    Ok((eta.powf(-0.5), proposals))
}

/// Acceptance probability of the rejection sampler, the ratio of the
/// integrals of `f_b` and `g_b` over `psi >= 0`, by adaptive quadrature.
pub fn horseshoe_acceptance_rate(b: f64) -> Result<f64> {
    let env = HorseshoeEnvelope::new(b)?;
    let opts = QuadOptions { abs_tol: 1e-300, rel_tol: 1e-12, max_subdivisions: 4000 };
    let numerator = match env.branch {
        // e^b int exp(-b e^psi) = int exp(-b expm1(psi))
        EnvelopeBranch::BGe1 => tail_integral(|psi| (-b * psi.exp_m1()).exp(), 1.0 / b, opts)?,
        EnvelopeBranch::BLt1 => {
            let l = env.cut();
            let body = integrate(|psi| (-b * psi.exp()).exp(), 0.0, l, opts)?.value;
            body + tail_integral(|s| (-b * (s + l).exp()).exp(), 1.0, opts)?
        }
    };
    Ok(numerator / env.scaled_envelope_mass())
}

fn tail_integral<F: Fn(f64) -> f64>(f: F, first_width: f64, opts: QuadOptions) -> Result<f64> {
    let mut total = 0.0;
    let mut lo = 0.0;
    let mut width = first_width;
    for _ in 0..200 {
        let v = integrate(&f, lo, lo + width, opts)?.value;
        total += v;
        if v <= 1e-18 * total {
            return Ok(total);
        }
        lo += width;
        width *= 2.0;
    }
    Err(Error::Computation("acceptance integral tail did not decay".into()))
}
