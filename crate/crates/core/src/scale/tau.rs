//! Global-scale updates.
//!
//! The bridge uses the collapsed conjugate draw of `phi = tau^-alpha` from a
//! truncated gamma law. Other families draw `u = log tau` from its
//! log-concave conditional by tangent-envelope rejection; a stepping-out
//! slice update is available as an alternative.

use crate::error::{computation, config, domain, Error, Result};
use crate::model::{bridge_mean_abs_factor, GlobalScalePrior, PriorSpec};
use crate::special::{gamma_p, gamma_q, ln_gamma, log_add_exp};
use rand::Rng;
use rand_distr::{Distribution, Exp1, Open01};
use serde::{Deserialize, Serialize};

/// Which algorithm updates tau for non-bridge families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TauMethod {
    #[default]
    Exact,
    Slice,
}

const SLICE_WIDTH: f64 = 1.0;
const SLICE_MAX_STEPS: u32 = 50;

fn uniform<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(Open01)
}

/// Draws `x` in `[0, w]` with density proportional to `exp(s x)`.
fn truncated_exponential<R: Rng + ?Sized>(s: f64, w: f64, rng: &mut R) -> f64 {
    let u = uniform(rng);
    if w.is_infinite() {
        // s < 0 is guaranteed by the caller
        return u.ln() / s;
    }
    let sw = s * w;
    if sw.abs() < 1e-12 {
        return u * w;
    }
    if sw > 0.0 {
        // w + log(u + (1-u) e^{-sw}) / s
        let x = w + (u + (1.0 - u) * (-sw).exp()).ln() / s;
        x.clamp(0.0, w)
    } else {
        let x = (u * sw.exp_m1()).ln_1p() / s;
        x.clamp(0.0, w)
    }
}

/// Draws `Gamma(shape, rate)` truncated to `[lo, hi]`, returning the draw
/// and the number of rejected proposals (zero on the inverse-CDF path).
pub fn sample_truncated_gamma<R: Rng + ?Sized>(
    shape: f64,
    rate: f64,
    lo: f64,
    hi: f64,
    rng: &mut R,
) -> Result<(f64, u64)> {
    if !(shape > 0.0 && rate >= 0.0) {
        return domain(format!("invalid gamma parameters shape={shape} rate={rate}"));
    }
    if !(lo >= 0.0 && hi > lo) {
        return config(format!("empty truncation interval [{lo}, {hi}]"));
    }
    if rate == 0.0 {
        if hi.is_infinite() {
            return config("improper global-scale conditional: zero rate needs a finite upper bound");
        }
        // density proportional to x^(shape-1) on [lo, hi]
        let ratio = if lo == 0.0 { 0.0 } else { (shape * (lo / hi).ln()).exp() };
        let u = uniform(rng);
        let x = hi * ((ratio + u * (1.0 - ratio)).ln() / shape).exp();
        return Ok((x.clamp(lo, hi), 0));
    }
    let (ylo, yhi) = (rate * lo, rate * hi);
    let upper = ylo > shape;
    let mass = if upper {
        gamma_q(shape, ylo) - gamma_q(shape, yhi)
    } else {
        gamma_p(shape, yhi) - gamma_p(shape, ylo)
    };
    if !(mass > 1e-12) {
        let (y, rejections) = log_concave_gamma_rejection(shape, ylo, yhi, rng)?;
        return Ok(((y / rate).clamp(lo, hi), rejections));
    }
    let u = uniform(rng);
    let y = if upper {
        let target = gamma_q(shape, yhi) + u * mass;
        invert_monotone(|y| -gamma_q(shape, y), -target, shape, ylo, yhi)?
    } else {
        let target = gamma_p(shape, ylo) + u * mass;
        invert_monotone(|y| gamma_p(shape, y), target, shape, ylo, yhi)?
    };
    Ok(((y / rate).clamp(lo, hi), 0))
}

/// Solves `g(y) = target` for increasing `g` with derivative proportional
/// to the gamma density, by safeguarded Newton steps inside a bracket.
fn invert_monotone<G: Fn(f64) -> f64>(g: G, target: f64, shape: f64, lo: f64, hi: f64) -> Result<f64> {
    let log_norm = ln_gamma(shape);
    let density = |y: f64| ((shape - 1.0) * y.ln() - y - log_norm).exp();
    let mut a = lo;
    let mut b = if hi.is_infinite() {
        let mut b = (lo.max(shape)) * 2.0 + 10.0;
        while g(b) < target {
            b *= 2.0;
            if b > 1e300 {
                return computation("truncated gamma inversion failed to bracket");
            }
        }
        b
    } else {
        hi
    };
    let mut y = if shape > a && shape < b { shape } else { 0.5 * (a + b) };
    for _ in 0..300 {
        let gy = g(y);
        let diff = gy - target;
        if diff > 0.0 {
            b = y;
        } else {
            a = y;
        }
        let d = density(y);
        let mut next = if d > 0.0 { y - diff / d } else { f64::NAN };
        if !(next > a && next < b) {
            next = 0.5 * (a + b);
        }
        if (next - y).abs() <= 1e-14 * y.abs() || (b - a) <= 1e-14 * b.abs() {
            return Ok(next);
        }
        y = next;
    }
    Ok(y)
}

/// Rejection from a tangent envelope of `y^(k-1) e^-y` on `[lo, hi]`.
fn log_concave_gamma_rejection<R: Rng + ?Sized>(k: f64, lo: f64, hi: f64, rng: &mut R) -> Result<(f64, u64)> {
    let log_f = |y: f64| (k - 1.0) * y.ln() - y;
    let slope = |y: f64| (k - 1.0) / y - 1.0;
    let mode = (k - 1.0).max(0.0);
    // tangent line (anchor, slope); for k < 1 bound y^(k-1) by lo^(k-1)
    let (anchor, s, offset) = if k < 1.0 {
        (lo, -1.0, (k - 1.0) * lo.ln() - lo)
    } else if lo >= mode {
        (lo, slope(lo), log_f(lo))
    } else if hi <= mode {
        (hi, slope(hi), log_f(hi))
    } else {
        (mode, 0.0, log_f(mode))
    };
    let width = hi - lo;
    let mut rejections = 0u64;
    for _ in 0..1_000_000 {
        let x = truncated_exponential(s, width, rng);
        let y = lo + x;
        let log_env = offset + s * (y - anchor);
        let e: f64 = Exp1.sample(rng);
        if log_f(y) - log_env >= -e {
            return Ok((y, rejections));
        }
        rejections += 1;
    }
    computation("truncated gamma rejection exceeded its budget")
}

/// Collapsed bridge update: `phi = tau^-alpha ~ Gamma(s + p/alpha, r + sum |beta_j|^alpha)`
/// truncated so that `mean_abs_lo <= E[|beta| | tau] <= mean_abs_hi`.
pub fn sample_tau_bridge_collapsed<R: Rng + ?Sized>(
    beta: &[f64],
    alpha: f64,
    prior: &GlobalScalePrior,
    rng: &mut R,
) -> Result<f64> {
    sample_tau_bridge_counted(beta, alpha, prior, rng).map(|(t, _)| t)
}

pub(crate) fn sample_tau_bridge_counted<R: Rng + ?Sized>(
    beta: &[f64],
    alpha: f64,
    prior: &GlobalScalePrior,
    rng: &mut R,
) -> Result<(f64, u64)> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return domain(format!("bridge exponent must lie in (0, 1], got {alpha}"));
    }
    prior.validate()?;
    let p = beta.len() as f64;
    let shape = prior.shape + p / alpha;
    let rate = prior.rate + beta.iter().map(|b| b.abs().powf(alpha)).sum::<f64>();
    let log_m = bridge_mean_abs_factor(alpha).ln();
    let log_tau_lo = prior.mean_abs_lo.ln() - log_m;
    let log_tau_hi = prior.mean_abs_hi.ln() - log_m;
    let phi_lo = (-alpha * log_tau_hi).exp();
    let phi_hi = (-alpha * log_tau_lo).exp();
    if !(phi_hi > phi_lo) {
        return config("empty truncation interval for the global scale");
    }
    let (phi, rejections) = sample_truncated_gamma(shape, rate, phi_lo, phi_hi, rng)?;
    let log_tau = (-phi.ln() / alpha).clamp(log_tau_lo, log_tau_hi);
    // keep the implied mean |beta| inside its bounds despite rounding
    let m = log_m.exp();
    let mut tau = log_tau.exp();
    while tau * m > prior.mean_abs_hi {
        tau = tau.next_down();
    }
    while tau * m < prior.mean_abs_lo {
        tau = tau.next_up();
    }
    Ok((tau, rejections))
}

/// Log density of `u = log tau` given `beta, lambda` and its derivative.
fn log_tau_conditional(u: f64, kappa: f64, prior: &GlobalScalePrior, p: f64, ss: f64) -> (f64, f64) {
    let e_k = (-kappa * u).exp();
    let e_2 = (-2.0 * u).exp();
    let h = -prior.shape * kappa * u - prior.rate * e_k - p * u - 0.5 * ss * e_2;
    let dh = -prior.shape * kappa + prior.rate * kappa * e_k - p + ss * e_2;
    (h, dh)
}

fn tau_inputs(beta: &[f64], lambda: &[f64], prior: &PriorSpec) -> Result<(f64, f64, f64, f64)> {
    if beta.len() != lambda.len() {
        return domain("beta and lambda lengths differ");
    }
    let (lo, hi) = prior.tau_support();
    if !(lo > 0.0 && lo < hi) {
        return config(format!("global-scale support [{lo}, {hi}] is empty"));
    }
    let ss: f64 = beta.iter().zip(lambda).map(|(b, l)| (b / l).powi(2)).sum();
    Ok((lo.ln(), hi.ln(), beta.len() as f64, ss))
}

/// Draws tau from `pi_glo(tau) prod_j tau^-1 exp(-beta_j^2 / 2 tau^2 lambda_j^2)`
/// restricted to the global-scale support.
pub fn sample_tau_conditional<R: Rng + ?Sized>(
    beta: &[f64],
    lambda: &[f64],
    prior: &PriorSpec,
    rng: &mut R,
) -> Result<f64> {
    sample_tau_conditional_counted(beta, lambda, prior, rng).map(|(t, _)| t)
}

pub(crate) fn sample_tau_conditional_counted<R: Rng + ?Sized>(
    beta: &[f64],
    lambda: &[f64],
    prior: &PriorSpec,
    rng: &mut R,
) -> Result<(f64, u64)> {
    let (ulo, uhi, p, ss) = tau_inputs(beta, lambda, prior)?;
    let kappa = prior.global_exponent();
    let g = prior.global;
    let (u, rejections) = sample_log_concave(|u| log_tau_conditional(u, kappa, &g, p, ss), ulo, uhi, rng)?;
    Ok((u.exp().clamp(ulo.exp(), uhi.exp()), rejections))
}

/// Stepping-out slice update of tau on the log scale, starting from `current`.
pub fn slice_tau_update<R: Rng + ?Sized>(
    current: f64,
    beta: &[f64],
    lambda: &[f64],
    prior: &PriorSpec,
    rng: &mut R,
) -> Result<(f64, u64)> {
    let (ulo, uhi, p, ss) = tau_inputs(beta, lambda, prior)?;
    let kappa = prior.global_exponent();
    let g = prior.global;
    let start = current.ln().clamp(ulo, uhi);
    let (u, expansions) = slice_step(start, |u| log_tau_conditional(u, kappa, &g, p, ss).0, ulo, uhi, rng)?;
    Ok((u.exp().clamp(ulo.exp(), uhi.exp()), expansions))
}

/// One stepping-out and shrinkage slice update (initial width 1, at most
/// 50 steps), restricted to `[lo, hi]`. Returns the new point and the
/// number of interval expansions.
pub(crate) fn slice_step<F: Fn(f64) -> f64, R: Rng + ?Sized>(
    x0: f64,
    log_f: F,
    lo: f64,
    hi: f64,
    rng: &mut R,
) -> Result<(f64, u64)> {
    let f0 = log_f(x0);
    if !f0.is_finite() {
        return computation(format!("slice sampler started at a point of zero density ({x0})"));
    }
    let e: f64 = Exp1.sample(rng);
    let level = f0 - e;
    let mut left = x0 - SLICE_WIDTH * uniform(rng);
    let mut right = left + SLICE_WIDTH;
    let mut j = (SLICE_MAX_STEPS as f64 * uniform(rng)).floor() as u32;
    let mut k = SLICE_MAX_STEPS - 1 - j.min(SLICE_MAX_STEPS - 1);
    let mut expansions = 0u64;
    while j > 0 && left > lo && log_f(left) > level {
        left -= SLICE_WIDTH;
        j -= 1;
        expansions += 1;
    }
    while k > 0 && right < hi && log_f(right) > level {
        right += SLICE_WIDTH;
        k -= 1;
        expansions += 1;
    }
    left = left.max(lo);
    right = right.min(hi);
    for _ in 0..10_000 {
        let x1 = left + uniform(rng) * (right - left);
        if log_f(x1) >= level {
            return Ok((x1, expansions));
        }
        if x1 < x0 {
            left = x1;
        } else {
            right = x1;
        }
    }
    computation("slice shrinkage did not terminate")
}

/// Exact draw from a log-concave density `exp(h(u))` on `[lo, hi]` (`lo`
/// finite) using a three-tangent piecewise-exponential envelope around the
/// mode. `h_dh` returns `(h(u), h'(u))`.
pub(crate) fn sample_log_concave<F: Fn(f64) -> (f64, f64), R: Rng + ?Sized>(
    h_dh: F,
    lo: f64,
    hi: f64,
    rng: &mut R,
) -> Result<(f64, u64)> {
    let h = |u: f64| h_dh(u).0;
    let dh = |u: f64| h_dh(u).1;
    // locate the mode
    let mode = if dh(lo) <= 0.0 {
        lo
    } else if hi.is_finite() && dh(hi) >= 0.0 {
        hi
    } else {
        let mut b = if hi.is_finite() { hi } else { lo + 1.0 };
        let mut step = 1.0;
        while !hi.is_finite() && dh(b) > 0.0 {
            step *= 2.0;
            b = lo + step;
            if step > 1e6 {
                return computation("log-concave sampler could not bracket the mode");
            }
        }
        let mut a = lo;
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if dh(m) > 0.0 {
                a = m;
            } else {
                b = m;
            }
            if b - a < 1e-12 * (1.0 + a.abs()) {
                break;
            }
        }
        0.5 * (a + b)
    };
    let h_mode = h(mode);
    if !h_mode.is_finite() {
        return Err(Error::Computation(format!("log density not finite at its mode {mode}")));
    }
    let drop_point = |toward: f64| -> f64 {
        // point between mode and `toward` where h falls by one
        if toward.is_finite() && h(toward) >= h_mode - 1.0 {
            return toward;
        }
        let dir = if toward < mode { -1.0 } else { 1.0 };
        let mut far = if toward.is_finite() { toward } else { mode + dir };
        let mut step = 1.0;
        while !toward.is_finite() && h(far) >= h_mode - 1.0 {
            step *= 2.0;
            far = mode + dir * step;
        }
        let (mut near, mut far) = (mode, far);
        for _ in 0..200 {
            let m = 0.5 * (near + far);
            if h(m) >= h_mode - 1.0 {
                near = m;
            } else {
                far = m;
            }
            if (far - near).abs() < 1e-10 * (1.0 + mode.abs()) {
                break;
            }
        }
        far
    };
    let mut points = Vec::with_capacity(3);
    if mode > lo {
        points.push(drop_point(lo));
    }
    points.push(mode);
    if mode < hi {
        points.push(drop_point(hi));
    }
    points.dedup();
    let tangents: Vec<(f64, f64, f64)> = points.iter().map(|&x| (x, h(x), dh(x))).collect();
    // piece boundaries
    let mut bounds = vec![lo];
    for w in tangents.windows(2) {
        let (x1, h1, s1) = w[0];
        let (x2, h2, s2) = w[1];
        let z = if (s1 - s2).abs() < 1e-300 {
            0.5 * (x1 + x2)
        } else {
            ((h2 - s2 * x2) - (h1 - s1 * x1)) / (s1 - s2)
        };
        bounds.push(z.clamp(x1, x2));
    }
    bounds.push(hi);
    let env = |i: usize, u: f64| {
        let (x, hx, s) = tangents[i];
        hx + s * (u - x)
    };
    // log mass of each piece
    let log_masses: Vec<f64> = (0..tangents.len())
        .map(|i| {
            let (a, b) = (bounds[i], bounds[i + 1]);
            if b <= a {
                return f64::NEG_INFINITY;
            }
            let s = tangents[i].2;
            let ha = env(i, a);
            if b.is_infinite() {
                return ha - (-s).ln();
            }
            let w = b - a;
            if (s * w).abs() < 1e-12 {
                ha + w.ln()
            } else if s > 0.0 {
                env(i, b) + (-(-s * w).exp_m1()).ln() - s.ln()
            } else {
                ha + (-(s * w).exp_m1()).ln() - (-s).ln()
            }
        })
        .collect();
    let total = log_masses.iter().fold(f64::NEG_INFINITY, |acc, &m| log_add_exp(acc, m));
    let mut rejections = 0u64;
    for _ in 0..1_000_000 {
        let mut pick = uniform(rng);
        let mut piece = log_masses.len() - 1;
        for (i, m) in log_masses.iter().enumerate() {
            let w = (m - total).exp();
            if pick < w {
                piece = i;
                break;
            }
            pick -= w;
        }
        let a = bounds[piece];
        let u = a + truncated_exponential(tangents[piece].2, bounds[piece + 1] - a, rng);
        let e: f64 = Exp1.sample(rng);
        if h(u) - env(piece, u) >= -e {
            return Ok((u, rejections));
        }
        rejections += 1;
    }
    computation("log-concave rejection exceeded its budget")
}
