//! Positive stable law with Laplace transform `exp(-s^a)`, `0 < a < 1`,
//! and its exponentially tilted versions.
//!
//! Densities and distribution functions use Zolotarev's integral
//! representation; large arguments switch to the convergent power series.
//! Draws use Kanter's representation, and tilted draws split the variate
//! into `m = ceil(t^a)` independent pieces, each tilted by `t m^(-1/a)` and
//! drawn by plain rejection (acceptance at least `1/e` per piece).

use crate::error::{computation, domain, Result};
use crate::quadrature::{integrate_breaks, integrate_log_axis, QuadOptions};
use crate::special::{ln_gamma, log_add_exp};
use rand::Rng;
use rand_distr::{Distribution, Exp1, Open01};
use std::f64::consts::PI;

const MAX_PIECES: f64 = 1e7;

fn zolotarev_opts() -> QuadOptions {
    QuadOptions { abs_tol: 1e-300, rel_tol: 1e-10, max_subdivisions: 4000 }
}

/// Integral over `(0, pi)` with breakpoints at `pi 2^-k`, so that the
/// spike near zero which appears for small `x` (width about `a0y^{-1/2}`)
/// is resolved.
fn zolotarev_integral<F: Fn(f64) -> f64>(f: F, a0y: f64) -> Option<f64> {
    let floor = 1e-3 / a0y.max(1.0).sqrt();
    let mut breaks = vec![PI];
    while *breaks.last().unwrap() > floor {
        let next = 0.5 * breaks.last().unwrap();
        breaks.push(next);
    }
    breaks.push(0.0);
    breaks.reverse();
    integrate_breaks(f, &breaks, zolotarev_opts()).ok().map(|r| r.value)
}

/// ln(sin v / v), accurate for small `v`.
fn log_sinc(v: f64) -> f64 {
    if v.abs() < 0.1 {
        let v2 = v * v;
        (-v2 / 6.0 * (1.0 - v2 / 20.0 * (1.0 - v2 / 42.0 * (1.0 - v2 / 72.0)))).ln_1p()
    } else {
        (v.sin() / v).ln()
    }
}

/// ln(A(u) / A(0+)), free of cancellation near `u = 0`.
fn log_zolotarev_ratio(u: f64, a: f64) -> f64 {
    let b = 1.0 - a;
    (a / b) * log_sinc(a * u) + log_sinc(b * u) - log_sinc(u) / b
}

/// log A(u) with A(u) = sin(au)^(a/(1-a)) sin((1-a)u) / sin(u)^(1/(1-a)).
pub fn log_zolotarev_a(u: f64, a: f64) -> f64 {
    let b = 1.0 - a;
    (a / b) * (a * u).sin().ln() + (b * u).sin().ln() - (u.sin().ln()) / b
}

/// A(0+) = a^(a/(1-a)) (1-a), the minimum of A on (0, pi).
fn log_zolotarev_a0(a: f64) -> f64 {
    (a / (1.0 - a)) * a.ln() + (1.0 - a).ln()
}

fn series_ok(x: f64, a: f64) -> bool {
    x.powf(-a) <= 0.25
}

/// Log of the alternating power series in `x^{-a}`, with coefficients
/// `c_k = Gamma(k a + shift) / k!` and the leading term factored out.
/// `shift = 1` gives the density times `x`, `shift = 0` the survival function
/// (both up to the factor `1/pi`).
fn log_series(x: f64, a: f64, shift: f64) -> Option<f64> {
    let lx = x.ln();
    let log_mag = |k: f64| ln_gamma(k * a + shift) - ln_gamma(k + 1.0) - k * a * lx;
    let lead = log_mag(1.0);
    let mut sum = 0.0;
    for k in 1..400 {
        let kf = k as f64;
        let rel = (log_mag(kf) - lead).exp();
        let term = rel * (kf * PI * a).sin();
        sum += if k % 2 == 1 { term } else { -term };
        if rel < 1e-17 * sum.abs() {
            break;
        }
    }
    (sum > 0.0).then(|| lead + sum.ln() - PI.ln())
}

/// Log density of the positive stable law of index `a`.
pub fn log_pdf(x: f64, a: f64) -> f64 {
    if !(x > 0.0) {
        return f64::NEG_INFINITY;
    }
    if x.is_infinite() {
        return f64::NEG_INFINITY;
    }
    if series_ok(x, a) {
        if let Some(v) = log_series(x, a, 1.0) {
            return v - x.ln();
        }
    }
    let b = 1.0 - a;
    let log_y = -(a / b) * x.ln();
    let log_a0 = log_zolotarev_a0(a);
    let a0y = (log_a0 + log_y).exp();
    if a0y.is_infinite() {
        return f64::NEG_INFINITY;
    }
    let integrand = |u: f64| {
        if u <= 0.0 || u >= PI {
            return 0.0;
        }
        let ratio = log_zolotarev_ratio(u, a);
        (log_a0 + ratio - a0y * ratio.exp_m1()).exp()
    };
    let Some(r) = zolotarev_integral(integrand, a0y) else {
        return f64::NAN;
    };
    (a / b).ln() - x.ln() / b - PI.ln() - a0y + r.ln()
}

/// Density of the positive stable law of index `a`.
pub fn pdf(x: f64, a: f64) -> f64 {
    log_pdf(x, a).exp()
}

/// Distribution function of the positive stable law of index `a`.
pub fn cdf(x: f64, a: f64) -> f64 {
    if !(x > 0.0) {
        return 0.0;
    }
    if x.is_infinite() {
        return 1.0;
    }
    if series_ok(x, a) {
        return 1.0 - sf(x, a);
    }
    let log_y = -(a / (1.0 - a)) * x.ln();
    let log_a0 = log_zolotarev_a0(a);
    let a0y = (log_a0 + log_y).exp();
    if a0y.is_infinite() {
        return 0.0;
    }
    let integrand = |u: f64| {
        if u <= 0.0 || u >= PI {
            return if u <= 0.0 { 1.0 } else { 0.0 };
        }
        (-a0y * log_zolotarev_ratio(u, a).exp_m1()).exp()
    };
    match zolotarev_integral(integrand, a0y) {
        Some(r) => (-a0y).exp() * r / PI,
        None => f64::NAN,
    }
}

/// Survival function 1 - F(x), accurate in the upper tail.
pub fn sf(x: f64, a: f64) -> f64 {
    if !(x > 0.0) {
        return 1.0;
    }
    if x.is_infinite() {
        return 0.0;
    }
    if series_ok(x, a) {
        if let Some(v) = log_series(x, a, 0.0) {
            return v.exp();
        }
    }
    let log_y = -(a / (1.0 - a)) * x.ln();
    let log_a0y = log_zolotarev_a0(a) + log_y;
    if log_a0y > 700.0 {
        return 1.0;
    }
    let integrand = |u: f64| {
        if u >= PI {
            return 1.0;
        }
        let ratio = if u <= 0.0 { 0.0 } else { log_zolotarev_ratio(u, a) };
        -(-(log_a0y + ratio).exp()).exp_m1()
    };
    match zolotarev_integral(integrand, log_a0y.exp()) {
        Some(r) => r / PI,
        None => f64::NAN,
    }
}

/// Log of one untilted draw by Kanter's representation.
pub fn sample_log<R: Rng + ?Sized>(a: f64, rng: &mut R) -> f64 {
    let u: f64 = PI * rng.sample::<f64, _>(Open01);
    let e: f64 = Exp1.sample(rng);
    ((1.0 - a) / a) * (log_zolotarev_a(u, a) - e.ln())
}

/// Log of a draw from the density proportional to `exp(-t x) pi_st(x)`,
/// returned with the number of rejected Kanter proposals.
pub fn sample_tilted_log<R: Rng + ?Sized>(a: f64, t: f64, rng: &mut R) -> Result<(f64, u64)> {
    if !(a > 0.0 && a < 1.0) {
        return domain(format!("stable index must lie in (0, 1), got {a}"));
    }
    if !(t >= 0.0) || t.is_infinite() {
        return domain(format!("tilt must be finite and nonnegative, got {t}"));
    }
    if t == 0.0 {
        return Ok((sample_log(a, rng), 0));
    }
    let pieces = t.powf(a).ceil().max(1.0);
    if pieces > MAX_PIECES {
        return computation(format!(
            "tilt {t:e} needs {pieces:e} stable pieces at index {a}; the local scale is numerically degenerate"
        ));
    }
    let m = pieces as u64;
    let log_shrink = -pieces.ln() / a;
    let piece_tilt = (t.ln() + log_shrink).exp();
    let mut rejections = 0u64;
    let mut log_sum = f64::NEG_INFINITY;
    for _ in 0..m {
        loop {
            let lx = sample_log(a, rng);
            let e: f64 = Exp1.sample(rng);
            // accept with probability exp(-piece_tilt * x)
            if piece_tilt * lx.exp() <= e {
                log_sum = log_add_exp(log_sum, lx);
                break;
            }
            rejections += 1;
        }
    }
    Ok((log_shrink + log_sum, rejections))
}

/// Distribution function of the tilted law `exp(-t x) pi_st(x) / exp(-t^a)`.
///
/// Uses integration by parts so that only the stable distribution function
/// is needed: `int_0^x e^{-ts} dF(s) = e^{-tx} F(x) + t int_0^x e^{-ts} F(s) ds`.
pub fn tilted_cdf(x: f64, a: f64, t: f64) -> Result<f64> {
    let (head, norm) = tilted_partial_mass(x, a, t)?;
    Ok((head / norm).clamp(0.0, 1.0))
}

/// Returns `(int_0^x e^{-ts} dF(s), exp(-t^a))`.
pub(crate) fn tilted_partial_mass(x: f64, a: f64, t: f64) -> Result<(f64, f64)> {
    if !(x > 0.0) {
        return Ok((0.0, (-t.powf(a)).exp()));
    }
    let norm = (-t.powf(a)).exp();
    if t == 0.0 {
        return Ok((cdf(x, a), 1.0));
    }
    if x.is_infinite() {
        return Ok((norm, norm));
    }
    let body = integrate_log_axis(
        |s| (-t * s).exp() * cdf(s, a),
        0.0,
        x,
        x.min(1.0 / t),
        QuadOptions::tight(),
    )?;
    Ok(((-t * x).exp() * cdf(x, a) + t * body.value, norm))
}
