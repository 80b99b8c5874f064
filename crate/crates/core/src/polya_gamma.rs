//! Exact PG(1, c) draws by Devroye-style alternating-series rejection.
//!
//! The proposal mixes an exponential tail beyond the truncation point 0.64
//! with a truncated inverse Gaussian below it; both pieces are tilted by
//! `c`, so the sampler stays exact and efficient for large `|c|`.

use crate::special::{log_norm_cdf, PI_SQ};
use rand::Rng;
use rand_distr::{Distribution, Exp1, Open01, StandardNormal};
use serde::Serialize;
use std::f64::consts::PI;

const TRUNC: f64 = 0.64;

/// A PG(1, c) variate together with its tilting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PgDraw {
    pub value: f64,
    pub tilt: f64,
}

/// E[PG(1, c)] = tanh(c/2) / (2c), with value 1/4 at c = 0.
pub fn pg_mean(c: f64) -> f64 {
    let c = c.abs();
    if c < 1e-4 {
        let c2 = c * c;
        0.25 * (1.0 - c2 / 12.0 + c2 * c2 / 120.0)
    } else {
        (0.5 * c).tanh() / (2.0 * c)
    }
}

/// Draws from PG(1, c).
pub fn sample_pg1<R: Rng + ?Sized>(c: f64, rng: &mut R) -> f64 {
    sample_pg1_counted(c, rng).0
}

/// Draws from PG(1, c), also returning the number of proposals used.
pub fn sample_pg1_counted<R: Rng + ?Sized>(c: f64, rng: &mut R) -> (f64, u64) {
    let z = 0.5 * c.abs();
    let fz = 0.125 * PI_SQ + 0.5 * z * z;
    let p_exp = exponential_mass(z, fz);
    let mut proposals = 0u64;
    loop {
        proposals += 1;
        let u: f64 = rng.sample(Open01);
        let x = if u < p_exp {
            let e: f64 = Exp1.sample(rng);
            TRUNC + e / fz
        } else {
            truncated_inverse_gaussian(z, rng)
        };
        let mut s = series_coefficient(0, x);
        let v: f64 = rng.sample(Open01);
        let y = v * s;
        let mut n = 0;
        loop {
            n += 1;
            let a = series_coefficient(n, x);
            if n % 2 == 1 {
                s -= a;
                if y <= s {
                    return (0.25 * x, proposals);
                }
            } else {
                s += a;
                if y > s {
                    break;
                }
            }
        }
    }
}

/// Probability that the proposal comes from the exponential piece.
fn exponential_mass(z: f64, fz: f64) -> f64 {
    let root = (1.0 / TRUNC).sqrt();
    let b = root * (TRUNC * z - 1.0);
    let a = -root * (TRUNC * z + 1.0);
    let x0 = fz.ln() + fz * TRUNC;
    let xb = x0 - z + log_norm_cdf(b);
    let xa = x0 + z + log_norm_cdf(a);
    let q_over_p = 4.0 / PI * (xb.exp() + xa.exp());
    1.0 / (1.0 + q_over_p)
}

/// Coefficient `a_n(x)` of the alternating series for the J*(1) density.
fn series_coefficient(n: u32, x: f64) -> f64 {
    let k = (n as f64 + 0.5) * PI;
    if x > TRUNC {
        k * (-0.5 * k * k * x).exp()
    } else if x > 0.0 {
        let h = n as f64 + 0.5;
        (-1.5 * ((0.5 * PI).ln() + x.ln()) + k.ln() - 2.0 * h * h / x).exp()
    } else {
        0.0
    }
}

/// Inverse Gaussian with mean `1/z` and shape 1, truncated to `(0, TRUNC)`.
fn truncated_inverse_gaussian<R: Rng + ?Sized>(z: f64, rng: &mut R) -> f64 {
    let mu = if z > 0.0 { 1.0 / z } else { f64::INFINITY };
    if mu > TRUNC {
        loop {
            let e1 = loop {
                let e1: f64 = Exp1.sample(rng);
                let e2: f64 = Exp1.sample(rng);
                if e1 * e1 <= 2.0 * e2 / TRUNC {
                    break e1;
                }
            };
            let d = 1.0 + TRUNC * e1;
            let x = TRUNC / (d * d);
            let accept = (-0.5 * z * z * x).exp();
            let u: f64 = rng.sample(Open01);
            if u <= accept {
                return x;
            }
        }
    } else {
        loop {
            let n: f64 = StandardNormal.sample(rng);
            let y = n * n;
            let my = mu * y;
            let mut x = mu + 0.5 * mu * my - 0.5 * mu * (4.0 * my + my * my).sqrt();
            let u: f64 = rng.sample(Open01);
            if u > mu / (mu + x) {
                x = mu * mu / x;
            }
            if x <= TRUNC {
                return x;
            }
        }
    }
}
