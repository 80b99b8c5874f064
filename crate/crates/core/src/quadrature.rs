//! Adaptive Gauss-Kronrod quadrature.
//!
//! Finite intervals are bisected adaptively (G7/K15 pairs, worst interval
//! first). Semi-infinite and infinite ranges are covered by blocks that
//! grow geometrically outward from a pivot, on a log axis for `(0, inf)`.

use crate::error::{Error, Result};
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_subdivisions: 4000,
        }
    }
}

impl QuadOptions {
    pub fn tight() -> Self {
        Self {
            abs_tol: 1e-14,
            rel_tol: 1e-11,
            max_subdivisions: 20_000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    let value = kron * h;
    let err = ((kron - gauss) * h).abs();
    (value, err)
}

/// Integrates `f` over the finite interval `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, opts: QuadOptions) -> Result<Integral> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!("integration bounds must be finite, got [{a}, {b}]")));
    }
    if a == b {
        return Ok(Integral { value: 0.0, error: 0.0, evaluations: 0 });
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let r = integrate_breaks(f, &[lo, hi], opts)?;
    Ok(Integral { value: sign * r.value, ..r })
}

/// Integrates `f` over `[breaks[0], breaks[last]]` with the given increasing
/// breakpoints as the initial partition. Refinement is global: the worst
/// piece anywhere is bisected until the total error meets the tolerance.
pub fn integrate_breaks<F: Fn(f64) -> f64>(f: F, breaks: &[f64], opts: QuadOptions) -> Result<Integral> {
    if breaks.len() < 2 || breaks.iter().any(|x| !x.is_finite()) || breaks.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Domain("breakpoints must be finite, increasing and at least two".into()));
    }
    let (lo, hi) = (breaks[0], breaks[breaks.len() - 1]);
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for w in breaks.windows(2).filter(|w| w[0] < w[1]) {
        let (v, e) = gk15(&f, w[0], w[1]);
        evaluations += 15;
        heap.push(Piece { a: w[0], b: w[1], value: v, error: e });
    }
    let mut total: f64 = heap.iter().map(|p| p.value).sum();
    let mut total_err: f64 = heap.iter().map(|p| p.error).sum();
    let mut splits = 0;
    loop {
        if !total.is_finite() || !total_err.is_finite() {
            return Err(Error::Computation(format!(
                "non-finite integrand on [{lo}, {hi}] after {evaluations} evaluations"
            )));
        }
        if total_err <= opts.abs_tol.max(opts.rel_tol * total.abs()) {
            break;
        }
        if splits >= opts.max_subdivisions {
            return Err(Error::Computation(format!(
                "quadrature on [{lo}, {hi}] did not converge: value {total:e}, error estimate {total_err:e}, {evaluations} evaluations"
            )));
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval can no longer be split in floating point
            heap.push(Piece { error: 0.0, ..worst });
            total_err = heap.iter().map(|p| p.error).sum();
            splits += 1;
            continue;
        }
        let (v1, e1) = gk15(&f, worst.a, mid);
        let (v2, e2) = gk15(&f, mid, worst.b);
        evaluations += 30;
        splits += 1;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Piece { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Piece { a: mid, b: worst.b, value: v2, error: e2 });
        if splits % 64 == 0 {
            total = heap.iter().map(|p| p.value).sum();
            total_err = heap.iter().map(|p| p.error).sum();
        }
    }
    let value: f64 = heap.iter().map(|p| p.value).sum();
    Ok(Integral { value, error: total_err, evaluations })
}

fn outward_blocks<G: Fn(f64) -> f64>(
    g: &G,
    start: f64,
    direction: f64,
    limit: f64,
    first_width: f64,
    opts: QuadOptions,
    acc: &mut Integral,
) -> Result<()> {
    let mut lo = start;
    let mut width = first_width;
    let mut quiet = 0;
    for _ in 0..80 {
        let mut hi = lo + direction * width;
        let last = if direction > 0.0 { hi >= limit } else { hi <= limit };
        if last {
            hi = limit;
        }
        let block = integrate(g, lo.min(hi), lo.max(hi), opts)?;
        acc.value += block.value;
        acc.error += block.error;
        acc.evaluations += block.evaluations;
        if last {
            return Ok(());
        }
        if block.value.abs() <= 1e-17 * acc.value.abs() {
            quiet += 1;
            if quiet >= 2 {
                return Ok(());
            }
        } else {
            quiet = 0;
        }
        lo = hi;
        width *= 2.0;
    }
    Err(Error::Computation(format!(
        "tail blocks from {start} did not decay: partial value {:e}",
        acc.value
    )))
}

/// Integrates `f` over `[lo, hi]` with `0 <= lo < hi <= inf` on a log axis,
/// expanding outward from `pivot` (which should sit near the bulk of the mass).
pub fn integrate_log_axis<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    pivot: f64,
    opts: QuadOptions,
) -> Result<Integral> {
    if !(lo >= 0.0 && hi > lo) {
        return Err(Error::Domain(format!("invalid log-axis range [{lo}, {hi}]")));
    }
    let g = |u: f64| {
        let x = u.exp();
        if x == 0.0 || x.is_infinite() {
            0.0
        } else {
            f(x) * x
        }
    };
    let ulo = if lo == 0.0 { -745.0 } else { lo.ln() };
    let uhi = if hi.is_infinite() { 709.0 } else { hi.ln() };
    let u0 = pivot.clamp(lo.max(f64::MIN_POSITIVE), hi.min(f64::MAX)).ln().clamp(ulo, uhi);
    let mut acc = Integral { value: 0.0, error: 0.0, evaluations: 0 };
    if u0 < uhi {
        outward_blocks(&g, u0, 1.0, uhi, 1.0, opts, &mut acc)?;
    }
    if u0 > ulo {
        outward_blocks(&g, u0, -1.0, ulo, 1.0, opts, &mut acc)?;
    }
    Ok(acc)
}

/// Integrates `f` over `(0, inf)` on a log axis.
pub fn integrate_positive<F: Fn(f64) -> f64>(f: F, pivot: f64, opts: QuadOptions) -> Result<Integral> {
    integrate_log_axis(f, 0.0, f64::INFINITY, pivot, opts)
}

/// Integrates `f` over the real line, expanding outward from `center` in
/// blocks whose first width is `scale`.
pub fn integrate_real_line<F: Fn(f64) -> f64>(
    f: F,
    center: f64,
    scale: f64,
    opts: QuadOptions,
) -> Result<Integral> {
    let mut acc = Integral { value: 0.0, error: 0.0, evaluations: 0 };
    outward_blocks(&f, center, 1.0, f64::INFINITY, scale, opts, &mut acc)?;
    outward_blocks(&f, center, -1.0, f64::NEG_INFINITY, scale, opts, &mut acc)?;
    Ok(acc)
}
