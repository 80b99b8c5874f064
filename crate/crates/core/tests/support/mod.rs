//! Test helpers. The numerical oracles here are deliberately independent of
//! the library's own quadrature: plain composite rules on explicit grids.
#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One-sample Kolmogorov-Smirnov statistic.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    s.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Two-sample Kolmogorov-Smirnov statistic.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
    }
    d
}

/// Distribution function tabulated on a grid from an unnormalized log
/// density, by the trapezoid rule; evaluated by linear interpolation.
pub struct GridCdf {
    pub xs: Vec<f64>,
    pub cdf: Vec<f64>,
}

impl GridCdf {
    pub fn from_log_density(lo: f64, hi: f64, n: usize, log_f: impl Fn(f64) -> f64) -> Self {
        let xs: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
        let lf: Vec<f64> = xs.iter().map(|&x| log_f(x)).collect();
        let m = lf.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let f: Vec<f64> = lf.iter().map(|v| (v - m).exp()).collect();
        let mut cdf = vec![0.0; n];
        for i in 1..n {
            cdf[i] = cdf[i - 1] + 0.5 * (f[i] + f[i - 1]) * (xs[i] - xs[i - 1]);
        }
        let total = cdf[n - 1];
        cdf.iter_mut().for_each(|c| *c /= total);
        Self { xs, cdf }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.xs[0] {
            return 0.0;
        }
        let last = self.xs.len() - 1;
        if x >= self.xs[last] {
            return 1.0;
        }
        let h = self.xs[1] - self.xs[0];
        let k = (((x - self.xs[0]) / h) as usize).min(last - 1);
        let w = (x - self.xs[k]) / h;
        self.cdf[k] * (1.0 - w) + self.cdf[k + 1] * w
    }
}

/// Composite Simpson rule with `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + h * i as f64);
    }
    s * h / 3.0
}

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

pub fn variance(v: &[f64]) -> f64 {
    let m = mean(v);
    v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() as f64 - 1.0)
}

/// Mean and its standard error.
pub fn mean_se(v: &[f64]) -> (f64, f64) {
    (mean(v), (variance(v) / v.len() as f64).sqrt())
}

pub fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Standard normal CDF through the complementary error function.
pub fn phi_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Exponential integral E1 by the convergent series (x <= 2) or the
/// asymptotic continued fraction evaluated backwards (x > 2).
pub fn e1(x: f64) -> f64 {
    if x <= 2.0 {
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..300 {
            term *= -x / k as f64;
            sum += term / k as f64;
        }
        -0.577_215_664_901_532_9 - x.ln() - sum
    } else {
        let mut f = 0.0;
        for k in (1..200).rev() {
            let k = k as f64;
            f = k / (1.0 + k / (x + f));
        }
        (-x).exp() / (x + f)
    }
}
