//! Chain diagnostics, interval summaries and the negative-moment utilities
//! used by the property suites.
//!
//! Quantiles follow the type-7 rule: for sorted draws `x_(1..N)` and level
//! `q`, take `h = (N - 1) q` and interpolate linearly between `x_(floor h)`
//! and `x_(floor h + 1)` (zero based).

use crate::error::{domain, Result};
use crate::quadrature::{integrate, QuadOptions};
use crate::special::{gamma, kummer_m, ln_gamma};
use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Caveat attached to reported ESS values.
pub const ESS_CAVEAT: &str = "ESS estimates assume a central limit theorem for the chain; \
without geometric ergodicity they may be unreliable";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Autocorrelation {
    pub values: Vec<f64>,
    /// Set when the series is constant; every lag is then reported as 1.
    pub degenerate: bool,
}

fn centered(draws: &[f64]) -> (Vec<f64>, f64) {
    let n = draws.len() as f64;
    let mean = draws.iter().sum::<f64>() / n;
    let c: Vec<f64> = draws.iter().map(|x| x - mean).collect();
    let var = c.iter().map(|d| d * d).sum::<f64>() / n;
    (c, var)
}

fn autocov(c: &[f64], lag: usize) -> f64 {
    let n = c.len();
    c[..n - lag].iter().zip(&c[lag..]).map(|(a, b)| a * b).sum::<f64>() / n as f64
}

/// Sample autocorrelation at lags `0..=max_lag` (biased, divisor `N`).
pub fn autocorrelation(draws: &[f64], max_lag: usize) -> Result<Autocorrelation> {
    if max_lag == 0 || draws.len() <= max_lag {
        return domain(format!("need more than max_lag = {max_lag} draws, got {}", draws.len()));
    }
    if draws.iter().any(|x| !x.is_finite()) {
        return domain("draws contain non-finite values");
    }
    let (c, var) = centered(draws);
    if var <= 0.0 {
        return Ok(Autocorrelation { values: vec![1.0; max_lag + 1], degenerate: true });
    }
    let mut values: Vec<f64> = (0..=max_lag).into_par_iter().map(|k| autocov(&c, k) / var).collect();
    values[0] = 1.0;
    Ok(Autocorrelation { values, degenerate: false })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EssEstimate {
    pub ess: f64,
    pub degenerate: bool,
}

/// Effective sample size via Geyer's initial monotone positive-pair sequence.
///
/// Capped at the series length. A constant series reports its length with
/// the degenerate flag set.
pub fn effective_sample_size(draws: &[f64]) -> Result<EssEstimate> {
    let n = draws.len();
    if n < 10 {
        return domain(format!("ESS needs at least 10 draws, got {n}"));
    }
    if draws.iter().any(|x| !x.is_finite()) {
        return domain("draws contain non-finite values");
    }
    let (c, var) = centered(draws);
    if var <= 0.0 {
        return Ok(EssEstimate { ess: n as f64, degenerate: true });
    }
    let rho = |k: usize| autocov(&c, k) / var;
    let mut sum = 0.0;
    let mut prev = f64::INFINITY;
    let mut k = 0;
    while 2 * k + 1 < n {
        let pair = if k == 0 { 1.0 + rho(1) } else { rho(2 * k) + rho(2 * k + 1) };
        if pair <= 0.0 {
            break;
        }
        let pair = pair.min(prev);
        sum += pair;
        prev = pair;
        k += 1;
    }
    let tau = (2.0 * sum - 1.0).max(1.0 / n as f64);
    Ok(EssEstimate { ess: (n as f64 / tau).min(n as f64), degenerate: false })
}

/// Total ESS over independent chains.
pub fn effective_sample_size_chains(chains: &[&[f64]]) -> Result<EssEstimate> {
    let mut total = EssEstimate { ess: 0.0, degenerate: true };
    for c in chains {
        let e = effective_sample_size(c)?;
        total.ess += e.ess;
        total.degenerate &= e.degenerate;
    }
    Ok(total)
}

/// Split R-hat: each chain is halved and the classic potential scale
/// reduction factor is computed over the halves.
pub fn split_rhat(chains: &[&[f64]]) -> Result<f64> {
    let half = chains.iter().map(|c| c.len() / 2).min().unwrap_or(0);
    if half < 2 {
        return domain("split R-hat needs chains of at least 4 draws");
    }
    let mut pieces: Vec<&[f64]> = Vec::with_capacity(2 * chains.len());
    for c in chains {
        let c = &c[c.len() - 2 * half..];
        pieces.push(&c[..half]);
        pieces.push(&c[half..]);
    }
    let n = half as f64;
    let m = pieces.len() as f64;
    let stats: Vec<(f64, f64)> = pieces
        .iter()
        .map(|s| {
            let mean = s.iter().sum::<f64>() / n;
            let var = s.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
            (mean, var)
        })
        .collect();
    let grand = stats.iter().map(|s| s.0).sum::<f64>() / m;
    let b = n / (m - 1.0) * stats.iter().map(|s| (s.0 - grand).powi(2)).sum::<f64>();
    let w = stats.iter().map(|s| s.1).sum::<f64>() / m;
    if w <= 0.0 {
        return Ok(if b <= 0.0 { 1.0 } else { f64::INFINITY });
    }
    let var_plus = (n - 1.0) / n * w + b / n;
    Ok((var_plus / w).sqrt())
}

/// Type-7 quantile of already sorted values.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalSummary {
    pub mean: f64,
    pub median: f64,
    pub lo: f64,
    pub hi: f64,
    pub level: f64,
    pub width: f64,
    pub covers_truth: Option<bool>,
}

impl IntervalSummary {
    pub fn with_truth(mut self, truth: f64) -> Self {
        self.covers_truth = Some(self.covers(truth));
        self
    }

    pub fn covers(&self, value: f64) -> bool {
        self.lo <= value && value <= self.hi
    }
}

fn sorted_finite(draws: &[f64]) -> Result<Vec<f64>> {
    if draws.is_empty() {
        return domain("no draws");
    }
    if draws.iter().any(|x| !x.is_finite()) {
        return domain("draws contain non-finite values");
    }
    let mut s = draws.to_vec();
    s.sort_by(f64::total_cmp);
    Ok(s)
}

fn interval_from_sorted(sorted: &[f64], mean: f64, level: f64) -> IntervalSummary {
    let tail = 0.5 * (1.0 - level);
    let lo = quantile_sorted(sorted, tail);
    let hi = quantile_sorted(sorted, 1.0 - tail);
    IntervalSummary {
        mean,
        median: quantile_sorted(sorted, 0.5),
        lo,
        hi,
        level,
        width: hi - lo,
        covers_truth: None,
    }
}

/// Equal-tailed credible interval; at least 100 draws are recommended.
pub fn credible_interval(draws: &[f64], level: f64) -> Result<IntervalSummary> {
    if !(level > 0.0 && level < 1.0) {
        return domain(format!("level must lie in (0, 1), got {level}"));
    }
    let sorted = sorted_finite(draws)?;
    let mean = draws.iter().sum::<f64>() / draws.len() as f64;
    Ok(interval_from_sorted(&sorted, mean, level))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoverageGroup {
    All,
    Signal,
    Null,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverageRow {
    pub level: f64,
    pub group: CoverageGroup,
    pub count: usize,
    pub mean_width: f64,
    pub coverage: f64,
}

/// Mean width and empirical coverage of equal-tailed intervals per level.
///
/// With a signal mask, rows for the signal and null coordinates follow the
/// pooled row of each level (groups with no members are omitted).
pub fn coverage_width_curve(
    draw_sets: &[&[f64]],
    truths: &[f64],
    levels: &[f64],
    signal_mask: Option<&[bool]>,
) -> Result<Vec<CoverageRow>> {
    if draw_sets.len() != truths.len() {
        return domain(format!("{} draw sets but {} truths", draw_sets.len(), truths.len()));
    }
    if let Some(mask) = signal_mask {
        if mask.len() != truths.len() {
            return domain("signal mask length differs from truths");
        }
    }
    if let Some(&l) = levels.iter().find(|&&l| !(l > 0.0 && l < 1.0)) {
        return domain(format!("level must lie in (0, 1), got {l}"));
    }
    let sorted: Vec<Vec<f64>> = draw_sets.par_iter().map(|d| sorted_finite(d)).collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for &level in levels {
        let ints: Vec<IntervalSummary> = sorted.iter().map(|s| interval_from_sorted(s, f64::NAN, level)).collect();
        let mut groups = vec![(CoverageGroup::All, None)];
        if signal_mask.is_some() {
            groups.push((CoverageGroup::Signal, Some(true)));
            groups.push((CoverageGroup::Null, Some(false)));
        }
        for (group, want) in groups {
            let members: Vec<usize> = (0..truths.len())
                .filter(|&j| want.is_none_or(|w| signal_mask.is_some_and(|m| m[j] == w)))
                .collect();
            if members.is_empty() {
                continue;
            }
            let k = members.len() as f64;
            let mean_width = members.iter().map(|&j| ints[j].width).sum::<f64>() / k;
            let covered = members.iter().filter(|&&j| ints[j].covers(truths[j])).count() as f64;
            rows.push(CoverageRow { level, group, count: members.len(), mean_width, coverage: covered / k });
        }
    }
    Ok(rows)
}

/// Indices of the `k` coordinates with the widest intervals, widest first.
pub fn top_k_widest(draw_sets: &[&[f64]], level: f64, k: usize) -> Result<Vec<usize>> {
    let widths: Vec<f64> =
        draw_sets.par_iter().map(|d| credible_interval(d, level).map(|i| i.width)).collect::<Result<_>>()?;
    let mut idx: Vec<usize> = (0..widths.len()).collect();
    idx.sort_by(|&a, &b| widths[b].total_cmp(&widths[a]).then(a.cmp(&b)));
    idx.truncate(k);
    Ok(idx)
}

/// `Gamma((1 - a)/2) / (2^{a/2} sqrt(pi))`, the value of `E|Z|^{-a}`.
pub fn negative_moment_constant(alpha: f64) -> f64 {
    gamma(0.5 * (1.0 - alpha)) / (2f64.powf(0.5 * alpha) * std::f64::consts::PI.sqrt())
}

/// `E|b|^{-alpha}` for `b ~ N(mu, sigma^2)` by adaptive quadrature.
///
/// On each half line the substitution `z = v^{1/(1-alpha)}` absorbs the
/// singularity at zero so the integrand is bounded.
pub fn gaussian_negative_moment(mu: f64, sigma: f64, alpha: f64) -> Result<f64> {
    if !(sigma > 0.0 && sigma.is_finite() && mu.is_finite()) {
        return domain("need finite mu and positive finite sigma");
    }
    if !(0.0..1.0).contains(&alpha) {
        return domain(format!("negative moment of order {alpha} diverges or is undefined"));
    }
    let t = (mu / sigma).abs();
    let e = 1.0 / (1.0 - alpha);
    let phi = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let f = |v: f64| {
        let z = v.powf(e);
        e * (phi(z - t) + phi(z + t))
    };
    let z_max = t + 40.0;
    let mut breaks: Vec<f64> = vec![0.0];
    for z in [t - 6.0, t - 2.0, t, t + 2.0, t + 6.0] {
        if z > 0.0 && z < z_max {
            breaks.push(z.powf(1.0 / e));
        }
    }
    breaks.push(z_max.powf(1.0 / e));
    let opts = QuadOptions { abs_tol: 1e-15, rel_tol: 1e-12, max_subdivisions: 20_000 };
    let mut total = 0.0;
    for w in breaks.windows(2) {
        total += integrate(f, w[0], w[1], opts)?.value;
    }
    Ok(total * sigma.powf(-alpha))
}

/// Closed form `C_alpha sigma^{-alpha} M(alpha/2, 1/2, -mu^2 / (2 sigma^2))`.
pub fn gaussian_negative_moment_kummer(mu: f64, sigma: f64, alpha: f64) -> f64 {
    let t = mu / sigma;
    negative_moment_constant(alpha) * sigma.powf(-alpha) * kummer_m(0.5 * alpha, 0.5, -0.5 * t * t)
}

/// The decay factor `D(t)` bounding `M(alpha/2, 1/2, -t^2/2)`.
pub fn kummer_decay_bound(t: f64, alpha: f64) -> f64 {
    let a = 0.5 * alpha;
    let b = 0.5 * (1.0 - alpha);
    let ln_beta = ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b);
    let first = 2f64.powf(2.5 - alpha) / (1.0 - alpha) * (-0.25 * t * t).exp();
    let second = 2f64.powf(0.5 + alpha) * gamma(a) * t.abs().powf(-alpha);
    (first + second) * (-ln_beta).exp()
}

/// Upper bound `C_alpha sigma^{-alpha} min{1, D(mu/sigma)}` on the negative moment.
pub fn negative_moment_bound(mu: f64, sigma: f64, alpha: f64) -> f64 {
    negative_moment_constant(alpha) * sigma.powf(-alpha) * kummer_decay_bound(mu / sigma, alpha).min(1.0)
}

/// Per-coordinate `(sigma_j^{-alpha}, bound_j)` for the marginal standard
/// deviations of `(X' Omega X + zeta^{-2} I + tau^{-2} Lambda^{-2})^{-1}`.
pub fn marginal_scale_bound(
    x: &DMatrix<f64>,
    omega: &[f64],
    tau: f64,
    lambda: &[f64],
    zeta: f64,
    alpha: f64,
) -> Result<Vec<(f64, f64)>> {
    let (n, p) = x.shape();
    if omega.len() != n || lambda.len() != p {
        return domain("dimension mismatch");
    }
    let mut prec = DMatrix::<f64>::zeros(p, p);
    for i in 0..n {
        let row = x.row(i);
        prec += omega[i] * row.transpose() * row;
    }
    for j in 0..p {
        prec[(j, j)] += zeta.powi(-2) + (tau * lambda[j]).powi(-2);
    }
    let Some(chol) = prec.cholesky() else {
        return crate::error::computation("precision matrix is not positive definite");
    };
    let cov = chol.inverse();
    Ok((0..p)
        .map(|j| {
            let lhs = cov[(j, j)].sqrt().powf(-alpha);
            let data: f64 = (0..n).map(|i| omega[i] * x[(i, j)].powi(2)).sum();
            let rhs = (tau * lambda[j]).powf(-alpha) + zeta.powf(-alpha) + 1.0 - 0.5 * alpha + 0.5 * alpha * data;
            (lhs, rhs)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn normals(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
    }

    fn ar1(n: usize, rho: f64, seed: u64) -> Vec<f64> {
        let e = normals(n, seed);
        let mut x = Vec::with_capacity(n);
        let mut cur = e[0] / (1.0 - rho * rho).sqrt();
        for &z in &e {
            cur = rho * cur + z;
            x.push(cur);
        }
        x
    }

    #[test]
    fn acf_iid_and_ar1() {
        let a = autocorrelation(&normals(100_000, 1), 5).unwrap();
        assert_eq!(a.values[0], 1.0);
        assert!(a.values[1].abs() < 0.01);
        let b = autocorrelation(&ar1(100_000, 0.9, 2), 3).unwrap();
        assert!((b.values[1] - 0.9).abs() < 0.02);
    }

    #[test]
    fn acf_constant_is_degenerate() {
        let a = autocorrelation(&[2.0; 50], 4).unwrap();
        assert!(a.degenerate);
        assert!(a.values.iter().all(|&v| v == 1.0));
        assert!(autocorrelation(&[1.0, 2.0], 2).is_err());
    }

    #[test]
    fn ess_iid_and_ar1() {
        let e = effective_sample_size(&normals(10_000, 3)).unwrap();
        assert!((0.8..=1.2).contains(&(e.ess / 1e4)), "{}", e.ess);
        let n = 100_000;
        let e = effective_sample_size(&ar1(n, 0.9, 4)).unwrap();
        let expect = 0.1 / 1.9;
        assert!((e.ess / n as f64 / expect - 1.0).abs() < 0.2, "{}", e.ess);
    }

    #[test]
    fn ess_constant_reports_length() {
        let e = effective_sample_size(&[1.0; 20]).unwrap();
        assert!(e.degenerate);
        assert_eq!(e.ess, 20.0);
    }

    #[test]
    fn interval_order_statistics() {
        let draws: Vec<f64> = (1..=1000).map(f64::from).collect();
        let i = credible_interval(&draws, 0.95).unwrap();
        assert!((i.lo - 25.975).abs() < 1e-12);
        assert!((i.hi - 975.025).abs() < 1e-12);
        assert!(i.lo <= i.median && i.median <= i.hi);
    }

    #[test]
    fn interval_normal_quantiles() {
        let i = credible_interval(&normals(100_000, 5), 0.95).unwrap();
        assert!((i.lo + 1.96).abs() < 0.02 && (i.hi - 1.96).abs() < 0.02);
    }

    #[test]
    fn rhat_near_one_for_iid() {
        let a = normals(2000, 6);
        let b = normals(2000, 7);
        let r = split_rhat(&[&a, &b]).unwrap();
        assert!(r < 1.01, "{r}");
        let shifted: Vec<f64> = b.iter().map(|x| x + 3.0).collect();
        assert!(split_rhat(&[&a, &shifted]).unwrap() > 1.5);
    }

    #[test]
    fn coverage_all_inside() {
        let sets: Vec<Vec<f64>> = (0..4).map(|s| normals(500, s)).collect();
        let refs: Vec<&[f64]> = sets.iter().map(|v| v.as_slice()).collect();
        let rows = coverage_width_curve(&refs, &[0.0; 4], &[0.5, 0.8], Some(&[true, false, false, true])).unwrap();
        assert_eq!(rows.len(), 6);
        assert!(rows.iter().all(|r| r.coverage == 1.0));
    }

    #[test]
    fn widest_first() {
        let sets: Vec<Vec<f64>> =
            (0..5).map(|s| normals(400, s).into_iter().map(|x| x * (s as f64 + 1.0)).collect()).collect();
        let refs: Vec<&[f64]> = sets.iter().map(|v| v.as_slice()).collect();
        assert_eq!(top_k_widest(&refs, 0.95, 3).unwrap(), vec![4, 3, 2]);
    }

    #[test]
    fn negative_moment_at_zero_mean() {
        for alpha in [0.1, 0.5, 0.9] {
            let q = gaussian_negative_moment(0.0, 1.7, alpha).unwrap();
            let c = negative_moment_constant(alpha) * 1.7f64.powf(-alpha);
            assert!((q / c - 1.0).abs() < 1e-8, "alpha {alpha}: {q} vs {c}");
        }
        assert!((gaussian_negative_moment(0.3, 1.0, 0.0).unwrap() - 1.0).abs() < 1e-10);
        assert!(gaussian_negative_moment(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn negative_moment_matches_kummer() {
        for (mu, alpha) in [(0.5, 0.3), (3.0, 0.5), (8.0, 0.8)] {
            let q = gaussian_negative_moment(mu, 1.3, alpha).unwrap();
            let k = gaussian_negative_moment_kummer(mu, 1.3, alpha);
            assert!((q / k - 1.0).abs() < 1e-8, "{mu} {alpha}: {q} vs {k}");
        }
    }

    #[test]
    fn bound_holds_at_three() {
        let q = gaussian_negative_moment(3.0, 1.0, 0.5).unwrap();
        assert!(q <= negative_moment_bound(3.0, 1.0, 0.5));
    }
}
