//! Quadrature evaluations of the local-scale conditional
//! `pi(lambda | beta, tau) ∝ lambda^-1 exp(-beta^2 / 2 tau^2 lambda^2) pi_loc(lambda)`.

use super::stable;
use crate::error::{computation, domain, Result};
use crate::model::{Family, PriorSpec};
use crate::quadrature::{integrate_log_axis, integrate_positive, QuadOptions};
use crate::special::gamma;

fn opts() -> QuadOptions {
    QuadOptions { abs_tol: 1e-300, rel_tol: 1e-11, max_subdivisions: 20_000 }
}

/// Unnormalized horseshoe `eta = lambda^-2` density `(1 + eta)^-1 exp(-b eta)`.
fn horseshoe_eta_kernel(eta: f64, b: f64) -> f64 {
    (-b * eta).exp() / (1.0 + eta)
}

fn horseshoe_pivot(b: f64) -> f64 {
    (1.0 / b).clamp(1e-3, 1.0)
}

/// CDF of `eta | b` for the horseshoe, by quadrature.
pub fn horseshoe_eta_cdf(eta: f64, b: f64) -> Result<f64> {
    if !(b > 0.0) {
        return domain(format!("b must be positive, got {b}"));
    }
    if !(eta > 0.0) {
        return Ok(0.0);
    }
    let total = integrate_positive(|s| horseshoe_eta_kernel(s, b), horseshoe_pivot(b), opts())?.value;
    let head = integrate_log_axis(|s| horseshoe_eta_kernel(s, b), 0.0, eta, eta.min(1.0), opts())?.value;
    Ok((head / total).clamp(0.0, 1.0))
}

/// `P(lambda <= l | beta, tau)`.
pub fn local_scale_cdf(l: f64, beta: f64, tau: f64, prior: &PriorSpec) -> Result<f64> {
    Ok(1.0 - local_scale_tail_prob(l, beta, tau, prior)?)
}

/// `P(lambda >= a | beta, tau)` by adaptive quadrature.
///
/// For the horseshoe with `beta = 0` the conditional is improper and all
/// mass escapes to zero; the limiting value 0 is returned.
pub fn local_scale_tail_prob(a: f64, beta: f64, tau: f64, prior: &PriorSpec) -> Result<f64> {
    if !(a > 0.0 && tau > 0.0) {
        return domain(format!("need a > 0 and tau > 0, got a={a}, tau={tau}"));
    }
    let c = beta / tau;
    match prior.family {
        Family::Horseshoe => {
            let b = 0.5 * c * c;
            if b == 0.0 {
                return Ok(0.0);
            }
            // lambda >= a  <=>  eta <= a^-2
            horseshoe_eta_cdf(a.powi(-2), b)
        }
        Family::Bridge { alpha } => {
            let x = 0.5 / (a * a);
            stable::tilted_cdf(x, 0.5 * alpha, c * c)
        }
    }
}

/// `E[tau^-q lambda^-q | beta, tau]` by quadrature, for `0 <= q < 1`.
pub fn local_scale_neg_moment(q: f64, beta: f64, tau: f64, prior: &PriorSpec) -> Result<f64> {
    if !(0.0..1.0).contains(&q) {
        return domain(format!("moment exponent must lie in [0, 1), got {q}"));
    }
    if !(tau > 0.0) {
        return domain(format!("tau must be positive, got {tau}"));
    }
    if q == 0.0 {
        return Ok(1.0);
    }
    let c = beta / tau;
    let t = c * c;
    let m = match prior.family {
        Family::Horseshoe => {
            let b = 0.5 * t;
            if b == 0.0 {
                return computation("negative moment diverges for the horseshoe at beta = 0");
            }
            let piv = horseshoe_pivot(b);
            // lambda^-q = eta^(q/2)
            let num = integrate_positive(|s| s.powf(0.5 * q) * horseshoe_eta_kernel(s, b), piv, opts())?.value;
            let den = integrate_positive(|s| horseshoe_eta_kernel(s, b), piv, opts())?.value;
            num / den
        }
        Family::Bridge { alpha } => {
            let a = 0.5 * alpha;
            if t == 0.0 && 0.5 * q >= a {
                return computation(format!(
                    "negative moment of order {q} diverges for the bridge with exponent {alpha} at beta = 0"
                ));
            }
            // lambda^-q = (2X)^(q/2), X tilted stable
            let piv = if t > 0.0 { t.powf(a - 1.0).clamp(1e-3, 1e3) } else { 1.0 };
            let num = integrate_positive(
                |x| ((0.5 * q) * (2.0 * x).ln() - t * x + stable::log_pdf(x, a)).exp(),
                piv,
                opts(),
            )?
            .value;
            num / (-t.powf(a)).exp()
        }
    };
    Ok(tau.powf(-q) * m)
}

/// Upper bound on `E[tau^-q lambda^-q | beta, tau]` for the half-Cauchy local
/// prior: `C |beta|^-q / log(1 + 4 tau^2 eps^2 / beta^2)` with `eps = 1`, the
/// largest radius on which the density stays above half its value at zero,
/// and `C = 2^(2 + q/2) Gamma(q/2) / 2`.
pub fn horseshoe_neg_moment_bound(q: f64, beta: f64, tau: f64) -> f64 {
    let eps = 1.0;
    let c = 2f64.powf(2.0 + 0.5 * q) * 0.5 * gamma(0.5 * q);
    c * beta.abs().powf(-q) / (4.0 * tau * tau * eps * eps / (beta * beta)).ln_1p()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::exp_int_e1;

    #[test]
    fn horseshoe_tail_matches_exponential_integral() {
        let prior = PriorSpec::horseshoe(1.0);
        for &beta in &[0.25f64, 1.0, 4.0] {
            let b = 0.5 * beta * beta;
            // int_0^1 e^{-b s}/(1+s) ds = e^b (E1(b) - E1(2b))
            let exact = (exp_int_e1(b) - exp_int_e1(2.0 * b)) / exp_int_e1(b);
            let q = local_scale_tail_prob(1.0, beta, 1.0, &prior).unwrap();
            assert!((q - exact).abs() < 1e-9, "beta={beta} q={q} exact={exact}");
        }
    }

    #[test]
    fn tail_tends_to_one_near_zero() {
        for prior in [PriorSpec::horseshoe(1.0), PriorSpec::bridge(0.5, 1.0)] {
            let q = local_scale_tail_prob(1e-9, 1.0, 1.0, &prior).unwrap();
            assert!(q > 1.0 - 1e-6, "{q}");
        }
    }

    #[test]
    fn zeroth_moment_is_one() {
        assert_eq!(local_scale_neg_moment(0.0, 0.3, 1.0, &PriorSpec::horseshoe(1.0)).unwrap(), 1.0);
        assert!(local_scale_neg_moment(1.0, 0.3, 1.0, &PriorSpec::horseshoe(1.0)).is_err());
    }

    #[test]
    fn bridge_laplace_neg_moment_closed_form() {
        // alpha = 1: lambda^-2 is inverse Gaussian with mean 1/|c| and shape 1,
        // so E[lambda^-1] = E[sqrt(IG)] has a closed form via Bessel K; check
        // the q -> 0 limit and finiteness instead
        let prior = PriorSpec::bridge(1.0, 1.0);
        let m = local_scale_neg_moment(1e-6, 2.0, 1.0, &prior).unwrap();
        assert!((m - 1.0).abs() < 1e-5);
    }
}
