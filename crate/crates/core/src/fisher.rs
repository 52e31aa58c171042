//! Fisher information of the normalized densities `rho_n = P_n^2 rho / h_n`.
//!
//! For a parameter `theta` entering through `z(theta)`,
//!
//! ```text
//! I_theta(P_n) = sum_x (d rho_n / d theta)^2 / rho_n
//! ```
//!
//! Differentiating `rho_n` and eliminating `dP_n/dtheta` with the three-term
//! recurrence turns the score into a multiple of a single combination of the
//! neighbouring polynomials, divided by `P_n`. The `P_n^2` in `rho_n` cancels
//! that division, leaving
//!
//! ```text
//! 2F1:  (rho(x)/h_n) (z' / (z (z - 1)))^2 [(n + c) P_{n+1} + n (z - 1) P_{n-1}]^2
//! 2F0:  (rho(x)/h_n) (z' / z^2)^2        [P_{n+1} + n z P_{n-1}]^2
//! MP:   (rho(x)/h_n) / sin^2(phi)        [(n + 1) P_{n+1} - (n + 2 lambda - 1) P_{n-1}]^2
//! ```
//!
//! which is what [`fisher_summand`] evaluates. Orthogonality then collapses the
//! sum to the closed forms in [`fisher_closed_generic`] and [`fisher_closed`].

use crate::error::{domain, Error, Result};
use crate::families::{log_norm_h, log_weight, polynomials, FamilySpec};
use crate::hypergeom::ZMap;
use crate::quadrature::{integrate_real_line, QuadratureConfig};
use crate::summation::{sum_tail, TruncationPolicy};

/// Numeric and closed-form Fisher information for one family and degree.
#[derive(Debug, Clone, PartialEq)]
pub struct FisherReport {
    pub family: FamilySpec,
    pub n: u32,
    pub theta_name: &'static str,
    pub numeric: f64,
    pub closed: f64,
    /// `|numeric - closed|`
    pub abs_err: f64,
    /// `abs_err / |closed|`, or `abs_err` when the closed form is zero.
    pub rel_err: f64,
    /// Summation terms or quadrature nodes.
    pub effort: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericFisher {
    pub value: f64,
    pub effort: usize,
    pub converged: bool,
}

fn check_numeric_degree(spec: &FamilySpec, n: u32) -> Result<()> {
    if let Some(max) = spec.max_degree() {
        if n + 1 > max {
            return Err(domain(format!(
                "numeric Fisher information for {spec} needs P_{} and is limited to n <= {}",
                n + 1,
                max.saturating_sub(1)
            )));
        }
    }
    Ok(())
}

/// `(d rho_n/d theta)^2 / rho_n` at one support point, in the form that never
/// divides by `P_n(x)`.
pub fn fisher_summand(spec: &FamilySpec, n: u32, x: f64) -> Result<f64> {
    spec.validate()?;
    spec.check_support(x)?;
    check_numeric_degree(spec, n)?;
    let polys = polynomials(spec, n + 1, x)?;
    let k = i64::from(n);
    let (next, prev) = (polys.get(k + 1), polys.get(k - 1));
    let nf = f64::from(n);
    let (prefactor, bracket) = match (*spec, spec.zmap()) {
        (FamilySpec::MeixnerPollaczek { lambda, phi }, _) => (
            1.0 / phi.sin(),
            (nf + 1.0) * next - (nf + 2.0 * lambda - 1.0) * prev,
        ),
        (_, Some(ZMap { c: Some(c), z, dz })) => (
            dz / (z * (z - 1.0)),
            (nf + c) * next + nf * (z - 1.0) * prev,
        ),
        (_, Some(ZMap { c: None, z, dz })) => (dz / (z * z), next + nf * z * prev),
        (_, None) => unreachable!("discrete families always have a z-map"),
    };
    let scaled = prefactor * bracket;
    if scaled == 0.0 {
        return Ok(0.0);
    }
    let log_scale = log_weight(spec, x)? - log_norm_h(spec, n)?;
    Ok((log_scale + 2.0 * scaled.abs().ln()).exp())
}

/// Fisher information by brute force: the exact finite sum for Krawtchouk,
/// truncated summation for Meixner and Charlier, quadrature for
/// Meixner-Pollaczek. Hitting an effort limit yields `converged = false` with
/// the partial value.
pub fn fisher_numeric(
    spec: &FamilySpec,
    n: u32,
    policy: &TruncationPolicy,
    quad: &QuadratureConfig,
) -> Result<NumericFisher> {
    spec.validate()?;
    check_numeric_degree(spec, n)?;
    let outcome = match *spec {
        FamilySpec::Krawtchouk { n_trials, .. } => {
            let mut sum = 0.0;
            for x in 0..=n_trials {
                sum += fisher_summand(spec, n, f64::from(x))?;
            }
            Ok((sum, n_trials as usize + 1))
        }
        FamilySpec::MeixnerPollaczek { .. } => {
            integrate_real_line(quad, |x| fisher_summand(spec, n, x))
        }
        _ => sum_tail(policy, |x| fisher_summand(spec, n, x as f64)),
    };
    match outcome {
        Ok((value, effort)) => Ok(NumericFisher {
            value,
            effort,
            converged: true,
        }),
        Err(Error::NotConverged { partial, effort }) => Ok(NumericFisher {
            value: partial,
            effort,
            converged: false,
        }),
        Err(e) => Err(e),
    }
}

/// Closed form per family:
///
/// ```text
/// Meixner            (2n^2 + (2n+1) beta) / (c_M (c_M-1)^2)
/// Krawtchouk         (2n^2 - (2n+1) N) / (p (p-1))
/// Charlier           (2n + 1) / a
/// Meixner-Pollaczek  2 (n^2 + (2n+1) lambda) / sin^2(phi)
/// ```
pub fn fisher_closed(spec: &FamilySpec, n: u32) -> Result<f64> {
    spec.validate()?;
    spec.check_degree(n)?;
    let nf = f64::from(n);
    Ok(match *spec {
        FamilySpec::Meixner { beta, c_m } => {
            (2.0 * nf * nf + (2.0 * nf + 1.0) * beta) / (c_m * (c_m - 1.0) * (c_m - 1.0))
        }
        FamilySpec::Krawtchouk { p, n_trials } => {
            (2.0 * nf * nf - (2.0 * nf + 1.0) * f64::from(n_trials)) / (p * (p - 1.0))
        }
        FamilySpec::Charlier { a } => (2.0 * nf + 1.0) / a,
        FamilySpec::MeixnerPollaczek { lambda, phi } => {
            let s = phi.sin();
            2.0 * (nf * nf + (2.0 * nf + 1.0) * lambda) / (s * s)
        }
    })
}

/// Closed form in terms of `z`, `z'` and `c`:
///
/// ```text
/// 2F1:  (z'/z)^2 (1 - z)^{-1} [2n^2 + (2n+1) c]
/// 2F0:  -(z'/z)^2 (2n + 1) / z
/// ```
pub fn fisher_closed_generic(zmap: &ZMap, n: u32) -> Result<f64> {
    let ZMap { c, z, dz } = *zmap;
    if z == 0.0 || z == 1.0 {
        return Err(domain(format!("generic Fisher closed form undefined at z = {z}")));
    }
    let nf = f64::from(n);
    let ratio = dz / z;
    Ok(match c {
        Some(c) => ratio * ratio / (1.0 - z) * (2.0 * nf * nf + (2.0 * nf + 1.0) * c),
        None => -ratio * ratio * (2.0 * nf + 1.0) / z,
    })
}

/// Both routes side by side.
pub fn fisher_report(
    spec: &FamilySpec,
    n: u32,
    policy: &TruncationPolicy,
    quad: &QuadratureConfig,
) -> Result<FisherReport> {
    let closed = fisher_closed(spec, n)?;
    let numeric = fisher_numeric(spec, n, policy, quad)?;
    let abs_err = (numeric.value - closed).abs();
    Ok(FisherReport {
        family: *spec,
        n,
        theta_name: spec.theta_name(),
        numeric: numeric.value,
        closed,
        abs_err,
        rel_err: if closed == 0.0 { abs_err } else { abs_err / closed.abs() },
        effort: numeric.effort,
        converged: numeric.converged,
    })
}

/// The classical distributions recovered at degree zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Distribution {
    /// `binom(r+k-1, k) p^k (1-p)^r`, information about `p`.
    NegBinomial { r: f64, p: f64 },
    /// `binom(N, k) p^k (1-p)^(N-k)`, information about `p`.
    Binomial { n_trials: u32, p: f64 },
    /// `lambda^k e^-lambda / k!`, information about `lambda`.
    Poisson { lambda: f64 },
}

impl Distribution {
    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Self::NegBinomial { r, p } => r > 0.0 && p > 0.0 && p < 1.0,
            Self::Binomial { p, .. } => p > 0.0 && p < 1.0,
            Self::Poisson { lambda } => lambda > 0.0 && lambda.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(domain(format!("distribution parameters out of range: {self:?}")))
        }
    }

    fn ln_pmf(&self, k: u64) -> f64 {
        let kf = k as f64;
        let ln_fact = |v: f64| libm::lgamma(v + 1.0);
        match *self {
            Self::NegBinomial { r, p } => {
                libm::lgamma(r + kf) - libm::lgamma(r) - ln_fact(kf) + kf * p.ln() + r * (-p).ln_1p()
            }
            Self::Binomial { n_trials, p } => {
                let nf = f64::from(n_trials);
                ln_fact(nf) - ln_fact(kf) - ln_fact(nf - kf) + kf * p.ln() + (nf - kf) * (-p).ln_1p()
            }
            Self::Poisson { lambda } => kf * lambda.ln() - lambda - ln_fact(kf),
        }
    }

    /// `d/dtheta ln pmf(k)`.
    fn score(&self, k: u64) -> f64 {
        let kf = k as f64;
        match *self {
            Self::NegBinomial { r, p } => kf / p - r / (1.0 - p),
            Self::Binomial { n_trials, p } => (kf - f64::from(n_trials) * p) / (p * (1.0 - p)),
            Self::Poisson { lambda } => (kf - lambda) / lambda,
        }
    }
}

/// `r/(p(1-p)^2)`, `N/(p(1-p))` and `1/lambda`.
pub fn distribution_fisher(dist: &Distribution) -> Result<f64> {
    dist.validate()?;
    Ok(match *dist {
        Distribution::NegBinomial { r, p } => r / (p * (1.0 - p) * (1.0 - p)),
        Distribution::Binomial { n_trials, p } => f64::from(n_trials) / (p * (1.0 - p)),
        Distribution::Poisson { lambda } => 1.0 / lambda,
    })
}

/// `E[score^2]` summed directly over the pmf.
pub fn distribution_fisher_bruteforce(dist: &Distribution, policy: &TruncationPolicy) -> Result<f64> {
    dist.validate()?;
    let term = |k: u64| {
        let s = dist.score(k);
        s * s * dist.ln_pmf(k).exp()
    };
    match *dist {
        Distribution::Binomial { n_trials, .. } => Ok((0..=u64::from(n_trials)).map(term).sum()),
        _ => sum_tail(policy, |k| Ok(term(k))).map(|(v, _)| v),
    }
}
