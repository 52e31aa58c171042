//! Oracle checks.
//!
//! Each check compares a formula against an independent route (brute-force
//! sums, quadrature, finite differences, the series form, classical
//! identities) and yields one [`CheckResult`]. [`run_suite`] walks the standard
//! parameter grid and [`write_jsonl`] emits the report, one object per line:
//!
//! ```text
//! {"check":str,"family":str,"params":{...},"n":int,"m":int|null,"residual":float,"tol":float,"passed":bool}
//! ```

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{density_rho_n, dtheta, log_norm_h, log_weight, polynomials, series_value, FamilySpec};
use crate::fisher::{distribution_fisher, fisher_closed, fisher_closed_generic, fisher_report, Distribution};
use crate::gamma::abs_gamma_sq;
use crate::quadrature::{integrate_real_line, integrate_real_line_vec, QuadratureConfig};
use crate::summation::{sum_tail, sum_tail_vec, TruncationPolicy};

/// Per-check tolerances and numeric knobs. Every key is optional in the
/// config file; missing keys take the defaults below.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    /// Truncated infinite sums (Meixner, Charlier).
    pub tol_discrete: f64,
    /// Exact finite sums (Krawtchouk).
    pub tol_exact: f64,
    /// Quadrature (Meixner-Pollaczek).
    pub tol_quad: f64,
    /// Finite-difference derivative checks.
    pub tol_fd: f64,
    /// Algebraic identities between closed forms.
    pub tol_identity: f64,
    /// Series against recurrence.
    pub tol_series: f64,
    /// `|Gamma|^2` against the hyperbolic identities.
    pub tol_gamma: f64,
    pub rel_tol: f64,
    pub max_terms: usize,
    pub small_run: usize,
    pub initial_half_width: f64,
    pub max_doublings: u32,
    pub panel_rel_tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        let policy = TruncationPolicy::default();
        let quad = QuadratureConfig::default();
        Self {
            tol_discrete: 1e-8,
            tol_exact: 1e-10,
            tol_quad: 1e-6,
            tol_fd: 1e-6,
            tol_identity: 1e-13,
            tol_series: 1e-10,
            tol_gamma: 1e-10,
            rel_tol: policy.rel_tol,
            max_terms: policy.max_terms,
            small_run: policy.small_run,
            initial_half_width: quad.initial_half_width,
            max_doublings: quad.max_doublings,
            panel_rel_tol: quad.panel_rel_tol,
        }
    }
}

impl VerifyConfig {
    /// Parses `key = value` lines (TOML syntax).
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.policy().validate()?;
        cfg.quad().validate()?;
        for (name, tol) in [
            ("tol_discrete", cfg.tol_discrete),
            ("tol_exact", cfg.tol_exact),
            ("tol_quad", cfg.tol_quad),
            ("tol_fd", cfg.tol_fd),
            ("tol_identity", cfg.tol_identity),
            ("tol_series", cfg.tol_series),
            ("tol_gamma", cfg.tol_gamma),
        ] {
            if !(tol > 0.0) {
                return Err(Error::Config(format!("{name} must be positive, got {tol}")));
            }
        }
        Ok(cfg)
    }

    pub fn policy(&self) -> TruncationPolicy {
        TruncationPolicy {
            rel_tol: self.rel_tol,
            max_terms: self.max_terms,
            small_run: self.small_run,
        }
    }

    pub fn quad(&self) -> QuadratureConfig {
        QuadratureConfig {
            initial_half_width: self.initial_half_width,
            max_doublings: self.max_doublings,
            panel_rel_tol: self.panel_rel_tol,
        }
    }

    /// Tolerance for a sum or integral over the support of `spec`.
    pub fn sum_tol(&self, spec: &FamilySpec) -> f64 {
        match spec {
            FamilySpec::Krawtchouk { .. } => self.tol_exact,
            FamilySpec::MeixnerPollaczek { .. } => self.tol_quad,
            _ => self.tol_discrete,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub family: String,
    pub params: BTreeMap<String, f64>,
    pub n: u32,
    pub m: Option<u32>,
    pub residual: f64,
    pub tol: f64,
    pub passed: bool,
}

impl CheckResult {
    fn new(check: &str, spec: &FamilySpec, n: u32, m: Option<u32>, residual: f64, tol: f64) -> Self {
        Self {
            check: check.to_string(),
            family: spec.name().to_string(),
            params: spec.params().into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            n,
            m,
            residual,
            tol,
            passed: residual <= tol,
        }
    }

    fn with_param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    /// A check that could not be evaluated.
    fn failed(check: &str, spec: &FamilySpec, n: u32, m: Option<u32>, tol: f64) -> Self {
        Self::new(check, spec, n, m, f64::INFINITY, tol)
    }
}

/// `sum_x P_i(x) P_j(x) rho(x)` (or the integral) for all `i, j <= n_max`,
/// flattened row-major.
pub fn inner_products(
    spec: &FamilySpec,
    n_max: u32,
    policy: &TruncationPolicy,
    quad: &QuadratureConfig,
) -> Result<Vec<f64>> {
    let dim = n_max as usize + 1;
    let fill = |x: f64, out: &mut [f64]| -> Result<()> {
        let lw = log_weight(spec, x)?;
        let polys = polynomials(spec, n_max, x)?;
        for i in 0..dim {
            for j in 0..dim {
                let prod = polys.values[i] * polys.values[j];
                out[i * dim + j] = if prod == 0.0 {
                    0.0
                } else {
                    prod.signum() * (prod.abs().ln() + lw).exp()
                };
            }
        }
        Ok(())
    };
    match *spec {
        FamilySpec::Krawtchouk { n_trials, .. } => {
            let mut acc = vec![0.0; dim * dim];
            let mut buf = vec![0.0; dim * dim];
            for x in 0..=n_trials {
                fill(f64::from(x), &mut buf)?;
                acc.iter_mut().zip(&buf).for_each(|(a, b)| *a += b);
            }
            Ok(acc)
        }
        FamilySpec::MeixnerPollaczek { .. } => {
            Ok(integrate_real_line_vec(quad, dim * dim, fill)?.values)
        }
        _ => Ok(sum_tail_vec(policy, dim * dim, |x, out| fill(x as f64, out))?.values),
    }
}

fn orthogonality_residuals(spec: &FamilySpec, n_max: u32, gram: &[f64]) -> Result<Vec<(u32, u32, f64)>> {
    let dim = n_max as usize + 1;
    let h: Vec<f64> = (0..=n_max)
        .map(|k| log_norm_h(spec, k).map(f64::exp))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for n in 0..=n_max {
        for m in n..=n_max {
            let (i, j) = (n as usize, m as usize);
            let expected = if i == j { h[i] } else { 0.0 };
            let residual = (gram[i * dim + j] - expected).abs() / h[i].max(h[j]);
            out.push((n, m, residual));
        }
    }
    Ok(out)
}

/// `|sum P_n P_m rho - h_n delta_nm| / max(h_n, h_m)`.
pub fn check_orthogonality(
    spec: &FamilySpec,
    n: u32,
    m: u32,
    cfg: &VerifyConfig,
) -> Result<CheckResult> {
    let n_max = n.max(m);
    let gram = inner_products(spec, n_max, &cfg.policy(), &cfg.quad())?;
    let dim = n_max as usize + 1;
    let h_n = log_norm_h(spec, n)?.exp();
    let h_m = log_norm_h(spec, m)?.exp();
    let expected = if n == m { h_n } else { 0.0 };
    let residual = (gram[n as usize * dim + m as usize] - expected).abs() / h_n.max(h_m);
    Ok(CheckResult::new("orthogonality", spec, n, Some(m), residual, cfg.sum_tol(spec)))
}

/// `|sum rho_n - 1|`, summing the normalized density directly.
pub fn check_normalization(spec: &FamilySpec, n: u32, cfg: &VerifyConfig) -> Result<CheckResult> {
    let rho = |x: f64| density_rho_n(spec, n, x).map(|d| d.rho_n);
    let total = match *spec {
        FamilySpec::Krawtchouk { n_trials, .. } => {
            let mut s = 0.0;
            for x in 0..=n_trials {
                s += rho(f64::from(x))?;
            }
            s
        }
        FamilySpec::MeixnerPollaczek { .. } => integrate_real_line(&cfg.quad(), rho)?.0,
        _ => sum_tail(&cfg.policy(), |x| rho(x as f64))?.0,
    };
    Ok(CheckResult::new("normalization", spec, n, None, (total - 1.0).abs(), cfg.sum_tol(spec)))
}

/// Analytic `dP_n/dtheta` against a central difference of the series form.
///
/// The residual is `|analytic - fd| / scale` where `scale` is the largest of
/// `|analytic|`, `|fd|`, `|P_n(x)|` and the magnitude of the two terms in the
/// derivative formula, so that a derivative that is small through
/// cancellation or symmetry is measured against the size of what cancelled.
pub fn check_derivative_fd(
    spec: &FamilySpec,
    n: u32,
    x: f64,
    h: Option<f64>,
    cfg: &VerifyConfig,
) -> Result<CheckResult> {
    let theta = spec.theta();
    let h = h.unwrap_or(1e-5 * theta.abs().max(1.0));
    let polys = polynomials(spec, n, x)?;
    let analytic = dtheta(spec, n, &polys)?;
    let up = series_value(&spec.with_theta(theta + h), n, x)?;
    let down = series_value(&spec.with_theta(theta - h), n, x)?;
    let fd = (up - down) / (2.0 * h);
    let k = i64::from(n);
    let nf = f64::from(n);
    let term_scale = match (*spec, spec.zmap()) {
        (FamilySpec::MeixnerPollaczek { lambda, phi }, _) => {
            nf * (phi.cos() / phi.sin()).abs() * polys.get(k).abs()
                + (nf + 2.0 * lambda - 1.0).abs() / phi.sin() * polys.get(k - 1).abs()
        }
        (_, Some(zm)) => nf * (zm.dz / zm.z).abs() * (polys.get(k).abs() + polys.get(k - 1).abs()),
        (_, None) => 0.0,
    };
    let scale = analytic.abs().max(fd.abs()).max(term_scale).max(polys.get(k).abs());
    let residual = if scale == 0.0 { 0.0 } else { (analytic - fd).abs() / scale };
    Ok(CheckResult::new("derivative_fd", spec, n, None, residual, cfg.tol_fd).with_param("x", x))
}

/// Numeric against closed-form Fisher information; residual is the report's
/// `rel_err`.
pub fn check_fisher_agreement(spec: &FamilySpec, n: u32, cfg: &VerifyConfig) -> Result<CheckResult> {
    let report = fisher_report(spec, n, &cfg.policy(), &cfg.quad())?;
    if !report.converged {
        return Err(Error::NotConverged {
            partial: report.numeric,
            effort: report.effort,
        });
    }
    Ok(CheckResult::new("fisher_agreement", spec, n, None, report.rel_err, cfg.sum_tol(spec)))
}

/// Largest `|series - recurrence| / max(1, |series|)` over the given points.
pub fn check_series_recurrence(
    spec: &FamilySpec,
    n: u32,
    xs: &[f64],
    cfg: &VerifyConfig,
) -> Result<CheckResult> {
    let mut worst: f64 = 0.0;
    for &x in xs {
        let rec = *polynomials(spec, n, x)?.values.last().expect("degree >= 0");
        let ser = series_value(spec, n, x)?;
        worst = worst.max((ser - rec).abs() / ser.abs().max(1.0));
    }
    Ok(CheckResult::new("series_recurrence", spec, n, None, worst, cfg.tol_series))
}

/// Generic `(z, z', c)` closed form against the per-family one.
pub fn check_closed_generic(spec: &FamilySpec, n: u32, cfg: &VerifyConfig) -> Result<CheckResult> {
    let zmap = spec
        .zmap()
        .ok_or_else(|| Error::Domain(format!("{spec} has no z-map")))?;
    let specific = fisher_closed(spec, n)?;
    let generic = fisher_closed_generic(&zmap, n)?;
    let residual = (generic - specific).abs() / specific.abs();
    Ok(CheckResult::new("closed_generic", spec, n, None, residual, cfg.tol_identity))
}

/// The classical distribution a discrete family reduces to at degree zero.
pub fn degree_zero_distribution(spec: &FamilySpec) -> Option<Distribution> {
    match *spec {
        FamilySpec::Meixner { beta, c_m } => Some(Distribution::NegBinomial { r: beta, p: c_m }),
        FamilySpec::Krawtchouk { p, n_trials } => Some(Distribution::Binomial { n_trials, p }),
        FamilySpec::Charlier { a } => Some(Distribution::Poisson { lambda: a }),
        FamilySpec::MeixnerPollaczek { .. } => None,
    }
}

/// `I(P_0)` against the Fisher information of the classical distribution.
pub fn check_degree_zero(spec: &FamilySpec, cfg: &VerifyConfig) -> Result<CheckResult> {
    let dist = degree_zero_distribution(spec)
        .ok_or_else(|| Error::Domain(format!("{spec} has no classical degree-zero law")))?;
    let closed = fisher_closed(spec, 0)?;
    let classical = distribution_fisher(&dist)?;
    let residual = (closed - classical).abs() / classical.abs();
    Ok(CheckResult::new("degree_zero", spec, 0, None, residual, cfg.tol_identity))
}

/// `|Gamma(lambda + ix)|^2` against `pi x / sinh(pi x)` (`lambda = 1`) or
/// `pi / cosh(pi x)` (`lambda = 1/2`) on `|x| <= 30`; worst relative error.
pub fn check_gamma_identity(lambda: f64, cfg: &VerifyConfig) -> Result<CheckResult> {
    let oracle = |x: f64| -> Result<f64> {
        if lambda == 1.0 {
            Ok(if x == 0.0 { 1.0 } else { PI * x / (PI * x).sinh() })
        } else if lambda == 0.5 {
            Ok(PI / (PI * x).cosh())
        } else {
            Err(Error::Domain(format!("no closed form for |Gamma({lambda} + ix)|^2")))
        }
    };
    let mut worst: f64 = 0.0;
    for i in -120..=120 {
        let x = f64::from(i) * 0.25;
        let expected = oracle(x)?;
        worst = worst.max((abs_gamma_sq(lambda, x) - expected).abs() / expected);
    }
    let spec = FamilySpec::MeixnerPollaczek {
        lambda,
        phi: PI / 2.0,
    };
    let mut out = CheckResult::new("gamma_identity", &spec, 0, None, worst, cfg.tol_gamma);
    out.params.remove("phi");
    Ok(out)
}

/// One parameter point of the standard grid and the largest degree checked.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub spec: FamilySpec,
    /// Largest degree for Fisher agreement.
    pub n_fisher: u32,
    /// Largest degree for orthogonality, normalization and derivatives.
    pub n_poly: u32,
}

/// The parameter grid shared by the suite and the acceptance tests.
pub fn standard_grid() -> Vec<GridPoint> {
    let mut grid = Vec::new();
    for a in [0.5, 1.0, 2.0, 5.0] {
        grid.push(GridPoint {
            spec: FamilySpec::Charlier { a },
            n_fisher: 10,
            n_poly: 10,
        });
    }
    for beta in [0.5, 1.0, 3.5] {
        for c_m in [0.1, 0.5, 0.9] {
            grid.push(GridPoint {
                spec: FamilySpec::Meixner { beta, c_m },
                n_fisher: 10,
                n_poly: 10,
            });
        }
    }
    for n_trials in [5, 10, 50] {
        for p in [0.1, 0.5, 0.9] {
            grid.push(GridPoint {
                spec: FamilySpec::Krawtchouk { p, n_trials },
                n_fisher: n_trials - 1,
                n_poly: n_trials.min(10),
            });
        }
    }
    for lambda in [0.5, 1.0, 2.0] {
        for phi in [PI / 4.0, PI / 2.0, 3.0 * PI / 4.0] {
            grid.push(GridPoint {
                spec: FamilySpec::MeixnerPollaczek { lambda, phi },
                n_fisher: 8,
                n_poly: 10,
            });
        }
    }
    grid
}

/// Five evaluation points for derivative checks.
pub fn derivative_points(spec: &FamilySpec) -> Vec<f64> {
    match *spec {
        FamilySpec::Krawtchouk { n_trials, .. } => {
            let n = f64::from(n_trials);
            [0.0, 0.25, 0.5, 0.75, 1.0].iter().map(|f| (f * n).round()).collect()
        }
        FamilySpec::Charlier { a } => vec![0.0, 1.3, a, a + 2.0 * a.sqrt() + 0.5, 2.0 * a + 5.0],
        FamilySpec::Meixner { beta, c_m } => {
            let mean = beta * c_m / (1.0 - c_m);
            vec![0.0, 1.3, mean, 2.0 * mean + 2.2, 3.0 * mean + 6.0]
        }
        FamilySpec::MeixnerPollaczek { .. } => vec![-3.1, -0.9, 0.0, 0.7, 2.6],
    }
}

/// Twenty points in the natural support for series/recurrence comparisons.
pub fn series_points(spec: &FamilySpec) -> Vec<f64> {
    match *spec {
        FamilySpec::Krawtchouk { n_trials, .. } => {
            let n = f64::from(n_trials);
            (0..20).map(|i| (f64::from(i) * n / 19.0).round()).collect()
        }
        FamilySpec::Charlier { a } => (0..20).map(|i| f64::from(i) * (3.0 * a + 10.0) / 19.0).collect(),
        FamilySpec::Meixner { beta, c_m } => {
            let hi = 3.0 * beta * c_m / (1.0 - c_m) + 10.0;
            (0..20).map(|i| f64::from(i) * hi / 19.0).collect()
        }
        FamilySpec::MeixnerPollaczek { .. } => (0..20).map(|i| -6.0 + f64::from(i) * 12.0 / 19.0).collect(),
    }
}

const SERIES_MAX_DEGREE: u32 = 15;

fn record(out: &mut Vec<CheckResult>, fallback: CheckResult, result: Result<CheckResult>) {
    out.push(result.unwrap_or(fallback));
}

/// Every check over [`standard_grid`], in a fixed order.
pub fn run_suite(cfg: &VerifyConfig) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for lambda in [1.0, 0.5] {
        let spec = FamilySpec::MeixnerPollaczek { lambda, phi: PI / 2.0 };
        let fallback = CheckResult::failed("gamma_identity", &spec, 0, None, cfg.tol_gamma);
        record(&mut out, fallback, check_gamma_identity(lambda, cfg));
    }
    for point in standard_grid() {
        let spec = &point.spec;
        let sum_tol = cfg.sum_tol(spec);

        for n in 0..=point.n_fisher {
            let fallback = CheckResult::failed("fisher_agreement", spec, n, None, sum_tol);
            record(&mut out, fallback, check_fisher_agreement(spec, n, cfg));
        }
        if spec.is_discrete() {
            for n in 0..=point.n_fisher {
                let fallback = CheckResult::failed("closed_generic", spec, n, None, cfg.tol_identity);
                record(&mut out, fallback, check_closed_generic(spec, n, cfg));
            }
            let fallback = CheckResult::failed("degree_zero", spec, 0, None, cfg.tol_identity);
            record(&mut out, fallback, check_degree_zero(spec, cfg));
        }

        match inner_products(spec, point.n_poly, &cfg.policy(), &cfg.quad())
            .and_then(|gram| orthogonality_residuals(spec, point.n_poly, &gram))
        {
            Ok(rows) => {
                for (n, m, residual) in rows {
                    out.push(CheckResult::new("orthogonality", spec, n, Some(m), residual, sum_tol));
                }
            }
            Err(_) => {
                for n in 0..=point.n_poly {
                    for m in n..=point.n_poly {
                        out.push(CheckResult::failed("orthogonality", spec, n, Some(m), sum_tol));
                    }
                }
            }
        }
        for n in 0..=point.n_poly {
            let fallback = CheckResult::failed("normalization", spec, n, None, sum_tol);
            record(&mut out, fallback, check_normalization(spec, n, cfg));
        }
        for n in 1..=point.n_poly {
            for x in derivative_points(spec) {
                let fallback =
                    CheckResult::failed("derivative_fd", spec, n, None, cfg.tol_fd).with_param("x", x);
                record(&mut out, fallback, check_derivative_fd(spec, n, x, None, cfg));
            }
        }
        let xs = series_points(spec);
        let series_max = spec.max_degree().map_or(SERIES_MAX_DEGREE, |m| m.min(SERIES_MAX_DEGREE));
        for n in 0..=series_max {
            let fallback = CheckResult::failed("series_recurrence", spec, n, None, cfg.tol_series);
            record(&mut out, fallback, check_series_recurrence(spec, n, &xs, cfg));
        }
    }
    out
}

/// Writes one JSON object per line.
pub fn write_jsonl<W: Write>(mut w: W, results: &[CheckResult]) -> std::io::Result<()> {
    for r in results {
        serde_json::to_writer(&mut w, r)?;
        writeln!(w)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> VerifyConfig {
        VerifyConfig::default()
    }

    #[test]
    fn orthogonality_examples() {
        let c = FamilySpec::charlier(1.0).unwrap();
        assert!(check_orthogonality(&c, 2, 5, &cfg()).unwrap().passed);
        let k = FamilySpec::krawtchouk(0.3, 6).unwrap();
        let r = check_orthogonality(&k, 3, 3, &cfg()).unwrap();
        assert!(r.residual <= 1e-12, "{r:?}");
        let m = FamilySpec::meixner(2.0, 0.4).unwrap();
        let r = check_orthogonality(&m, 0, 0, &cfg()).unwrap();
        assert!(r.residual <= 1e-12, "{r:?}");
    }

    #[test]
    fn normalization_examples() {
        let c = FamilySpec::charlier(3.0).unwrap();
        assert!(check_normalization(&c, 0, &cfg()).unwrap().residual <= 1e-12);
        let m = FamilySpec::meixner(2.5, 0.8).unwrap();
        assert!(check_normalization(&m, 7, &cfg()).unwrap().residual <= 1e-8);
        let mp = FamilySpec::meixner_pollaczek(0.5, PI / 3.0).unwrap();
        assert!(check_normalization(&mp, 4, &cfg()).unwrap().residual <= 1e-6);
    }

    #[test]
    fn derivative_examples() {
        let c = FamilySpec::charlier(2.0).unwrap();
        assert_eq!(check_derivative_fd(&c, 1, 0.0, None, &cfg()).unwrap().residual, 0.0);
        let m = FamilySpec::meixner(1.5, 0.4).unwrap();
        assert!(check_derivative_fd(&m, 4, 2.2, None, &cfg()).unwrap().residual <= 1e-6);
        let mp = FamilySpec::meixner_pollaczek(1.0, 1.0).unwrap();
        assert!(check_derivative_fd(&mp, 3, 0.7, None, &cfg()).unwrap().residual <= 1e-6);
    }

    #[test]
    fn fisher_agreement_examples() {
        let c = FamilySpec::charlier(0.5).unwrap();
        assert!(check_fisher_agreement(&c, 10, &cfg()).unwrap().residual <= 1e-8);
        let k = FamilySpec::krawtchouk(0.9, 20).unwrap();
        assert!(check_fisher_agreement(&k, 7, &cfg()).unwrap().residual <= 1e-10);
        let mp = FamilySpec::meixner_pollaczek(2.0, 3.0 * PI / 4.0).unwrap();
        assert!(check_fisher_agreement(&mp, 8, &cfg()).unwrap().residual <= 1e-6);
    }

    #[test]
    fn passed_flag_follows_tolerance() {
        let spec = FamilySpec::charlier(1.0).unwrap();
        assert!(CheckResult::new("x", &spec, 0, None, 1e-9, 1e-8).passed);
        assert!(CheckResult::new("x", &spec, 0, None, 1e-9, 1e-9).passed);
        assert!(!CheckResult::new("x", &spec, 0, None, 2e-9, 1e-9).passed);
        assert!(!CheckResult::failed("x", &spec, 0, None, 1.0).passed);
    }

    #[test]
    fn config_parsing() {
        let c = VerifyConfig::from_toml_str("").unwrap();
        assert_eq!(c, VerifyConfig::default());
        let c = VerifyConfig::from_toml_str("tol_discrete = 1e-9\n# comment\nmax_terms = 500\n").unwrap();
        assert_eq!(c.tol_discrete, 1e-9);
        assert_eq!(c.max_terms, 500);
        assert!(VerifyConfig::from_toml_str("bogus = 1").is_err());
        assert!(VerifyConfig::from_toml_str("tol_quad = -1.0").is_err());
        assert!(VerifyConfig::from_toml_str("rel_tol = 0.0").is_err());
    }

    #[test]
    fn jsonl_schema() {
        let spec = FamilySpec::krawtchouk(0.5, 4).unwrap();
        let rows = vec![
            CheckResult::new("orthogonality", &spec, 1, Some(2), 1e-17, 1e-10),
            CheckResult::new("normalization", &spec, 1, None, 0.0, 1e-10),
        ];
        let mut buf = Vec::new();
        write_jsonl(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        let v: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys, ["check", "family", "m", "n", "params", "passed", "residual", "tol"]);
        assert_eq!(v["m"], 2);
        assert_eq!(v["params"]["N"], 4.0);
        let v: serde_json::Value = serde_json::from_str(lines[1]).unwrap();
        assert!(v["m"].is_null());
    }
}
