//! The four polynomial families, their weights, norms and normalized densities.
//!
//! | family            | polynomial                                   | theta |
//! |-------------------|----------------------------------------------|-------|
//! | Meixner           | `2F1(-n, -x; beta; 1 - 1/c_M)`               | `c_M` |
//! | Krawtchouk        | `2F1(-n, -x; -N; 1/p)`                       | `p`   |
//! | Charlier          | `2F0(-n, -x; -; -1/a)`                       | `a`   |
//! | Meixner-Pollaczek | `P_n^(lambda)(x; phi)`                       | `phi` |
//!
//! Weights, norms and densities are assembled in log space. The weight of a
//! discrete family is unnormalized (it sums to `h_0`), and `rho_n` is the
//! probability density `P_n^2 rho / h_n`.
//!
//! The Krawtchouk weight is stored in its binomial form
//! `binom(N, x) p^x (1-p)^(N-x)`, which differs from the hypergeometric form
//! `(-N)_x / ((1 - 1/p)^x x!)` by the constant factor `(1-p)^N`. Its norm is
//! scaled by the same factor so `rho_n` is unchanged; see
//! [`hypergeometric_log_weight`] for the unscaled pair.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{domain, Result};
use crate::gamma::ln_abs_gamma_sq;
use crate::hypergeom::{
    dphi_meixner_pollaczek, dtheta_poly, pochhammer, recurrence_meixner_pollaczek,
    krawtchouk_column, series_meixner_pollaczek, PochhammerValue, PolyEval, ZMap,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilySpec {
    /// `beta > 0`, `0 < c_m < 1`.
    Meixner { beta: f64, c_m: f64 },
    /// `0 < p < 1`, `N >= 0`; degrees are limited to `n <= N`.
    Krawtchouk { p: f64, n_trials: u32 },
    /// `a > 0`.
    Charlier { a: f64 },
    /// `lambda > 0`, `0 < phi < pi`.
    MeixnerPollaczek { lambda: f64, phi: f64 },
}

impl FamilySpec {
    pub fn meixner(beta: f64, c_m: f64) -> Result<Self> {
        Self::Meixner { beta, c_m }.validated()
    }

    pub fn krawtchouk(p: f64, n_trials: u32) -> Result<Self> {
        Self::Krawtchouk { p, n_trials }.validated()
    }

    pub fn charlier(a: f64) -> Result<Self> {
        Self::Charlier { a }.validated()
    }

    pub fn meixner_pollaczek(lambda: f64, phi: f64) -> Result<Self> {
        Self::MeixnerPollaczek { lambda, phi }.validated()
    }

    fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Self::Meixner { beta, c_m } => beta > 0.0 && beta.is_finite() && c_m > 0.0 && c_m < 1.0,
            Self::Krawtchouk { p, .. } => p > 0.0 && p < 1.0,
            Self::Charlier { a } => a > 0.0 && a.is_finite(),
            Self::MeixnerPollaczek { lambda, phi } => {
                lambda > 0.0 && lambda.is_finite() && phi > 0.0 && phi < PI
            }
        };
        if ok {
            Ok(())
        } else {
            Err(domain(format!("parameters out of range: {self}")))
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Meixner { .. } => "meixner",
            Self::Krawtchouk { .. } => "krawtchouk",
            Self::Charlier { .. } => "charlier",
            Self::MeixnerPollaczek { .. } => "meixner-pollaczek",
        }
    }

    /// Named parameters in a fixed order.
    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match *self {
            Self::Meixner { beta, c_m } => vec![("beta", beta), ("c", c_m)],
            Self::Krawtchouk { p, n_trials } => vec![("p", p), ("N", f64::from(n_trials))],
            Self::Charlier { a } => vec![("a", a)],
            Self::MeixnerPollaczek { lambda, phi } => vec![("lambda", lambda), ("phi", phi)],
        }
    }

    /// Symbol of the parameter the Fisher information is taken with respect to.
    pub fn theta_name(&self) -> &'static str {
        match self {
            Self::Meixner { .. } => "c_M",
            Self::Krawtchouk { .. } => "p",
            Self::Charlier { .. } => "a",
            Self::MeixnerPollaczek { .. } => "phi",
        }
    }

    pub fn theta(&self) -> f64 {
        match *self {
            Self::Meixner { c_m, .. } => c_m,
            Self::Krawtchouk { p, .. } => p,
            Self::Charlier { a } => a,
            Self::MeixnerPollaczek { phi, .. } => phi,
        }
    }

    /// Same family and shape constants with the distinguished parameter replaced.
    pub fn with_theta(&self, theta: f64) -> Self {
        match *self {
            Self::Meixner { beta, .. } => Self::Meixner { beta, c_m: theta },
            Self::Krawtchouk { n_trials, .. } => Self::Krawtchouk { p: theta, n_trials },
            Self::Charlier { .. } => Self::Charlier { a: theta },
            Self::MeixnerPollaczek { lambda, .. } => Self::MeixnerPollaczek { lambda, phi: theta },
        }
    }

    pub fn is_discrete(&self) -> bool {
        !matches!(self, Self::MeixnerPollaczek { .. })
    }

    /// Largest admissible degree, if the family is finite.
    pub fn max_degree(&self) -> Option<u32> {
        match *self {
            Self::Krawtchouk { n_trials, .. } => Some(n_trials),
            _ => None,
        }
    }

    /// `z(theta)`, `z'(theta)` and the `2F1` parameter `c`. `None` for
    /// Meixner-Pollaczek, which has no real hypergeometric form.
    pub fn zmap(&self) -> Option<ZMap> {
        match *self {
            Self::Meixner { beta, c_m } => Some(ZMap::gauss(beta, 1.0 - 1.0 / c_m, 1.0 / (c_m * c_m))),
            Self::Krawtchouk { p, n_trials } => {
                Some(ZMap::gauss(-f64::from(n_trials), 1.0 / p, -1.0 / (p * p)))
            }
            Self::Charlier { a } => Some(ZMap::confluent(-1.0 / a, 1.0 / (a * a))),
            Self::MeixnerPollaczek { .. } => None,
        }
    }

    pub fn check_degree(&self, n: u32) -> Result<()> {
        match self.max_degree() {
            Some(max) if n > max => Err(domain(format!("degree {n} exceeds N = {max} for {self}"))),
            _ => Ok(()),
        }
    }

    pub fn check_support(&self, x: f64) -> Result<()> {
        if !x.is_finite() {
            return Err(domain(format!("non-finite support point {x}")));
        }
        if self.is_discrete() {
            if x < 0.0 || x.fract() != 0.0 {
                return Err(domain(format!("{x} is not a non-negative integer ({self})")));
            }
            if let Some(max) = self.max_degree() {
                if x > f64::from(max) {
                    return Err(domain(format!("{x} lies beyond N = {max}")));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.name())?;
        for (i, (k, v)) in self.params().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k}={v}")?;
        }
        write!(f, ")")
    }
}

/// One point of a normalized density `rho_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityPoint {
    pub x: f64,
    pub log_rho_n: f64,
    pub rho_n: f64,
}

/// `P_0(x) .. P_n(x)` by the family's recurrence.
///
/// Krawtchouk polynomials at a support point go through
/// [`krawtchouk_column`]. Meixner and Charlier polynomials are self-dual,
/// `P_m(x) = P_x(m)` at integers, and the upward recurrence in `m` loses
/// about a digit per step past `m = x` when `c_M` or `a` is small; those
/// degrees are evaluated as the degree-`x` polynomial at the point `m`.
/// Elsewhere the plain upward recurrence is used.
pub fn polynomials(spec: &FamilySpec, n: u32, x: f64) -> Result<PolyEval> {
    spec.validate()?;
    spec.check_degree(n)?;
    let support_int = x >= 0.0 && x.fract() == 0.0;
    match (*spec, spec.zmap()) {
        (FamilySpec::MeixnerPollaczek { lambda, phi }, _) => {
            Ok(recurrence_meixner_pollaczek(n, x, lambda, phi))
        }
        (FamilySpec::Krawtchouk { n_trials, .. }, Some(zmap))
            if support_int && x <= f64::from(n_trials) =>
        {
            let mut column = krawtchouk_column(x as u32, &zmap)?;
            column.values.truncate(n as usize + 1);
            Ok(column)
        }
        (FamilySpec::Meixner { .. } | FamilySpec::Charlier { .. }, Some(zmap))
            if support_int && x < f64::from(n) =>
        {
            let k = x as u32;
            let mut out = zmap.recurrence(k, x)?;
            for m in k + 1..=n {
                let dual = zmap.recurrence(k, f64::from(m))?;
                out.values.push(dual.values[k as usize]);
            }
            Ok(out)
        }
        (_, Some(zmap)) => zmap.recurrence(n, x),
        (_, None) => unreachable!("discrete families always have a z-map"),
    }
}

/// `P_n(x)` from the hypergeometric series.
pub fn series_value(spec: &FamilySpec, n: u32, x: f64) -> Result<f64> {
    spec.validate()?;
    spec.check_degree(n)?;
    match (*spec, spec.zmap()) {
        (FamilySpec::MeixnerPollaczek { lambda, phi }, _) => {
            Ok(series_meixner_pollaczek(n, x, lambda, phi))
        }
        (_, Some(zmap)) => zmap.series(n, x),
        (_, None) => unreachable!("discrete families always have a z-map"),
    }
}

/// `dP_n/dtheta` from the recurrence values in `polys`.
pub fn dtheta(spec: &FamilySpec, n: u32, polys: &PolyEval) -> Result<f64> {
    match (*spec, spec.zmap()) {
        (FamilySpec::MeixnerPollaczek { lambda, phi }, _) => {
            dphi_meixner_pollaczek(n, lambda, phi, polys)
        }
        (_, Some(zmap)) => dtheta_poly(n, &zmap, polys),
        (_, None) => unreachable!("discrete families always have a z-map"),
    }
}

fn ln_factorial(x: f64) -> f64 {
    libm::lgamma(x + 1.0)
}

fn ln_binomial(n: f64, k: f64) -> f64 {
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// `ln rho(x)` of the orthogonality weight.
pub fn log_weight(spec: &FamilySpec, x: f64) -> Result<f64> {
    spec.validate()?;
    spec.check_support(x)?;
    Ok(match *spec {
        FamilySpec::Meixner { beta, c_m } => {
            pochhammer(beta, x as u32).log_abs + x * c_m.ln() - ln_factorial(x)
        }
        FamilySpec::Krawtchouk { p, n_trials } => {
            let n = f64::from(n_trials);
            ln_binomial(n, x) + x * p.ln() + (n - x) * (-p).ln_1p()
        }
        FamilySpec::Charlier { a } => x * a.ln() - ln_factorial(x),
        FamilySpec::MeixnerPollaczek { lambda, phi } => {
            (2.0 * phi - PI) * x + ln_abs_gamma_sq(lambda, x) - (2.0 * PI).ln()
        }
    })
}

/// `ln h_n`, the squared norm of `P_n` against [`log_weight`].
pub fn log_norm_h(spec: &FamilySpec, n: u32) -> Result<f64> {
    spec.validate()?;
    spec.check_degree(n)?;
    let nf = f64::from(n);
    Ok(match *spec {
        FamilySpec::Meixner { beta, c_m } => {
            -beta * (-c_m).ln_1p() - nf * c_m.ln() + ln_factorial(nf) - pochhammer(beta, n).log_abs
        }
        FamilySpec::Krawtchouk { p, n_trials } => {
            nf * ((1.0 - p) / p).ln() - ln_binomial(f64::from(n_trials), nf)
        }
        FamilySpec::Charlier { a } => -nf * a.ln() + ln_factorial(nf) + a,
        FamilySpec::MeixnerPollaczek { lambda, phi } => {
            libm::lgamma(nf + 2.0 * lambda)
                - 2.0 * lambda * (2.0 * phi.sin()).ln()
                - ln_factorial(nf)
        }
    })
}

/// `rho_n(x) = P_n(x)^2 rho(x) / h_n`.
pub fn density_rho_n(spec: &FamilySpec, n: u32, x: f64) -> Result<DensityPoint> {
    let lw = log_weight(spec, x)?;
    let lh = log_norm_h(spec, n)?;
    let pn = *polynomials(spec, n, x)?.values.last().expect("degree >= 0");
    if pn == 0.0 {
        return Ok(DensityPoint {
            x,
            log_rho_n: f64::NEG_INFINITY,
            rho_n: 0.0,
        });
    }
    let log_rho_n = 2.0 * pn.abs().ln() + lw - lh;
    Ok(DensityPoint {
        x,
        log_rho_n,
        rho_n: log_rho_n.exp(),
    })
}

/// The weight `(c)_x / ((1 - z)^x x!)` exactly as it comes out of the
/// `2F1` orthogonality relation, as a signed log value.
pub fn hypergeometric_log_weight(zmap: &ZMap, x: u32) -> Result<PochhammerValue> {
    let c = zmap
        .c
        .ok_or_else(|| domain("hypergeometric weight needs a 2F1 z-map"))?;
    let xf = f64::from(x);
    let poch = pochhammer(c, x);
    let base = 1.0 - zmap.z;
    let sign = poch.sign * if base < 0.0 && x % 2 == 1 { -1 } else { 1 };
    Ok(PochhammerValue {
        log_abs: poch.log_abs - xf * base.abs().ln() - ln_factorial(xf),
        sign,
    })
}

/// `h_n = (1 - 1/z)^c (1 - z)^n n! / (c)_n` as a signed log value.
pub fn hypergeometric_log_norm(zmap: &ZMap, n: u32) -> Result<PochhammerValue> {
    let c = zmap
        .c
        .ok_or_else(|| domain("hypergeometric norm needs a 2F1 z-map"))?;
    let outer = 1.0 - 1.0 / zmap.z;
    if outer <= 0.0 {
        return Err(domain(format!("(1 - 1/z)^c with 1 - 1/z = {outer} <= 0")));
    }
    let poch = pochhammer(c, n);
    if poch.sign == 0 {
        return Err(domain(format!("(c)_n vanishes for c = {c}, n = {n}")));
    }
    let nf = f64::from(n);
    let base = 1.0 - zmap.z;
    let sign = poch.sign * if base < 0.0 && n % 2 == 1 { -1 } else { 1 };
    Ok(PochhammerValue {
        log_abs: c * outer.ln() + nf * base.abs().ln() + ln_factorial(nf) - poch.log_abs,
        sign,
    })
}
