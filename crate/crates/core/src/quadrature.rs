//! Adaptive Simpson quadrature over the whole real line.
//!
//! The integrands handled here decay exponentially in `|x|`, so the line is
//! replaced by `[-X, X]` and `X` is doubled until the integrand at both ends
//! is negligible. Integrands may be vector valued; every component shares the
//! nodes and must meet its own tolerance.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub initial_half_width: f64,
    pub max_doublings: u32,
    /// Local error target relative to the L1 scale of each component, and
    /// the endpoint test threshold.
    pub panel_rel_tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            initial_half_width: 40.0,
            max_doublings: 6,
            panel_rel_tol: 1e-9,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.initial_half_width > 0.0) || !(self.panel_rel_tol > 0.0) {
            return Err(Error::Config(format!("invalid quadrature config {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadOutcome {
    pub values: Vec<f64>,
    pub nodes: usize,
    pub half_width: f64,
}

const BASE_PANELS: usize = 64;
const MAX_DEPTH: u32 = 48;

struct Integrator<'a, F> {
    f: F,
    dim: usize,
    nodes: usize,
    eps_density: &'a [f64],
}

impl<F> Integrator<'_, F>
where
    F: FnMut(f64, &mut [f64]) -> Result<()>,
{
    fn eval(&mut self, x: f64) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.dim];
        (self.f)(x, &mut out)?;
        self.nodes += 1;
        if let Some(bad) = out.iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite integrand {bad} at x = {x}")));
        }
        Ok(out)
    }

    fn simpson(h: f64, fa: &[f64], fm: &[f64], fb: &[f64]) -> Vec<f64> {
        fa.iter()
            .zip(fm)
            .zip(fb)
            .map(|((a, m), b)| h / 6.0 * (a + 4.0 * m + b))
            .collect()
    }

    /// Adaptive Simpson on `[a, b]` given samples at both ends and the middle.
    fn panel(
        &mut self,
        a: f64,
        b: f64,
        fa: Vec<f64>,
        fm: Vec<f64>,
        fb: Vec<f64>,
        acc: &mut [f64],
    ) -> Result<()> {
        let whole = Self::simpson(b - a, &fa, &fm, &fb);
        let mut stack = vec![(a, b, fa, fm, fb, whole, 0u32)];
        while let Some((a, b, fa, fm, fb, whole, depth)) = stack.pop() {
            let m = 0.5 * (a + b);
            let fl = self.eval(0.5 * (a + m))?;
            let fr = self.eval(0.5 * (m + b))?;
            let left = Self::simpson(m - a, &fa, &fl, &fm);
            let right = Self::simpson(b - m, &fm, &fr, &fb);
            let width = b - a;
            let accept = depth >= MAX_DEPTH
                || (0..self.dim).all(|i| {
                    (left[i] + right[i] - whole[i]).abs() <= 15.0 * self.eps_density[i] * width
                });
            if accept {
                for i in 0..self.dim {
                    let two = left[i] + right[i];
                    acc[i] += two + (two - whole[i]) / 15.0;
                }
            } else {
                stack.push((m, b, fm.clone(), fr, fb, right, depth + 1));
                stack.push((a, m, fa, fl, fm, left, depth + 1));
            }
        }
        Ok(())
    }
}

/// Integrates `[lo, hi]` split into uniform base panels. Returns the
/// per-component L1 scale seen on the base grid alongside the samples.
fn base_samples<F>(f: &mut F, dim: usize, lo: f64, hi: f64) -> Result<Vec<(f64, Vec<f64>)>>
where
    F: FnMut(f64, &mut [f64]) -> Result<()>,
{
    let npts = 2 * BASE_PANELS + 1;
    let step = (hi - lo) / (npts - 1) as f64;
    (0..npts)
        .map(|k| {
            let x = if k == npts - 1 { hi } else { lo + step * k as f64 };
            let mut out = vec![0.0; dim];
            f(x, &mut out)?;
            Ok((x, out))
        })
        .collect()
}

fn integrate_range<F>(
    f: &mut F,
    dim: usize,
    lo: f64,
    hi: f64,
    tol: f64,
    scale: Option<&[f64]>,
    acc: &mut [f64],
) -> Result<(usize, Vec<f64>)>
where
    F: FnMut(f64, &mut [f64]) -> Result<()>,
{
    let samples = base_samples(f, dim, lo, hi)?;
    let scale: Vec<f64> = match scale {
        Some(s) => s.to_vec(),
        None => {
            let mut s = vec![0.0; dim];
            for k in (0..samples.len() - 1).step_by(2) {
                let h = samples[k + 2].0 - samples[k].0;
                for (i, si) in s.iter_mut().enumerate() {
                    *si += h / 6.0
                        * (samples[k].1[i].abs()
                            + 4.0 * samples[k + 1].1[i].abs()
                            + samples[k + 2].1[i].abs());
                }
            }
            s
        }
    };
    let total_width = hi - lo;
    let eps_density: Vec<f64> = scale
        .iter()
        .map(|s| tol * s.max(f64::MIN_POSITIVE) / total_width)
        .collect();
    let mut integ = Integrator {
        f: &mut *f,
        dim,
        nodes: samples.len(),
        eps_density: &eps_density,
    };
    for k in (0..samples.len() - 1).step_by(2) {
        integ.panel(
            samples[k].0,
            samples[k + 2].0,
            samples[k].1.clone(),
            samples[k + 1].1.clone(),
            samples[k + 2].1.clone(),
            acc,
        )?;
    }
    Ok((integ.nodes, scale))
}

/// Integrates a vector-valued `f` over the real line.
pub fn integrate_real_line_vec<F>(cfg: &QuadratureConfig, dim: usize, mut f: F) -> Result<QuadOutcome>
where
    F: FnMut(f64, &mut [f64]) -> Result<()>,
{
    cfg.validate()?;
    let mut x_half = cfg.initial_half_width;
    let mut acc = vec![0.0; dim];
    let (mut nodes, scale) =
        integrate_range(&mut f, dim, -x_half, x_half, cfg.panel_rel_tol, None, &mut acc)?;
    let mut buf = vec![0.0; dim];
    let mut doublings = 0;
    loop {
        let mut tails_small = true;
        for x in [-x_half, x_half] {
            f(x, &mut buf)?;
            nodes += 1;
            for i in 0..dim {
                if buf[i].abs() > cfg.panel_rel_tol * scale[i].max(f64::MIN_POSITIVE) {
                    tails_small = false;
                }
            }
        }
        if tails_small {
            return Ok(QuadOutcome {
                values: acc,
                nodes,
                half_width: x_half,
            });
        }
        if doublings >= cfg.max_doublings {
            return Err(Error::NotConverged {
                partial: acc.first().copied().unwrap_or(0.0),
                effort: nodes,
            });
        }
        for (lo, hi) in [(-2.0 * x_half, -x_half), (x_half, 2.0 * x_half)] {
            let (k, _) =
                integrate_range(&mut f, dim, lo, hi, cfg.panel_rel_tol, Some(&scale), &mut acc)?;
            nodes += k;
        }
        x_half *= 2.0;
        doublings += 1;
    }
}

/// Scalar version of [`integrate_real_line_vec`]; returns the integral and the
/// number of integrand evaluations.
pub fn integrate_real_line<F>(cfg: &QuadratureConfig, mut f: F) -> Result<(f64, usize)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let out = integrate_real_line_vec(cfg, 1, |x, buf| {
        buf[0] = f(x)?;
        Ok(())
    })?;
    Ok((out.values[0], out.nodes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn gaussian() {
        let (v, _) = integrate_real_line(&QuadratureConfig::default(), |x| Ok((-x * x).exp())).unwrap();
        assert_relative_eq!(v, PI.sqrt(), max_relative = 1e-10);
    }

    #[test]
    fn slow_exponential_tail_forces_doubling() {
        // integral of exp(-|x|/8) = 16; at X = 40 the tail is still e^-5
        let out = integrate_real_line_vec(&QuadratureConfig::default(), 1, |x, b| {
            b[0] = (-x.abs() / 8.0).exp();
            Ok(())
        })
        .unwrap();
        assert!(out.half_width > 40.0);
        assert_relative_eq!(out.values[0], 16.0, max_relative = 1e-8);
    }

    #[test]
    fn vector_components_with_zero_integral() {
        let out = integrate_real_line_vec(&QuadratureConfig::default(), 2, |x, b| {
            let g = (-x * x / 2.0).exp();
            b[0] = x * g;
            b[1] = x * x * g;
            Ok(())
        })
        .unwrap();
        assert!(out.values[0].abs() < 1e-12);
        assert_relative_eq!(out.values[1], (2.0 * PI).sqrt(), max_relative = 1e-10);
    }

    #[test]
    fn non_decaying_integrand_does_not_converge() {
        let cfg = QuadratureConfig {
            max_doublings: 2,
            ..Default::default()
        };
        assert!(matches!(
            integrate_real_line(&cfg, |_| Ok(1.0)),
            Err(Error::NotConverged { .. })
        ));
    }
}
