//! Truncated summation over `x = 0, 1, 2, ...`.
//!
//! The summands this crate feeds in are polynomials times a geometric or
//! faster tail, with interior zeros. A single small term therefore says
//! nothing about the tail; the stop rule waits for a run of consecutive terms
//! that are both non-increasing and relatively negligible.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    /// A term is negligible when `|t_x| < rel_tol * sum_{y <= x} |t_y|`.
    pub rel_tol: f64,
    /// Hard cap on the number of terms.
    pub max_terms: usize,
    /// Number of consecutive negligible, non-increasing terms needed to stop.
    pub small_run: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            max_terms: 100_000,
            small_run: 10,
        }
    }
}

impl TruncationPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || self.max_terms == 0 || self.small_run == 0 {
            return Err(Error::Config(format!("invalid truncation policy {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SumOutcome {
    pub values: Vec<f64>,
    pub terms: usize,
}

/// Sums `dim` series at once; `term(x, out)` writes the `x`-th term of each
/// component into `out`. Every component must satisfy the stop rule on the
/// same `x` for the run counter to advance.
pub fn sum_tail_vec<F>(policy: &TruncationPolicy, dim: usize, mut term: F) -> Result<SumOutcome>
where
    F: FnMut(u64, &mut [f64]) -> Result<()>,
{
    policy.validate()?;
    let mut sums = vec![0.0; dim];
    let mut abs_sums = vec![0.0; dim];
    let mut prev = vec![f64::INFINITY; dim];
    let mut cur = vec![0.0; dim];
    let mut run = 0;
    for x in 0..policy.max_terms {
        term(x as u64, &mut cur)?;
        let mut negligible = true;
        for i in 0..dim {
            let t = cur[i];
            if !t.is_finite() {
                return Err(Error::Domain(format!("non-finite summand {t} at x = {x}")));
            }
            sums[i] += t;
            abs_sums[i] += t.abs();
            if !(t.abs() <= prev[i] && t.abs() <= policy.rel_tol * abs_sums[i]) {
                negligible = false;
            }
            prev[i] = t.abs();
        }
        run = if negligible { run + 1 } else { 0 };
        if run >= policy.small_run {
            return Ok(SumOutcome {
                values: sums,
                terms: x + 1,
            });
        }
    }
    Err(Error::NotConverged {
        partial: sums.first().copied().unwrap_or(0.0),
        effort: policy.max_terms,
    })
}

/// Scalar version of [`sum_tail_vec`]. Returns the sum and the number of
/// terms used.
pub fn sum_tail<F>(policy: &TruncationPolicy, mut term: F) -> Result<(f64, usize)>
where
    F: FnMut(u64) -> Result<f64>,
{
    let out = sum_tail_vec(policy, 1, |x, buf| {
        buf[0] = term(x)?;
        Ok(())
    })?;
    Ok((out.values[0], out.terms))
}
