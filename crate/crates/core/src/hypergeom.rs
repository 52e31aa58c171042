//! Terminating hypergeometric polynomials.
//!
//! The three discrete families are all of the form
//!
//! ```text
//! P_n(x) = 2F1(-n, -x; c; z)      (Meixner, Krawtchouk)
//! P_n(x) = 2F0(-n, -x; -; z)      (Charlier)
//! ```
//!
//! with `z = z(theta)` depending on the distinguished parameter. Both series
//! terminate after `n + 1` terms. This module evaluates them by direct
//! summation in double-double precision (the series cancels badly for large
//! `n`) and by the three-term recurrence in the degree, and provides the
//! derivative `dP_n/dtheta = n (z'/z) (P_n - P_{n-1})`.
//!
//! Meixner-Pollaczek polynomials live here too: the real recurrence is the
//! production evaluator and the convolution from the generating function is
//! kept as an independent oracle.

use crate::ddouble::{CDd, Dd};
use crate::error::{domain, Result};

/// A Pochhammer symbol `(a)_k` stored as sign and log-magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PochhammerValue {
    pub log_abs: f64,
    /// -1, 0 or +1. Zero exactly when one of the factors `a + j` vanishes.
    pub sign: i8,
}

impl PochhammerValue {
    pub fn value(&self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.log_abs.exp(),
        }
    }
}

/// Below this length the product is accumulated factor by factor; above it
/// (and for positive `a`) the log-gamma difference is used.
const POCHHAMMER_DIRECT_MAX: u32 = 32;

/// Rising factorial `(a)_k = a (a+1) ... (a+k-1)` in sign/log form.
pub fn pochhammer(a: f64, k: u32) -> PochhammerValue {
    if k == 0 {
        return PochhammerValue {
            log_abs: 0.0,
            sign: 1,
        };
    }
    if a <= 0.0 && a.fract() == 0.0 && -a < f64::from(k) {
        return PochhammerValue {
            log_abs: f64::NEG_INFINITY,
            sign: 0,
        };
    }
    if a > 0.0 && k > POCHHAMMER_DIRECT_MAX {
        return PochhammerValue {
            log_abs: libm::lgamma(a + f64::from(k)) - libm::lgamma(a),
            sign: 1,
        };
    }
    let mut log_abs = 0.0;
    let mut negative = false;
    for j in 0..k {
        let factor = a + f64::from(j);
        log_abs += factor.abs().ln();
        negative ^= factor < 0.0;
    }
    PochhammerValue {
        log_abs,
        sign: if negative { -1 } else { 1 },
    }
}

/// Values `[P_0(x), ..., P_n(x)]` at one argument.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyEval {
    pub x: f64,
    pub values: Vec<f64>,
}

impl PolyEval {
    pub fn degree(&self) -> u32 {
        (self.values.len() - 1) as u32
    }

    /// `P_k(x)`; `P_{-1}` is taken as zero.
    pub fn get(&self, k: i64) -> f64 {
        if k < 0 {
            0.0
        } else {
            self.values[k as usize]
        }
    }
}

/// The substitution `z(theta)`, its derivative, and the `2F1` denominator
/// parameter. `c == None` selects the confluent `2F0` form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZMap {
    pub c: Option<f64>,
    pub z: f64,
    pub dz: f64,
}

impl ZMap {
    pub fn gauss(c: f64, z: f64, dz: f64) -> Self {
        Self { c: Some(c), z, dz }
    }

    pub fn confluent(z: f64, dz: f64) -> Self {
        Self { c: None, z, dz }
    }

    pub fn series(&self, n: u32, x: f64) -> Result<f64> {
        match self.c {
            Some(c) => series_2f1_terminating(n, x, c, self.z),
            None => Ok(series_2f0_terminating(n, x, self.z)),
        }
    }

    pub fn recurrence(&self, n: u32, x: f64) -> Result<PolyEval> {
        match self.c {
            Some(_) => recurrence_2f1(n, x, self),
            None => Ok(recurrence_2f0(n, x, self.z)),
        }
    }
}

/// `2F1(-n, -x; c; z)` summed term by term for `k = 0..=n`.
///
/// The sum stops early once a numerator factor `(-x + k)` vanishes, so an
/// integer argument `x < n` never reaches a zero denominator beyond it.
pub fn series_2f1_terminating(n: u32, x: f64, c: f64, z: f64) -> Result<f64> {
    let z = Dd::from(z);
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    for k in 0..n {
        let kf = f64::from(k);
        let num = Dd::from(kf - f64::from(n)) * (Dd::from(kf) - Dd::from(x));
        if num.to_f64() == 0.0 {
            break;
        }
        let den = (Dd::from(c) + Dd::from(kf)) * Dd::from(kf + 1.0);
        if den.to_f64() == 0.0 {
            return Err(domain(format!(
                "2F1 denominator (c)_k vanishes at k = {} (c = {c}, n = {n})",
                k + 1
            )));
        }
        term = term * num * z / den;
        sum = sum + term;
    }
    Ok(sum.to_f64())
}

/// `2F0(-n, -x; -; z)` summed term by term for `k = 0..=n`.
pub fn series_2f0_terminating(n: u32, x: f64, z: f64) -> f64 {
    let z = Dd::from(z);
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    for k in 0..n {
        let kf = f64::from(k);
        let num = Dd::from(kf - f64::from(n)) * (Dd::from(kf) - Dd::from(x));
        if num.to_f64() == 0.0 {
            break;
        }
        term = term * num * z / Dd::from(kf + 1.0);
        sum = sum + term;
    }
    sum.to_f64()
}

/// Upward recurrence in the degree for `2F1(-m, -x; c; z)`:
///
/// ```text
/// (m + c) P_{m+1} = -[(m - x) z - 2m - c] P_m + m (z - 1) P_{m-1}
/// ```
///
/// started from `P_0 = 1`; the `P_{-1}` term carries the coefficient `m = 0`.
pub fn recurrence_2f1(n: u32, x: f64, zmap: &ZMap) -> Result<PolyEval> {
    let c = zmap
        .c
        .ok_or_else(|| domain("recurrence_2f1 needs a 2F1 z-map (c is missing)"))?;
    let z = zmap.z;
    let mut values = Vec::with_capacity(n as usize + 1);
    values.push(1.0);
    let (mut prev, mut cur) = (0.0, 1.0);
    for m in 0..n {
        let mf = f64::from(m);
        let den = mf + c;
        if den == 0.0 {
            return Err(domain(format!(
                "2F1 recurrence divides by m + c = 0 at m = {m} (c = {c})"
            )));
        }
        let next = (-((mf - x) * z - 2.0 * mf - c) * cur + mf * (z - 1.0) * prev) / den;
        values.push(next);
        prev = cur;
        cur = next;
    }
    Ok(PolyEval { x, values })
}

/// Krawtchouk values `P_0(x) .. P_N(x)` at an integer `x` in `0..=N`, where
/// `c = -N`.
///
/// At fixed `x` the upward recurrence picks up the dominant solution once
/// the true column starts to decay (large `n`, `p` far from 1/2), so the
/// column is also run downward from the exact top values
///
/// ```text
/// P_N(x)     = (1 - z)^x
/// P_{N-1}(x) = (1 - z)^{x-1} [(1 - z) + x z / N]
/// ```
///
/// and the two runs are joined at the degree where they agree best relative
/// to the norm `sqrt(h_n)`. If the top values overflow only the upward run
/// is used.
pub fn krawtchouk_column(x: u32, zmap: &ZMap) -> Result<PolyEval> {
    let c = zmap
        .c
        .ok_or_else(|| domain("krawtchouk_column needs a 2F1 z-map"))?;
    if c > 0.0 || c.fract() != 0.0 {
        return Err(domain(format!("krawtchouk_column needs c = -N, got c = {c}")));
    }
    let top = (-c) as u32;
    if x > top {
        return Err(domain(format!("argument {x} lies beyond N = {top}")));
    }
    let xf = f64::from(x);
    let forward = recurrence_2f1(top, xf, zmap)?;
    if top < 2 {
        return Ok(forward);
    }
    let z = zmap.z;
    let nf = f64::from(top);
    let mut backward = vec![0.0; top as usize + 1];
    backward[top as usize] = (1.0 - z).powi(x as i32);
    backward[top as usize - 1] = (1.0 - z).powi(x as i32 - 1) * ((1.0 - z) + xf * z / nf);
    for m in (1..top).rev() {
        let mf = f64::from(m);
        let (hi, mid) = (backward[m as usize + 1], backward[m as usize]);
        backward[m as usize - 1] =
            ((mf + c) * hi + ((mf - xf) * z - 2.0 * mf - c) * mid) / (mf * (z - 1.0));
    }
    if backward.iter().any(|v| !v.is_finite()) {
        return Ok(forward);
    }
    // ln sqrt(h_n) up to a constant: n ln|1 - z| + ln n! - ln |(c)_n|, halved
    let mut log_norm = 0.0;
    let mut best = (f64::INFINITY, 0usize);
    for n in 0..=top as usize {
        if n > 0 {
            let k = (n - 1) as f64;
            log_norm += 0.5 * ((1.0 - z).abs().ln() + (k + 1.0).ln() - (c + k).abs().ln());
        }
        let gap = (forward.values[n] - backward[n]).abs() / log_norm.exp();
        if gap < best.0 {
            best = (gap, n);
        }
    }
    let split = best.1;
    let values = forward.values[..=split]
        .iter()
        .chain(&backward[split + 1..])
        .copied()
        .collect();
    Ok(PolyEval { x: xf, values })
}

/// Upward recurrence for `2F0(-m, -x; -; z)`:
///
/// ```text
/// P_{m+1} = [1 + (x - m) z] P_m + m z P_{m-1}
/// ```
pub fn recurrence_2f0(n: u32, x: f64, z: f64) -> PolyEval {
    let mut values = Vec::with_capacity(n as usize + 1);
    values.push(1.0);
    let (mut prev, mut cur) = (0.0, 1.0);
    for m in 0..n {
        let mf = f64::from(m);
        let next = (1.0 + (x - mf) * z) * cur + mf * z * prev;
        values.push(next);
        prev = cur;
        cur = next;
    }
    PolyEval { x, values }
}

/// `dP_n/dtheta = n (z'/z) [P_n(x) - P_{n-1}(x)]`, valid for both the `2F1`
/// and the `2F0` forms.
pub fn dtheta_poly(n: u32, zmap: &ZMap, polys: &PolyEval) -> Result<f64> {
    if n == 0 {
        return Ok(0.0);
    }
    if zmap.z == 0.0 {
        return Err(domain("dtheta_poly: z = 0"));
    }
    if polys.degree() < n {
        return Err(domain(format!(
            "dtheta_poly: need P_{n}, evaluation only reaches degree {}",
            polys.degree()
        )));
    }
    let nf = f64::from(n);
    Ok(nf * zmap.dz / zmap.z * (polys.get(i64::from(n)) - polys.get(i64::from(n) - 1)))
}

/// Meixner-Pollaczek values `P_0^(lambda)(x; phi) .. P_n^(lambda)(x; phi)` from
///
/// ```text
/// (m + 1) P_{m+1} = 2 [x sin(phi) + (m + lambda) cos(phi)] P_m - (m + 2 lambda - 1) P_{m-1}
/// ```
pub fn recurrence_meixner_pollaczek(n: u32, x: f64, lambda: f64, phi: f64) -> PolyEval {
    let (s, c) = phi.sin_cos();
    let mut values = Vec::with_capacity(n as usize + 1);
    values.push(1.0);
    let (mut prev, mut cur) = (0.0, 1.0);
    for m in 0..n {
        let mf = f64::from(m);
        let next = (2.0 * (x * s + (mf + lambda) * c) * cur - (mf + 2.0 * lambda - 1.0) * prev)
            / (mf + 1.0);
        values.push(next);
        prev = cur;
        cur = next;
    }
    PolyEval { x, values }
}

/// Meixner-Pollaczek polynomial from the convolution read off its generating
/// function
///
/// ```text
/// P_n = sum_k (lambda + i x)_k / k! (lambda - i x)_{n-k} / (n-k)! e^{i (n - 2k) phi}
/// ```
///
/// The terms pair into complex conjugates so the sum is real.
pub fn series_meixner_pollaczek(n: u32, x: f64, lambda: f64, phi: f64) -> f64 {
    let nu = n as usize;
    let (s, c) = phi.sin_cos();
    let r = (Dd::from(c) * Dd::from(c) + Dd::from(s) * Dd::from(s)).sqrt();
    let w = CDd::new(Dd::from(c) / r, Dd::from(s) / r);
    let mut powers = vec![CDd::new(Dd::ONE, Dd::ZERO); nu + 1];
    for j in 1..=nu {
        powers[j] = powers[j - 1] * w;
    }
    let mut rising = vec![CDd::new(Dd::ONE, Dd::ZERO); nu + 1];
    for k in 0..nu {
        let kf = k as f64;
        let step = CDd::new(Dd::from(lambda) + Dd::from(kf), Dd::from(x));
        rising[k + 1] = (rising[k] * step).scale(Dd::ONE / Dd::from(kf + 1.0));
    }
    let mut sum = Dd::ZERO;
    for k in 0..=nu {
        let e = if nu >= 2 * k {
            powers[nu - 2 * k]
        } else {
            powers[2 * k - nu].conj()
        };
        sum = sum + (rising[k] * rising[nu - k].conj() * e).re;
    }
    sum.to_f64()
}

/// `dP_n/dphi = n cot(phi) P_n - (n + 2 lambda - 1) / sin(phi) P_{n-1}`.
pub fn dphi_meixner_pollaczek(n: u32, lambda: f64, phi: f64, polys: &PolyEval) -> Result<f64> {
    if n == 0 {
        return Ok(0.0);
    }
    if polys.degree() < n {
        return Err(domain(format!(
            "dphi_meixner_pollaczek: need P_{n}, evaluation only reaches degree {}",
            polys.degree()
        )));
    }
    let nf = f64::from(n);
    let (s, c) = phi.sin_cos();
    let k = i64::from(n);
    Ok(nf * c / s * polys.get(k) - (nf + 2.0 * lambda - 1.0) / s * polys.get(k - 1))
}
