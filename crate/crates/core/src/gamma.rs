//! `|Gamma(lambda + i x)|^2` for the Meixner-Pollaczek weight.
//!
//! Only the modulus is needed, so everything is computed as the real part of
//! a complex log-gamma and no branch of the complex logarithm has to be
//! tracked. The weight decays like `exp(-pi |x|)`, which underflows `f64`
//! for `|x|` beyond a few hundred; callers that need the tails should work
//! with [`ln_abs_gamma_sq`].

use std::f64::consts::PI;

use num_complex::Complex64;

const LANCZOS_G: f64 = 7.0;

const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln |Gamma(s)|` for `Re(s) > 0`.
///
/// Arguments with `Re(s) < 1/2` are shifted up with `Gamma(s) = Gamma(s+1)/s`
/// before the Lanczos sum is applied, so no reflection is ever used.
pub fn ln_abs_gamma(s: Complex64) -> f64 {
    debug_assert!(s.re > 0.0, "ln_abs_gamma requires Re(s) > 0, got {s}");
    let mut s = s;
    let mut shift = 0.0;
    while s.re < 0.5 {
        shift -= s.norm().ln();
        s += 1.0;
    }
    let z = s - 1.0;
    let mut series = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (k, &coef) in LANCZOS_COEF.iter().enumerate().skip(1) {
        series += coef / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + ((z + 0.5) * t.ln()).re - t.re + series.norm().ln() + shift
}

/// `ln |Gamma(lambda + i x)|^2`.
pub fn ln_abs_gamma_sq(lambda: f64, x: f64) -> f64 {
    2.0 * ln_abs_gamma(Complex64::new(lambda, x))
}

/// `|Gamma(lambda + i x)|^2`, strictly positive for `lambda > 0` as long as it
/// does not underflow.
pub fn abs_gamma_sq(lambda: f64, x: f64) -> f64 {
    ln_abs_gamma_sq(lambda, x).exp()
}
