//! Complex Gamma function.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

const G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

// Bernoulli numbers B_{2k} / (2k(2k-1)) for the Stirling series.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Returns `Some(n)` when `z` is the nonpositive integer `n`.
pub fn nonpositive_integer(z: Complex64) -> Option<i64> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        Some(z.re as i64)
    } else {
        None
    }
}

fn lanczos_sum(z: Complex64) -> Complex64 {
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + k as f64);
    }
    x
}

/// Γ(z) for complex z, with an error at the poles.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    if let Some(n) = nonpositive_integer(z) {
        return Err(Error::Pole(n as f64));
    }
    Ok(gamma_unchecked(z))
}

fn gamma_unchecked(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Γ(z)Γ(1−z) = π / sin(πz)
        let s = (z * PI).sin();
        return PI / (s * gamma_unchecked(1.0 - z));
    }
    let w = z - 1.0;
    let t = w + G + 0.5;
    (2.0 * PI).sqrt() * t.powc(w + 0.5) * (-t).exp() * lanczos_sum(w)
}

/// 1/Γ(z), entire; exactly zero at the poles.
pub fn rgamma(z: Complex64) -> Complex64 {
    if nonpositive_integer(z).is_some() {
        return Complex64::new(0.0, 0.0);
    }
    if z.re < 0.5 {
        let s = (z * PI).sin();
        return s * gamma_unchecked(1.0 - z) / PI;
    }
    1.0 / gamma_unchecked(z)
}

fn stirling(z: Complex64) -> Complex64 {
    let mut s = (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln();
    let z2 = z * z;
    let mut zp = z;
    for &c in STIRLING.iter() {
        s += c / zp;
        zp *= z2;
    }
    s
}

/// Analytic log Γ(z), continuous off the negative real axis.
///
/// Real positive arguments give the real logarithm; `exp` of the result is Γ(z).
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if let Some(n) = nonpositive_integer(z) {
        return Err(Error::Pole(n as f64));
    }
    if z.im == 0.0 && z.re > 0.0 {
        return Ok(Complex64::new(real_log_gamma(z.re), 0.0));
    }
    if z.re < 0.0 {
        // reflection with a branch-consistent log sin(πz)
        let lg = log_gamma(1.0 - z)?;
        let lsin = log_sin_pi(z);
        return Ok(Complex64::new(PI.ln(), 0.0) - lsin - lg);
    }
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.norm() < 12.0 {
        shift += w.ln();
        w += 1.0;
    }
    Ok(stirling(w) - shift)
}

// log sin(πz) continued from the upper/lower half plane so that the reflected
// log Γ stays continuous in z away from the real axis.
fn log_sin_pi(z: Complex64) -> Complex64 {
    let n = z.re.floor();
    let frac = z - n;
    let s = (frac * PI).sin();
    let mut l = s.ln();
    // sin(π(frac+n)) = (−1)^n sin(π frac)
    let sign = if z.im >= 0.0 { -1.0 } else { 1.0 };
    l += Complex64::new(0.0, sign * PI * n);
    l
}

fn real_log_gamma(x: f64) -> f64 {
    if x < 12.0 {
        let g = gamma_unchecked(Complex64::new(x, 0.0)).re;
        return g.abs().ln();
    }
    stirling(Complex64::new(x, 0.0)).re
}

/// Pochhammer symbol (a)_n.
pub fn pochhammer(a: Complex64, n: usize) -> Complex64 {
    let mut p = Complex64::new(1.0, 0.0);
    for k in 0..n {
        p *= a + k as f64;
    }
    p
}
