//! Tricomi's confluent hypergeometric function Ψ(a, b, x) = U(a, b, x).

use super::gamma::{gamma, nonpositive_integer, pochhammer, rgamma};
use super::kummer::{kummer_phi, HypergeoParams};
use crate::error::{Error, Result};
use crate::quad::integrate_complex;
use num_complex::Complex64;

/// Evaluation route for Ψ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TricomiMethod {
    Auto,
    /// Finite sum; only when a or a−b+1 is a nonpositive integer.
    Terminating,
    /// Large-argument series.
    Asymptotic,
    /// Laplace integral along the ray arg t = −arg x.
    Quadrature,
    /// Combination of two Φ values; b must not be an integer.
    Connection,
}

/// Ψ(a, b, x) with the automatic route.
pub fn tricomi_psi(a: Complex64, b: Complex64, x: Complex64) -> Result<Complex64> {
    tricomi_psi_with(a, b, x, TricomiMethod::Auto)
}

/// Ψ(a, b, x) with a forced route.
pub fn tricomi_psi_with(
    a: Complex64,
    b: Complex64,
    x: Complex64,
    method: TricomiMethod,
) -> Result<Complex64> {
    if x.norm() == 0.0 {
        return Err(Error::Domain("Ψ is singular at x = 0".into()));
    }
    match method {
        TricomiMethod::Terminating => terminating(a, b, x).ok_or_else(|| {
            Error::InvalidParameter("Ψ parameters are not a terminating family".into())
        }),
        TricomiMethod::Asymptotic => asymptotic(a, b, x)
            .ok_or_else(|| Error::NonConvergence(format!("asymptotic Ψ at x = {x}"))),
        TricomiMethod::Quadrature => quadrature(a, b, x),
        TricomiMethod::Connection => connection(a, b, x),
        TricomiMethod::Auto => {
            if let Some(v) = terminating(a, b, x) {
                return Ok(v);
            }
            if let Some(v) = asymptotic(a, b, x) {
                return Ok(v);
            }
            quadrature(a, b, x)
        }
    }
}

/// dΨ/dx = −a Ψ(a+1, b+1, x).
pub fn tricomi_psi_derivative(a: Complex64, b: Complex64, x: Complex64) -> Result<Complex64> {
    Ok(-a * tricomi_psi(a + 1.0, b + 1.0, x)?)
}

fn terminating(a: Complex64, b: Complex64, x: Complex64) -> Option<Complex64> {
    if let Some(n) = nonpositive_integer(a) {
        return Some(poly(-n as usize, b, x));
    }
    if let Some(n) = nonpositive_integer(a - b + 1.0) {
        // Ψ(a,b,x) = x^{1−b} Ψ(a−b+1, 2−b, x)
        return Some(x.powc(1.0 - b) * poly(-n as usize, 2.0 - b, x));
    }
    None
}

// Ψ(−n, b, x) = (−1)^n Σ_s C(n,s) (b+s)_{n−s} (−x)^s
fn poly(n: usize, b: Complex64, x: Complex64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut binom = 1.0;
    let mut xp = Complex64::new(1.0, 0.0);
    for s in 0..=n {
        sum += binom * pochhammer(b + s as f64, n - s) * xp;
        binom *= (n - s) as f64 / (s + 1) as f64;
        xp *= -x;
    }
    if n % 2 == 1 {
        -sum
    } else {
        sum
    }
}

fn asymptotic(a: Complex64, b: Complex64, x: Complex64) -> Option<Complex64> {
    let w = -1.0 / x;
    let c = a - b + 1.0;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut prev = f64::INFINITY;
    for k in 0..400 {
        let kf = k as f64;
        let next = term * (a + kf) * (c + kf) / (kf + 1.0) * w;
        let n = next.norm();
        if n == 0.0 {
            break;
        }
        if n > prev {
            return None;
        }
        term = next;
        sum += term;
        prev = n;
        if n <= 1e-16 * sum.norm() {
            return Some(x.powc(-a) * sum);
        }
    }
    if prev == f64::INFINITY || prev <= 1e-16 * sum.norm() {
        Some(x.powc(-a) * sum)
    } else {
        None
    }
}

fn quadrature(a: Complex64, b: Complex64, x: Complex64) -> Result<Complex64> {
    if x.im == 0.0 && x.re < 0.0 {
        return Err(Error::Domain(
            "Ψ quadrature on the negative real axis".into(),
        ));
    }
    if a.re <= 0.0 {
        // U(a,b) = −(b−2a−2−x) U(a+1,b) − (a+1)(a−b+2) U(a+2,b)
        let u1 = quadrature(a + 1.0, b, x)?;
        let u2 = quadrature(a + 2.0, b, x)?;
        return Ok(-(b - 2.0 * a - 2.0 - x) * u1 - (a + 1.0) * (a - b + 2.0) * u2);
    }
    let theta = x.arg();
    let rot = Complex64::from_polar(1.0, -theta);
    let xr = x.norm();
    let m = (2.0 / a.re).ceil().max(1.0);
    let growth = (a.norm() + b.norm() + 1.0) * (2.0 + 60.0 / xr).ln();
    let s_max = (60.0 + growth) / xr;
    let u_max = s_max.powf(1.0 / m);
    let f = |u: f64| {
        if u == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let s = u.powf(m);
        let t = rot * s;
        // s^{a−1}·m u^{m−1} = m u^{m a − 1}
        let jac = m * Complex64::new(u, 0.0).powc(m * a - 1.0);
        (-xr * s).exp() * jac * rot.powc(a - 1.0) * (1.0 + t).powc(b - a - 1.0) * rot
    };
    let v = integrate_complex(f, 0.0, u_max, 1e-14);
    Ok(v * rgamma(a))
}

fn connection(a: Complex64, b: Complex64, x: Complex64) -> Result<Complex64> {
    if b.im == 0.0 && b.re == b.re.round() {
        return Err(Error::InvalidParameter(
            "connection formula needs non-integer b".into(),
        ));
    }
    let p1 = HypergeoParams::new(a, b)?;
    let p2 = HypergeoParams::new(a - b + 1.0, 2.0 - b)?;
    let t1 = gamma(1.0 - b)? * rgamma(a - b + 1.0) * kummer_phi(&p1, x)?;
    let t2 = gamma(b - 1.0)? * rgamma(a) * x.powc(1.0 - b) * kummer_phi(&p2, x)?;
    Ok(t1 + t2)
}
