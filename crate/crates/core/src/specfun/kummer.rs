//! Kummer's confluent hypergeometric function Φ(α, c, x) = ₁F₁(α; c; x).

use super::gamma::{nonpositive_integer, rgamma};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Relative tolerance for dropping series terms.
pub const SERIES_TOL: f64 = 1e-16;
/// Maximum number of series terms.
pub const SERIES_CAP: usize = 10_000;

/// Parameters (α, c) of Φ. `c` may not be a nonpositive integer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypergeoParams {
    pub alpha: Complex64,
    pub c: Complex64,
}

impl HypergeoParams {
    pub fn new(alpha: Complex64, c: Complex64) -> Result<Self> {
        if nonpositive_integer(c).is_some() {
            return Err(Error::InvalidParameter(format!(
                "c = {c} is a nonpositive integer"
            )));
        }
        if !(alpha.re.is_finite() && alpha.im.is_finite() && c.re.is_finite() && c.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite parameter".into()));
        }
        Ok(Self { alpha, c })
    }

    pub fn real(alpha: f64, c: f64) -> Result<Self> {
        Self::new(Complex64::new(alpha, 0.0), Complex64::new(c, 0.0))
    }
}

/// Evaluation route for Φ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KummerMethod {
    /// Pick automatically.
    Auto,
    /// Power series.
    Series,
    /// Large-argument connection formula.
    Asymptotic,
    /// Taylor continuation of the Kummer ODE from a small-argument series value.
    Continuation,
}

/// Φ(α, c, x) with the automatic route.
pub fn kummer_phi(p: &HypergeoParams, x: Complex64) -> Result<Complex64> {
    kummer_phi_with(p, x, KummerMethod::Auto)
}

/// Φ(α, c, x) with a forced route. Negative real parts are first reflected by
/// Φ(α,c,x) = eˣ Φ(c−α,c,−x).
pub fn kummer_phi_with(
    p: &HypergeoParams,
    x: Complex64,
    method: KummerMethod,
) -> Result<Complex64> {
    if x.re < 0.0 {
        let q = HypergeoParams {
            alpha: p.c - p.alpha,
            c: p.c,
        };
        return Ok(x.exp() * kummer_phi_nonneg(&q, -x, method)?);
    }
    kummer_phi_nonneg(p, x, method)
}

fn kummer_phi_nonneg(p: &HypergeoParams, x: Complex64, method: KummerMethod) -> Result<Complex64> {
    match method {
        KummerMethod::Series => series(p, x),
        KummerMethod::Asymptotic => asymptotic(p, x)
            .ok_or_else(|| Error::NonConvergence(format!("asymptotic Φ at x = {x}"))),
        KummerMethod::Continuation => continuation(p, x),
        KummerMethod::Auto => {
            let r = x.norm();
            let terminating = nonpositive_integer(p.alpha).is_some();
            // cancellation in the series costs about e^{|x| − Re x}
            if terminating || r <= 2.0 || r - x.re <= 8.0 {
                return series(p, x);
            }
            if let Some(v) = asymptotic(p, x) {
                return Ok(v);
            }
            continuation(p, x)
        }
    }
}

fn series(p: &HypergeoParams, x: Complex64) -> Result<Complex64> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 0..SERIES_CAP {
        let kf = k as f64;
        term *= (p.alpha + kf) / ((p.c + kf) * (kf + 1.0)) * x;
        sum += term;
        if term.norm() <= SERIES_TOL * sum.norm() || term.norm() == 0.0 {
            // guard against a transiently small term while |α+k| is small
            if (p.alpha + kf + 1.0).norm() * x.norm() <= (p.c + kf + 1.0).norm() * (kf + 2.0)
                || term.norm() == 0.0
            {
                return Ok(sum);
            }
        }
    }
    Err(Error::NonConvergence(format!(
        "Kummer series exceeded {SERIES_CAP} terms at x = {x}"
    )))
}

// Sum of an asymptotic series Σ (a)_k (b)_k / k! · w^k, truncated at the
// smallest term. Returns (sum, last term magnitude, terminated).
fn asym_sum(a: Complex64, b: Complex64, w: Complex64) -> (Complex64, f64) {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut prev = f64::INFINITY;
    for k in 0..400 {
        let kf = k as f64;
        let next = term * (a + kf) * (b + kf) / (kf + 1.0) * w;
        let n = next.norm();
        if n == 0.0 {
            return (sum, 0.0);
        }
        if n > prev {
            return (sum, prev);
        }
        term = next;
        sum += term;
        prev = n;
        if n <= 1e-17 * sum.norm() {
            return (sum, n);
        }
    }
    (sum, prev)
}

fn asymptotic(p: &HypergeoParams, x: Complex64) -> Option<Complex64> {
    let (a, b) = (p.alpha, p.c);
    let rb = rgamma(b);
    if rb.norm() == 0.0 {
        return None;
    }
    let gb = 1.0 / rb;
    // e^{±iπa} z^{−a} with + for Im z ≥ 0
    let sgn = if x.im >= 0.0 { 1.0 } else { -1.0 };
    let phase = (Complex64::new(0.0, sgn * PI) * a).exp();
    let (s1, e1) = asym_sum(a, a - b + 1.0, -1.0 / x);
    let (s2, e2) = asym_sum(b - a, 1.0 - a, 1.0 / x);
    let f1 = phase * x.powc(-a) * rgamma(b - a);
    let f2 = x.exp() * x.powc(a - b) * rgamma(a);
    let val = gb * (f1 * s1 + f2 * s2);
    let err = gb.norm() * (f1.norm() * e1 + f2.norm() * e2);
    if val.norm().is_finite() && err <= 1e-15 * val.norm() {
        Some(val)
    } else {
        None
    }
}

/// Step of the Taylor continuation along the ray.
const CONT_START: f64 = 2.0;
const CONT_STEP: f64 = 1.0;

fn continuation(p: &HypergeoParams, x: Complex64) -> Result<Complex64> {
    let r = x.norm();
    if r <= CONT_START {
        return series(p, x);
    }
    let dir = x / r;
    let mut xc = dir * CONT_START;
    let mut y = series(p, xc)?;
    // Φ'(α,c,x) = (α/c) Φ(α+1,c+1,x)
    let dp = HypergeoParams {
        alpha: p.alpha + 1.0,
        c: p.c + 1.0,
    };
    let mut dy = p.alpha / p.c * series(&dp, xc)?;
    let mut pos = CONT_START;
    while pos < r {
        let h_len = (r - pos).min(CONT_STEP).min(pos / 2.0);
        let h = dir * h_len;
        let (ny, ndy) = taylor_step(p, xc, y, dy, h)?;
        y = ny;
        dy = ndy;
        pos += h_len;
        xc = dir * pos;
    }
    Ok(y)
}

// One Taylor step of x y'' + (c − x) y' − α y = 0 from xc by h.
fn taylor_step(
    p: &HypergeoParams,
    xc: Complex64,
    y: Complex64,
    dy: Complex64,
    h: Complex64,
) -> Result<(Complex64, Complex64)> {
    let (a, b) = (p.alpha, p.c);
    let mut cm1 = y; // c_k
    let mut c0 = dy; // c_{k+1}
    let mut val = y + dy * h;
    let mut der = dy;
    let mut hk = h; // h^{k+1}
    let scale = y.norm() + dy.norm() * h.norm();
    for k in 0..500usize {
        let kf = k as f64;
        let c2 =
            ((kf + a) * cm1 - (kf + 1.0) * (kf + b - xc) * c0) / (xc * (kf + 2.0) * (kf + 1.0));
        der += c2 * (kf + 2.0) * hk;
        hk *= h;
        let t = c2 * hk;
        val += t;
        cm1 = c0;
        c0 = c2;
        if k > 4
            && t.norm() <= 1e-18 * scale.max(val.norm())
            && (c0 * hk * h).norm() <= 1e-18 * scale.max(val.norm())
        {
            return Ok((val, der));
        }
    }
    Err(Error::NonConvergence("Taylor continuation of Φ".into()))
}
