//! Bracketed root finding, weighted polynomial fits and compensated summation.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Root of `f` in a sign-changing bracket [lo, hi] by the Illinois variant of
/// regula falsi, with bisection whenever it stalls.
pub fn illinois<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    mut flo: f64,
    mut fhi: f64,
    xtol: f64,
    ftol: f64,
) -> Result<f64> {
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::Bracketing(format!("no sign change on [{lo}, {hi}]")));
    }
    let mut side = 0i8;
    let mut width = (hi - lo).abs();
    for it in 0..200 {
        let mut x = (lo * fhi - hi * flo) / (fhi - flo);
        if it % 4 == 3 && (hi - lo).abs() > 0.5 * width {
            x = 0.5 * (lo + hi);
        }
        if it % 4 == 3 {
            width = (hi - lo).abs();
        }
        if !(x > lo.min(hi) && x < lo.max(hi)) {
            x = 0.5 * (lo + hi);
        }
        let fx = f(x)?;
        if fx.abs() <= ftol || (hi - lo).abs() <= xtol {
            return Ok(x);
        }
        if fx.signum() == fhi.signum() {
            hi = x;
            fhi = fx;
            if side == 1 {
                flo *= 0.5;
            }
            side = 1;
        } else {
            lo = x;
            flo = fx;
            if side == -1 {
                fhi *= 0.5;
            }
            side = -1;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Weighted least-squares polynomial fit of degree `deg`; returns coefficients c₀..c_deg.
pub fn polyfit(x: &[f64], y: &[f64], w: &[f64], deg: usize) -> Result<Vec<f64>> {
    let n = x.len();
    if n < deg + 1 {
        return Err(Error::InsufficientData {
            need: deg + 1,
            got: n,
        });
    }
    let a = DMatrix::from_fn(n, deg + 1, |i, j| w[i].sqrt() * x[i].powi(j as i32));
    let b = DVector::from_fn(n, |i, _| w[i].sqrt() * y[i]);
    let svd = a.svd(true, true);
    let c = svd
        .solve(&b, 1e-14)
        .map_err(|e| Error::InvalidParameter(format!("least squares: {e}")))?;
    Ok(c.iter().copied().collect())
}

/// Neumaier compensated sum.
#[derive(Debug, Default, Clone, Copy)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Extrapolates per-level estimates `d[n]` (indexed by `ns`) to n → ∞ with a
/// polynomial in 1/n over the top third of indices. Returns (limit, uncertainty).
pub fn extrapolate_in_inverse_n(ns: &[f64], d: &[f64]) -> Result<(f64, f64)> {
    let len = ns.len();
    if len < 5 {
        return Err(Error::InsufficientData { need: 5, got: len });
    }
    let start = len - (len / 3).max(5).min(len);
    let x: Vec<f64> = ns[start..].iter().map(|n| 1.0 / n).collect();
    let y = &d[start..];
    let w: Vec<f64> = ns[start..].iter().map(|n| n * n).collect();
    let mut fits = Vec::new();
    for deg in 1..=3usize {
        if x.len() > deg + 1 {
            fits.push(polyfit(&x, y, &w, deg)?[0]);
        }
    }
    let best = if fits.len() >= 2 { fits[1] } else { fits[0] };
    let spread = fits.iter().map(|f| (f - best).abs()).fold(0.0, f64::max);
    Ok((best, spread))
}

/// Unwraps phases sampled along increasing `zs` and extrapolates them to
/// z → ∞ with a polynomial in 1/z of degree min(len−1, 2). A single sample
/// within 0.05 of ±π is rejected as ambiguous. Returns (limit, |limit − last|).
pub fn extrapolate_in_inverse_z(zs: &[f64], phases: &[f64]) -> Result<(f64, f64)> {
    if zs.is_empty() || zs.len() != phases.len() {
        return Err(Error::InsufficientData {
            need: 1,
            got: zs.len().min(phases.len()),
        });
    }
    if zs.len() == 1 {
        if phases[0].abs() > std::f64::consts::PI - 0.05 {
            return Err(Error::PhaseAmbiguity(phases[0]));
        }
        return Ok((phases[0], 0.0));
    }
    let tau = 2.0 * std::f64::consts::PI;
    let mut un = vec![phases[0]];
    for &p in &phases[1..] {
        let prev = un[un.len() - 1];
        un.push(p - tau * ((p - prev) / tau).round());
    }
    let x: Vec<f64> = zs.iter().map(|z| 1.0 / z).collect();
    let w = vec![1.0; x.len()];
    let c = polyfit(&x, &un, &w, (x.len() - 1).min(2))?;
    Ok((c[0], (c[0] - un[un.len() - 1]).abs()))
}
