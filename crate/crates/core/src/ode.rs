//! Adaptive Gragg–Bulirsch–Stoer integration of y' = f(t, y) for fixed-size real states.

use crate::error::{Error, Result};

const KMAX: usize = 9;
const SEQ: [usize; KMAX] = [2, 4, 6, 8, 10, 12, 14, 16, 18];

/// Tolerances and limits for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step; 0 picks |t1 − t0|/16.
    pub h0: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-12,
            atol: 1e-14,
            h0: 0.0,
            max_steps: 1_000_000,
        }
    }
}

fn midpoint<const N: usize, F: FnMut(f64, &[f64; N]) -> [f64; N]>(
    f: &mut F,
    t: f64,
    y: &[f64; N],
    dy0: &[f64; N],
    h: f64,
    n: usize,
) -> [f64; N] {
    let s = h / n as f64;
    let mut z0 = *y;
    let mut z1 = [0.0; N];
    for i in 0..N {
        z1[i] = y[i] + s * dy0[i];
    }
    for k in 1..n {
        let d = f(t + k as f64 * s, &z1);
        for i in 0..N {
            let z2 = z0[i] + 2.0 * s * d[i];
            z0[i] = z1[i];
            z1[i] = z2;
        }
    }
    let d = f(t + h, &z1);
    let mut out = [0.0; N];
    for i in 0..N {
        out[i] = 0.5 * (z0[i] + z1[i] + s * d[i]);
    }
    out
}

/// Integrates from `t0` to `t1` (either direction) and returns y(t1).
pub fn integrate<const N: usize, F: FnMut(f64, &[f64; N]) -> [f64; N]>(
    mut f: F,
    t0: f64,
    y0: [f64; N],
    t1: f64,
    opts: &OdeOptions,
) -> Result<[f64; N]> {
    let span = t1 - t0;
    if span == 0.0 {
        return Ok(y0);
    }
    let dir = span.signum();
    let mut h = if opts.h0 > 0.0 {
        opts.h0.min(span.abs())
    } else {
        span.abs() / 16.0
    } * dir;
    let mut t = t0;
    let mut y = y0;
    let mut table: [[f64; N]; KMAX] = [[0.0; N]; KMAX];
    for _ in 0..opts.max_steps {
        if (t1 - t) * dir <= 0.0 {
            return Ok(y);
        }
        if (t + h - t1) * dir > 0.0 {
            h = t1 - t;
        }
        let dy0 = f(t, &y);
        let mut accepted = None;
        let mut last_err = f64::INFINITY;
        for j in 0..KMAX {
            table[j] = midpoint(&mut f, t, &y, &dy0, h, SEQ[j]);
            for k in (0..j).rev() {
                let ratio = (SEQ[j] as f64 / SEQ[k] as f64).powi(2) - 1.0;
                for i in 0..N {
                    table[k][i] = table[k + 1][i] + (table[k + 1][i] - table[k][i]) / ratio;
                }
            }
            if j >= 1 {
                let mut err: f64 = 0.0;
                for i in 0..N {
                    let sc = opts.atol + opts.rtol * y[i].abs().max(table[0][i].abs());
                    err = err.max((table[0][i] - table[1][i]).abs() / sc);
                }
                if !err.is_finite() {
                    break;
                }
                last_err = err;
                if err <= 1.0 {
                    accepted = Some((j, err));
                    break;
                }
            }
        }
        match accepted {
            Some((j, err)) => {
                t += h;
                y = table[0];
                let expo = 1.0 / (2 * j + 1) as f64;
                let mut fac = 0.9 * err.max(1e-10).powf(-expo);
                if j >= 6 {
                    fac = fac.min(0.8);
                } else if j <= 3 {
                    fac = fac.max(1.5);
                }
                h *= fac.clamp(0.2, 4.0);
            }
            None => {
                let shrink = if last_err.is_finite() {
                    (0.9 * last_err.powf(-1.0 / 17.0)).clamp(0.1, 0.5)
                } else {
                    0.1
                };
                h *= shrink;
            }
        }
        if h.abs() <= 1e-15 * t.abs().max(1e-300) || h.abs() < 1e-300 {
            return Err(Error::StepUnderflow { r: t });
        }
    }
    Err(Error::StepUnderflow { r: t })
}

/// Integrates across the increasing or decreasing sequence `ts`, returning the state at each point.
pub fn integrate_dense<const N: usize, F: FnMut(f64, &[f64; N]) -> [f64; N]>(
    mut f: F,
    ts: &[f64],
    y0: [f64; N],
    opts: &OdeOptions,
) -> Result<Vec<[f64; N]>> {
    let mut out = Vec::with_capacity(ts.len());
    let mut y = y0;
    if ts.is_empty() {
        return Ok(out);
    }
    out.push(y);
    for w in ts.windows(2) {
        y = integrate(&mut f, w[0], y, w[1], opts)?;
        out.push(y);
    }
    Ok(out)
}
