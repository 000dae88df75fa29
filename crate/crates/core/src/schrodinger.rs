//! Radial Schrödinger equation u'' + (z − ℓ(ℓ+1)/r² − q)u = 0 with u(0) = u(a) = 0.

use crate::error::{Error, Result};
use crate::numerics::{extrapolate_in_inverse_n, illinois};
use crate::ode::{integrate, integrate_dense, OdeOptions};
use crate::potential::PotentialSpec;
use crate::specfun::whittaker_m;
use crate::types::{DefectEstimate, EigenSpectrum, Level, SolutionSample};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Potential, angular number and right endpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProblem {
    pub potential: PotentialSpec,
    pub ell: u32,
    pub a: f64,
}

impl RadialProblem {
    pub fn new(potential: PotentialSpec, ell: u32, a: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "endpoint a = {a} must be positive"
            )));
        }
        if let Some((lo, hi)) = potential.span() {
            if lo > start_radius(a) * 10.0 || a > hi * (1.0 + 1e-12) {
                return Err(Error::InvalidParameter(format!(
                    "a = {a} outside the potential grid [{lo}, {hi}]"
                )));
            }
        }
        Ok(Self { potential, ell, a })
    }
}

/// Starting radius of the shooting integration.
pub fn start_radius(a: f64) -> f64 {
    (1e-4 * a).max(1e-6)
}

const FROBENIUS_TERMS: usize = 12;

fn ode_opts() -> OdeOptions {
    OdeOptions {
        rtol: 1e-13,
        atol: 1e-14,
        ..Default::default()
    }
}

/// Local expansion q ≈ q₀ + q₁ r near the origin.
pub(crate) fn origin_taylor(q: &PotentialSpec, r0: f64) -> (f64, f64) {
    let q1 = (q.eval(2.0 * r0) - q.eval(r0)) / r0;
    (q.eval(r0) - q1 * r0, q1)
}

// u = r^{ℓ+1} Σ c_j r^j with j(j+2ℓ+1)c_j = (q₀−z)c_{j−2} + q₁c_{j−3}; returns (u, u')
// scaled so that u(r₀) = r₀^{ℓ+1}.
fn frobenius(problem: &RadialProblem, z: f64, r0: f64) -> (f64, f64) {
    let l = problem.ell as f64;
    let (q0, q1) = origin_taylor(&problem.potential, r0);
    let mut c = [0.0; FROBENIUS_TERMS];
    c[0] = 1.0;
    for j in 1..FROBENIUS_TERMS {
        let jf = j as f64;
        let mut rhs = 0.0;
        if j >= 2 {
            rhs += (q0 - z) * c[j - 2];
        }
        if j >= 3 {
            rhs += q1 * c[j - 3];
        }
        c[j] = rhs / (jf * (jf + 2.0 * l + 1.0));
    }
    let (mut s, mut ds) = (0.0, 0.0);
    for j in (0..FROBENIUS_TERMS).rev() {
        s = s * r0 + c[j];
        if j > 0 {
            ds = ds * r0 + j as f64 * c[j];
        }
    }
    let lead = r0.powi(problem.ell as i32 + 1);
    let u = lead * s;
    let du = (l + 1.0) * r0.powi(problem.ell as i32) * s + lead * ds;
    // normalize to u(r₀) = r₀^{ℓ+1}
    (lead, du * lead / u)
}

/// Regular solution on a uniform grid of `npts` points over [r₀, a]; components are u and u'.
pub fn integrate_regular(problem: &RadialProblem, z: f64, npts: usize) -> Result<SolutionSample> {
    if !z.is_finite() {
        return Err(Error::InvalidParameter("z must be finite".into()));
    }
    let r0 = start_radius(problem.a);
    let npts = npts.max(2);
    let rs: Vec<f64> = (0..npts)
        .map(|i| r0 + (problem.a - r0) * i as f64 / (npts - 1) as f64)
        .collect();
    let (u0, du0) = frobenius(problem, z, r0);
    let norm = u0.hypot(du0);
    let l2 = (problem.ell * (problem.ell + 1)) as f64;
    let q = &problem.potential;
    let ys = integrate_dense(
        |r, y: &[f64; 2]| [y[1], (l2 / (r * r) + q.eval(r) - z) * y[0]],
        &rs,
        [u0 / norm, du0 / norm],
        &ode_opts(),
    )?;
    let u = ys
        .iter()
        .map(|y| Complex64::new(norm * y[0], 0.0))
        .collect();
    let du = ys
        .iter()
        .map(|y| Complex64::new(norm * y[1], 0.0))
        .collect();
    Ok(SolutionSample {
        r: rs,
        components: vec![u, du],
    })
}

/// Prüfer angle θ(a) for u = ρ sin θ, u' = kρ cos θ with k = √max(z, 1).
pub fn prufer_phase(problem: &RadialProblem, z: f64) -> Result<f64> {
    let r0 = start_radius(problem.a);
    let (u0, du0) = frobenius(problem, z, r0);
    let k = z.max(1.0).sqrt();
    let theta0 = (k * u0).atan2(du0);
    let l2 = (problem.ell * (problem.ell + 1)) as f64;
    let q = &problem.potential;
    let y = integrate(
        |r, y: &[f64; 1]| {
            let (s, c) = y[0].sin_cos();
            [k * c * c + (z - l2 / (r * r) - q.eval(r)) / k * s * s]
        },
        r0,
        [theta0],
        problem.a,
        &ode_opts(),
    )?;
    Ok(y[0])
}

fn counting_guess(problem: &RadialProblem, n: f64) -> f64 {
    let a = problem.a;
    let shift = problem.potential.integral(start_radius(a), a) / a;
    let s = (PI / a) * (n + problem.ell as f64 / 2.0).max(0.0);
    s * s + shift
}

/// The n-th Dirichlet eigenvalue (n ≥ 1) and its normalized residual |sin θ(a)|.
pub fn eigenvalue(problem: &RadialProblem, n: usize) -> Result<Level> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "eigenvalue index starts at 1".into(),
        ));
    }
    let target = n as f64 * PI;
    let f = |z: f64| prufer_phase(problem, z).map(|t| t - target);
    let mut lo = counting_guess(problem, n as f64 - 1.0);
    let mut hi = counting_guess(problem, n as f64 + 1.0);
    let mut flo = f(lo)?;
    let mut fhi = f(hi)?;
    let mut expand = 0;
    while flo > 0.0 || fhi < 0.0 {
        let w = (hi - lo).max(1.0);
        if flo > 0.0 {
            hi = lo;
            fhi = flo;
            lo -= w;
            flo = f(lo)?;
        } else {
            lo = hi;
            flo = fhi;
            hi += w;
            fhi = f(hi)?;
        }
        expand += 1;
        if expand > 80 {
            return Err(Error::Bracketing(format!("no bracket for level {n}")));
        }
    }
    let z = illinois(
        f,
        lo,
        hi,
        flo,
        fhi,
        1e-15 * hi.abs().max(1.0),
        2e-14 * target,
    )?;
    let residual = prufer_phase(problem, z)?.sin().abs();
    Ok(Level {
        n: n as i64,
        z,
        residual,
    })
}

/// The first `n_max` Dirichlet eigenvalues, indexed by oscillation count.
pub fn eigenvalues_dirichlet(problem: &RadialProblem, n_max: usize) -> Result<EigenSpectrum> {
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    let levels: Result<Vec<Level>> = (1..=n_max)
        .into_par_iter()
        .map(|n| eigenvalue(problem, n))
        .collect();
    let spec = EigenSpectrum { levels: levels? };
    spec.validate()?;
    Ok(spec)
}

/// Number of sign changes of the regular solution strictly inside (0, a).
pub fn interior_nodes(problem: &RadialProblem, z: f64) -> Result<usize> {
    let osc = (z.max(1.0).sqrt() * problem.a / PI).ceil() as usize;
    let sample = integrate_regular(problem, z, 40 * (osc + 2))?;
    let u = &sample.components[0];
    // the last point is the boundary zero itself; ignore the final sample
    let inner = &u[..u.len() - 1];
    let scale = u.iter().map(|v| v.re.abs()).fold(0.0, f64::max);
    let mut count = 0;
    let mut prev = 0.0f64;
    for v in inner {
        if v.re.abs() <= 1e-9 * scale {
            continue;
        }
        if prev != 0.0 && v.re.signum() != prev.signum() {
            count += 1;
        }
        prev = v.re;
    }
    Ok(count)
}

/// (π/a)(n+ℓ/2) + (aδ − ℓ(ℓ+1)) / (2(n+ℓ/2)πa).
pub fn asymptotic_sqrt_z(n: usize, a: f64, ell: u32, delta: f64) -> f64 {
    let nn = n as f64 + ell as f64 / 2.0;
    let l2 = (ell * (ell + 1)) as f64;
    PI / a * nn + (a * delta - l2) / (2.0 * nn * PI * a)
}

/// Per-level defect δ̂_n = [2(n+ℓ/2)πa(√z_n − π(n+ℓ/2)/a) + ℓ(ℓ+1)]/a.
pub fn defect_per_level(n: i64, z: f64, a: f64, ell: u32) -> f64 {
    let nn = n as f64 + ell as f64 / 2.0;
    let l2 = (ell * (ell + 1)) as f64;
    (2.0 * nn * PI * a * (z.sqrt() - PI * nn / a) + l2) / a
}

/// Defect from a Dirichlet spectrum, extrapolated in 1/n over the largest indices.
pub fn estimate_defect(spectrum: &EigenSpectrum, a: f64, ell: u32) -> Result<DefectEstimate> {
    if spectrum.len() < 5 {
        return Err(Error::InsufficientData {
            need: 5,
            got: spectrum.len(),
        });
    }
    let per_level: Vec<(i64, f64)> = spectrum
        .levels
        .iter()
        .map(|l| (l.n, defect_per_level(l.n, l.z, a, ell)))
        .collect();
    let ns: Vec<f64> = per_level
        .iter()
        .map(|p| p.0 as f64 + ell as f64 / 2.0)
        .collect();
    let ds: Vec<f64> = per_level.iter().map(|p| p.1).collect();
    let (value, uncertainty) = extrapolate_in_inverse_n(&ns, &ds)?;
    Ok(DefectEstimate {
        value,
        uncertainty,
        per_level,
    })
}

/// π(n+ℓ/2) − ℓ(ℓ+1)/(π(2n+ℓ)).
pub fn whittaker_zero_asymptotic(n: usize, ell: u32) -> f64 {
    let l = ell as f64;
    let nf = n as f64;
    PI * (nf + l / 2.0) - l * (l + 1.0) / (PI * (2.0 * nf + l))
}

/// Argument convention for the positive zeros of M₀,ℓ+1/2 on the imaginary axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroConvention {
    /// Zeros t of M₀,ℓ+1/2(2it); these follow the asymptotic law above.
    Scaled,
    /// Zeros t of M₀,ℓ+1/2(it), twice the scaled ones.
    Literal,
}

/// First `n_max` positive zeros of M₀,ℓ+1/2 on the positive imaginary axis.
pub fn whittaker_zeros(ell: u32, n_max: usize, convention: ZeroConvention) -> Result<Vec<f64>> {
    let zero = Complex64::new(0.0, 0.0);
    // u(t) = (2i)^{−(ℓ+1)} M(2it) is real
    let scale = Complex64::new(0.0, 2.0).powi(-(ell as i32 + 1));
    let g = |t: f64| -> Result<f64> {
        Ok((scale * whittaker_m(zero, ell, Complex64::new(0.0, 2.0 * t))?).re)
    };
    let mut out = Vec::with_capacity(n_max);
    let step = 0.05;
    let mut t = 0.5 * (ell as f64 + 1.0).min(2.0) * step + 1e-3;
    let mut gt = g(t)?;
    while out.len() < n_max {
        let t2 = t + step;
        let g2 = g(t2)?;
        if gt != 0.0 && g2.signum() != gt.signum() {
            let root = illinois(g, t, t2, gt, g2, 1e-15 * t2, 0.0)?;
            out.push(root);
        }
        t = t2;
        gt = g2;
        if t > 1e6 {
            return Err(Error::NonConvergence("zero search ran past 1e6".into()));
        }
    }
    if convention == ZeroConvention::Literal {
        out.iter_mut().for_each(|x| *x *= 2.0);
    }
    Ok(out)
}
