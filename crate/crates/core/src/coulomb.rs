//! Coulomb-type problems: the Schrödinger equation with an added 2a/r term and
//! the Dirac system with an added a/r term.

use crate::dirac::{pack, system_rhs, tail_phase, unpack, BranchedEnergy, DiracBasis};
use crate::error::{Error, Result};
use crate::numerics::extrapolate_in_inverse_z;
use crate::ode::{integrate, integrate_dense, OdeOptions};
use crate::potential::PotentialSpec;
use crate::schrodinger::origin_taylor;
use crate::specfun::{
    gamma, kummer_phi, tricomi_psi, whittaker_m, whittaker_w, whittaker_w_derivative,
    HypergeoParams,
};
use crate::types::{DefectEstimate, SolutionSample};
use num_complex::Complex64;
use rayon::prelude::*;

const SERIES_TERMS: usize = 16;

/// Coulomb strength a, angular number and, for the Dirac system, mass and ω = √(ℓ² − a²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoulombParams {
    pub a_coul: f64,
    pub ell: i32,
    pub m: Option<f64>,
    pub omega: Option<f64>,
}

impl CoulombParams {
    /// Schrödinger case, ℓ ≥ 0.
    pub fn schrodinger(a_coul: f64, ell: u32) -> Result<Self> {
        if a_coul == 0.0 || !a_coul.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Coulomb strength a = {a_coul} must be nonzero"
            )));
        }
        Ok(Self {
            a_coul,
            ell: ell as i32,
            m: None,
            omega: None,
        })
    }

    /// Dirac case, ℓ ≥ 1 with ℓ² > a².
    pub fn dirac(a_coul: f64, ell: i32, m: f64) -> Result<Self> {
        if a_coul == 0.0 || !a_coul.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Coulomb strength a = {a_coul} must be nonzero"
            )));
        }
        if ell < 1 {
            return Err(Error::InvalidParameter(format!(
                "ℓ = {ell}; reduce to ℓ ≥ 1 first"
            )));
        }
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "mass m = {m} must be positive"
            )));
        }
        let l = ell as f64;
        if l * l <= a_coul * a_coul {
            return Err(Error::InvalidParameter(format!(
                "need ℓ² > a², got ℓ = {ell}, a = {a_coul}"
            )));
        }
        Ok(Self {
            a_coul,
            ell,
            m: Some(m),
            omega: Some((l * l - a_coul * a_coul).sqrt()),
        })
    }

    fn dirac_parts(&self) -> Result<(f64, f64, f64, f64)> {
        match (self.m, self.omega) {
            (Some(m), Some(w)) => Ok((self.a_coul, self.ell as f64, m, w)),
            _ => Err(Error::InvalidParameter(
                "Dirac operation on Schrödinger Coulomb parameters".into(),
            )),
        }
    }
}

fn ode_opts() -> OdeOptions {
    OdeOptions {
        rtol: 1e-13,
        atol: 1e-15,
        ..Default::default()
    }
}

fn schrodinger_ell(params: &CoulombParams) -> Result<u32> {
    if params.m.is_some() || params.ell < 0 {
        return Err(Error::InvalidParameter(
            "Schrödinger operation on Dirac Coulomb parameters".into(),
        ));
    }
    Ok(params.ell as u32)
}

/// u₁ = (2ε)^{−(ℓ+1)} M_{a/ε,ℓ+1/2}(2rε) and u₂ = (2ε)^ℓ W_{a/ε,ℓ+1/2}(2rε).
pub fn coulomb_schrodinger_pair(
    params: &CoulombParams,
    energy: &BranchedEnergy,
    r: f64,
) -> Result<(Complex64, Complex64)> {
    let ell = schrodinger_ell(params)?;
    let eps = energy.eps;
    let x = 2.0 * r * eps;
    if x.norm() == 0.0 {
        return Err(Error::Domain("2rε = 0".into()));
    }
    let kappa = params.a_coul / eps;
    let u1 = (2.0 * eps).powi(-(ell as i32 + 1)) * whittaker_m(kappa, ell, x)?;
    let u2 = (2.0 * eps).powi(ell as i32) * whittaker_w(kappa, ell, x)?;
    Ok((u1, u2))
}

// u₂ and du₂/dr
fn decaying_free(ell: u32, a: f64, eps: Complex64, r: f64) -> Result<(Complex64, Complex64)> {
    let x = 2.0 * r * eps;
    let kappa = a / eps;
    let s = (2.0 * eps).powi(ell as i32);
    Ok((
        s * whittaker_w(kappa, ell, x)?,
        s * 2.0 * eps * whittaker_w_derivative(kappa, ell, x)?,
    ))
}

fn decaying_from(
    ell: u32,
    a: f64,
    z: f64,
    eps: Complex64,
    q: &PotentialSpec,
    cutoff: f64,
    r_grid: &[f64],
) -> Result<Vec<[f64; 4]>> {
    let (u, du) = decaying_free(ell, a, eps, cutoff)?;
    let l2 = (ell * (ell + 1)) as f64;
    let f = |r: f64, y: &[f64; 4]| {
        let k = l2 / (r * r) - 2.0 * a / r + q.eval(r) - z;
        [y[1], k * y[0], y[3], k * y[2]]
    };
    let mut ts = vec![cutoff];
    ts.extend(r_grid.iter().rev().copied());
    let ys = integrate_dense(f, &ts, [u.re, du.re, u.im, du.im], &ode_opts())?;
    Ok(ys[1..].iter().rev().copied().collect())
}

/// Solution of the Coulomb Schrödinger equation with potential q that equals
/// u₂ beyond the support of q, sampled on the increasing `r_grid`.
/// Components are u and u'. Fails when doubling the cutoff moves the solution
/// by more than 1e−7 relative.
pub fn coulomb_schrodinger_decaying(
    params: &CoulombParams,
    energy: &BranchedEnergy,
    potential: &PotentialSpec,
    r_grid: &[f64],
) -> Result<SolutionSample> {
    let ell = schrodinger_ell(params)?;
    if r_grid.is_empty() || r_grid.windows(2).any(|w| !(w[1] > w[0])) || !(r_grid[0] > 0.0) {
        return Err(Error::InvalidParameter(
            "r grid must be positive and strictly increasing".into(),
        ));
    }
    if energy.z.im != 0.0 || !(energy.z.re > 0.0) {
        return Err(Error::InvalidParameter(
            "decaying solution needs real z > 0".into(),
        ));
    }
    potential.tail_integral(r_grid[0])?;
    let z = energy.z.re;
    let last = r_grid[r_grid.len() - 1];
    let cutoff = potential.support_end().unwrap_or(last).max(last);
    let a = params.a_coul;
    let ys = decaying_from(ell, a, z, energy.eps, potential, cutoff, r_grid)?;
    let ys2 = decaying_from(ell, a, z, energy.eps, potential, 2.0 * cutoff, r_grid)?;
    let scale = ys.iter().map(|y| y[0].hypot(y[2])).fold(0.0, f64::max);
    let change = ys
        .iter()
        .zip(&ys2)
        .map(|(p, q)| (p[0] - q[0]).hypot(p[2] - q[2]))
        .fold(0.0, f64::max)
        / scale;
    if change > 1e-7 {
        return Err(Error::CutoffSensitivity { change });
    }
    let u = ys.iter().map(|y| Complex64::new(y[0], y[2])).collect();
    let du = ys.iter().map(|y| Complex64::new(y[1], y[3])).collect();
    Ok(SolutionSample {
        r: r_grid.to_vec(),
        components: vec![u, du],
    })
}

/// (α₁, α₂) with α₁ − α₂ = 2 and (α₁+α₂)/(α₁−α₂) = −(a/(ω+ℓ))√(m−z)/√(m+z).
pub fn regular_coefficients(
    params: &CoulombParams,
    energy: &BranchedEnergy,
) -> Result<(Complex64, Complex64)> {
    let (a, l, _, w) = params.dirac_parts()?;
    let ratio = -(a / (w + l)) * energy.sqrt_m_minus / energy.sqrt_m_plus;
    Ok((ratio + 1.0, ratio - 1.0))
}

/// (α̃₁, α̃₂) = (1, ℓ + am/ε).
pub fn non_regular_coefficients(
    params: &CoulombParams,
    energy: &BranchedEnergy,
) -> Result<(Complex64, Complex64)> {
    let (a, l, m, _) = params.dirac_parts()?;
    Ok((Complex64::new(1.0, 0.0), l + a * m / energy.eps))
}

/// Q₁,₀ and Q₂,₀ of the regular column at ρ = 2rε.
pub fn coulomb_q_regular(
    params: &CoulombParams,
    energy: &BranchedEnergy,
    rho: Complex64,
) -> Result<(Complex64, Complex64)> {
    let (a, _, _, w) = params.dirac_parts()?;
    let a0 = w - a * energy.z / energy.eps;
    let c = Complex64::new(2.0 * w + 1.0, 0.0);
    let (al1, al2) = regular_coefficients(params, energy)?;
    let p1 = kummer_phi(&HypergeoParams::new(a0, c)?, rho)?;
    let p2 = kummer_phi(&HypergeoParams::new(a0 + 1.0, c)?, rho)?;
    Ok((al1 * p1, al2 * p2))
}

/// U₀(r) for the Coulomb Dirac system with q ≡ 0.
pub fn coulomb_dirac_basis(
    params: &CoulombParams,
    energy: &BranchedEnergy,
    r: f64,
) -> Result<DiracBasis> {
    let (a, _, m, w) = params.dirac_parts()?;
    energy.check(m, 1e-12)?;
    let rho = 2.0 * r * energy.eps;
    if !(r > 0.0) || rho.norm() == 0.0 {
        return Err(Error::Domain(format!("2rε = 0 at r = {r}")));
    }
    let pref = (-r * energy.eps).exp() * rho.powc(Complex64::new(w - 1.0, 0.0)) * r;
    let (q1, q2) = coulomb_q_regular(params, energy, rho)?;
    let a0 = w - a * energy.z / energy.eps;
    let b = Complex64::new(2.0 * w + 1.0, 0.0);
    let (t1, t2) = non_regular_coefficients(params, energy)?;
    let p1 = t1 * tricomi_psi(a0, b, rho)?;
    let p2 = t2 * tricomi_psi(a0 + 1.0, b, rho)?;
    let col = |x: Complex64, y: Complex64| {
        [
            energy.sqrt_m_plus * pref * (x + y),
            -energy.sqrt_m_minus * pref * (x - y),
        ]
    };
    let f = col(q1, q2);
    let g = col(p1, p2);
    Ok(DiracBasis {
        r,
        u0: [[f[0], g[0]], [f[1], g[1]]],
    })
}

/// Large-z limit of ε·det U₀: −α̂₂ ᾰ₁ Γ(2ω+1)/(2Γ(ω+1+ia)) with
/// α̂₂ = −ia/(ω+ℓ) − 1 and ᾰ₁ = 1.
pub fn coulomb_det_limit(params: &CoulombParams) -> Result<Complex64> {
    let (a, l, _, w) = params.dirac_parts()?;
    let i = Complex64::new(0.0, 1.0);
    let hat2 = -i * a / (w + l) - 1.0;
    Ok(-hat2 * gamma(Complex64::new(2.0 * w + 1.0, 0.0))?
        / (2.0 * gamma(Complex64::new(w + 1.0, a))?))
}

/// Large-z limit of Q₁,₀ (−2rε)^{ω+ia}: α̂₁ Γ(2ω+1)/Γ(ω+1−ia) with α̂₁ = 1 − ia/(ω+ℓ).
/// With the principal (2rε)^{ω+ia} the modulus picks up a factor e^{−πa}.
pub fn coulomb_q1_limit(params: &CoulombParams) -> Result<Complex64> {
    let (a, l, _, w) = params.dirac_parts()?;
    let hat1 = Complex64::new(1.0, -a / (w + l));
    Ok(hat1 * gamma(Complex64::new(2.0 * w + 1.0, 0.0))? / gamma(Complex64::new(w + 1.0, -a))?)
}

// f = r^ω Σ (a_j, b_j) r^j with b₀ = 1, a₀ = a/(ω+ℓ); real (f₁, f₂) at r₀.
fn origin_series(params: &CoulombParams, z: f64, q0: f64, q1: f64, r0: f64) -> Result<[f64; 2]> {
    let (a, l, m, w) = params.dirac_parts()?;
    let (mut ca, mut cb) = ([0.0; SERIES_TERMS], [0.0; SERIES_TERMS]);
    cb[0] = 1.0;
    ca[0] = a / (w + l);
    for j in 1..SERIES_TERMS {
        let jf = j as f64;
        let mut ra = (z + m - q0) * cb[j - 1];
        let mut rb = -(z - m - q0) * ca[j - 1];
        if j >= 2 {
            ra -= q1 * cb[j - 2];
            rb += q1 * ca[j - 2];
        }
        // [(ω+j+ℓ), −a; a, (ω+j−ℓ)] (a_j, b_j) = (ra, rb), determinant j(2ω+j)
        let det = jf * (2.0 * w + jf);
        ca[j] = ((w + jf - l) * ra + a * rb) / det;
        cb[j] = ((w + jf + l) * rb - a * ra) / det;
    }
    let (mut sa, mut sb) = (0.0, 0.0);
    for j in (0..SERIES_TERMS).rev() {
        sa = sa * r0 + ca[j];
        sb = sb * r0 + cb[j];
    }
    let lead = r0.powf(w);
    Ok([lead * sa, lead * sb])
}

/// Regular Coulomb Dirac solution with potential q on the increasing `r_grid`,
/// normalized like the regular column of the Coulomb U₀ near the origin.
pub fn coulomb_dirac_regular(
    params: &CoulombParams,
    energy: &BranchedEnergy,
    potential: &PotentialSpec,
    r_grid: &[f64],
) -> Result<SolutionSample> {
    let (a, l, m, w) = params.dirac_parts()?;
    energy.check(m, 1e-12)?;
    if energy.z.im != 0.0 {
        return Err(Error::InvalidParameter(
            "ODE integration needs a real energy".into(),
        ));
    }
    if r_grid.is_empty() || r_grid.windows(2).any(|p| !(p[1] > p[0])) || !(r_grid[0] > 0.0) {
        return Err(Error::InvalidParameter(
            "r grid must be positive and strictly increasing".into(),
        ));
    }
    let z = energy.z.re;
    let r0 = r_grid[0].min(1e-4 * r_grid[r_grid.len() - 1]).max(1e-8);
    let (q0, q1) = origin_taylor(potential, r0);
    let s = origin_series(params, z, q0, q1, r0)?;
    let norm = s[0].hypot(s[1]);
    let mut ts = vec![r0];
    ts.extend(r_grid.iter().copied().filter(|&r| r > r0));
    let ys = integrate_dense(
        |r, y: &[f64; 2]| {
            let d = system_rhs(
                l,
                m,
                z,
                potential.eval(r) - a / r,
                r,
                &[y[0], y[1], 0.0, 0.0],
            );
            [d[0], d[1]]
        },
        &ts,
        [s[0] / norm, s[1] / norm],
        &ode_opts(),
    )?;
    let c =
        -2.0 * energy.sqrt_m_minus * (2.0 * energy.eps).powc(Complex64::new(w - 1.0, 0.0)) * norm;
    let skip = ts.len() - r_grid.len();
    let (f1, f2): (Vec<Complex64>, Vec<Complex64>) =
        ys[skip..].iter().map(|y| (c * y[0], c * y[1])).unzip();
    Ok(SolutionSample {
        r: r_grid.to_vec(),
        components: vec![f1, f2],
    })
}

/// −2√(m+z) e^{rε} (2rε)^{ia} F̃(r) for real z > m, where F̃ equals the
/// non-regular Coulomb column beyond the support of q.
pub fn coulomb_tail_normalized(
    params: &CoulombParams,
    potential: &PotentialSpec,
    r: f64,
    z: f64,
) -> Result<[Complex64; 2]> {
    let (a, l, m, _) = params.dirac_parts()?;
    potential.tail_integral(r)?;
    if !(z > m) {
        return Err(Error::InvalidParameter(format!(
            "tail solution needs z > m, got z = {z}"
        )));
    }
    let e = BranchedEnergy::dirac(z, m)?;
    let end = potential.support_end().unwrap_or(r).max(r);
    let start = coulomb_dirac_basis(params, &e, end)?.non_regular();
    let y = integrate(
        |t, y: &[f64; 4]| system_rhs(l, m, z, potential.eval(t) - a / t, t, y),
        end,
        pack(start),
        r,
        &ode_opts(),
    )?;
    let f = unpack(&y);
    let rho = 2.0 * r * e.eps;
    let k = -2.0 * e.sqrt_m_plus * (r * e.eps).exp() * rho.powc(Complex64::new(0.0, a));
    Ok([k * f[0], k * f[1]])
}

/// Tail defect ∫_r^∞ q of the Coulomb Dirac system from the normalized
/// decaying solution at each z, unwrapped along increasing z and extrapolated in 1/z.
pub fn coulomb_dirac_defect(
    params: &CoulombParams,
    potential: &PotentialSpec,
    r: f64,
    z_list: &[f64],
) -> Result<DefectEstimate> {
    let mut zs = z_list.to_vec();
    zs.sort_by(f64::total_cmp);
    let raw: Result<Vec<f64>> = zs
        .par_iter()
        .map(|&z| coulomb_tail_normalized(params, potential, r, z).map(tail_phase))
        .collect();
    let (value, uncertainty) = extrapolate_in_inverse_z(&zs, &raw?)?;
    Ok(DefectEstimate {
        value,
        uncertainty,
        per_level: Vec::new(),
    })
}
