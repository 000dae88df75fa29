//! Radial Dirac system
//!
//! (d/dr + ℓ/r) f₁ − (z + m − q) f₂ = 0,  (d/dr − ℓ/r) f₂ + (z − m − q) f₁ = 0,
//!
//! its free confluent-hypergeometric basis, the ψ-boundary problem on [0, a]
//! and the quantum defect at z → ∞.

use crate::error::{Error, Result};
use crate::numerics::{extrapolate_in_inverse_n, extrapolate_in_inverse_z, illinois};
use crate::ode::{integrate, integrate_dense, OdeOptions};
use crate::potential::PotentialSpec;
use crate::schrodinger::{origin_taylor, start_radius};
use crate::specfun::{gamma, kummer_phi, tricomi_psi, HypergeoParams};
use crate::types::{DefectEstimate, EigenSpectrum, Level, SolutionSample};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::{FRAC_PI_2, PI};

const I: Complex64 = Complex64::new(0.0, 1.0);
const SERIES_TERMS: usize = 16;

/// Angular number, mass and potential.
#[derive(Debug, Clone, PartialEq)]
pub struct DiracParams {
    pub ell: i32,
    pub m: f64,
    pub potential: PotentialSpec,
}

impl DiracParams {
    pub fn new(ell: i32, m: f64, potential: PotentialSpec) -> Result<Self> {
        if ell == 0 {
            return Err(Error::InvalidParameter(
                "ℓ must be a nonzero integer".into(),
            ));
        }
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "mass m = {m} must be positive"
            )));
        }
        Ok(Self { ell, m, potential })
    }

    /// The J-transformed problem (−ℓ, −q). Solutions map by swapping
    /// components and energies by z ↦ −z.
    pub fn transformed(&self) -> Self {
        Self {
            ell: -self.ell,
            m: self.m,
            potential: self.potential.scaled(-1.0),
        }
    }

    /// The equivalent problem with ℓ > 0, and whether the J-transform was applied.
    pub fn normalized(&self) -> (Self, bool) {
        if self.ell < 0 {
            (self.transformed(), true)
        } else {
            (self.clone(), false)
        }
    }

    fn require_positive_ell(&self) -> Result<u32> {
        if self.ell < 0 {
            return Err(Error::InvalidParameter(format!(
                "ℓ = {} < 0; use `normalized()` first",
                self.ell
            )));
        }
        Ok(self.ell as u32)
    }
}

/// An energy with its branch parameter ε and the square roots √(m ± z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchedEnergy {
    pub z: Complex64,
    pub eps: Complex64,
    pub sqrt_m_plus: Complex64,
    pub sqrt_m_minus: Complex64,
}

impl BranchedEnergy {
    /// Real Dirac energy. ε = √(m²−z²) with arg ε = π/2 for z > m and −π/2 for z < −m.
    pub fn dirac(z: f64, m: f64) -> Result<Self> {
        if !(m > 0.0) || !z.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "bad energy z = {z}, m = {m}"
            )));
        }
        if z.abs() == m {
            return Err(Error::Domain(format!("z = {z} is a branch point")));
        }
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let (sp, sm, eps) = if z > m {
            (
                c((m + z).sqrt(), 0.0),
                c(0.0, (z - m).sqrt()),
                c(0.0, (z * z - m * m).sqrt()),
            )
        } else if z < -m {
            (
                c(0.0, -(-(m + z)).sqrt()),
                c((m - z).sqrt(), 0.0),
                c(0.0, -(z * z - m * m).sqrt()),
            )
        } else {
            (
                c((m + z).sqrt(), 0.0),
                c((m - z).sqrt(), 0.0),
                c((m * m - z * z).sqrt(), 0.0),
            )
        };
        Ok(Self {
            z: c(z, 0.0),
            eps,
            sqrt_m_plus: sp,
            sqrt_m_minus: sm,
        })
    }

    /// Complex Dirac energy on the principal branch of √(m²−z²).
    pub fn dirac_complex(z: Complex64, m: f64) -> Result<Self> {
        if z.im == 0.0 {
            return Self::dirac(z.re, m);
        }
        let eps = (m * m - z * z).sqrt();
        let sp = (m + z).sqrt();
        Ok(Self {
            z,
            eps,
            sqrt_m_plus: sp,
            sqrt_m_minus: eps / sp,
        })
    }

    /// Schrödinger energy, ε = i√z on the principal branch. The square-root
    /// fields are unused and set to one.
    pub fn schrodinger(z: Complex64) -> Result<Self> {
        if z.norm() == 0.0 {
            return Err(Error::Domain("z = 0".into()));
        }
        let one = Complex64::new(1.0, 0.0);
        Ok(Self {
            z,
            eps: I * z.sqrt(),
            sqrt_m_plus: one,
            sqrt_m_minus: one,
        })
    }

    /// Checks ε² = m² − z² and √(m+z)√(m−z) = ε to relative `tol`.
    pub fn check(&self, m: f64, tol: f64) -> Result<()> {
        let scale = m * m + self.z.norm_sqr();
        let e1 = (self.eps * self.eps - (m * m - self.z * self.z)).norm() / scale;
        let e2 = (self.sqrt_m_plus * self.sqrt_m_minus - self.eps).norm() / scale.sqrt();
        if e1 > tol || e2 > tol {
            return Err(Error::Domain(format!(
                "branch data inconsistent for z = {}",
                self.z
            )));
        }
        Ok(())
    }

    fn real_z(&self) -> Result<f64> {
        if self.z.im != 0.0 {
            return Err(Error::InvalidParameter(
                "ODE integration needs a real energy".into(),
            ));
        }
        Ok(self.z.re)
    }
}

/// The matrix U₀(r) whose columns are the regular and non-regular free solutions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracBasis {
    pub r: f64,
    /// `u0[i][j]`: component i of column j.
    pub u0: [[Complex64; 2]; 2],
}

impl DiracBasis {
    pub fn det(&self) -> Complex64 {
        self.u0[0][0] * self.u0[1][1] - self.u0[0][1] * self.u0[1][0]
    }

    pub fn regular(&self) -> [Complex64; 2] {
        [self.u0[0][0], self.u0[1][0]]
    }

    pub fn non_regular(&self) -> [Complex64; 2] {
        [self.u0[0][1], self.u0[1][1]]
    }

    /// U₀(r)·v.
    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        [
            self.u0[0][0] * v[0] + self.u0[0][1] * v[1],
            self.u0[1][0] * v[0] + self.u0[1][1] * v[1],
        ]
    }

    /// U₀(r)⁻¹·v.
    pub fn solve(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        let d = self.det();
        [
            (self.u0[1][1] * v[0] - self.u0[0][1] * v[1]) / d,
            (self.u0[0][0] * v[1] - self.u0[1][0] * v[0]) / d,
        ]
    }
}

/// Q₁,₀ = Φ(ℓ, 2ℓ+1, ρ) and Q₂,₀ = −Φ(ℓ+1, 2ℓ+1, ρ).
pub fn q_regular(ell: u32, rho: Complex64) -> Result<(Complex64, Complex64)> {
    let l = ell as f64;
    let q1 = kummer_phi(&HypergeoParams::real(l, 2.0 * l + 1.0)?, rho)?;
    let q2 = -kummer_phi(&HypergeoParams::real(l + 1.0, 2.0 * l + 1.0)?, rho)?;
    Ok((q1, q2))
}

/// Q̃₁,₀ = Ψ(ℓ, 2ℓ+1, ρ) and Q̃₂,₀ = ℓ Ψ(ℓ+1, 2ℓ+1, ρ).
pub fn q_non_regular(ell: u32, rho: Complex64) -> Result<(Complex64, Complex64)> {
    let l = ell as f64;
    let b = Complex64::new(2.0 * l + 1.0, 0.0);
    let q1 = tricomi_psi(Complex64::new(l, 0.0), b, rho)?;
    let q2 = l * tricomi_psi(Complex64::new(l + 1.0, 0.0), b, rho)?;
    Ok((q1, q2))
}

// F = e^{−rε} (2rε)^{ℓ−1} r [√(m+z)(Q₁+Q₂), −√(m−z)(Q₁−Q₂)]
fn assemble(e: &BranchedEnergy, pref: Complex64, q1: Complex64, q2: Complex64) -> [Complex64; 2] {
    [
        e.sqrt_m_plus * pref * (q1 + q2),
        -e.sqrt_m_minus * pref * (q1 - q2),
    ]
}

/// U₀(r) for q ≡ 0.
pub fn free_basis(params: &DiracParams, energy: &BranchedEnergy, r: f64) -> Result<DiracBasis> {
    let ell = params.require_positive_ell()?;
    let rho = 2.0 * r * energy.eps;
    if !(r > 0.0) || rho.norm() == 0.0 {
        return Err(Error::Domain(format!("2rε = 0 at r = {r}")));
    }
    let pref = (-r * energy.eps).exp() * rho.powi(ell as i32 - 1) * r;
    let (q1, q2) = q_regular(ell, rho)?;
    let (p1, p2) = q_non_regular(ell, rho)?;
    let f = assemble(energy, pref, q1, q2);
    let g = assemble(energy, pref, p1, p2);
    Ok(DiracBasis {
        r,
        u0: [[f[0], g[0]], [f[1], g[1]]],
    })
}

/// det U₀ = Γ(2ℓ)/(εΓ(ℓ)).
pub fn free_wronskian(ell: u32, eps: Complex64) -> Result<Complex64> {
    let l = ell as f64;
    Ok(gamma(Complex64::new(2.0 * l, 0.0))? / (eps * gamma(Complex64::new(l, 0.0))?))
}

/// Two-exponential large-|ρ| form of the regular column for z > m:
/// Γ(2ℓ+1)/(2εΓ(ℓ+1)) [((−1)^ℓ e^{−rε} − e^{rε})√(m+z), −((−1)^ℓ e^{−rε} + e^{rε})√(m−z)].
pub fn free_regular_asymptote(ell: u32, energy: &BranchedEnergy, r: f64) -> Result<[Complex64; 2]> {
    let l = ell as f64;
    let c = gamma(Complex64::new(2.0 * l + 1.0, 0.0))?
        / (2.0 * energy.eps * gamma(Complex64::new(l + 1.0, 0.0))?);
    let sgn = if ell.is_multiple_of(2) { 1.0 } else { -1.0 };
    let em = (-r * energy.eps).exp() * sgn;
    let ep = (r * energy.eps).exp();
    Ok([
        c * (em - ep) * energy.sqrt_m_plus,
        -c * (em + ep) * energy.sqrt_m_minus,
    ])
}

fn ode_opts() -> OdeOptions {
    OdeOptions {
        rtol: 1e-13,
        atol: 1e-15,
        ..Default::default()
    }
}

/// Right-hand side for a real energy; complex data are carried as
/// [Re f₁, Re f₂, Im f₁, Im f₂].
pub(crate) fn system_rhs(ell: f64, m: f64, z: f64, q: f64, r: f64, y: &[f64; 4]) -> [f64; 4] {
    let k = ell / r;
    [
        -k * y[0] + (z + m - q) * y[1],
        k * y[1] - (z - m - q) * y[0],
        -k * y[2] + (z + m - q) * y[3],
        k * y[3] - (z - m - q) * y[2],
    ]
}

pub(crate) fn pack(f: [Complex64; 2]) -> [f64; 4] {
    [f[0].re, f[1].re, f[0].im, f[1].im]
}

pub(crate) fn unpack(y: &[f64; 4]) -> [Complex64; 2] {
    [Complex64::new(y[0], y[2]), Complex64::new(y[1], y[3])]
}

// Origin series with q ≈ q₀ + q₁r. For ℓ > 0: f₂ = r^ℓ(1 + …), f₁ = O(r^{ℓ+1});
// for ℓ < 0 the roles swap. Returns the real (f₁, f₂) at r₀.
fn origin_series(ell: i32, m: f64, z: f64, q0: f64, q1: f64, r0: f64) -> [f64; 2] {
    let l = ell.unsigned_abs() as f64;
    let (mut a, mut b) = ([0.0; SERIES_TERMS], [0.0; SERIES_TERMS]);
    if ell > 0 {
        b[0] = 1.0;
    } else {
        a[0] = 1.0;
    }
    let (sa, sb) = if ell > 0 {
        (2.0 * l, 0.0)
    } else {
        (0.0, 2.0 * l)
    };
    for j in 1..SERIES_TERMS {
        let jf = j as f64;
        let mut ra = (z + m - q0) * b[j - 1];
        let mut rb = -(z - m - q0) * a[j - 1];
        if j >= 2 {
            ra -= q1 * b[j - 2];
            rb += q1 * a[j - 2];
        }
        a[j] = ra / (jf + sa);
        b[j] = rb / (jf + sb);
    }
    let (mut sa_, mut sb_) = (0.0, 0.0);
    for j in (0..SERIES_TERMS).rev() {
        sa_ = sa_ * r0 + a[j];
        sb_ = sb_ * r0 + b[j];
    }
    let lead = r0.powi(l as i32);
    [lead * sa_, lead * sb_]
}

// Scale matching the series to the regular free column: −2√(m−z)(2ε)^{ℓ−1}.
fn regular_scale(ell: u32, energy: &BranchedEnergy) -> Complex64 {
    -2.0 * energy.sqrt_m_minus * (2.0 * energy.eps).powi(ell as i32 - 1)
}

/// Regular solution on a uniform grid of `npts` points over [r₀, a],
/// normalized like the regular column of U₀ near the origin.
pub fn integrate_regular_dirac(
    params: &DiracParams,
    energy: &BranchedEnergy,
    a: f64,
    npts: usize,
) -> Result<SolutionSample> {
    let ell = params.require_positive_ell()?;
    energy.check(params.m, 1e-12)?;
    let z = energy.real_z()?;
    let r0 = start_radius(a);
    let npts = npts.max(2);
    let rs: Vec<f64> = (0..npts)
        .map(|i| r0 + (a - r0) * i as f64 / (npts - 1) as f64)
        .collect();
    let (q0, q1) = origin_taylor(&params.potential, r0);
    let s = origin_series(params.ell, params.m, z, q0, q1, r0);
    // integrate the unit-size real solution, then restore the scale
    let norm = s[0].hypot(s[1]);
    let y0 = [s[0] / norm, s[1] / norm];
    let q = &params.potential;
    let (l, m) = (params.ell as f64, params.m);
    let ys = integrate_dense(
        |r, y: &[f64; 2]| {
            let d = system_rhs(l, m, z, q.eval(r), r, &[y[0], y[1], 0.0, 0.0]);
            [d[0], d[1]]
        },
        &rs,
        y0,
        &ode_opts(),
    )?;
    let c = regular_scale(ell, energy) * norm;
    let (f1, f2): (Vec<Complex64>, Vec<Complex64>) =
        ys.iter().map(|y| (c * y[0], c * y[1])).unzip();
    Ok(SolutionSample {
        r: rs,
        components: vec![f1, f2],
    })
}

/// Phase φ(r) of the regular solution, f₁ = R sin φ, f₂ = R cos φ, continued
/// from the origin; works for either sign of ℓ and grows with z.
pub fn dirac_phase(params: &DiracParams, z: f64, r: f64) -> Result<f64> {
    let r0 = start_radius(r);
    let (q0, q1) = origin_taylor(&params.potential, r0);
    let s = origin_series(params.ell, params.m, z, q0, q1, r0);
    let phi0 = s[0].atan2(s[1]);
    let (l, m) = (params.ell as f64, params.m);
    let q = &params.potential;
    let y = integrate(
        |t, y: &[f64; 1]| {
            let (s2, c2) = (2.0 * y[0]).sin_cos();
            [z - q.eval(t) + m * c2 - l / t * s2]
        },
        r0,
        [phi0],
        r,
        &ode_opts(),
    )?;
    Ok(y[0])
}

/// Which component carries sin ψ in the boundary condition at r = a.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BcReading {
    /// F₁(a) sin ψ + F₂(a) cos ψ = 0.
    #[default]
    F1Sin,
    /// F₂(a) sin ψ + F₁(a) cos ψ = 0.
    F2Sin,
}

// Phase value at a solving the n-th root; n ∈ ℤ∖{0}.
fn target_phase(n: i64, psi: f64, reading: BcReading) -> f64 {
    let k = if n > 0 { n } else { n + 1 } as f64;
    match reading {
        BcReading::F1Sin => psi - FRAC_PI_2 + k * PI,
        BcReading::F2Sin => k * PI - psi,
    }
}

/// |F₁ sin ψ + F₂ cos ψ| / |F| (or the swapped reading) at r = a.
pub fn boundary_residual(
    params: &DiracParams,
    a: f64,
    psi: f64,
    z: f64,
    reading: BcReading,
) -> Result<f64> {
    let phi = dirac_phase(params, z, a)?;
    Ok(match reading {
        BcReading::F1Sin => (phi - psi).cos().abs(),
        BcReading::F2Sin => (phi + psi).sin().abs(),
    })
}

/// z ≈ (π/a)(n + ℓ/2) + (ψ − π/2 + δ(a))/a.
pub fn asymptotic_level(n: f64, a: f64, ell: i32, psi: f64, delta: f64) -> f64 {
    PI / a * (n + ell as f64 / 2.0) + (psi - FRAC_PI_2 + delta) / a
}

/// The n-th root (n ≠ 0) of the ψ-boundary problem on [0, a].
pub fn eigenvalue_bc(
    params: &DiracParams,
    a: f64,
    psi: f64,
    n: i64,
    reading: BcReading,
) -> Result<Level> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "levels are indexed by n ≠ 0".into(),
        ));
    }
    if !(a > 0.0) || !(psi.abs() <= FRAC_PI_2 + 1e-15) {
        return Err(Error::InvalidParameter(format!(
            "need a > 0 and |ψ| ≤ π/2, got a = {a}, ψ = {psi}"
        )));
    }
    let target = target_phase(n, psi, reading);
    let f = |z: f64| dirac_phase(params, z, a).map(|p| p - target);
    let delta = params.potential.integral(start_radius(a), a);
    let nf = n as f64;
    let mut lo = asymptotic_level(nf - 0.5, a, params.ell, psi, delta);
    let mut hi = asymptotic_level(nf + 0.5, a, params.ell, psi, delta);
    let mut flo = f(lo)?;
    let mut fhi = f(hi)?;
    let mut expand = 0;
    while flo > 0.0 || fhi < 0.0 {
        let w = (hi - lo).max(PI / a);
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
            return Err(Error::Bracketing(format!("no bracket for Dirac level {n}")));
        }
    }
    let scale = hi.abs().max(lo.abs()).max(1.0);
    let z = illinois(
        f,
        lo,
        hi,
        flo,
        fhi,
        1e-15 * scale,
        1e-13 * target.abs().max(1.0),
    )?;
    let residual = boundary_residual(params, a, psi, z, reading)?;
    Ok(Level { n, z, residual })
}

/// Roots for every n ≠ 0 in `n_range`, with the default component reading.
pub fn eigenvalues_bc(
    params: &DiracParams,
    a: f64,
    psi: f64,
    n_range: std::ops::RangeInclusive<i64>,
) -> Result<EigenSpectrum> {
    eigenvalues_bc_with(params, a, psi, n_range, BcReading::default())
}

/// As [`eigenvalues_bc`] with an explicit component reading.
pub fn eigenvalues_bc_with(
    params: &DiracParams,
    a: f64,
    psi: f64,
    n_range: std::ops::RangeInclusive<i64>,
    reading: BcReading,
) -> Result<EigenSpectrum> {
    let ns: Vec<i64> = n_range.filter(|&n| n != 0).collect();
    if ns.is_empty() {
        return Err(Error::InvalidParameter("empty level window".into()));
    }
    let levels: Result<Vec<Level>> = ns
        .par_iter()
        .map(|&n| eigenvalue_bc(params, a, psi, n, reading))
        .collect();
    let mut levels = levels?;
    // the index skips 0, so renumber across it only for validation
    let spec = EigenSpectrum {
        levels: levels
            .iter()
            .map(|l| Level {
                n: if l.n < 0 { l.n + 1 } else { l.n },
                ..*l
            })
            .collect(),
    };
    spec.validate()?;
    levels.sort_by_key(|l| l.n);
    Ok(EigenSpectrum { levels })
}

/// δ̂_n = a z_n − π(n + ℓ/2) − ψ + π/2.
pub fn defect_per_level_dirac(n: i64, z: f64, a: f64, ell: i32, psi: f64) -> f64 {
    a * z - PI * (n as f64 + ell as f64 / 2.0) - psi + FRAC_PI_2
}

/// Quantum defect δ(a) = ∫₀^a q from positive-index levels, extrapolated in 1/n.
pub fn estimate_defect_dirac(
    spectrum: &EigenSpectrum,
    a: f64,
    ell: i32,
    psi: f64,
) -> Result<DefectEstimate> {
    let pos: Vec<&Level> = spectrum.levels.iter().filter(|l| l.n > 0).collect();
    if pos.len() < 5 {
        return Err(Error::InsufficientData {
            need: 5,
            got: pos.len(),
        });
    }
    let ns: Vec<f64> = pos.iter().map(|l| l.n as f64).collect();
    let d: Vec<f64> = pos
        .iter()
        .map(|l| defect_per_level_dirac(l.n, l.z, a, ell, psi))
        .collect();
    let (value, uncertainty) = extrapolate_in_inverse_n(&ns, &d)?;
    let per_level = pos.iter().zip(&d).map(|(l, v)| (l.n, *v)).collect();
    Ok(DefectEstimate {
        value,
        uncertainty,
        per_level,
    })
}

/// F̃_∞(r) = e^{−i∫_r^∞ q} (i, 1).
pub fn tail_limit(params: &DiracParams, r: f64) -> Result<[Complex64; 2]> {
    let t = params.potential.tail_integral(r)?;
    let ph = Complex64::new(0.0, -t).exp();
    Ok([I * ph, ph])
}

/// −2√(m+z) e^{rε} F̃(r, ε) for real z > m, where F̃ is the solution equal to
/// the non-regular free column beyond the support of q.
pub fn tail_normalized(params: &DiracParams, r: f64, z: f64) -> Result<[Complex64; 2]> {
    params.require_positive_ell()?;
    params.potential.tail_integral(r)?;
    if !(z > params.m) {
        return Err(Error::InvalidParameter(format!(
            "tail solution needs z > m, got z = {z}"
        )));
    }
    let end = params.potential.support_end().unwrap_or(r).max(r);
    let e = BranchedEnergy::dirac(z, params.m)?;
    let start = free_basis(params, &e, end)?.non_regular();
    let y0 = pack(start);
    let (l, m) = (params.ell as f64, params.m);
    let q = &params.potential;
    let y = integrate(
        |t, y: &[f64; 4]| system_rhs(l, m, z, q.eval(t), t, y),
        end,
        y0,
        r,
        &ode_opts(),
    )?;
    let f = unpack(&y);
    let k = -2.0 * e.sqrt_m_plus * (r * e.eps).exp();
    Ok([k * f[0], k * f[1]])
}

/// Per-energy tail check: the limit vector, the normalized solutions and their distance to it.
#[derive(Debug, Clone, PartialEq)]
pub struct TailCheck {
    pub limit: [Complex64; 2],
    pub normalized: Vec<[Complex64; 2]>,
    pub errors: Vec<f64>,
}

/// Compares the normalized decaying solution at each z with F̃_∞(r).
pub fn tail_defect_solution(params: &DiracParams, r: f64, z_list: &[f64]) -> Result<TailCheck> {
    let limit = tail_limit(params, r)?;
    let normalized: Result<Vec<[Complex64; 2]>> = z_list
        .par_iter()
        .map(|&z| tail_normalized(params, r, z))
        .collect();
    let normalized = normalized?;
    let errors = normalized
        .iter()
        .map(|n| ((n[0] - limit[0]).norm_sqr() + (n[1] - limit[1]).norm_sqr()).sqrt())
        .collect();
    Ok(TailCheck {
        limit,
        normalized,
        errors,
    })
}

/// δ̂ = −arg((N₂ − iN₁)/2) of a normalized vector N ≈ e^{−iδ}(i, 1).
pub fn tail_phase(n: [Complex64; 2]) -> f64 {
    -((n[1] - I * n[0]) / 2.0).arg()
}

/// Tail defect ∫_r^∞ q from the normalized solutions at `z_list`, unwrapped along
/// increasing z and extrapolated in 1/z.
pub fn estimate_tail_defect(
    params: &DiracParams,
    r: f64,
    z_list: &[f64],
) -> Result<DefectEstimate> {
    let mut zs = z_list.to_vec();
    zs.sort_by(f64::total_cmp);
    let raw: Result<Vec<f64>> = zs
        .par_iter()
        .map(|&z| tail_normalized(params, r, z).map(tail_phase))
        .collect();
    let (value, uncertainty) = extrapolate_in_inverse_z(&zs, &raw?)?;
    Ok(DefectEstimate {
        value,
        uncertainty,
        per_level: Vec::new(),
    })
}
