//! Statistical sums Z(T) = Σ e^{−z_n/T}, the theta identity behind their
//! large-T behaviour, the box and anharmonic asymptotes, and the anharmonic
//! oscillator levels.

use crate::error::{Error, Result};
use crate::numerics::{illinois, polyfit, KahanSum};
use crate::ode::{integrate, OdeOptions};
use crate::potential::{PotentialSpec, PotentialTag};
use crate::types::{DefectEstimate, EigenSpectrum, Level};
use rayon::prelude::*;
use std::f64::consts::PI;

/// Relative size of the last summed term.
pub const TERM_TOL: f64 = 1e-18;

/// Box [0, a₁] × … × [0, a_k].
#[derive(Debug, Clone, PartialEq)]
pub struct BoxDomain {
    sides: Vec<f64>,
}

impl BoxDomain {
    pub fn new(sides: Vec<f64>) -> Result<Self> {
        if sides.is_empty() {
            return Err(Error::InvalidParameter(
                "box needs at least one side".into(),
            ));
        }
        if sides.iter().any(|a| !(*a > 0.0 && a.is_finite())) {
            return Err(Error::InvalidParameter(format!(
                "box sides must be positive, got {sides:?}"
            )));
        }
        Ok(Self { sides })
    }

    pub fn sides(&self) -> &[f64] {
        &self.sides
    }

    pub fn dim(&self) -> usize {
        self.sides.len()
    }

    /// (𝒱_k, 𝒱_{k−1}, 𝒱_{k−2}) with 𝒱₋₁ = 0 and 𝒱₀ = 1.
    pub fn coefficients(&self) -> (f64, f64, f64) {
        let k = self.dim();
        let vk: f64 = self.sides.iter().product();
        let v1 = vk * self.sides.iter().map(|a| 1.0 / a).sum::<f64>();
        let mut pairs = 0.0;
        for i in 0..k {
            for j in i + 1..k {
                pairs += 1.0 / (self.sides[i] * self.sides[j]);
            }
        }
        let v2 = vk * pairs;
        (vk, v1, v2)
    }

    /// (S_k, S_{k−1}, S_{k−2}): volume, boundary measure and the measure of
    /// pairwise facet intersections (the number of corners when k = 2).
    pub fn measures(&self) -> (f64, f64, f64) {
        let k = self.dim();
        let drop = |skip: &[usize]| -> f64 {
            self.sides
                .iter()
                .enumerate()
                .filter(|(i, _)| !skip.contains(i))
                .map(|(_, a)| a)
                .product()
        };
        let vol = drop(&[]);
        let facets: f64 = (0..k).map(|i| 2.0 * drop(&[i])).sum();
        let mut edges = 0.0;
        for i in 0..k {
            for j in i + 1..k {
                edges += 4.0 * drop(&[i, j]);
            }
        }
        (vol, facets, edges)
    }
}

/// Direct and asymptotic values of Z at one temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatSumReport {
    pub t: f64,
    pub z_direct: f64,
    pub z_asymptotic: f64,
    pub residual: f64,
}

impl StatSumReport {
    pub fn new(t: f64, z_direct: f64, z_asymptotic: f64) -> Self {
        Self {
            t,
            z_direct,
            z_asymptotic,
            residual: z_direct - z_asymptotic,
        }
    }
}

/// Closed-form level laws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LevelLaw {
    /// z_n = (πn/a)² + shift
    Dirichlet { a: f64, shift: f64 },
    /// z_n = 2n − 1/2 + shift
    Harmonic { shift: f64 },
}

impl LevelLaw {
    pub fn level(&self, n: u64) -> f64 {
        let n = n as f64;
        match *self {
            LevelLaw::Dirichlet { a, shift } => (PI * n / a).powi(2) + shift,
            LevelLaw::Harmonic { shift } => 2.0 * n - 0.5 + shift,
        }
    }

    // bound on Σ_{n>N} e^{−z_n/T}
    fn tail_bound(&self, last: u64, t: f64) -> f64 {
        let next = (-self.level(last + 1) / t).exp();
        let ratio = match *self {
            LevelLaw::Dirichlet { a, .. } => (-(PI / a).powi(2) * (2 * last + 3) as f64 / t).exp(),
            LevelLaw::Harmonic { .. } => (-2.0 / t).exp(),
        };
        next / (1.0 - ratio)
    }
}

/// Partial sum of a closed-form law and a bound on the omitted tail, so the
/// exact value lies in [value, value + tail_bound].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LawSum {
    pub value: f64,
    pub tail_bound: f64,
    pub terms: u64,
}

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "temperature must be positive, got {t}"
        )));
    }
    Ok(())
}

/// Σ e^{−z_n/T} over a computed spectrum. The spectrum must reach levels
/// whose terms fall below TERM_TOL of the running sum.
pub fn partition_sum(spectrum: &EigenSpectrum, t: f64) -> Result<f64> {
    check_t(t)?;
    if spectrum.is_empty() {
        return Err(Error::InsufficientData { need: 1, got: 0 });
    }
    let mut sum = KahanSum::default();
    for l in &spectrum.levels {
        let term = (-l.z / t).exp();
        sum.add(term);
        if term < TERM_TOL * sum.value() {
            return Ok(sum.value());
        }
    }
    Err(Error::NonConvergence(format!(
        "{} levels up to z = {} do not reach the term tolerance at T = {t}",
        spectrum.len(),
        spectrum.levels.last().map_or(0.0, |l| l.z)
    )))
}

/// Σ e^{−z_n/T} for a closed-form law with a tail majorant.
pub fn partition_sum_law(law: &LevelLaw, t: f64) -> Result<LawSum> {
    check_t(t)?;
    let mut sum = KahanSum::default();
    let mut n = 1u64;
    loop {
        let term = (-law.level(n) / t).exp();
        sum.add(term);
        if term < TERM_TOL * sum.value() {
            break;
        }
        n += 1;
        if n > 1 << 32 {
            return Err(Error::NonConvergence(format!("level law sum at T = {t}")));
        }
    }
    Ok(LawSum {
        value: sum.value(),
        tail_bound: law.tail_bound(n, t),
        terms: n,
    })
}

/// First `n` levels of a law as a spectrum.
pub fn law_spectrum(law: &LevelLaw, n: usize) -> EigenSpectrum {
    EigenSpectrum {
        levels: (1..=n as u64)
            .map(|k| Level {
                n: k as i64,
                z: law.level(k),
                residual: 0.0,
            })
            .collect(),
    }
}

/// Σ over index tuples of e^{−(z_{n₁} + … + z_{n_k})/T} for separable spectra,
/// enumerated directly. Tuples whose term is below TERM_TOL of the leading term
/// are skipped.
pub fn partition_sum_separable(spectra: &[EigenSpectrum], t: f64) -> Result<f64> {
    check_t(t)?;
    if spectra.is_empty() || spectra.iter().any(|s| s.is_empty()) {
        return Err(Error::InsufficientData { need: 1, got: 0 });
    }
    let mins: Vec<f64> = spectra.iter().map(|s| s.levels[0].z).collect();
    let window = -TERM_TOL.ln() * t;
    let floor = window + mins.iter().sum::<f64>();
    for s in spectra {
        let top = s.levels.last().map_or(0.0, |l| l.z);
        if top - s.levels[0].z < window {
            return Err(Error::NonConvergence(format!(
                "spectrum ends at z = {top}, too short for T = {t}"
            )));
        }
    }
    // minimal remaining energy for dimensions d.. (suffix sums)
    let mut rest = vec![0.0; spectra.len() + 1];
    for d in (0..spectra.len()).rev() {
        rest[d] = rest[d + 1] + mins[d];
    }
    fn walk(
        spectra: &[EigenSpectrum],
        rest: &[f64],
        d: usize,
        acc: f64,
        floor: f64,
        t: f64,
        sum: &mut KahanSum,
    ) {
        for l in &spectra[d].levels {
            let e = acc + l.z;
            if e + rest[d + 1] > floor {
                break;
            }
            if d + 1 == spectra.len() {
                sum.add((-e / t).exp());
            } else {
                walk(spectra, rest, d + 1, e, floor, t, sum);
            }
        }
    }
    let parts: Vec<f64> = spectra[0]
        .levels
        .par_iter()
        .map(|l| {
            let mut s = KahanSum::default();
            if l.z + rest[1] <= floor {
                if spectra.len() == 1 {
                    s.add((-l.z / t).exp());
                } else {
                    walk(spectra, &rest, 1, l.z, floor, t, &mut s);
                }
            }
            s.value()
        })
        .collect();
    let mut total = KahanSum::default();
    parts.iter().for_each(|p| total.add(*p));
    Ok(total.value())
}

fn gaussian_series(c: f64, rel: f64) -> f64 {
    // Σ_{n≥1} e^{−c n²}
    let mut sum = KahanSum::default();
    let mut n = 1.0f64;
    loop {
        let term = (-c * n * n).exp();
        sum.add(term);
        if term <= rel * sum.value() || term == 0.0 {
            return sum.value();
        }
        n += 1.0;
    }
}

/// Both sides of Σ e^{−n²/z} = −1/2 + (1/2)√(zπ) + √(zπ) Σ e^{−zn²π²}.
pub fn theta_identity_check(z: f64) -> Result<(f64, f64)> {
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "z must be positive, got {z}"
        )));
    }
    let lhs = gaussian_series(1.0 / z, 1e-16);
    let s = (z * PI).sqrt();
    let mut rhs = KahanSum::default();
    rhs.add(-0.5);
    rhs.add(0.5 * s);
    rhs.add(s * gaussian_series(z * PI * PI, 1e-16));
    Ok((lhs, rhs.value()))
}

/// √(zπ) Σ e^{−zn²π²}, the remainder in Σ e^{−n²/z} = (1/2)√(zπ) − 1/2 + o(1).
pub fn theta_remainder(z: f64) -> f64 {
    (z * PI).sqrt() * gaussian_series(z * PI * PI, 1e-16)
}

/// (a/2)√(T/π) − 1/2 − δ/(2√(Tπ)).
pub fn asympt_1d(t: f64, a: f64, delta: f64) -> f64 {
    0.5 * a * (t / PI).sqrt() - 0.5 - delta / (2.0 * (t * PI).sqrt())
}

/// (T/4π)^{k/2} (𝒱_k − √(π/T) 𝒱_{k−1} + (π/T) 𝒱_{k−2} − δ(G)/T).
pub fn asympt_multidim(t: f64, domain: &BoxDomain, delta_g: f64) -> f64 {
    let (vk, v1, v2) = domain.coefficients();
    let k = domain.dim() as f64;
    (t / (4.0 * PI)).powf(0.5 * k) * (vk - (PI / t).sqrt() * v1 + PI / t * v2 - delta_g / t)
}

/// (T/2)^k (1 − k/(2T) − δ/(T√(Tπ))); for k = 1 this is T/2 − 1/4 − δ/(2√(Tπ)).
pub fn asympt_anharmonic(t: f64, delta: f64, k: u32) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParameter(
            "dimension k must be at least 1".into(),
        ));
    }
    let kf = k as f64;
    Ok((0.5 * t).powi(k as i32) * (1.0 - kf / (2.0 * t) - delta / (t * (t * PI).sqrt())))
}

/// Default truncation length of the half-line for levels up to `n_max`.
pub fn anharmonic_cutoff(n_max: usize) -> f64 {
    let turning = 2.0 * (2.0 * n_max as f64).sqrt();
    (turning + 12.0).max(20.0)
}

fn ode_opts() -> OdeOptions {
    OdeOptions {
        rtol: 1e-12,
        atol: 1e-14,
        ..Default::default()
    }
}

// θ_left(x_m) − θ_right(x_m) for −y'' + (x²/4 + q) y = z y, y(0) = y(L) = 0
fn mismatch(q: &PotentialSpec, z: f64, xm: f64, cutoff: f64) -> Result<f64> {
    let k = z.max(1.0).sqrt();
    let rhs = |x: f64, y: &[f64; 1]| {
        let (s, c) = y[0].sin_cos();
        [k * c * c + (z - 0.25 * x * x - q.eval(x)) / k * s * s]
    };
    let left = integrate(rhs, 0.0, [0.0], xm, &ode_opts())?;
    let right = integrate(rhs, cutoff, [0.0], xm, &ode_opts())?;
    Ok(left[0] - right[0])
}

fn anharmonic_level(q: &PotentialSpec, n: usize, cutoff: f64) -> Result<Level> {
    let target = n as f64 * PI;
    let guess = 2.0 * n as f64 - 0.5;
    let xm = (2.0 * guess.sqrt()).clamp(1.0, 0.8 * cutoff);
    let f = |z: f64| mismatch(q, z, xm, cutoff).map(|v| v - target);
    let (mut lo, mut hi) = (guess - 1.0, guess + 1.0);
    let (mut flo, mut fhi) = (f(lo)?, f(hi)?);
    let mut expand = 0;
    while flo > 0.0 || fhi < 0.0 {
        if flo > 0.0 {
            hi = lo;
            fhi = flo;
            lo -= 2.0;
            flo = f(lo)?;
        } else {
            lo = hi;
            flo = fhi;
            hi += 2.0;
            fhi = f(hi)?;
        }
        expand += 1;
        if expand > 60 {
            return Err(Error::Bracketing(format!(
                "no bracket for anharmonic level {n}"
            )));
        }
    }
    let z = illinois(
        f,
        lo,
        hi,
        flo,
        fhi,
        1e-14 * hi.abs().max(1.0),
        1e-13 * target,
    )?;
    let residual = mismatch(q, z, xm, cutoff)?.sin().abs();
    Ok(Level {
        n: n as i64,
        z,
        residual,
    })
}

/// Dirichlet levels of −y'' + (x²/4 + q) y = z y on [0, L] by matched Prüfer
/// shooting. Fails when doubling L moves the top level by more than 1e−8.
pub fn anharmonic_levels_shooting(
    q: &PotentialSpec,
    n_max: usize,
    cutoff: Option<f64>,
) -> Result<EigenSpectrum> {
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    let cutoff = cutoff.unwrap_or_else(|| anharmonic_cutoff(n_max));
    if !(cutoff > 0.0 && cutoff.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "cutoff must be positive, got {cutoff}"
        )));
    }
    let levels: Result<Vec<Level>> = (1..=n_max)
        .into_par_iter()
        .map(|n| anharmonic_level(q, n, cutoff))
        .collect();
    let spec = EigenSpectrum { levels: levels? };
    spec.validate()?;
    let top = spec.levels[n_max - 1].z;
    let change = (anharmonic_level(q, n_max, 2.0 * cutoff)?.z - top).abs();
    if change > 1e-8 {
        return Err(Error::CutoffSensitivity { change });
    }
    Ok(spec)
}

/// Anharmonic levels; q ≡ 0 gives 2n − 1/2 exactly, anything else is computed by shooting.
pub fn anharmonic_levels(q: &PotentialSpec, n_max: usize) -> Result<EigenSpectrum> {
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    if q.tag() == Some(PotentialTag::Zero) {
        return Ok(law_spectrum(&LevelLaw::Harmonic { shift: 0.0 }, n_max));
    }
    anharmonic_levels_shooting(q, n_max, None)
}

/// δ from anharmonic levels: δ_n = π√(2n)(z_n − 2n + 1/2), fitted linearly in
/// n^{−1/2} over the given levels. The uncertainty is the distance to the plain mean.
pub fn anharmonic_defect(spectrum: &EigenSpectrum) -> Result<DefectEstimate> {
    if spectrum.len() < 5 {
        return Err(Error::InsufficientData {
            need: 5,
            got: spectrum.len(),
        });
    }
    let per_level: Vec<(i64, f64)> = spectrum
        .levels
        .iter()
        .map(|l| {
            let n = l.n as f64;
            (l.n, PI * (2.0 * n).sqrt() * (l.z - 2.0 * n + 0.5))
        })
        .collect();
    let x: Vec<f64> = per_level.iter().map(|p| (p.0 as f64).powf(-0.5)).collect();
    let y: Vec<f64> = per_level.iter().map(|p| p.1).collect();
    let w = vec![1.0; x.len()];
    let value = polyfit(&x, &y, &w, 1)?[0];
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    Ok(DefectEstimate {
        value,
        uncertainty: (value - mean).abs(),
        per_level,
    })
}
