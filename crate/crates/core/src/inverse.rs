//! Sliding inverse recovery: q from the derivative of a defect curve, the
//! mixed-derivative recovery on boxes, and the spectra → defect → q pipelines.

use crate::dirac::{eigenvalues_bc, estimate_defect_dirac, DiracParams};
use crate::error::{Error, Result};
use crate::io;
use crate::numerics::polyfit;
use crate::potential::{Interpolation, PotentialSpec};
use crate::schrodinger::{eigenvalues_dirichlet, estimate_defect, RadialProblem};
use crate::types::EigenSpectrum;
use rayon::prelude::*;
use sha2::{Digest, Sha256};
use std::path::PathBuf;

/// Which integral the defect curve represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// δ(a) = ∫₀^a q, so q = δ'.
    FromOrigin,
    /// δ(r) = ∫_r^∞ q, so q = −δ'.
    Tail,
}

impl Side {
    fn sign(self) -> f64 {
        match self {
            Side::FromOrigin => 1.0,
            Side::Tail => -1.0,
        }
    }
}

/// Defect values on strictly increasing endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct DefectCurve {
    endpoints: Vec<f64>,
    values: Vec<f64>,
    side: Side,
}

fn check_axis(x: &[f64]) -> Result<()> {
    let scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    for (i, w) in x.windows(2).enumerate() {
        if (w[1] - w[0]).abs() <= 1e-14 * scale {
            return Err(Error::SpacingDegeneracy(i + 1));
        }
        if w[1] < w[0] {
            return Err(Error::InvalidParameter(format!(
                "endpoints decrease at index {}",
                i + 1
            )));
        }
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("non-finite endpoint".into()));
    }
    Ok(())
}

impl DefectCurve {
    pub fn new(endpoints: Vec<f64>, values: Vec<f64>, side: Side) -> Result<Self> {
        if endpoints.len() != values.len() {
            return Err(Error::InvalidParameter(
                "endpoints and values differ in length".into(),
            ));
        }
        if endpoints.iter().any(|a| !(*a > 0.0)) {
            return Err(Error::InvalidParameter("endpoints must be positive".into()));
        }
        check_axis(&endpoints)?;
        Ok(Self {
            endpoints,
            values,
            side,
        })
    }

    pub fn endpoints(&self) -> &[f64] {
        &self.endpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn side(&self) -> Side {
        self.side
    }
}

/// Optional smoothing applied to the curve before differencing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Smoothing {
    #[default]
    None,
    SavitzkyGolay {
        window: usize,
        order: usize,
    },
}

impl Smoothing {
    pub const DEFAULT_SG: Smoothing = Smoothing::SavitzkyGolay {
        window: 7,
        order: 3,
    };
}

/// Derivative of the three-point interpolant through (x[j], f[j]) at x[at].
fn lagrange3_derivative(x: [f64; 3], f: [f64; 3], at: usize) -> f64 {
    let t = x[at];
    let mut d = 0.0;
    for j in 0..3 {
        let others: Vec<usize> = (0..3).filter(|&k| k != j).collect();
        let (k, l) = (others[0], others[1]);
        let den = (x[j] - x[k]) * (x[j] - x[l]);
        d += f[j] * ((t - x[k]) + (t - x[l])) / den;
    }
    d
}

/// Second-order differences: central inside, one-sided three-point at the ends.
pub fn differentiate(x: &[f64], f: &[f64]) -> Result<Vec<f64>> {
    let n = x.len();
    if n < 3 || f.len() != n {
        return Err(Error::InsufficientData {
            need: 3,
            got: n.min(f.len()),
        });
    }
    check_axis(x)?;
    Ok((0..n)
        .map(|i| {
            let (s, at) = match i {
                0 => (0, 0),
                _ if i == n - 1 => (n - 3, 2),
                _ => (i - 1, 1),
            };
            lagrange3_derivative([x[s], x[s + 1], x[s + 2]], [f[s], f[s + 1], f[s + 2]], at)
        })
        .collect())
}

/// Local least-squares polynomial smoothing over a centred window (shifted
/// inward at the ends).
pub fn savitzky_golay(x: &[f64], f: &[f64], window: usize, order: usize) -> Result<Vec<f64>> {
    let n = x.len();
    if window.is_multiple_of(2) || window <= order || window > n {
        return Err(Error::InvalidParameter(format!(
            "Savitzky–Golay window {window} must be odd, exceed the order {order} and fit {n} samples"
        )));
    }
    let half = window / 2;
    let w = vec![1.0; window];
    (0..n)
        .map(|i| {
            let s = i.saturating_sub(half).min(n - window);
            let xs: Vec<f64> = x[s..s + window].iter().map(|v| v - x[i]).collect();
            Ok(polyfit(&xs, &f[s..s + window], &w, order)?[0])
        })
        .collect()
}

/// q at the curve endpoints: ±δ' with the sign set by the side.
pub fn recover_values_1d(curve: &DefectCurve, smoothing: Smoothing) -> Result<Vec<f64>> {
    let vals = match smoothing {
        Smoothing::None => curve.values.clone(),
        Smoothing::SavitzkyGolay { window, order } => {
            savitzky_golay(&curve.endpoints, &curve.values, window, order)?
        }
    };
    let d = differentiate(&curve.endpoints, &vals)?;
    let s = curve.side.sign();
    Ok(d.into_iter().map(|v| s * v).collect())
}

/// Recovered q as a cubic-interpolated potential on the curve endpoints.
pub fn recover_q_1d(curve: &DefectCurve, smoothing: Smoothing) -> Result<PotentialSpec> {
    let q = recover_values_1d(curve, smoothing)?;
    PotentialSpec::sampled(curve.endpoints.clone(), q, Interpolation::Cubic)
}

/// δ(G(a₁, a₂)) = ∫_G q on a rectangular lattice; `values[i][j]` belongs to (axis1[i], axis2[j]).
#[derive(Debug, Clone, PartialEq)]
pub struct DefectField2D {
    pub axis1: Vec<f64>,
    pub axis2: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl DefectField2D {
    pub fn new(axis1: Vec<f64>, axis2: Vec<f64>, values: Vec<Vec<f64>>) -> Result<Self> {
        if axis1.len() < 3 || axis2.len() < 3 {
            return Err(Error::InsufficientData {
                need: 3,
                got: axis1.len().min(axis2.len()),
            });
        }
        check_axis(&axis1)?;
        check_axis(&axis2)?;
        if values.len() != axis1.len() || values.iter().any(|row| row.len() != axis2.len()) {
            return Err(Error::InvalidParameter(
                "field shape does not match the axes".into(),
            ));
        }
        Ok(Self {
            axis1,
            axis2,
            values,
        })
    }

    /// Samples f(a₁, a₂) on the lattice.
    pub fn from_fn(axis1: Vec<f64>, axis2: Vec<f64>, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let values = axis1
            .iter()
            .map(|&a| axis2.iter().map(|&b| f(a, b)).collect())
            .collect();
        Self::new(axis1, axis2, values)
    }
}

/// Gridded potential on a rectangular lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct GriddedPotential2D {
    pub axis1: Vec<f64>,
    pub axis2: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

/// ∂^k/∂a₁…∂a_k of a row-major field on the lattice `axes`, one axis at a time.
pub fn mixed_derivative(axes: &[Vec<f64>], values: &[f64]) -> Result<Vec<f64>> {
    let Some((first, rest)) = axes.split_first() else {
        return Ok(values.to_vec());
    };
    let stride: usize = rest.iter().map(|a| a.len()).product();
    if values.len() != first.len() * stride {
        return Err(Error::InvalidParameter(
            "field size does not match the axes".into(),
        ));
    }
    // inner axes first on every slab, then the outer axis across slabs
    let mut inner = Vec::with_capacity(values.len());
    for slab in values.chunks(stride) {
        inner.extend(mixed_derivative(rest, slab)?);
    }
    let mut out = vec![0.0; values.len()];
    for j in 0..stride {
        let column: Vec<f64> = (0..first.len()).map(|i| inner[i * stride + j]).collect();
        for (i, v) in differentiate(first, &column)?.into_iter().enumerate() {
            out[i * stride + j] = v;
        }
    }
    Ok(out)
}

/// q(a₁, a₂) = ∂²δ(G)/∂a₁∂a₂.
pub fn recover_q_multidim(field: &DefectField2D) -> Result<GriddedPotential2D> {
    let flat: Vec<f64> = field.values.iter().flatten().copied().collect();
    let d = mixed_derivative(&[field.axis1.clone(), field.axis2.clone()], &flat)?;
    let values = d.chunks(field.axis2.len()).map(|c| c.to_vec()).collect();
    Ok(GriddedPotential2D {
        axis1: field.axis1.clone(),
        axis2: field.axis2.clone(),
        values,
    })
}

/// Pipeline switches.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PipelineOptions {
    pub smoothing: Smoothing,
    /// Spectra are cached here as CSV, keyed by a content hash.
    pub cache_dir: Option<PathBuf>,
}

/// Output of a sliding pipeline. Endpoints whose solve failed are masked out
/// and their error message kept.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineReport {
    pub endpoints: Vec<f64>,
    pub valid: Vec<bool>,
    pub errors: Vec<Option<String>>,
    pub defect: Vec<f64>,
    pub defect_uncertainty: Vec<f64>,
    /// Recovered q on the valid endpoints (NaN elsewhere).
    pub q_recovered: Vec<f64>,
    pub q_true: Vec<f64>,
    pub l2_relative: f64,
    pub max_abs: f64,
}

fn cache_key(parts: &[String]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p.as_bytes());
        h.update([0u8]);
    }
    hex::encode(h.finalize())
}

fn cached_spectrum(
    cache: Option<&PathBuf>,
    key: &[String],
    compute: impl FnOnce() -> Result<EigenSpectrum>,
) -> Result<EigenSpectrum> {
    let Some(dir) = cache else {
        return compute();
    };
    let path = dir.join(format!("{}.csv", cache_key(key)));
    if let Ok((_, rows)) = io::read_table_file(&path) {
        if let Ok(spec) = io::spectrum_from_rows(&rows) {
            return Ok(spec);
        }
    }
    let spec = compute()?;
    std::fs::create_dir_all(dir)?;
    let tmp = dir.join(format!("{}.{}.tmp", cache_key(key), std::process::id()));
    io::write_table_file(&tmp, &io::SPECTRUM_HEADER, &io::spectrum_rows(&spec))?;
    std::fs::rename(&tmp, &path)?;
    Ok(spec)
}

fn check_grid(a_grid: &[f64]) -> Result<()> {
    if a_grid.len() < 3 {
        return Err(Error::InsufficientData {
            need: 3,
            got: a_grid.len(),
        });
    }
    if a_grid.iter().any(|a| !(*a > 0.0)) {
        return Err(Error::InvalidParameter("endpoints must be positive".into()));
    }
    check_axis(a_grid)
}

fn assemble(
    q_true: &PotentialSpec,
    a_grid: &[f64],
    results: Vec<Result<(f64, f64)>>,
    smoothing: Smoothing,
) -> Result<PipelineReport> {
    let valid: Vec<bool> = results.iter().map(|r| r.is_ok()).collect();
    let errors = results
        .iter()
        .map(|r| r.as_ref().err().map(|e| e.to_string()))
        .collect();
    let defect: Vec<f64> = results
        .iter()
        .map(|r| r.as_ref().map_or(f64::NAN, |v| v.0))
        .collect();
    let defect_uncertainty = results
        .iter()
        .map(|r| r.as_ref().map_or(f64::NAN, |v| v.1))
        .collect();
    let (xs, ds): (Vec<f64>, Vec<f64>) = a_grid
        .iter()
        .zip(&defect)
        .zip(&valid)
        .filter(|(_, ok)| **ok)
        .map(|((a, d), _)| (*a, *d))
        .unzip();
    let curve = DefectCurve::new(xs, ds, Side::FromOrigin)?;
    let q_valid = recover_values_1d(&curve, smoothing)?;
    let mut q_recovered = vec![f64::NAN; a_grid.len()];
    let mut it = q_valid.into_iter();
    for (slot, ok) in q_recovered.iter_mut().zip(&valid) {
        if *ok {
            *slot = it.next().unwrap_or(f64::NAN);
        }
    }
    let q_true: Vec<f64> = a_grid.iter().map(|&a| q_true.eval(a)).collect();
    let (mut num, mut den, mut max_abs) = (0.0, 0.0, 0.0f64);
    for ((r, t), ok) in q_recovered.iter().zip(&q_true).zip(&valid) {
        if *ok {
            num += (r - t) * (r - t);
            den += t * t;
            max_abs = max_abs.max((r - t).abs());
        }
    }
    let l2_relative = if den > 0.0 {
        (num / den).sqrt()
    } else {
        num.sqrt()
    };
    Ok(PipelineReport {
        endpoints: a_grid.to_vec(),
        valid,
        errors,
        defect,
        defect_uncertainty,
        q_recovered,
        q_true,
        l2_relative,
        max_abs,
    })
}

/// Dirichlet spectra on [0, a] for each a, defect estimates, then q = δ'.
pub fn sliding_pipeline_schrodinger(
    q_true: &PotentialSpec,
    ell: u32,
    a_grid: &[f64],
    n_max: usize,
    options: &PipelineOptions,
) -> Result<PipelineReport> {
    check_grid(a_grid)?;
    if n_max < 5 {
        return Err(Error::InsufficientData {
            need: 5,
            got: n_max,
        });
    }
    let results: Vec<Result<(f64, f64)>> = a_grid
        .par_iter()
        .map(|&a| {
            let key = [
                "schrodinger".to_string(),
                q_true.fingerprint(),
                ell.to_string(),
                io::fmt_f64(a),
                n_max.to_string(),
            ];
            let spec = cached_spectrum(options.cache_dir.as_ref(), &key, || {
                eigenvalues_dirichlet(&RadialProblem::new(q_true.clone(), ell, a)?, n_max)
            })?;
            let d = estimate_defect(&spec, a, ell)?;
            Ok((d.value, d.uncertainty))
        })
        .collect();
    assemble(q_true, a_grid, results, options.smoothing)
}

/// Dirac ψ-boundary spectra n = 1..n_levels on [0, a] for each a, defect
/// estimates, then q = δ'.
pub fn sliding_pipeline_dirac(
    q_true: &PotentialSpec,
    ell: i32,
    m: f64,
    psi: f64,
    a_grid: &[f64],
    n_levels: i64,
    options: &PipelineOptions,
) -> Result<PipelineReport> {
    check_grid(a_grid)?;
    if n_levels < 5 {
        return Err(Error::InsufficientData {
            need: 5,
            got: n_levels.max(0) as usize,
        });
    }
    let params = DiracParams::new(ell, m, q_true.clone())?;
    let results: Vec<Result<(f64, f64)>> = a_grid
        .par_iter()
        .map(|&a| {
            let key = [
                "dirac".to_string(),
                q_true.fingerprint(),
                ell.to_string(),
                io::fmt_f64(m),
                io::fmt_f64(psi),
                io::fmt_f64(a),
                n_levels.to_string(),
            ];
            let spec = cached_spectrum(options.cache_dir.as_ref(), &key, || {
                eigenvalues_bc(&params, a, psi, 1..=n_levels)
            })?;
            let d = estimate_defect_dirac(&spec, a, ell, psi)?;
            Ok((d.value, d.uncertainty))
        })
        .collect();
    assemble(q_true, a_grid, results, options.smoothing)
}

/// V(r) = [[−ℓ/r, m − q], [m + q, ℓ/r]].
pub fn assemble_v(ell: i32, m: f64, r: f64, q: f64) -> [[f64; 2]; 2] {
    let l = ell as f64 / r;
    [[-l, m - q], [m + q, l]]
}
