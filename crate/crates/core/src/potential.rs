//! Real potentials q(r): analytic tags or sampled grids with interpolation.

use crate::error::{Error, Result};
use sha2::{Digest, Sha256};
use std::f64::consts::PI;
use std::fmt;

/// Interpolation rule for sampled potentials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interpolation {
    Linear,
    /// Natural cubic spline.
    Cubic,
}

/// Built-in analytic potentials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialTag {
    Zero,
    Const(f64),
    /// q(r) = sin r
    Sin,
    /// q(r) = A exp(−(r−μ)²/(2σ²))
    Gauss {
        mu: f64,
        sigma: f64,
        amp: f64,
    },
    /// q(r) = A cos²(π(r−c)/(2w)) on |r−c| < w, zero elsewhere.
    Bump {
        center: f64,
        width: f64,
        amp: f64,
    },
}

impl PotentialTag {
    /// Parses `zero`, `const:c`, `sin`, `gauss:mu,sigma,A` or `bump:c,w,A`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, args) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let nums = |a: Option<&str>, n: usize| -> Result<Vec<f64>> {
            let a =
                a.ok_or_else(|| Error::Parse(format!("potential `{s}` needs {n} arguments")))?;
            let v: std::result::Result<Vec<f64>, _> =
                a.split(',').map(|t| t.trim().parse::<f64>()).collect();
            let v = v.map_err(|e| Error::Parse(format!("potential `{s}`: {e}")))?;
            if v.len() != n || v.iter().any(|x| !x.is_finite()) {
                return Err(Error::Parse(format!(
                    "potential `{s}` needs {n} finite arguments"
                )));
            }
            Ok(v)
        };
        match name {
            "zero" => Ok(Self::Zero),
            "sin" => Ok(Self::Sin),
            "const" => Ok(Self::Const(nums(args, 1)?[0])),
            "gauss" => {
                let v = nums(args, 3)?;
                if v[1] <= 0.0 {
                    return Err(Error::Parse("gauss width must be positive".into()));
                }
                Ok(Self::Gauss {
                    mu: v[0],
                    sigma: v[1],
                    amp: v[2],
                })
            }
            "bump" => {
                let v = nums(args, 3)?;
                if v[1] <= 0.0 {
                    return Err(Error::Parse("bump width must be positive".into()));
                }
                Ok(Self::Bump {
                    center: v[0],
                    width: v[1],
                    amp: v[2],
                })
            }
            _ => Err(Error::Parse(format!("unknown potential tag `{name}`"))),
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        match *self {
            Self::Zero => 0.0,
            Self::Const(c) => c,
            Self::Sin => r.sin(),
            Self::Gauss { mu, sigma, amp } => {
                amp * (-(r - mu).powi(2) / (2.0 * sigma * sigma)).exp()
            }
            Self::Bump { center, width, amp } => {
                if (r - center).abs() < width {
                    amp * (PI * (r - center) / (2.0 * width)).cos().powi(2)
                } else {
                    0.0
                }
            }
        }
    }

    // antiderivative, where one exists on the whole line
    fn primitive(&self, r: f64) -> f64 {
        match *self {
            Self::Zero => 0.0,
            Self::Const(c) => c * r,
            Self::Sin => -r.cos(),
            Self::Gauss { mu, sigma, amp } => {
                amp * sigma
                    * (PI / 2.0).sqrt()
                    * libm::erf((r - mu) / (sigma * std::f64::consts::SQRT_2))
            }
            Self::Bump { center, width, amp } => {
                let t = (r - center).clamp(-width, width);
                amp * (t / 2.0 + width / (2.0 * PI) * (PI * t / width).sin())
            }
        }
    }

    fn tail(&self, r: f64) -> Option<f64> {
        match *self {
            Self::Zero => Some(0.0),
            Self::Const(0.0) => Some(0.0),
            Self::Const(_) | Self::Sin => None,
            Self::Gauss { mu, sigma, amp } => Some(
                amp * sigma
                    * (PI / 2.0).sqrt()
                    * libm::erfc((r - mu) / (sigma * std::f64::consts::SQRT_2)),
            ),
            Self::Bump { center, width, amp } => {
                // ∫_r^{c+w} = A[(c+w−r)/2 − (w/2π) sin(π(r−c)/w)] inside the support
                let t = (r - center).clamp(-width, width);
                Some(amp * ((width - t) / 2.0 - width / (2.0 * PI) * (PI * t / width).sin()))
            }
        }
    }

    /// Point beyond which |q| is below 1e−17·max|q|.
    fn support_end(&self) -> Option<f64> {
        match *self {
            Self::Zero => Some(0.0),
            Self::Const(0.0) => Some(0.0),
            Self::Const(_) | Self::Sin => None,
            Self::Gauss { mu, sigma, .. } => Some(mu + sigma * (2.0 * 17.0 * 10f64.ln()).sqrt()),
            Self::Bump { center, width, .. } => Some(center + width),
        }
    }
}

impl fmt::Display for PotentialTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Zero => write!(f, "zero"),
            Self::Const(c) => write!(f, "const:{c}"),
            Self::Sin => write!(f, "sin"),
            Self::Gauss { mu, sigma, amp } => write!(f, "gauss:{mu},{sigma},{amp}"),
            Self::Bump { center, width, amp } => write!(f, "bump:{center},{width},{amp}"),
        }
    }
}

/// A real potential on the half-line: an analytic tag, or samples on a
/// strictly increasing positive grid with an interpolation rule.
///
/// Sampled potentials are extrapolated with the end segments when evaluated
/// off the grid; tail integrals treat them as zero beyond the last point.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSpec {
    grid: Vec<f64>,
    values: Vec<f64>,
    interpolation: Interpolation,
    tag: Option<PotentialTag>,
    second: Vec<f64>,
    scale: f64,
}

impl PotentialSpec {
    /// Analytic potential; evaluation bypasses interpolation.
    pub fn analytic(tag: PotentialTag) -> Self {
        Self {
            grid: Vec::new(),
            values: Vec::new(),
            interpolation: Interpolation::Linear,
            tag: Some(tag),
            second: Vec::new(),
            scale: 1.0,
        }
    }

    pub fn zero() -> Self {
        Self::analytic(PotentialTag::Zero)
    }

    pub fn constant(c: f64) -> Self {
        Self::analytic(PotentialTag::Const(c))
    }

    /// Samples on `grid` with the given interpolation.
    pub fn sampled(grid: Vec<f64>, values: Vec<f64>, interpolation: Interpolation) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::InvalidParameter(
                "grid and values differ in length".into(),
            ));
        }
        if grid.len() < 2 {
            return Err(Error::InsufficientData {
                need: 2,
                got: grid.len(),
            });
        }
        if grid[0] < 0.0 {
            return Err(Error::InvalidParameter("grid must be nonnegative".into()));
        }
        if let Some(i) = grid.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::SpacingDegeneracy(i + 1));
        }
        if values.iter().chain(grid.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite sample".into()));
        }
        let second = match interpolation {
            Interpolation::Linear => vec![0.0; grid.len()],
            Interpolation::Cubic => natural_spline(&grid, &values),
        };
        Ok(Self {
            grid,
            values,
            interpolation,
            tag: None,
            second,
            scale: 1.0,
        })
    }

    /// Samples `tag` on `grid`, keeping the tag for exact evaluation.
    pub fn tagged_on_grid(tag: PotentialTag, grid: Vec<f64>) -> Self {
        let values = grid.iter().map(|&r| tag.eval(r)).collect();
        Self {
            grid,
            values,
            interpolation: Interpolation::Linear,
            tag: Some(tag),
            second: Vec::new(),
            scale: 1.0,
        }
    }

    /// The potential s·q.
    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        if out.tag.is_some() {
            out.scale *= s;
        }
        out.values
            .iter_mut()
            .chain(out.second.iter_mut())
            .for_each(|v| *v *= s);
        out
    }

    pub fn tag(&self) -> Option<PotentialTag> {
        self.tag
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }

    /// Grid span, or `None` for analytic potentials.
    pub fn span(&self) -> Option<(f64, f64)> {
        if self.tag.is_some() || self.grid.is_empty() {
            None
        } else {
            Some((self.grid[0], self.grid[self.grid.len() - 1]))
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        if let Some(t) = self.tag {
            return self.scale * t.eval(r);
        }
        let g = &self.grid;
        let n = g.len();
        let i = match g.partition_point(|&x| x <= r) {
            0 => 0,
            k if k >= n => n - 2,
            k => k - 1,
        };
        let h = g[i + 1] - g[i];
        let a = (g[i + 1] - r) / h;
        let b = (r - g[i]) / h;
        let lin = a * self.values[i] + b * self.values[i + 1];
        match self.interpolation {
            Interpolation::Linear => lin,
            Interpolation::Cubic => {
                lin + ((a * a * a - a) * self.second[i] + (b * b * b - b) * self.second[i + 1])
                    * h
                    * h
                    / 6.0
            }
        }
    }

    /// ∫_a^b q.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        if let Some(t) = self.tag {
            return self.scale * (t.primitive(b) - t.primitive(a));
        }
        if b < a {
            return -self.integral(b, a);
        }
        // exact on each interpolation segment, including the extrapolated ends
        let mut knots = vec![a];
        knots.extend(self.grid.iter().copied().filter(|&x| x > a && x < b));
        knots.push(b);
        let mut s = 0.0;
        for w in knots.windows(2) {
            // Simpson is exact for the cubic pieces
            let m = 0.5 * (w[0] + w[1]);
            s += (w[1] - w[0]) / 6.0 * (self.eval(w[0]) + 4.0 * self.eval(m) + self.eval(w[1]));
        }
        s
    }

    /// ∫_r^∞ q, or an error when the tail diverges.
    pub fn tail_integral(&self, r: f64) -> Result<f64> {
        if let Some(t) = self.tag {
            return t
                .tail(r)
                .map(|v| self.scale * v)
                .ok_or_else(|| Error::Domain(format!("tail integral of `{t}` diverges")));
        }
        let end = self.grid[self.grid.len() - 1];
        if r >= end {
            return Ok(0.0);
        }
        Ok(self.integral(r, end))
    }

    /// Radius beyond which q is negligible, if any.
    pub fn support_end(&self) -> Option<f64> {
        match self.tag {
            Some(t) => t.support_end(),
            None => Some(self.grid[self.grid.len() - 1]),
        }
    }

    /// Trapezoid estimate of ∫|q| over the grid, or over [0, a] for analytic tags.
    pub fn abs_integral_estimate(&self, a: f64) -> f64 {
        let (g, v): (Vec<f64>, Vec<f64>) = if self.tag.is_some() {
            let n = 2000;
            (0..=n)
                .map(|i| a * i as f64 / n as f64)
                .map(|r| (r, self.eval(r)))
                .unzip()
        } else {
            (self.grid.clone(), self.values.clone())
        };
        g.windows(2)
            .zip(v.windows(2))
            .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0].abs() + y[1].abs()))
            .sum()
    }

    /// Content hash of the potential definition.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        match self.tag {
            Some(t) => {
                h.update(t.to_string().as_bytes());
                if self.scale != 1.0 {
                    h.update(self.scale.to_le_bytes());
                }
            }
            None => {
                h.update(match self.interpolation {
                    Interpolation::Linear => b"linear".as_slice(),
                    Interpolation::Cubic => b"cubic".as_slice(),
                });
                for (r, q) in self.grid.iter().zip(&self.values) {
                    h.update(r.to_le_bytes());
                    h.update(q.to_le_bytes());
                }
            }
        }
        hex::encode(h.finalize())
    }

    /// Short description for reports.
    pub fn describe(&self) -> String {
        match self.tag {
            Some(t) if self.scale != 1.0 => format!("{}*{t}", self.scale),
            Some(t) => t.to_string(),
            None => format!("grid[{}]", self.grid.len()),
        }
    }
}

fn natural_spline(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut m = vec![0.0; n];
    if n < 3 {
        return m;
    }
    // Thomas algorithm on the interior equations
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        let h0 = x[i] - x[i - 1];
        let h1 = x[i + 1] - x[i];
        let a = h0 / 6.0;
        let b = (h0 + h1) / 3.0;
        let cc = h1 / 6.0;
        let rhs = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
        let den = b - a * c[i - 1];
        c[i] = cc / den;
        d[i] = (rhs - a * d[i - 1]) / den;
    }
    for i in (1..n - 1).rev() {
        m[i] = d[i] - c[i] * m[i + 1];
    }
    m
}
