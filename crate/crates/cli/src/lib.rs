//! The `sliding` command line: forward solves, defect estimation, recovery
//! pipelines, statistical sums and special functions, with CSV output.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sliding_core::coulomb::{
    coulomb_dirac_basis, coulomb_dirac_defect, coulomb_schrodinger_decaying,
    coulomb_schrodinger_pair,
};
use sliding_core::dirac::{
    eigenvalues_bc_with, estimate_defect_dirac, estimate_tail_defect, BcReading,
};
use sliding_core::inverse::{
    recover_values_1d, sliding_pipeline_dirac, sliding_pipeline_schrodinger, DefectCurve,
    PipelineOptions, PipelineReport, Side, Smoothing,
};
use sliding_core::schrodinger::{eigenvalues_dirichlet, estimate_defect, RadialProblem};
use sliding_core::specfun::{
    gamma, kummer_phi, log_gamma, tricomi_psi, tricomi_psi_closed, whittaker_m, whittaker_w,
    HypergeoParams,
};
use sliding_core::statsum::{self, BoxDomain, LevelLaw, StatSumReport};
use sliding_core::{
    io, BranchedEnergy, Complex64, CoulombParams, DiracParams, Interpolation, PotentialSpec,
    PotentialTag,
};
use std::f64::consts::{FRAC_PI_2, PI};
use std::io::Write;
use std::path::{Path, PathBuf};

/// Exit status for configuration and usage errors.
pub const EXIT_CONFIG: i32 = 2;
/// Exit status for solver failures.
pub const EXIT_SOLVER: i32 = 3;
/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "SLIDING_SPECTRAL_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Solver(#[from] sliding_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Solver(_) => EXIT_SOLVER,
        }
    }

    /// `{"error": kind, "message": text, "exit_code": n}`
    pub fn to_json(&self) -> String {
        let kind = match self {
            CliError::Config(_) => "config",
            CliError::Solver(_) => "solver",
        };
        serde_json::json!({ "error": kind, "message": self.to_string(), "exit_code": self.exit_code() }).to_string()
    }
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "sliding",
    version,
    about = "Spectral solvers, quantum defects and sliding inverse recovery"
)]
pub struct Cli {
    /// TOML file whose [command] table overrides the flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Print errors as one JSON object on stderr.
    #[arg(long, global = true)]
    pub json_errors: bool,
    /// Worker threads (default: SLIDING_SPECTRAL_THREADS, else all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write the CSV here instead of stdout.
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one special function at one point.
    Specfun(SpecfunArgs),
    /// Dirichlet eigenvalues of the radial Schrödinger problem or the anharmonic oscillator.
    Eigen(EigenArgs),
    /// Quantum defect ∫₀^a q estimated from a Schrödinger spectrum.
    Defect(DefectArgs),
    /// Recover q from defect curves or from synthesized spectra.
    Invert(InvertArgs),
    /// Statistical sums against their large-T asymptotes, or the theta identity.
    Statsum(StatsumArgs),
    /// Dirac boundary spectra, defect and tail defect.
    Dirac(DiracArgs),
    /// Coulomb-type Schrödinger and Dirac solutions and the Coulomb tail defect.
    Coulomb(CoulombArgs),
}

impl Command {
    fn section(&self) -> &'static str {
        match self {
            Command::Specfun(_) => "specfun",
            Command::Eigen(_) => "eigen",
            Command::Defect(_) => "defect",
            Command::Invert(_) => "invert",
            Command::Statsum(_) => "statsum",
            Command::Dirac(_) => "dirac",
            Command::Coulomb(_) => "coulomb",
        }
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialArgs {
    /// Potential tag: zero, const:c, sin, gauss:mu,sigma,A or bump:c,w,A.
    #[arg(long, default_value = "zero")]
    pub q: String,
    /// CSV file with columns r,q (overrides --q).
    #[arg(long)]
    pub q_file: Option<PathBuf>,
    /// Interpolation for --q-file.
    #[arg(long, value_enum, default_value_t = InterpArg::Cubic)]
    pub interp: InterpArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InterpArg {
    Linear,
    Cubic,
}

impl PotentialArgs {
    fn build(&self) -> CliResult<PotentialSpec> {
        match &self.q_file {
            Some(p) => {
                let interp = match self.interp {
                    InterpArg::Linear => Interpolation::Linear,
                    InterpArg::Cubic => Interpolation::Cubic,
                };
                io::read_potential(p, interp).map_err(|e| config_err(e.to_string()))
            }
            None => PotentialTag::parse(&self.q)
                .map(PotentialSpec::analytic)
                .map_err(|e| config_err(e.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpecialFunction {
    Gamma,
    LogGamma,
    Kummer,
    Tricomi,
    WhittakerM,
    WhittakerW,
    PsiClosed,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecfunArgs {
    #[arg(long = "fn", value_enum)]
    pub function: SpecialFunction,
    /// Argument as `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    /// First parameter α (Kummer, Tricomi).
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub alpha: String,
    /// Second parameter c (Kummer, Tricomi).
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub c: String,
    /// κ for the Whittaker functions.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub kappa: String,
    /// ℓ for the Whittaker functions and the closed form.
    #[arg(long, default_value_t = 0)]
    pub l: u32,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EigenArgs {
    #[arg(long, default_value_t = 0)]
    pub l: u32,
    /// Interval length a (ignored with --anharmonic).
    #[arg(long, default_value_t = PI)]
    pub a: f64,
    /// Number of levels.
    #[arg(long, default_value_t = 20)]
    pub n: usize,
    /// Levels of −y'' + (x²/4 + q)y = zy on the half-line instead.
    #[arg(long)]
    pub anharmonic: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub potential: PotentialArgs,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DefectArgs {
    #[arg(long, default_value_t = 0)]
    pub l: u32,
    #[arg(long, default_value_t = PI)]
    pub a: f64,
    #[arg(long, default_value_t = 50)]
    pub n: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub potential: PotentialArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pipeline {
    Schrodinger,
    Dirac,
    /// Differentiate a defect curve read from --curve.
    Curve,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SmoothingArg {
    None,
    SavitzkyGolay,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SideArg {
    Origin,
    Tail,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvertArgs {
    #[arg(long, value_enum, default_value_t = Pipeline::Schrodinger)]
    pub pipeline: Pipeline,
    /// Endpoint grid lo:hi:step.
    #[arg(long, default_value = "1:3.1:0.05")]
    pub a_grid: String,
    /// Levels per endpoint.
    #[arg(long, default_value_t = 60)]
    pub n: usize,
    /// ℓ (default 0 for Schrödinger, 1 for Dirac).
    #[arg(long)]
    pub l: Option<i32>,
    #[arg(long, default_value_t = 1.0)]
    pub m: f64,
    #[arg(long, default_value_t = FRAC_PI_2, allow_hyphen_values = true)]
    pub psi: f64,
    #[arg(long, value_enum, default_value_t = SmoothingArg::None)]
    pub smoothing: SmoothingArg,
    #[arg(long, default_value_t = 7)]
    pub sg_window: usize,
    #[arg(long, default_value_t = 3)]
    pub sg_order: usize,
    /// Directory for cached spectra.
    #[arg(long)]
    pub cache: Option<PathBuf>,
    /// Defect curve CSV (columns a,delta) for --pipeline curve.
    #[arg(long)]
    pub curve: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = SideArg::Origin)]
    pub side: SideArg,
    #[command(flatten)]
    #[serde(flatten)]
    pub potential: PotentialArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Law {
    /// z_n = n² (a = π, no shift).
    Nsq,
    /// z_n = (πn/a)² + shift per dimension on the box [0, a]^k.
    Dirichlet,
    /// z_n = 2n − 1/2 + shift per dimension.
    Harmonic,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatsumArgs {
    #[arg(long, value_enum, default_value_t = Law::Nsq)]
    pub law: Law,
    /// Print both sides of the theta identity at --z instead.
    #[arg(long)]
    pub check_theta: bool,
    #[arg(long, default_value_t = 1.0)]
    pub z: f64,
    /// Temperatures, comma separated.
    #[arg(long, default_value = "100,1000,10000")]
    pub t: String,
    #[arg(long, default_value_t = PI)]
    pub a: f64,
    /// Constant potential c added in every dimension.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub shift: f64,
    /// Dimension k.
    #[arg(long, default_value_t = 1)]
    pub k: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiracMode {
    Spectrum,
    Defect,
    Tail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReadingArg {
    F1,
    F2,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiracArgs {
    #[arg(long, value_enum, default_value_t = DiracMode::Spectrum)]
    pub mode: DiracMode,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub l: i32,
    #[arg(long, default_value_t = 1.0)]
    pub m: f64,
    #[arg(long, default_value_t = 2.0)]
    pub a: f64,
    #[arg(long, default_value_t = FRAC_PI_2, allow_hyphen_values = true)]
    pub psi: f64,
    /// Level indices lo:hi (0 is skipped).
    #[arg(long, default_value = "1:20", allow_hyphen_values = true)]
    pub n_range: String,
    #[arg(long, value_enum, default_value_t = ReadingArg::F1)]
    pub reading: ReadingArg,
    /// Tail radius for --mode tail.
    #[arg(long, default_value_t = 0.5)]
    pub r: f64,
    /// Energies for --mode tail, comma separated.
    #[arg(long, default_value = "10,50,250")]
    pub z_list: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub potential: PotentialArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoulombMode {
    /// u₁, u₂ of the Schrödinger problem with q ≡ 0.
    Pair,
    /// Schrödinger solution decaying like u₂, with q.
    Decaying,
    /// Regular column and determinant of the Dirac basis.
    Basis,
    /// Tail defect ∫_r^∞ q of the Dirac problem on the r grid.
    Tail,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoulombArgs {
    #[arg(long, value_enum, default_value_t = CoulombMode::Pair)]
    pub mode: CoulombMode,
    #[arg(long, allow_hyphen_values = true)]
    pub a_coul: f64,
    #[arg(long, default_value_t = 1)]
    pub l: i32,
    /// Mass (Dirac modes).
    #[arg(long, default_value_t = 1.0)]
    pub m: f64,
    #[arg(long, default_value_t = 4.0, allow_hyphen_values = true)]
    pub z: f64,
    /// Radii lo:hi:step.
    #[arg(long, default_value = "0.1:2:0.1")]
    pub r_grid: String,
    #[arg(long, default_value = "10,50,250")]
    pub z_list: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub potential: PotentialArgs,
}

/// A finished command: CSV table and a one-line summary.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub summary: String,
}

impl Output {
    fn new(header: &[&str], rows: Vec<Vec<f64>>, summary: String) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows,
            summary,
        }
    }

    pub fn csv(&self) -> CliResult<Vec<u8>> {
        let mut buf = Vec::new();
        let header: Vec<&str> = self.header.iter().map(|s| s.as_str()).collect();
        io::write_table(&mut buf, &header, &self.rows)?;
        Ok(buf)
    }
}

/// `lo:hi:step` → lo, lo+step, …, hi.
pub fn parse_grid(s: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let nums: Result<Vec<f64>, _> = parts.iter().map(|p| p.trim().parse::<f64>()).collect();
    let nums = nums.map_err(|e| config_err(format!("grid `{s}`: {e}")))?;
    let [lo, hi, step] = nums[..] else {
        return Err(config_err(format!("grid `{s}` must be lo:hi:step")));
    };
    if !(step > 0.0 && hi >= lo && lo.is_finite() && hi.is_finite()) {
        return Err(config_err(format!("grid `{s}` needs step > 0 and hi ≥ lo")));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| lo + step * i as f64).collect())
}

/// `lo:hi` of integers.
pub fn parse_range(s: &str) -> CliResult<(i64, i64)> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| config_err(format!("range `{s}` must be lo:hi")))?;
    let lo = lo
        .trim()
        .parse::<i64>()
        .map_err(|e| config_err(format!("range `{s}`: {e}")))?;
    let hi = hi
        .trim()
        .parse::<i64>()
        .map_err(|e| config_err(format!("range `{s}`: {e}")))?;
    if hi < lo {
        return Err(config_err(format!("range `{s}` is empty")));
    }
    Ok((lo, hi))
}

pub fn parse_list(s: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|e| config_err(format!("list `{s}`: {e}")))
        })
        .collect()
}

/// `re` or `re,im`.
pub fn parse_complex(s: &str) -> CliResult<Complex64> {
    let v = parse_list(s)?;
    match v[..] {
        [re] => Ok(Complex64::new(re, 0.0)),
        [re, im] => Ok(Complex64::new(re, im)),
        _ => Err(config_err(format!(
            "complex value `{s}` must be re or re,im"
        ))),
    }
}

fn merge<T: Clone + Serialize + for<'de> Deserialize<'de>>(
    args: &T,
    overrides: Option<&toml::Value>,
) -> CliResult<T> {
    let Some(overrides) = overrides else {
        return Ok(args.clone());
    };
    let table = overrides
        .as_table()
        .ok_or_else(|| config_err("config section must be a table"))?;
    let mut base = toml::Value::try_from(args).map_err(|e| config_err(format!("config: {e}")))?;
    let dst = base
        .as_table_mut()
        .ok_or_else(|| config_err("arguments are not a table"))?;
    for (k, v) in table {
        dst.insert(k.replace('-', "_"), v.clone());
    }
    base.try_into()
        .map_err(|e| config_err(format!("config: {e}")))
}

fn load_config(path: &Path) -> CliResult<toml::Table> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| config_err(format!("{}: {e}", path.display())))?;
    text.parse::<toml::Table>()
        .map_err(|e| config_err(format!("{}: {e}", path.display())))
}

/// Applies the [command] table of the config file to the parsed flags.
pub fn apply_config(cli: &mut Cli) -> CliResult<()> {
    let Some(path) = cli.config.clone() else {
        return Ok(());
    };
    let cfg = load_config(&path)?;
    for key in cfg.keys() {
        let known = [
            "threads", "specfun", "eigen", "defect", "invert", "statsum", "dirac", "coulomb",
        ];
        if !known.contains(&key.as_str()) {
            return Err(config_err(format!(
                "{}: unknown key `{key}`",
                path.display()
            )));
        }
    }
    if let Some(t) = cfg.get("threads") {
        let t = t
            .as_integer()
            .filter(|t| *t > 0)
            .ok_or_else(|| config_err("threads must be a positive integer"))?;
        cli.threads = Some(t as usize);
    }
    let section = cfg.get(cli.command.section());
    cli.command = match &cli.command {
        Command::Specfun(a) => Command::Specfun(merge(a, section)?),
        Command::Eigen(a) => Command::Eigen(merge(a, section)?),
        Command::Defect(a) => Command::Defect(merge(a, section)?),
        Command::Invert(a) => Command::Invert(merge(a, section)?),
        Command::Statsum(a) => Command::Statsum(merge(a, section)?),
        Command::Dirac(a) => Command::Dirac(merge(a, section)?),
        Command::Coulomb(a) => Command::Coulomb(merge(a, section)?),
    };
    Ok(())
}

/// Thread count from the flag or SLIDING_SPECTRAL_THREADS.
pub fn thread_count(flag: Option<usize>) -> CliResult<Option<usize>> {
    if let Some(n) = flag {
        return if n > 0 {
            Ok(Some(n))
        } else {
            Err(config_err("--threads must be positive"))
        };
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(config_err(format!(
                "{THREADS_ENV}={v} is not a positive integer"
            ))),
        },
        Err(_) => Ok(None),
    }
}

fn fmt_c(z: Complex64) -> String {
    format!("{}{:+}i", z.re, z.im)
}

fn specfun(a: &SpecfunArgs) -> CliResult<Output> {
    let x = parse_complex(&a.x)?;
    let alpha = parse_complex(&a.alpha)?;
    let c = parse_complex(&a.c)?;
    let kappa = parse_complex(&a.kappa)?;
    let v = match a.function {
        SpecialFunction::Gamma => gamma(x)?,
        SpecialFunction::LogGamma => log_gamma(x)?,
        SpecialFunction::Kummer => kummer_phi(&HypergeoParams::new(alpha, c)?, x)?,
        SpecialFunction::Tricomi => tricomi_psi(alpha, c, x)?,
        SpecialFunction::WhittakerM => whittaker_m(kappa, a.l, x)?,
        SpecialFunction::WhittakerW => whittaker_w(kappa, a.l, x)?,
        SpecialFunction::PsiClosed => tricomi_psi_closed(a.l, x)?,
    };
    let name = a
        .function
        .to_possible_value()
        .map(|p| p.get_name().to_string())
        .unwrap_or_default();
    Ok(Output::new(
        &["x_re", "x_im", "re", "im"],
        vec![vec![x.re, x.im, v.re, v.im]],
        format!("specfun {name}({}) = {}", fmt_c(x), fmt_c(v)),
    ))
}

fn eigen(a: &EigenArgs) -> CliResult<Output> {
    let q = a.potential.build()?;
    let (spec, what) = if a.anharmonic {
        (
            statsum::anharmonic_levels(&q, a.n)?,
            "anharmonic".to_string(),
        )
    } else {
        let p = RadialProblem::new(q.clone(), a.l, a.a)?;
        (
            eigenvalues_dirichlet(&p, a.n)?,
            format!("schrodinger l={} a={}", a.l, a.a),
        )
    };
    let worst = spec.levels.iter().map(|l| l.residual).fold(0.0, f64::max);
    let summary = format!(
        "eigen {what} q={} levels={} max_residual={worst:.3e}",
        q.describe(),
        spec.len()
    );
    Ok(Output::new(
        &io::SPECTRUM_HEADER,
        io::spectrum_rows(&spec),
        summary,
    ))
}

fn defect(a: &DefectArgs) -> CliResult<Output> {
    let q = a.potential.build()?;
    let p = RadialProblem::new(q.clone(), a.l, a.a)?;
    let spec = eigenvalues_dirichlet(&p, a.n)?;
    let d = estimate_defect(&spec, a.a, a.l)?;
    let rows = d
        .per_level
        .iter()
        .map(|(n, v)| vec![*n as f64, *v])
        .collect();
    let summary = format!(
        "defect schrodinger l={} a={} q={} levels={} delta={} uncertainty={:.3e}",
        a.l,
        a.a,
        q.describe(),
        a.n,
        d.value,
        d.uncertainty
    );
    Ok(Output::new(&["n", "delta_n"], rows, summary))
}

fn pipeline_output(kind: &str, q: &PotentialSpec, r: &PipelineReport) -> Output {
    let rows = (0..r.endpoints.len())
        .map(|i| {
            vec![
                r.endpoints[i],
                r.defect[i],
                r.defect_uncertainty[i],
                r.q_recovered[i],
                r.q_true[i],
                if r.valid[i] { 1.0 } else { 0.0 },
            ]
        })
        .collect();
    let valid = r.valid.iter().filter(|v| **v).count();
    let summary = format!(
        "invert {kind} q={} endpoints={} valid={valid} l2_relative={:.4e} max_abs={:.4e}",
        q.describe(),
        r.endpoints.len(),
        r.l2_relative,
        r.max_abs
    );
    Output::new(
        &[
            "a",
            "delta",
            "delta_uncertainty",
            "q_recovered",
            "q_true",
            "valid",
        ],
        rows,
        summary,
    )
}

fn invert(a: &InvertArgs) -> CliResult<Output> {
    let smoothing = match a.smoothing {
        SmoothingArg::None => Smoothing::None,
        SmoothingArg::SavitzkyGolay => Smoothing::SavitzkyGolay {
            window: a.sg_window,
            order: a.sg_order,
        },
    };
    if a.pipeline == Pipeline::Curve {
        let path = a
            .curve
            .as_ref()
            .ok_or_else(|| config_err("--pipeline curve needs --curve FILE"))?;
        let (header, rows) = io::read_table_file(path).map_err(|e| config_err(e.to_string()))?;
        if header.len() < 2 {
            return Err(config_err(format!(
                "{}: need columns a,delta",
                path.display()
            )));
        }
        let side = match a.side {
            SideArg::Origin => Side::FromOrigin,
            SideArg::Tail => Side::Tail,
        };
        let (x, d) = rows.iter().map(|r| (r[0], r[1])).unzip();
        let curve = DefectCurve::new(x, d, side)?;
        let q = recover_values_1d(&curve, smoothing)?;
        let out = curve
            .endpoints()
            .iter()
            .zip(&q)
            .map(|(x, v)| vec![*x, *v])
            .collect();
        let summary = format!("invert curve points={} side={:?}", q.len(), a.side);
        return Ok(Output::new(&["a", "q_recovered"], out, summary));
    }
    let q = a.potential.build()?;
    let grid = parse_grid(&a.a_grid)?;
    let options = PipelineOptions {
        smoothing,
        cache_dir: a.cache.clone(),
    };
    let report = match a.pipeline {
        Pipeline::Schrodinger => {
            let l = a.l.unwrap_or(0);
            let l = u32::try_from(l).map_err(|_| config_err("Schrödinger ℓ must be ≥ 0"))?;
            sliding_pipeline_schrodinger(&q, l, &grid, a.n, &options)?
        }
        _ => sliding_pipeline_dirac(
            &q,
            a.l.unwrap_or(1),
            a.m,
            a.psi,
            &grid,
            a.n as i64,
            &options,
        )?,
    };
    let kind = if a.pipeline == Pipeline::Schrodinger {
        "schrodinger"
    } else {
        "dirac"
    };
    Ok(pipeline_output(kind, &q, &report))
}

fn statsum_cmd(a: &StatsumArgs) -> CliResult<Output> {
    if a.check_theta {
        let (l, r) = statsum::theta_identity_check(a.z)?;
        let summary = format!(
            "statsum theta z={} lhs={l:.17e} rhs={r:.17e} diff={:.3e}",
            a.z,
            (l - r).abs()
        );
        return Ok(Output::new(
            &["z", "lhs", "rhs", "diff"],
            vec![vec![a.z, l, r, l - r]],
            summary,
        ));
    }
    if a.k == 0 {
        return Err(config_err("dimension k must be at least 1"));
    }
    let ts = parse_list(&a.t)?;
    let k = a.k as i32;
    let law = match a.law {
        Law::Nsq => LevelLaw::Dirichlet { a: PI, shift: 0.0 },
        Law::Dirichlet => LevelLaw::Dirichlet {
            a: a.a,
            shift: a.shift,
        },
        Law::Harmonic => LevelLaw::Harmonic { shift: a.shift },
    };
    let mut rows = Vec::new();
    for &t in &ts {
        let z1 = statsum::partition_sum_law(&law, t)?.value;
        let direct = z1.powi(k);
        let asym = match law {
            LevelLaw::Dirichlet { a: side, shift } => {
                let dom = BoxDomain::new(vec![side; a.k as usize])?;
                // δ(G) of q = Σ c on [0, a]^k
                statsum::asympt_multidim(t, &dom, a.k as f64 * shift * side.powi(k))
            }
            LevelLaw::Harmonic { shift } => {
                // ∫ c over the half-line diverges; a constant shift scales Z by e^{−kc/T}
                statsum::asympt_anharmonic(t, 0.0, a.k)? * (-(a.k as f64) * shift / t).exp()
            }
        };
        let r = StatSumReport::new(t, direct, asym);
        rows.push(vec![r.t, r.z_direct, r.z_asymptotic, r.residual]);
    }
    let worst = rows.iter().map(|r| r[3].abs()).fold(0.0, f64::max);
    let name = a
        .law
        .to_possible_value()
        .map(|p| p.get_name().to_string())
        .unwrap_or_default();
    let summary = format!(
        "statsum law={name} k={} temperatures={} max_abs_residual={worst:.3e}",
        a.k,
        ts.len()
    );
    Ok(Output::new(
        &["T", "Z_direct", "Z_asymptotic", "residual"],
        rows,
        summary,
    ))
}

fn dirac_cmd(a: &DiracArgs) -> CliResult<Output> {
    let q = a.potential.build()?;
    let params = DiracParams::new(a.l, a.m, q.clone())?;
    let reading = match a.reading {
        ReadingArg::F1 => BcReading::F1Sin,
        ReadingArg::F2 => BcReading::F2Sin,
    };
    match a.mode {
        DiracMode::Spectrum | DiracMode::Defect => {
            let (lo, hi) = parse_range(&a.n_range)?;
            let spec = eigenvalues_bc_with(&params, a.a, a.psi, lo..=hi, reading)?;
            if a.mode == DiracMode::Spectrum {
                let worst = spec.levels.iter().map(|l| l.residual).fold(0.0, f64::max);
                let summary = format!(
                    "dirac spectrum l={} m={} a={} psi={} q={} levels={} max_residual={worst:.3e}",
                    a.l,
                    a.m,
                    a.a,
                    a.psi,
                    q.describe(),
                    spec.len()
                );
                return Ok(Output::new(
                    &io::SPECTRUM_HEADER,
                    io::spectrum_rows(&spec),
                    summary,
                ));
            }
            let d = estimate_defect_dirac(&spec, a.a, a.l, a.psi)?;
            let rows = d
                .per_level
                .iter()
                .map(|(n, v)| vec![*n as f64, *v])
                .collect();
            let summary = format!(
                "dirac defect l={} a={} q={} delta={} uncertainty={:.3e}",
                a.l,
                a.a,
                q.describe(),
                d.value,
                d.uncertainty
            );
            Ok(Output::new(&["n", "delta_n"], rows, summary))
        }
        DiracMode::Tail => {
            let zs = parse_list(&a.z_list)?;
            let d = estimate_tail_defect(&params, a.r, &zs)?;
            let summary = format!(
                "dirac tail l={} r={} q={} delta={} uncertainty={:.3e}",
                a.l,
                a.r,
                q.describe(),
                d.value,
                d.uncertainty
            );
            Ok(Output::new(
                &["r", "delta", "uncertainty"],
                vec![vec![a.r, d.value, d.uncertainty]],
                summary,
            ))
        }
    }
}

fn coulomb_cmd(a: &CoulombArgs) -> CliResult<Output> {
    let grid = parse_grid(&a.r_grid)?;
    let q = a.potential.build()?;
    let schr = || -> CliResult<(CoulombParams, BranchedEnergy)> {
        let l = u32::try_from(a.l).map_err(|_| config_err("Schrödinger ℓ must be ≥ 0"))?;
        Ok((
            CoulombParams::schrodinger(a.a_coul, l)?,
            BranchedEnergy::schrodinger(Complex64::new(a.z, 0.0))?,
        ))
    };
    match a.mode {
        CoulombMode::Pair => {
            let (p, e) = schr()?;
            let rows = grid
                .iter()
                .map(|&r| {
                    coulomb_schrodinger_pair(&p, &e, r)
                        .map(|(u1, u2)| vec![r, u1.re, u1.im, u2.re, u2.im])
                })
                .collect::<Result<Vec<_>, _>>()?;
            let summary = format!(
                "coulomb pair a={} l={} z={} points={}",
                a.a_coul,
                a.l,
                a.z,
                rows.len()
            );
            Ok(Output::new(
                &["r", "u1_re", "u1_im", "u2_re", "u2_im"],
                rows,
                summary,
            ))
        }
        CoulombMode::Decaying => {
            let (p, e) = schr()?;
            let s = coulomb_schrodinger_decaying(&p, &e, &q, &grid)?;
            let rows = (0..grid.len())
                .map(|i| {
                    let (u, du) = (s.components[0][i], s.components[1][i]);
                    vec![grid[i], u.re, u.im, du.re, du.im]
                })
                .collect();
            let summary = format!(
                "coulomb decaying a={} l={} z={} q={}",
                a.a_coul,
                a.l,
                a.z,
                q.describe()
            );
            Ok(Output::new(
                &["r", "u_re", "u_im", "du_re", "du_im"],
                rows,
                summary,
            ))
        }
        CoulombMode::Basis => {
            let p = CoulombParams::dirac(a.a_coul, a.l, a.m)?;
            let e = BranchedEnergy::dirac(a.z, a.m)?;
            let rows = grid
                .iter()
                .map(|&r| {
                    coulomb_dirac_basis(&p, &e, r).map(|b| {
                        let (d, f) = (b.det(), b.regular());
                        vec![r, f[0].re, f[0].im, f[1].re, f[1].im, d.re, d.im]
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            let summary = format!(
                "coulomb basis a={} l={} m={} z={} omega={}",
                a.a_coul,
                a.l,
                a.m,
                a.z,
                p.omega.unwrap_or(f64::NAN)
            );
            Ok(Output::new(
                &["r", "f1_re", "f1_im", "f2_re", "f2_im", "det_re", "det_im"],
                rows,
                summary,
            ))
        }
        CoulombMode::Tail => {
            let p = CoulombParams::dirac(a.a_coul, a.l, a.m)?;
            let zs = parse_list(&a.z_list)?;
            let rows = grid
                .iter()
                .map(|&r| {
                    coulomb_dirac_defect(&p, &q, r, &zs).map(|d| vec![r, d.value, d.uncertainty])
                })
                .collect::<Result<Vec<_>, _>>()?;
            let summary = format!(
                "coulomb tail a={} l={} q={} points={}",
                a.a_coul,
                a.l,
                q.describe(),
                rows.len()
            );
            Ok(Output::new(&["r", "delta", "uncertainty"], rows, summary))
        }
    }
}

/// Runs one parsed command.
pub fn execute(command: &Command) -> CliResult<Output> {
    match command {
        Command::Specfun(a) => specfun(a),
        Command::Eigen(a) => eigen(a),
        Command::Defect(a) => defect(a),
        Command::Invert(a) => invert(a),
        Command::Statsum(a) => statsum_cmd(a),
        Command::Dirac(a) => dirac_cmd(a),
        Command::Coulomb(a) => coulomb_cmd(a),
    }
}

/// Full run: config merge, thread pool, command, output. Returns the exit status.
pub fn run(mut cli: Cli) -> i32 {
    let json = cli.json_errors;
    let result = (|| -> CliResult<()> {
        apply_config(&mut cli)?;
        if let Some(n) = thread_count(cli.threads)? {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| config_err(format!("thread pool: {e}")))?;
        }
        let out = execute(&cli.command)?;
        let csv = out.csv()?;
        match &cli.out {
            Some(path) => {
                std::fs::write(path, &csv)
                    .map_err(|e| config_err(format!("{}: {e}", path.display())))?;
                println!("{}", out.summary);
            }
            None => {
                std::io::stdout()
                    .write_all(&csv)
                    .map_err(|e| config_err(e.to_string()))?;
                eprintln!("{}", out.summary);
            }
        }
        Ok(())
    })();
    match result {
        Ok(()) => 0,
        Err(e) => {
            if json {
                eprintln!("{}", e.to_json());
            } else {
                eprintln!("error: {e}");
            }
            e.exit_code()
        }
    }
}
