//! Command plumbing behind the `bitbell` binary: run configuration, the
//! figure table, output writers and verification suites. Everything here
//! is deterministic; thread count only changes wall time.

mod output;
pub mod suites;

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{self, SqueezeParams};
use crate::bitcorr::BitIndex;
use crate::chsh::{self, Evaluator, Method, Optimum, ScanCurve, ScanSpec, SettingKind, SettingLine, CROSS_TOL};
use crate::error::Error;
use crate::fock::{self, OracleConfig, DEFAULT_GUARD};

pub use output::{curve_csv, curve_json, write_atomic};
pub use suites::{run_suite, Check, Suite, SuiteReport};

/// Failures of a command, each with its process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::InvalidParameter(_)) | CliError::Config(_) => 2,
            CliError::Core(Error::CutoffExceeded { .. }) => 3,
            CliError::Core(Error::DegenerateDenominator(_) | Error::BranchDomain(_)) => 4,
            CliError::Io(_) => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Settings shared by scan, figure and optimize. Loaded from a flat
/// `key = value` file (unknown keys rejected), then overridden by flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub family: SettingKind,
    pub r: f64,
    pub y: u32,
    pub j_min: f64,
    pub j_max: f64,
    pub steps: usize,
    pub method: Method,
    /// fixed cutoff instead of the adaptive rule
    pub n_max: Option<usize>,
    pub guard: usize,
    pub eps_tail: f64,
    pub cross_tol: f64,
    pub max_bit: u32,
    pub format: Format,
    pub out: Option<PathBuf>,
    /// coefficients of J for the settings a, a', b, b'
    pub a: f64,
    pub a_prime: f64,
    pub b: f64,
    pub b_prime: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let line = SettingLine::default();
        Self {
            family: SettingKind::Displacement,
            r: 0.5,
            y: 1,
            j_min: 0.0,
            j_max: 2.0,
            steps: 201,
            method: Method::Analytic,
            n_max: None,
            guard: DEFAULT_GUARD,
            eps_tail: 1e-10,
            cross_tol: CROSS_TOL,
            max_bit: 3,
            format: Format::Csv,
            out: None,
            a: line.a,
            a_prime: line.a_prime,
            b: line.b,
            b_prime: line.b_prime,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn oracle(&self) -> OracleConfig {
        OracleConfig { guard: self.guard, eps_tail: self.eps_tail, fixed_n_max: self.n_max, ..Evaluator::default_oracle(self.method) }
    }

    pub fn evaluator(&self) -> Evaluator {
        Evaluator::with_config(self.method, self.oracle())
    }

    pub fn line(&self) -> SettingLine {
        SettingLine { a: self.a, a_prime: self.a_prime, b: self.b, b_prime: self.b_prime }
    }

    pub fn bit(&self) -> CliResult<BitIndex> {
        if self.y > self.max_bit {
            return Err(CliError::Config(format!("y = {} exceeds max_bit = {}", self.y, self.max_bit)));
        }
        Ok(BitIndex::new(self.y)?)
    }

    pub fn scan_spec(&self) -> CliResult<ScanSpec> {
        let spec = ScanSpec { line: self.line(), ..ScanSpec::new(self.family, self.r, self.bit()?, self.j_min, self.j_max, self.steps) };
        spec.validate()?;
        Ok(spec)
    }

    /// Everything downstream modules would reject, checked up front.
    pub fn validate(&self) -> CliResult<()> {
        self.scan_spec()?;
        self.oracle().validate()?;
        if !(self.cross_tol > 0.0) {
            return Err(CliError::Config("cross_tol must be positive".into()));
        }
        if [self.a, self.a_prime, self.b, self.b_prime].iter().any(|c| !c.is_finite()) {
            return Err(CliError::Config("setting coefficients must be finite".into()));
        }
        Ok(())
    }
}

/// One figure panel: family, bit index and the r values it shows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureSpec {
    pub id: &'static str,
    pub family: SettingKind,
    pub y: u32,
    pub rs: &'static [f64],
}

pub const FIGURES: [FigureSpec; 7] = [
    FigureSpec { id: "fig2", family: SettingKind::Displacement, y: 1, rs: &[0.5, 1.0, 1.5] },
    FigureSpec { id: "fig3a", family: SettingKind::Displacement, y: 2, rs: &[0.5, 1.0, 1.5] },
    FigureSpec { id: "fig3b", family: SettingKind::Displacement, y: 2, rs: &[0.5] },
    FigureSpec { id: "fig4a", family: SettingKind::Displacement, y: 3, rs: &[0.5] },
    FigureSpec { id: "fig4b", family: SettingKind::Displacement, y: 3, rs: &[1.0, 1.5] },
    FigureSpec { id: "fig5a", family: SettingKind::LocalSqueeze, y: 2, rs: &[0.5] },
    FigureSpec { id: "fig5b", family: SettingKind::LocalSqueeze, y: 2, rs: &[1.0, 1.25] },
];

pub fn figure(id: &str) -> CliResult<FigureSpec> {
    FIGURES
        .iter()
        .find(|f| f.id == id)
        .copied()
        .ok_or_else(|| CliError::Config(format!("unknown figure {id:?}; expected one of fig2, fig3a, fig3b, fig4a, fig4b, fig5a, fig5b")))
}

/// Single-point probability query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbQuery {
    pub family: SettingKind,
    pub r: f64,
    /// displacements, or local squeezes in the real parts
    pub mode1: Complex64,
    pub mode2: Complex64,
    pub n1: usize,
    pub n2: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbMethod {
    Analytic,
    Oracle,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbAnswer {
    pub analytic: Option<f64>,
    pub oracle: Option<f64>,
}

impl ProbAnswer {
    pub fn difference(&self) -> Option<f64> {
        Some((self.analytic? - self.oracle?).abs())
    }
}

pub fn prob(q: &ProbQuery, method: ProbMethod, oracle: &OracleConfig) -> CliResult<ProbAnswer> {
    let setting = match q.family {
        SettingKind::Displacement => chsh::MeasurementSetting::displacement(q.mode1, q.mode2),
        SettingKind::LocalSqueeze => chsh::MeasurementSetting::squeeze(q.mode1.re, q.mode2.re),
    };
    if q.family == SettingKind::LocalSqueeze && (q.mode1.im != 0.0 || q.mode2.im != 0.0) {
        return Err(Error::InvalidParameter("squeeze parameters must be real".into()).into());
    }
    setting.validate()?;
    let analytic = match method {
        ProbMethod::Oracle => None,
        _ => Some(match q.family {
            SettingKind::Displacement => {
                if !q.r.is_finite() || q.r.abs() > fock::R_MAX {
                    return Err(Error::InvalidParameter(format!("r = {} outside [-{}, {}]", q.r, fock::R_MAX, fock::R_MAX)).into());
                }
                analytic::displaced_prob(q.r, q.mode1, q.mode2, q.n1, q.n2)
            }
            SettingKind::LocalSqueeze => analytic::squeezed_prob(SqueezeParams::new(q.r, q.mode1.re, q.mode2.re)?, q.n1, q.n2)?,
        }),
    };
    let oracle_value = match method {
        ProbMethod::Analytic => None,
        _ => {
            // retained grid must reach the requested levels
            let need = q.n1.max(q.n2) + oracle.tail_band + 1;
            let mut cfg = *oracle;
            cfg.start_n_max = cfg.start_n_max.max(need.next_power_of_two());
            cfg.max_n_max = cfg.max_n_max.max(cfg.start_n_max);
            if let Some(n) = cfg.fixed_n_max {
                cfg.fixed_n_max = Some(n.max(q.n1.max(q.n2)));
            }
            let state = match q.family {
                SettingKind::Displacement => fock::prepare_displaced(&cfg, q.r, q.mode1, q.mode2)?,
                SettingKind::LocalSqueeze => fock::prepare_squeezed(&cfg, q.r, q.mode1.re, q.mode2.re)?,
            };
            Some(state.amplitude(q.n1, q.n2).norm_sqr())
        }
    };
    Ok(ProbAnswer { analytic, oracle: oracle_value })
}

pub fn scan(cfg: &RunConfig) -> CliResult<ScanCurve> {
    cfg.validate()?;
    Ok(chsh::scan_j(&cfg.scan_spec()?, &cfg.evaluator())?)
}

/// Serialised curve in the configured format.
pub fn render_curve(curve: &ScanCurve, format: Format) -> String {
    match format {
        Format::Csv => curve_csv(curve),
        Format::Json => curve_json(curve),
    }
}

/// File name for one curve of a figure, e.g. `fig3a_r0.5.csv`.
pub fn figure_file_name(id: &str, r: f64, format: Format) -> String {
    let ext = match format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    format!("{id}_r{r}.{ext}")
}

/// Computes every curve of a figure with the figure's family, bit and r
/// values; J range, steps and method come from `cfg`.
pub fn figure_curves(fig: &FigureSpec, cfg: &RunConfig) -> CliResult<Vec<ScanCurve>> {
    fig.rs
        .iter()
        .map(|&r| {
            let c = RunConfig { family: fig.family, y: fig.y, r, max_bit: cfg.max_bit.max(fig.y), ..cfg.clone() };
            scan(&c)
        })
        .collect()
}

/// Writes a figure's curves into `dir`, returning the paths written.
pub fn write_figure(fig: &FigureSpec, cfg: &RunConfig, dir: &Path) -> CliResult<Vec<PathBuf>> {
    let curves = figure_curves(fig, cfg)?;
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for curve in &curves {
        let path = dir.join(figure_file_name(fig.id, curve.spec.r, cfg.format));
        write_atomic(&path, render_curve(curve, cfg.format).as_bytes())?;
        written.push(path);
    }
    Ok(written)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimizeReport {
    pub family: &'static str,
    pub r: f64,
    pub y: u32,
    pub method: &'static str,
    pub j_star: f64,
    pub s_star: f64,
}

pub fn optimize(cfg: &RunConfig) -> CliResult<OptimizeReport> {
    cfg.validate()?;
    let Optimum { j, s } = chsh::maximize_violation(&cfg.scan_spec()?, &cfg.evaluator())?;
    Ok(OptimizeReport { family: cfg.family.name(), r: cfg.r, y: cfg.y, method: cfg.method.name(), j_star: j, s_star: s })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_file_round_trip_and_unknown_keys() {
        let cfg = RunConfig::from_toml("family = \"squeeze\"\nr = 1.0\ny = 2\nsteps = 11\n").unwrap();
        assert_eq!(cfg.family, SettingKind::LocalSqueeze);
        assert_eq!(cfg.y, 2);
        assert_eq!(cfg.j_max, 2.0);
        assert!(matches!(RunConfig::from_toml("r = 1.0\nsetps = 3\n"), Err(CliError::Config(_))));
    }

    #[test]
    fn validation_errors_map_to_exit_two() {
        let cfg = RunConfig { j_min: 0.0, j_max: 0.0, steps: 2, ..RunConfig::default() };
        assert_eq!(cfg.validate().unwrap_err().exit_code(), 2);
        let cfg = RunConfig { y: 4, ..RunConfig::default() };
        assert_eq!(cfg.validate().unwrap_err().exit_code(), 2);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::from(Error::CutoffExceeded { n_max: 8, tail: 1.0, eps_tail: 0.1 }).exit_code(), 3);
        assert_eq!(CliError::from(Error::DegenerateDenominator(0.0)).exit_code(), 4);
    }

    #[test]
    fn figure_table() {
        assert_eq!(figure("fig2").unwrap().rs, &[0.5, 1.0, 1.5]);
        assert_eq!(figure("fig4b").unwrap().y, 3);
        assert_eq!(figure("fig5a").unwrap().family, SettingKind::LocalSqueeze);
        assert!(figure("fig6").is_err());
        assert_eq!(figure_file_name("fig3a", 0.5, Format::Csv), "fig3a_r0.5.csv");
        assert_eq!(figure_file_name("fig2", 1.0, Format::Json), "fig2_r1.json");
    }

    #[test]
    fn trivial_probabilities() {
        let q = ProbQuery { family: SettingKind::Displacement, r: 0.0, mode1: 0.0.into(), mode2: 0.0.into(), n1: 0, n2: 0 };
        let a = prob(&q, ProbMethod::Both, &OracleConfig::default()).unwrap();
        assert!((a.analytic.unwrap() - 1.0).abs() < 1e-15);
        assert!(a.difference().unwrap() < 1e-12);
        let q = ProbQuery { family: SettingKind::LocalSqueeze, r: 0.5, mode1: 0.3.into(), mode2: (-0.3).into(), n1: 1, n2: 2 };
        assert_eq!(prob(&q, ProbMethod::Analytic, &OracleConfig::default()).unwrap().analytic, Some(0.0));
    }
}
