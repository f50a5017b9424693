//! CHSH combinations of bit correlators, one-parameter scans and violation
//! search.
//!
//! A quad holds the two settings of each side; side 1 uses `a` or `a'`,
//! side 2 uses `b` or `b'`, and
//!
//! ```text
//! S = |E(a, b) + E(a, b') + E(a', b) - E(a', b')|
//! ```
//!
//! Local hidden-variable models obey `S <= 2`; quantum mechanics allows up
//! to `2 sqrt 2`. A scan moves the four settings along a line in `J`; the
//! default displacement line is `a = b = 0`, `a' = -b' = J`, and the squeeze
//! family uses the same pattern for the local squeezes `r+` (side 1) and
//! `r-` (side 2).

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{self, SqueezeParams};
use crate::bitcorr::{correlator, BitIndex, Correlation};
use crate::error::{invalid, Result};
use crate::fock::{self, FockCutoff, JointDistribution, OracleConfig, ALPHA_MAX, R_MAX};

/// Agreement required between oracle and closed-form probabilities.
pub const CROSS_TOL: f64 = 1e-8;

/// Cutoff cap for closed-form grids. They cost O(n_max^2) rather than the
/// oracle's dense O(n_max^3), so strongly squeezed settings can afford it.
pub const ANALYTIC_MAX_N_MAX: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SettingKind {
    Displacement,
    #[serde(rename = "squeeze")]
    LocalSqueeze,
}

impl SettingKind {
    pub fn name(self) -> &'static str {
        match self {
            SettingKind::Displacement => "displacement",
            SettingKind::LocalSqueeze => "squeeze",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// brute-force truncated Fock-space evolution
    Oracle,
    /// closed-form probabilities
    Analytic,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Oracle => "oracle",
            Method::Analytic => "analytic",
        }
    }
}

/// Local operations applied to both modes before readout: displacements
/// `(alpha, beta)` or real local squeezes `(r+, r-)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementSetting {
    pub kind: SettingKind,
    pub mode1: Complex64,
    pub mode2: Complex64,
}

impl MeasurementSetting {
    pub fn displacement(alpha: Complex64, beta: Complex64) -> Self {
        Self { kind: SettingKind::Displacement, mode1: alpha, mode2: beta }
    }

    pub fn squeeze(r_plus: f64, r_minus: f64) -> Self {
        Self { kind: SettingKind::LocalSqueeze, mode1: r_plus.into(), mode2: r_minus.into() }
    }

    pub fn validate(&self) -> Result<()> {
        let limit = match self.kind {
            SettingKind::Displacement => ALPHA_MAX,
            SettingKind::LocalSqueeze => R_MAX,
        };
        for p in [self.mode1, self.mode2] {
            if !p.re.is_finite() || !p.im.is_finite() || p.norm() > limit {
                return Err(invalid(format!("{} parameter {p} exceeds {limit}", self.kind.name())));
            }
            if self.kind == SettingKind::LocalSqueeze && p.im != 0.0 {
                return Err(invalid(format!("squeeze parameter {p} must be real")));
            }
        }
        Ok(())
    }
}

/// Two settings per side for one CHSH combination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshQuad {
    pub kind: SettingKind,
    pub r: f64,
    pub y: BitIndex,
    pub a: Complex64,
    pub a_prime: Complex64,
    pub b: Complex64,
    pub b_prime: Complex64,
}

impl ChshQuad {
    /// Settings for `(a, b)`, `(a, b')`, `(a', b)`, `(a', b')`.
    pub fn pairs(&self) -> [MeasurementSetting; 4] {
        let s = |m1, m2| MeasurementSetting { kind: self.kind, mode1: m1, mode2: m2 };
        [s(self.a, self.b), s(self.a, self.b_prime), s(self.a_prime, self.b), s(self.a_prime, self.b_prime)]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChshResult {
    pub e_ab: f64,
    pub e_abp: f64,
    pub e_apb: f64,
    pub e_apbp: f64,
    pub s: f64,
    pub err: f64,
    pub cutoff_used: usize,
}

impl ChshResult {
    fn from_correlations(c: [Correlation; 4], cutoff_used: usize) -> Self {
        let [ab, abp, apb, apbp] = c;
        Self {
            e_ab: ab.value,
            e_abp: abp.value,
            e_apb: apb.value,
            e_apbp: apbp.value,
            s: (ab.value + abp.value + apb.value - apbp.value).abs(),
            err: c.iter().map(|x| x.err).sum(),
            cutoff_used,
        }
    }
}

/// Evaluates joint distributions with a chosen method and truncation policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluator {
    pub method: Method,
    pub oracle: OracleConfig,
}

impl Evaluator {
    pub fn new(method: Method) -> Self {
        Self { method, oracle: Self::default_oracle(method) }
    }

    /// Default truncation policy for a method.
    pub fn default_oracle(method: Method) -> OracleConfig {
        match method {
            Method::Oracle => OracleConfig::default(),
            Method::Analytic => OracleConfig { max_n_max: ANALYTIC_MAX_N_MAX, ..OracleConfig::default() },
        }
    }

    pub fn with_config(method: Method, oracle: OracleConfig) -> Self {
        Self { method, oracle }
    }

    /// Joint distribution at a fixed cutoff, with its truncation estimate.
    pub fn distribution_at(&self, r: f64, setting: MeasurementSetting, cutoff: FockCutoff) -> Result<(JointDistribution, f64)> {
        setting.validate()?;
        let (p1, p2) = (setting.mode1, setting.mode2);
        match (self.method, setting.kind) {
            (Method::Oracle, kind) => {
                let state = match kind {
                    SettingKind::Displacement => fock::displaced_tmsv(cutoff, r, p1, p2)?,
                    SettingKind::LocalSqueeze => fock::squeezed_tmsv(cutoff, r, p1.re, p2.re)?,
                };
                let tail = self.oracle.state_tail(&state);
                Ok((fock::joint_distribution(&state), tail))
            }
            (Method::Analytic, kind) => {
                let dist = match kind {
                    SettingKind::Displacement => analytic::displaced_distribution(r, p1, p2, cutoff.n_max())?,
                    SettingKind::LocalSqueeze => {
                        analytic::squeezed_distribution(SqueezeParams::new(r, p1.re, p2.re)?, cutoff.n_max())?
                    }
                };
                let tail = self.oracle.distribution_tail(&dist);
                Ok((dist, tail))
            }
        }
    }

    /// Joint distribution at the smallest cutoff the growth rule accepts.
    pub fn distribution(&self, r: f64, setting: MeasurementSetting) -> Result<(JointDistribution, FockCutoff)> {
        self.oracle.grow(|cutoff| self.distribution_at(r, setting, cutoff))
    }
}

/// Bit-`y` correlator for one pair of settings, and the cutoff used.
pub fn settings_correlator(
    r: f64,
    setting: MeasurementSetting,
    y: BitIndex,
    eval: &Evaluator,
) -> Result<(Correlation, FockCutoff)> {
    let (dist, cutoff) = eval.distribution(r, setting)?;
    Ok((correlator(&dist, y), cutoff))
}

/// `S_y` for a quad. Each pair gets an adequate cutoff, and the largest of
/// the four is then used for all of them.
pub fn s_value(quad: &ChshQuad, eval: &Evaluator) -> Result<ChshResult> {
    Ok(s_values(quad, &[quad.y], eval)?[0])
}

/// `S_y` for several bits of the same quad (`quad.y` is ignored), sharing
/// the four joint distributions.
pub fn s_values(quad: &ChshQuad, ys: &[BitIndex], eval: &Evaluator) -> Result<Vec<ChshResult>> {
    let pairs = quad.pairs();
    let mut found = Vec::with_capacity(4);
    for s in pairs {
        found.push(eval.distribution(quad.r, s)?);
    }
    let shared = found.iter().map(|(_, c)| *c).max_by_key(|c| c.n_max()).expect("four pairs");
    let mut dists = Vec::with_capacity(4);
    for (i, (dist, cutoff)) in found.into_iter().enumerate() {
        dists.push(if cutoff == shared { dist } else { eval.distribution_at(quad.r, pairs[i], shared)?.0 });
    }
    Ok(ys
        .iter()
        .map(|&y| {
            let corr = [0, 1, 2, 3].map(|i| correlator(&dists[i], y));
            ChshResult::from_correlations(corr, shared.n_max())
        })
        .collect())
}

/// Scales `J` into the four settings of a scan line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SettingLine {
    pub a: f64,
    pub a_prime: f64,
    pub b: f64,
    pub b_prime: f64,
}

impl Default for SettingLine {
    /// `a = b = 0`, `a' = J`, `b' = -J`
    fn default() -> Self {
        Self { a: 0.0, a_prime: 1.0, b: 0.0, b_prime: -1.0 }
    }
}

impl SettingLine {
    pub fn quad(&self, kind: SettingKind, r: f64, y: BitIndex, j: f64) -> ChshQuad {
        let c = |k: f64| Complex64::new(k * j, 0.0);
        ChshQuad { kind, r, y, a: c(self.a), a_prime: c(self.a_prime), b: c(self.b), b_prime: c(self.b_prime) }
    }
}

/// A one-parameter family of quads.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanSpec {
    pub kind: SettingKind,
    pub r: f64,
    pub y: BitIndex,
    pub j_min: f64,
    pub j_max: f64,
    pub steps: usize,
    pub line: SettingLine,
}

impl ScanSpec {
    pub fn new(kind: SettingKind, r: f64, y: BitIndex, j_min: f64, j_max: f64, steps: usize) -> Self {
        Self { kind, r, y, j_min, j_max, steps, line: SettingLine::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(invalid(format!("scan needs at least 2 steps, got {}", self.steps)));
        }
        if !(self.j_min < self.j_max) || !self.j_min.is_finite() || !self.j_max.is_finite() {
            return Err(invalid(format!("empty J bracket [{}, {}]", self.j_min, self.j_max)));
        }
        if !self.r.is_finite() || self.r.abs() > R_MAX {
            return Err(invalid(format!("r = {} outside [-{R_MAX}, {R_MAX}]", self.r)));
        }
        Ok(())
    }

    /// Grid point `i` of `steps`, endpoints exact.
    pub fn j_at(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            return self.j_max;
        }
        self.j_min + (self.j_max - self.j_min) * i as f64 / (self.steps - 1) as f64
    }

    pub fn quad(&self, j: f64) -> ChshQuad {
        self.line.quad(self.kind, self.r, self.y, j)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub j: f64,
    #[serde(flatten)]
    pub result: ChshResult,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FailedPoint {
    pub j: f64,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanCurve {
    pub spec: ScanSpec,
    pub method: Method,
    pub rows: Vec<ScanRow>,
    pub failed: Vec<FailedPoint>,
}

impl ScanCurve {
    pub fn max_s(&self) -> Option<&ScanRow> {
        self.rows.iter().max_by(|a, b| a.result.s.total_cmp(&b.result.s))
    }

    pub fn s_at(&self, j: f64) -> Option<f64> {
        self.rows.iter().find(|r| r.j == j).map(|r| r.result.s)
    }
}

/// Evaluates every grid point (in parallel on the current rayon pool) and
/// assembles rows in ascending `J`. Points whose evaluation fails are
/// listed in `failed` instead of aborting the scan.
pub fn scan_j(spec: &ScanSpec, eval: &Evaluator) -> Result<ScanCurve> {
    spec.validate()?;
    let results: Vec<(f64, Result<ChshResult>)> = (0..spec.steps)
        .into_par_iter()
        .map(|i| {
            let j = spec.j_at(i);
            (j, s_value(&spec.quad(j), eval))
        })
        .collect();
    let mut rows = Vec::new();
    let mut failed = Vec::new();
    for (j, r) in results {
        match r {
            Ok(result) => rows.push(ScanRow { j, result }),
            Err(e) => failed.push(FailedPoint { j, error: e.to_string() }),
        }
    }
    Ok(ScanCurve { spec: *spec, method: eval.method, rows, failed })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Optimum {
    pub j: f64,
    pub s: f64,
}

const COARSE_POINTS: usize = 64;
const J_TOL: f64 = 1e-4;

/// Largest `S` along the scan line within `[j_min, j_max]`: a 64-point
/// grid, then golden-section refinement around every local maximum of the
/// grid. Grid points that fail to evaluate are skipped.
pub fn maximize_violation(spec: &ScanSpec, eval: &Evaluator) -> Result<Optimum> {
    let coarse = ScanSpec { steps: COARSE_POINTS, ..*spec };
    coarse.validate()?;
    let s_of = |j: f64| s_value(&spec.quad(j), eval).map(|r| r.s).unwrap_or(f64::NEG_INFINITY);
    let grid: Vec<(f64, f64)> = (0..COARSE_POINTS)
        .into_par_iter()
        .map(|i| {
            let j = coarse.j_at(i);
            (j, s_of(j))
        })
        .collect();
    if grid.iter().all(|(_, s)| !s.is_finite()) {
        // surface the first failure
        return s_value(&spec.quad(coarse.j_at(0)), eval).map(|r| Optimum { j: coarse.j_at(0), s: r.s });
    }

    let mut best = grid.iter().copied().fold((f64::NAN, f64::NEG_INFINITY), |b, p| if p.1 > b.1 { p } else { b });
    let peaks: Vec<usize> = (0..grid.len())
        .filter(|&i| {
            let s = grid[i].1;
            s.is_finite() && (i == 0 || grid[i - 1].1 <= s) && (i + 1 == grid.len() || grid[i + 1].1 <= s)
        })
        .collect();
    let refined: Vec<(f64, f64)> = peaks
        .par_iter()
        .map(|&i| {
            let lo = grid[i.saturating_sub(1)].0;
            let hi = grid[(i + 1).min(grid.len() - 1)].0;
            golden_max(&s_of, lo, hi)
        })
        .collect();
    for p in refined {
        if p.1 > best.1 {
            best = p;
        }
    }
    Ok(Optimum { j: best.0, s: best.1 })
}

fn golden_max(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > J_TOL {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}
