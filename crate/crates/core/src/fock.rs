//! Brute-force two-mode Fock-space engine.
//!
//! States are amplitude grids `c[n1][n2] = <n1, n2|psi>` truncated at
//! `n_max` per mode. Every operator is applied by exponentiating its
//! truncated generator on a padded space of `n_max + guard + 1` levels per
//! mode; the guard levels absorb the edge error from truncating an unbounded
//! generator and are discarded afterwards. Whatever probability ends up
//! outside the retained grid is booked in `tail_mass`; states are never
//! renormalised.
//!
//! Conventions:
//!
//! * two-mode squeeze `S12(r) = exp(r (a† b† - a b))`
//! * displacement `D(alpha) = exp(alpha a† - conj(alpha) a)`
//! * single-mode squeeze `S(r) = exp(r (a^2 - a†^2) / 2)`

use ndarray::{s, Array2};
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::linalg::{self, Monomial};

/// Largest accepted squeezing parameter magnitude.
pub const R_MAX: f64 = 2.0;
/// Largest accepted displacement magnitude.
pub const ALPHA_MAX: f64 = 4.0;
pub const DEFAULT_GUARD: usize = 16;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Truncation of the Fock basis: levels `0..=n_max` are retained, and
/// `guard` extra levels pad the space while an operator is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FockCutoff {
    n_max: usize,
    guard: usize,
}

impl FockCutoff {
    pub fn new(n_max: usize, guard: usize) -> Result<Self> {
        if n_max < 1 {
            return Err(invalid("n_max must be at least 1"));
        }
        Ok(Self { n_max, guard })
    }

    /// `n_max` with the default guard band.
    pub fn with_default_guard(n_max: usize) -> Result<Self> {
        Self::new(n_max, DEFAULT_GUARD)
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn guard(&self) -> usize {
        self.guard
    }

    /// Levels kept per mode.
    pub fn retained_dim(&self) -> usize {
        self.n_max + 1
    }

    /// Working dimension per mode while an operator is applied.
    pub fn padded_dim(&self) -> usize {
        self.n_max + self.guard + 1
    }
}

/// Which of the two modes a local operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    One,
    Two,
}

/// Truncated two-mode pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeState {
    amps: Array2<Complex64>,
    cutoff: FockCutoff,
    tail_mass: f64,
}

impl TwoModeState {
    pub fn amps(&self) -> &Array2<Complex64> {
        &self.amps
    }

    pub fn cutoff(&self) -> FockCutoff {
        self.cutoff
    }

    /// Probability weight lost to truncation so far.
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    /// `<n1, n2|psi>`, zero outside the retained grid.
    pub fn amplitude(&self, n1: usize, n2: usize) -> Complex64 {
        self.amps.get((n1, n2)).copied().unwrap_or(ZERO)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    fn padded(&self) -> Array2<Complex64> {
        let d = self.cutoff.padded_dim();
        let k = self.cutoff.retained_dim();
        let mut out = Array2::zeros((d, d));
        out.slice_mut(s![..k, ..k]).assign(&self.amps);
        out
    }

    /// Restricts a padded result back to the retained grid and books the
    /// lost weight against the norm the state had before the operation.
    fn restrict_padded(&self, padded: Array2<Complex64>) -> Self {
        let k = self.cutoff.retained_dim();
        let amps = padded.slice(s![..k, ..k]).to_owned();
        let before = self.norm_sqr();
        let after: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        let lost = (before - after).max(0.0);
        Self { amps, cutoff: self.cutoff, tail_mass: self.tail_mass + lost }
    }
}

/// The two-mode vacuum `|0, 0>`.
pub fn vacuum(cutoff: FockCutoff) -> TwoModeState {
    let k = cutoff.retained_dim();
    let mut amps = Array2::zeros((k, k));
    amps[[0, 0]] = Complex64::new(1.0, 0.0);
    TwoModeState { amps, cutoff, tail_mass: 0.0 }
}

fn check_squeeze(r: f64) -> Result<()> {
    if !r.is_finite() || r.abs() > R_MAX {
        return Err(invalid(format!("squeezing parameter {r} outside [-{R_MAX}, {R_MAX}]")));
    }
    Ok(())
}

/// Applies `S12(r) = exp(r (a† b† - a b))`.
///
/// The generator conserves `n1 - n2`, so the padded generator is block
/// diagonal; each occupied block is exponentiated on its own.
pub fn apply_two_mode_squeeze(state: &TwoModeState, r: f64) -> Result<TwoModeState> {
    check_squeeze(r)?;
    if r == 0.0 {
        return Ok(state.clone());
    }
    let d = state.cutoff.padded_dim();
    let mut grid = state.padded();
    let di = d as isize;
    for k in -(di - 1)..di {
        let len = (di - k.abs()) as usize;
        // Block basis index i <-> (n1, n2) = (i + k, i) for k >= 0, (i, i - k) otherwise.
        let at = |i: usize| -> (usize, usize) {
            if k >= 0 {
                (i + k as usize, i)
            } else {
                (i, i + (-k) as usize)
            }
        };
        if (0..len).all(|i| grid[at(i)] == ZERO) {
            continue;
        }
        let mut gen = Array2::<Complex64>::zeros((len, len));
        for i in 0..len - 1 {
            let (n1, n2) = at(i);
            let w = r * (((n1 + 1) * (n2 + 1)) as f64).sqrt();
            gen[[i + 1, i]] = Complex64::new(w, 0.0);
            gen[[i, i + 1]] = Complex64::new(-w, 0.0);
        }
        let u = linalg::expm(&gen);
        let block: Vec<Complex64> = (0..len).map(|i| grid[at(i)]).collect();
        for i in 0..len {
            let mut acc = ZERO;
            for j in 0..len {
                acc += u[[i, j]] * block[j];
            }
            grid[at(i)] = acc;
        }
    }
    Ok(state.restrict_padded(grid))
}

/// Padded single-mode matrix of `exp(G)` for the given monomials (`b`
/// powers must be zero).
fn local_unitary(dim: usize, terms: &[Monomial]) -> Array2<Complex64> {
    let g = linalg::generator(dim, 1, terms).to_dense();
    linalg::expm(&g)
}

fn apply_local(state: &TwoModeState, mode: Mode, u: &Array2<Complex64>) -> TwoModeState {
    let grid = state.padded();
    let out = match mode {
        Mode::One => u.dot(&grid),
        Mode::Two => grid.dot(&u.t()),
    };
    state.restrict_padded(out)
}

/// Displacement generator `alpha a† - conj(alpha) a` on one mode.
pub(crate) fn displacement_terms(alpha: Complex64) -> [Monomial; 2] {
    [Monomial::new(alpha, 1, 0, 0, 0), Monomial::new(-alpha.conj(), 0, 1, 0, 0)]
}

/// Squeeze generator `r (a^2 - a†^2) / 2` on one mode.
pub(crate) fn squeeze_terms(r: f64) -> [Monomial; 2] {
    [Monomial::new(0.5 * r, 0, 2, 0, 0), Monomial::new(-0.5 * r, 2, 0, 0, 0)]
}

/// Padded matrix of `D(alpha)` for a cutoff; exposed so scans can reuse it.
pub fn displacement_matrix(cutoff: FockCutoff, alpha: Complex64) -> Result<Array2<Complex64>> {
    if !alpha.re.is_finite() || !alpha.im.is_finite() || alpha.norm() > ALPHA_MAX {
        return Err(invalid(format!("displacement {alpha} exceeds |alpha| <= {ALPHA_MAX}")));
    }
    Ok(local_unitary(cutoff.padded_dim(), &displacement_terms(alpha)))
}

/// Padded matrix of the single-mode squeeze `S(r)`.
pub fn squeeze_matrix(cutoff: FockCutoff, r: f64) -> Result<Array2<Complex64>> {
    check_squeeze(r)?;
    Ok(local_unitary(cutoff.padded_dim(), &squeeze_terms(r)))
}

/// Applies a padded local matrix produced by [`displacement_matrix`] or
/// [`squeeze_matrix`] for the same cutoff.
pub fn apply_local_matrix(state: &TwoModeState, mode: Mode, u: &Array2<Complex64>) -> Result<TwoModeState> {
    let d = state.cutoff.padded_dim();
    if u.dim() != (d, d) {
        return Err(invalid(format!("local matrix is {:?}, expected {d}x{d}", u.dim())));
    }
    Ok(apply_local(state, mode, u))
}

/// Applies `D_mode(alpha)`.
pub fn apply_displacement(state: &TwoModeState, mode: Mode, alpha: Complex64) -> Result<TwoModeState> {
    if alpha == ZERO {
        return Ok(state.clone());
    }
    let u = displacement_matrix(state.cutoff, alpha)?;
    Ok(apply_local(state, mode, &u))
}

/// Applies the single-mode squeeze `S_mode(r)`.
pub fn apply_single_mode_squeeze(state: &TwoModeState, mode: Mode, r: f64) -> Result<TwoModeState> {
    check_squeeze(r)?;
    if r == 0.0 {
        return Ok(state.clone());
    }
    let u = squeeze_matrix(state.cutoff, r)?;
    Ok(apply_local(state, mode, &u))
}

/// Joint photon-number distribution of a truncated state.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    probs: Array2<f64>,
    tail_mass: f64,
}

impl JointDistribution {
    /// Square grid of nonnegative probabilities plus the weight known to lie
    /// outside it.
    pub fn new(probs: Array2<f64>, tail_mass: f64) -> Result<Self> {
        if probs.nrows() != probs.ncols() || probs.nrows() == 0 {
            return Err(invalid("distribution grid must be square and nonempty"));
        }
        if let Some(p) = probs.iter().find(|p| !(**p >= 0.0) || !p.is_finite()) {
            return Err(invalid(format!("probability entry {p} is not a nonnegative number")));
        }
        if !(tail_mass >= 0.0) || !tail_mass.is_finite() {
            return Err(invalid(format!("tail mass {tail_mass} must be nonnegative")));
        }
        Ok(Self { probs, tail_mass })
    }

    /// Grid whose missing weight is inferred as `1 - sum`.
    pub fn with_inferred_tail(probs: Array2<f64>) -> Result<Self> {
        let total: f64 = probs.iter().sum();
        Self::new(probs, (1.0 - total).max(0.0))
    }

    pub fn probs(&self) -> &Array2<f64> {
        &self.probs
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn n_max(&self) -> usize {
        self.probs.nrows() - 1
    }

    /// `Pr(n1, n2)`, zero outside the grid.
    pub fn prob(&self, n1: usize, n2: usize) -> f64 {
        self.probs.get((n1, n2)).copied().unwrap_or(0.0)
    }

    /// Sum over the retained grid.
    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Probability in the outermost `band` levels of either mode.
    pub fn tail_bound(&self, band: usize) -> f64 {
        let n_max = self.n_max();
        let band = band.min(n_max + 1);
        if band == 0 {
            return 0.0;
        }
        let edge = n_max + 1 - band;
        self.probs
            .indexed_iter()
            .filter(|((i, j), _)| *i >= edge || *j >= edge)
            .map(|(_, p)| *p)
            .sum()
    }
}

/// Born-rule readout of both occupation numbers.
pub fn joint_distribution(state: &TwoModeState) -> JointDistribution {
    JointDistribution { probs: state.amps.mapv(|z| z.norm_sqr()), tail_mass: state.tail_mass }
}

/// Probability mass in the outermost `band` retained levels of either mode.
pub fn tail_bound(state: &TwoModeState, band: usize) -> f64 {
    let n_max = state.cutoff.n_max();
    let band = band.min(n_max + 1);
    if band == 0 {
        return 0.0;
    }
    let edge = n_max + 1 - band;
    state
        .amps
        .indexed_iter()
        .filter(|((i, j), _)| *i >= edge || *j >= edge)
        .map(|(_, z)| z.norm_sqr())
        .sum()
}

/// Adaptive truncation policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub start_n_max: usize,
    pub max_n_max: usize,
    pub guard: usize,
    /// Threshold on edge-band mass plus lost mass.
    pub eps_tail: f64,
    pub tail_band: usize,
    /// Use exactly this `n_max` instead of growing the cutoff.
    pub fixed_n_max: Option<usize>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { start_n_max: 32, max_n_max: 512, guard: DEFAULT_GUARD, eps_tail: 1e-10, tail_band: 4, fixed_n_max: None }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.start_n_max < 1 || self.max_n_max < self.start_n_max {
            return Err(invalid("cutoff growth needs 1 <= start_n_max <= max_n_max"));
        }
        if !(self.eps_tail > 0.0) {
            return Err(invalid("eps_tail must be positive"));
        }
        if let Some(n) = self.fixed_n_max {
            if n < 1 {
                return Err(invalid("n_max override must be at least 1"));
            }
        }
        Ok(())
    }

    /// Runs `build` at growing cutoffs (start, doubling, capped at
    /// `max_n_max`) until the truncation estimate it returns drops below
    /// `eps_tail`. With a fixed `n_max` the build runs once and its estimate
    /// is reported but not enforced.
    pub fn grow<T>(&self, mut build: impl FnMut(FockCutoff) -> Result<(T, f64)>) -> Result<(T, FockCutoff)> {
        self.validate()?;
        if let Some(n) = self.fixed_n_max {
            let cutoff = FockCutoff::new(n, self.guard)?;
            return build(cutoff).map(|(v, _)| (v, cutoff));
        }
        let mut n = self.start_n_max;
        loop {
            let cutoff = FockCutoff::new(n, self.guard)?;
            let (value, tail) = build(cutoff)?;
            if tail < self.eps_tail {
                return Ok((value, cutoff));
            }
            if n >= self.max_n_max {
                return Err(Error::CutoffExceeded { n_max: n, tail, eps_tail: self.eps_tail });
            }
            n = (2 * n).min(self.max_n_max);
        }
    }

    /// Truncation estimate used by the growth rule.
    pub fn state_tail(&self, state: &TwoModeState) -> f64 {
        tail_bound(state, self.tail_band) + state.tail_mass()
    }

    pub fn distribution_tail(&self, dist: &JointDistribution) -> f64 {
        dist.tail_bound(self.tail_band) + dist.tail_mass()
    }
}

/// `D1(z1) D2(z2) S12(r) |0, 0>` at a fixed cutoff.
pub fn displaced_tmsv(cutoff: FockCutoff, r: f64, z1: Complex64, z2: Complex64) -> Result<TwoModeState> {
    let s = apply_two_mode_squeeze(&vacuum(cutoff), r)?;
    let s = apply_displacement(&s, Mode::Two, z2)?;
    apply_displacement(&s, Mode::One, z1)
}

/// `S1(r_plus) S2(r_minus) S12(r) |0, 0>` at a fixed cutoff.
pub fn squeezed_tmsv(cutoff: FockCutoff, r: f64, r_plus: f64, r_minus: f64) -> Result<TwoModeState> {
    let s = apply_two_mode_squeeze(&vacuum(cutoff), r)?;
    let s = apply_single_mode_squeeze(&s, Mode::Two, r_minus)?;
    apply_single_mode_squeeze(&s, Mode::One, r_plus)
}

/// Displaced two-mode squeezed vacuum at an adequate cutoff.
pub fn prepare_displaced(cfg: &OracleConfig, r: f64, z1: Complex64, z2: Complex64) -> Result<TwoModeState> {
    cfg.grow(|cutoff| {
        let st = displaced_tmsv(cutoff, r, z1, z2)?;
        let tail = cfg.state_tail(&st);
        Ok((st, tail))
    })
    .map(|(st, _)| st)
}

/// Locally squeezed two-mode squeezed vacuum at an adequate cutoff.
pub fn prepare_squeezed(cfg: &OracleConfig, r: f64, r_plus: f64, r_minus: f64) -> Result<TwoModeState> {
    cfg.grow(|cutoff| {
        let st = squeezed_tmsv(cutoff, r, r_plus, r_minus)?;
        let tail = cfg.state_tail(&st);
        Ok((st, tail))
    })
    .map(|(st, _)| st)
}
