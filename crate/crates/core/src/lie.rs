//! Operator reordering identities for products of exponentials of quadratic
//! ladder-operator monomials, with numerical checks in truncated Fock space.
//!
//! The three identities (`A`, `B` independent modes):
//!
//! ```text
//! PairCreation: e^{c1 A^2} e^{c2 A†B†} = e^{c2 A†B†} e^{c1 c2^2 B†^2} e^{2 c1 c2 A B†} e^{c1 A^2}
//! Su11:         e^{c1 A^2} e^{c2 A†^2} = e^{b1 A†^2} e^{b2 (A†A + 1/2)} e^{b3 A^2}
//! Hopping:      e^{c1 A†B} e^{c2 B†^2} = e^{c2 B†^2} e^{2 c1 c2 A†B†} e^{c1^2 c2 A†^2} e^{c1 A†B}
//! ```
//!
//! `PairCreation` and `Hopping` follow from conjugating the right factor
//! (the commutator that appears is central), and the intermediate single
//! exponential
//!
//! ```text
//! e^{c1 A^2} e^{c2 A†B†} = exp(c1 A^2 + c2 A†B† + c1 c2 A B† + c1 c2^2 / 6 B†^2)
//! ```
//!
//! is exact: every nested commutator of degree four or more vanishes.
//!
//! `Su11` is solved in the two-dimensional representation
//! `A†^2 -> 2 sigma+`, `A^2 -> -2 sigma-`, `A†A + 1/2 -> sigma_z`, giving
//! `b1 = c2 / (1 - 4 c1 c2)`, `b3 = c1 / (1 - 4 c1 c2)` and
//! `e^{-b2} = 1 - 4 c1 c2`. The latter is the arccosh form
//! `b2 = ±arccosh(1 + 2 c1 c2 / (1 - 4 c1 c2) - 2 c1 c2)` with the sign
//! fixed by the lower-right matrix entry.

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::fock::FockCutoff;
use crate::linalg::{expm_multiply, generator, Monomial};

const DEGENERATE_EPS: f64 = 1e-12;
/// Largest |c| accepted by the truncated-space checks.
pub const C_MAX: f64 = 0.5;
/// Largest padded state-vector length the truncated checks will build.
pub const MAX_PADDED_LEN: usize = 1 << 16;

/// Coefficients of `e^{beta1 A†^2} e^{beta2 (A†A + 1/2)} e^{beta3 A^2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su11Decomposition {
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
}

/// Complex 2x2 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoByTwo(pub [[Complex64; 2]; 2]);

impl TwoByTwo {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        let z = |x| Complex64::new(x, 0.0);
        Self([[z(a), z(b)], [z(c), z(d)]])
    }

    pub fn identity() -> Self {
        Self::new(1.0, 0.0, 0.0, 1.0)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Self(out)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                m = m.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        m
    }

    /// `exp(x sigma+)`, exact since `sigma+` is nilpotent.
    fn exp_raise(x: f64) -> Self {
        Self::new(1.0, x, 0.0, 1.0)
    }

    /// `exp(x sigma-)`
    fn exp_lower(x: f64) -> Self {
        Self::new(1.0, 0.0, x, 1.0)
    }

    /// `exp(x sigma_z)`
    fn exp_diag(x: f64) -> Self {
        Self::new(x.exp(), 0.0, 0.0, (-x).exp())
    }
}

/// Normally orders `e^{c1 A^2} e^{c2 A†^2}`.
pub fn decompose_su11(c1: f64, c2: f64) -> Result<Su11Decomposition> {
    if !c1.is_finite() || !c2.is_finite() {
        return Err(invalid(format!("non-finite coefficients ({c1}, {c2})")));
    }
    let x = c1 * c2;
    let den = 1.0 - 4.0 * x;
    if den.abs() < DEGENERATE_EPS {
        return Err(Error::DegenerateDenominator(den));
    }
    // arccosh argument written as 1 + eps to keep small-c accuracy
    let eps = 8.0 * x * x / den;
    if eps < 0.0 {
        return Err(Error::BranchDomain(1.0 + eps));
    }
    let magnitude = (eps + (eps * (2.0 + eps)).sqrt()).ln_1p();
    // e^{-beta2} must reproduce the lower-right entry 1 - 4 c1 c2
    let beta2 = if ((-magnitude).exp() - den).abs() <= (magnitude.exp() - den).abs() { magnitude } else { -magnitude };
    Ok(Su11Decomposition { beta1: c2 / den, beta2, beta3: c1 / den })
}

/// `exp(-2 c1 sigma-) exp(2 c2 sigma+)`, the image of `e^{c1 A^2} e^{c2 A†^2}`.
pub fn lhs_matrix(c1: f64, c2: f64) -> TwoByTwo {
    TwoByTwo::exp_lower(-2.0 * c1).mul(&TwoByTwo::exp_raise(2.0 * c2))
}

/// `exp(2 b1 sigma+) exp(b2 sigma_z) exp(-2 b3 sigma-)`.
pub fn rhs_matrix(d: Su11Decomposition) -> TwoByTwo {
    TwoByTwo::exp_raise(2.0 * d.beta1).mul(&TwoByTwo::exp_diag(d.beta2)).mul(&TwoByTwo::exp_lower(-2.0 * d.beta3))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Identity {
    /// moves `e^{c1 A^2}` past pair creation `e^{c2 A†B†}`
    PairCreation,
    /// single-mode SU(1,1) disentangling
    Su11,
    /// moves `e^{c1 A†B}` past `e^{c2 B†^2}`
    Hopping,
}

impl Identity {
    pub const ALL: [Identity; 3] = [Identity::PairCreation, Identity::Su11, Identity::Hopping];

    /// Looks an identity up by its position (1, 2, 3) in the list above.
    pub fn from_index(i: u32) -> Result<Self> {
        match i {
            1 => Ok(Identity::PairCreation),
            2 => Ok(Identity::Su11),
            3 => Ok(Identity::Hopping),
            _ => Err(invalid(format!("identity index {i} not in 1..=3"))),
        }
    }

    pub fn index(self) -> u32 {
        match self {
            Identity::PairCreation => 1,
            Identity::Su11 => 2,
            Identity::Hopping => 3,
        }
    }

    fn modes(self) -> usize {
        if self == Identity::Su11 {
            1
        } else {
            2
        }
    }
}

/// Single-mode input state for the identity checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Probe {
    Fock(usize),
    /// Coherent amplitudes `alpha^n / sqrt(n!)` kept up to `n = 12` and
    /// renormalised.
    Coherent(f64),
}

impl Probe {
    pub const DEFAULT_BASIS: [Probe; 4] = [Probe::Fock(0), Probe::Fock(1), Probe::Fock(2), Probe::Coherent(0.5)];

    fn amplitudes(self, n_max: usize) -> Result<Vec<(usize, f64)>> {
        match self {
            Probe::Fock(n) if n <= n_max => Ok(vec![(n, 1.0)]),
            Probe::Fock(n) => Err(invalid(format!("probe |{n}> above n_max = {n_max}"))),
            Probe::Coherent(alpha) => {
                let mut amps = Vec::new();
                let mut a = 1.0;
                for n in 0..=12.min(n_max) {
                    if n > 0 {
                        a *= alpha / (n as f64).sqrt();
                    }
                    amps.push((n, a));
                }
                let norm = amps.iter().map(|(_, a)| a * a).sum::<f64>().sqrt();
                Ok(amps.into_iter().map(|(n, a)| (n, a / norm)).collect())
            }
        }
    }
}

/// Exponents of an ordered product, leftmost first.
type Factors = Vec<Vec<Monomial>>;

/// Ordered product of exponentials, rightmost factor applied first.
struct Product {
    dim: usize,
    dim_b: usize,
    factors: Factors,
}

impl Product {
    fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.factors.iter().rev().fold(v.to_vec(), |w, terms| expm_multiply(&generator(self.dim, self.dim_b, terms), &w))
    }
}

fn m(coeff: f64, a_dag: u32, a: u32, b_dag: u32, b: u32) -> Monomial {
    Monomial::new(coeff, a_dag, a, b_dag, b)
}

fn sides(id: Identity, c1: f64, c2: f64) -> Result<(Factors, Factors)> {
    Ok(match id {
        Identity::PairCreation => (
            vec![vec![m(c1, 0, 2, 0, 0)], vec![m(c2, 1, 0, 1, 0)]],
            vec![
                vec![m(c2, 1, 0, 1, 0)],
                vec![m(c1 * c2 * c2, 0, 0, 2, 0)],
                vec![m(2.0 * c1 * c2, 0, 1, 1, 0)],
                vec![m(c1, 0, 2, 0, 0)],
            ],
        ),
        Identity::Su11 => {
            let d = decompose_su11(c1, c2)?;
            (
                vec![vec![m(c1, 0, 2, 0, 0)], vec![m(c2, 2, 0, 0, 0)]],
                vec![
                    vec![m(d.beta1, 2, 0, 0, 0)],
                    vec![m(d.beta2, 1, 1, 0, 0), m(0.5 * d.beta2, 0, 0, 0, 0)],
                    vec![m(d.beta3, 0, 2, 0, 0)],
                ],
            )
        }
        Identity::Hopping => (
            vec![vec![m(c1, 1, 0, 0, 1)], vec![m(c2, 0, 0, 2, 0)]],
            vec![
                vec![m(c2, 0, 0, 2, 0)],
                vec![m(2.0 * c1 * c2, 1, 0, 1, 0)],
                vec![m(c1 * c1 * c2, 2, 0, 0, 0)],
                vec![m(c1, 1, 0, 0, 1)],
            ],
        ),
    })
}

fn check_coefficients(c1: f64, c2: f64) -> Result<()> {
    for c in [c1, c2] {
        if !c.is_finite() || c.abs() > C_MAX {
            return Err(invalid(format!("coefficient {c} outside [-{C_MAX}, {C_MAX}]")));
        }
    }
    Ok(())
}

/// Maximum amplitude deviation between two ordered products over every
/// pair of probes, compared on retained levels only.
fn compare(
    modes: usize,
    lhs: Factors,
    rhs: Factors,
    cutoff: FockCutoff,
    probes: &[Probe],
) -> Result<f64> {
    let dim = cutoff.padded_dim();
    let dim_b = if modes == 2 { dim } else { 1 };
    let n_max = cutoff.n_max();
    let lhs = Product { dim, dim_b, factors: lhs };
    let rhs = Product { dim, dim_b, factors: rhs };

    if dim * dim_b > MAX_PADDED_LEN {
        return Err(Error::CutoffExceeded { n_max, tail: f64::NAN, eps_tail: 0.0 });
    }

    let single: Vec<Vec<(usize, f64)>> = probes.iter().map(|p| p.amplitudes(n_max)).collect::<Result<_>>()?;
    let trivial = vec![vec![(0usize, 1.0)]];
    let second = if modes == 2 { &single } else { &trivial };

    let mut worst: f64 = 0.0;
    for pa in &single {
        for pb in second {
            let mut v = vec![Complex64::new(0.0, 0.0); dim * dim_b];
            for &(na, xa) in pa {
                for &(nb, xb) in pb {
                    v[na * dim_b + nb] = Complex64::new(xa * xb, 0.0);
                }
            }
            let l = lhs.apply(&v);
            let r = rhs.apply(&v);
            for na in 0..=n_max.min(dim - 1) {
                for nb in 0..dim_b.min(n_max + 1) {
                    let k = na * dim_b + nb;
                    worst = worst.max((l[k] - r[k]).norm());
                }
            }
        }
    }
    Ok(worst)
}

/// Checks an identity on the default probe basis
/// `{|0>, |1>, |2>, coherent-like}` (pairs of probes for two-mode
/// identities); returns the maximum amplitude deviation on retained levels.
pub fn verify_identity(id: Identity, c1: f64, c2: f64, cutoff: FockCutoff) -> Result<f64> {
    verify_identity_on(id, c1, c2, cutoff, &Probe::DEFAULT_BASIS)
}

pub fn verify_identity_on(id: Identity, c1: f64, c2: f64, cutoff: FockCutoff, probes: &[Probe]) -> Result<f64> {
    check_coefficients(c1, c2)?;
    let (lhs, rhs) = sides(id, c1, c2)?;
    compare(id.modes(), lhs, rhs, cutoff, probes)
}

/// Compares `e^{c1 A^2} e^{c2 A†B†}` with its single-exponential form.
pub fn verify_bch_compose(c1: f64, c2: f64, cutoff: FockCutoff) -> Result<f64> {
    check_coefficients(c1, c2)?;
    let lhs = vec![vec![m(c1, 0, 2, 0, 0)], vec![m(c2, 1, 0, 1, 0)]];
    let rhs = vec![vec![
        m(c1, 0, 2, 0, 0),
        m(c2, 1, 0, 1, 0),
        m(c1 * c2, 0, 1, 1, 0),
        m(c1 * c2 * c2 / 6.0, 0, 0, 2, 0),
    ]];
    compare(2, lhs, rhs, cutoff, &Probe::DEFAULT_BASIS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cut(n: usize) -> FockCutoff {
        FockCutoff::with_default_guard(n).unwrap()
    }

    #[test]
    fn decomposition_trivial_limits() {
        let d = decompose_su11(0.0, 0.3).unwrap();
        assert_eq!((d.beta1, d.beta2, d.beta3), (0.3, 0.0, 0.0));
        let d = decompose_su11(0.3, 0.0).unwrap();
        assert_eq!((d.beta1, d.beta2, d.beta3), (0.0, 0.0, 0.3));
    }

    #[test]
    fn decomposition_at_point_one() {
        let d = decompose_su11(0.1, 0.1).unwrap();
        assert!((d.beta1 - 0.1 / 0.96).abs() < 1e-15);
        assert!((d.beta3 - 0.1 / 0.96).abs() < 1e-15);
        let arg: f64 = 1.0 + 0.02 / 0.96 - 0.02;
        assert!((d.beta2.abs() - arg.acosh()).abs() < 1e-12);
        // e^{-beta2} = 0.96 fixes the sign
        assert!(((-d.beta2).exp() - 0.96).abs() < 1e-14);
        assert!(rhs_matrix(d).max_abs_diff(&lhs_matrix(0.1, 0.1)) < 1e-12);
    }

    #[test]
    fn lhs_matrix_values() {
        assert_eq!(lhs_matrix(0.0, 0.0), TwoByTwo::identity());
        assert_eq!(lhs_matrix(0.3, 0.0), TwoByTwo::new(1.0, 0.0, -0.6, 1.0));
        assert!(lhs_matrix(0.1, 0.1).max_abs_diff(&TwoByTwo::new(1.0, 0.2, -0.2, 0.96)) < 1e-15);
    }

    #[test]
    fn rhs_matrix_values() {
        let zero = Su11Decomposition { beta1: 0.0, beta2: 0.0, beta3: 0.0 };
        assert_eq!(rhs_matrix(zero), TwoByTwo::identity());
        let d = Su11Decomposition { beta1: 0.25, beta2: 0.0, beta3: 0.0 };
        assert_eq!(rhs_matrix(d), lhs_matrix(0.0, 0.25));
        // closed form [[P - 4 b1 b3 M, 2 b1 M], [-2 b3 M, M]]
        let d = Su11Decomposition { beta1: 0.2, beta2: -0.3, beta3: 0.1 };
        let (p, mm) = (0.3f64.exp().recip(), 0.3f64.exp());
        let want = TwoByTwo::new(p - 4.0 * 0.2 * 0.1 * mm, 0.4 * mm, -0.2 * mm, mm);
        assert!(rhs_matrix(d).max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn matrix_closure_seeded() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 100 {
            let c1: f64 = rng.random_range(-0.5..0.5);
            let c2: f64 = rng.random_range(-0.5..0.5);
            if (1.0 - 4.0 * c1 * c2).abs() <= 0.1 {
                continue;
            }
            let Ok(d) = decompose_su11(c1, c2) else { continue };
            assert!(rhs_matrix(d).max_abs_diff(&lhs_matrix(c1, c2)) < 1e-12, "({c1}, {c2})");
            checked += 1;
        }
    }

    #[test]
    fn decomposition_errors() {
        assert!(matches!(decompose_su11(0.5, 0.5), Err(Error::DegenerateDenominator(_))));
        assert!(matches!(decompose_su11(0.6, 0.6), Err(Error::BranchDomain(_))));
    }

    #[test]
    fn trivial_identity_cases_are_exact() {
        assert!(verify_identity(Identity::PairCreation, 0.0, 0.3, cut(16)).unwrap() < 1e-12);
        assert!(verify_identity(Identity::Hopping, 0.3, 0.0, cut(16)).unwrap() < 1e-12);
        assert!(verify_bch_compose(0.0, 0.2, cut(16)).unwrap() < 1e-12);
        assert!(verify_bch_compose(0.2, 0.0, cut(16)).unwrap() < 1e-12);
    }

    #[test]
    fn su11_identity_on_fock_levels() {
        let probes: Vec<Probe> = (0..=8).map(Probe::Fock).collect();
        let dev = verify_identity_on(Identity::Su11, 0.1, 0.1, cut(48), &probes).unwrap();
        assert!(dev < 1e-8, "{dev}");
        // larger coefficients converge as (4 c1 c2)^k and need a wider guard
        let dev = verify_identity_on(Identity::Su11, -0.25, 0.2, FockCutoff::new(48, 64).unwrap(), &probes).unwrap();
        assert!(dev < 1e-8, "{dev}");
    }

    #[test]
    fn two_mode_identities_hold() {
        for id in [Identity::PairCreation, Identity::Hopping] {
            let dev = verify_identity(id, 0.2, -0.15, cut(24)).unwrap();
            assert!(dev < 1e-8, "{id:?}: {dev}");
        }
        assert!(verify_bch_compose(0.2, 0.2, cut(24)).unwrap() < 1e-8);
    }

    #[test]
    fn deviation_shrinks_with_guard() {
        let small = verify_identity(Identity::Su11, 0.3, 0.3, FockCutoff::new(12, 2).unwrap()).unwrap();
        let large = verify_identity(Identity::Su11, 0.3, 0.3, FockCutoff::new(12, 24).unwrap()).unwrap();
        assert!(large < small, "{large} !< {small}");
    }

    #[test]
    fn coefficients_outside_range_rejected() {
        assert!(verify_identity(Identity::Su11, 0.7, 0.0, cut(8)).is_err());
        assert_eq!(Identity::from_index(2).unwrap(), Identity::Su11);
        assert!(Identity::from_index(4).is_err());
    }
}
