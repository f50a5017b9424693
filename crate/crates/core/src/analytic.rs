//! Closed-form photon-number statistics.
//!
//! # Displaced two-mode squeezed vacuum
//!
//! For `|psi> = D1(z1) D2(z2) S12(r) |0, 0>` with `t = tanh r`,
//! `p = min(n1, n2)`, `q = max(n1, n2)`:
//!
//! ```text
//! <n1, n2|psi> = t^p / cosh r * sqrt(p!/q!) * mu1^(n1-p) * mu2^(n2-p)
//!              * L_p^(q-p)(-mu1 mu2 / t) * exp(-(conj(z1) mu1 + conj(z2) mu2) / 2)
//! mu1 = z1 - conj(z2) t,   mu2 = z2 - conj(z1) t
//! ```
//!
//! This is the commonly quoted generalised-Laguerre form with two
//! corrections that the brute-force oracle in [`crate::fock`] pins down:
//! the cross terms in `mu1`, `mu2` carry a minus sign for
//! `S12(r) = exp(r (a† b† - a b))`, and the power of `mu2` is `n2 - p`
//! (not `n2 - q`), so exactly one of the two powers is nonzero. The
//! exponential is kept complex inside the modulus.
//!
//! # Locally squeezed two-mode squeezed vacuum
//!
//! For `|psi> = S1(r+) S2(r-) S12(r) |0, 0>` with
//! `S(r) = exp(r (a^2 - a†^2) / 2)` the state is
//! `sqrt(M/K) exp(-ln cosh r+ n1 - ln cosh r- n2) exp(e+ a†^2 + e- b†^2 + e2 a† b†) |0, 0>`
//! and
//!
//! ```text
//! <n1, n2|psi> = sqrt(M/K) sqrt(n1! n2!) cosh^-n1 r+ cosh^-n2 r-
//!              * sum_j e2^j e+^((n1-j)/2) e-^((n2-j)/2) / (j! ((n1-j)/2)! ((n2-j)/2)!)
//! ```
//!
//! with `j` running over `n1 mod 2, n1 mod 2 + 2, ..., min(n1, n2)`. The
//! amplitude vanishes unless `n1 + n2` is even. `d1..d4`, `e2` and `K` are
//! the usual reordering constants; `M = exp(beta2(d3, d4)) = 1 / (1 - 4 d3 d4)`
//! comes from the SU(1,1) disentangling in [`crate::lie`]. The local squeeze
//! coefficients are
//!
//! ```text
//! e+ = M cosh^2 r+ (-tanh r+ / 2 + tanh r- tanh^2 r / 2)
//! e- = M cosh^2 r- (-tanh r- / 2 + tanh r+ tanh^2 r / 2)
//! ```
//!
//! which reduce to the familiar `-tanh r± cosh^2 r± / 2` when the other
//! local squeeze is off.

use std::ops::{Add, Mul, Sub};
use std::sync::OnceLock;

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::fock::{JointDistribution, R_MAX};
use crate::lie;

const LN_FACTORIAL_TABLE: usize = 4096;

fn ln_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(LN_FACTORIAL_TABLE);
        let mut acc = 0.0;
        t.push(0.0);
        for k in 1..LN_FACTORIAL_TABLE {
            acc += (k as f64).ln();
            t.push(acc);
        }
        t
    })
}

/// `ln n! = ln Gamma(n + 1)`.
pub fn ln_factorial(n: usize) -> f64 {
    if n < LN_FACTORIAL_TABLE {
        return ln_factorial_table()[n];
    }
    // Stirling series, far past the point where it is exact to f64
    let x = n as f64;
    x * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI * x).ln() + 1.0 / (12.0 * x) - 1.0 / (360.0 * x.powi(3))
}

/// Two-mode squeezed vacuum coefficient `tanh^n r / cosh r`.
pub fn tmsv_coefficient(r: f64, n: usize) -> f64 {
    r.tanh().powi(n as i32) / r.cosh()
}

/// Generalised Laguerre polynomial `L_p^(a)(x)` from the three-term
/// recurrence in `p`. Works for real or complex arguments.
pub fn laguerre<T>(p: usize, a: i64, x: T) -> T
where
    T: Copy + From<f64> + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Mul<f64, Output = T>,
{
    let one = T::from(1.0);
    if p == 0 {
        return one;
    }
    let a = a as f64;
    let mut prev = one;
    let mut cur = T::from(1.0 + a) - x;
    for k in 1..p {
        let k = k as f64;
        let next = ((T::from(2.0 * k + 1.0 + a) - x) * cur - prev * (k + a)) * (1.0 / (k + 1.0));
        prev = cur;
        cur = next;
    }
    cur
}

fn check_r(name: &str, r: f64) -> Result<()> {
    if !r.is_finite() || r.abs() > R_MAX {
        return Err(invalid(format!("{name} = {r} outside [-{R_MAX}, {R_MAX}]")));
    }
    Ok(())
}

fn clamp_prob(p: f64) -> f64 {
    if p.abs() < 1e-300 {
        0.0
    } else {
        p
    }
}

/// `<n1, n2| D1(z1) D2(z2) S12(r) |0, 0>`.
pub fn displaced_amplitude(r: f64, z1: Complex64, z2: Complex64, n1: usize, n2: usize) -> Complex64 {
    let t = r.tanh();
    if t.abs() < 1e-12 {
        // product of coherent states
        let ln_mag = -0.5 * (z1.norm_sqr() + z2.norm_sqr()) - 0.5 * (ln_factorial(n1) + ln_factorial(n2));
        return z1.powi(n1 as i32) * z2.powi(n2 as i32) * ln_mag.exp();
    }
    let mu1 = z1 - z2.conj() * t;
    let mu2 = z2 - z1.conj() * t;
    let (p, q) = (n1.min(n2), n1.max(n2));
    let prefactor = (-(z1.conj() * mu1 + z2.conj() * mu2) * 0.5).exp() / r.cosh();
    let ratio = (0.5 * (ln_factorial(p) - ln_factorial(q))).exp();
    let x = -(mu1 * mu2) / t;
    prefactor
        * (t.powi(p as i32) * ratio)
        * mu1.powi((n1 - p) as i32)
        * mu2.powi((n2 - p) as i32)
        * laguerre(p, (q - p) as i64, x)
}

/// `Pr(N1 = n1, N2 = n2 | z1, z2)` for the displaced two-mode squeezed vacuum.
pub fn displaced_prob(r: f64, z1: Complex64, z2: Complex64, n1: usize, n2: usize) -> f64 {
    clamp_prob(displaced_amplitude(r, z1, z2, n1, n2).norm_sqr())
}

/// Full displaced-state distribution on `0..=n_max` per mode; the weight
/// outside the grid is inferred from normalisation.
///
/// Works along each diagonal `n1 - n2 = const` with the recurrence for
/// `t^p L_p^(a)(-mu1 mu2 / t)`, which stays finite as `t -> 0`.
pub fn displaced_distribution(r: f64, z1: Complex64, z2: Complex64, n_max: usize) -> Result<JointDistribution> {
    check_r("r", r)?;
    let t = r.tanh();
    let mu1 = z1 - z2.conj() * t;
    let mu2 = z2 - z1.conj() * t;
    let y = mu1 * mu2;
    let prefactor = (-(z1.conj() * mu1 + z2.conj() * mu2) * 0.5).exp() / r.cosh();
    let dim = n_max + 1;
    let mut probs = Array2::<f64>::zeros((dim, dim));
    for a in 0..dim {
        for (mu, first_is_larger) in [(mu1, true), (mu2, false)] {
            if a == 0 && !first_is_larger {
                continue;
            }
            if a > 0 && mu.norm() == 0.0 {
                continue;
            }
            // sqrt(p!/(p+a)!) mu^a at p = 0, then advanced by sqrt(p/(p+a))
            let mut head = if a == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::from_polar((a as f64 * mu.norm().ln() - 0.5 * ln_factorial(a)).exp(), a as f64 * mu.arg())
            };
            let af = a as f64;
            let mut prev = Complex64::new(0.0, 0.0);
            let mut cur = Complex64::new(1.0, 0.0);
            for p in 0..(dim - a) {
                if p > 0 {
                    head *= (p as f64 / (p as f64 + af)).sqrt();
                    let k = (p - 1) as f64;
                    let next = if p == 1 {
                        Complex64::new(t * (1.0 + af), 0.0) + y
                    } else {
                        ((y + (2.0 * k + 1.0 + af) * t) * cur - prev * ((k + af) * t * t)) / (k + 1.0)
                    };
                    prev = cur;
                    cur = next;
                }
                let amp = prefactor * head * cur;
                let (n1, n2) = if first_is_larger { (p + a, p) } else { (p, p + a) };
                probs[[n1, n2]] = clamp_prob(amp.norm_sqr());
            }
        }
    }
    JointDistribution::with_inferred_tail(probs)
}

/// Two-mode squeeze `r` and the local squeezes `r_plus` (mode 1) and
/// `r_minus` (mode 2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeParams {
    pub r: f64,
    pub r_plus: f64,
    pub r_minus: f64,
}

impl SqueezeParams {
    pub fn new(r: f64, r_plus: f64, r_minus: f64) -> Result<Self> {
        check_r("r", r)?;
        check_r("r_plus", r_plus)?;
        check_r("r_minus", r_minus)?;
        Ok(Self { r, r_plus, r_minus })
    }
}

/// Reordering constants of the locally squeezed state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeConstants {
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub d4: f64,
    pub e_plus: f64,
    pub e_minus: f64,
    pub e_two: f64,
    /// `cosh^2 r cosh r+ cosh r-`
    pub k: f64,
    pub m: f64,
}

pub fn squeeze_constants(params: SqueezeParams) -> Result<SqueezeConstants> {
    let SqueezeParams { r, r_plus, r_minus } = SqueezeParams::new(params.r, params.r_plus, params.r_minus)?;
    let t = r.tanh();
    let (tp, tm) = (r_plus.tanh(), r_minus.tanh());
    let (cp, cm) = (r_plus.cosh(), r_minus.cosh());

    let d1 = t * tm;
    let d3 = 0.5 * tm;
    let d4 = 0.5 * tp * t * t;
    let den = 1.0 - 4.0 * d3 * d4;
    if den.abs() < 1e-12 {
        return Err(Error::DegenerateDenominator(den));
    }
    let d2 = d4 / den;
    let m = lie::decompose_su11(d3, d4)?.beta2.exp();
    let k = r.cosh().powi(2) * cp * cm;
    let e_two = t + 2.0 * d1 * d2;
    let e_plus = m * cp * cp * (-0.5 * tp + 0.5 * tm * t * t);
    let e_minus = m * cm * cm * (-0.5 * tm + 0.5 * tp * t * t);
    Ok(SqueezeConstants { d1, d2, d3, d4, e_plus, e_minus, e_two, k, m })
}

/// Per-state coefficients of the finite sum, with the `cosh^-n` factors
/// folded into the bases.
struct SqueezedSum {
    norm: f64,
    pair1: f64,
    pair2: f64,
    cross: f64,
}

impl SqueezedSum {
    fn new(params: SqueezeParams) -> Result<Self> {
        let c = squeeze_constants(params)?;
        let (cp, cm) = (params.r_plus.cosh(), params.r_minus.cosh());
        Ok(Self { norm: (c.m / c.k).sqrt(), pair1: c.e_plus / (cp * cp), pair2: c.e_minus / (cm * cm), cross: c.e_two / (cp * cm) })
    }

    fn amplitude(&self, n1: usize, n2: usize) -> f64 {
        if (n1 + n2) % 2 == 1 {
            return 0.0;
        }
        let half_ln = 0.5 * (ln_factorial(n1) + ln_factorial(n2));
        let mut sum = 0.0;
        let mut j = n1 % 2;
        while j <= n1.min(n2) {
            let (i1, i2) = ((n1 - j) / 2, (n2 - j) / 2);
            if let Some(term) = signed_power_term(&[(self.cross, j), (self.pair1, i1), (self.pair2, i2)]) {
                let (sign, ln_mag) = term;
                let ln = ln_mag + half_ln - ln_factorial(j) - ln_factorial(i1) - ln_factorial(i2);
                sum += sign * ln.exp();
            }
            j += 2;
        }
        self.norm * sum
    }
}

/// `prod base^exp` as `(sign, ln|value|)`, or `None` if it is exactly zero.
fn signed_power_term(factors: &[(f64, usize)]) -> Option<(f64, f64)> {
    let mut sign = 1.0;
    let mut ln = 0.0;
    for &(base, exp) in factors {
        if exp == 0 {
            continue;
        }
        if base == 0.0 {
            return None;
        }
        if base < 0.0 && exp % 2 == 1 {
            sign = -sign;
        }
        ln += exp as f64 * base.abs().ln();
    }
    Some((sign, ln))
}

/// `<n1, n2| S1(r+) S2(r-) S12(r) |0, 0>`; real for real parameters.
pub fn squeezed_amplitude(params: SqueezeParams, n1: usize, n2: usize) -> Result<f64> {
    Ok(SqueezedSum::new(params)?.amplitude(n1, n2))
}

/// `Pr_squeeze(N1 = n1, N2 = n2 | r+, r-)`.
pub fn squeezed_prob(params: SqueezeParams, n1: usize, n2: usize) -> Result<f64> {
    squeezed_amplitude(params, n1, n2).map(|a| clamp_prob(a * a))
}

/// Full locally squeezed distribution on `0..=n_max` per mode.
///
/// Summing the finite series term by term (or filling the grid from the
/// ladder relations) loses all precision at large counts once the two pair
/// coefficients differ in sign. Along a diagonal `n1 = n2 + 2d` the series
/// `H_p = sum_i Z^(p-2i) (XY)^i / ((p-2i)! i! (d+i)!)` with `X`, `Y`, `Z` the
/// pair coefficients `e±/cosh^2 r±`, `e2/(cosh r+ cosh r-)` obeys
///
/// ```text
/// (p+1)(p+2d+1) H_{p+1} = (2p+2d+1) Z H_p - (Z^2 - 4XY) H_{p-1}
/// ```
///
/// which is run here on `sqrt(p! (p+2d)!) X^d H_p` and stays accurate.
pub fn squeezed_distribution(params: SqueezeParams, n_max: usize) -> Result<JointDistribution> {
    let sum = SqueezedSum::new(params)?;
    let dim = n_max + 1;
    let z = sum.cross;
    let gap = z * z - 4.0 * sum.pair1 * sum.pair2;
    let mut probs = Array2::<f64>::zeros((dim, dim));
    for d in 0..=n_max / 2 {
        for (pair, first_is_larger) in [(sum.pair1, true), (sum.pair2, false)] {
            if d == 0 && !first_is_larger {
                continue;
            }
            if d > 0 && pair == 0.0 {
                continue;
            }
            let df = d as f64;
            // sqrt((2d)!) pair^d / d!
            let mut cur = if d == 0 {
                1.0
            } else {
                let sign = if pair < 0.0 && d % 2 == 1 { -1.0 } else { 1.0 };
                sign * (df * pair.abs().ln() + 0.5 * ln_factorial(2 * d) - ln_factorial(d)).exp()
            };
            let mut prev = 0.0;
            for p in 0..(dim - 2 * d) {
                let (n1, n2) = if first_is_larger { (p + 2 * d, p) } else { (p, p + 2 * d) };
                let amp = sum.norm * cur;
                probs[[n1, n2]] = clamp_prob(amp * amp);
                let pf = p as f64;
                let up = (pf + 1.0) * (pf + 2.0 * df + 1.0);
                let next = (2.0 * pf + 2.0 * df + 1.0) * z * cur / up.sqrt() - gap * prev * (pf * (pf + 2.0 * df) / up).sqrt();
                prev = cur;
                cur = next;
            }
        }
    }
    JointDistribution::with_inferred_tail(probs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    /// Explicit sum `L_p^(a)(x) = sum_k (-1)^k C(p+a, p-k) x^k / k!`.
    fn laguerre_explicit(p: usize, a: usize, x: f64) -> f64 {
        let binom = |n: usize, k: usize| -> f64 { (0..k).map(|i| (n - i) as f64 / (i + 1) as f64).product() };
        (0..=p)
            .map(|k| {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                sign * binom(p + a, p - k) * x.powi(k as i32) / (1..=k).map(|i| i as f64).product::<f64>()
            })
            .sum()
    }

    #[test]
    fn ln_factorial_values() {
        assert_eq!(ln_factorial(0), 0.0);
        assert_eq!(ln_factorial(1), 0.0);
        assert!((ln_factorial(5) - 120f64.ln()).abs() < 1e-14);
        // across the table / Stirling boundary
        let direct: f64 = (1..=5000).map(|k| (k as f64).ln()).sum();
        assert!((ln_factorial(5000) - direct).abs() / direct < 1e-13);
    }

    #[test]
    fn tmsv_coefficient_values() {
        assert_eq!(tmsv_coefficient(0.0, 0), 1.0);
        assert_eq!(tmsv_coefficient(0.0, 3), 0.0);
        assert!((tmsv_coefficient(1.0, 1) - 1f64.tanh() / 1f64.cosh()).abs() < 1e-16);
    }

    #[test]
    fn laguerre_low_orders() {
        for &(a, x) in &[(0i64, 0.3), (3, -1.2), (-1, 2.0), (5, 7.5)] {
            assert_eq!(laguerre(0, a, x), 1.0);
            assert!((laguerre(1, a, x) - (1.0 + a as f64 - x)).abs() < 1e-14);
        }
        assert!((laguerre(2, 0, 2.0) - (-1.0)).abs() < 1e-14);
    }

    #[test]
    fn laguerre_recurrence_matches_expansion() {
        for p in 0..=6 {
            for a in 0..=5 {
                for &x in &[-3.0, -0.4, 0.0, 0.7, 2.5, 6.0] {
                    let want = laguerre_explicit(p, a, x);
                    let got = laguerre(p, a as i64, x);
                    assert!((got - want).abs() <= 1e-10 * want.abs().max(1.0), "L_{p}^({a})({x}): {got} vs {want}");
                }
            }
        }
    }

    #[test]
    fn laguerre_complex_argument_matches_real_on_axis() {
        let z = laguerre(5, 2, c(1.3));
        assert!((z.re - laguerre(5, 2, 1.3)).abs() < 1e-13 && z.im == 0.0);
    }

    #[test]
    fn undisplaced_reduces_to_tmsv() {
        let r: f64 = 0.7;
        for n1 in 0..8 {
            for n2 in 0..8 {
                let want = if n1 == n2 { r.tanh().powi(2 * n1 as i32) / r.cosh().powi(2) } else { 0.0 };
                assert!((displaced_prob(r, c(0.0), c(0.0), n1, n2) - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn zero_squeeze_is_coherent_product() {
        let (z1, z2) = (Complex64::new(0.4, -0.3), c(-0.9));
        for n1 in 0..6 {
            for n2 in 0..6 {
                let poisson = |z: Complex64, n: usize| {
                    (-z.norm_sqr()).exp() * z.norm_sqr().powi(n as i32) / ln_factorial(n).exp()
                };
                let want = poisson(z1, n1) * poisson(z2, n2);
                assert!((displaced_prob(0.0, z1, z2, n1, n2) - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn displaced_exchange_symmetry() {
        let (z1, z2) = (Complex64::new(0.3, 0.2), Complex64::new(-0.5, 0.1));
        for n1 in 0..9 {
            for n2 in 0..9 {
                let a = displaced_prob(0.9, z1, z2, n1, n2);
                let b = displaced_prob(0.9, z2, z1, n2, n1);
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn grid_recurrence_matches_pointwise_formula() {
        for &(r, z1, z2) in &[
            (0.5, c(0.3), c(-0.3)),
            (1.2, Complex64::new(0.2, 0.4), c(1.0)),
            (0.0, c(0.5), c(0.2)),
            (1e-14, c(0.5), c(0.2)),
        ] {
            let d = displaced_distribution(r, z1, z2, 30).unwrap();
            for n1 in 0..=30 {
                for n2 in 0..=30 {
                    let p = displaced_prob(r, z1, z2, n1, n2);
                    assert!((d.prob(n1, n2) - p).abs() < 1e-13, "r={r} ({n1},{n2})");
                }
            }
        }
    }

    #[test]
    fn displaced_normalisation() {
        for &(r, z) in &[(0.5, 1.0), (1.0, -0.5), (1.5, 1.0)] {
            let d = displaced_distribution(r, c(z), c(0.2), 160).unwrap();
            assert!((d.total() - 1.0).abs() < 1e-8, "r={r}: {}", d.total());
        }
    }

    #[test]
    fn constants_with_local_squeezing_off() {
        let r: f64 = 0.8;
        let k = squeeze_constants(SqueezeParams::new(r, 0.0, 0.0).unwrap()).unwrap();
        assert_eq!((k.d1, k.d2, k.d3, k.d4), (0.0, 0.0, 0.0, 0.0));
        assert_eq!((k.e_plus, k.e_minus), (0.0, 0.0));
        assert!((k.e_two - r.tanh()).abs() < 1e-16);
        assert!((k.k - r.cosh().powi(2)).abs() < 1e-15);
        assert_eq!(k.m, 1.0);
    }

    #[test]
    fn constants_without_two_mode_squeeze() {
        let k = squeeze_constants(SqueezeParams::new(0.0, 0.4, -0.3).unwrap()).unwrap();
        assert_eq!((k.d1, k.d2, k.d4, k.e_two), (0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn squeezed_reduces_to_tmsv() {
        let r: f64 = 0.6;
        let p = SqueezeParams::new(r, 0.0, 0.0).unwrap();
        for n1 in 0..8 {
            for n2 in 0..8 {
                let want = if n1 == n2 { r.tanh().powi(2 * n1 as i32) / r.cosh().powi(2) } else { 0.0 };
                assert!((squeezed_prob(p, n1, n2).unwrap() - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn squeezed_odd_total_vanishes() {
        let p = SqueezeParams::new(0.5, 0.3, -0.3).unwrap();
        assert_eq!(squeezed_prob(p, 1, 2).unwrap(), 0.0);
        assert_eq!(squeezed_prob(p, 4, 7).unwrap(), 0.0);
        assert!(squeezed_prob(p, 2, 0).unwrap() > 0.0);
    }

    #[test]
    fn squeezed_normalisation() {
        for &(r, rp, rm) in &[(0.5, 0.5, -0.5), (1.0, 0.2, 0.5), (1.25, -0.5, -0.2)] {
            let d = squeezed_distribution(SqueezeParams::new(r, rp, rm).unwrap(), 200).unwrap();
            assert!((d.total() - 1.0).abs() < 1e-9, "{r} {rp} {rm}: {}", d.total());
        }
    }

    #[test]
    fn diagonal_grid_matches_finite_sum() {
        for &(r, rp, rm) in &[(0.5, 0.3, -0.3), (1.0, 0.4, -0.7), (1.25, -0.5, 0.2), (0.0, 0.6, 0.1)] {
            let p = SqueezeParams::new(r, rp, rm).unwrap();
            let d = squeezed_distribution(p, 16).unwrap();
            for n1 in 0..=16 {
                for n2 in 0..=16 {
                    let want = squeezed_prob(p, n1, n2).unwrap();
                    assert!((d.prob(n1, n2) - want).abs() < 1e-13, "{r} {rp} {rm} ({n1},{n2})");
                }
            }
        }
    }

    #[test]
    fn diagonal_grid_stays_normalised_with_sign_changes() {
        for &(r, rp, rm) in &[(1.0, 0.4, -0.7), (1.25, 1.0, -1.0)] {
            let d = squeezed_distribution(SqueezeParams::new(r, rp, rm).unwrap(), 512).unwrap();
            assert!((d.total() - 1.0).abs() < 1e-9, "{}", d.total());
        }
    }

    #[test]
    fn out_of_range_parameters_rejected() {
        assert!(SqueezeParams::new(2.5, 0.0, 0.0).is_err());
        assert!(SqueezeParams::new(0.5, f64::NAN, 0.0).is_err());
        assert!(displaced_distribution(3.0, c(0.0), c(0.0), 4).is_err());
    }
}
