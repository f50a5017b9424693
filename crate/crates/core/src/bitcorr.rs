//! Bits of occupation numbers and same-index bit correlators.
//!
//! Bit `y` (1 = least significant) of each mode's count is read out as a
//! sign, `0 -> +1` and `1 -> -1`, and the correlator is the expectation of
//! the product of the two signs over the retained grid. Probability outside
//! the grid is not renormalised away; it can move the correlator by at most
//! one per unit mass in either direction, so `err = 2 * tail_mass`.

use crate::error::{invalid, Result};
use crate::fock::JointDistribution;

/// Bit position, 1 = least significant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitIndex(u32);

impl BitIndex {
    /// Highest bit addressable in a `u64` count.
    pub const MAX: u32 = 64;

    pub fn new(y: u32) -> Result<Self> {
        if y == 0 || y > Self::MAX {
            return Err(invalid(format!("bit index {y} not in 1..={}", Self::MAX)));
        }
        Ok(Self(y))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BitValue {
    Plus,
    Minus,
}

impl BitValue {
    pub fn from_bit(b: u8) -> Self {
        if b == 0 {
            BitValue::Plus
        } else {
            BitValue::Minus
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            BitValue::Plus => 1.0,
            BitValue::Minus => -1.0,
        }
    }
}

/// The `y`-th least significant binary digit of `n`.
pub fn bit(n: u64, y: BitIndex) -> u8 {
    ((n >> (y.0 - 1)) & 1) as u8
}

fn sign(n: usize, y: BitIndex) -> f64 {
    BitValue::from_bit(bit(n as u64, y)).sign()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correlation {
    pub value: f64,
    /// bound on the change from probability outside the grid
    pub err: f64,
}

/// `E[a_y b_y]` with the fixed `0 -> +1` encoding.
pub fn correlator(dist: &JointDistribution, y: BitIndex) -> Correlation {
    let probs = dist.probs();
    let signs: Vec<f64> = (0..probs.ncols().max(probs.nrows())).map(|n| sign(n, y)).collect();
    let mut value = 0.0;
    for ((n1, n2), &p) in probs.indexed_iter() {
        value += p * signs[n1] * signs[n2];
    }
    Correlation { value, err: 2.0 * dist.tail_mass() }
}

/// Second-bit correlator as agreement minus disagreement, with counts split
/// into `{0, 1, 4, 5, 8, 9, ...}` (bit 0) and `{2, 3, 6, 7, ...}` (bit 1).
pub fn correlator_partition_y2(dist: &JointDistribution) -> f64 {
    let zero_bit = |n: usize| n % 4 < 2;
    let probs = dist.probs();
    let mut disagree = 0.0;
    for ((n1, n2), &p) in probs.indexed_iter() {
        if zero_bit(n1) != zero_bit(n2) {
            disagree += p;
        }
    }
    dist.total() - 2.0 * disagree
}

/// Third-bit correlator with counts written as `4i + j`, `j < 4`: the bit is
/// the parity of `i`, so outcomes disagree when `i` and `l` in
/// `(4i + j, 4l + s)` have opposite parity.
pub fn correlator_partition_y3(dist: &JointDistribution) -> f64 {
    let probs = dist.probs();
    let (rows, cols) = probs.dim();
    let mut disagree = 0.0;
    for i in 0..rows.div_ceil(4) {
        for l in 0..cols.div_ceil(4) {
            if i % 2 == l % 2 {
                continue;
            }
            for j in 0..4 {
                for s in 0..4 {
                    let (n1, n2) = (4 * i + j, 4 * l + s);
                    if n1 < rows && n2 < cols {
                        disagree += probs[[n1, n2]];
                    }
                }
            }
        }
    }
    dist.total() - 2.0 * disagree
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;
    use proptest::prelude::*;

    fn y(v: u32) -> BitIndex {
        BitIndex::new(v).unwrap()
    }

    fn point(n1: usize, n2: usize, dim: usize) -> JointDistribution {
        let mut p = Array2::zeros((dim, dim));
        p[[n1, n2]] = 1.0;
        JointDistribution::new(p, 0.0).unwrap()
    }

    #[test]
    fn bits_of_six_and_two() {
        assert_eq!(bit(6, y(1)), 0);
        assert_eq!(bit(6, y(2)), 1);
        assert_eq!(bit(6, y(3)), 1);
        assert_eq!(bit(2, y(2)), 1);
        assert_eq!(bit(u64::MAX, y(64)), 1);
        assert!(BitIndex::new(0).is_err());
        assert!(BitIndex::new(65).is_err());
    }

    #[test]
    fn diagonal_support_is_perfectly_correlated() {
        let mut p = Array2::zeros((9, 9));
        for n in 0..9 {
            p[[n, n]] = 1.0 / 9.0;
        }
        let d = JointDistribution::new(p, 0.0).unwrap();
        for v in 1..=5 {
            assert!((correlator(&d, y(v)).value - 1.0).abs() < 1e-15);
        }
        assert!((correlator_partition_y2(&d) - 1.0).abs() < 1e-15);
        assert!((correlator_partition_y3(&d) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn opposite_second_bits() {
        let d = point(0, 2, 4);
        assert_eq!(correlator(&d, y(2)).value, -1.0);
        assert_eq!(correlator(&d, y(1)).value, 1.0);
        assert_eq!(correlator_partition_y2(&d), -1.0);
        let d = point(3, 5, 8);
        assert_eq!(correlator_partition_y3(&d), -1.0);
    }

    #[test]
    fn tail_sets_error() {
        let mut p = Array2::zeros((2, 2));
        p[[0, 0]] = 0.9;
        let d = JointDistribution::new(p, 0.1).unwrap();
        let c = correlator(&d, y(1));
        assert!((c.value - 0.9).abs() < 1e-15);
        assert!((c.err - 0.2).abs() < 1e-15);
    }

    fn random_grid() -> impl Strategy<Value = JointDistribution> {
        proptest::collection::vec(0.0f64..1.0, 144).prop_map(|w| {
            let s: f64 = w.iter().sum();
            let p = Array2::from_shape_vec((12, 12), w.into_iter().map(|x| x / s).collect()).unwrap();
            JointDistribution::new(p, 0.0).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 100, rng_seed: proptest::test_runner::RngSeed::Fixed(7), ..ProptestConfig::default() })]

        #[test]
        fn partition_forms_match_sign_products(d in random_grid()) {
            prop_assert!((correlator_partition_y2(&d) - correlator(&d, y(2)).value).abs() < 1e-12);
            prop_assert!((correlator_partition_y3(&d) - correlator(&d, y(3)).value).abs() < 1e-12);
        }

        #[test]
        fn correlator_bounded(d in random_grid(), v in 1u32..6) {
            let c = correlator(&d, y(v));
            prop_assert!(c.value.abs() <= 1.0 + c.err + 1e-12);
        }

        #[test]
        fn encoding_flip_leaves_correlator(d in random_grid(), v in 1u32..6) {
            let flipped: f64 = d.probs().indexed_iter().map(|((a, b), p)| p * (-sign(a, y(v))) * (-sign(b, y(v)))).sum();
            prop_assert!((flipped - correlator(&d, y(v)).value).abs() < 1e-14);
        }
    }
}
