//! Numerical kernels shared by the Fock-space oracle and the operator
//! identity checks: a dense matrix exponential (scaling and squaring around a
//! Taylor core), the action of an exponential on a vector for sparse
//! generators, and builders for normally ordered ladder-operator monomials
//! on truncated one- and two-mode spaces.

use std::collections::BTreeMap;

use ndarray::Array2;
use num_complex::Complex64;

const TAYLOR_MAX_TERMS: usize = 60;

/// Maximum absolute column sum.
pub fn one_norm(a: &Array2<Complex64>) -> f64 {
    a.columns()
        .into_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Dense matrix exponential.
///
/// The argument is scaled by `2^-s` until its 1-norm is at most 1/2, the
/// exponential of the scaled matrix is summed as a Taylor series until the
/// next term drops below machine precision, and the result is squared `s`
/// times.
pub fn expm(a: &Array2<Complex64>) -> Array2<Complex64> {
    assert_eq!(a.nrows(), a.ncols(), "expm needs a square matrix");
    let n = a.nrows();
    let norm = one_norm(a);
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let scale = 0.5f64.powi(squarings);
    let scaled = a.mapv(|z| z * scale);

    let mut result = Array2::<Complex64>::eye(n);
    let mut term = Array2::<Complex64>::eye(n);
    for k in 1..=TAYLOR_MAX_TERMS {
        term = term.dot(&scaled).mapv(|z| z / k as f64);
        result += &term;
        let tn = one_norm(&term);
        if tn == 0.0 || tn < 1e-18 * one_norm(&result) {
            break;
        }
    }
    for _ in 0..squarings {
        result = result.dot(&result);
    }
    result
}

/// Compressed sparse row matrix over `Complex64`.
#[derive(Debug, Clone)]
pub struct SparseMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<Complex64>,
}

impl SparseMatrix {
    /// Builds the matrix from `(row, col, value)` triplets; duplicates are
    /// summed and exact zeros dropped.
    pub fn from_triplets(dim: usize, triplets: impl IntoIterator<Item = (usize, usize, Complex64)>) -> Self {
        let mut acc: BTreeMap<(usize, usize), Complex64> = BTreeMap::new();
        for (r, c, v) in triplets {
            assert!(r < dim && c < dim, "triplet ({r}, {c}) outside dimension {dim}");
            *acc.entry((r, c)).or_default() += v;
        }
        let mut row_ptr = vec![0usize; dim + 1];
        let mut cols = Vec::with_capacity(acc.len());
        let mut vals = Vec::with_capacity(acc.len());
        for ((r, c), v) in acc {
            if v == Complex64::new(0.0, 0.0) {
                continue;
            }
            row_ptr[r + 1] += 1;
            cols.push(c);
            vals.push(v);
        }
        for r in 0..dim {
            row_ptr[r + 1] += row_ptr[r];
        }
        Self { dim, row_ptr, cols, vals }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// `out = self * x`
    pub fn mul_vec_into(&self, x: &[Complex64], out: &mut [Complex64]) {
        for r in 0..self.dim {
            let mut s = Complex64::new(0.0, 0.0);
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                s += self.vals[k] * x[self.cols[k]];
            }
            out[r] = s;
        }
    }

    /// Maximum absolute column sum.
    pub fn one_norm(&self) -> f64 {
        let mut sums = vec![0.0; self.dim];
        for (c, v) in self.cols.iter().zip(&self.vals) {
            sums[*c] += v.norm();
        }
        sums.into_iter().fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> Array2<Complex64> {
        let mut out = Array2::zeros((self.dim, self.dim));
        for r in 0..self.dim {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                out[[r, self.cols[k]]] = self.vals[k];
            }
        }
        out
    }
}

fn max_abs(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Computes `exp(G) v` without forming `exp(G)`.
///
/// `G` is split into `s` equal steps with `||G||_1 / s <= 1`; each step sums
/// the Taylor series of the step exponential applied to the running vector.
pub fn expm_multiply(g: &SparseMatrix, v: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(g.dim(), v.len());
    let norm = g.one_norm();
    let steps = norm.ceil().max(1.0) as usize;
    let inv = 1.0 / steps as f64;

    let mut w = v.to_vec();
    let mut term = vec![Complex64::new(0.0, 0.0); v.len()];
    let mut next = vec![Complex64::new(0.0, 0.0); v.len()];
    for _ in 0..steps {
        term.copy_from_slice(&w);
        let mut small_in_a_row = 0;
        for k in 1..=TAYLOR_MAX_TERMS {
            g.mul_vec_into(&term, &mut next);
            let f = inv / k as f64;
            for (t, n) in term.iter_mut().zip(&next) {
                *t = n * f;
            }
            for (wi, t) in w.iter_mut().zip(&term) {
                *wi += t;
            }
            let tn = max_abs(&term);
            if tn == 0.0 {
                break;
            }
            if tn <= 1e-18 * max_abs(&w) {
                small_in_a_row += 1;
                if small_in_a_row == 2 {
                    break;
                }
            } else {
                small_in_a_row = 0;
            }
        }
    }
    w
}

/// A normally ordered monomial `coeff * a†^a_dag a^a * b†^b_dag b^b` over
/// two bosonic modes. Single-mode operators leave the `b` powers at zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monomial {
    pub coeff: Complex64,
    pub a_dag: u32,
    pub a: u32,
    pub b_dag: u32,
    pub b: u32,
}

impl Monomial {
    pub fn new(coeff: impl Into<Complex64>, a_dag: u32, a: u32, b_dag: u32, b: u32) -> Self {
        Self { coeff: coeff.into(), a_dag, a, b_dag, b }
    }

    /// `a†^dag a^ann` on level `n`: returns the target level and the matrix
    /// element, or `None` when the level is annihilated or leaves `dim`.
    fn single(n: usize, dag: u32, ann: u32, dim: usize) -> Option<(usize, f64)> {
        let ann = ann as usize;
        let dag = dag as usize;
        if n < ann {
            return None;
        }
        let mid = n - ann;
        let target = mid + dag;
        if target >= dim {
            return None;
        }
        // sqrt(n!/(n-ann)!) * sqrt(target!/mid!)
        let mut w = 1.0;
        for k in (mid + 1)..=n {
            w *= (k as f64).sqrt();
        }
        for k in (mid + 1)..=target {
            w *= (k as f64).sqrt();
        }
        Some((target, w))
    }
}

/// Truncated matrix of a sum of monomials on `dim_a x dim_b` levels, using
/// the row-major index `n_a * dim_b + n_b`. Matrix elements that would leave
/// the truncated space are dropped.
pub fn generator(dim_a: usize, dim_b: usize, terms: &[Monomial]) -> SparseMatrix {
    let dim = dim_a * dim_b;
    let mut triplets = Vec::new();
    for na in 0..dim_a {
        for nb in 0..dim_b {
            let col = na * dim_b + nb;
            for t in terms {
                let Some((ta, wa)) = Monomial::single(na, t.a_dag, t.a, dim_a) else { continue };
                let Some((tb, wb)) = Monomial::single(nb, t.b_dag, t.b, dim_b) else { continue };
                triplets.push((ta * dim_b + tb, col, t.coeff * (wa * wb)));
            }
        }
    }
    SparseMatrix::from_triplets(dim, triplets)
}
