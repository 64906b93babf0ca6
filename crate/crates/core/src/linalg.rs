use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::pauli::PauliOperator;

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Amplitudes below this are treated as exact zeros when sparsifying.
pub const AMPLITUDE_EPS: f64 = 1e-14;

/// `<a|b>`
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm_sqr(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum()
}

/// Unit vector along `v`, or `None` if `v` is numerically zero.
pub fn normalized(v: &[C64]) -> Option<Vec<C64>> {
    let n = norm_sqr(v).sqrt();
    if n < 1e-12 {
        None
    } else {
        Some(v.iter().map(|x| x / n).collect())
    }
}

/// Rotates `v` so its first nonzero amplitude is real and positive.
pub fn fix_global_phase(v: &mut [C64]) {
    if let Some(a) = v.iter().find(|a| a.norm() > 1e-12).copied() {
        let f = a.conj() / a.norm();
        for x in v.iter_mut() {
            *x *= f;
        }
    }
}

/// Removes the components of `v` along the orthonormal `basis`.
pub fn project_out(v: &[C64], basis: &[Vec<C64>]) -> Vec<C64> {
    let mut out = v.to_vec();
    for u in basis {
        let c = inner(u, &out);
        for (o, x) in out.iter_mut().zip(u) {
            *o -= c * x;
        }
    }
    out
}

/// Symmetric (Lowdin) orthonormalization `V S^{-1/2}`.
///
/// Among all orthonormal sets it stays closest to the input vectors, which
/// is what makes it the natural "perturb the stabilizer recovery" choice.
/// Returns `None` if the Gram matrix is numerically singular.
pub fn lowdin(vectors: &[Vec<C64>]) -> Option<Vec<Vec<C64>>> {
    let m = vectors.len();
    if m == 0 {
        return Some(Vec::new());
    }
    let gram = DMatrix::from_fn(m, m, |i, j| inner(&vectors[i], &vectors[j]));
    let eig = gram.symmetric_eigen();
    let max = eig.eigenvalues.iter().cloned().fold(0.0f64, f64::max);
    if max <= 0.0 || eig.eigenvalues.iter().any(|&l| l < 1e-10 * max.max(1.0)) {
        return None;
    }
    let inv_sqrt = DVector::from_iterator(m, eig.eigenvalues.iter().map(|&l| C64::new(1.0 / l.sqrt(), 0.0)));
    let q = &eig.eigenvectors;
    let s = q * DMatrix::from_diagonal(&inv_sqrt) * q.adjoint();
    let dim = vectors[0].len();
    Some(
        (0..m)
            .map(|i| {
                let mut out = vec![ZERO; dim];
                for (j, v) in vectors.iter().enumerate() {
                    let c = s[(j, i)];
                    if c != ZERO {
                        for (o, x) in out.iter_mut().zip(v) {
                            *o += c * x;
                        }
                    }
                }
                out
            })
            .collect(),
    )
}

/// A linear map on state vectors.
pub trait StateMap {
    fn input_dim(&self) -> usize;
    fn apply_to(&self, v: &[C64]) -> Vec<C64>;
}

impl StateMap for DMatrix<C64> {
    fn input_dim(&self) -> usize {
        self.ncols()
    }

    fn apply_to(&self, v: &[C64]) -> Vec<C64> {
        let out = self * DVector::from_column_slice(v);
        out.iter().copied().collect()
    }
}

impl StateMap for PauliOperator {
    fn input_dim(&self) -> usize {
        1 << self.n()
    }

    fn apply_to(&self, v: &[C64]) -> Vec<C64> {
        let mut out = vec![ZERO; v.len()];
        for (j, &a) in v.iter().enumerate() {
            if a != ZERO {
                let (k, f) = self.apply_basis(j);
                out[k] += f * a;
            }
        }
        out
    }
}

/// Sparse vector in a `dim`-dimensional space, entries sorted by index.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SparseVector {
    dim: usize,
    entries: Vec<(usize, C64)>,
}

impl SparseVector {
    pub fn from_dense(v: &[C64]) -> Self {
        SparseVector {
            dim: v.len(),
            entries: v
                .iter()
                .enumerate()
                .filter(|(_, a)| a.norm() > AMPLITUDE_EPS)
                .map(|(j, &a)| (j, a))
                .collect(),
        }
    }

    pub fn basis(dim: usize, j: usize) -> Self {
        SparseVector { dim, entries: vec![(j, ONE)] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, C64)] {
        &self.entries
    }

    pub fn to_dense(&self) -> Vec<C64> {
        let mut out = vec![ZERO; self.dim];
        for &(j, a) in &self.entries {
            out[j] = a;
        }
        out
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|(_, a)| a.norm_sqr()).sum()
    }

    /// `<self|v>`
    pub fn dot_dense(&self, v: &[C64]) -> C64 {
        self.entries.iter().map(|&(j, a)| a.conj() * v[j]).sum()
    }

    /// `<self|other>`
    pub fn dot(&self, other: &SparseVector) -> C64 {
        let (mut i, mut j) = (0, 0);
        let mut acc = ZERO;
        while i < self.entries.len() && j < other.entries.len() {
            let (a, b) = (self.entries[i], other.entries[j]);
            match a.0.cmp(&b.0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc += a.1.conj() * b.1;
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }
}
