//! Dense reference computations used as oracles by the integration tests.
//! Nothing here goes through the library's sparse kernels.
#![allow(dead_code)]

use ampdamp::codes::{pair_code, pair_layout};
use ampdamp::{PauliOperator, RecoveryOperation, StabilizerCode, StabilizerGroup, StateMap, C64};
use nalgebra::{DMatrix, Matrix2};

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn damping_matrices(gamma: f64) -> [Matrix2<C64>; 2] {
    let e0 = Matrix2::new(c(1.0), c(0.0), c(0.0), c((1.0 - gamma).sqrt()));
    let e1 = Matrix2::new(c(0.0), c(gamma.sqrt()), c(0.0), c(0.0));
    [e0, e1]
}

pub fn lowering() -> Matrix2<C64> {
    Matrix2::new(c(0.0), c(1.0), c(0.0), c(0.0))
}

/// Applies a one-qubit matrix to qubit `q` (0 = most significant) of every
/// column of `m`.
pub fn apply_one(m: &DMatrix<C64>, n: usize, q: usize, u: &Matrix2<C64>) -> DMatrix<C64> {
    let bit = 1usize << (n - 1 - q);
    let mut out = DMatrix::zeros(m.nrows(), m.ncols());
    for col in 0..m.ncols() {
        for j in 0..m.nrows() {
            let x = m[(j, col)];
            if x == c(0.0) {
                continue;
            }
            let b = usize::from(j & bit != 0);
            for a in 0..2 {
                let t = u[(a, b)];
                if t != c(0.0) {
                    let i = (j & !bit) | if a == 1 { bit } else { 0 };
                    out[(i, col)] += t * x;
                }
            }
        }
    }
    out
}

/// `⊗_q E_{pattern_q}` applied to the columns of `m`; `pattern[q]` true means
/// qubit `q` decays.
pub fn apply_kraus(m: &DMatrix<C64>, n: usize, pattern: &[bool], gamma: f64) -> DMatrix<C64> {
    let [e0, e1] = damping_matrices(gamma);
    let mut out = m.clone();
    for (q, &damped) in pattern.iter().enumerate().take(n) {
        out = apply_one(&out, n, q, if damped { &e1 } else { &e0 });
    }
    out
}

/// `|0><1|` on each listed qubit.
pub fn apply_lowering(m: &DMatrix<C64>, n: usize, qubits: &[usize]) -> DMatrix<C64> {
    qubits.iter().fold(m.clone(), |acc, &q| apply_one(&acc, n, q, &lowering()))
}

pub fn pattern_bits(n: usize, p: usize) -> Vec<bool> {
    (0..n).map(|q| p >> (n - 1 - q) & 1 == 1).collect()
}

/// Dense Pauli matrix built as a Kronecker product from the printed string.
pub fn pauli_dense(p: &PauliOperator) -> DMatrix<C64> {
    let text = p.to_string().replacen("+i", "i", 1);
    let (sign, letters) = match text.strip_prefix('-') {
        Some(rest) => (c(-1.0), rest.to_string()),
        None => (c(1.0), text.clone()),
    };
    let (sign, letters) = match letters.strip_prefix('i') {
        Some(rest) => (sign * C64::new(0.0, 1.0), rest.to_string()),
        None => (sign, letters),
    };
    let i = C64::new(0.0, 1.0);
    let mut m = DMatrix::from_element(1, 1, sign);
    for ch in letters.chars() {
        let one = match ch {
            'I' => DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(1.0)]),
            'X' => DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]),
            'Y' => DMatrix::from_row_slice(2, 2, &[c(0.0), -i, i, c(0.0)]),
            'Z' => DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]),
            other => panic!("unexpected letter {other}"),
        };
        m = m.kronecker(&one);
    }
    m
}

/// Product of `(I + g)/2` over the generators.
pub fn group_projector(g: &StabilizerGroup) -> DMatrix<C64> {
    let dim = 1usize << g.n();
    let mut acc = DMatrix::<C64>::identity(dim, dim);
    for gen in g.generators() {
        let m = pauli_dense(gen);
        // a Pauli matrix has exactly one nonzero per column
        let mut next = acc.clone();
        for j in 0..dim {
            let k = (0..dim).find(|&k| m[(k, j)] != c(0.0)).unwrap();
            let f = m[(k, j)];
            for r in 0..dim {
                next[(r, j)] += acc[(r, k)] * f;
            }
        }
        acc = next * c(0.5);
    }
    acc
}

/// Orthonormal basis of the column space by modified Gram-Schmidt.
pub fn column_basis(m: &DMatrix<C64>, tol: f64) -> Vec<Vec<C64>> {
    let mut basis: Vec<Vec<C64>> = Vec::new();
    for col in 0..m.ncols() {
        let mut v: Vec<C64> = m.column(col).iter().copied().collect();
        for b in &basis {
            let ov: C64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= ov * bi;
            }
        }
        let nrm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if nrm > tol {
            basis.push(v.into_iter().map(|x| x / nrm).collect());
        }
    }
    basis
}

pub fn projector_of(basis: &[Vec<C64>], dim: usize) -> DMatrix<C64> {
    let mut p = DMatrix::zeros(dim, dim);
    for b in basis {
        for i in 0..dim {
            if b[i] == c(0.0) {
                continue;
            }
            for j in 0..dim {
                p[(i, j)] += b[i] * b[j].conj();
            }
        }
    }
    p
}

/// Projector onto the image of the code space under dampings of `qubits`,
/// from a rank factorization of `L P`.
pub fn damped_projector_oracle(code: &StabilizerCode, qubits: &[usize]) -> DMatrix<C64> {
    let n = code.n();
    let p = group_projector(code.group());
    let lp = apply_lowering(&p, n, qubits);
    projector_of(&column_basis(&lp, 1e-9), 1 << n)
}

/// Encoding isometry whose columns are the codewords reported by the code.
pub fn encoder(code: &StabilizerCode) -> DMatrix<C64> {
    code.codewords().unwrap().encoder().unwrap()
}

/// `4^-k sum_{K,R} |tr(R K V)|^2` with every damping pattern up to
/// `max_order` damped qubits.
pub fn dense_fidelity(code: &StabilizerCode, rec: &RecoveryOperation, gamma: f64, max_order: Option<usize>) -> f64 {
    let n = code.n();
    let k = code.k();
    let v = encoder(code);
    let elements: Vec<DMatrix<C64>> = (0..rec.len()).map(|i| rec.element_matrix(i).unwrap()).collect();
    let mut f = 0.0;
    for p in 0..1usize << n {
        if max_order.is_some_and(|t| (p.count_ones() as usize) > t) {
            continue;
        }
        let kv = apply_kraus(&v, n, &pattern_bits(n, p), gamma);
        for r in &elements {
            f += (r * &kv).trace().norm_sqr();
        }
    }
    f / (1u64 << (2 * k)) as f64
}

pub fn frobenius(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    (a - b).iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub fn paulis(items: &[&str]) -> Vec<PauliOperator> {
    items.iter().map(|s| s.parse().unwrap()).collect()
}

pub fn strings(g: &StabilizerGroup) -> Vec<String> {
    g.generators().iter().map(|p| p.to_string()).collect()
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

pub fn basis(dim: usize, j: usize) -> Vec<C64> {
    let mut v = vec![c(0.0); dim];
    v[j] = c(1.0);
    v
}

pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// `min_phi || a - e^{i phi} b ||` for unit vectors.
pub fn phase_free_distance(a: &[C64], b: &[C64]) -> f64 {
    (2.0 - 2.0 * inner(a, b).norm()).max(0.0).sqrt()
}

/// Damped sets with at most one qubit per pair, as 0-based qubit lists.
pub fn damped_sets(m: usize) -> Vec<Vec<usize>> {
    let layout = pair_layout(m);
    let mut out = vec![Vec::new()];
    for &(a, b) in &layout {
        let mut next = Vec::new();
        for s in &out {
            next.push(s.clone());
            for q in [a, b] {
                let mut t = s.clone();
                t.push(q);
                next.push(t);
            }
        }
        out = next;
    }
    out.retain(|s| !s.is_empty());
    out.iter_mut().for_each(|s| s.sort_unstable());
    out
}

pub fn lowered(v: &[C64], n: usize, qubits: &[usize]) -> Vec<C64> {
    let m = nalgebra::DMatrix::from_column_slice(v.len(), 1, v);
    apply_lowering(&m, n, qubits).iter().copied().collect()
}

/// Orthonormal basis of the image of the code under dampings of `set`.
pub fn damped_basis(m: usize, set: &[usize]) -> Vec<Vec<C64>> {
    let code = pair_code(m).unwrap();
    column_basis(&apply_lowering(&encoder(&code), code.n(), set), 1e-12)
}


/// `sqrt(γ) |0><1|` on one qubit, identity elsewhere, via the test kernels.
pub struct ScaledLowering {
    pub n: usize,
    pub qubits: Vec<usize>,
    pub scale: f64,
}

impl StateMap for ScaledLowering {
    fn input_dim(&self) -> usize {
        1 << self.n
    }

    fn apply_to(&self, v: &[C64]) -> Vec<C64> {
        let m = DMatrix::from_column_slice(v.len(), 1, v);
        apply_lowering(&m, self.n, &self.qubits).iter().map(|x| x * self.scale).collect()
    }
}

pub fn kl_errors(n: usize, gamma: f64) -> Vec<ScaledLowering> {
    let mut out = vec![ScaledLowering { n, qubits: vec![], scale: 1.0 }];
    out.extend((0..n).map(|q| ScaledLowering { n, qubits: vec![q], scale: gamma.sqrt() }));
    out
}

