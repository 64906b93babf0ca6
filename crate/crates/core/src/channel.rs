//! The amplitude damping channel and its n-qubit Kraus operators.
//!
//! A Kraus operator of `E^{⊗n}` is labeled by the set of qubits that
//! received `E_1`; every other qubit gets `E_0`. Both factors map basis
//! states to basis states, so each operator has at most one nonzero entry
//! per column and is never stored densely.

use nalgebra::{DMatrix, Matrix2};
use serde::Serialize;

use crate::error::{check_gamma, Error, Result};
use crate::linalg::{StateMap, C64, ZERO};
use crate::pauli::MAX_DENSE_QUBITS;

/// Largest register for which full Kraus sets are enumerated.
pub const MAX_CHANNEL_QUBITS: usize = 24;

/// `E_0 = |0><0| + sqrt(1-γ)|1><1|`, `E_1 = sqrt(γ)|0><1|`.
pub fn single_qubit_kraus(gamma: f64) -> Result<[Matrix2<C64>; 2]> {
    check_gamma(gamma)?;
    let r = |x: f64| C64::new(x, 0.0);
    Ok([
        Matrix2::new(r(1.0), r(0.0), r(0.0), r((1.0 - gamma).sqrt())),
        Matrix2::new(r(0.0), r(gamma.sqrt()), r(0.0), r(0.0)),
    ])
}

fn check_qubits(n: usize) -> Result<()> {
    if n == 0 || n > MAX_CHANNEL_QUBITS {
        Err(Error::TooManyQubits { n, max: MAX_CHANNEL_QUBITS })
    } else {
        Ok(())
    }
}

fn mask_of(n: usize, qubits: &[usize]) -> Result<u64> {
    let mut m = 0u64;
    for &q in qubits {
        if q >= n {
            return Err(Error::QubitOutOfRange { index: q, n });
        }
        m |= 1u64 << (n - 1 - q);
    }
    Ok(m)
}

fn pattern_string(n: usize, p: u64) -> String {
    (0..n).map(|q| if p >> (n - 1 - q) & 1 == 1 { '1' } else { '0' }).collect()
}

/// `|0><1|` on the listed qubits, identity elsewhere: the γ-free error
/// operator whose span the damping terms of each order share.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DampingError {
    n: usize,
    pattern: u64,
}

impl DampingError {
    pub fn identity(n: usize) -> Self {
        DampingError { n, pattern: 0 }
    }

    pub fn on_qubits(n: usize, qubits: &[usize]) -> Result<Self> {
        check_qubits(n)?;
        Ok(DampingError { n, pattern: mask_of(n, qubits)? })
    }

    pub fn pattern(&self) -> u64 {
        self.pattern
    }

    pub fn order(&self) -> usize {
        self.pattern.count_ones() as usize
    }

    /// All operators with at most `max_order` damped qubits, by order then
    /// lexicographically.
    pub fn up_to_order(n: usize, max_order: usize) -> Result<Vec<Self>> {
        check_qubits(n)?;
        Ok((0..=max_order.min(n))
            .flat_map(|w| patterns_of_order(n, w))
            .map(|pattern| DampingError { n, pattern })
            .collect())
    }
}

impl StateMap for DampingError {
    fn input_dim(&self) -> usize {
        1 << self.n
    }

    fn apply_to(&self, v: &[C64]) -> Vec<C64> {
        let p = self.pattern as usize;
        let mut out = vec![ZERO; v.len()];
        for (j, &a) in v.iter().enumerate() {
            if j & p == p {
                out[j & !p] += a;
            }
        }
        out
    }
}

/// One Kraus operator of the n-qubit damping channel.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DampingKraus {
    n: usize,
    pattern: u64,
    gamma: f64,
    #[serde(skip)]
    e1_factor: f64,
    #[serde(skip)]
    e0_factor: f64,
}

impl DampingKraus {
    pub fn new(n: usize, pattern: u64, gamma: f64) -> Result<Self> {
        check_qubits(n)?;
        check_gamma(gamma)?;
        if n < 64 && pattern >> n != 0 {
            return Err(Error::InvalidArgument("pattern has bits beyond n".into()));
        }
        Ok(Self::raw(n, pattern, gamma))
    }

    pub(crate) fn raw(n: usize, pattern: u64, gamma: f64) -> Self {
        DampingKraus {
            n,
            pattern,
            gamma,
            e1_factor: gamma.powi(pattern.count_ones() as i32).sqrt(),
            e0_factor: (1.0 - gamma).sqrt(),
        }
    }

    pub fn on_qubits(n: usize, qubits: &[usize], gamma: f64) -> Result<Self> {
        check_qubits(n)?;
        Self::new(n, mask_of(n, qubits)?, gamma)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Damped qubits as an index-aligned bit mask.
    pub fn pattern(&self) -> u64 {
        self.pattern
    }

    /// Damped qubits, 0-based.
    pub fn damped_qubits(&self) -> Vec<usize> {
        (0..self.n).filter(|q| self.pattern >> (self.n - 1 - q) & 1 == 1).collect()
    }

    pub fn order(&self) -> usize {
        self.pattern.count_ones() as usize
    }

    /// The pattern as a bit string, qubit 1 first.
    pub fn label(&self) -> String {
        pattern_string(self.n, self.pattern)
    }

    /// Image of `|j>`: `Some((row, amplitude))` or `None` if annihilated.
    #[inline]
    pub fn column(&self, j: usize) -> Option<(usize, f64)> {
        let p = self.pattern as usize;
        if j & p != p {
            return None;
        }
        let rest = j & !p;
        Some((rest, self.e1_factor * self.e0_factor.powi(rest.count_ones() as i32)))
    }

    pub fn to_dense(&self) -> Result<DMatrix<C64>> {
        if self.n > MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits { n: self.n, max: MAX_DENSE_QUBITS });
        }
        let dim = 1usize << self.n;
        let mut m = DMatrix::zeros(dim, dim);
        for j in 0..dim {
            if let Some((i, a)) = self.column(j) {
                m[(i, j)] = C64::new(a, 0.0);
            }
        }
        Ok(m)
    }
}

impl StateMap for DampingKraus {
    fn input_dim(&self) -> usize {
        1 << self.n
    }

    fn apply_to(&self, v: &[C64]) -> Vec<C64> {
        let mut out = vec![ZERO; v.len()];
        for (j, &a) in v.iter().enumerate() {
            if a != ZERO {
                if let Some((i, f)) = self.column(j) {
                    out[i] += a * f;
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Truncation {
    Exact,
    /// Keep operators with at most this many damped qubits.
    MaxOrder(usize),
}

impl Truncation {
    pub fn keeps(self, order: usize) -> bool {
        match self {
            Truncation::Exact => true,
            Truncation::MaxOrder(t) => order <= t,
        }
    }

    pub fn max_order(self) -> Option<usize> {
        match self {
            Truncation::Exact => None,
            Truncation::MaxOrder(t) => Some(t),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct KrausSet {
    pub n: usize,
    pub gamma: f64,
    pub truncation: Truncation,
    pub operators: Vec<DampingKraus>,
    /// Channel weight of the dropped operators for a maximally mixed input,
    /// `sum_{w > t} C(n,w) (γ/2)^w (1-γ/2)^{n-w}`.
    pub discarded_weight: f64,
}

/// Masks with `w` bits set among the low `n`, increasing numerically, which
/// is lexicographic order of the bit strings.
pub fn patterns_of_order(n: usize, w: usize) -> Vec<u64> {
    if w > n {
        return Vec::new();
    }
    if w == 0 {
        return vec![0];
    }
    let limit = 1u64 << n;
    let mut out = Vec::new();
    let mut x = (1u64 << w) - 1;
    while x < limit {
        out.push(x);
        let c = x & x.wrapping_neg();
        let r = x + c;
        x = (((r ^ x) >> 2) / c) | r;
    }
    out
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub fn enumerate_kraus(n: usize, gamma: f64, truncation: Truncation) -> Result<KrausSet> {
    check_qubits(n)?;
    check_gamma(gamma)?;
    let top = truncation.max_order().map_or(n, |t| t.min(n));
    let operators = (0..=top)
        .flat_map(|w| patterns_of_order(n, w))
        .map(|p| DampingKraus::raw(n, p, gamma))
        .collect();
    let q = gamma / 2.0;
    let discarded_weight = (top + 1..=n)
        .map(|w| binomial(n, w) * q.powi(w as i32) * (1.0 - q).powi((n - w) as i32))
        .sum();
    Ok(KrausSet { n, gamma, truncation, operators, discarded_weight })
}
