//! Phase-tracked Pauli operators on up to 64 qubits.
//!
//! Qubit `q` (0-based, leftmost character of the string form) is stored at
//! bit `n - 1 - q`, which is also its bit in a computational-basis index.
//! That makes `X^x Z^z |j> = (-1)^{|z & j|} |j ^ x>` a couple of bit ops.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::C64;

pub const MAX_QUBITS: usize = 64;
/// Largest register for which dense `2^n x 2^n` matrices are produced.
pub const MAX_DENSE_QUBITS: usize = 12;

/// Global phase `i^k`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Phase {
    #[default]
    One,
    I,
    MinusOne,
    MinusI,
}

impl Phase {
    pub fn from_exponent(k: u32) -> Phase {
        match k % 4 {
            0 => Phase::One,
            1 => Phase::I,
            2 => Phase::MinusOne,
            _ => Phase::MinusI,
        }
    }

    pub fn exponent(self) -> u32 {
        match self {
            Phase::One => 0,
            Phase::I => 1,
            Phase::MinusOne => 2,
            Phase::MinusI => 3,
        }
    }

    pub fn value(self) -> C64 {
        match self {
            Phase::One => C64::new(1.0, 0.0),
            Phase::I => C64::new(0.0, 1.0),
            Phase::MinusOne => C64::new(-1.0, 0.0),
            Phase::MinusI => C64::new(0.0, -1.0),
        }
    }

    pub fn is_real(self) -> bool {
        matches!(self, Phase::One | Phase::MinusOne)
    }

    pub fn negate(self) -> Phase {
        Phase::from_exponent(self.exponent() + 2)
    }

    fn prefix(self) -> &'static str {
        match self {
            Phase::One => "",
            Phase::I => "+i",
            Phase::MinusOne => "-",
            Phase::MinusI => "-i",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PauliKind {
    I,
    X,
    Y,
    Z,
}

impl PauliKind {
    pub fn letter(self) -> char {
        match self {
            PauliKind::I => 'I',
            PauliKind::X => 'X',
            PauliKind::Y => 'Y',
            PauliKind::Z => 'Z',
        }
    }

    pub fn from_letter(c: char) -> Option<PauliKind> {
        match c {
            'I' => Some(PauliKind::I),
            'X' => Some(PauliKind::X),
            'Y' => Some(PauliKind::Y),
            'Z' => Some(PauliKind::Z),
            _ => None,
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            PauliKind::I => (false, false),
            PauliKind::X => (true, false),
            PauliKind::Y => (true, true),
            PauliKind::Z => (false, true),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    n: usize,
    x: u64,
    z: u64,
    phase: Phase,
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl PauliOperator {
    /// Builds an operator from index-aligned bit masks. `phase` is the phase
    /// in front of the tensor product of letters (so `Y` has phase one).
    pub fn new(n: usize, x: u64, z: u64, phase: Phase) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::TooManyQubits { n, max: MAX_QUBITS });
        }
        let m = full_mask(n);
        if x & !m != 0 || z & !m != 0 {
            return Err(Error::InvalidArgument(format!(
                "bit masks exceed {n} qubits"
            )));
        }
        Ok(PauliOperator { n, x, z, phase })
    }

    pub(crate) fn raw(n: usize, x: u64, z: u64, phase: Phase) -> Self {
        debug_assert!((1..=MAX_QUBITS).contains(&n));
        PauliOperator { n, x, z, phase }
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(n, 0, 0, Phase::One)
    }

    pub fn single(n: usize, qubit: usize, kind: PauliKind) -> Result<Self> {
        let id = Self::identity(n)?;
        if qubit >= n {
            return Err(Error::QubitOutOfRange { index: qubit, n });
        }
        let (bx, bz) = kind.bits();
        let m = id.mask(qubit);
        Ok(Self::raw(n, if bx { m } else { 0 }, if bz { m } else { 0 }, Phase::One))
    }

    /// Tensor product of the given letters with phase one.
    pub fn from_kinds(kinds: &[PauliKind]) -> Result<Self> {
        let n = kinds.len();
        let mut p = Self::identity(n)?;
        for (q, k) in kinds.iter().enumerate() {
            let (bx, bz) = k.bits();
            let m = p.mask(q);
            if bx {
                p.x |= m;
            }
            if bz {
                p.z |= m;
            }
        }
        Ok(p)
    }

    /// Product of `kind` on each listed qubit.
    pub fn on_qubits(n: usize, qubits: &[usize], kind: PauliKind) -> Result<Self> {
        let mut p = Self::identity(n)?;
        for &q in qubits {
            p = p.multiply(&Self::single(n, q, kind)?)?;
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_bits(&self) -> u64 {
        self.x
    }

    pub fn z_bits(&self) -> u64 {
        self.z
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub(crate) fn mask(&self, qubit: usize) -> u64 {
        1u64 << (self.n - 1 - qubit)
    }

    pub fn kind(&self, qubit: usize) -> PauliKind {
        let m = self.mask(qubit);
        match (self.x & m != 0, self.z & m != 0) {
            (false, false) => PauliKind::I,
            (true, false) => PauliKind::X,
            (true, true) => PauliKind::Y,
            (false, true) => PauliKind::Z,
        }
    }

    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&q| self.kind(q) != PauliKind::I).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_real()
    }

    pub fn with_phase(&self, phase: Phase) -> Self {
        Self::raw(self.n, self.x, self.z, phase)
    }

    pub fn negated(&self) -> Self {
        self.with_phase(self.phase.negate())
    }

    /// Same letters, phase one.
    pub fn unsigned(&self) -> Self {
        self.with_phase(Phase::One)
    }

    /// Symplectic vector `(x | z)` packed as `x << 64 | z`.
    pub fn symplectic(&self) -> u128 {
        ((self.x as u128) << 64) | self.z as u128
    }

    pub fn from_symplectic(n: usize, v: u128, phase: Phase) -> Self {
        Self::raw(n, (v >> 64) as u64, v as u64, phase)
    }

    /// Exponent `e` of the internal form `i^e X^x Z^z`.
    fn internal_exponent(&self) -> u32 {
        self.phase.exponent() + (self.x & self.z).count_ones()
    }

    fn check_len(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            Err(Error::LengthMismatch { left: self.n, right: other.n })
        } else {
            Ok(())
        }
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_len(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let e = self.internal_exponent()
            + other.internal_exponent()
            + 2 * (self.z & other.x).count_ones();
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        // back to the letter form: subtract one i per Y
        let user = (e + 4 * 64 - (x & z).count_ones()) % 4;
        Self::raw(self.n, x, z, Phase::from_exponent(user))
    }

    pub fn commutes_with(&self, other: &Self) -> Result<bool> {
        self.check_len(other)?;
        Ok(self.commutes_unchecked(other))
    }

    pub(crate) fn commutes_unchecked(&self, other: &Self) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()).is_multiple_of(2)
    }

    /// Image of the basis state `|j>`: `P|j> = amp |j'>`.
    pub fn apply_basis(&self, j: usize) -> (usize, C64) {
        let j64 = j as u64;
        let mut e = self.internal_exponent();
        if (self.z & j64).count_ones() % 2 == 1 {
            e += 2;
        }
        ((j64 ^ self.x) as usize, Phase::from_exponent(e).value())
    }

    pub fn apply(&self, state: &[C64]) -> Result<Vec<C64>> {
        let dim = check_state_dim(self.n, state.len())?;
        let mut out = vec![C64::new(0.0, 0.0); dim];
        for (j, &amp) in state.iter().enumerate() {
            if amp == C64::new(0.0, 0.0) {
                continue;
            }
            let (k, f) = self.apply_basis(j);
            out[k] += f * amp;
        }
        Ok(out)
    }

    pub fn to_dense(&self) -> Result<DMatrix<C64>> {
        if self.n > MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits { n: self.n, max: MAX_DENSE_QUBITS });
        }
        let dim = 1usize << self.n;
        let mut m = DMatrix::zeros(dim, dim);
        for j in 0..dim {
            let (k, f) = self.apply_basis(j);
            m[(k, j)] = f;
        }
        Ok(m)
    }

    /// The letters without the phase prefix.
    pub fn letters(&self) -> String {
        (0..self.n).map(|q| self.kind(q).letter()).collect()
    }

    /// Reorders qubits: qubit `q` of `self` lands on `perm[q]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::LengthMismatch { left: self.n, right: perm.len() });
        }
        let mut sorted = perm.to_vec();
        sorted.sort_unstable();
        if sorted.iter().enumerate().any(|(i, &v)| i != v) {
            return Err(Error::InvalidArgument("not a permutation".into()));
        }
        let mut kinds = vec![PauliKind::I; self.n];
        for (q, &dest) in perm.iter().enumerate() {
            kinds[dest] = self.kind(q);
        }
        Ok(Self::from_kinds(&kinds)?.with_phase(self.phase))
    }
}

pub(crate) fn check_state_dim(n: usize, len: usize) -> Result<usize> {
    if n > 30 {
        return Err(Error::TooManyQubits { n, max: 30 });
    }
    let dim = 1usize << n;
    if len != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: len });
    }
    Ok(dim)
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.phase.prefix(), self.letters())
    }
}

impl FromStr for PauliOperator {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let err = |reason: &str| Error::PauliParse {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let t = text.trim();
        let (phase, body) = if let Some(rest) = t.strip_prefix("+i") {
            (Phase::I, rest)
        } else if let Some(rest) = t.strip_prefix("-i") {
            (Phase::MinusI, rest)
        } else if let Some(rest) = t.strip_prefix('i') {
            (Phase::I, rest)
        } else if let Some(rest) = t.strip_prefix('-') {
            (Phase::MinusOne, rest)
        } else if let Some(rest) = t.strip_prefix('+') {
            (Phase::One, rest)
        } else {
            (Phase::One, t)
        };
        if body.is_empty() {
            return Err(err("no Pauli letters"));
        }
        let kinds = body
            .chars()
            .map(|c| PauliKind::from_letter(c).ok_or_else(|| err(&format!("unexpected character `{c}`"))))
            .collect::<Result<Vec<_>>>()?;
        if kinds.len() > MAX_QUBITS {
            return Err(err("more than 64 qubits"));
        }
        Ok(Self::from_kinds(&kinds)?.with_phase(phase))
    }
}

impl PauliOperator {
    /// Parses and checks the length.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let p: PauliOperator = text.parse()?;
        if p.n != n {
            return Err(Error::LengthMismatch { left: n, right: p.n });
        }
        Ok(p)
    }
}

impl Serialize for PauliOperator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Parses a list of Pauli strings that must all have the same length.
pub fn parse_list(items: &[&str]) -> Result<Vec<PauliOperator>> {
    let ops = items.iter().map(|s| s.parse()).collect::<Result<Vec<PauliOperator>>>()?;
    if let Some(first) = ops.first() {
        for p in &ops {
            first.check_len(p)?;
        }
    }
    Ok(ops)
}
