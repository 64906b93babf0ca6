//! The code library: the [4,1] code, the [2(M+1),M] pair family, the
//! Hamming-derived [7,3] code, Gottesman's [8,3] code and the Shor code.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::pauli::{PauliOperator, Phase};
use crate::stabilizer::{CompletionOrder, StabilizerCode, StabilizerGroup};

/// Largest pair-code parameter accepted (n = 2(M+1) <= 20).
pub const MAX_PAIR_M: usize = 9;

fn mask(n: usize, qubits: &[usize]) -> u64 {
    qubits.iter().fold(0, |m, &q| m | 1u64 << (n - 1 - q))
}

fn z_on(n: usize, qubits: &[usize]) -> PauliOperator {
    PauliOperator::raw(n, 0, mask(n, qubits), Phase::One)
}

fn x_on(n: usize, qubits: &[usize]) -> PauliOperator {
    PauliOperator::raw(n, mask(n, qubits), 0, Phase::One)
}

fn all_x(n: usize) -> PauliOperator {
    x_on(n, &(0..n).collect::<Vec<_>>())
}

/// The [4,1] code: stabilizer `<XXXX, ZZII, IIZZ>`, `X_L = XXII`, `Z_L = ZIZI`.
pub fn leung_41() -> StabilizerCode {
    let group = StabilizerGroup::new(4, vec![all_x(4), z_on(4, &[0, 1]), z_on(4, &[2, 3])]).expect("valid");
    StabilizerCode::new("leung41", group, vec![x_on(4, &[0, 1])], vec![z_on(4, &[0, 2])]).expect("valid")
}

/// Qubit pairs (0-based) of the pair code in standard layout:
/// `(0,1)` followed by `(1+j, n-j)` for `j = 1..=M`.
pub fn pair_layout(m: usize) -> Vec<(usize, usize)> {
    let n = 2 * (m + 1);
    std::iter::once((0, 1)).chain((1..=m).map(|j| (1 + j, n - j))).collect()
}

fn check_m(m: usize) -> Result<()> {
    if m == 0 || m > MAX_PAIR_M {
        Err(Error::InvalidArgument(format!("pair code needs 1 <= M <= {MAX_PAIR_M}, got {m}")))
    } else {
        Ok(())
    }
}

/// The [2(M+1),M] code in standard form, with systematic logicals:
/// `X_i` on qubits `M+3-i, M+2+i` and `Z_i = Z_1 Z_{M+2+i}` (1-based).
pub fn pair_code(m: usize) -> Result<StabilizerCode> {
    check_m(m)?;
    let n = 2 * (m + 1);
    let mut gens = vec![all_x(n)];
    gens.extend(pair_layout(m).iter().map(|&(a, b)| z_on(n, &[a, b])));
    let group = StabilizerGroup::new(n, gens)?;
    let xs = (1..=m).map(|i| x_on(n, &[m + 2 - i, m + 1 + i])).collect();
    let zs = (1..=m).map(|i| z_on(n, &[0, m + 1 + i])).collect();
    StabilizerCode::new(format!("pair:{m}"), group, xs, zs)
}

/// Same code with adjacent pairs `(1,2), (3,4), ...`, the form that makes
/// the relation to the [4,1] code visible. Logicals follow the relabeling.
pub fn pair_code_grouped(m: usize) -> Result<StabilizerCode> {
    let std = pair_code(m)?;
    let n = std.n();
    let mut perm = vec![0; n];
    for (j, &(a, b)) in pair_layout(m).iter().enumerate() {
        perm[a] = 2 * j;
        perm[b] = 2 * j + 1;
    }
    let relabel = |ops: &[PauliOperator]| ops.iter().map(|p| p.permuted(&perm)).collect::<Result<Vec<_>>>();
    let group = StabilizerGroup::new(n, relabel(std.generators())?)?;
    StabilizerCode::new(
        format!("pair-grouped:{m}"),
        group,
        relabel(std.logical_x())?,
        relabel(std.logical_z())?,
    )
}

/// Binary parity-check matrix of a classical linear code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityCheckMatrix {
    n: usize,
    rows: Vec<Vec<u8>>,
}

impl ParityCheckMatrix {
    pub fn new(rows: Vec<Vec<u8>>) -> Result<Self> {
        let n = rows.first().map(|r| r.len()).ok_or_else(|| Error::ParityCheck("no rows".into()))?;
        if n == 0 || n > crate::pauli::MAX_QUBITS {
            return Err(Error::ParityCheck(format!("unsupported length {n}")));
        }
        for r in &rows {
            if r.len() != n {
                return Err(Error::ParityCheck("rows have different lengths".into()));
            }
            if r.iter().any(|&b| b > 1) {
                return Err(Error::ParityCheck("entries must be 0 or 1".into()));
            }
        }
        Ok(ParityCheckMatrix { n, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    fn row_mask(&self, r: &[u8]) -> u64 {
        r.iter().enumerate().filter(|(_, &b)| b == 1).fold(0, |m, (q, _)| m | 1u64 << (self.n - 1 - q))
    }

    /// Basis of the classical code (null space of the checks) as bit masks,
    /// qubit 1 = most significant.
    fn codeword_basis(&self) -> Vec<u64> {
        let masks: Vec<u64> = self.rows.iter().map(|r| self.row_mask(r)).collect();
        // reduced row echelon form
        let mut rref: Vec<u64> = Vec::new();
        let mut pivots: Vec<usize> = Vec::new();
        for &m in &masks {
            let mut v = m;
            for (r, &p) in rref.iter().zip(&pivots) {
                if v >> p & 1 == 1 {
                    v ^= r;
                }
            }
            if v != 0 {
                let p = 63 - v.leading_zeros() as usize;
                for r in rref.iter_mut() {
                    if *r >> p & 1 == 1 {
                        *r ^= v;
                    }
                }
                rref.push(v);
                pivots.push(p);
            }
        }
        // each free bit gives one null-space vector
        (0..self.n)
            .rev()
            .filter(|b| !pivots.contains(b))
            .map(|free| {
                let mut c = 1u64 << free;
                for (r, &p) in rref.iter().zip(&pivots) {
                    if r >> free & 1 == 1 {
                        c |= 1u64 << p;
                    }
                }
                c
            })
            .collect()
    }

    /// The extended Hamming [8,4] code.
    pub fn extended_hamming_84() -> Self {
        Self::parse("11111111\n00001111\n00110011\n01010101").expect("valid")
    }

    /// The Hamming [7,4] code, rows as in the [7,3] stabilizer.
    pub fn hamming_74() -> Self {
        Self::parse("0001111\n0110011\n1010101").expect("valid")
    }

    /// One row per line, digits `0`/`1`, optional whitespace between them.
    /// Blank lines and lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let rows = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| {
                l.chars()
                    .filter(|c| !c.is_whitespace() && *c != ',')
                    .map(|c| match c {
                        '0' => Ok(0),
                        '1' => Ok(1),
                        other => Err(Error::ParityCheck(format!("unexpected character `{other}`"))),
                    })
                    .collect::<Result<Vec<u8>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows)
    }
}

impl FromStr for ParityCheckMatrix {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

fn bits_string(n: usize, m: u64) -> String {
    (0..n).map(|q| if m >> (n - 1 - q) & 1 == 1 { '1' } else { '0' }).collect()
}

/// Quantum code from a single-error-correcting classical code that
/// contains the all-ones word (every check has even weight): one Z row per
/// parity check plus the all-X generator, which tells `X_i` from `Y_i`.
pub fn from_parity_check(h: &ParityCheckMatrix) -> Result<StabilizerCode> {
    let n = h.n;
    for r in &h.rows {
        if r.iter().filter(|&&b| b == 1).count() % 2 == 1 {
            let row: String = r.iter().map(|b| if *b == 1 { '1' } else { '0' }).collect();
            return Err(Error::ParityCheck(format!(
                "check {row} has odd weight, so X on every qubit would anticommute with it \
                 (the all-ones word is not a codeword)"
            )));
        }
    }
    for q in 0..n {
        let col: Vec<u8> = h.rows.iter().map(|r| r[q]).collect();
        if col.iter().all(|&b| b == 0) {
            return Err(Error::ParityCheck(format!("column {} is zero; the code does not correct an error on it", q + 1)));
        }
        for q2 in q + 1..n {
            if h.rows.iter().all(|r| r[q2] == r[q]) {
                return Err(Error::ParityCheck(format!(
                    "columns {} and {} are equal; single errors are not distinguishable",
                    q + 1,
                    q2 + 1
                )));
            }
        }
    }
    let basis = h.codeword_basis();
    if basis.len() < 2 {
        let words: Vec<String> = basis.iter().map(|&c| bits_string(n, c)).collect();
        return Err(Error::ParityCheck(format!(
            "the classical code is spanned by {{{}}}; with the all-X generator no logical qubit is left",
            words.join(", ")
        )));
    }
    let mut gens: Vec<PauliOperator> = h
        .rows
        .iter()
        .map(|r| PauliOperator::raw(n, 0, h.row_mask(r), Phase::One))
        .collect();
    gens.push(all_x(n));
    let group = StabilizerGroup::new(n, gens).map_err(|e| match e {
        Error::DependentGenerator(g) => Error::ParityCheck(format!("dependent rows ({g})")),
        other => other,
    })?;
    StabilizerCode::with_completed_logicals(format!("linear:{n}"), group, CompletionOrder::Lexicographic)
}

/// The [7,3] code built on the Hamming [7,4] parity checks.
pub fn hamming_73() -> StabilizerCode {
    from_parity_check(&ParityCheckMatrix::hamming_74()).expect("valid").renamed("hamming73")
}

/// Gottesman's [8,3] code, which corrects any single-qubit error.
pub fn gottesman_83() -> StabilizerCode {
    gottesman_83_with(CompletionOrder::Lexicographic)
}

pub fn gottesman_83_with(order: CompletionOrder) -> StabilizerCode {
    let group = StabilizerGroup::from_strs(&["XXXXXXXX", "ZZZZZZZZ", "IXIXYZYZ", "IXZYIXZY", "IYXZXZIY"]).expect("valid");
    StabilizerCode::with_completed_logicals("gottesman83", group, order).expect("valid")
}

/// The Shor code: `Z` pairs inside each block of three, `X` on pairs of blocks.
pub fn shor_91() -> StabilizerCode {
    shor_91_with(CompletionOrder::Lexicographic)
}

pub fn shor_91_with(order: CompletionOrder) -> StabilizerCode {
    let n = 9;
    let mut gens: Vec<PauliOperator> = [(0, 1), (1, 2), (3, 4), (4, 5), (6, 7), (7, 8)]
        .iter()
        .map(|&(a, b)| z_on(n, &[a, b]))
        .collect();
    gens.push(x_on(n, &[0, 1, 2, 3, 4, 5]));
    gens.push(x_on(n, &[3, 4, 5, 6, 7, 8]));
    let group = StabilizerGroup::new(n, gens).expect("valid");
    StabilizerCode::with_completed_logicals("shor91", group, order).expect("valid")
}

/// Blocks of the Shor code, 0-based.
pub const SHOR_BLOCKS: [[usize; 3]; 3] = [[0, 1, 2], [3, 4, 5], [6, 7, 8]];

/// Named codes accepted by the command line and the sweep drivers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CodeId {
    Leung41,
    Pair(usize),
    PairGrouped(usize),
    Hamming73,
    Gottesman83,
    Shor91,
}

impl CodeId {
    pub fn build(self) -> Result<StabilizerCode> {
        match self {
            CodeId::Leung41 => Ok(leung_41()),
            CodeId::Pair(m) => pair_code(m),
            CodeId::PairGrouped(m) => pair_code_grouped(m),
            CodeId::Hamming73 => Ok(hamming_73()),
            CodeId::Gottesman83 => Ok(gottesman_83()),
            CodeId::Shor91 => Ok(shor_91()),
        }
    }

    pub fn all_builtin() -> Vec<CodeId> {
        let mut v = vec![CodeId::Leung41];
        v.extend((1..=4).map(CodeId::Pair));
        v.extend([CodeId::Hamming73, CodeId::Gottesman83, CodeId::Shor91]);
        v
    }

    pub fn description(self) -> String {
        match self {
            CodeId::Leung41 => "[4,1] amplitude damping code".into(),
            CodeId::Pair(m) => format!("[{},{}] pair code, standard form", 2 * (m + 1), m),
            CodeId::PairGrouped(m) => format!("[{},{}] pair code, adjacent pairs", 2 * (m + 1), m),
            CodeId::Hamming73 => "[7,3] code from the Hamming [7,4] checks".into(),
            CodeId::Gottesman83 => "[8,3] code correcting any single-qubit error".into(),
            CodeId::Shor91 => "[9,1] Shor code".into(),
        }
    }
}

impl fmt::Display for CodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodeId::Leung41 => write!(f, "leung41"),
            CodeId::Pair(m) => write!(f, "pair:{m}"),
            CodeId::PairGrouped(m) => write!(f, "pair-grouped:{m}"),
            CodeId::Hamming73 => write!(f, "hamming73"),
            CodeId::Gottesman83 => write!(f, "gottesman83"),
            CodeId::Shor91 => write!(f, "shor91"),
        }
    }
}

impl FromStr for CodeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        let pair_arg = |rest: &str| -> Result<usize> {
            let m = rest.parse().map_err(|_| Error::InvalidArgument(format!("bad pair parameter in `{s}`")))?;
            check_m(m)?;
            Ok(m)
        };
        match t.as_str() {
            "leung41" | "4,1" | "[4,1]" => Ok(CodeId::Leung41),
            "hamming73" | "7,3" | "[7,3]" => Ok(CodeId::Hamming73),
            "gottesman83" | "gottesman" => Ok(CodeId::Gottesman83),
            "shor91" | "shor" | "9,1" | "[9,1]" => Ok(CodeId::Shor91),
            "6,2" | "[6,2]" => Ok(CodeId::Pair(2)),
            "8,3" | "[8,3]" => Ok(CodeId::Pair(3)),
            "10,4" | "[10,4]" => Ok(CodeId::Pair(4)),
            _ => {
                if let Some(rest) = t.strip_prefix("pair-grouped:") {
                    Ok(CodeId::PairGrouped(pair_arg(rest)?))
                } else if let Some(rest) = t.strip_prefix("pair:") {
                    Ok(CodeId::Pair(pair_arg(rest)?))
                } else {
                    Err(Error::InvalidArgument(format!("unknown code `{s}`")))
                }
            }
        }
    }
}
