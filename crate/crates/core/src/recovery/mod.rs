//! Recovery operations: syndrome measurement followed by a correction and
//! decoding, stored as one Kraus element per syndrome branch.
//!
//! An element is `R = sum_a |a><u_a|`, mapping the physical register onto
//! the `2^k`-dimensional logical register. Only the rows `u_a` are stored.

mod generic;
mod linear;
mod pair;
mod shor;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::codes::CodeId;
use crate::error::{check_gamma, Error, Result};
use crate::linalg::{inner, lowdin, project_out, SparseVector, C64, ZERO};
use crate::pauli::{PauliOperator, MAX_DENSE_QUBITS};

pub use generic::generic_stabilizer_recovery;
pub use linear::{hamming73_recovery, linear_code_recovery};
pub use pair::{leung41_recovery, leung41_with_alpha, pair_code_recovery, pair_family_recovery};
pub use shor::{shor_recovery, shor_recovery_for};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RecoveryMode {
    /// Clifford recovery; the no-damping branch projects onto the code.
    Projection,
    /// The no-damping branch (and any other branch with freedom left) is
    /// rotated towards the `E_0`-distorted codewords.
    Perturbed,
    /// [4,1] only: the no-damping rotation angle is optimized numerically.
    SweepOptimized,
    /// Standard single-Pauli syndrome table; other syndromes are dropped.
    GenericStabilizer,
    /// As above, with leftover syndromes given two-qubit X/Y corrections.
    AdaptedStabilizer,
}

impl RecoveryMode {
    pub fn needs_gamma(self) -> bool {
        matches!(self, RecoveryMode::Perturbed | RecoveryMode::SweepOptimized)
    }

    pub fn name(self) -> &'static str {
        match self {
            RecoveryMode::Projection => "projection",
            RecoveryMode::Perturbed => "perturbed",
            RecoveryMode::SweepOptimized => "sweep_optimized",
            RecoveryMode::GenericStabilizer => "generic_stabilizer",
            RecoveryMode::AdaptedStabilizer => "adapted_stabilizer",
        }
    }

    pub fn all() -> [RecoveryMode; 5] {
        [
            RecoveryMode::Projection,
            RecoveryMode::Perturbed,
            RecoveryMode::SweepOptimized,
            RecoveryMode::GenericStabilizer,
            RecoveryMode::AdaptedStabilizer,
        ]
    }
}

impl fmt::Display for RecoveryMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RecoveryMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "projection" | "stabilizer" => Ok(RecoveryMode::Projection),
            "perturbed" | "gamma_dependent" => Ok(RecoveryMode::Perturbed),
            "sweep" | "sweep_optimized" => Ok(RecoveryMode::SweepOptimized),
            "generic" | "generic_stabilizer" => Ok(RecoveryMode::GenericStabilizer),
            "adapted" | "adapted_stabilizer" => Ok(RecoveryMode::AdaptedStabilizer),
            _ => Err(Error::InvalidArgument(format!("unknown recovery mode `{s}`"))),
        }
    }
}

/// One measured operator and its outcome (+1 or -1).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Measurement {
    pub operator: PauliOperator,
    pub outcome: i8,
}

impl Measurement {
    pub(crate) fn new(operator: PauliOperator, plus: bool) -> Self {
        Measurement { operator, outcome: if plus { 1 } else { -1 } }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RecoveryElement {
    pub label: String,
    pub measurements: Vec<Measurement>,
    /// Qubits (0-based) the branch attributes a damping to.
    pub damped: Vec<usize>,
    pub correction: String,
    /// `(a, u_a)`; logical indices without a row are discarded.
    pub rows: Vec<(usize, SparseVector)>,
}

impl RecoveryElement {
    pub(crate) fn new(label: impl Into<String>, measurements: Vec<Measurement>, damped: Vec<usize>, correction: impl Into<String>) -> Self {
        RecoveryElement { label: label.into(), measurements, damped, correction: correction.into(), rows: Vec::new() }
    }

    pub(crate) fn with_rows(mut self, rows: Vec<Option<Vec<C64>>>) -> Self {
        self.rows = rows
            .into_iter()
            .enumerate()
            .filter_map(|(a, r)| r.map(|v| (a, SparseVector::from_dense(&v))))
            .filter(|(_, r)| !r.entries().is_empty())
            .collect();
        self
    }

    pub fn syndrome_string(&self) -> String {
        self.measurements
            .iter()
            .map(|m| format!("{}{}", if m.outcome > 0 { "+" } else { "-" }, m.operator))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Summary of `S = sum_R R^dag R`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Completeness {
    pub max_eigenvalue: f64,
    /// `2^n - tr S`: dimension of the physical space no element reads.
    pub deficit: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RecoveryOperation {
    pub code: String,
    pub n: usize,
    pub k: usize,
    pub mode: RecoveryMode,
    pub gamma: Option<f64>,
    pub elements: Vec<RecoveryElement>,
    /// Conventions that matter for interpreting results.
    pub notes: Vec<String>,
    pub parameters: BTreeMap<String, f64>,
}

impl RecoveryOperation {
    pub(crate) fn new(code: &crate::stabilizer::StabilizerCode, mode: RecoveryMode, gamma: Option<f64>) -> Self {
        RecoveryOperation {
            code: code.name().to_string(),
            n: code.n(),
            k: code.k(),
            mode,
            gamma,
            elements: Vec::new(),
            notes: Vec::new(),
            parameters: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Dense `2^k x 2^n` matrix of one element.
    pub fn element_matrix(&self, i: usize) -> Result<DMatrix<C64>> {
        if self.n > MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits { n: self.n, max: MAX_DENSE_QUBITS });
        }
        let e = self.elements.get(i).ok_or_else(|| Error::InvalidArgument(format!("no element {i}")))?;
        let mut m = DMatrix::zeros(1 << self.k, 1 << self.n);
        for (a, row) in &e.rows {
            for &(j, v) in row.entries() {
                m[(*a, j)] = v.conj();
            }
        }
        Ok(m)
    }

    /// Largest eigenvalue and deficit of `sum R^dag R`, computed from the
    /// Gram matrix of all rows, split into independent blocks.
    pub fn completeness(&self) -> Completeness {
        let rows: Vec<&SparseVector> = self.elements.iter().flat_map(|e| e.rows.iter().map(|(_, r)| r)).collect();
        let dim = (1u64 << self.n) as f64;
        let trace: f64 = rows.iter().map(|r| r.norm_sqr()).sum();
        // rows sharing a basis index interact
        let mut owner: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
        let mut parent: Vec<usize> = (0..rows.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut c = x;
            while p[c] != r {
                let next = p[c];
                p[c] = r;
                c = next;
            }
            r
        }
        for (i, r) in rows.iter().enumerate() {
            for &(j, _) in r.entries() {
                if let Some(&o) = owner.get(&j) {
                    let (a, b) = (find(&mut parent, o), find(&mut parent, i));
                    if a != b {
                        parent[a] = b;
                    }
                } else {
                    owner.insert(j, i);
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..rows.len() {
            let root = find(&mut parent, i);
            groups.entry(root).or_default().push(i);
        }
        let mut max_eig = 0.0f64;
        for members in groups.values() {
            let m = members.len();
            let g = DMatrix::from_fn(m, m, |i, j| rows[members[i]].dot(rows[members[j]]));
            let top = if m == 1 {
                g[(0, 0)].re
            } else {
                g.symmetric_eigen().eigenvalues.iter().cloned().fold(f64::MIN, f64::max)
            };
            max_eig = max_eig.max(top);
        }
        Completeness { max_eigenvalue: max_eig, deficit: dim - trace }
    }
}

/// Columns of `T (T^dag T)^{+1/2}` for `T = [t_0 ... t_{k-1}]`: the
/// isometry closest to the images, with the pseudo-inverse when some
/// images are dependent. Orthogonal images of equal norm are just
/// normalized; parallel images share one row direction with weights that
/// sum to one.
pub(crate) fn polar_rows(images: &[Vec<C64>]) -> Vec<Option<Vec<C64>>> {
    let k = images.len();
    let gram = DMatrix::from_fn(k, k, |i, j| inner(&images[i], &images[j]));
    let max = (0..k).map(|i| gram[(i, i)].re).fold(0.0, f64::max);
    if max < 1e-24 {
        return vec![None; k];
    }
    let eig = gram.symmetric_eigen();
    let q = &eig.eigenvectors;
    let dim = images[0].len();
    let mut s = DMatrix::<C64>::zeros(k, k);
    for (idx, &l) in eig.eigenvalues.iter().enumerate() {
        if l > 1e-12 * max {
            let col = q.column(idx);
            s += (col * col.adjoint()) * C64::new(1.0 / l.sqrt(), 0.0);
        }
    }
    (0..k)
        .map(|a| {
            let mut out = vec![ZERO; dim];
            for (b, t) in images.iter().enumerate() {
                let c = s[(b, a)];
                if c.norm() > 0.0 {
                    for (o, x) in out.iter_mut().zip(t) {
                        *o += c * x;
                    }
                }
            }
            (crate::linalg::norm_sqr(&out) > 1e-20).then_some(out)
        })
        .collect()
}

pub(crate) type Basis = Vec<Vec<C64>>;

/// Perturbed split of a syndrome subspace: `primary` are the distorted
/// codeword images (orthonormalized to give the main branch), `others` the
/// undistorted vectors of the remaining branches, which are projected off
/// the main branch and orthonormalized together. `None` if singular.
pub(crate) fn perturbed_split(primary: &[Vec<C64>], others: &[Basis]) -> Option<(Basis, Vec<Basis>)> {
    let main = lowdin(primary)?;
    let flat: Vec<Vec<C64>> = others.iter().flatten().map(|v| project_out(v, &main)).collect();
    let rest = lowdin(&flat)?;
    let mut it = rest.into_iter();
    let grouped = others.iter().map(|g| it.by_ref().take(g.len()).collect()).collect();
    Some((main, grouped))
}

pub(crate) fn apply_pauli_all(p: &PauliOperator, vs: &[Vec<C64>]) -> Vec<Vec<C64>> {
    vs.iter().map(|v| crate::linalg::StateMap::apply_to(p, v)).collect()
}

pub(crate) fn some_rows(vs: Vec<Vec<C64>>) -> Vec<Option<Vec<C64>>> {
    vs.into_iter().map(Some).collect()
}

pub(crate) fn require_gamma(mode: RecoveryMode, gamma: Option<f64>) -> Result<Option<f64>> {
    match (mode.needs_gamma(), gamma) {
        (true, None) => Err(Error::MissingGamma(mode.to_string())),
        (true, Some(g)) => {
            check_gamma(g)?;
            Ok(Some(g))
        }
        (false, Some(_)) => Err(Error::InvalidArgument(format!("recovery mode {mode} does not take a damping parameter"))),
        (false, None) => Ok(None),
    }
}

/// 1-based qubit list for labels.
pub(crate) fn qubit_list(qs: &[usize]) -> String {
    qs.iter().map(|q| (q + 1).to_string()).collect::<Vec<_>>().join(",")
}

/// Builds the recovery for one of the named codes.
pub fn build_recovery(code: CodeId, mode: RecoveryMode, gamma: Option<f64>) -> Result<RecoveryOperation> {
    let unsupported = || Error::InvalidArgument(format!("recovery mode {mode} is not available for {code}"));
    match (code, mode) {
        (_, RecoveryMode::GenericStabilizer) => generic_stabilizer_recovery(&code.build()?, false),
        (_, RecoveryMode::AdaptedStabilizer) => generic_stabilizer_recovery(&code.build()?, true),
        (CodeId::Leung41, _) => leung41_recovery(mode, gamma),
        (CodeId::Pair(m), RecoveryMode::Projection | RecoveryMode::Perturbed) => pair_code_recovery(m, mode, gamma),
        (CodeId::PairGrouped(m), RecoveryMode::Projection | RecoveryMode::Perturbed) => {
            let c = code.build()?;
            let pairs: Vec<(usize, usize)> = (0..=m).map(|j| (2 * j, 2 * j + 1)).collect();
            pair_family_recovery(&c, &pairs, mode, gamma)
        }
        (CodeId::Hamming73, RecoveryMode::Projection | RecoveryMode::Perturbed) => hamming73_recovery(mode, gamma),
        (CodeId::Shor91, RecoveryMode::Projection | RecoveryMode::Perturbed) => shor_recovery(mode, gamma),
        _ => Err(unsupported()),
    }
}

/// The recovery each code is usually evaluated with.
pub fn default_mode(code: CodeId) -> RecoveryMode {
    match code {
        CodeId::Gottesman83 => RecoveryMode::AdaptedStabilizer,
        _ => RecoveryMode::Projection,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{norm_sqr, ONE};

    #[test]
    fn polar_of_parallel_images_is_jointly_normalized() {
        let t = vec![vec![ONE, ZERO], vec![-ONE * 2.0, ZERO]];
        let rows = polar_rows(&t);
        let r0 = rows[0].as_ref().unwrap();
        let r1 = rows[1].as_ref().unwrap();
        assert!((norm_sqr(r0) + norm_sqr(r1) - 1.0).abs() < 1e-12);
        assert!((r1[0] / r0[0] - C64::new(-2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn polar_of_orthogonal_images_normalizes() {
        let t = vec![vec![ONE * 3.0, ZERO], vec![ZERO, ONE * 0.5]];
        let rows = polar_rows(&t);
        assert!((rows[0].as_ref().unwrap()[0] - ONE).norm() < 1e-12);
        assert!((rows[1].as_ref().unwrap()[1] - ONE).norm() < 1e-12);
        assert!(polar_rows(&[vec![ZERO, ZERO]])[0].is_none());
    }

    #[test]
    fn mode_names_round_trip() {
        for m in RecoveryMode::all() {
            assert_eq!(m.name().parse::<RecoveryMode>().unwrap(), m);
        }
        assert_eq!("stabilizer".parse::<RecoveryMode>().unwrap(), RecoveryMode::Projection);
        assert_eq!("gamma_dependent".parse::<RecoveryMode>().unwrap(), RecoveryMode::Perturbed);
        assert!("optimal".parse::<RecoveryMode>().is_err());
    }

    #[test]
    fn gamma_presence_is_checked() {
        assert!(matches!(require_gamma(RecoveryMode::Perturbed, None), Err(Error::MissingGamma(_))));
        assert!(require_gamma(RecoveryMode::Projection, Some(0.1)).is_err());
        assert!(require_gamma(RecoveryMode::Perturbed, Some(1.2)).is_err());
    }
}
