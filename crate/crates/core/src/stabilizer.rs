//! Stabilizer groups, codes and the damped-subspace calculus.

use std::fmt;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{inner, norm_sqr, StateMap, C64, ONE, ZERO};
use crate::pauli::{check_state_dim, PauliKind, PauliOperator, Phase, MAX_DENSE_QUBITS};

/// Default tolerance for the Knill-Laflamme test.
pub const KL_TOLERANCE: f64 = 1e-9;

/// Incremental GF(2) row reduction over symplectic vectors that remembers
/// which inputs were combined, so signs can be recovered afterwards.
#[derive(Clone, Debug, Default)]
pub(crate) struct Gf2Basis {
    // (vector, combination of inputs), sorted by leading bit, descending
    rows: Vec<(u128, u128)>,
}

fn lead(v: u128) -> u32 {
    127 - v.leading_zeros()
}

impl Gf2Basis {
    pub(crate) fn reduce(&self, mut v: u128) -> (u128, u128) {
        let mut combo = 0u128;
        for &(r, c) in &self.rows {
            if v >> lead(r) & 1 == 1 {
                v ^= r;
                combo ^= c;
            }
        }
        (v, combo)
    }

    /// Inserts input `id`; on dependence returns the inputs whose sum is `v`.
    pub(crate) fn insert(&mut self, v: u128, id: usize) -> std::result::Result<(), u128> {
        let (res, combo) = self.reduce(v);
        if res == 0 {
            return Err(combo);
        }
        let row = (res, combo ^ (1u128 << id));
        let pos = self.rows.iter().position(|&(r, _)| lead(r) < lead(res)).unwrap_or(self.rows.len());
        self.rows.insert(pos, row);
        Ok(())
    }
}

fn product(n: usize, ops: &[PauliOperator], combo: u128) -> PauliOperator {
    let mut acc = PauliOperator::raw(n, 0, 0, Phase::One);
    for (i, g) in ops.iter().enumerate() {
        if combo >> i & 1 == 1 {
            acc = acc.mul_unchecked(g);
        }
    }
    acc
}

/// An abelian group of Pauli operators not containing `-I`, given by
/// independent Hermitian generators.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilizerGroup {
    n: usize,
    generators: Vec<PauliOperator>,
}

impl StabilizerGroup {
    pub fn new(n: usize, generators: Vec<PauliOperator>) -> Result<Self> {
        if n == 0 || n > crate::pauli::MAX_QUBITS {
            return Err(Error::TooManyQubits { n, max: crate::pauli::MAX_QUBITS });
        }
        for g in &generators {
            if g.n() != n {
                return Err(Error::LengthMismatch { left: n, right: g.n() });
            }
            if !g.is_hermitian() {
                return Err(Error::NonHermitian(g.to_string()));
            }
        }
        for (i, a) in generators.iter().enumerate() {
            for b in &generators[i + 1..] {
                if !a.commutes_unchecked(b) {
                    return Err(Error::NonCommuting(a.to_string(), b.to_string()));
                }
            }
        }
        let mut basis = Gf2Basis::default();
        for (i, g) in generators.iter().enumerate() {
            if let Err(combo) = basis.insert(g.symplectic(), i) {
                let p = product(n, &generators, combo).mul_unchecked(g);
                return Err(if p.phase() == Phase::MinusOne {
                    Error::ContainsMinusIdentity
                } else {
                    Error::DependentGenerator(g.to_string())
                });
            }
        }
        Ok(StabilizerGroup { n, generators })
    }

    pub fn from_strs(items: &[&str]) -> Result<Self> {
        let gens = crate::pauli::parse_list(items)?;
        let n = gens.first().map(|g| g.n()).ok_or_else(|| Error::InvalidArgument("no generators".into()))?;
        Self::new(n, gens)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// log2 of the dimension of the stabilized subspace.
    pub fn log_dim(&self) -> usize {
        self.n - self.generators.len()
    }

    fn basis(&self) -> Gf2Basis {
        let mut b = Gf2Basis::default();
        for (i, g) in self.generators.iter().enumerate() {
            b.insert(g.symplectic(), i).expect("generators are independent");
        }
        b
    }

    /// `Some(true)` if `p` is in the group, `Some(false)` if `-p` is,
    /// `None` otherwise.
    pub fn sign_of(&self, p: &PauliOperator) -> Option<bool> {
        if p.n() != self.n {
            return None;
        }
        let (res, combo) = self.basis().reduce(p.symplectic());
        if res != 0 {
            return None;
        }
        let q = product(self.n, &self.generators, combo);
        if q.phase() == p.phase() {
            Some(true)
        } else if q.phase() == p.phase().negate() {
            Some(false)
        } else {
            None
        }
    }

    pub fn contains(&self, p: &PauliOperator) -> bool {
        self.sign_of(p) == Some(true)
    }

    /// Same set of group elements (generators may differ).
    pub fn same_group(&self, other: &StabilizerGroup) -> bool {
        self.n == other.n
            && self.len() == other.len()
            && other.generators.iter().all(|g| self.contains(g))
    }

    pub fn commutes_with_all(&self, p: &PauliOperator) -> bool {
        self.generators.iter().all(|g| g.commutes_unchecked(p))
    }

    /// Adds a generator, dropping it if `+g` is already in the group.
    pub fn with_generator(&self, g: PauliOperator) -> Result<Self> {
        match self.sign_of(&g) {
            Some(true) => Ok(self.clone()),
            Some(false) => Err(Error::ContainsMinusIdentity),
            None => {
                let mut gens = self.generators.clone();
                gens.push(g);
                Self::new(self.n, gens)
            }
        }
    }

    /// Applies `(I + g)/2` for every generator.
    pub fn project(&self, v: &[C64]) -> Result<Vec<C64>> {
        check_state_dim(self.n, v.len())?;
        let mut cur = v.to_vec();
        for g in &self.generators {
            let gv = g.apply_to(&cur);
            for (c, x) in cur.iter_mut().zip(gv) {
                *c = (*c + x) * 0.5;
            }
        }
        Ok(cur)
    }

    pub fn projector(&self) -> Result<DMatrix<C64>> {
        if self.n > MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits { n: self.n, max: MAX_DENSE_QUBITS });
        }
        let dim = 1usize << self.n;
        let mut m = DMatrix::zeros(dim, dim);
        let mut e = vec![ZERO; dim];
        for j in 0..dim {
            e[j] = ONE;
            let col = self.project(&e)?;
            e[j] = ZERO;
            for (i, a) in col.into_iter().enumerate() {
                m[(i, j)] = a;
            }
        }
        Ok(m)
    }

    /// Signed diagonal (Z-type) elements spanning the diagonal subgroup.
    fn diagonal_elements(&self) -> Vec<PauliOperator> {
        let mut b = Gf2Basis::default();
        let mut out = Vec::new();
        for (i, g) in self.generators.iter().enumerate() {
            if let Err(combo) = b.insert((g.x_bits() as u128) << 64, i) {
                out.push(product(self.n, &self.generators, combo | 1u128 << i));
            }
        }
        out
    }

    /// Smallest basis index `j` with `<j|P|j> != 0`, `P` the projector.
    pub fn first_support_index(&self) -> Result<usize> {
        if self.n > 30 {
            return Err(Error::TooManyQubits { n: self.n, max: 30 });
        }
        let diag = self.diagonal_elements();
        (0..1usize << self.n)
            .find(|&j| {
                diag.iter().all(|d| {
                    let odd = (d.z_bits() & j as u64).count_ones() % 2 == 1;
                    (d.phase() == Phase::One) != odd
                })
            })
            .ok_or(Error::ContainsMinusIdentity)
    }

    /// Rewrites the generators preferring `candidates` (compared without
    /// sign), in order. Falls back to the current generators for whatever
    /// the candidates cannot span.
    pub fn rebased(&self, candidates: &[PauliOperator]) -> StabilizerGroup {
        let mut chosen = Vec::new();
        let mut basis = Gf2Basis::default();
        let pool = candidates.iter().map(|c| c.unsigned()).chain(self.generators.iter().cloned());
        for c in pool {
            if chosen.len() == self.len() {
                break;
            }
            let Some(sign) = self.sign_of(&c.unsigned()) else { continue };
            if basis.insert(c.symplectic(), chosen.len()).is_ok() {
                chosen.push(if sign { c.unsigned() } else { c.unsigned().negated() });
            }
        }
        StabilizerGroup { n: self.n, generators: chosen }
    }

    /// Stabilizer of the (unnormalized) image of the subspace under damping
    /// of `qubit`, i.e. under `|0><1|` on that qubit.
    pub fn damped(&self, qubit: usize) -> Result<StabilizerGroup> {
        if qubit >= self.n {
            return Err(Error::QubitOutOfRange { index: qubit, n: self.n });
        }
        let mask = 1u64 << (self.n - 1 - qubit);
        let mut gens = self.generators.clone();

        // generators with X or Y on the qubit: keep only products of pairs
        if let Some(p) = gens.iter().position(|g| g.x_bits() & mask != 0) {
            let pivot = gens.remove(p);
            for g in gens.iter_mut() {
                if g.x_bits() & mask != 0 {
                    *g = g.mul_unchecked(&pivot);
                }
            }
        }
        // the remaining Z on the qubit picks up a sign
        if let Some(p) = gens.iter().position(|g| g.z_bits() & mask != 0) {
            let pivot = gens[p].clone();
            for (i, g) in gens.iter_mut().enumerate() {
                if i != p && g.z_bits() & mask != 0 {
                    *g = g.mul_unchecked(&pivot);
                }
            }
            gens[p] = gens[p].negated();
        }
        gens.push(PauliOperator::raw(self.n, 0, mask, Phase::One));

        let mut kept: Vec<PauliOperator> = Vec::new();
        let mut basis = Gf2Basis::default();
        for g in gens {
            match basis.insert(g.symplectic(), kept.len()) {
                Ok(()) => kept.push(g),
                Err(combo) => {
                    if product(self.n, &kept, combo).mul_unchecked(&g).phase() != Phase::One {
                        return Err(Error::EmptySubspace(qubit));
                    }
                }
            }
        }
        Ok(StabilizerGroup { n: self.n, generators: kept })
    }
}

impl fmt::Display for StabilizerGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        write!(f, "<{}>", parts.join(", "))
    }
}

/// Stabilizer of the image of the code space after damping each listed
/// qubit (0-based) in turn.
pub fn damped_subspace(group: &StabilizerGroup, qubits: &[usize]) -> Result<StabilizerGroup> {
    let mut g = group.clone();
    for &q in qubits {
        g = g.damped(q)?;
    }
    Ok(g)
}

/// Two stabilizer subspaces are orthogonal iff some `g` stabilizes one and
/// `-g` the other.
pub fn are_orthogonal(a: &StabilizerGroup, b: &StabilizerGroup) -> Result<bool> {
    if a.n != b.n {
        return Err(Error::LengthMismatch { left: a.n, right: b.n });
    }
    let la = a.generators.len();
    let mut all = a.generators.clone();
    all.extend(b.generators.iter().cloned());
    let mut basis = Gf2Basis::default();
    for (i, g) in all.iter().enumerate() {
        if let Err(combo) = basis.insert(g.symplectic(), i) {
            let combo = combo | 1u128 << i;
            let mask_a = (1u128 << la) - 1;
            let pa = product(a.n, &all, combo & mask_a);
            let pb = product(a.n, &all, combo & !mask_a);
            if pa.phase() != pb.phase() {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompletionOrder {
    /// Lowest weight first, ties broken by string order with `I < X < Y < Z`.
    Lexicographic,
    /// Lowest weight first, ties broken by reversed string order.
    ReverseLexicographic,
}

fn candidates_of_weight(n: usize, w: usize, order: CompletionOrder) -> Vec<PauliOperator> {
    let mut out = Vec::new();
    let mut subset: Vec<usize> = (0..w).collect();
    loop {
        for mut code in 0..3usize.pow(w as u32) {
            let mut kinds = vec![PauliKind::I; n];
            for &q in &subset {
                kinds[q] = [PauliKind::X, PauliKind::Y, PauliKind::Z][code % 3];
                code /= 3;
            }
            out.push(kinds);
        }
        // next combination
        let mut i = w;
        loop {
            if i == 0 {
                out.sort();
                if order == CompletionOrder::ReverseLexicographic {
                    out.reverse();
                }
                return out.iter().map(|k| PauliOperator::from_kinds(k).expect("n <= 64")).collect();
            }
            i -= 1;
            if subset[i] < n - w + i {
                subset[i] += 1;
                for j in i + 1..w {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Deterministic choice of logical operators for a stabilizer group: the
/// lowest-weight operators satisfying the symplectic constraints.
pub fn complete_logicals(
    group: &StabilizerGroup,
    order: CompletionOrder,
) -> Result<(Vec<PauliOperator>, Vec<PauliOperator>)> {
    let n = group.n;
    let k = group.log_dim();
    let mut zs: Vec<PauliOperator> = Vec::new();
    let mut basis = group.basis();
    'z: for w in 1..=n {
        if zs.len() == k {
            break;
        }
        for c in candidates_of_weight(n, w, order) {
            if !group.commutes_with_all(&c) || !zs.iter().all(|z| z.commutes_unchecked(&c)) {
                continue;
            }
            if basis.insert(c.symplectic(), group.len() + zs.len()).is_ok() {
                zs.push(c);
                if zs.len() == k {
                    break 'z;
                }
            }
        }
    }
    let mut xs: Vec<PauliOperator> = Vec::new();
    for i in 0..k {
        let found = (1..=n).find_map(|w| {
            candidates_of_weight(n, w, order).into_iter().find(|c| {
                group.commutes_with_all(c)
                    && zs.iter().enumerate().all(|(j, z)| z.commutes_unchecked(c) != (i == j))
                    && xs.iter().all(|x| x.commutes_unchecked(c))
            })
        });
        xs.push(found.ok_or_else(|| Error::InvalidLogicals("completion failed".into()))?);
    }
    if zs.len() != k {
        return Err(Error::InvalidLogicals("completion failed".into()));
    }
    Ok((xs, zs))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilizerCode {
    name: String,
    group: StabilizerGroup,
    logical_x: Vec<PauliOperator>,
    logical_z: Vec<PauliOperator>,
}

impl StabilizerCode {
    pub fn new(
        name: impl Into<String>,
        group: StabilizerGroup,
        logical_x: Vec<PauliOperator>,
        logical_z: Vec<PauliOperator>,
    ) -> Result<Self> {
        let k = group.log_dim();
        if logical_x.len() != k || logical_z.len() != k {
            return Err(Error::InvalidLogicals(format!(
                "expected {k} logical X and Z operators, got {} and {}",
                logical_x.len(),
                logical_z.len()
            )));
        }
        for l in logical_x.iter().chain(&logical_z) {
            if l.n() != group.n {
                return Err(Error::LengthMismatch { left: group.n, right: l.n() });
            }
            if !l.is_hermitian() {
                return Err(Error::NonHermitian(l.to_string()));
            }
            if !group.commutes_with_all(l) {
                return Err(Error::InvalidLogicals(format!("{l} does not commute with the stabilizer")));
            }
        }
        for i in 0..k {
            for j in 0..k {
                let anti = !logical_x[i].commutes_unchecked(&logical_z[j]);
                if anti != (i == j) {
                    return Err(Error::InvalidLogicals(format!(
                        "X{} and Z{} have the wrong commutation",
                        i + 1,
                        j + 1
                    )));
                }
                if !logical_x[i].commutes_unchecked(&logical_x[j]) || !logical_z[i].commutes_unchecked(&logical_z[j]) {
                    return Err(Error::InvalidLogicals("logical operators of one type must commute".into()));
                }
            }
        }
        let mut basis = group.basis();
        for (i, z) in logical_z.iter().enumerate() {
            if basis.insert(z.symplectic(), group.len() + i).is_err() {
                return Err(Error::InvalidLogicals(format!("{z} is dependent on the stabilizer")));
            }
        }
        Ok(StabilizerCode { name: name.into(), group, logical_x, logical_z })
    }

    /// Code with logical operators chosen by [`complete_logicals`].
    pub fn with_completed_logicals(
        name: impl Into<String>,
        group: StabilizerGroup,
        order: CompletionOrder,
    ) -> Result<Self> {
        let (xs, zs) = complete_logicals(&group, order)?;
        Self::new(name, group, xs, zs)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.group.n
    }

    pub fn k(&self) -> usize {
        self.group.log_dim()
    }

    pub fn group(&self) -> &StabilizerGroup {
        &self.group
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.group.generators
    }

    pub fn logical_x(&self) -> &[PauliOperator] {
        &self.logical_x
    }

    pub fn logical_z(&self) -> &[PauliOperator] {
        &self.logical_z
    }

    pub fn renamed(&self, name: impl Into<String>) -> Self {
        StabilizerCode { name: name.into(), ..self.clone() }
    }

    /// Stabilizer of the single codeword `|b_L>`; `b` has logical qubit 1
    /// as its most significant bit.
    pub fn codeword_group(&self, b: usize) -> Result<StabilizerGroup> {
        let k = self.k();
        if b >= 1 << k {
            return Err(Error::InvalidArgument(format!("logical index {b} out of range")));
        }
        let mut gens = self.group.generators.clone();
        for (i, z) in self.logical_z.iter().enumerate() {
            let bit = b >> (k - 1 - i) & 1;
            gens.push(if bit == 1 { z.negated() } else { z.clone() });
        }
        StabilizerGroup::new(self.n(), gens)
    }

    /// Logical basis states, normalized, each with its first nonzero
    /// amplitude real and positive.
    pub fn codewords(&self) -> Result<Codewords> {
        let n = self.n();
        check_state_dim(n, 1usize << n.min(30))?;
        let dim = 1usize << n;
        let vectors = (0..1usize << self.k())
            .map(|b| {
                let g = self.codeword_group(b)?;
                let j = g.first_support_index()?;
                let mut e = vec![ZERO; dim];
                e[j] = ONE;
                let v = g.project(&e)?;
                let norm = norm_sqr(&v).sqrt();
                Ok(v.into_iter().map(|a| a / norm).collect())
            })
            .collect::<Result<Vec<Vec<C64>>>>()?;
        Ok(Codewords { n, k: self.k(), vectors })
    }

    /// Knill-Laflamme test for a set of error operators.
    pub fn knill_laflamme<E: StateMap>(&self, errors: &[E], tol: f64) -> Result<KlReport> {
        check_knill_laflamme(&self.codewords()?, errors, tol)
    }

    /// Brings a member of the pair-code family to its standard layout.
    pub fn standard_form(&self) -> Result<StandardForm> {
        standard_form(self)
    }

    /// Stabilizer of the damped code space written in terms of the code
    /// generators where possible, then `Z` on the damped qubits, then the
    /// other single-qubit `Z`s in qubit order.
    pub fn damped_subspace(&self, qubits: &[usize]) -> Result<StabilizerGroup> {
        self.damped_subspace_preferring(qubits, &[])
    }

    /// As [`StabilizerCode::damped_subspace`], trying `preferred` right after
    /// the code generators.
    pub fn damped_subspace_preferring(&self, qubits: &[usize], preferred: &[PauliOperator]) -> Result<StabilizerGroup> {
        let g = damped_subspace(self.group(), qubits)?;
        let n = self.n();
        if let Some(p) = preferred.iter().find(|p| p.n() != n) {
            return Err(Error::LengthMismatch { left: n, right: p.n() });
        }
        let z = |q: usize| PauliOperator::raw(n, 0, 1u64 << (n - 1 - q), Phase::One);
        let mut candidates: Vec<PauliOperator> = self.generators().to_vec();
        candidates.extend(preferred.iter().cloned());
        candidates.extend(qubits.iter().map(|&q| z(q)));
        candidates.extend((0..n).filter(|q| !qubits.contains(q)).map(z));
        Ok(g.rebased(&candidates))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Codewords {
    n: usize,
    k: usize,
    vectors: Vec<Vec<C64>>,
}

impl Codewords {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vectors(&self) -> &[Vec<C64>] {
        &self.vectors
    }

    pub fn get(&self, b: usize) -> &[C64] {
        &self.vectors[b]
    }

    /// Encoding isometry `V = sum_b |b_L><b|`.
    pub fn encoder(&self) -> Result<DMatrix<C64>> {
        if self.n > MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits { n: self.n, max: MAX_DENSE_QUBITS });
        }
        let dim = 1usize << self.n;
        Ok(DMatrix::from_fn(dim, self.vectors.len(), |i, b| self.vectors[b][i]))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct KlReport {
    pub correctable: bool,
    pub max_violation: f64,
    /// `c_ab` with `P E_a^dag E_b P = c_ab P`, read off the traces.
    #[serde(skip)]
    pub coefficients: DMatrix<C64>,
}

/// Knill-Laflamme conditions `P E_a^dag E_b P = c_ab P` on the span of the
/// given codewords. The violation is the largest entrywise deviation.
pub fn check_knill_laflamme<E: StateMap>(codewords: &Codewords, errors: &[E], tol: f64) -> Result<KlReport> {
    let dim = 1usize << codewords.n;
    let k = codewords.vectors.len();
    for e in errors {
        if e.input_dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: e.input_dim() });
        }
    }
    let images: Vec<Vec<Vec<C64>>> = errors
        .iter()
        .map(|e| codewords.vectors.iter().map(|c| e.apply_to(c)).collect())
        .collect();
    let m = errors.len();
    let mut coefficients = DMatrix::zeros(m, m);
    let mut worst = 0.0f64;
    for a in 0..m {
        for b in 0..m {
            let block: Vec<Vec<C64>> = (0..k)
                .map(|i| (0..k).map(|j| inner(&images[a][i], &images[b][j])).collect())
                .collect();
            let c: C64 = (0..k).map(|i| block[i][i]).sum::<C64>() / k as f64;
            coefficients[(a, b)] = c;
            for (i, row) in block.iter().enumerate() {
                for (j, &x) in row.iter().enumerate() {
                    let expect = if i == j { c } else { ZERO };
                    worst = worst.max((x - expect).norm());
                }
            }
        }
    }
    Ok(KlReport { correctable: worst <= tol, max_violation: worst, coefficients })
}

/// Qubit permutation (old index to new index) plus the permuted code with
/// its systematic logical operators.
#[derive(Clone, Debug, PartialEq)]
pub struct StandardForm {
    pub permutation: Vec<usize>,
    pub code: StabilizerCode,
}

fn standard_form(code: &StabilizerCode) -> Result<StandardForm> {
    let n = code.n();
    let err = |why: &str| Error::InvalidArgument(format!("{} has no pair-code standard form: {why}", code.name));
    if !n.is_multiple_of(2) || n < 4 {
        return Err(err("needs an even number of qubits, at least 4"));
    }
    let m = n / 2 - 1;
    if code.group.len() != m + 2 {
        return Err(err("wrong number of generators"));
    }
    let all_x = PauliOperator::raw(n, (1u64 << n) - 1, 0, Phase::One);
    if !code.group.contains(&all_x) {
        return Err(err("X on every qubit is not a stabilizer"));
    }
    // weight-two +ZZ elements must pair up the qubits
    let mut partner = vec![None; n];
    for a in 0..n {
        for b in a + 1..n {
            let zz = PauliOperator::raw(n, 0, (1u64 << (n - 1 - a)) | (1u64 << (n - 1 - b)), Phase::One);
            if code.group.contains(&zz) {
                if partner[a].is_some() || partner[b].is_some() {
                    return Err(err("Z pairs overlap"));
                }
                partner[a] = Some(b);
                partner[b] = Some(a);
            }
        }
    }
    if partner.iter().any(|p| p.is_none()) {
        return Err(err("not every qubit sits in a +ZZ pair"));
    }
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .filter_map(|a| partner[a].filter(|&b| b > a).map(|b| (a, b)))
        .collect();
    pairs.sort();
    let mut permutation = vec![0; n];
    for (j, &(a, b)) in pairs.iter().enumerate() {
        let (na, nb) = if j == 0 { (0, 1) } else { (1 + j, n - j) };
        permutation[a] = na;
        permutation[b] = nb;
    }
    let target = crate::codes::pair_code(m)?;
    let permuted: Vec<PauliOperator> =
        code.group.generators.iter().map(|g| g.permuted(&permutation)).collect::<Result<_>>()?;
    let group = StabilizerGroup::new(n, permuted)?;
    if !group.same_group(target.group()) {
        return Err(err("stabilizer differs from the pair code after relabeling"));
    }
    Ok(StandardForm {
        permutation,
        code: target.renamed(format!("{} (standard form)", code.name)),
    })
}
