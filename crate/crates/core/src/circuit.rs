//! Clifford circuits: encoders, syndrome extraction, recovery unitaries,
//! a dense simulator for small registers, and a QASM-like text format.
//!
//! Qubits are 0-based everywhere in this module and in the text format.
//! Data qubits come first and are the most significant bits of a state
//! index; ancillas follow and start in `|0>`.

use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::codes::{hamming_73, pair_code, pair_layout, shor_91, SHOR_BLOCKS};
use crate::error::{Error, Result};
use crate::linalg::{norm_sqr, C64, ZERO};
use crate::pauli::{PauliKind, PauliOperator, Phase};

/// Largest register the simulator accepts.
pub const MAX_SIM_QUBITS: usize = 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Gate {
    H(usize),
    X(usize),
    Z(usize),
    Cx { control: usize, target: usize },
    Measure { qubit: usize, cbit: usize },
}

impl Gate {
    fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::X(q) | Gate::Z(q) => vec![q],
            Gate::Cx { control, target } => vec![control, target],
            Gate::Measure { qubit, .. } => vec![qubit],
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::H(q) => write!(f, "h q[{q}]"),
            Gate::X(q) => write!(f, "x q[{q}]"),
            Gate::Z(q) => write!(f, "z q[{q}]"),
            Gate::Cx { control, target } => write!(f, "cx q[{control}],q[{target}]"),
            Gate::Measure { qubit, cbit } => write!(f, "measure q[{qubit}] -> c[{cbit}]"),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GateCensus {
    pub h: usize,
    pub x: usize,
    pub z: usize,
    pub cx: usize,
    pub measure: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Circuit {
    num_data: usize,
    num_ancilla: usize,
    num_cbits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_data: usize, num_ancilla: usize, num_cbits: usize) -> Result<Self> {
        if num_data == 0 || num_data + num_ancilla > 64 {
            return Err(Error::Circuit(format!("unsupported register of {num_data}+{num_ancilla} qubits")));
        }
        Ok(Circuit { num_data, num_ancilla, num_cbits, gates: Vec::new() })
    }

    pub fn num_data(&self) -> usize {
        self.num_data
    }

    pub fn num_ancilla(&self) -> usize {
        self.num_ancilla
    }

    pub fn num_qubits(&self) -> usize {
        self.num_data + self.num_ancilla
    }

    pub fn num_cbits(&self) -> usize {
        self.num_cbits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        let total = self.num_qubits();
        for q in gate.qubits() {
            if q >= total {
                return Err(Error::Circuit(format!("{gate}: qubit {q} outside a {total}-qubit register")));
            }
        }
        match gate {
            Gate::Cx { control, target } if control == target => {
                return Err(Error::Circuit(format!("{gate}: control equals target")));
            }
            Gate::Measure { qubit, cbit } => {
                if qubit < self.num_data {
                    return Err(Error::Circuit(format!("{gate}: only ancillas are measured")));
                }
                if cbit >= self.num_cbits {
                    return Err(Error::Circuit(format!("{gate}: classical bit out of range")));
                }
            }
            _ => {}
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn census(&self) -> GateCensus {
        let mut c = GateCensus::default();
        for g in &self.gates {
            match g {
                Gate::H(_) => c.h += 1,
                Gate::X(_) => c.x += 1,
                Gate::Z(_) => c.z += 1,
                Gate::Cx { .. } => c.cx += 1,
                Gate::Measure { .. } => c.measure += 1,
            }
        }
        c
    }

    pub fn is_unitary(&self) -> bool {
        !self.gates.iter().any(|g| matches!(g, Gate::Measure { .. }))
    }

    /// Every gate here is self-inverse, so the inverse is the reversed list.
    pub fn inverse(&self) -> Result<Circuit> {
        if !self.is_unitary() {
            return Err(Error::Circuit("cannot invert a circuit with measurements".into()));
        }
        let mut c = self.clone();
        c.gates.reverse();
        Ok(c)
    }

    /// Applies the gates in order to a state on the full register.
    pub fn apply_unitary(&self, state: &mut [C64]) -> Result<()> {
        if !self.is_unitary() {
            return Err(Error::Circuit("circuit contains measurements".into()));
        }
        let total = self.num_qubits();
        check_dim(total, state.len())?;
        for &g in &self.gates {
            apply_gate(state, total, g);
        }
        Ok(())
    }

    /// `U P U^dag` for the circuit unitary `U`.
    pub fn conjugate_pauli(&self, p: &PauliOperator) -> Result<PauliOperator> {
        if !self.is_unitary() {
            return Err(Error::Circuit("circuit contains measurements".into()));
        }
        if p.n() != self.num_qubits() {
            return Err(Error::LengthMismatch { left: self.num_qubits(), right: p.n() });
        }
        let mut cur = p.clone();
        for &g in &self.gates {
            cur = conjugate_by_gate(&cur, g);
        }
        Ok(cur)
    }
}

fn check_dim(total: usize, len: usize) -> Result<()> {
    if total > MAX_SIM_QUBITS {
        return Err(Error::TooManyQubits { n: total, max: MAX_SIM_QUBITS });
    }
    if len != 1 << total {
        return Err(Error::DimensionMismatch { expected: 1 << total, found: len });
    }
    Ok(())
}

fn bit(total: usize, q: usize) -> usize {
    1usize << (total - 1 - q)
}

pub(crate) fn apply_gate(state: &mut [C64], total: usize, gate: Gate) {
    match gate {
        Gate::H(q) => {
            let b = bit(total, q);
            let s = std::f64::consts::FRAC_1_SQRT_2;
            for j in 0..state.len() {
                if j & b == 0 {
                    let (a0, a1) = (state[j], state[j | b]);
                    state[j] = (a0 + a1) * s;
                    state[j | b] = (a0 - a1) * s;
                }
            }
        }
        Gate::X(q) => {
            let b = bit(total, q);
            for j in 0..state.len() {
                if j & b == 0 {
                    state.swap(j, j | b);
                }
            }
        }
        Gate::Z(q) => {
            let b = bit(total, q);
            for (j, a) in state.iter_mut().enumerate() {
                if j & b != 0 {
                    *a = -*a;
                }
            }
        }
        Gate::Cx { control, target } => {
            let (c, t) = (bit(total, control), bit(total, target));
            for j in 0..state.len() {
                if j & c != 0 && j & t == 0 {
                    state.swap(j, j | t);
                }
            }
        }
        Gate::Measure { .. } => unreachable!("measurements are handled by the simulator"),
    }
}

fn single(n: usize, q: usize, k: PauliKind) -> PauliOperator {
    PauliOperator::single(n, q, k).expect("qubit in range")
}

/// Image of a single-qubit factor `k` on qubit `q`.
fn image(n: usize, q: usize, k: PauliKind, gate: Gate) -> PauliOperator {
    use PauliKind::*;
    let minus = |p: PauliOperator| p.negated();
    match gate {
        Gate::H(a) if a == q => match k {
            X => single(n, q, Z),
            Z => single(n, q, X),
            _ => minus(single(n, q, Y)),
        },
        Gate::X(a) if a == q => match k {
            X => single(n, q, X),
            _ => minus(single(n, q, k)),
        },
        Gate::Z(a) if a == q => match k {
            Z => single(n, q, Z),
            _ => minus(single(n, q, k)),
        },
        Gate::Cx { control, target } if control == q && k != Z => {
            // X_c -> X_c X_t, Y_c -> Y_c X_t
            single(n, q, k).mul_unchecked(&single(n, target, X))
        }
        Gate::Cx { control, target } if target == q && k != X => {
            // Z_t -> Z_c Z_t, Y_t -> Z_c Y_t
            single(n, control, Z).mul_unchecked(&single(n, q, k))
        }
        _ => single(n, q, k),
    }
}

fn conjugate_by_gate(p: &PauliOperator, gate: Gate) -> PauliOperator {
    let n = p.n();
    let mut acc = PauliOperator::raw(n, 0, 0, p.phase());
    for q in 0..n {
        let k = p.kind(q);
        if k != PauliKind::I {
            acc = acc.mul_unchecked(&image(n, q, k, gate));
        }
    }
    acc
}

/// One measurement record with its post-measurement state.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Branch {
    /// Classical bits; 0 encodes the +1 outcome.
    pub outcomes: Vec<u8>,
    pub probability: f64,
    /// Normalized state on the full register.
    #[serde(skip)]
    pub state: Vec<C64>,
}

/// Runs the circuit on `input` (a data-register state), keeping every
/// measurement branch with nonzero probability.
pub fn simulate(circuit: &Circuit, input: &[C64]) -> Result<Vec<Branch>> {
    let total = circuit.num_qubits();
    if total > MAX_SIM_QUBITS {
        return Err(Error::TooManyQubits { n: total, max: MAX_SIM_QUBITS });
    }
    if input.len() != 1 << circuit.num_data {
        return Err(Error::DimensionMismatch { expected: 1 << circuit.num_data, found: input.len() });
    }
    let norm = norm_sqr(input);
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!("input state has norm^2 {norm}")));
    }
    let mut state = vec![ZERO; 1 << total];
    for (j, &a) in input.iter().enumerate() {
        state[j << circuit.num_ancilla] = a;
    }
    let mut branches = vec![Branch { outcomes: vec![0; circuit.num_cbits], probability: 1.0, state }];
    for &g in &circuit.gates {
        match g {
            Gate::Measure { qubit, cbit } => {
                let b = bit(total, qubit);
                let mut next = Vec::with_capacity(branches.len() * 2);
                for br in branches {
                    for outcome in [0u8, 1] {
                        let mut s = br.state.clone();
                        for (j, a) in s.iter_mut().enumerate() {
                            if (j & b != 0) != (outcome == 1) {
                                *a = ZERO;
                            }
                        }
                        let p = norm_sqr(&s);
                        if p > 1e-14 {
                            let f = 1.0 / p.sqrt();
                            s.iter_mut().for_each(|a| *a *= f);
                            let mut outcomes = br.outcomes.clone();
                            outcomes[cbit] = outcome;
                            next.push(Branch { outcomes, probability: br.probability * p, state: s });
                        }
                    }
                }
                branches = next;
            }
            _ => {
                for br in branches.iter_mut() {
                    apply_gate(&mut br.state, total, g);
                }
            }
        }
    }
    Ok(branches)
}

/// Encoder for the pair code in standard form. The `M` data qubits sit on
/// qubits `M+2 .. 2M+1` (0-based); all others start in `|0>`.
pub fn build_encoding_circuit(m: usize) -> Result<Circuit> {
    let code = pair_code(m)?;
    let n = code.n();
    let mut c = Circuit::new(n, 0, 0)?;
    for i in 1..=m {
        c.push(Gate::Cx { control: m + 1 + i, target: m + 2 - i })?;
    }
    c.push(Gate::H(0))?;
    for q in 1..n {
        c.push(Gate::Cx { control: 0, target: q })?;
    }
    Ok(c)
}

/// Data qubits (0-based) holding the logical input of the encoder, logical
/// qubit 1 first.
pub fn encoder_inputs(m: usize) -> Vec<usize> {
    (1..=m).map(|i| m + 1 + i).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CircuitCode {
    Pair(usize),
    Hamming73,
    Shor91,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SyndromeStage {
    /// The weight-two Z stabilizers.
    ZPairs,
    /// The X-type stabilizers that separate the code from its Z-flipped copies.
    NoDampingX,
    /// Z on the first qubit of each pair (or Shor block).
    PerPairZ,
    /// Hamming parity checks plus the all-X generator.
    HammingBits,
}

impl std::str::FromStr for SyndromeStage {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "z_pairs" | "z-pairs" => Ok(SyndromeStage::ZPairs),
            "no_damping_x" | "no-damping-x" => Ok(SyndromeStage::NoDampingX),
            "per_pair_z" | "per-pair-z" => Ok(SyndromeStage::PerPairZ),
            "hamming_bits" | "hamming-bits" => Ok(SyndromeStage::HammingBits),
            _ => Err(Error::InvalidArgument(format!("unknown syndrome stage `{s}`"))),
        }
    }
}

/// Operators measured at a given stage, in ancilla order.
pub fn syndrome_operators(code: CircuitCode, stage: SyndromeStage) -> Result<Vec<PauliOperator>> {
    let bad = || Error::Circuit(format!("stage {stage:?} does not apply to {code:?}"));
    match (code, stage) {
        (CircuitCode::Pair(m), SyndromeStage::ZPairs) => Ok(pair_code(m)?.generators()[1..].to_vec()),
        (CircuitCode::Pair(m), SyndromeStage::NoDampingX) => Ok(vec![pair_code(m)?.generators()[0].clone()]),
        (CircuitCode::Pair(m), SyndromeStage::PerPairZ) => {
            let n = 2 * (m + 1);
            Ok(pair_layout(m).iter().map(|&(a, _)| single(n, a, PauliKind::Z)).collect())
        }
        (CircuitCode::Hamming73, SyndromeStage::HammingBits) => Ok(hamming_73().generators().to_vec()),
        (CircuitCode::Hamming73, SyndromeStage::NoDampingX) => Ok(vec![hamming_73().generators()[3].clone()]),
        (CircuitCode::Shor91, SyndromeStage::ZPairs) => Ok(shor_91().generators()[..6].to_vec()),
        (CircuitCode::Shor91, SyndromeStage::NoDampingX) => Ok(shor_91().generators()[6..].to_vec()),
        (CircuitCode::Shor91, SyndromeStage::PerPairZ) => {
            Ok(SHOR_BLOCKS.iter().map(|b| single(9, b[0], PauliKind::Z)).collect())
        }
        _ => Err(bad()),
    }
}

/// Ancilla-based measurement of Z-type or X-type Pauli operators, one
/// ancilla and classical bit per operator.
pub fn measurement_circuit(n: usize, ops: &[PauliOperator]) -> Result<Circuit> {
    let mut c = Circuit::new(n, ops.len(), ops.len())?;
    for (j, op) in ops.iter().enumerate() {
        if op.n() != n {
            return Err(Error::LengthMismatch { left: n, right: op.n() });
        }
        if op.phase() != Phase::One {
            return Err(Error::Circuit(format!("{op}: only unsigned operators are measured")));
        }
        let anc = n + j;
        let support = op.support();
        let kinds: Vec<PauliKind> = support.iter().map(|&q| op.kind(q)).collect();
        if kinds.iter().all(|&k| k == PauliKind::Z) {
            for &q in &support {
                c.push(Gate::Cx { control: q, target: anc })?;
            }
        } else if kinds.iter().all(|&k| k == PauliKind::X) {
            c.push(Gate::H(anc))?;
            for &q in &support {
                c.push(Gate::Cx { control: anc, target: q })?;
            }
            c.push(Gate::H(anc))?;
        } else {
            return Err(Error::Circuit(format!("{op}: mixed X/Z operators are not supported")));
        }
        c.push(Gate::Measure { qubit: anc, cbit: j })?;
    }
    Ok(c)
}

pub fn build_syndrome_circuit(code: CircuitCode, stage: SyndromeStage) -> Result<Circuit> {
    let ops = syndrome_operators(code, stage)?;
    let n = ops[0].n();
    measurement_circuit(n, &ops)
}

fn check_damped_set(m: usize, damped: &[usize]) -> Result<()> {
    let n = 2 * (m + 1);
    if damped.is_empty() {
        return Err(Error::InvalidArgument("no damped qubits given".into()));
    }
    let layout = pair_layout(m);
    let mut seen_pairs = Vec::new();
    for (i, &d) in damped.iter().enumerate() {
        if d >= n {
            return Err(Error::QubitOutOfRange { index: d, n });
        }
        if damped[..i].contains(&d) {
            return Err(Error::InvalidArgument(format!("qubit {} listed twice", d + 1)));
        }
        let pair = layout.iter().position(|&(a, b)| a == d || b == d).expect("every qubit is paired");
        if seen_pairs.contains(&pair) {
            return Err(Error::InvalidArgument(format!(
                "two damped qubits in the pair containing qubit {}; the syndrome cannot see that",
                d + 1
            )));
        }
        seen_pairs.push(pair);
    }
    Ok(())
}

/// Clifford recovery for a damping syndrome of the pair code: maps the
/// damped subspace back onto the code space. `damped` lists 0-based qubits,
/// at most one per pair.
pub fn build_recovery_circuit(m: usize, damped: &[usize]) -> Result<Circuit> {
    check_damped_set(m, damped)?;
    build_recovery_circuit_with_lead(m, damped, *damped.iter().min().expect("nonempty"))
}

/// As [`build_recovery_circuit`] with the Hadamard and CNOT fan-out on
/// `lead`, which must be one of the damped qubits.
pub fn build_recovery_circuit_with_lead(m: usize, damped: &[usize], lead: usize) -> Result<Circuit> {
    check_damped_set(m, damped)?;
    if !damped.contains(&lead) {
        return Err(Error::InvalidArgument(format!("lead qubit {} is not damped", lead + 1)));
    }
    let n = 2 * (m + 1);
    let mut c = Circuit::new(n, 0, 0)?;
    c.push(Gate::H(lead))?;
    for q in (0..n).filter(|&q| q != lead) {
        c.push(Gate::Cx { control: lead, target: q })?;
    }
    let mut sorted = damped.to_vec();
    sorted.sort_unstable();
    for d in sorted {
        c.push(Gate::X(d))?;
    }
    Ok(c)
}

/// Serializes to the text format: a `qubits N / cbits M` header (with an
/// `/ ancilla A` suffix when ancillas are present), then one gate per line.
pub fn emit_text(circuit: &Circuit) -> String {
    let mut s = format!("qubits {} / cbits {}", circuit.num_qubits(), circuit.num_cbits);
    if circuit.num_ancilla > 0 {
        let _ = write!(s, " / ancilla {}", circuit.num_ancilla);
    }
    s.push('\n');
    for g in &circuit.gates {
        let _ = writeln!(s, "{g}");
    }
    s
}

fn parse_qubit(tok: &str, prefix: char) -> Option<usize> {
    let t = tok.trim();
    let inner = t.strip_prefix(prefix)?.strip_prefix('[')?.strip_suffix(']')?;
    inner.trim().parse().ok()
}

pub fn parse_text(text: &str) -> Result<Circuit> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with("//") && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or(Error::CircuitParse { line: 1, reason: "empty input".into() })?;
    let herr = |reason: &str| Error::CircuitParse { line: hl, reason: reason.into() };
    let mut total = None;
    let mut cbits = None;
    let mut ancilla = 0;
    for part in header.split('/') {
        let mut it = part.split_whitespace();
        let (Some(key), Some(val), None) = (it.next(), it.next(), it.next()) else {
            return Err(herr("expected `qubits N / cbits M`"));
        };
        let v: usize = val.parse().map_err(|_| herr("bad number in header"))?;
        match key {
            "qubits" => total = Some(v),
            "cbits" => cbits = Some(v),
            "ancilla" => ancilla = v,
            _ => return Err(herr("unknown header field")),
        }
    }
    let (Some(total), Some(cbits)) = (total, cbits) else {
        return Err(herr("expected `qubits N / cbits M`"));
    };
    if ancilla >= total {
        return Err(herr("ancilla count must be below the qubit count"));
    }
    let mut c = Circuit::new(total - ancilla, ancilla, cbits).map_err(|e| herr(&e.to_string()))?;
    for (ln, line) in lines {
        let err = |reason: &str| Error::CircuitParse { line: ln, reason: reason.into() };
        let line = line.trim_end_matches(';');
        let (op, rest) = line.split_once(char::is_whitespace).ok_or_else(|| err("missing operands"))?;
        let gate = match op {
            "h" | "x" | "z" => {
                let q = parse_qubit(rest, 'q').ok_or_else(|| err("expected q[i]"))?;
                match op {
                    "h" => Gate::H(q),
                    "x" => Gate::X(q),
                    _ => Gate::Z(q),
                }
            }
            "cx" => {
                let (a, b) = rest.split_once(',').ok_or_else(|| err("expected q[i],q[j]"))?;
                Gate::Cx {
                    control: parse_qubit(a, 'q').ok_or_else(|| err("bad control"))?,
                    target: parse_qubit(b, 'q').ok_or_else(|| err("bad target"))?,
                }
            }
            "measure" => {
                let (a, b) = rest.split_once("->").ok_or_else(|| err("expected q[i] -> c[j]"))?;
                Gate::Measure {
                    qubit: parse_qubit(a, 'q').ok_or_else(|| err("bad qubit"))?,
                    cbit: parse_qubit(b, 'c').ok_or_else(|| err("bad classical bit"))?,
                }
            }
            other => return Err(err(&format!("unknown gate `{other}`"))),
        };
        c.push(gate).map_err(|e| err(&e.to_string()))?;
    }
    Ok(c)
}
