use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::{StateMap, C64};
use crate::pauli::{PauliKind, PauliOperator};
use crate::stabilizer::StabilizerCode;

use super::{some_rows, Measurement, RecoveryElement, RecoveryMode, RecoveryOperation};

fn syndrome(code: &StabilizerCode, p: &PauliOperator) -> u64 {
    code.generators()
        .iter()
        .enumerate()
        .fold(0, |acc, (i, g)| if g.commutes_unchecked(p) { acc } else { acc | 1 << i })
}

fn measurements(code: &StabilizerCode, s: u64) -> Vec<Measurement> {
    code.generators()
        .iter()
        .enumerate()
        .map(|(i, g)| Measurement::new(g.clone(), s >> i & 1 == 0))
        .collect()
}

fn element(code: &StabilizerCode, codewords: &[Vec<C64>], s: u64, correction: &PauliOperator, label: String) -> RecoveryElement {
    let rows: Vec<Vec<C64>> = codewords.iter().map(|c| correction.apply_to(c)).collect();
    RecoveryElement::new(label, measurements(code, s), vec![], correction.to_string()).with_rows(some_rows(rows))
}

/// Textbook recovery: every syndrome of a single-qubit Pauli is corrected by
/// that Pauli. The remaining syndromes are discarded (`adapted = false`) or
/// corrected by the first two-qubit `X`/`Y` product that produces them,
/// in order of qubit pair then letters.
pub fn generic_stabilizer_recovery(code: &StabilizerCode, adapted: bool) -> Result<RecoveryOperation> {
    let n = code.n();
    let r = code.generators().len();
    if r >= 63 {
        return Err(Error::TooManyQubits { n, max: 62 });
    }
    let mode = if adapted { RecoveryMode::AdaptedStabilizer } else { RecoveryMode::GenericStabilizer };
    let mut op = RecoveryOperation::new(code, mode, None);
    let cw = code.codewords()?;
    let codewords = cw.vectors();

    let mut candidates = vec![PauliOperator::identity(n)?];
    for q in 0..n {
        for kind in [PauliKind::X, PauliKind::Y, PauliKind::Z] {
            candidates.push(PauliOperator::single(n, q, kind)?);
        }
    }
    let mut table: HashMap<u64, PauliOperator> = HashMap::new();
    for c in candidates {
        let s = syndrome(code, &c);
        if let Some(prev) = table.get(&s) {
            // degenerate pairs act identically on the code
            if code.group().contains(&prev.mul_unchecked(&c).unsigned()) {
                continue;
            }
            return Err(Error::SyndromeCollision(prev.to_string(), c.to_string()));
        }
        let label = if c.is_identity() { "trivial syndrome".to_string() } else { format!("single {}", c) };
        op.elements.push(element(code, codewords, s, &c, label));
        table.insert(s, c);
    }

    let mut leftovers: Vec<u64> = (0..1u64 << r).filter(|s| !table.contains_key(s)).collect();
    if adapted {
        let mut assigned = Vec::new();
        'pairs: for i in 0..n {
            for j in i + 1..n {
                for (a, b) in [(PauliKind::X, PauliKind::X), (PauliKind::X, PauliKind::Y), (PauliKind::Y, PauliKind::X), (PauliKind::Y, PauliKind::Y)] {
                    if leftovers.is_empty() {
                        break 'pairs;
                    }
                    let p = PauliOperator::single(n, i, a)?.mul_unchecked(&PauliOperator::single(n, j, b)?);
                    let s = syndrome(code, &p);
                    if let Some(pos) = leftovers.iter().position(|&l| l == s) {
                        leftovers.remove(pos);
                        assigned.push((s, p));
                    }
                }
            }
        }
        for (s, p) in assigned {
            let label = format!("two-qubit {}", p);
            op.elements.push(element(code, codewords, s, &p, label));
        }
    }
    for s in leftovers {
        op.elements.push(RecoveryElement::new("unassigned syndrome", measurements(code, s), vec![], "I"));
    }
    Ok(op)
}
