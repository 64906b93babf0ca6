use std::collections::HashMap;

use crate::codes::hamming_73;
use crate::error::{Error, Result};
use crate::linalg::{StateMap, C64};
use crate::pauli::{PauliKind, PauliOperator};
use crate::stabilizer::StabilizerCode;

use super::pair::no_damping_elements;
use super::{require_gamma, some_rows, Measurement, RecoveryElement, RecoveryMode, RecoveryOperation};

/// Recovery for a code built from a parity-check matrix (`Z`-type checks
/// plus `X^{⊗n}`). A single damping on qubit `q` leaves the column of `q`
/// as the `Z` syndrome; `X^{⊗n}` then tells `X_q` from `Y_q`.
pub fn linear_code_recovery(code: &StabilizerCode, mode: RecoveryMode, gamma: Option<f64>) -> Result<RecoveryOperation> {
    if !matches!(mode, RecoveryMode::Projection | RecoveryMode::Perturbed) {
        return Err(Error::InvalidArgument(format!("recovery mode {mode} is not available for {}", code.name())));
    }
    let gamma = require_gamma(mode, gamma)?;
    let n = code.n();
    let all_x = PauliOperator::on_qubits(n, &(0..n).collect::<Vec<_>>(), PauliKind::X)?;
    let checks: Vec<PauliOperator> = code.generators().iter().filter(|g| g.x_bits() == 0).cloned().collect();
    if checks.len() + 1 != code.generators().len() || !code.group().contains(&all_x) {
        return Err(Error::InvalidArgument(format!("{} is not a parity-check code", code.name())));
    }
    let cw = code.codewords()?;
    let codewords = cw.vectors().to_vec();
    let mut op = RecoveryOperation::new(code, mode, gamma);

    let syndrome = |p: &PauliOperator| -> (Vec<bool>, bool) {
        (checks.iter().map(|c| c.commutes_unchecked(p)).collect(), all_x.commutes_unchecked(p))
    };
    let measure = |(z, x): &(Vec<bool>, bool)| -> Vec<Measurement> {
        let mut ms: Vec<Measurement> = checks.iter().zip(z).map(|(c, &s)| Measurement::new(c.clone(), s)).collect();
        ms.push(Measurement::new(all_x.clone(), *x));
        ms
    };

    let trivial: Vec<Measurement> = checks.iter().map(|c| Measurement::new(c.clone(), true)).collect();
    op.elements.extend(no_damping_elements(code, &codewords, trivial, &all_x, mode, gamma));
    let mut seen: HashMap<(Vec<bool>, bool), String> = HashMap::new();
    let z1 = PauliOperator::single(n, 0, PauliKind::Z)?;
    seen.insert(syndrome(&PauliOperator::identity(n)?), "I".into());
    seen.insert(syndrome(&z1), z1.to_string());

    for q in 0..n {
        for kind in [PauliKind::X, PauliKind::Y] {
            let p = PauliOperator::single(n, q, kind)?;
            let s = syndrome(&p);
            if let Some(prev) = seen.get(&s) {
                return Err(Error::SyndromeCollision(prev.clone(), p.to_string()));
            }
            let rows: Vec<Vec<C64>> = codewords.iter().map(|c| p.apply_to(c)).collect();
            op.elements.push(
                RecoveryElement::new(format!("damped {}", q + 1), measure(&s), vec![q], format!("{}{}", kind.letter(), q + 1))
                    .with_rows(some_rows(rows)),
            );
            seen.insert(s, p.to_string());
        }
    }
    op.notes.push("two or more dampings are miscorrected or discarded".into());
    Ok(op)
}

/// Recovery for the [7,3] Hamming-derived code.
pub fn hamming73_recovery(mode: RecoveryMode, gamma: Option<f64>) -> Result<RecoveryOperation> {
    linear_code_recovery(&hamming_73(), mode, gamma)
}
