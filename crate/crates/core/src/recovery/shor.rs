use crate::channel::{DampingError, DampingKraus};
use crate::codes::{shor_91, SHOR_BLOCKS};
use crate::error::{Error, Result};
use crate::linalg::{StateMap, C64};
use crate::pauli::{PauliKind, PauliOperator};
use crate::stabilizer::StabilizerCode;

use super::{
    apply_pauli_all, perturbed_split, polar_rows, qubit_list, require_gamma, some_rows, Measurement, RecoveryElement,
    RecoveryMode, RecoveryOperation,
};

/// What a block's syndrome reveals: still in `span{|000>, |111>}`, or
/// collapsed to one basis state with at least one zero.
const BLOCK_PATTERNS: [&str; 6] = ["011", "101", "110", "100", "010", "001"];

#[derive(Clone, Copy, PartialEq)]
enum Block {
    Intact,
    Damped(&'static str),
}

type Branch = (Vec<Measurement>, String, Vec<Option<Vec<C64>>>);

fn block_measurements(b: usize, class: Block) -> Vec<Measurement> {
    let q = SHOR_BLOCKS[b];
    let zz = |i: usize, j: usize| PauliOperator::on_qubits(9, &[i, j], PauliKind::Z).expect("in range");
    match class {
        Block::Intact => vec![Measurement::new(zz(q[0], q[1]), true), Measurement::new(zz(q[1], q[2]), true)],
        Block::Damped(y) => {
            let bit: Vec<bool> = y.chars().map(|c| c == '1').collect();
            vec![
                Measurement::new(zz(q[0], q[1]), bit[0] == bit[1]),
                Measurement::new(zz(q[1], q[2]), bit[1] == bit[2]),
                Measurement::new(PauliOperator::single(9, q[0], PauliKind::Z).expect("in range"), !bit[0]),
            ]
        }
    }
}

fn damped_qubits(classes: &[Block; 3]) -> Vec<usize> {
    let mut out = Vec::new();
    for (b, c) in classes.iter().enumerate() {
        if let Block::Damped(y) = c {
            out.extend(y.chars().zip(SHOR_BLOCKS[b]).filter(|(ch, _)| *ch == '0').map(|(_, q)| q));
        }
    }
    out
}

fn x_on_blocks(blocks: &[usize]) -> PauliOperator {
    let qs: Vec<usize> = blocks.iter().flat_map(|&b| SHOR_BLOCKS[b]).collect();
    PauliOperator::on_qubits(9, &qs, PauliKind::X).expect("in range")
}

fn z_first(b: usize) -> PauliOperator {
    PauliOperator::single(9, SHOR_BLOCKS[b][0], PauliKind::Z).expect("in range")
}

/// Recovery for the Shor code with its default logical operators.
pub fn shor_recovery(mode: RecoveryMode, gamma: Option<f64>) -> Result<RecoveryOperation> {
    shor_recovery_for(&shor_91(), mode, gamma)
}

/// Recovery for the Shor stabilizer with any choice of logical operators.
///
/// Each block is read out as intact or as one of six collapsed basis
/// states. Intact blocks are then checked with the remaining `X`
/// stabilizers and a phase flip is undone; damaged blocks are decoded by the
/// isometry closest to the damped codewords. In perturbed mode the branches
/// with at least two intact blocks are rotated towards the `γ`-distorted
/// codewords instead.
pub fn shor_recovery_for(code: &StabilizerCode, mode: RecoveryMode, gamma: Option<f64>) -> Result<RecoveryOperation> {
    if !matches!(mode, RecoveryMode::Projection | RecoveryMode::Perturbed) {
        return Err(Error::InvalidArgument(format!("recovery mode {mode} is not available for {}", code.name())));
    }
    let gamma = require_gamma(mode, gamma)?;
    if code.n() != 9 || !code.group().same_group(shor_91().group()) {
        return Err(Error::InvalidArgument(format!("{} does not have the Shor stabilizer", code.name())));
    }
    let cw = code.codewords()?;
    let codewords = cw.vectors().to_vec();
    let mut op = RecoveryOperation::new(code, mode, gamma);

    let classes: Vec<Block> = std::iter::once(Block::Intact).chain(BLOCK_PATTERNS.iter().map(|&y| Block::Damped(y))).collect();
    for c0 in &classes {
        for c1 in &classes {
            for c2 in &classes {
                let combo = [*c0, *c1, *c2];
                op.elements.extend(shor_elements(&codewords, combo, mode, gamma)?);
            }
        }
    }
    op.notes.push(
        "when every block is damped the two damped codewords are parallel; the branch keeps their common direction \
         with weights from the closest isometry"
            .into(),
    );
    op.notes.push("three dampings inside one block return it to |000> and go undetected".into());
    Ok(op)
}

fn shor_elements(codewords: &[Vec<C64>], combo: [Block; 3], mode: RecoveryMode, gamma: Option<f64>) -> Result<Vec<RecoveryElement>> {
    let intact: Vec<usize> = (0..3).filter(|&b| combo[b] == Block::Intact).collect();
    let damped = damped_qubits(&combo);
    let z_meas: Vec<Measurement> = (0..3).flat_map(|b| block_measurements(b, combo[b])).collect();
    let name: Vec<&str> = combo
        .iter()
        .map(|c| match c {
            Block::Intact => "ok",
            Block::Damped(y) => y,
        })
        .collect();
    let base = format!("blocks [{}]", name.join(" "));
    let damped_label = if damped.is_empty() { String::new() } else { format!(", damped {{{}}}", qubit_list(&damped)) };
    let e = DampingError::on_qubits(9, &damped)?;
    let images: Vec<Vec<C64>> = codewords.iter().map(|c| e.apply_to(c)).collect();

    // stabilizer-mode branches: (extra X measurements, correction, rows)
    let branches: Vec<Branch> = match intact.len() {
        3 => {
            let g1 = x_on_blocks(&[0, 1]);
            let g2 = x_on_blocks(&[1, 2]);
            let mut out = vec![(
                vec![Measurement::new(g1.clone(), true), Measurement::new(g2.clone(), true)],
                "none".to_string(),
                some_rows(codewords.to_vec()),
            )];
            for (b, s1, s2) in [(0, false, true), (1, false, false), (2, true, false)] {
                let z = z_first(b);
                out.push((
                    vec![Measurement::new(g1.clone(), s1), Measurement::new(g2.clone(), s2)],
                    format!("Z{}", SHOR_BLOCKS[b][0] + 1),
                    some_rows(apply_pauli_all(&z, codewords)),
                ));
            }
            out
        }
        2 => {
            let g = x_on_blocks(&intact);
            let plus = polar_rows(&images);
            let z = z_first(intact[0]);
            let minus = plus.iter().map(|r| r.as_ref().map(|v| z.apply_to(v))).collect();
            vec![
                (vec![Measurement::new(g.clone(), true)], "decode".to_string(), plus),
                (vec![Measurement::new(g, false)], format!("Z{}, decode", SHOR_BLOCKS[intact[0]][0] + 1), minus),
            ]
        }
        _ => vec![(vec![], "decode".to_string(), polar_rows(&images))],
    };

    if let (RecoveryMode::Perturbed, Some(g), true) = (mode, gamma, intact.len() >= 2) {
        let k = DampingKraus::on_qubits(9, &damped, g)?;
        let primary: Vec<Vec<C64>> = codewords.iter().map(|c| k.apply_to(c)).collect();
        let others: Vec<Vec<Vec<C64>>> = branches[1..]
            .iter()
            .map(|(_, _, rows)| rows.iter().map(|r| r.clone().unwrap_or_default()).collect())
            .collect();
        let complete = others.iter().flatten().all(|v| !v.is_empty());
        if let Some((main, rest)) = complete.then(|| perturbed_split(&primary, &others)).flatten() {
            let mut out = vec![RecoveryElement::new(
                format!("{base}{damped_label}, perturbed"),
                z_meas.clone(),
                damped.clone(),
                "rotate to distorted codewords",
            )
            .with_rows(some_rows(main))];
            for ((_, corr, _), rows) in branches[1..].iter().zip(rest) {
                out.push(
                    RecoveryElement::new(format!("{base}{damped_label}, complement {corr}"), z_meas.clone(), damped.clone(), corr.clone())
                        .with_rows(some_rows(rows)),
                );
            }
            return Ok(out);
        }
    }

    Ok(branches
        .into_iter()
        .map(|(extra, corr, rows)| {
            let signs: String = extra.iter().map(|m| if m.outcome > 0 { '+' } else { '-' }).collect();
            let label = if signs.is_empty() { format!("{base}{damped_label}") } else { format!("{base}{damped_label}, X {signs}") };
            let mut meas = z_meas.clone();
            meas.extend(extra);
            RecoveryElement::new(label, meas, damped.clone(), corr).with_rows(rows)
        })
        .collect())
}
