use crate::channel::{DampingError, DampingKraus, Truncation};
use crate::codes::{leung_41, pair_code, pair_layout};
use crate::error::{Error, Result};
use crate::linalg::{StateMap, C64, ZERO};
use crate::pauli::{PauliKind, PauliOperator};
use crate::stabilizer::StabilizerCode;

use super::{
    apply_pauli_all, perturbed_split, polar_rows, qubit_list, require_gamma, some_rows, Measurement, RecoveryElement,
    RecoveryMode, RecoveryOperation,
};

fn z_pair(n: usize, a: usize, b: usize) -> PauliOperator {
    PauliOperator::on_qubits(n, &[a, b], PauliKind::Z).expect("in range")
}

fn z1(n: usize, q: usize) -> PauliOperator {
    PauliOperator::single(n, q, PauliKind::Z).expect("in range")
}

/// No-damping branches shared by the codes whose no-damping syndrome
/// leaves one X-type stabilizer unmeasured: project (+1) or apply `Z_1`
/// (-1), or in perturbed mode rotate towards `E_0^{⊗n}`-distorted codewords.
pub(crate) fn no_damping_elements(
    code: &StabilizerCode,
    codewords: &[Vec<C64>],
    checks: Vec<Measurement>,
    x_generator: &PauliOperator,
    mode: RecoveryMode,
    gamma: Option<f64>,
) -> Vec<RecoveryElement> {
    let n = code.n();
    let z_fix = z1(n, 0);
    let flipped = apply_pauli_all(&z_fix, codewords);
    let mut plus_meas = checks.clone();
    plus_meas.push(Measurement::new(x_generator.clone(), true));
    let mut minus_meas = checks.clone();
    minus_meas.push(Measurement::new(x_generator.clone(), false));

    let projection = |plus: Vec<Measurement>, minus: Vec<Measurement>| {
        vec![
            RecoveryElement::new("no damping, +1", plus, vec![], "none").with_rows(some_rows(codewords.to_vec())),
            RecoveryElement::new("no damping, -1", minus, vec![], "Z1").with_rows(some_rows(flipped.clone())),
        ]
    };
    match (mode, gamma) {
        (RecoveryMode::Perturbed, Some(g)) => {
            let k0 = DampingKraus::new(n, 0, g).expect("checked");
            let distorted: Vec<Vec<C64>> = codewords.iter().map(|c| k0.apply_to(c)).collect();
            match perturbed_split(&distorted, std::slice::from_ref(&flipped)) {
                Some((main, rest)) => vec![
                    RecoveryElement::new("no damping, perturbed", checks.clone(), vec![], "rotate to distorted codewords")
                        .with_rows(some_rows(main)),
                    RecoveryElement::new("no damping, complement", checks, vec![], "Z1 on the orthogonal complement")
                        .with_rows(some_rows(rest.into_iter().next().unwrap_or_default())),
                ],
                // distorted codewords collapse (γ near 1): nothing to rotate towards
                None => projection(plus_meas, minus_meas),
            }
        }
        _ => projection(plus_meas, minus_meas),
    }
}

/// Damping assignments: for each pair, no damping or one of its two qubits.
fn damped_sets(pairs: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let p = pairs.len();
    let mut sets: Vec<Vec<usize>> = (1..3usize.pow(p as u32))
        .map(|mut code| {
            let mut set = Vec::new();
            for &(a, b) in pairs {
                match code % 3 {
                    1 => set.push(a),
                    2 => set.push(b),
                    _ => {}
                }
                code /= 3;
            }
            set.sort_unstable();
            set
        })
        .collect();
    sets.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    sets
}

/// Recovery for any code of the pair family (all-X generator plus one
/// `ZZ` per pair), with the given pairs in 0-based qubits.
pub fn pair_family_recovery(
    code: &StabilizerCode,
    pairs: &[(usize, usize)],
    mode: RecoveryMode,
    gamma: Option<f64>,
) -> Result<RecoveryOperation> {
    if !matches!(mode, RecoveryMode::Projection | RecoveryMode::Perturbed) {
        return Err(Error::InvalidArgument(format!("recovery mode {mode} is not available for {}", code.name())));
    }
    let gamma = require_gamma(mode, gamma)?;
    let n = code.n();
    let all_x = PauliOperator::on_qubits(n, &(0..n).collect::<Vec<_>>(), PauliKind::X)?;
    if pairs.len() * 2 != n || !code.group().contains(&all_x) || pairs.iter().any(|&(a, b)| !code.group().contains(&z_pair(n, a, b))) {
        return Err(Error::InvalidArgument(format!("{} is not a pair code with the given pairs", code.name())));
    }
    let cw = code.codewords()?;
    let codewords = cw.vectors().to_vec();
    let mut op = RecoveryOperation::new(code, mode, gamma);

    let checks = |set: &[usize]| -> Vec<Measurement> {
        let mut ms: Vec<Measurement> = pairs
            .iter()
            .map(|&(a, b)| Measurement::new(z_pair(n, a, b), !set.iter().any(|&d| d == a || d == b)))
            .collect();
        for &(a, b) in pairs {
            if set.contains(&a) || set.contains(&b) {
                ms.push(Measurement::new(z1(n, a), set.contains(&a)));
            }
        }
        ms
    };

    op.elements.extend(no_damping_elements(code, &codewords, checks(&[]), &all_x, mode, gamma));
    for set in damped_sets(pairs) {
        let e = DampingError::on_qubits(n, &set)?;
        let images: Vec<Vec<C64>> = codewords.iter().map(|c| e.apply_to(c)).collect();
        let lead = set[0] + 1;
        let flips: Vec<String> = set.iter().map(|d| format!("X{}", d + 1)).collect();
        let correction = format!("H{lead}, CX {lead}->all, {}", flips.join(" "));
        op.elements.push(
            RecoveryElement::new(format!("damped {{{}}}", qubit_list(&set)), checks(&set), set.clone(), correction)
                .with_rows(polar_rows(&images)),
        );
    }
    if pairs.len() > 1 {
        op.notes.push(
            "several dampings on distinct pairs keep only the codewords that survive them; with two dampings in \
             one pair the syndrome reads as undamaged"
                .into(),
        );
    }
    Ok(op)
}

/// Recovery for the pair code in standard form.
pub fn pair_code_recovery(m: usize, mode: RecoveryMode, gamma: Option<f64>) -> Result<RecoveryOperation> {
    let code = pair_code(m)?;
    pair_family_recovery(&code, &pair_layout(m), mode, gamma)
}

// element order of the published [4,1] table: R1, R2, single dampings on
// qubits 1..4, then {2,3}, {2,4}, {1,3}, {1,4}
const LEUNG_ORDER: [&[usize]; 8] = [&[0], &[1], &[2], &[3], &[1, 2], &[1, 3], &[0, 2], &[0, 3]];

fn relabel_leung(mut op: RecoveryOperation) -> RecoveryOperation {
    let mut no_damp: Vec<_> = op.elements.iter().filter(|e| e.damped.is_empty()).cloned().collect();
    let mut ordered = Vec::new();
    ordered.append(&mut no_damp);
    for set in LEUNG_ORDER {
        if let Some(e) = op.elements.iter().find(|e| e.damped == set) {
            ordered.push(e.clone());
        }
    }
    for (i, e) in ordered.iter_mut().enumerate() {
        e.label = format!("R{} ({})", i + 1, e.label);
    }
    op.elements = ordered;
    op
}

/// The [4,1] code's recovery `R_1..R_10`. The no-damping pair `R_1, R_2`
/// is a projection, the perturbed rotation, or the rotation angle that
/// maximizes the entanglement fidelity at `gamma`.
pub fn leung41_recovery(mode: RecoveryMode, gamma: Option<f64>) -> Result<RecoveryOperation> {
    match mode {
        RecoveryMode::Projection | RecoveryMode::Perturbed => {
            let code = leung_41();
            Ok(relabel_leung(pair_family_recovery(&code, &pair_layout(1), mode, gamma)?))
        }
        RecoveryMode::SweepOptimized => {
            let g = require_gamma(mode, gamma)?.expect("checked");
            let alpha = optimize_alpha(g)?;
            let mut op = leung41_with_alpha(alpha)?;
            op.mode = RecoveryMode::SweepOptimized;
            op.gamma = Some(g);
            Ok(op)
        }
        _ => Err(Error::InvalidArgument(format!("recovery mode {mode} is not available for leung41"))),
    }
}

/// `R_1 = |0_L>(α<0000| + β<1111|) + |1_L><1_L|`,
/// `R_2 = |0_L>(β<0000| - α<1111|) + |1_L>(<0011| - <1100|)/sqrt2`,
/// `β = sqrt(1 - α^2)`, `α` in `[1/sqrt2, 1]`; other elements as in the
/// projection recovery.
pub fn leung41_with_alpha(alpha: f64) -> Result<RecoveryOperation> {
    let lo = std::f64::consts::FRAC_1_SQRT_2;
    if !(lo - 1e-12..=1.0 + 1e-12).contains(&alpha) {
        return Err(Error::InvalidArgument(format!("alpha {alpha} outside [1/sqrt2, 1]")));
    }
    let alpha = alpha.clamp(lo, 1.0);
    let beta = (1.0 - alpha * alpha).max(0.0).sqrt();
    let mut op = leung41_recovery(RecoveryMode::Projection, None)?;
    let cw = leung_41().codewords()?;
    let zero_row = |a: f64, b: f64| {
        let mut v = vec![ZERO; 16];
        v[0] = C64::new(a, 0.0);
        v[15] = C64::new(b, 0.0);
        v
    };
    let z = z1(4, 0);
    op.elements[0] = op.elements[0].clone().with_rows(vec![Some(zero_row(alpha, beta)), Some(cw.get(1).to_vec())]);
    op.elements[1] = op.elements[1]
        .clone()
        .with_rows(vec![Some(zero_row(beta, -alpha)), Some(z.apply_to(cw.get(1)))]);
    op.parameters.insert("alpha".into(), alpha);
    Ok(op)
}

/// `α` of the perturbed recovery: the normalized `E_0^{⊗4}|0_L>`.
pub(crate) fn perturbed_alpha(gamma: f64) -> f64 {
    1.0 / (1.0 + (1.0 - gamma).powi(4)).sqrt()
}

const ALPHA_STEP: f64 = 1e-4;

fn optimize_alpha(gamma: f64) -> Result<f64> {
    let code = leung_41();
    let f = |alpha: f64| -> Result<f64> {
        let op = leung41_with_alpha(alpha)?;
        Ok(crate::fidelity::pipeline_fidelity(&code, &op, gamma, Truncation::Exact)?.fidelity)
    };
    let lo = std::f64::consts::FRAC_1_SQRT_2;
    let mut candidates: Vec<f64> = Vec::new();
    let mut a = lo;
    while a < 1.0 {
        candidates.push(a);
        a += ALPHA_STEP;
    }
    candidates.extend([1.0, lo, perturbed_alpha(gamma)]);
    let mut best = (lo, f(lo)?);
    for &c in &candidates {
        let v = f(c)?;
        if v > best.1 {
            best = (c, v);
        }
    }
    // golden-section refinement around the grid maximum
    let (mut x0, mut x1) = ((best.0 - ALPHA_STEP).max(lo), (best.0 + ALPHA_STEP).min(1.0));
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = x1 - phi * (x1 - x0);
    let mut d = x0 + phi * (x1 - x0);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    for _ in 0..60 {
        if fc > fd {
            x1 = d;
            d = c;
            fd = fc;
            c = x1 - phi * (x1 - x0);
            fc = f(c)?;
        } else {
            x0 = c;
            c = d;
            fc = fd;
            d = x0 + phi * (x1 - x0);
            fd = f(d)?;
        }
    }
    for (x, v) in [(c, fc), (d, fd)] {
        if v > best.1 {
            best = (x, v);
        }
    }
    Ok(best.0)
}
