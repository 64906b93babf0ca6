mod common;

use ampdamp::circuit::{
    build_encoding_circuit, build_recovery_circuit, build_recovery_circuit_with_lead, build_syndrome_circuit, emit_text,
    encoder_inputs, parse_text, simulate,
};
use ampdamp::codes::{hamming_73, pair_code};
use ampdamp::recovery::pair_code_recovery;
use ampdamp::{CircuitCode, RecoveryMode, SyndromeStage, C64};
use common::*;

#[test]
fn encoder_reproduces_codewords() {
    for m in 1..=4 {
        let code = pair_code(m).unwrap();
        let cw = code.codewords().unwrap();
        let enc = build_encoding_circuit(m).unwrap();
        let n = code.n();
        let inputs = encoder_inputs(m);
        for b in 0..1usize << m {
            let mut j = 0usize;
            for (i, &q) in inputs.iter().enumerate() {
                if b >> (m - 1 - i) & 1 == 1 {
                    j |= 1 << (n - 1 - q);
                }
            }
            let mut state = basis(1 << n, j);
            enc.apply_unitary(&mut state).unwrap();
            let d = phase_free_distance(&state, cw.get(b));
            assert!(d < 1e-10, "M={m} b={b}: {d}");
        }
        let census = enc.census();
        assert_eq!(census.cx, 3 * m + 1, "M={m}");
        assert_eq!(census.h, 1);
    }
}

#[test]
fn recovery_circuit_matches_recovery_element() {
    for m in 1..=4 {
        let code = pair_code(m).unwrap();
        let n = code.n();
        let cw = code.codewords().unwrap();
        let rec = pair_code_recovery(m, RecoveryMode::Projection, None).unwrap();
        for set in damped_sets(m) {
            let el = rec.elements.iter().position(|e| e.damped == set).expect("element for damped set");
            let r = rec.element_matrix(el).unwrap();
            let u = build_recovery_circuit(m, &set).unwrap();
            let basis = damped_basis(m, &set);
            assert_eq!(basis.len(), 1 << (m + 1 - set.len()), "M={m} {set:?}");
            // decode(U w) and R w agree on the damped subspace up to one phase
            let mut common_phase: Option<C64> = None;
            for w in &basis {
                let mut out = w.clone();
                u.apply_unitary(&mut out).unwrap();
                let via_circuit: Vec<C64> = (0..1usize << m).map(|b| inner(cw.get(b), &out)).collect();
                let via_matrix: Vec<C64> = (0..1usize << m).map(|b| (0..1 << n).map(|j| r[(b, j)] * w[j]).sum()).collect();
                assert!((norm(&via_circuit) - 1.0).abs() < 1e-10, "M={m} {set:?}: circuit leaves the code");
                let lead = (0..via_circuit.len()).max_by(|&x, &y| via_circuit[x].norm().total_cmp(&via_circuit[y].norm())).unwrap();
                let ph = via_matrix[lead] / via_circuit[lead];
                let p0 = *common_phase.get_or_insert(ph);
                assert!((p0.norm() - 1.0).abs() < 1e-10);
                for b in 0..1usize << m {
                    assert!((via_matrix[b] - p0 * via_circuit[b]).norm() < 1e-10, "M={m} {set:?}");
                }
            }
        }
    }
}

#[test]
fn recovery_lead_choice_is_immaterial() {
    for m in 1..=4 {
        let code = pair_code(m).unwrap();
        let cw = code.codewords().unwrap();
        for set in damped_sets(m).into_iter().filter(|s| s.len() > 1) {
            let lo = build_recovery_circuit_with_lead(m, &set, *set.iter().min().unwrap()).unwrap();
            let hi = build_recovery_circuit_with_lead(m, &set, *set.iter().max().unwrap()).unwrap();
            for w in damped_basis(m, &set) {
                let mut x = w.clone();
                let mut y = w;
                lo.apply_unitary(&mut x).unwrap();
                hi.apply_unitary(&mut y).unwrap();
                for b in 0..1usize << m {
                    let (p, q) = (inner(cw.get(b), &x), inner(cw.get(b), &y));
                    assert!((p - q).norm() < 1e-10, "M={m} {set:?}");
                }
            }
        }
    }
}

#[test]
fn four_qubit_double_damping_flips_the_logical_qubit() {
    // pattern 1100 keeps only the |1111> part of |0_L>, landing on |0011>
    let g = 0.1;
    let v = encoder(&ampdamp::codes::leung_41());
    let kv = apply_kraus(&v, 4, &pattern_bits(4, 0b1100), g);
    let want = g * (1.0 - g) * std::f64::consts::FRAC_1_SQRT_2;
    for j in 0..16 {
        let x = if j == 0b0011 { want } else { 0.0 };
        assert!((kv[(j, 0)] - c(x)).norm() < 1e-15);
    }
    let rec = ampdamp::recovery::leung41_recovery(RecoveryMode::Projection, None).unwrap();
    let mut wrong = 0.0;
    let mut right = 0.0;
    for i in 0..rec.len() {
        let out = rec.element_matrix(i).unwrap() * kv.column(0);
        right += out[0].norm_sqr();
        wrong += out[1].norm_sqr();
    }
    assert!(wrong > 1e-4 && right < 1e-15, "{wrong} {right}");
}

#[test]
fn hamming_syndrome_of_x_on_qubit_five() {
    let circ = build_syndrome_circuit(CircuitCode::Hamming73, SyndromeStage::HammingBits).unwrap();
    let code = hamming_73();
    let x5: ampdamp::PauliOperator = "IIIIXII".parse().unwrap();
    for b in 0..8 {
        let input = ampdamp::StateMap::apply_to(&x5, code.codewords().unwrap().get(b));
        let branches = simulate(&circ, &input).unwrap();
        assert_eq!(branches.len(), 1);
        // generators are the three checks (IIIZZZZ, IZZIIZZ, ZIZIZIZ) then X^7
        assert_eq!(branches[0].outcomes, vec![1, 0, 1, 0]);
    }
}

#[test]
fn circuit_text_round_trips() {
    for circ in [
        build_encoding_circuit(3).unwrap(),
        build_recovery_circuit(2, &[0, 3]).unwrap(),
        build_syndrome_circuit(CircuitCode::Shor91, SyndromeStage::NoDampingX).unwrap(),
    ] {
        let text = emit_text(&circ);
        let back = parse_text(&text).unwrap();
        assert_eq!(back.gates(), circ.gates());
        assert_eq!(emit_text(&back), text);
    }
}

#[test]
fn syndrome_circuit_reads_damped_pair_outcomes() {
    // qubit 1 damped in the [6,2] code: the first pair check flips and its
    // first qubit reads 0
    let m = 2;
    let code = pair_code(m).unwrap();
    let cw = code.codewords().unwrap();
    let img = lowered(cw.get(2), 6, &[0]);
    let nrm = norm(&img);
    let img: Vec<C64> = img.iter().map(|v| v / nrm).collect();
    let z = simulate(&build_syndrome_circuit(CircuitCode::Pair(m), SyndromeStage::ZPairs).unwrap(), &img).unwrap();
    assert_eq!(z.len(), 1);
    assert_eq!(z[0].outcomes, vec![1, 0, 0]);
    let p = simulate(&build_syndrome_circuit(CircuitCode::Pair(m), SyndromeStage::PerPairZ).unwrap(), &img).unwrap();
    assert_eq!(p.len(), 1);
    assert_eq!(p[0].outcomes[0], 0);
}
