//! Generator lists and recovery elements, checked entry by entry.

mod common;

use ampdamp::codes::{hamming_73, leung_41, pair_code, pair_code_grouped, shor_91};
use ampdamp::recovery::leung41_with_alpha;
use ampdamp::C64;
use common::strings;

#[test]
fn four_qubit_damped_subspaces() {
    let code = leung_41();
    let expected = [
        ["-ZZII", "IIZZ", "ZIII"],
        ["-ZZII", "IIZZ", "IZII"],
        ["ZZII", "-IIZZ", "IIZI"],
        ["ZZII", "-IIZZ", "IIIZ"],
    ];
    for (q, want) in expected.iter().enumerate() {
        let g = code.damped_subspace(&[q]).unwrap();
        assert_eq!(strings(&g), want.to_vec(), "qubit {}", q + 1);
    }
}

#[test]
fn shor_damped_subspaces() {
    let code = shor_91();
    let one = code.damped_subspace(&[0]).unwrap();
    assert_eq!(
        strings(&one),
        ["-ZZIIIIIII", "IZZIIIIII", "IIIZZIIII", "IIIIZZIII", "IIIIIIZZI", "IIIIIIIZZ", "IIIXXXXXX", "ZIIIIIIII"]
    );
    // the block's extra Z measurement on its first qubit names this subspace
    let z1: ampdamp::PauliOperator = "ZIIIIIIII".parse().unwrap();
    let two_three = code.damped_subspace_preferring(&[1, 2], &[z1]).unwrap();
    assert_eq!(
        strings(&two_three),
        ["-ZZIIIIIII", "IZZIIIIII", "IIIZZIIII", "IIIIZZIII", "IIIIIIZZI", "IIIIIIIZZ", "IIIXXXXXX", "-ZIIIIIIII"]
    );
    let one_seven = code.damped_subspace(&[0, 6]).unwrap();
    assert_eq!(
        strings(&one_seven),
        ["-ZZIIIIIII", "IZZIIIIII", "IIIZZIIII", "IIIIZZIII", "-IIIIIIZZI", "IIIIIIIZZ", "ZIIIIIIII", "IIIIIIZII"]
    );
}

#[test]
fn pair_code_generators_and_standard_form() {
    let six = pair_code_grouped(2).unwrap();
    assert_eq!(strings(six.group()), ["XXXXXX", "ZZIIII", "IIZZII", "IIIIZZ"]);
    let eight = pair_code_grouped(3).unwrap();
    assert_eq!(strings(eight.group()), ["XXXXXXXX", "ZZIIIIII", "IIZZIIII", "IIIIZZII", "IIIIIIZZ"]);

    let six = pair_code(2).unwrap();
    assert_eq!(strings(six.group()), ["XXXXXX", "ZZIIII", "IIZIIZ", "IIIZZI"]);
    let lx: Vec<String> = six.logical_x().iter().map(|p| p.to_string()).collect();
    let lz: Vec<String> = six.logical_z().iter().map(|p| p.to_string()).collect();
    assert_eq!(lx, ["IIIXXI", "IIXIIX"]);
    assert_eq!(lz, ["ZIIIZI", "ZIIIIZ"]);

    let eight = pair_code(3).unwrap();
    assert_eq!(strings(eight.group()), ["XXXXXXXX", "ZZIIIIII", "IIZIIIIZ", "IIIZIIZI", "IIIIZZII"]);
    let lx: Vec<String> = eight.logical_x().iter().map(|p| p.to_string()).collect();
    let lz: Vec<String> = eight.logical_z().iter().map(|p| p.to_string()).collect();
    assert_eq!(lx, ["IIIIXXII", "IIIXIIXI", "IIXIIIIX"]);
    assert_eq!(lz, ["ZIIIIZII", "ZIIIIIZI", "ZIIIIIIZ"]);
}

#[test]
fn seven_three_generators() {
    let code = hamming_73();
    assert_eq!(strings(code.group()), ["IIIZZZZ", "IZZIIZZ", "ZIZIZIZ", "XXXXXXX"]);
}

type Row<'a> = (usize, &'a [(usize, f64)]);

#[test]
fn four_qubit_recovery_elements() {
    let alpha = 0.8;
    let beta = (1.0f64 - alpha * alpha).sqrt();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let rec = leung41_with_alpha(alpha).unwrap();
    assert_eq!(rec.len(), 10);
    // (logical row, [(basis index, amplitude)])
    let table: [&[Row]; 10] = [
        &[(0, &[(0b0000, alpha), (0b1111, beta)]), (1, &[(0b0011, h), (0b1100, h)])],
        &[(0, &[(0b0000, beta), (0b1111, -alpha)]), (1, &[(0b0011, h), (0b1100, -h)])],
        &[(0, &[(0b0111, 1.0)]), (1, &[(0b0100, 1.0)])],
        &[(0, &[(0b1011, 1.0)]), (1, &[(0b1000, 1.0)])],
        &[(0, &[(0b1101, 1.0)]), (1, &[(0b0001, 1.0)])],
        &[(0, &[(0b1110, 1.0)]), (1, &[(0b0010, 1.0)])],
        &[(0, &[(0b1001, 1.0)])],
        &[(0, &[(0b1010, 1.0)])],
        &[(0, &[(0b0101, 1.0)])],
        &[(0, &[(0b0110, 1.0)])],
    ];
    for (i, rows) in table.iter().enumerate() {
        let m = rec.element_matrix(i).unwrap();
        let mut want = nalgebra::DMatrix::<C64>::zeros(2, 16);
        for &(a, entries) in rows.iter() {
            for &(j, v) in entries {
                want[(a, j)] = C64::new(v, 0.0);
            }
        }
        assert!(common::frobenius(&m, &want) < 1e-12, "R{}: {}", i + 1, rec.elements[i].label);
        assert!(rec.elements[i].label.starts_with(&format!("R{} ", i + 1)));
    }
}
