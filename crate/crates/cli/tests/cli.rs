use std::path::PathBuf;
use std::process::{Command, Output};

fn ampdamp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ampdamp")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = ampdamp(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn damped_subspace_prints_generators() {
    assert_eq!(stdout(&["damped-subspace", "--code", "leung41", "--qubits", "1"]), "-ZZII / IIZZ / ZIII\n");
    assert_eq!(stdout(&["damped-subspace", "--code", "leung41", "--qubits", "3"]), "ZZII / -IIZZ / IIZI\n");
    assert_eq!(
        stdout(&["damped-subspace", "--code", "shor91", "--qubits", "2,3", "--prefer", "ZIIIIIIII"]),
        "-ZZIIIIIII / IZZIIIIII / IIIZZIIII / IIIIZZIII / IIIIIIZZI / IIIIIIIZZ / IIIXXXXXX / -ZIIIIIIII\n"
    );
}

#[test]
fn kl_check_reports_correctability() {
    let out = stdout(&["kl-check", "--code", "shor91", "--errors", "dampings:2"]);
    assert!(out.starts_with("correctable: true, max_violation "), "{out}");
    let v: f64 = out.trim().rsplit(' ').next().unwrap().parse().unwrap();
    assert!(v < 1e-9);
    let out = stdout(&["kl-check", "--code", "leung41", "--errors", "dampings:2"]);
    assert!(out.starts_with("correctable: false"), "{out}");
}

#[test]
fn fidelity_at_zero_gamma_is_one() {
    let out = stdout(&["fidelity", "--code", "pair:2", "--recovery", "projection", "--gamma-min", "0", "--gamma-max", "0", "--steps", "1"]);
    assert_eq!(
        out,
        "gamma,code,recovery_mode,k,fidelity,normalized_fidelity,truncation_order,truncation_bound\n\
         0,pair:2,projection,2,1,1,none,0\n"
    );
}

#[test]
fn fidelity_output_is_deterministic() {
    let args = [
        "fidelity", "--code", "pair:4", "--gamma-min", "0.01", "--gamma-max", "0.3", "--steps", "12", "--truncate", "2",
    ];
    let a = stdout(&args);
    let b = stdout(&args);
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 13);
    let gammas: Vec<f64> = a.lines().skip(1).map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert!(gammas.windows(2).all(|w| w[0] < w[1]));
    for line in a.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[6], "2");
        let digits = fields[4].trim_start_matches("0.").len();
        assert!(digits <= 12, "{line}");
    }
}

#[test]
fn fidelity_json_carries_contributions() {
    let out = stdout(&["fidelity", "--code", "leung41", "--gamma-min", "0.1", "--gamma-max", "0.1", "--steps", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let row = &v[0];
    assert_eq!(row["code"], "leung41");
    assert!((row["fidelity"].as_f64().unwrap() - 0.983275).abs() < 1e-12);
    let sum: f64 = row["contributions"].as_object().unwrap().values().map(|x| x.as_f64().unwrap()).sum();
    assert!((sum - 0.983275).abs() < 1e-12);
}

#[test]
fn file_output_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("ampdamp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("curve.csv");
    let base = ["fidelity", "--code", "hamming73", "--gamma-min", "0.05", "--gamma-max", "0.2", "--steps", "4"];
    let mut with_out: Vec<&str> = base.to_vec();
    let p = path.to_str().unwrap().to_string();
    with_out.extend(["--out", &p]);
    assert_eq!(stdout(&with_out), "");
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&base));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn compare_normalizes_and_adds_baseline() {
    let out = stdout(&[
        "compare", "--codes", "leung41,pair:2", "--normalize", "--baseline", "--gamma-min", "0.1", "--gamma-max", "0.1", "--steps", "1",
    ]);
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "gamma,leung41@projection,pair:2@projection,unencoded:1");
    let row: Vec<f64> = lines.next().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert!((row[1] - 0.983275).abs() < 1e-12);
    assert!((row[2] - 0.983967733211).abs() < 1e-11);
    assert!((row[3] - ((1.0 + 0.9f64.sqrt()) / 2.0).powi(2)).abs() < 1e-11);
}

#[test]
fn contributions_sum_to_total() {
    let out = stdout(&["contributions", "--code", "pair:3", "--gamma", "0.1"]);
    let mut sum = 0.0;
    let mut total = None;
    for line in out.lines().skip(1) {
        let (k, v) = line.split_once(',').unwrap();
        let v: f64 = v.parse().unwrap();
        if k == "total" {
            total = Some(v);
        } else {
            sum += v;
        }
    }
    assert!((sum - total.unwrap()).abs() < 1e-11);
}

#[test]
fn circuits_match_golden_files() {
    let cases: [(&[&str], &str); 5] = [
        (&["--code", "pair:2", "--kind", "encode"], "pair2_encode.txt"),
        (&["--code", "pair:2", "--kind", "recovery", "--damped", "1,5"], "pair2_recovery_1_5.txt"),
        (&["--code", "pair:2", "--kind", "syndrome:z_pairs"], "pair2_syndrome_z_pairs.txt"),
        (&["--code", "hamming73", "--kind", "syndrome:hamming_bits"], "hamming73_syndrome.txt"),
        (&["--code", "shor91", "--kind", "syndrome:no_damping_x"], "shor91_syndrome_x.txt"),
    ];
    for (args, file) in cases {
        let mut full = vec!["emit-circuit"];
        full.extend_from_slice(args);
        assert_eq!(stdout(&full), golden(file), "{file}");
    }
}

#[test]
fn codes_show_and_parity_check_agree() {
    let shown = stdout(&["codes", "show", "hamming73"]);
    assert!(shown.contains("stabilizers:\n  IIIZZZZ\n  IZZIIZZ\n  ZIZIZIZ\n  XXXXXXX\n"), "{shown}");
    let dir = std::env::temp_dir().join(format!("ampdamp-h-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("h.txt");
    std::fs::write(&file, "0 0 0 1 1 1 1\n0 1 1 0 0 1 1\n1 0 1 0 1 0 1\n").unwrap();
    let built = stdout(&["codes", "from-parity-check", "--file", file.to_str().unwrap()]);
    assert_eq!(built.lines().skip(1).collect::<Vec<_>>(), shown.lines().skip(1).collect::<Vec<_>>());
    std::fs::write(&file, "1 1 1 0 0 0 0\n0 1 1 0 0 1 1\n1 0 1 0 1 0 1\n").unwrap();
    let bad = ampdamp(&["codes", "from-parity-check", "--file", file.to_str().unwrap()]);
    assert!(!bad.status.success());
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn recovery_show_lists_syndromes() {
    let out = stdout(&["recovery", "show", "--code", "leung41", "--mode", "projection"]);
    assert!(out.starts_with("leung41 projection (10 elements)\n"), "{out}");
    assert!(out.contains("R3 (damped {1})"));
    assert!(out.contains("-ZZII +IIZZ +ZIII"));
}

#[test]
fn exit_codes() {
    let usage = [
        vec!["fidelity", "--code", "nope", "--gamma-min", "0", "--gamma-max", "1", "--steps", "2"],
        vec!["fidelity", "--code", "leung41", "--recovery", "bogus", "--gamma-min", "0", "--gamma-max", "1", "--steps", "2"],
        vec!["fidelity", "--code", "leung41", "--gamma-min", "0", "--gamma-max", "1.5", "--steps", "2"],
        vec!["fidelity", "--code", "leung41", "--gamma-min", "0", "--gamma-max", "0.5", "--steps", "0"],
        vec!["damped-subspace", "--code", "leung41", "--qubits", "5"],
        vec!["emit-circuit", "--code", "pair:2", "--kind", "recovery", "--damped", "1,2"],
        vec!["recovery", "show", "--code", "leung41", "--mode", "perturbed"],
        vec!["kl-check", "--code", "leung41", "--errors", "all"],
    ];
    for args in usage {
        let out = ampdamp(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    // a mode that does not exist for the code is a computation failure
    let out = ampdamp(&["recovery", "show", "--code", "pair:2", "--mode", "sweep", "--gamma", "0.1"]);
    assert_eq!(out.status.code(), Some(1));
}
