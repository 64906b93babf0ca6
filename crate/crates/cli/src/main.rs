use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use ampdamp::channel::DampingError;
use ampdamp::circuit::{build_encoding_circuit, build_recovery_circuit, build_syndrome_circuit, emit_text};
use ampdamp::codes::from_parity_check;
use ampdamp::recovery::{build_recovery, default_mode};
use ampdamp::{
    baseline_unencoded, compare, default_truncation, pipeline_fidelity, sweep, CircuitCode, CodeId, FidelityCurve, GammaGrid,
    ParityCheckMatrix, PauliOperator, RecoveryMode, StabilizerCode, SyndromeStage, Truncation,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "ampdamp", version, about = "Amplitude-damping-adapted stabilizer codes: catalog, checks, fidelity sweeps, circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Code catalog.
    Codes {
        #[command(subcommand)]
        action: CodesAction,
    },
    /// Knill-Laflamme check against damping operators up to a given order.
    KlCheck {
        #[arg(long, value_parser = parse_code)]
        code: CodeId,
        /// `dampings:<order>`
        #[arg(long, value_parser = parse_errors)]
        errors: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Stabilizer generators of the code space after damping the given qubits.
    DampedSubspace {
        #[arg(long, value_parser = parse_code)]
        code: CodeId,
        /// 1-based, comma separated.
        #[arg(long, value_parser = parse_qubit_list)]
        qubits: QubitList,
        /// Pauli operators to prefer as generators, comma separated.
        #[arg(long, value_delimiter = ',')]
        prefer: Vec<String>,
    },
    /// Entanglement fidelity over a gamma grid.
    Fidelity {
        #[arg(long, value_parser = parse_code)]
        code: CodeId,
        #[arg(long, value_parser = parse_mode)]
        recovery: Option<RecoveryMode>,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Fidelity split by the number of damped qubits in the Kraus term.
    Contributions {
        #[arg(long, value_parser = parse_code)]
        code: CodeId,
        #[arg(long, value_parser = parse_mode)]
        recovery: Option<RecoveryMode>,
        #[arg(long)]
        gamma: f64,
        #[arg(long, value_parser = parse_truncation)]
        truncate: Option<Truncation>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Several codes on one gamma grid, one column per code.
    Compare {
        /// Comma separated; `code@mode` picks a recovery other than the default.
        #[arg(long, value_delimiter = ',', value_parser = parse_entry, required = true)]
        codes: Vec<(CodeId, RecoveryMode)>,
        /// Report `F^(1/k)` instead of `F`.
        #[arg(long)]
        normalize: bool,
        /// Add unencoded columns for comparison.
        #[arg(long)]
        baseline: bool,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Writes a gate-level circuit in the text format.
    EmitCircuit {
        #[arg(long, value_parser = parse_circuit_code)]
        code: CircuitCode,
        /// `encode`, `recovery` or `syndrome:<stage>`
        #[arg(long)]
        kind: String,
        /// Damped qubits for `recovery`, 1-based.
        #[arg(long, value_parser = parse_qubit_list)]
        damped: Option<QubitList>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recovery operations.
    Recovery {
        #[command(subcommand)]
        action: RecoveryAction,
    },
}

#[derive(Subcommand)]
enum CodesAction {
    List,
    Show {
        #[arg(value_parser = parse_code)]
        name: CodeId,
    },
    /// Builds the code from a classical parity-check matrix (rows of 0/1).
    FromParityCheck {
        #[arg(long)]
        file: PathBuf,
    },
}

#[derive(Subcommand)]
enum RecoveryAction {
    /// Syndrome table: labels, measured operators, corrections.
    Show {
        #[arg(long, value_parser = parse_code)]
        code: CodeId,
        #[arg(long, value_parser = parse_mode)]
        mode: Option<RecoveryMode>,
        #[arg(long)]
        gamma: Option<f64>,
    },
}

#[derive(clap::Args)]
struct GridArgs {
    #[arg(long)]
    gamma_min: f64,
    #[arg(long)]
    gamma_max: f64,
    #[arg(long)]
    steps: usize,
    #[arg(long, value_enum, default_value_t = Scale::Linear)]
    scale: Scale,
    /// Highest number of damped qubits kept, or `none`.
    #[arg(long, value_parser = parse_truncation)]
    truncate: Option<Truncation>,
}

#[derive(clap::Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scale {
    Linear,
    Log,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug)]
struct QubitList(Vec<usize>);

enum Failure {
    Usage(String),
    Compute(String),
}

impl From<ampdamp::Error> for Failure {
    fn from(e: ampdamp::Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

type CliResult<T> = Result<T, Failure>;

fn parse_code(s: &str) -> Result<CodeId, String> {
    s.parse().map_err(|e: ampdamp::Error| e.to_string())
}

fn parse_mode(s: &str) -> Result<RecoveryMode, String> {
    s.parse().map_err(|e: ampdamp::Error| e.to_string())
}

fn parse_entry(s: &str) -> Result<(CodeId, RecoveryMode), String> {
    match s.split_once('@') {
        Some((c, m)) => Ok((parse_code(c)?, parse_mode(m)?)),
        None => {
            let c = parse_code(s)?;
            Ok((c, default_mode(c)))
        }
    }
}

fn parse_errors(s: &str) -> Result<usize, String> {
    s.strip_prefix("dampings:")
        .and_then(|o| o.parse().ok())
        .ok_or_else(|| format!("expected `dampings:<order>`, got `{s}`"))
}

fn parse_truncation(s: &str) -> Result<Truncation, String> {
    match s {
        "none" | "exact" => Ok(Truncation::Exact),
        _ => s.parse().map(Truncation::MaxOrder).map_err(|_| format!("expected an order or `none`, got `{s}`")),
    }
}

fn parse_qubit_list(s: &str) -> Result<QubitList, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let q: usize = part.parse().map_err(|_| format!("bad qubit `{part}`"))?;
        if q == 0 {
            return Err("qubits are numbered from 1".into());
        }
        out.push(q - 1);
    }
    if out.is_empty() {
        return Err("no qubits given".into());
    }
    Ok(QubitList(out))
}

fn parse_circuit_code(s: &str) -> Result<CircuitCode, String> {
    match parse_code(s)? {
        CodeId::Leung41 => Ok(CircuitCode::Pair(1)),
        CodeId::Pair(m) => Ok(CircuitCode::Pair(m)),
        CodeId::Hamming73 => Ok(CircuitCode::Hamming73),
        CodeId::Shor91 => Ok(CircuitCode::Shor91),
        other => Err(format!("no circuits for {other}")),
    }
}

/// Shortest representation that survives rounding to 12 significant digits.
fn num(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let v: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    let v = if v == 0.0 { 0.0 } else { v };
    if v == 0.0 || (1e-5..1e15).contains(&v.abs()) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn check_code_qubits(code: &StabilizerCode, qubits: &[usize]) -> CliResult<()> {
    match qubits.iter().find(|&&q| q >= code.n()) {
        Some(q) => Err(Failure::Usage(format!("qubit {} is out of range for {} ({} qubits)", q + 1, code.name(), code.n()))),
        None => Ok(()),
    }
}

fn check_gamma(g: f64) -> CliResult<()> {
    if (0.0..=1.0).contains(&g) {
        Ok(())
    } else {
        Err(Failure::Usage(format!("gamma {g} is outside [0, 1]")))
    }
}

fn grid_of(args: &GridArgs) -> CliResult<GammaGrid> {
    check_gamma(args.gamma_min)?;
    check_gamma(args.gamma_max)?;
    let grid = match args.scale {
        Scale::Linear => GammaGrid::linear(args.gamma_min, args.gamma_max, args.steps),
        Scale::Log => GammaGrid::log(args.gamma_min, args.gamma_max, args.steps),
    };
    grid.map_err(|e| Failure::Usage(e.to_string()))
}

fn truncation_for(code: CodeId, t: Option<Truncation>) -> CliResult<Truncation> {
    Ok(t.unwrap_or(default_truncation(code.build()?.n())))
}

fn write_output(out: &OutputArgs, text: &str) -> CliResult<()> {
    match &out.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Compute(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| Failure::Compute(e.to_string()))?;
    for r in rows {
        w.write_record(r).map_err(|e| Failure::Compute(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Compute(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn json_text<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Failure::Compute(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn code_table(code: &StabilizerCode) -> String {
    let mut s = format!("{} [[{},{}]]\nstabilizers:\n", code.name(), code.n(), code.k());
    for g in code.generators() {
        let _ = writeln!(s, "  {g}");
    }
    s.push_str("logical X:\n");
    for p in code.logical_x() {
        let _ = writeln!(s, "  {p}");
    }
    s.push_str("logical Z:\n");
    for p in code.logical_z() {
        let _ = writeln!(s, "  {p}");
    }
    s
}

#[derive(Serialize)]
struct Row {
    gamma: f64,
    code: String,
    recovery_mode: String,
    k: usize,
    fidelity: f64,
    normalized_fidelity: f64,
    truncation_order: Option<usize>,
    truncation_bound: f64,
    contributions: BTreeMap<usize, f64>,
}

const CURVE_HEADER: [&str; 8] =
    ["gamma", "code", "recovery_mode", "k", "fidelity", "normalized_fidelity", "truncation_order", "truncation_bound"];

fn curve_rows(curve: &FidelityCurve) -> Vec<Row> {
    curve
        .points
        .iter()
        .map(|p| Row {
            gamma: p.gamma,
            code: curve.code.clone(),
            recovery_mode: curve.recovery_mode.clone(),
            k: curve.k,
            fidelity: p.fidelity,
            normalized_fidelity: p.normalized_fidelity,
            truncation_order: curve.truncation_order,
            truncation_bound: p.truncation_bound,
            contributions: p.contributions.clone(),
        })
        .collect()
}

fn rows_csv(rows: &[Row]) -> CliResult<String> {
    let records: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                num(r.gamma),
                r.code.clone(),
                r.recovery_mode.clone(),
                r.k.to_string(),
                num(r.fidelity),
                num(r.normalized_fidelity),
                r.truncation_order.map_or("none".to_string(), |t| t.to_string()),
                num(r.truncation_bound),
            ]
        })
        .collect();
    csv_text(&CURVE_HEADER, &records)
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Codes { action } => match action {
            CodesAction::List => {
                for id in CodeId::all_builtin() {
                    let code = id.build()?;
                    println!("{:<12} [[{},{}]]  {}", id.to_string(), code.n(), code.k(), id.description());
                }
                Ok(())
            }
            CodesAction::Show { name } => {
                print!("{}", code_table(&name.build()?));
                Ok(())
            }
            CodesAction::FromParityCheck { file } => {
                let text = std::fs::read_to_string(&file).map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))?;
                let h: ParityCheckMatrix = text.parse().map_err(|e: ampdamp::Error| Failure::Usage(e.to_string()))?;
                print!("{}", code_table(&from_parity_check(&h)?));
                Ok(())
            }
        },
        Command::KlCheck { code, errors, tol } => {
            let c = code.build()?;
            let ops = DampingError::up_to_order(c.n(), errors)?;
            let r = c.knill_laflamme(&ops, tol)?;
            println!("correctable: {}, max_violation {}", r.correctable, num(r.max_violation));
            Ok(())
        }
        Command::DampedSubspace { code, qubits, prefer } => {
            let c = code.build()?;
            check_code_qubits(&c, &qubits.0)?;
            let preferred = prefer
                .iter()
                .map(|p| p.parse::<PauliOperator>().map_err(|e| Failure::Usage(e.to_string())))
                .collect::<CliResult<Vec<_>>>()?;
            let g = c.damped_subspace_preferring(&qubits.0, &preferred)?;
            let parts: Vec<String> = g.generators().iter().map(|p| p.to_string()).collect();
            println!("{}", parts.join(" / "));
            Ok(())
        }
        Command::Fidelity { code, recovery, grid, output } => {
            let mode = recovery.unwrap_or(default_mode(code));
            let g = grid_of(&grid)?;
            let curve = sweep(code, mode, &g, truncation_for(code, grid.truncate)?)?;
            let rows = curve_rows(&curve);
            let text = match output.format {
                Format::Csv => rows_csv(&rows)?,
                Format::Json => json_text(&rows)?,
            };
            write_output(&output, &text)
        }
        Command::Contributions { code, recovery, gamma, truncate, output } => {
            check_gamma(gamma)?;
            let mode = recovery.unwrap_or(default_mode(code));
            let c = code.build()?;
            let rec = build_recovery(code, mode, mode.needs_gamma().then_some(gamma))?;
            let r = pipeline_fidelity(&c, &rec, gamma, truncation_for(code, truncate)?)?;
            let text = match output.format {
                Format::Csv => {
                    let mut rows: Vec<Vec<String>> =
                        r.contributions.iter().map(|(o, v)| vec![o.to_string(), num(*v)]).collect();
                    rows.push(vec!["total".into(), num(r.fidelity)]);
                    csv_text(&["order", "contribution"], &rows)?
                }
                Format::Json => {
                    #[derive(Serialize)]
                    struct Out {
                        code: String,
                        recovery_mode: String,
                        gamma: f64,
                        fidelity: f64,
                        truncation_bound: f64,
                        contributions: BTreeMap<usize, f64>,
                    }
                    json_text(&Out {
                        code: c.name().to_string(),
                        recovery_mode: mode.to_string(),
                        gamma,
                        fidelity: r.fidelity,
                        truncation_bound: r.bound,
                        contributions: r.contributions,
                    })?
                }
            };
            write_output(&output, &text)
        }
        Command::Compare { codes, normalize, baseline, grid, output } => {
            let g = grid_of(&grid)?;
            let curves = compare(&codes, &g, grid.truncate)?;
            match output.format {
                Format::Json => {
                    let rows: Vec<Row> = curves.iter().flat_map(curve_rows).collect();
                    write_output(&output, &json_text(&rows)?)
                }
                Format::Csv => {
                    let mut header = vec!["gamma".to_string()];
                    header.extend(curves.iter().map(|c| format!("{}@{}", c.code, c.recovery_mode)));
                    let mut ks: Vec<usize> = if normalize { vec![1] } else { curves.iter().map(|c| c.k).collect() };
                    ks.sort_unstable();
                    ks.dedup();
                    if baseline {
                        header.extend(ks.iter().map(|k| format!("unencoded:{k}")));
                    }
                    let mut rows = Vec::new();
                    for (i, &gamma) in g.points().iter().enumerate() {
                        let mut row = vec![num(gamma)];
                        for c in &curves {
                            let p = &c.points[i];
                            row.push(num(if normalize { p.normalized_fidelity } else { p.fidelity }));
                        }
                        if baseline {
                            for &k in &ks {
                                row.push(num(baseline_unencoded(k, gamma)?));
                            }
                        }
                        rows.push(row);
                    }
                    let header: Vec<&str> = header.iter().map(String::as_str).collect();
                    write_output(&output, &csv_text(&header, &rows)?)
                }
            }
        }
        Command::EmitCircuit { code, kind, damped, out } => {
            let circuit = match (kind.as_str(), code) {
                ("encode", CircuitCode::Pair(m)) => build_encoding_circuit(m)?,
                ("recovery", CircuitCode::Pair(m)) => {
                    let d = damped.ok_or_else(|| Failure::Usage("`--kind recovery` needs `--damped`".into()))?;
                    if let Some(q) = d.0.iter().find(|&&q| q >= 2 * (m + 1)) {
                        return Err(Failure::Usage(format!("qubit {} is out of range", q + 1)));
                    }
                    build_recovery_circuit(m, &d.0).map_err(|e| Failure::Usage(e.to_string()))?
                }
                (k, _) if k.starts_with("syndrome:") => {
                    let stage: SyndromeStage =
                        k["syndrome:".len()..].parse().map_err(|e: ampdamp::Error| Failure::Usage(e.to_string()))?;
                    build_syndrome_circuit(code, stage).map_err(|e| Failure::Usage(e.to_string()))?
                }
                (k, _) => return Err(Failure::Usage(format!("circuit kind `{k}` is not available for this code"))),
            };
            let text = emit_text(&circuit);
            match out {
                Some(path) => std::fs::write(&path, text).map_err(|e| Failure::Compute(format!("{}: {e}", path.display()))),
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
        Command::Recovery { action: RecoveryAction::Show { code, mode, gamma } } => {
            let mode = mode.unwrap_or(default_mode(code));
            if let Some(g) = gamma {
                check_gamma(g)?;
            }
            if mode.needs_gamma() && gamma.is_none() {
                return Err(Failure::Usage(format!("recovery mode {mode} needs --gamma")));
            }
            let rec = build_recovery(code, mode, if mode.needs_gamma() { gamma } else { None })?;
            println!("{} {} ({} elements)", rec.code, rec.mode, rec.len());
            for (name, v) in &rec.parameters {
                println!("parameter {name} = {}", num(*v));
            }
            for (i, e) in rec.elements.iter().enumerate() {
                let syndrome = e.syndrome_string();
                println!("{:>4}  {:<24} {:<24} {}", i + 1, e.label, e.correction, syndrome);
            }
            for note in &rec.notes {
                println!("note: {note}");
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
