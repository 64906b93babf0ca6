//! Entanglement fidelity of encode → damp → recover pipelines.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{enumerate_kraus, single_qubit_kraus, Truncation};
use crate::codes::CodeId;
use crate::error::{check_gamma, Error, Result};
use crate::linalg::{C64, ZERO};
use crate::recovery::{build_recovery, RecoveryMode, RecoveryOperation};
use crate::stabilizer::StabilizerCode;

/// Largest register the pipeline evaluates with dense intermediate states.
pub const MAX_PIPELINE_QUBITS: usize = 16;

const DENSITY_TOL: f64 = 1e-10;

/// `sum_i |tr(rho K_i)|^2`.
pub fn entanglement_fidelity(rho: &DMatrix<C64>, kraus: &[DMatrix<C64>]) -> Result<f64> {
    let d = rho.nrows();
    if rho.ncols() != d {
        return Err(Error::DimensionMismatch { expected: d, found: rho.ncols() });
    }
    if (rho - rho.adjoint()).iter().any(|x| x.norm() > DENSITY_TOL) {
        return Err(Error::InvalidDensity("not Hermitian".into()));
    }
    let tr = rho.trace();
    if (tr - C64::new(1.0, 0.0)).norm() > DENSITY_TOL {
        return Err(Error::InvalidDensity(format!("trace {tr}")));
    }
    let min = rho.clone().symmetric_eigen().eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if min < -DENSITY_TOL {
        return Err(Error::InvalidDensity(format!("negative eigenvalue {min}")));
    }
    let mut f = 0.0;
    for k in kraus {
        if k.nrows() != d || k.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, found: if k.nrows() != d { k.nrows() } else { k.ncols() } });
        }
        f += (rho * k).trace().norm_sqr();
    }
    Ok(f)
}

/// `((1 + sqrt(1-γ)) / 2)^(2k)`: `k` unprotected qubits.
pub fn baseline_unencoded(k: usize, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    Ok(((1.0 + (1.0 - gamma).sqrt()) / 2.0).powi(2 * k as i32))
}

/// Single-qubit damping fidelity through the generic routine; used to
/// cross-check [`baseline_unencoded`].
pub fn single_qubit_fidelity(gamma: f64) -> Result<f64> {
    let [e0, e1] = single_qubit_kraus(gamma)?;
    let rho = DMatrix::<C64>::identity(2, 2) * C64::new(0.5, 0.0);
    let to_d = |m: nalgebra::Matrix2<C64>| DMatrix::from_iterator(2, 2, m.iter().copied());
    entanglement_fidelity(&rho, &[to_d(e0), to_d(e1)])
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineResult {
    pub fidelity: f64,
    pub truncation: Truncation,
    /// Upper bound on `exact - fidelity`: the encoded-state weight of the
    /// dropped damping operators, `1 - 2^-k sum_kept sum_a ||K c_a||^2`.
    pub bound: f64,
    /// Fidelity split by the number of damped qubits.
    pub contributions: BTreeMap<usize, f64>,
}

fn check_match(code: &StabilizerCode, recovery: &RecoveryOperation) -> Result<()> {
    if recovery.n != code.n() {
        return Err(Error::DimensionMismatch { expected: code.n(), found: recovery.n });
    }
    if recovery.k != code.k() {
        return Err(Error::DimensionMismatch { expected: code.k(), found: recovery.k });
    }
    if recovery.code != code.name() {
        return Err(Error::InvalidArgument(format!("recovery was built for {}, not {}", recovery.code, code.name())));
    }
    Ok(())
}

/// `F_e = 4^-k sum_{K,R} |sum_a <u_a| K |c_a>|^2` for the maximally mixed
/// logical input, with the damping operators enumerated up to `truncation`.
pub fn pipeline_fidelity(code: &StabilizerCode, recovery: &RecoveryOperation, gamma: f64, truncation: Truncation) -> Result<PipelineResult> {
    check_match(code, recovery)?;
    let n = code.n();
    if n > MAX_PIPELINE_QUBITS {
        return Err(Error::TooManyQubits { n, max: MAX_PIPELINE_QUBITS });
    }
    let kraus = enumerate_kraus(n, gamma, truncation)?;
    let cw = code.codewords()?;
    let sparse: Vec<Vec<(usize, C64)>> = cw
        .vectors()
        .iter()
        .map(|v| v.iter().enumerate().filter(|(_, x)| x.norm() > 0.0).map(|(j, &x)| (j, x)).collect())
        .collect();
    let kdim = sparse.len();
    let norm = 1.0 / (kdim * kdim) as f64;
    let dim = 1usize << n;
    let mut images = vec![vec![ZERO; dim]; kdim];
    let mut touched: Vec<Vec<usize>> = vec![Vec::new(); kdim];
    let mut fidelity = 0.0;
    let mut kept = 0.0;
    let mut contributions: BTreeMap<usize, f64> = BTreeMap::new();
    for k in &kraus.operators {
        for (a, cwa) in sparse.iter().enumerate() {
            for i in touched[a].drain(..) {
                images[a][i] = ZERO;
            }
            for &(j, x) in cwa {
                if let Some((i, f)) = k.column(j) {
                    images[a][i] += x * f;
                    touched[a].push(i);
                }
            }
            kept += touched[a].iter().map(|&i| images[a][i].norm_sqr()).sum::<f64>() / kdim as f64;
        }
        let mut part = 0.0;
        for e in &recovery.elements {
            let amp: C64 = e.rows.iter().map(|(a, u)| u.dot_dense(&images[*a])).sum();
            part += amp.norm_sqr();
        }
        part *= norm;
        fidelity += part;
        *contributions.entry(k.order()).or_insert(0.0) += part;
    }
    let bound = match truncation {
        Truncation::Exact => 0.0,
        Truncation::MaxOrder(_) => (1.0 - kept).max(0.0),
    };
    Ok(PipelineResult { fidelity, truncation, bound, contributions })
}

/// Fidelity split by damping order, with every damping pattern included.
pub fn syndrome_contributions(code: &StabilizerCode, recovery: &RecoveryOperation, gamma: f64) -> Result<BTreeMap<usize, f64>> {
    Ok(pipeline_fidelity(code, recovery, gamma, Truncation::Exact)?.contributions)
}

/// Exact for small registers, third order from nine qubits up.
pub fn default_truncation(n: usize) -> Truncation {
    if n <= 8 {
        Truncation::Exact
    } else {
        Truncation::MaxOrder(3)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GammaGrid {
    points: Vec<f64>,
}

impl GammaGrid {
    /// `steps` evenly spaced points from `min` to `max` inclusive.
    pub fn linear(min: f64, max: f64, steps: usize) -> Result<Self> {
        Self::check_range(min, max, steps)?;
        let points = if steps == 1 {
            vec![min]
        } else {
            (0..steps).map(|i| if i + 1 == steps { max } else { min + (max - min) * i as f64 / (steps - 1) as f64 }).collect()
        };
        Ok(GammaGrid { points })
    }

    /// `steps` logarithmically spaced points; `min` must be positive.
    pub fn log(min: f64, max: f64, steps: usize) -> Result<Self> {
        Self::check_range(min, max, steps)?;
        if min <= 0.0 {
            return Err(Error::InvalidArgument("logarithmic grid needs a positive minimum".into()));
        }
        let (l0, l1) = (min.ln(), max.ln());
        let points = if steps == 1 {
            vec![min]
        } else {
            (0..steps)
                .map(|i| if i + 1 == steps { max } else { (l0 + (l1 - l0) * i as f64 / (steps - 1) as f64).exp() })
                .collect()
        };
        Ok(GammaGrid { points })
    }

    pub fn from_points(mut points: Vec<f64>) -> Result<Self> {
        for &g in &points {
            check_gamma(g)?;
        }
        points.sort_by(f64::total_cmp);
        Ok(GammaGrid { points })
    }

    fn check_range(min: f64, max: f64, steps: usize) -> Result<()> {
        check_gamma(min)?;
        check_gamma(max)?;
        if min > max {
            return Err(Error::InvalidArgument(format!("gamma range [{min}, {max}] is empty")));
        }
        if steps == 0 {
            return Err(Error::InvalidArgument("at least one gamma point is needed".into()));
        }
        if steps == 1 && min != max {
            return Err(Error::InvalidArgument("a single step needs gamma-min = gamma-max".into()));
        }
        Ok(())
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FidelityPoint {
    pub gamma: f64,
    pub fidelity: f64,
    /// `fidelity^(1/k)`.
    pub normalized_fidelity: f64,
    pub truncation_bound: f64,
    pub contributions: BTreeMap<usize, f64>,
    /// Free parameters chosen for this point (e.g. the optimized angle).
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub parameters: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FidelityCurve {
    pub code: String,
    pub recovery_mode: String,
    pub n: usize,
    pub k: usize,
    pub truncation_order: Option<usize>,
    pub points: Vec<FidelityPoint>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Evaluates `factory(γ)` at every grid point, in parallel, keeping grid
/// order. A factory that ignores `γ` is called once per point as well.
pub fn sweep_with<F>(code: &StabilizerCode, label: &str, grid: &GammaGrid, truncation: Truncation, factory: F) -> Result<FidelityCurve>
where
    F: Fn(f64) -> Result<RecoveryOperation> + Sync,
{
    let results: Vec<Result<(FidelityPoint, Vec<String>)>> = grid
        .points()
        .par_iter()
        .map(|&g| {
            let rec = factory(g)?;
            let r = pipeline_fidelity(code, &rec, g, truncation)?;
            Ok((
                FidelityPoint {
                    gamma: g,
                    fidelity: r.fidelity,
                    normalized_fidelity: r.fidelity.max(0.0).powf(1.0 / code.k() as f64),
                    truncation_bound: r.bound,
                    contributions: r.contributions,
                    parameters: rec.parameters,
                },
                rec.notes,
            ))
        })
        .collect();
    let mut points = Vec::with_capacity(results.len());
    let mut notes = Vec::new();
    for r in results {
        let (p, ns) = r?;
        points.push(p);
        if notes.is_empty() {
            notes = ns;
        }
    }
    Ok(FidelityCurve {
        code: code.name().to_string(),
        recovery_mode: label.to_string(),
        n: code.n(),
        k: code.k(),
        truncation_order: truncation.max_order(),
        points,
        notes,
    })
}

/// Curve for a named code and recovery mode; recoveries that depend on `γ`
/// are rebuilt at every point, the others are built once.
pub fn sweep(code: CodeId, mode: RecoveryMode, grid: &GammaGrid, truncation: Truncation) -> Result<FidelityCurve> {
    let c = code.build()?;
    if mode.needs_gamma() {
        sweep_with(&c, mode.name(), grid, truncation, |g| build_recovery(code, mode, Some(g)))
    } else {
        let rec = build_recovery(code, mode, None)?;
        sweep_with(&c, mode.name(), grid, truncation, |_| Ok(rec.clone()))
    }
}

/// Curves for several codes on one grid; `truncation = None` picks the
/// default for each code's size.
pub fn compare(entries: &[(CodeId, RecoveryMode)], grid: &GammaGrid, truncation: Option<Truncation>) -> Result<Vec<FidelityCurve>> {
    entries
        .iter()
        .map(|&(code, mode)| {
            let t = truncation.unwrap_or_else(|| default_truncation(code.build().map(|c| c.n()).unwrap_or(0)));
            sweep(code, mode, grid, t)
        })
        .collect()
}

/// The unencoded `k`-qubit curve on a grid.
pub fn baseline_curve(k: usize, grid: &GammaGrid) -> Result<FidelityCurve> {
    let points = grid
        .points()
        .iter()
        .map(|&g| {
            let f = baseline_unencoded(k, g)?;
            Ok(FidelityPoint {
                gamma: g,
                fidelity: f,
                normalized_fidelity: f.powf(1.0 / k as f64),
                truncation_bound: 0.0,
                contributions: BTreeMap::new(),
                parameters: BTreeMap::new(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FidelityCurve {
        code: format!("baseline:{k}"),
        recovery_mode: "none".into(),
        n: k,
        k,
        truncation_order: None,
        points,
        notes: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::leung_41;
    use crate::recovery::leung41_recovery;

    #[test]
    fn baseline_matches_generic_formula() {
        for g in [0.0, 0.1, 0.2, 0.7, 1.0] {
            assert!((baseline_unencoded(1, g).unwrap() - single_qubit_fidelity(g).unwrap()).abs() < 1e-14);
        }
        assert!((single_qubit_fidelity(0.2).unwrap() - 0.89721).abs() < 1e-5);
        let f1 = baseline_unencoded(1, 0.3).unwrap();
        assert!((baseline_unencoded(3, 0.3).unwrap() - f1.powi(3)).abs() < 1e-14);
        assert!(baseline_unencoded(0, 0.1).is_err());
    }

    #[test]
    fn density_is_validated() {
        let id = DMatrix::<C64>::identity(2, 2);
        assert!(entanglement_fidelity(&id, std::slice::from_ref(&id)).is_err());
        let rho = &id * C64::new(0.5, 0.0);
        assert!((entanglement_fidelity(&rho, std::slice::from_ref(&id)).unwrap() - 1.0).abs() < 1e-15);
        let bad = DMatrix::from_row_slice(2, 2, &[C64::new(1.5, 0.0), ZERO, ZERO, C64::new(-0.5, 0.0)]);
        assert!(matches!(entanglement_fidelity(&bad, std::slice::from_ref(&id)), Err(Error::InvalidDensity(_))));
        assert!(entanglement_fidelity(&rho, &[DMatrix::identity(3, 3)]).is_err());
    }

    #[test]
    fn trivial_channel_gives_one() {
        let code = leung_41();
        let rec = leung41_recovery(RecoveryMode::Projection, None).unwrap();
        let r = pipeline_fidelity(&code, &rec, 0.0, Truncation::Exact).unwrap();
        assert!((r.fidelity - 1.0).abs() < 1e-14);
        assert!((r.contributions[&0] - 1.0).abs() < 1e-14);
        assert_eq!(r.bound, 0.0);
    }

    #[test]
    fn mismatched_recovery_is_rejected() {
        let rec = leung41_recovery(RecoveryMode::Projection, None).unwrap();
        assert!(pipeline_fidelity(&crate::codes::hamming_73(), &rec, 0.1, Truncation::Exact).is_err());
    }

    #[test]
    fn grids() {
        let g = GammaGrid::linear(0.0, 0.3, 31).unwrap();
        assert_eq!(g.len(), 31);
        assert_eq!(g.points()[30], 0.3);
        assert!((g.points()[10] - 0.1).abs() < 1e-15);
        let l = GammaGrid::log(1e-3, 1e-2, 5).unwrap();
        assert!((l.points()[2] - 10f64.powf(-2.5)).abs() < 1e-15);
        assert!(GammaGrid::log(0.0, 0.1, 3).is_err());
        assert!(GammaGrid::linear(0.2, 0.1, 3).is_err());
        assert!(GammaGrid::linear(0.0, 1.5, 3).is_err());
    }
}
