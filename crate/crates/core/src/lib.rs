//! Stabilizer codes adapted to the amplitude damping channel: code
//! constructions, damped-subspace algebra, recovery operations, exact
//! entanglement fidelity and gate-level circuits.

pub mod channel;
pub mod circuit;
pub mod codes;
mod error;
pub mod fidelity;
pub mod linalg;
pub mod pauli;
pub mod recovery;
pub mod stabilizer;

pub use channel::{enumerate_kraus, single_qubit_kraus, DampingError, DampingKraus, KrausSet, Truncation};
pub use circuit::{Circuit, CircuitCode, Gate, SyndromeStage};
pub use codes::{CodeId, ParityCheckMatrix};
pub use error::{Error, Result};
pub use fidelity::{
    baseline_unencoded, compare, default_truncation, entanglement_fidelity, pipeline_fidelity, sweep, syndrome_contributions,
    FidelityCurve, FidelityPoint, GammaGrid, PipelineResult,
};
pub use linalg::{SparseVector, StateMap, C64};
pub use pauli::{PauliKind, PauliOperator, Phase};
pub use recovery::{build_recovery, default_mode, RecoveryElement, RecoveryMode, RecoveryOperation};
pub use stabilizer::{are_orthogonal, damped_subspace, CompletionOrder, Codewords, KlReport, StabilizerCode, StabilizerGroup};
