//! Fixtures shared by the benchmarks.

use ampdamp::{build_recovery, default_mode, CodeId, RecoveryOperation, Result, StabilizerCode};

/// A code and its usual recovery.
pub fn fixture(code: CodeId) -> Result<(StabilizerCode, RecoveryOperation)> {
    let c = code.build()?;
    let r = build_recovery(code, default_mode(code), None)?;
    Ok((c, r))
}

/// The four pair-family codes, `[4,1]` through `[10,4]`.
pub fn family() -> Vec<CodeId> {
    vec![CodeId::Leung41, CodeId::Pair(2), CodeId::Pair(3), CodeId::Pair(4)]
}
