//! Mask resolution into per-qubit micro-operation selection signals.
//! Each qubit gets a 2-bit selector: 00 none, 01 source micro-operation,
//! 10 target micro-operation, 11 single-qubit micro-operation. For
//! two-qubit masks the signal is an OR over the qubit's role edges, e.g.
//! on the default chip OpSel_0 = (T[0] | T[9]) :: (T[1] | T[8]).

use eqasm_core::ChipTopology;
use thiserror::Error;

/// Per-qubit micro-operation selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpSel {
    None,
    Source,
    Target,
    Single,
}

impl OpSel {
    pub fn bits(self) -> u8 {
        match self {
            OpSel::None => 0b00,
            OpSel::Source => 0b01,
            OpSel::Target => 0b10,
            OpSel::Single => 0b11,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum OpSelError {
    #[error("conflicting pair selection: qubit {0} appears in more than one selected pair")]
    ConflictingPairSelection(u8),
}

/// Kind of mask being resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaskKind {
    SingleQubit,
    TwoQubit,
}

/// Resolves a target-register mask into one selection signal per qubit.
/// Rejects two-qubit masks in which any qubit appears in more than one
/// selected pair; the assembler already refuses such masks, this re-check
/// guards programs that bypass it.
pub fn resolve_opsel(
    topology: &ChipTopology,
    mask: u32,
    kind: MaskKind,
) -> Result<Vec<OpSel>, OpSelError> {
    let n = topology.num_qubits as usize;
    match kind {
        MaskKind::SingleQubit => Ok((0..n)
            .map(|q| {
                if mask & (1 << q) != 0 {
                    OpSel::Single
                } else {
                    OpSel::None
                }
            })
            .collect()),
        MaskKind::TwoQubit => {
            // Multiplicity guard: the OR logic below cannot represent a
            // qubit owing two micro-operations.
            for q in 0..topology.num_qubits {
                let (source, target) = topology.edge_roles(q);
                let hits = source
                    .iter()
                    .chain(target.iter())
                    .filter(|&&e| mask & (1 << e) != 0)
                    .count();
                if hits > 1 {
                    return Err(OpSelError::ConflictingPairSelection(q));
                }
            }
            Ok((0..topology.num_qubits)
                .map(|q| {
                    let (source, target) = topology.edge_roles(q);
                    let src_bit = source.iter().any(|&e| mask & (1 << e) != 0);
                    let tgt_bit = target.iter().any(|&e| mask & (1 << e) != 0);
                    match (tgt_bit, src_bit) {
                        (false, false) => OpSel::None,
                        (false, true) => OpSel::Source,
                        (true, false) => OpSel::Target,
                        (true, true) => OpSel::Single, // unreachable after the guard
                    }
                })
                .collect())
        }
    }
}
