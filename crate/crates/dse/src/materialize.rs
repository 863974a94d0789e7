//! Turning a lowering into real eQASM text plus the matching
//! instantiation configuration, so a counted cell can be assembled and
//! its word count compared against the report. ts2 cells are count-only:
//! the bundle format has no encoding for a wait inside a slot.

use eqasm_core::{BundleSlot, ChipTopology, InstantiationConfig, Instruction, RegRef, SReg, TReg};
use thiserror::Error;

use crate::config::{DseConfig, TimingScheme};
use crate::lower::{LoweredStmt, Lowering};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MaterializeError {
    #[error("ts2 puts waits inside bundle slots; the bundle format cannot encode that")]
    Ts2NotEncodable,
    #[error(
        "no 32-bit bundle format fits VLIW width {w} with PI width {pi_width}: \
         the quantum opcode field would shrink below {min_bits} bits"
    )]
    CellNotEncodable { w: u8, pi_width: u8, min_bits: u8 },
    #[error("wait of {0} cycles exceeds the QWAIT immediate")]
    WaitTooLong(u64),
}

/// Builds the instantiation for one architecture cell: the cell's widths
/// and topology, the standard opcode table, and the widest quantum
/// opcode field that still fits the 32-bit word.
pub fn cell_instantiation(
    topology: &ChipTopology,
    cfg: &DseConfig,
) -> Result<InstantiationConfig, MaterializeError> {
    if cfg.scheme == TimingScheme::Ts2 {
        return Err(MaterializeError::Ts2NotEncodable);
    }
    let mut inst = InstantiationConfig::default();
    // The standard table tops out at opcode 10, so four bits is the
    // narrowest usable opcode field.
    let min_bits = 4u8;
    let budget = 31 - cfg.pi_width as u32;
    let per_slot = budget / cfg.vliw_width as u32;
    if per_slot < (min_bits as u32 + 5) {
        return Err(MaterializeError::CellNotEncodable {
            w: cfg.vliw_width,
            pi_width: cfg.pi_width,
            min_bits,
        });
    }
    inst.vliw_width = cfg.vliw_width;
    inst.pi_width = cfg.pi_width;
    inst.q_opcode_width = ((per_slot - 5) as u8).min(9);
    inst.topology = topology.clone();
    inst.qubit_mask_width = topology.num_qubits;
    inst.pair_mask_width = topology.num_edges() as u8;
    Ok(inst)
}

/// Renders the lowering as assembly text in the canonical syntax.
pub fn materialize(lowering: &Lowering) -> Result<String, MaterializeError> {
    let mut out = String::new();
    for stmt in &lowering.stmts {
        let instr = match stmt {
            LoweredStmt::Qwait(cycles) => {
                if *cycles >= 1 << 20 {
                    return Err(MaterializeError::WaitTooLong(*cycles));
                }
                Instruction::Qwait {
                    cycles: *cycles as u32,
                }
            }
            LoweredStmt::Smis { reg, qubits } => Instruction::Smis {
                sd: SReg(*reg),
                qubits: qubits.clone(),
            },
            LoweredStmt::Smit { reg, pairs } => Instruction::Smit {
                td: TReg(*reg),
                pairs: pairs.clone(),
            },
            LoweredStmt::Bundle {
                pi,
                wait_slot,
                slots,
            } => {
                if wait_slot.is_some() {
                    return Err(MaterializeError::Ts2NotEncodable);
                }
                Instruction::Bundle {
                    pi: *pi as u32,
                    slots: slots
                        .iter()
                        .map(|slot| BundleSlot {
                            mnemonic: slot.mnemonic.clone(),
                            target: Some(if slot.two_qubit {
                                RegRef::T(TReg(slot.reg))
                            } else {
                                RegRef::S(SReg(slot.reg))
                            }),
                        })
                        .collect(),
                }
            }
        };
        out.push_str(&instr.to_string());
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::numbered_config;

    #[test]
    fn encodable_cells_across_the_grid() {
        let topo = ChipTopology::seven_qubit();
        // (config id, w) -> expected opcode width, or None if unencodable.
        let cases = [
            ((1u8, 1u8), Some(9u8)),
            ((1, 2), Some(9)),
            ((1, 3), Some(5)),
            ((1, 4), None),
            ((5, 1), Some(9)),
            ((5, 2), Some(9)),
            ((5, 3), Some(4)),
            ((5, 4), None),
            ((9, 2), Some(9)),
        ];
        for ((id, w), expected) in cases {
            let cfg = numbered_config(id, w).unwrap();
            match (cell_instantiation(&topo, &cfg), expected) {
                (Ok(inst), Some(bits)) => {
                    assert_eq!(inst.q_opcode_width, bits, "config {id} w {w}");
                    assert!(inst.validate().is_empty(), "config {id} w {w}");
                }
                (Err(MaterializeError::CellNotEncodable { .. }), None) => {}
                (got, want) => panic!("config {id} w {w}: {got:?} vs {want:?}"),
            }
        }
    }

    #[test]
    fn ts2_is_refused() {
        let topo = ChipTopology::seven_qubit();
        let cfg = numbered_config(2, 2).unwrap();
        assert_eq!(
            cell_instantiation(&topo, &cfg),
            Err(MaterializeError::Ts2NotEncodable)
        );
    }
}
