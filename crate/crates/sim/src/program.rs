//! Program preparation. The machine executes a prepared form in which
//! mnemonics are resolved against the opcode table, target lists are
//! folded into masks, rotation matrices are prebuilt, and branch targets
//! are plain offsets. Preparation re-checks everything the assembler
//! guarantees so that hand-built programs fail here instead of
//! corrupting a run.

use eqasm_core::{
    ArithOp, BranchTarget, CmpFlag, ConfigError, Gpr, InstantiationConfig, Instruction, LogicOp,
    QOpKind, QOpSemantics, RegRef, TopologyError,
};
use eqasm_quantum::Mat2;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PrepareError {
    #[error("invalid configuration: {0:?}")]
    InvalidConfig(Vec<ConfigError>),
    #[error("invalid topology: {0:?}")]
    InvalidTopology(Vec<TopologyError>),
    #[error("instruction {index}: unknown quantum operation '{mnemonic}'")]
    UnknownMnemonic { index: usize, mnemonic: String },
    #[error("instruction {index}: branch label '{label}' must be resolved before simulation")]
    UnresolvedLabel { index: usize, label: String },
    #[error("instruction {index}: operation '{mnemonic}' has the wrong target register kind")]
    KindMismatch { index: usize, mnemonic: String },
    #[error("instruction {index}: ({src}, {tgt}) is not an allowed qubit pair")]
    PairNotAllowed { index: usize, src: u8, tgt: u8 },
    #[error("instruction {index}: {what} {value} out of range")]
    OperandOutOfRange {
        index: usize,
        what: &'static str,
        value: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExecSlot {
    /// Index into the configuration's opcode table.
    pub op: usize,
    pub kind: QOpKind,
    pub reg: u8,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExecInstr {
    Cmp { rs: u8, rt: u8 },
    Br { flag: CmpFlag, offset: i32 },
    Fbr { flag: CmpFlag, rd: u8 },
    Ldi { rd: u8, imm: i32 },
    Ldui { rd: u8, imm: u32, rs: u8 },
    Ld { rd: u8, rt: u8, offset: i32 },
    St { rs: u8, rt: u8, offset: i32 },
    Fmr { rd: u8, qubit: u8 },
    Logic { op: LogicOp, rd: u8, rs: u8, rt: u8 },
    Not { rd: u8, rt: u8 },
    Arith { op: ArithOp, rd: u8, rs: u8, rt: u8 },
    Qwait { cycles: u32 },
    Qwaitr { rs: u8 },
    Smis { sd: u8, mask: u32 },
    Smit { td: u8, mask: u32 },
    Bundle { pi: u32, slots: Vec<ExecSlot> },
}

/// A program ready to run, together with per-operation metadata derived
/// from the configuration.
#[derive(Debug, Clone)]
pub struct ExecProgram {
    pub instrs: Vec<ExecInstr>,
    /// Rotation matrix per opcode-table entry (None for non-rotations).
    pub matrices: Vec<Option<Mat2>>,
}

fn check_gpr(r: Gpr, cfg: &InstantiationConfig, index: usize) -> Result<u8, PrepareError> {
    if r.0 < cfg.num_gprs {
        Ok(r.0)
    } else {
        Err(PrepareError::OperandOutOfRange {
            index,
            what: "GPR",
            value: r.0 as u32,
        })
    }
}

/// Resolves and validates a program against a configuration.
pub fn prepare(
    instructions: &[Instruction],
    cfg: &InstantiationConfig,
) -> Result<ExecProgram, PrepareError> {
    let config_errors = cfg.validate();
    if !config_errors.is_empty() {
        return Err(PrepareError::InvalidConfig(config_errors));
    }
    let topology_errors = cfg.topology.validate();
    if !topology_errors.is_empty() {
        return Err(PrepareError::InvalidTopology(topology_errors));
    }

    let matrices = cfg
        .q_ops
        .iter()
        .map(|op| match &op.semantics {
            QOpSemantics::Rotation { axis, angle_deg } => {
                Some(Mat2::rotation(*axis, angle_deg.to_radians()))
            }
            _ => None,
        })
        .collect();

    let mut instrs = Vec::with_capacity(instructions.len());
    for (index, instr) in instructions.iter().enumerate() {
        let exec = match instr {
            Instruction::Cmp { rs, rt } => ExecInstr::Cmp {
                rs: check_gpr(*rs, cfg, index)?,
                rt: check_gpr(*rt, cfg, index)?,
            },
            Instruction::Br { flag, target } => match target {
                BranchTarget::Offset(offset) => ExecInstr::Br {
                    flag: *flag,
                    offset: *offset,
                },
                BranchTarget::Label(label) => {
                    return Err(PrepareError::UnresolvedLabel {
                        index,
                        label: label.clone(),
                    })
                }
            },
            Instruction::Fbr { flag, rd } => ExecInstr::Fbr {
                flag: *flag,
                rd: check_gpr(*rd, cfg, index)?,
            },
            Instruction::Ldi { rd, imm } => ExecInstr::Ldi {
                rd: check_gpr(*rd, cfg, index)?,
                imm: *imm,
            },
            Instruction::Ldui { rd, imm, rs } => ExecInstr::Ldui {
                rd: check_gpr(*rd, cfg, index)?,
                imm: *imm,
                rs: check_gpr(*rs, cfg, index)?,
            },
            Instruction::Ld { rd, rt, offset } => ExecInstr::Ld {
                rd: check_gpr(*rd, cfg, index)?,
                rt: check_gpr(*rt, cfg, index)?,
                offset: *offset,
            },
            Instruction::St { rs, rt, offset } => ExecInstr::St {
                rs: check_gpr(*rs, cfg, index)?,
                rt: check_gpr(*rt, cfg, index)?,
                offset: *offset,
            },
            Instruction::Fmr { rd, qubit } => {
                if *qubit >= cfg.num_qubits() {
                    return Err(PrepareError::OperandOutOfRange {
                        index,
                        what: "qubit",
                        value: *qubit as u32,
                    });
                }
                ExecInstr::Fmr {
                    rd: check_gpr(*rd, cfg, index)?,
                    qubit: *qubit,
                }
            }
            Instruction::Logic { op, rd, rs, rt } => ExecInstr::Logic {
                op: *op,
                rd: check_gpr(*rd, cfg, index)?,
                rs: check_gpr(*rs, cfg, index)?,
                rt: check_gpr(*rt, cfg, index)?,
            },
            Instruction::Not { rd, rt } => ExecInstr::Not {
                rd: check_gpr(*rd, cfg, index)?,
                rt: check_gpr(*rt, cfg, index)?,
            },
            Instruction::Arith { op, rd, rs, rt } => ExecInstr::Arith {
                op: *op,
                rd: check_gpr(*rd, cfg, index)?,
                rs: check_gpr(*rs, cfg, index)?,
                rt: check_gpr(*rt, cfg, index)?,
            },
            Instruction::Qwait { cycles } => ExecInstr::Qwait { cycles: *cycles },
            Instruction::Qwaitr { rs } => ExecInstr::Qwaitr {
                rs: check_gpr(*rs, cfg, index)?,
            },
            Instruction::Smis { sd, qubits } => {
                if sd.0 >= cfg.num_sregs {
                    return Err(PrepareError::OperandOutOfRange {
                        index,
                        what: "S register",
                        value: sd.0 as u32,
                    });
                }
                let mut mask = 0u32;
                for &q in qubits {
                    if q >= cfg.qubit_mask_width {
                        return Err(PrepareError::OperandOutOfRange {
                            index,
                            what: "qubit",
                            value: q as u32,
                        });
                    }
                    mask |= 1 << q;
                }
                ExecInstr::Smis { sd: sd.0, mask }
            }
            Instruction::Smit { td, pairs } => {
                if td.0 >= cfg.num_tregs {
                    return Err(PrepareError::OperandOutOfRange {
                        index,
                        what: "T register",
                        value: td.0 as u32,
                    });
                }
                let mask = cfg.topology.pair_list_to_mask(pairs).map_err(|e| {
                    let eqasm_core::PairError::NotAnAllowedPair(src, tgt) = e;
                    PrepareError::PairNotAllowed { index, src, tgt }
                })?;
                ExecInstr::Smit { td: td.0, mask }
            }
            Instruction::Bundle { pi, slots } => {
                let mut exec_slots = Vec::new();
                for slot in slots {
                    let (op_idx, op) = cfg
                        .q_ops
                        .iter()
                        .enumerate()
                        .find(|(_, op)| op.mnemonic.eq_ignore_ascii_case(&slot.mnemonic))
                        .ok_or_else(|| PrepareError::UnknownMnemonic {
                            index,
                            mnemonic: slot.mnemonic.clone(),
                        })?;
                    let reg = match (op.kind, slot.target) {
                        (QOpKind::Qnop, None) => continue,
                        (QOpKind::Single | QOpKind::Measure, Some(RegRef::S(s)))
                            if s.0 < cfg.num_sregs =>
                        {
                            s.0
                        }
                        (QOpKind::TwoQubit, Some(RegRef::T(t))) if t.0 < cfg.num_tregs => t.0,
                        _ => {
                            return Err(PrepareError::KindMismatch {
                                index,
                                mnemonic: slot.mnemonic.clone(),
                            })
                        }
                    };
                    exec_slots.push(ExecSlot {
                        op: op_idx,
                        kind: op.kind,
                        reg,
                    });
                }
                ExecInstr::Bundle {
                    pi: *pi,
                    slots: exec_slots,
                }
            }
        };
        instrs.push(exec);
    }

    Ok(ExecProgram { instrs, matrices })
}

#[cfg(test)]
mod tests {
    use super::*;
    use eqasm_core::{BundleSlot, SReg};

    #[test]
    fn unknown_mnemonic_fails() {
        let cfg = InstantiationConfig::default();
        let program = [Instruction::Bundle {
            pi: 1,
            slots: vec![BundleSlot {
                mnemonic: "H".into(),
                target: Some(RegRef::S(SReg(0))),
            }],
        }];
        assert!(matches!(
            prepare(&program, &cfg),
            Err(PrepareError::UnknownMnemonic { index: 0, .. })
        ));
    }

    #[test]
    fn labels_must_be_resolved() {
        let cfg = InstantiationConfig::default();
        let program = [Instruction::Br {
            flag: CmpFlag::Always,
            target: BranchTarget::Label("loop".into()),
        }];
        assert!(matches!(
            prepare(&program, &cfg),
            Err(PrepareError::UnresolvedLabel { .. })
        ));
    }

    #[test]
    fn qnop_slots_vanish() {
        let cfg = InstantiationConfig::default();
        let program = [Instruction::Bundle {
            pi: 0,
            slots: vec![BundleSlot::qnop()],
        }];
        let prepared = prepare(&program, &cfg).unwrap();
        match &prepared.instrs[0] {
            ExecInstr::Bundle { slots, .. } => assert!(slots.is_empty()),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn invalid_config_is_rejected() {
        let cfg = InstantiationConfig {
            pair_mask_width: 2,
            ..Default::default()
        };
        assert!(matches!(
            prepare(&[], &cfg),
            Err(PrepareError::InvalidConfig(_))
        ));
    }
}
