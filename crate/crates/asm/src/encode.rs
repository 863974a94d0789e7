//! Binary encoding. Every instruction is one 32-bit word. Bit 31
//! distinguishes the two formats: 0 selects the single format
//! `[0 | opcode:6 | fields:25]`, 1 selects the bundle format
//! `[1 | (q_opcode:N | reg:5) x w | PI:p]` with slot 0 in the highest
//! bits. Single-format field use per instruction:
//!
//! ```text
//! CMP              rs[19:15] rt[14:10]
//! BR               flag[24:21] offset[20:0]   (signed words, PC-relative)
//! FBR              rd[24:20] flag[3:0]
//! LDI              rd[24:20] imm[19:0]        (signed)
//! LDUI             rd[24:20] rs[19:15] imm[14:0]
//! LD               rd[24:20] rt[14:10] imm[9:0]  (signed)
//! ST               rs[19:15] rt[14:10] imm[9:0]  (signed)
//! FMR              rd[24:20] qubit[19:15]
//! AND/OR/XOR/ADD/SUB  rd[24:20] rs[19:15] rt[14:10]
//! NOT              rd[24:20] rt[14:10]
//! QWAIT            imm[19:0]
//! QWAITR           rs[19:15]
//! SMIS             sd[24:20] qubit mask[m-1:0]
//! SMIT             td[24:20] pair mask[m-1:0]
//! ```

use eqasm_core::{
    ArithOp, BranchTarget, BundleSlot, CmpFlag, Gpr, InstantiationConfig, Instruction, LogicOp,
    RegRef, SReg, TReg,
};
use thiserror::Error;

use crate::diag::Diagnostic;
use crate::parse::SourceProgram;

const OPC_CMP: u32 = 1;
const OPC_BR: u32 = 2;
const OPC_FBR: u32 = 3;
const OPC_LDI: u32 = 4;
const OPC_LDUI: u32 = 5;
const OPC_LD: u32 = 6;
const OPC_ST: u32 = 7;
const OPC_FMR: u32 = 8;
const OPC_AND: u32 = 9;
const OPC_OR: u32 = 10;
const OPC_XOR: u32 = 11;
const OPC_NOT: u32 = 12;
const OPC_ADD: u32 = 13;
const OPC_SUB: u32 = 14;
const OPC_QWAIT: u32 = 16;
const OPC_QWAITR: u32 = 17;
const OPC_SMIS: u32 = 20;
const OPC_SMIT: u32 = 21;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EncodeError {
    #[error("instruction {index}: {what} {value} does not fit its field")]
    ImmediateOverflow {
        index: usize,
        what: &'static str,
        value: i64,
    },
    #[error("instruction {index}: bundle has {got} slots, the word format holds {want}")]
    BundleWidthMismatch {
        index: usize,
        got: usize,
        want: usize,
    },
    #[error("instruction {index}: unknown quantum operation '{mnemonic}'")]
    UnknownMnemonic { index: usize, mnemonic: String },
    #[error("instruction {index}: ({src}, {tgt}) is not an allowed qubit pair")]
    NotAnAllowedPair { index: usize, src: u8, tgt: u8 },
    #[error("instruction {index}: branch target '{label}' is unresolved")]
    UnresolvedLabel { index: usize, label: String },
}

impl EncodeError {
    pub fn into_diagnostic(self) -> Diagnostic {
        Diagnostic::global(self.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecodeError {
    #[error("word {index}: unknown opcode {opcode}")]
    UnknownOpcode { index: usize, opcode: u32 },
    #[error("word {index}: unknown quantum opcode {opcode}")]
    UnknownQOpcode { index: usize, opcode: u16 },
    #[error("word {index}: {what} out of range for this instantiation")]
    InvalidField { index: usize, what: &'static str },
}

fn unsigned_field(value: u32, bits: u8) -> u32 {
    debug_assert!(bits == 32 || value < (1 << bits));
    value
}

fn signed_field(value: i32, bits: u8) -> Option<u32> {
    let min = -(1i64 << (bits - 1));
    let max = (1i64 << (bits - 1)) - 1;
    if (value as i64) < min || (value as i64) > max {
        return None;
    }
    Some((value as u32) & ((1u32 << bits) - 1))
}

fn sign_extend(value: u32, bits: u8) -> i32 {
    let shift = 32 - bits;
    ((value << shift) as i32) >> shift
}

/// Replaces label branch targets by signed word offsets relative to the
/// branch itself. Run after splitting, since splitting moves statements.
pub fn resolve_branches(program: &SourceProgram) -> Result<Vec<Instruction>, Vec<Diagnostic>> {
    let mut errors = Vec::new();
    let instructions = program
        .statements
        .iter()
        .enumerate()
        .map(|(i, stmt)| match &stmt.instr {
            Instruction::Br {
                flag,
                target: BranchTarget::Label(name),
            } => match program.labels.get(name) {
                Some(&idx) => Instruction::Br {
                    flag: *flag,
                    target: BranchTarget::Offset(idx as i32 - i as i32),
                },
                None => {
                    errors.push(Diagnostic::new(
                        stmt.line,
                        1,
                        format!("unresolved label '{name}'"),
                    ));
                    stmt.instr.clone()
                }
            },
            other => other.clone(),
        })
        .collect();
    if errors.is_empty() {
        Ok(instructions)
    } else {
        Err(errors)
    }
}

fn single(opcode: u32, fields: u32) -> u32 {
    debug_assert!(fields < 1 << 25);
    (opcode << 25) | fields
}

fn reg_a(r: u8) -> u32 {
    (r as u32) << 20
}

fn reg_b(r: u8) -> u32 {
    (r as u32) << 15
}

fn reg_c(r: u8) -> u32 {
    (r as u32) << 10
}

fn encode_one(
    instr: &Instruction,
    cfg: &InstantiationConfig,
    index: usize,
) -> Result<u32, EncodeError> {
    let overflow = |what, value: i64| EncodeError::ImmediateOverflow { index, what, value };
    let word = match instr {
        Instruction::Cmp { rs, rt } => single(OPC_CMP, reg_b(rs.0) | reg_c(rt.0)),
        Instruction::Br { flag, target } => {
            let offset = match target {
                BranchTarget::Offset(off) => *off,
                BranchTarget::Label(name) => {
                    return Err(EncodeError::UnresolvedLabel {
                        index,
                        label: name.clone(),
                    })
                }
            };
            let field =
                signed_field(offset, 21).ok_or_else(|| overflow("branch offset", offset as i64))?;
            single(OPC_BR, ((flag.code() as u32) << 21) | field)
        }
        Instruction::Fbr { flag, rd } => single(OPC_FBR, reg_a(rd.0) | flag.code() as u32),
        Instruction::Ldi { rd, imm } => {
            let field = signed_field(*imm, 20).ok_or_else(|| overflow("immediate", *imm as i64))?;
            single(OPC_LDI, reg_a(rd.0) | field)
        }
        Instruction::Ldui { rd, imm, rs } => {
            if *imm >= 1 << 15 {
                return Err(overflow("immediate", *imm as i64));
            }
            single(OPC_LDUI, reg_a(rd.0) | reg_b(rs.0) | imm)
        }
        Instruction::Ld { rd, rt, offset } => {
            let field = signed_field(*offset, 10)
                .ok_or_else(|| overflow("memory offset", *offset as i64))?;
            single(OPC_LD, reg_a(rd.0) | reg_c(rt.0) | field)
        }
        Instruction::St { rs, rt, offset } => {
            let field = signed_field(*offset, 10)
                .ok_or_else(|| overflow("memory offset", *offset as i64))?;
            single(OPC_ST, reg_b(rs.0) | reg_c(rt.0) | field)
        }
        Instruction::Fmr { rd, qubit } => single(OPC_FMR, reg_a(rd.0) | reg_b(*qubit)),
        Instruction::Logic { op, rd, rs, rt } => {
            let opcode = match op {
                LogicOp::And => OPC_AND,
                LogicOp::Or => OPC_OR,
                LogicOp::Xor => OPC_XOR,
            };
            single(opcode, reg_a(rd.0) | reg_b(rs.0) | reg_c(rt.0))
        }
        Instruction::Not { rd, rt } => single(OPC_NOT, reg_a(rd.0) | reg_c(rt.0)),
        Instruction::Arith { op, rd, rs, rt } => {
            let opcode = match op {
                ArithOp::Add => OPC_ADD,
                ArithOp::Sub => OPC_SUB,
            };
            single(opcode, reg_a(rd.0) | reg_b(rs.0) | reg_c(rt.0))
        }
        Instruction::Qwait { cycles } => {
            if *cycles > cfg.max_qwait() {
                return Err(overflow("wait time", *cycles as i64));
            }
            single(OPC_QWAIT, *cycles)
        }
        Instruction::Qwaitr { rs } => single(OPC_QWAITR, reg_b(rs.0)),
        Instruction::Smis { sd, qubits } => {
            let mut mask = 0u32;
            for &q in qubits {
                if q >= cfg.qubit_mask_width {
                    return Err(overflow("qubit address", q as i64));
                }
                mask |= 1 << q;
            }
            single(OPC_SMIS, reg_a(sd.0) | mask)
        }
        Instruction::Smit { td, pairs } => {
            let mask = cfg.topology.pair_list_to_mask(pairs).map_err(|e| {
                let eqasm_core::PairError::NotAnAllowedPair(src, tgt) = e;
                EncodeError::NotAnAllowedPair { index, src, tgt }
            })?;
            if cfg.pair_mask_width < 32 && mask >= 1 << cfg.pair_mask_width {
                return Err(overflow("pair mask", mask as i64));
            }
            single(OPC_SMIT, reg_a(td.0) | mask)
        }
        Instruction::Bundle { pi, slots } => {
            let w = cfg.vliw_width as usize;
            if slots.len() != w {
                return Err(EncodeError::BundleWidthMismatch {
                    index,
                    got: slots.len(),
                    want: w,
                });
            }
            if *pi > cfg.max_pi() {
                return Err(overflow("pre-interval", *pi as i64));
            }
            let slot_bits = cfg.q_opcode_width as u32 + 5;
            let mut word = 1u32 << 31;
            for (i, slot) in slots.iter().enumerate() {
                let op = cfg.op_by_mnemonic(&slot.mnemonic).ok_or_else(|| {
                    EncodeError::UnknownMnemonic {
                        index,
                        mnemonic: slot.mnemonic.clone(),
                    }
                })?;
                let reg = slot.target.map(|r| r.index()).unwrap_or(0);
                let value =
                    (unsigned_field(op.opcode as u32, cfg.q_opcode_width) << 5) | reg as u32;
                let shift = 31 - (i as u32 + 1) * slot_bits;
                word |= value << shift;
            }
            word | *pi
        }
    };
    Ok(word)
}

/// Encodes a split, legalized, branch-resolved program to words.
pub fn encode(
    instructions: &[Instruction],
    cfg: &InstantiationConfig,
) -> Result<Vec<u32>, EncodeError> {
    instructions
        .iter()
        .enumerate()
        .map(|(i, instr)| encode_one(instr, cfg, i))
        .collect()
}

fn decode_one(
    word: u32,
    cfg: &InstantiationConfig,
    index: usize,
) -> Result<Instruction, DecodeError> {
    if word & (1 << 31) != 0 {
        let slot_bits = cfg.q_opcode_width as u32 + 5;
        let mut slots = Vec::with_capacity(cfg.vliw_width as usize);
        for i in 0..cfg.vliw_width as u32 {
            let shift = 31 - (i + 1) * slot_bits;
            let value = (word >> shift) & ((1 << slot_bits) - 1);
            let opcode = (value >> 5) as u16;
            let reg = (value & 0x1f) as u8;
            let op = cfg
                .op_by_opcode(opcode)
                .ok_or(DecodeError::UnknownQOpcode { index, opcode })?;
            let target = match op.kind {
                eqasm_core::QOpKind::Qnop => None,
                eqasm_core::QOpKind::TwoQubit => {
                    if reg >= cfg.num_tregs {
                        return Err(DecodeError::InvalidField {
                            index,
                            what: "T register",
                        });
                    }
                    Some(RegRef::T(TReg(reg)))
                }
                _ => {
                    if reg >= cfg.num_sregs {
                        return Err(DecodeError::InvalidField {
                            index,
                            what: "S register",
                        });
                    }
                    Some(RegRef::S(SReg(reg)))
                }
            };
            slots.push(BundleSlot {
                mnemonic: op.mnemonic.clone(),
                target,
            });
        }
        let pi = word & cfg.max_pi();
        return Ok(Instruction::Bundle { pi, slots });
    }

    let opcode = (word >> 25) & 0x3f;
    let a = ((word >> 20) & 0x1f) as u8;
    let b = ((word >> 15) & 0x1f) as u8;
    let c = ((word >> 10) & 0x1f) as u8;
    let gpr = |r: u8, what: &'static str| {
        if r < cfg.num_gprs {
            Ok(Gpr(r))
        } else {
            Err(DecodeError::InvalidField { index, what })
        }
    };
    let flag = |code: u32, what: &'static str| {
        CmpFlag::from_code(code as u8).ok_or(DecodeError::InvalidField { index, what })
    };

    let instr = match opcode {
        OPC_CMP => Instruction::Cmp {
            rs: gpr(b, "Rs")?,
            rt: gpr(c, "Rt")?,
        },
        OPC_BR => Instruction::Br {
            flag: flag((word >> 21) & 0xf, "comparison flag")?,
            target: BranchTarget::Offset(sign_extend(word & 0x1f_ffff, 21)),
        },
        OPC_FBR => Instruction::Fbr {
            flag: flag(word & 0xf, "comparison flag")?,
            rd: gpr(a, "Rd")?,
        },
        OPC_LDI => Instruction::Ldi {
            rd: gpr(a, "Rd")?,
            imm: sign_extend(word & 0xf_ffff, 20),
        },
        OPC_LDUI => Instruction::Ldui {
            rd: gpr(a, "Rd")?,
            imm: word & 0x7fff,
            rs: gpr(b, "Rs")?,
        },
        OPC_LD => Instruction::Ld {
            rd: gpr(a, "Rd")?,
            rt: gpr(c, "Rt")?,
            offset: sign_extend(word & 0x3ff, 10),
        },
        OPC_ST => Instruction::St {
            rs: gpr(b, "Rs")?,
            rt: gpr(c, "Rt")?,
            offset: sign_extend(word & 0x3ff, 10),
        },
        OPC_FMR => {
            if b >= cfg.num_qubits() {
                return Err(DecodeError::InvalidField {
                    index,
                    what: "qubit address",
                });
            }
            Instruction::Fmr {
                rd: gpr(a, "Rd")?,
                qubit: b,
            }
        }
        OPC_AND | OPC_OR | OPC_XOR => Instruction::Logic {
            op: match opcode {
                OPC_AND => LogicOp::And,
                OPC_OR => LogicOp::Or,
                _ => LogicOp::Xor,
            },
            rd: gpr(a, "Rd")?,
            rs: gpr(b, "Rs")?,
            rt: gpr(c, "Rt")?,
        },
        OPC_NOT => Instruction::Not {
            rd: gpr(a, "Rd")?,
            rt: gpr(c, "Rt")?,
        },
        OPC_ADD | OPC_SUB => Instruction::Arith {
            op: if opcode == OPC_ADD {
                ArithOp::Add
            } else {
                ArithOp::Sub
            },
            rd: gpr(a, "Rd")?,
            rs: gpr(b, "Rs")?,
            rt: gpr(c, "Rt")?,
        },
        OPC_QWAIT => Instruction::Qwait {
            cycles: word & 0xf_ffff,
        },
        OPC_QWAITR => Instruction::Qwaitr { rs: gpr(b, "Rs")? },
        OPC_SMIS => {
            let mask = word & ((1 << cfg.qubit_mask_width) - 1);
            if a >= cfg.num_sregs {
                return Err(DecodeError::InvalidField {
                    index,
                    what: "S register",
                });
            }
            let qubits = (0..cfg.qubit_mask_width)
                .filter(|q| mask & (1 << q) != 0)
                .collect();
            Instruction::Smis {
                sd: SReg(a),
                qubits,
            }
        }
        OPC_SMIT => {
            let mask = if cfg.pair_mask_width >= 32 {
                word & 0xf_ffff
            } else {
                word & ((1 << cfg.pair_mask_width) - 1)
            };
            if a >= cfg.num_tregs {
                return Err(DecodeError::InvalidField {
                    index,
                    what: "T register",
                });
            }
            Instruction::Smit {
                td: TReg(a),
                pairs: cfg.topology.mask_to_pair_list(mask),
            }
        }
        other => {
            return Err(DecodeError::UnknownOpcode {
                index,
                opcode: other,
            })
        }
    };
    Ok(instr)
}

/// Decodes words produced by [`encode`] under the same configuration.
pub fn decode(words: &[u32], cfg: &InstantiationConfig) -> Result<Vec<Instruction>, DecodeError> {
    words
        .iter()
        .enumerate()
        .map(|(i, &w)| decode_one(w, cfg, i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> InstantiationConfig {
        InstantiationConfig::default()
    }

    #[test]
    fn smis_word_layout() {
        // SMIS S7, {0, 2}: opcode 20, Sd 7, mask 0b101.
        let instr = Instruction::Smis {
            sd: SReg(7),
            qubits: vec![0, 2],
        };
        let word = encode_one(&instr, &cfg(), 0).unwrap();
        assert_eq!(word >> 31, 0);
        assert_eq!((word >> 25) & 0x3f, OPC_SMIS);
        assert_eq!((word >> 20) & 0x1f, 7);
        assert_eq!(word & 0x7f, 0b0000101);
    }

    #[test]
    fn qwait_word_layout() {
        let word = encode_one(&Instruction::Qwait { cycles: 10000 }, &cfg(), 0).unwrap();
        assert_eq!(word >> 31, 0);
        assert_eq!((word >> 25) & 0x3f, OPC_QWAIT);
        assert_eq!(word & 0xf_ffff, 10000);
    }

    #[test]
    fn bundle_word_layout() {
        // 1, X90 S0 | X S2: X90 has opcode 4, X has opcode 2.
        let instr = Instruction::Bundle {
            pi: 1,
            slots: vec![
                BundleSlot {
                    mnemonic: "X90".into(),
                    target: Some(RegRef::S(SReg(0))),
                },
                BundleSlot {
                    mnemonic: "X".into(),
                    target: Some(RegRef::S(SReg(2))),
                },
            ],
        };
        let word = encode_one(&instr, &cfg(), 0).unwrap();
        assert_eq!(word >> 31, 1);
        assert_eq!((word >> 22) & 0x1ff, 4); // slot 0 opcode
        assert_eq!((word >> 17) & 0x1f, 0); // slot 0 register
        assert_eq!((word >> 8) & 0x1ff, 2); // slot 1 opcode
        assert_eq!((word >> 3) & 0x1f, 2); // slot 1 register
        assert_eq!(word & 0x7, 1); // PI
                                   // All field positions re-concatenate to the original word.
        let rebuilt = (1u32 << 31)
            | (((word >> 22) & 0x1ff) << 22)
            | (((word >> 17) & 0x1f) << 17)
            | (((word >> 8) & 0x1ff) << 8)
            | (((word >> 3) & 0x1f) << 3)
            | (word & 0x7);
        assert_eq!(rebuilt, word);
    }

    #[test]
    fn all_zero_word_is_an_unknown_single_format_opcode() {
        assert_eq!(
            decode(&[0], &cfg()),
            Err(DecodeError::UnknownOpcode {
                index: 0,
                opcode: 0
            })
        );
    }

    #[test]
    fn unknown_quantum_opcode_is_reported() {
        // Bundle word with q_opcode 100 in slot 0, which is unassigned.
        let word = (1u32 << 31) | (100 << 22);
        assert_eq!(
            decode(&[word], &cfg()),
            Err(DecodeError::UnknownQOpcode {
                index: 0,
                opcode: 100
            })
        );
    }

    #[test]
    fn qwait_immediate_overflow() {
        let err = encode_one(&Instruction::Qwait { cycles: 1 << 20 }, &cfg(), 3).unwrap_err();
        assert_eq!(
            err,
            EncodeError::ImmediateOverflow {
                index: 3,
                what: "wait time",
                value: 1 << 20
            }
        );
    }

    #[test]
    fn signed_immediates_round_trip() {
        let cfg = cfg();
        for instr in [
            Instruction::Ldi {
                rd: Gpr(5),
                imm: -1,
            },
            Instruction::Ldi {
                rd: Gpr(5),
                imm: -(1 << 19),
            },
            Instruction::Ldi {
                rd: Gpr(5),
                imm: (1 << 19) - 1,
            },
            Instruction::Ld {
                rd: Gpr(1),
                rt: Gpr(2),
                offset: -512,
            },
            Instruction::St {
                rs: Gpr(1),
                rt: Gpr(2),
                offset: 511,
            },
            Instruction::Br {
                flag: CmpFlag::Ne,
                target: BranchTarget::Offset(-3),
            },
        ] {
            let word = encode_one(&instr, &cfg, 0).unwrap();
            assert_eq!(
                decode_one(word, &cfg, 0).unwrap(),
                instr,
                "word {word:#010x}"
            );
        }
    }
}
