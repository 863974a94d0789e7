//! The instruction AST shared by the assembler, disassembler and
//! simulator. One variant per instruction; quantum bundles keep an
//! arbitrary slot count at this level and are only cut down to the VLIW
//! width by the assembler's bundle-splitting pass.

use std::fmt;

use crate::flags::CmpFlag;

/// General purpose register address.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Gpr(pub u8);

/// Single-qubit operation target register address.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SReg(pub u8);

/// Two-qubit operation target register address.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TReg(pub u8);

impl fmt::Display for Gpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R{}", self.0)
    }
}

impl fmt::Display for SReg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S{}", self.0)
    }
}

impl fmt::Display for TReg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{}", self.0)
    }
}

/// Operand of a quantum operation: a single- or two-qubit target register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegRef {
    S(SReg),
    T(TReg),
}

impl RegRef {
    pub fn index(&self) -> u8 {
        match self {
            RegRef::S(r) => r.0,
            RegRef::T(r) => r.0,
        }
    }
}

impl fmt::Display for RegRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegRef::S(r) => r.fmt(f),
            RegRef::T(r) => r.fmt(f),
        }
    }
}

/// Branch destination. Labels survive parsing and bundle splitting and
/// are resolved to signed word offsets (relative to the branch itself)
/// just before encoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BranchTarget {
    Label(String),
    Offset(i32),
}

impl fmt::Display for BranchTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BranchTarget::Label(name) => f.write_str(name),
            BranchTarget::Offset(off) => write!(f, "{off}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogicOp {
    And,
    Or,
    Xor,
}

impl LogicOp {
    pub fn name(self) -> &'static str {
        match self {
            LogicOp::And => "AND",
            LogicOp::Or => "OR",
            LogicOp::Xor => "XOR",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
}

impl ArithOp {
    pub fn name(self) -> &'static str {
        match self {
            ArithOp::Add => "ADD",
            ArithOp::Sub => "SUB",
        }
    }
}

/// One slot of a quantum bundle. QNOP is the only operation without a
/// target register.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleSlot {
    pub mnemonic: String,
    pub target: Option<RegRef>,
}

impl BundleSlot {
    pub fn qnop() -> Self {
        BundleSlot {
            mnemonic: "QNOP".to_string(),
            target: None,
        }
    }

    pub fn is_qnop(&self) -> bool {
        self.target.is_none() && self.mnemonic.eq_ignore_ascii_case("QNOP")
    }
}

impl fmt::Display for BundleSlot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.target {
            Some(reg) => write!(f, "{} {}", self.mnemonic, reg),
            None => f.write_str(&self.mnemonic),
        }
    }
}

/// A parsed eQASM statement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instruction {
    /// Compare two GPRs and set all comparison flags.
    Cmp {
        rs: Gpr,
        rt: Gpr,
    },
    /// Jump to PC + offset if the flag is 1.
    Br {
        flag: CmpFlag,
        target: BranchTarget,
    },
    /// Fetch a comparison flag into a GPR.
    Fbr {
        flag: CmpFlag,
        rd: Gpr,
    },
    /// Rd = sign_ext(imm\[19..0\], 32).
    Ldi {
        rd: Gpr,
        imm: i32,
    },
    /// Rd = imm\[14..0\] :: Rs\[16..0\].
    Ldui {
        rd: Gpr,
        imm: u32,
        rs: Gpr,
    },
    /// Rd = mem\[Rt + offset\].
    Ld {
        rd: Gpr,
        rt: Gpr,
        offset: i32,
    },
    /// mem\[Rt + offset\] = Rs.
    St {
        rs: Gpr,
        rt: Gpr,
        offset: i32,
    },
    /// Fetch the last measurement result of a qubit into a GPR.
    Fmr {
        rd: Gpr,
        qubit: u8,
    },
    Logic {
        op: LogicOp,
        rd: Gpr,
        rs: Gpr,
        rt: Gpr,
    },
    Not {
        rd: Gpr,
        rt: Gpr,
    },
    Arith {
        op: ArithOp,
        rd: Gpr,
        rs: Gpr,
        rt: Gpr,
    },
    /// Advance the timeline by an immediate number of cycles.
    Qwait {
        cycles: u32,
    },
    /// Advance the timeline by the low 20 bits of a GPR.
    Qwaitr {
        rs: Gpr,
    },
    /// Set a single-qubit target register from a qubit list.
    Smis {
        sd: SReg,
        qubits: Vec<u8>,
    },
    /// Set a two-qubit target register from a directed pair list.
    Smit {
        td: TReg,
        pairs: Vec<(u8, u8)>,
    },
    /// Quantum bundle: wait `pi` cycles, then start every slot together.
    Bundle {
        pi: u32,
        slots: Vec<BundleSlot>,
    },
}

impl Instruction {
    pub fn is_quantum(&self) -> bool {
        matches!(
            self,
            Instruction::Qwait { .. }
                | Instruction::Qwaitr { .. }
                | Instruction::Smis { .. }
                | Instruction::Smit { .. }
                | Instruction::Bundle { .. }
        )
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instruction::Cmp { rs, rt } => write!(f, "CMP {rs}, {rt}"),
            Instruction::Br { flag, target } => write!(f, "BR {flag}, {target}"),
            Instruction::Fbr { flag, rd } => write!(f, "FBR {flag}, {rd}"),
            Instruction::Ldi { rd, imm } => write!(f, "LDI {rd}, {imm}"),
            Instruction::Ldui { rd, imm, rs } => write!(f, "LDUI {rd}, {imm}, {rs}"),
            Instruction::Ld { rd, rt, offset } => write!(f, "LD {rd}, {rt}({offset})"),
            Instruction::St { rs, rt, offset } => write!(f, "ST {rs}, {rt}({offset})"),
            Instruction::Fmr { rd, qubit } => write!(f, "FMR {rd}, Q{qubit}"),
            Instruction::Logic { op, rd, rs, rt } => {
                write!(f, "{} {rd}, {rs}, {rt}", op.name())
            }
            Instruction::Not { rd, rt } => write!(f, "NOT {rd}, {rt}"),
            Instruction::Arith { op, rd, rs, rt } => {
                write!(f, "{} {rd}, {rs}, {rt}", op.name())
            }
            Instruction::Qwait { cycles } => write!(f, "QWAIT {cycles}"),
            Instruction::Qwaitr { rs } => write!(f, "QWAITR {rs}"),
            Instruction::Smis { sd, qubits } => {
                write!(f, "SMIS {sd}, {{")?;
                for (i, q) in qubits.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{q}")?;
                }
                f.write_str("}")
            }
            Instruction::Smit { td, pairs } => {
                write!(f, "SMIT {td}, {{")?;
                for (i, (a, b)) in pairs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "({a}, {b})")?;
                }
                f.write_str("}")
            }
            Instruction::Bundle { pi, slots } => {
                write!(f, "{pi}, ")?;
                for (i, slot) in slots.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" | ")?;
                    }
                    slot.fmt(f)?;
                }
                Ok(())
            }
        }
    }
}
