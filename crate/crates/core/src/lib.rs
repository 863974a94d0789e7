//! Shared definitions for the eQASM toolchain: the instantiation
//! configuration (widths, opcode table, durations), the quantum chip
//! topology, the instruction AST, and the validation passes used by the
//! assembler, the microarchitecture simulator, and the design-space
//! exploration tool.

pub mod config;
pub mod flags;
pub mod instr;
pub mod topology;

pub use config::{ConfigError, InstantiationConfig, QOpDef, QOpKind, QOpSemantics};
pub use flags::{CmpFlag, CmpFlagSet};
pub use instr::{ArithOp, BranchTarget, BundleSlot, Gpr, Instruction, LogicOp, RegRef, SReg, TReg};
pub use topology::{ChipTopology, PairError, TopologyError};
