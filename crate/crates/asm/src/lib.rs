//! eQASM assembler and disassembler. Text goes through four passes:
//! parse (syntax, labels), legalize (mask and operand checks plus
//! normalization), split (cut bundles to the VLIW width, fold oversized
//! pre-intervals into QWAIT), then resolve + encode (labels to offsets,
//! instructions to 32-bit words). The decoder inverts encode exactly for
//! any program produced under the same instantiation configuration.

use eqasm_core::{InstantiationConfig, Instruction};

pub mod binfile;
pub mod diag;
pub mod encode;
pub mod legalize;
pub mod parse;
pub mod split;

pub use binfile::{read_binary, write_binary, BinError};
pub use diag::Diagnostic;
pub use encode::{decode, encode, resolve_branches, DecodeError, EncodeError};
pub use legalize::legalize;
pub use parse::{parse, SourceProgram, Statement};
pub use split::split_bundles;

/// Fully assembled program: split instructions (one per word), their
/// encoded words, and any non-fatal warnings.
#[derive(Debug)]
pub struct Assembled {
    pub instructions: Vec<Instruction>,
    pub words: Vec<u32>,
    pub warnings: Vec<Diagnostic>,
}

/// Runs the whole pipeline on source text.
pub fn assemble(text: &str, cfg: &InstantiationConfig) -> Result<Assembled, Vec<Diagnostic>> {
    let program = parse(text, cfg)?;
    let (program, warnings) = legalize(program, cfg)?;
    let program = split_bundles(program, cfg);
    let instructions = resolve_branches(&program)?;
    let words = encode(&instructions, cfg).map_err(|e| vec![e.into_diagnostic()])?;
    Ok(Assembled {
        instructions,
        words,
        warnings,
    })
}
