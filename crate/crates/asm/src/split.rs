//! Bundle splitting. Assembly-level bundles may hold any number of
//! operations; an instruction word holds exactly the VLIW width. Long
//! bundles become consecutive words whose continuations carry PI = 0,
//! QNOP fills the last word, and a pre-interval too large for the PI
//! field is moved into a preceding QWAIT, leaving the field's maximum as
//! the residue. Timing is preserved exactly: the sum of waits in front of
//! each operation set never changes.

use eqasm_core::{BundleSlot, InstantiationConfig, Instruction};

use crate::parse::{SourceProgram, Statement};

/// Rewrites every bundle to exactly `vliw_width` slots. Labels are
/// remapped onto the first word emitted for the statement they preceded.
pub fn split_bundles(program: SourceProgram, cfg: &InstantiationConfig) -> SourceProgram {
    let w = cfg.vliw_width as usize;
    let max_pi = cfg.max_pi();

    let mut statements = Vec::with_capacity(program.statements.len());
    let mut index_map = Vec::with_capacity(program.statements.len() + 1);

    for stmt in program.statements {
        index_map.push(statements.len());
        match stmt.instr {
            Instruction::Bundle { pi, slots } => {
                let mut head_pi = pi;
                if pi > max_pi {
                    statements.push(Statement {
                        instr: Instruction::Qwait {
                            cycles: pi - max_pi,
                        },
                        line: stmt.line,
                    });
                    head_pi = max_pi;
                }
                for (i, chunk) in slots.chunks(w).enumerate() {
                    let mut padded = chunk.to_vec();
                    while padded.len() < w {
                        padded.push(BundleSlot::qnop());
                    }
                    statements.push(Statement {
                        instr: Instruction::Bundle {
                            pi: if i == 0 { head_pi } else { 0 },
                            slots: padded,
                        },
                        line: stmt.line,
                    });
                }
            }
            other => statements.push(Statement {
                instr: other,
                line: stmt.line,
            }),
        }
    }
    index_map.push(statements.len());

    let labels = program
        .labels
        .into_iter()
        .map(|(name, idx)| (name, index_map[idx]))
        .collect();

    SourceProgram { statements, labels }
}
