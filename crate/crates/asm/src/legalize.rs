//! Legality checks that need the topology, plus AST normalization.
//! SMIS lists are sorted and deduplicated; SMIT lists are checked against
//! the allowed pairs, rejected when two selected edges share a qubit, and
//! ordered by edge address. After this pass encoding cannot fail on
//! operands.

use std::collections::HashSet;

use eqasm_core::{InstantiationConfig, Instruction, QOpKind, RegRef};

use crate::diag::Diagnostic;
use crate::parse::SourceProgram;

/// Returns the normalized program and non-fatal warnings, or all errors.
pub fn legalize(
    mut program: SourceProgram,
    cfg: &InstantiationConfig,
) -> Result<(SourceProgram, Vec<Diagnostic>), Vec<Diagnostic>> {
    let mut errors = Vec::new();
    let mut warnings = Vec::new();
    let topo = &cfg.topology;

    for stmt in &mut program.statements {
        let line = stmt.line;
        match &mut stmt.instr {
            Instruction::Smis { qubits, .. } => {
                for &q in qubits.iter() {
                    if q >= cfg.qubit_mask_width {
                        errors.push(Diagnostic::new(
                            line,
                            1,
                            format!(
                                "qubit {q} does not fit the {}-bit qubit mask",
                                cfg.qubit_mask_width
                            ),
                        ));
                    }
                }
                qubits.sort_unstable();
                qubits.dedup();
            }
            Instruction::Smit { pairs, .. } => {
                let mut edges = Vec::new();
                let mut bad = false;
                for &(a, b) in pairs.iter() {
                    match topo.edge_index(a, b) {
                        Some(e) => edges.push(e),
                        None => {
                            bad = true;
                            errors.push(Diagnostic::new(
                                line,
                                1,
                                format!("({a}, {b}) is not an allowed qubit pair"),
                            ));
                        }
                    }
                }
                if bad {
                    continue;
                }
                edges.sort_unstable();
                edges.dedup();
                // Two selected edges sharing a qubit cannot be resolved
                // to one micro-operation per qubit.
                let mut seen: HashSet<u8> = HashSet::new();
                for &e in &edges {
                    let (src, tgt) = topo.edges[e];
                    for q in [src, tgt] {
                        if !seen.insert(q) {
                            errors.push(Diagnostic::new(
                                line,
                                1,
                                format!(
                                    "conflicting pair selection: qubit {q} appears in \
                                     more than one selected pair"
                                ),
                            ));
                        }
                    }
                }
                *pairs = edges.into_iter().map(|e| topo.edges[e]).collect();
            }
            Instruction::Bundle { slots, .. } => {
                let mut single_regs: HashSet<u8> = HashSet::new();
                let mut pair_regs: HashSet<u8> = HashSet::new();
                for slot in slots.iter() {
                    let Some(op) = cfg.op_by_mnemonic(&slot.mnemonic) else {
                        errors.push(Diagnostic::new(
                            line,
                            1,
                            format!("unknown quantum operation '{}'", slot.mnemonic),
                        ));
                        continue;
                    };
                    match (op.kind, slot.target) {
                        (QOpKind::Qnop, None) => {}
                        (QOpKind::Single | QOpKind::Measure, Some(RegRef::S(s))) => {
                            // The same S register twice in one bundle is a
                            // guaranteed runtime conflict unless its mask is
                            // empty; that much is statically detectable.
                            if !single_regs.insert(s.0) {
                                warnings.push(Diagnostic::new(
                                    line,
                                    1,
                                    format!(
                                        "S{} is used by two operations of this bundle; \
                                         they will collide on every selected qubit",
                                        s.0
                                    ),
                                ));
                            }
                        }
                        (QOpKind::TwoQubit, Some(RegRef::T(t))) => {
                            if !pair_regs.insert(t.0) {
                                warnings.push(Diagnostic::new(
                                    line,
                                    1,
                                    format!(
                                        "T{} is used by two operations of this bundle; \
                                         they will collide on every selected pair",
                                        t.0
                                    ),
                                ));
                            }
                        }
                        (kind, target) => {
                            let want = match kind {
                                QOpKind::TwoQubit => "a T register",
                                QOpKind::Qnop => "no register",
                                _ => "an S register",
                            };
                            let got = match target {
                                Some(r) => r.to_string(),
                                None => "none".to_string(),
                            };
                            errors.push(Diagnostic::new(
                                line,
                                1,
                                format!("operation '{}' takes {want}, got {got}", slot.mnemonic),
                            ));
                        }
                    }
                }
            }
            Instruction::Fmr { qubit, .. } if *qubit >= topo.num_qubits => {
                errors.push(Diagnostic::new(
                    line,
                    1,
                    format!("qubit {qubit} outside the {}-qubit chip", topo.num_qubits),
                ));
            }
            _ => {}
        }
    }

    if errors.is_empty() {
        Ok((program, warnings))
    } else {
        Err(errors)
    }
}
