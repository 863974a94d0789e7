//! Round-trip properties: decode(encode(P)) must reproduce the split,
//! legalized, branch-resolved program token for token, and disassembled
//! text must re-assemble to the same words.

use eqasm_asm::{decode, encode, legalize, resolve_branches, split_bundles};
use eqasm_core::{
    ArithOp, BranchTarget, BundleSlot, CmpFlag, Gpr, InstantiationConfig, Instruction, LogicOp,
    RegRef, SReg, TReg,
};
use proptest::prelude::*;

fn cfg() -> InstantiationConfig {
    InstantiationConfig::default()
}

fn gpr() -> impl Strategy<Value = Gpr> {
    (0u8..32).prop_map(Gpr)
}

fn flag() -> impl Strategy<Value = CmpFlag> {
    (0u8..12).prop_map(|c| CmpFlag::from_code(c).unwrap())
}

fn single_slot() -> impl Strategy<Value = BundleSlot> {
    let mnemonics = ["I", "X", "Y", "X90", "Y90", "XM90", "YM90", "C_X", "MEASZ"];
    (0..mnemonics.len(), 0u8..32).prop_map(move |(m, s)| BundleSlot {
        mnemonic: mnemonics[m].to_string(),
        target: Some(RegRef::S(SReg(s))),
    })
}

fn cz_slot() -> impl Strategy<Value = BundleSlot> {
    (0u8..32).prop_map(|t| BundleSlot {
        mnemonic: "CZ".to_string(),
        target: Some(RegRef::T(TReg(t))),
    })
}

fn slot() -> impl Strategy<Value = BundleSlot> {
    prop_oneof![
        6 => single_slot(),
        2 => cz_slot(),
        1 => Just(BundleSlot::qnop()),
    ]
}

/// Greedily keeps edges that do not share a qubit with an earlier pick,
/// which is exactly the legality rule for one T register.
fn disjoint_pairs(edge_picks: Vec<usize>) -> Vec<(u8, u8)> {
    let topo = eqasm_core::ChipTopology::seven_qubit();
    let mut used = [false; 7];
    let mut pairs = Vec::new();
    for e in edge_picks {
        let (a, b) = topo.edges[e % topo.num_edges()];
        if !used[a as usize] && !used[b as usize] {
            used[a as usize] = true;
            used[b as usize] = true;
            pairs.push((a, b));
        }
    }
    pairs
}

fn instruction() -> impl Strategy<Value = Instruction> {
    prop_oneof![
        (gpr(), gpr()).prop_map(|(rs, rt)| Instruction::Cmp { rs, rt }),
        (flag(), -64i32..64).prop_map(|(flag, off)| Instruction::Br {
            flag,
            target: BranchTarget::Offset(off),
        }),
        (flag(), gpr()).prop_map(|(flag, rd)| Instruction::Fbr { flag, rd }),
        (gpr(), -(1i32 << 19)..(1 << 19)).prop_map(|(rd, imm)| Instruction::Ldi { rd, imm }),
        (gpr(), 0u32..1 << 15, gpr()).prop_map(|(rd, imm, rs)| Instruction::Ldui { rd, imm, rs }),
        (gpr(), gpr(), -512i32..512).prop_map(|(rd, rt, offset)| Instruction::Ld {
            rd,
            rt,
            offset
        }),
        (gpr(), gpr(), -512i32..512).prop_map(|(rs, rt, offset)| Instruction::St {
            rs,
            rt,
            offset
        }),
        (gpr(), 0u8..7).prop_map(|(rd, qubit)| Instruction::Fmr { rd, qubit }),
        (0usize..3, gpr(), gpr(), gpr()).prop_map(|(op, rd, rs, rt)| Instruction::Logic {
            op: [LogicOp::And, LogicOp::Or, LogicOp::Xor][op],
            rd,
            rs,
            rt,
        }),
        (gpr(), gpr()).prop_map(|(rd, rt)| Instruction::Not { rd, rt }),
        (any::<bool>(), gpr(), gpr(), gpr()).prop_map(|(add, rd, rs, rt)| Instruction::Arith {
            op: if add { ArithOp::Add } else { ArithOp::Sub },
            rd,
            rs,
            rt,
        }),
        (0u32..1 << 20).prop_map(|cycles| Instruction::Qwait { cycles }),
        gpr().prop_map(|rs| Instruction::Qwaitr { rs }),
        (0u8..32, proptest::collection::vec(0u8..7, 0..7)).prop_map(|(sd, qubits)| {
            Instruction::Smis {
                sd: SReg(sd),
                qubits,
            }
        }),
        (0u8..32, proptest::collection::vec(0usize..16, 0..4)).prop_map(|(td, picks)| {
            Instruction::Smit {
                td: TReg(td),
                pairs: disjoint_pairs(picks),
            }
        }),
        (0u32..20, proptest::collection::vec(slot(), 1..6))
            .prop_map(|(pi, slots)| { Instruction::Bundle { pi, slots } }),
    ]
}

fn program() -> impl Strategy<Value = Vec<Instruction>> {
    proptest::collection::vec(instruction(), 1..30)
}

fn pipeline(instructions: Vec<Instruction>, cfg: &InstantiationConfig) -> Vec<Instruction> {
    let statements = instructions
        .into_iter()
        .map(|instr| eqasm_asm::Statement { instr, line: 0 })
        .collect();
    let source = eqasm_asm::SourceProgram {
        statements,
        labels: Default::default(),
    };
    let (legal, _warnings) = legalize(source, cfg).expect("generated programs are legal");
    let split = split_bundles(legal, cfg);
    resolve_branches(&split).expect("no labels in generated programs")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn decode_inverts_encode(instructions in program()) {
        let cfg = cfg();
        let finished = pipeline(instructions, &cfg);
        let words = encode(&finished, &cfg).expect("encode");
        let decoded = decode(&words, &cfg).expect("decode");
        prop_assert_eq!(decoded, finished);
    }

    #[test]
    fn disassembly_reassembles_to_the_same_words(instructions in program()) {
        let cfg = cfg();
        let finished = pipeline(instructions, &cfg);
        let words = encode(&finished, &cfg).expect("encode");
        let text: String = decode(&words, &cfg)
            .expect("decode")
            .iter()
            .map(|i| format!("{i}\n"))
            .collect();
        let reassembled = eqasm_asm::assemble(&text, &cfg).expect("reassemble");
        prop_assert_eq!(reassembled.words, words);
    }
}

#[test]
fn the_two_qubit_allxy_listing_round_trips() {
    let cfg = cfg();
    let text = "\
SMIS S0, {0}
SMIS S2, {2}
SMIS S7, {0, 2}
QWAIT    10000
0, Y     S7
1, X90   S0  | X  S2
1, MEASZ S7
QWAIT    50
";
    let assembled = eqasm_asm::assemble(text, &cfg).expect("assemble");
    assert_eq!(assembled.words.len(), 8);
    let decoded = decode(&assembled.words, &cfg).expect("decode");
    assert_eq!(decoded, assembled.instructions);
    // The split pass left the already-full bundles alone.
    assert_eq!(decoded[4].to_string(), "0, Y S7 | QNOP");
    assert_eq!(decoded[5].to_string(), "1, X90 S0 | X S2");
    assert_eq!(decoded[6].to_string(), "1, MEASZ S7 | QNOP");
}

#[test]
fn label_offsets_survive_splitting() {
    let cfg = cfg();
    // The branch jumps over a 3-op bundle that splits into two words.
    let text = "\
LDI R0, 0
loop:
1, X S0 | Y S1 | X90 S2
BR ALWAYS, loop
";
    let assembled = eqasm_asm::assemble(text, &cfg).expect("assemble");
    assert_eq!(assembled.words.len(), 4);
    match &assembled.instructions[3] {
        Instruction::Br {
            target: BranchTarget::Offset(off),
            ..
        } => assert_eq!(*off, -2),
        other => panic!("unexpected {other:?}"),
    }
}
