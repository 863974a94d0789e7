//! Classical pipeline semantics: two's-complement 32-bit arithmetic,
//! flag behaviour, data memory, and branching.

use eqasm_asm::assemble;
use eqasm_core::InstantiationConfig;
use eqasm_sim::{run_program, RunOptions, SimError};
use rand::{Rng, SeedableRng};

fn run_text(text: &str) -> eqasm_sim::RunOutcome {
    let cfg = InstantiationConfig::default();
    let assembled = assemble(text, &cfg).expect("assemble");
    run_program(&cfg, &assembled.instructions, &RunOptions::default()).expect("prepare")
}

#[test]
fn compare_then_branch_on_equal() {
    // Register compare drives the EQ flag exactly as the feedback
    // example expects: R1 == R0 selects the EQ path.
    let text = "\
SMIS S0, {0}
LDI  R0, 1
LDI  R1, 1
CMP  R1, R0
BR   EQ, eq_path
X    S0
BR   ALWAYS, next
eq_path:
Y    S0
next:
";
    let outcome = run_text(text);
    assert!(outcome.ok());
    let ops: Vec<String> = outcome
        .trace
        .released_triggers()
        .into_iter()
        .map(|(_, _, m)| m)
        .collect();
    assert_eq!(ops, vec!["Y".to_string()]);
}

#[test]
fn ldui_concatenates_bit_strings() {
    // Rd = Imm[14..0] :: Rs[16..0].
    let text = "\
LDI  R1, 0x1ABCD
LDUI R2, 0x7FFF, R1
LDUI R3, 0, R0
";
    let outcome = run_text(text);
    assert!(outcome.ok());
    assert_eq!(outcome.state.gpr[2], (0x7FFF << 17) | 0x1ABCD);
    assert_eq!(outcome.state.gpr[3], 0);
}

#[test]
fn subtracting_a_register_from_itself_sets_eq() {
    let text = "\
LDI R1, 12345
SUB R2, R1, R1
LDI R3, 0
CMP R2, R3
FBR EQ, R4
";
    let outcome = run_text(text);
    assert!(outcome.ok());
    assert_eq!(outcome.state.gpr[2], 0);
    assert_eq!(outcome.state.gpr[4], 1);
}

#[test]
fn ldi_sign_extends() {
    let outcome = run_text("LDI R1, -1\nLDI R2, -524288\n");
    assert_eq!(outcome.state.gpr[1], u32::MAX);
    assert_eq!(outcome.state.gpr[2], (-524288i32) as u32);
}

#[test]
fn load_and_store_round_trip_through_memory() {
    let text = "\
LDI  R1, 0x1BEEF
LDUI R1, 0x6F56, R1   # R1 = 0xdeadbeef
LDI  R2, 256
ST   R1, R2(4)
LD   R3, R2(4)
LD   R4, R0(260)
";
    let outcome = run_text(text);
    assert!(outcome.ok());
    assert_eq!(outcome.state.gpr[1], 0xdead_beef);
    assert_eq!(outcome.state.gpr[3], 0xdead_beef);
    assert_eq!(outcome.state.gpr[4], 0xdead_beef);
}

#[test]
fn misaligned_access_halts() {
    let outcome = run_text("LDI R2, 1\nLD R3, R2(0)\n");
    assert_eq!(outcome.halt, Some(SimError::MisalignedAccess { addr: 1 }));
}

#[test]
fn out_of_memory_access_halts() {
    let outcome = run_text("LDI R2, 65536\nLD R3, R2(0)\n");
    assert_eq!(
        outcome.halt,
        Some(SimError::DataAddressOutOfRange { addr: 65536 })
    );
}

#[test]
fn branch_outside_the_program_halts() {
    let outcome = run_text("BR ALWAYS, -5\n");
    assert_eq!(outcome.halt, Some(SimError::PcOutOfRange { target: -5 }));
}

#[test]
fn fbr_fetches_every_flag_zero_extended() {
    let text = "\
LDI R1, -1
LDI R2, 1
CMP R1, R2
FBR LT, R3
FBR GTU, R4
FBR NEVER, R5
FBR ALWAYS, R6
";
    let outcome = run_text(text);
    assert_eq!(outcome.state.gpr[3], 1); // -1 < 1 signed
    assert_eq!(outcome.state.gpr[4], 1); // 0xffffffff > 1 unsigned
    assert_eq!(outcome.state.gpr[5], 0);
    assert_eq!(outcome.state.gpr[6], 1);
}

#[test]
fn alu_matches_a_reference_on_random_operands() {
    // 10^5 random operand pairs against plain wrapping/bitwise reference
    // arithmetic. Every result folds into an XOR and a sum accumulator so
    // a single wrong result anywhere in a batch is caught.
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(99);
    let cfg = InstantiationConfig::default();
    let total = 100_000usize;
    let batch = 2_000usize;
    for round in 0..total / batch {
        let mut text = String::from("LDI R5, 0\nLDI R6, 0\n");
        let mut xor_fold = 0u32;
        let mut sum_fold = 0u32;
        for i in 0..batch {
            let a: u32 = rng.gen();
            let b: u32 = rng.gen();
            let lo_a = (a & 0x1_ffff) as i32;
            let hi_a = (a >> 17) as i32;
            let lo_b = (b & 0x1_ffff) as i32;
            let hi_b = (b >> 17) as i32;
            text.push_str(&format!("LDI R1, {lo_a}\nLDUI R1, {hi_a}, R1\n"));
            text.push_str(&format!("LDI R2, {lo_b}\nLDUI R2, {hi_b}, R2\n"));
            let (mnemonic, value) = match i % 5 {
                0 => ("ADD", a.wrapping_add(b)),
                1 => ("SUB", a.wrapping_sub(b)),
                2 => ("AND", a & b),
                3 => ("OR", a | b),
                _ => ("XOR", a ^ b),
            };
            text.push_str(&format!("{mnemonic} R3, R1, R2\n"));
            text.push_str("XOR R5, R5, R3\nADD R6, R6, R3\n");
            xor_fold ^= value;
            sum_fold = sum_fold.wrapping_add(value);
        }
        let assembled = assemble(&text, &cfg).expect("assemble");
        let outcome =
            run_program(&cfg, &assembled.instructions, &RunOptions::default()).expect("prepare");
        assert!(outcome.ok());
        assert_eq!(outcome.state.gpr[5], xor_fold, "round {round}");
        assert_eq!(outcome.state.gpr[6], sum_fold, "round {round}");
    }
}

#[test]
fn not_inverts_all_bits() {
    let outcome = run_text("LDI R1, 0\nNOT R2, R1\nLDI R3, 5\nNOT R4, R3\n");
    assert_eq!(outcome.state.gpr[2], u32::MAX);
    assert_eq!(outcome.state.gpr[4], !5u32);
}
