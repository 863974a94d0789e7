//! Properties of the counting model, and its coupling with the real
//! assembler: materialized text for a counted cell must assemble to
//! exactly the counted number of 32-bit words.

use eqasm_dse::{
    cell_instantiation, count_instructions, default_sweep, generate_benchmark, lower, materialize,
    BenchKind, BenchParams, CircuitTarget, MaterializeError, ScheduledCircuit, ScheduledOp,
    SetupMode, TimingScheme,
};

fn bench(kind: BenchKind, size: u32, seed: u64) -> ScheduledCircuit {
    let params = BenchParams {
        size,
        ..BenchParams::defaults(kind, seed)
    };
    generate_benchmark(kind, &params)
}

#[test]
fn counts_are_monotonically_non_increasing_in_width() {
    for kind in [
        BenchKind::RbLike,
        BenchKind::ParallelLike,
        BenchKind::SequentialLike,
    ] {
        let circuit = bench(kind, 150, 21);
        for id in [1, 3, 5, 7, 9] {
            let mut previous = u64::MAX;
            for w in 1..=4u8 {
                let cfg = eqasm_dse::config::numbered_config(id, w).unwrap();
                let total = count_instructions(&circuit, &cfg, SetupMode::Uncounted)
                    .unwrap()
                    .total;
                assert!(
                    total <= previous,
                    "{kind:?} config {id}: w={w} takes {total} > {previous}"
                );
                previous = total;
            }
        }
    }
}

#[test]
fn somq_never_increases_counts() {
    for kind in [
        BenchKind::RbLike,
        BenchKind::ParallelLike,
        BenchKind::SequentialLike,
    ] {
        let circuit = bench(kind, 150, 22);
        for pi in 1..=4u8 {
            for w in 1..=4u8 {
                let without = eqasm_dse::config::numbered_config(2 + pi, w).unwrap();
                let with = eqasm_dse::config::numbered_config(6 + pi, w).unwrap();
                let a = count_instructions(&circuit, &without, SetupMode::Uncounted).unwrap();
                let b = count_instructions(&circuit, &with, SetupMode::Uncounted).unwrap();
                assert!(
                    b.total <= a.total,
                    "{kind:?} pi={pi} w={w}: SOMQ {} > {}",
                    b.total,
                    a.total
                );
            }
        }
    }
}

#[test]
fn direct_counting_oracle_on_a_dense_parallel_circuit() {
    // 100 single-qubit gates, two per cycle on fixed qubits, counted by
    // hand: under ts1 without SOMQ each of the 50 points costs one QWAIT
    // plus ceil(2 / w) bundle words.
    let mut ops = Vec::new();
    for i in 0..50u64 {
        for q in [0u8, 3] {
            ops.push(ScheduledOp {
                start: i,
                mnemonic: if q == 0 { "X".into() } else { "Y90".into() },
                target: CircuitTarget::Qubit(q),
            });
        }
    }
    let circuit = ScheduledCircuit {
        topology: eqasm_dse::circuit::default_topology_for(7),
        ops,
    };
    for (w, expected) in [(1u8, 50 * 3), (2, 50 * 2), (3, 50 * 2), (4, 50 * 2)] {
        let cfg = eqasm_dse::config::numbered_config(1, w).unwrap();
        let report = count_instructions(&circuit, &cfg, SetupMode::Uncounted).unwrap();
        assert_eq!(report.total, expected, "w={w}");
        assert!(report.total <= 50 * 3);
    }
    // Strict decrease from w=1 to w=2 on this back-to-back instance.
    let w1 = count_instructions(
        &circuit,
        &eqasm_dse::config::numbered_config(1, 1).unwrap(),
        SetupMode::Uncounted,
    )
    .unwrap();
    let w4 = count_instructions(
        &circuit,
        &eqasm_dse::config::numbered_config(1, 4).unwrap(),
        SetupMode::Uncounted,
    )
    .unwrap();
    assert!(w4.total < w1.total);
}

#[test]
fn materialized_cells_assemble_to_the_counted_word_count() {
    // Every encodable cell of the default grid, on all three families.
    let cells = default_sweep();
    for kind in [
        BenchKind::RbLike,
        BenchKind::ParallelLike,
        BenchKind::SequentialLike,
    ] {
        let circuit = bench(kind, 80, 33);
        for cell in &cells {
            if cell.config.scheme == TimingScheme::Ts2 {
                continue; // count-only: no slot encoding for waits
            }
            let inst = match cell_instantiation(&circuit.topology, &cell.config) {
                Ok(inst) => inst,
                Err(MaterializeError::CellNotEncodable { .. }) => continue,
                Err(other) => panic!("{other}"),
            };
            let lowering = lower(&circuit, &cell.config).unwrap();
            let text = materialize(&lowering).unwrap();
            let assembled = eqasm_asm::assemble(&text, &inst).unwrap_or_else(|e| {
                panic!(
                    "cell {} w {}: {e:?}",
                    cell.config_id, cell.config.vliw_width
                )
            });
            let counted = lowering.report(SetupMode::CountedLru).total;
            assert_eq!(
                assembled.words.len() as u64,
                counted,
                "{kind:?} config {} w {}",
                cell.config_id,
                cell.config.vliw_width
            );
        }
    }
}

#[test]
fn materialized_text_round_trips_through_the_disassembler() {
    let circuit = bench(BenchKind::SequentialLike, 60, 44);
    let cell = eqasm_dse::config::numbered_config(9, 2).unwrap();
    let inst = cell_instantiation(&circuit.topology, &cell).unwrap();
    let lowering = lower(&circuit, &cell).unwrap();
    let text = materialize(&lowering).unwrap();
    let assembled = eqasm_asm::assemble(&text, &inst).unwrap();
    let decoded = eqasm_asm::decode(&assembled.words, &inst).unwrap();
    assert_eq!(decoded, assembled.instructions);
}
