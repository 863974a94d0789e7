//! The simulation loop. Each wall cycle runs the classical pipeline
//! (which reserves micro-operations on the timeline) and then the timing
//! controller (which triggers everything due at the current timeline
//! cycle). The deterministic timer starts the cycle after the first
//! timing instruction is reserved; from then on a micro-operation
//! reserved behind the timer is a timing violation — the issue-rate
//! problem made observable.
//!
//! Micro-operations flow: bundle decode -> operation combination buffer
//! (merged per timing point, conflicts stop the processor) -> per-qubit
//! event queues (flushed when a newer timing point proves the point
//! complete, with backpressure when full) -> trigger. Fast conditional
//! execution gates every released single-qubit operation by the selected
//! execution flag; measurements write back after their duration and
//! update the flags immediately.

use std::collections::VecDeque;

use eqasm_core::{ArithOp, CmpFlagSet, InstantiationConfig, Instruction, LogicOp, QOpKind};
use eqasm_quantum::{QuantumError, StateVector};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use crate::opsel::{resolve_opsel, MaskKind, OpSelError};
use crate::program::{prepare, ExecInstr, ExecProgram, PrepareError};
use crate::script::ScriptedResults;
use crate::state::ArchState;
use crate::trace::{Domain, EventKind, Trace, TraceEvent};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("two slots of one bundle word target qubit {qubit} at cycle {timestamp}")]
    LaneConflict { qubit: u8, timestamp: u64 },
    #[error("two bundle words target qubit {qubit} at cycle {timestamp}")]
    BundleConflict { qubit: u8, timestamp: u64 },
    #[error(
        "timing violation: operation reserved for cycle {timestamp} after the trigger \
         timer reached {timer}"
    )]
    TimingViolation { timestamp: u64, timer: u64 },
    #[error("conflicting pair selection on qubit {qubit} at cycle {timestamp}")]
    ConflictingPairSelection { qubit: u8, timestamp: u64 },
    #[error("branch leaves instruction memory (target {target})")]
    PcOutOfRange { target: i64 },
    #[error("misaligned data access at address {addr:#x}")]
    MisalignedAccess { addr: u32 },
    #[error("data access at address {addr:#x} outside memory")]
    DataAddressOutOfRange { addr: u32 },
    #[error("quantum backend: {0}")]
    Backend(#[from] QuantumError),
    #[error("cycle limit of {limit} exceeded")]
    CycleLimitExceeded { limit: u64 },
    #[error("deadlock: no classical progress and no pending events at pc {pc}")]
    Deadlock { pc: usize },
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub seed: u64,
    pub script: Option<ScriptedResults>,
    pub max_cycles: u64,
    /// Timeline origin. The first timing point is measured from this
    /// value while the trigger timer still starts at zero, so a non-zero
    /// offset gives the reserve phase that much head start.
    pub timeline_offset: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            seed: 0,
            script: None,
            max_cycles: 10_000_000,
            timeline_offset: 0,
        }
    }
}

#[derive(Debug)]
pub struct RunOutcome {
    pub trace: Trace,
    pub state: ArchState,
    pub backend: StateVector,
    pub wall_cycles: u64,
    pub halt: Option<SimError>,
}

impl RunOutcome {
    pub fn ok(&self) -> bool {
        self.halt.is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Action {
    Rotate,
    CzSource { partner: u8 },
    CzTarget { partner: u8 },
    Measure,
}

#[derive(Debug, Clone, Copy)]
struct DeviceOp {
    ts: u64,
    qubit: u8,
    /// Opcode table index, for matrices and trace labels.
    op: usize,
    action: Action,
    flag: u8,
    duration: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Timer {
    Idle,
    Pending,
    Active(u64),
}

struct Machine<'a> {
    cfg: &'a InstantiationConfig,
    program: &'a ExecProgram,
    state: ArchState,
    backend: StateVector,
    rng: ChaCha12Rng,
    script: ScriptedResults,
    trace: Trace,
    last_point: u64,
    timer: Timer,
    /// Operation combination buffer: micro-operations of the current
    /// timing point, awaiting proof that their bundle is complete.
    buffer: Vec<DeviceOp>,
    queues: Vec<VecDeque<DeviceOp>>,
    /// In-flight measurements as (completion cycle, qubit).
    inflight: Vec<(u64, u8)>,
    wall: u64,
    halt: Option<SimError>,
}

impl<'a> Machine<'a> {
    fn new(cfg: &'a InstantiationConfig, program: &'a ExecProgram, opts: &RunOptions) -> Self {
        let n = cfg.num_qubits();
        Machine {
            cfg,
            program,
            state: ArchState::new(cfg),
            backend: StateVector::new(n),
            rng: ChaCha12Rng::seed_from_u64(opts.seed),
            script: opts
                .script
                .clone()
                .unwrap_or_else(|| ScriptedResults::new(n)),
            trace: Trace::default(),
            last_point: opts.timeline_offset,
            timer: Timer::Idle,
            buffer: Vec::new(),
            queues: vec![VecDeque::new(); n as usize],
            inflight: Vec::new(),
            wall: 0,
            halt: None,
        }
    }

    fn stop(&mut self, err: SimError) {
        if self.halt.is_some() {
            return;
        }
        self.trace.push(TraceEvent {
            cycle: self.wall,
            domain: Domain::Classical,
            kind: EventKind::Halt,
            qubit: None,
            reg: None,
            detail: err.to_string(),
            released: None,
        });
        self.halt = Some(err);
        self.drain_report();
    }

    /// After a processor stop, undelivered operations are drained and
    /// reported rather than silently discarded.
    fn drain_report(&mut self) {
        let mut drained: Vec<DeviceOp> = self.buffer.drain(..).collect();
        for queue in &mut self.queues {
            drained.extend(queue.drain(..));
        }
        drained.sort_by_key(|op| (op.ts, op.qubit));
        for op in drained {
            self.trace.push(TraceEvent {
                cycle: op.ts,
                domain: Domain::Quantum,
                kind: EventKind::Drained,
                qubit: Some(op.qubit),
                reg: None,
                detail: self.cfg.q_ops[op.op].mnemonic.clone(),
                released: None,
            });
        }
        let mut inflight = std::mem::take(&mut self.inflight);
        inflight.sort_unstable();
        for (ts, qubit) in inflight {
            self.trace.push(TraceEvent {
                cycle: ts,
                domain: Domain::Quantum,
                kind: EventKind::Drained,
                qubit: Some(qubit),
                reg: None,
                detail: "pending measurement".to_string(),
                released: None,
            });
        }
    }

    fn start_timer_if_idle(&mut self) {
        if self.timer == Timer::Idle {
            self.timer = Timer::Pending;
        }
    }

    /// Whether the event queues can absorb every buffered micro-operation
    /// older than `point`. When not, the reserve phase stalls.
    fn can_flush_below(&self, point: u64) -> bool {
        let mut extra = vec![0usize; self.queues.len()];
        for op in &self.buffer {
            if op.ts < point {
                extra[op.qubit as usize] += 1;
            }
        }
        self.queues
            .iter()
            .zip(&extra)
            .all(|(queue, &e)| queue.len() + e <= self.cfg.queue_depth)
    }

    fn flush_below(&mut self, point: u64) {
        let mut keep = Vec::new();
        for op in self.buffer.drain(..) {
            if op.ts < point {
                self.queues[op.qubit as usize].push_back(op);
            } else {
                keep.push(op);
            }
        }
        self.buffer = keep;
    }

    /// One reserve-phase step for a waiting instruction. Returns false if
    /// the instruction must stall on queue backpressure.
    fn reserve_wait(&mut self, interval: u64) -> bool {
        self.start_timer_if_idle();
        if interval == 0 {
            return true;
        }
        let new_point = self.last_point + interval;
        if !self.can_flush_below(new_point) {
            return false;
        }
        self.flush_below(new_point);
        self.last_point = new_point;
        true
    }

    /// Decodes one bundle word: microcode lookup happened at preparation,
    /// here masks resolve to micro-operations which are merged into the
    /// combination buffer. Returns false on a backpressure stall.
    fn reserve_bundle(&mut self, pi: u32, slots: &[crate::program::ExecSlot]) -> bool {
        self.start_timer_if_idle();
        let new_point = self.last_point + pi as u64;
        if pi > 0 && !self.can_flush_below(new_point) {
            return false;
        }

        // Resolve every slot against its target register.
        let n = self.cfg.num_qubits();
        let mut ops: Vec<DeviceOp> = Vec::new();
        let mut lane_of: Vec<Option<usize>> = vec![None; n as usize];
        for (slot_idx, slot) in slots.iter().enumerate() {
            let def = &self.cfg.q_ops[slot.op];
            let mut slot_ops: Vec<DeviceOp> = Vec::new();
            match slot.kind {
                QOpKind::Single | QOpKind::Measure => {
                    let mask = self.state.sregs[slot.reg as usize];
                    let action = if slot.kind == QOpKind::Measure {
                        Action::Measure
                    } else {
                        Action::Rotate
                    };
                    for q in 0..n {
                        if mask & (1 << q) != 0 {
                            slot_ops.push(DeviceOp {
                                ts: new_point,
                                qubit: q,
                                op: slot.op,
                                action,
                                flag: def.exec_flag,
                                duration: def.duration,
                            });
                        }
                    }
                }
                QOpKind::TwoQubit => {
                    let mask = self.state.tregs[slot.reg as usize];
                    if let Err(OpSelError::ConflictingPairSelection(q)) =
                        resolve_opsel(&self.cfg.topology, mask, MaskKind::TwoQubit)
                    {
                        self.stop(SimError::ConflictingPairSelection {
                            qubit: q,
                            timestamp: new_point,
                        });
                        return true;
                    }
                    for (src, tgt) in self.cfg.topology.mask_to_pair_list(mask) {
                        for (qubit, action) in [
                            (src, Action::CzSource { partner: tgt }),
                            (tgt, Action::CzTarget { partner: src }),
                        ] {
                            slot_ops.push(DeviceOp {
                                ts: new_point,
                                qubit,
                                op: slot.op,
                                action,
                                flag: def.exec_flag,
                                duration: def.duration,
                            });
                        }
                    }
                }
                QOpKind::Qnop => {}
            }
            // Both VLIW lanes outputting a micro-operation on the same
            // qubit stops the processor.
            for op in &slot_ops {
                match lane_of[op.qubit as usize] {
                    Some(owner) if owner != slot_idx => {
                        self.stop(SimError::LaneConflict {
                            qubit: op.qubit,
                            timestamp: new_point,
                        });
                        return true;
                    }
                    _ => lane_of[op.qubit as usize] = Some(slot_idx),
                }
            }
            ops.extend(slot_ops);
        }

        // An operation reserved behind the deterministic timer can no
        // longer be triggered on time.
        if let Timer::Active(t) = self.timer {
            if new_point < t && !ops.is_empty() {
                self.stop(SimError::TimingViolation {
                    timestamp: new_point,
                    timer: t,
                });
                return true;
            }
        }

        if pi > 0 {
            self.flush_below(new_point);
            self.last_point = new_point;
        }

        // Merge with micro-operations already collected for this point.
        for op in ops {
            let clash = self
                .buffer
                .iter()
                .any(|b| b.qubit == op.qubit && b.ts == op.ts)
                || self.queues[op.qubit as usize].iter().any(|b| b.ts == op.ts);
            if clash {
                self.stop(SimError::BundleConflict {
                    qubit: op.qubit,
                    timestamp: op.ts,
                });
                return true;
            }
            if op.action == Action::Measure {
                // Issuing a measurement invalidates Qi immediately.
                self.state.meas_pending[op.qubit as usize] += 1;
            }
            self.buffer.push(op);
        }
        true
    }

    fn load_store_addr(&mut self, rt: u8, offset: i32) -> Option<u32> {
        let addr = self.state.gpr[rt as usize].wrapping_add(offset as u32);
        if !addr.is_multiple_of(4) {
            self.stop(SimError::MisalignedAccess { addr });
            return None;
        }
        if addr as u64 + 4 > self.state.data_mem.len() as u64 {
            self.stop(SimError::DataAddressOutOfRange { addr });
            return None;
        }
        Some(addr)
    }

    /// Classical pipeline plus reserve phase: up to `issue_rate`
    /// instruction words per cycle. Returns the number issued.
    fn classical_phase(&mut self) -> u32 {
        let mut issued = 0u32;
        let len = self.program.instrs.len();
        while issued < self.cfg.issue_rate as u32 && self.state.pc < len && self.halt.is_none() {
            let pc = self.state.pc;
            match &self.program.instrs[pc] {
                ExecInstr::Cmp { rs, rt } => {
                    self.state.cmp_flags = CmpFlagSet::from_compare(
                        self.state.gpr[*rs as usize],
                        self.state.gpr[*rt as usize],
                    );
                    self.state.pc += 1;
                }
                ExecInstr::Br { flag, offset } => {
                    if self.state.cmp_flags.get(*flag) {
                        let target = pc as i64 + *offset as i64;
                        if target < 0 || target > len as i64 {
                            self.stop(SimError::PcOutOfRange { target });
                            break;
                        }
                        self.state.pc = target as usize;
                        issued += 1;
                        // A taken branch redirects the fetch stage; the
                        // rest of this cycle's issue slots are lost.
                        break;
                    }
                    self.state.pc += 1;
                }
                ExecInstr::Fbr { flag, rd } => {
                    self.state.gpr[*rd as usize] = self.state.cmp_flags.get(*flag) as u32;
                    self.state.pc += 1;
                }
                ExecInstr::Ldi { rd, imm } => {
                    self.state.gpr[*rd as usize] = *imm as u32;
                    self.state.pc += 1;
                }
                ExecInstr::Ldui { rd, imm, rs } => {
                    let low = self.state.gpr[*rs as usize] & 0x1_ffff;
                    self.state.gpr[*rd as usize] = (imm << 17) | low;
                    self.state.pc += 1;
                }
                ExecInstr::Ld { rd, rt, offset } => {
                    let Some(addr) = self.load_store_addr(*rt, *offset) else {
                        break;
                    };
                    let bytes = &self.state.data_mem[addr as usize..addr as usize + 4];
                    self.state.gpr[*rd as usize] = u32::from_le_bytes(bytes.try_into().unwrap());
                    self.state.pc += 1;
                }
                ExecInstr::St { rs, rt, offset } => {
                    let Some(addr) = self.load_store_addr(*rt, *offset) else {
                        break;
                    };
                    let value = self.state.gpr[*rs as usize].to_le_bytes();
                    self.state.data_mem[addr as usize..addr as usize + 4].copy_from_slice(&value);
                    self.state.pc += 1;
                }
                ExecInstr::Fmr { rd, qubit } => {
                    // Stalls while any measurement on the qubit is
                    // pending so that the last result is always read.
                    if !self.state.q_valid(*qubit) {
                        break;
                    }
                    let value = self.state.q_result[*qubit as usize] as u32;
                    self.state.gpr[*rd as usize] = value;
                    self.trace.push(TraceEvent {
                        cycle: self.wall,
                        domain: Domain::Classical,
                        kind: EventKind::Fmr,
                        qubit: Some(*qubit),
                        reg: Some(*rd),
                        detail: value.to_string(),
                        released: None,
                    });
                    self.state.pc += 1;
                }
                ExecInstr::Logic { op, rd, rs, rt } => {
                    let a = self.state.gpr[*rs as usize];
                    let b = self.state.gpr[*rt as usize];
                    self.state.gpr[*rd as usize] = match op {
                        LogicOp::And => a & b,
                        LogicOp::Or => a | b,
                        LogicOp::Xor => a ^ b,
                    };
                    self.state.pc += 1;
                }
                ExecInstr::Not { rd, rt } => {
                    self.state.gpr[*rd as usize] = !self.state.gpr[*rt as usize];
                    self.state.pc += 1;
                }
                ExecInstr::Arith { op, rd, rs, rt } => {
                    let a = self.state.gpr[*rs as usize];
                    let b = self.state.gpr[*rt as usize];
                    self.state.gpr[*rd as usize] = match op {
                        ArithOp::Add => a.wrapping_add(b),
                        ArithOp::Sub => a.wrapping_sub(b),
                    };
                    self.state.pc += 1;
                }
                ExecInstr::Qwait { cycles } => {
                    if !self.reserve_wait(*cycles as u64) {
                        break;
                    }
                    self.state.pc += 1;
                }
                ExecInstr::Qwaitr { rs } => {
                    let interval = self.state.gpr[*rs as usize] & self.cfg.max_qwait();
                    if !self.reserve_wait(interval as u64) {
                        break;
                    }
                    self.state.pc += 1;
                }
                ExecInstr::Smis { sd, mask } => {
                    self.state.sregs[*sd as usize] = *mask;
                    self.state.pc += 1;
                }
                ExecInstr::Smit { td, mask } => {
                    self.state.tregs[*td as usize] = *mask;
                    self.state.pc += 1;
                }
                ExecInstr::Bundle { pi, slots } => {
                    if !self.reserve_bundle(*pi, slots) {
                        break;
                    }
                    self.state.pc += 1;
                }
            }
            issued += 1;
        }
        issued
    }

    fn complete_measurement(&mut self, qubit: u8, t: u64) {
        let bit = match self.script.pop(qubit) {
            Some(forced) => match self.backend.measure_forced(qubit, forced) {
                Ok(b) => b,
                Err(e) => {
                    self.stop(SimError::Backend(e));
                    return;
                }
            },
            None => match self.backend.measure(qubit, &mut self.rng) {
                Ok(b) => b,
                Err(e) => {
                    self.stop(SimError::Backend(e));
                    return;
                }
            },
        };
        self.state.finish_measurement(qubit, bit);
        self.trace.push(TraceEvent {
            cycle: t,
            domain: Domain::Quantum,
            kind: EventKind::MeasResult,
            qubit: Some(qubit),
            reg: None,
            detail: bit.to_string(),
            released: None,
        });
    }

    /// Trigger phase for timeline cycle `t`: write back finished
    /// measurements (updating execution flags first), then release or
    /// cancel every device operation due now. Returns whether anything
    /// happened, which feeds the deadlock detector.
    fn trigger_phase(&mut self, t: u64) -> bool {
        let mut fired = false;
        let mut finished: Vec<u8> = self
            .inflight
            .iter()
            .filter(|&&(ct, _)| ct == t)
            .map(|&(_, q)| q)
            .collect();
        finished.sort_unstable();
        self.inflight.retain(|&(ct, _)| ct != t);
        for qubit in finished {
            fired = true;
            self.complete_measurement(qubit, t);
            if self.halt.is_some() {
                return true;
            }
        }

        // Due operations: still-buffered ones first (their bundle was
        // never proven complete, but their time has come), then queued.
        let mut due: Vec<DeviceOp> = Vec::new();
        let mut keep = Vec::new();
        for op in self.buffer.drain(..) {
            if op.ts <= t {
                due.push(op);
            } else {
                keep.push(op);
            }
        }
        self.buffer = keep;
        for queue in &mut self.queues {
            while queue.front().is_some_and(|op| op.ts <= t) {
                due.push(queue.pop_front().unwrap());
            }
        }
        due.sort_by_key(|op| op.qubit);

        for op in due {
            fired = true;
            let released = match op.action {
                // Fast conditional execution applies to single-qubit
                // operations only.
                Action::Rotate => self.state.exec_flags[op.qubit as usize][op.flag as usize],
                _ => true,
            };
            self.trace.push(TraceEvent {
                cycle: t,
                domain: Domain::Quantum,
                kind: EventKind::Trigger,
                qubit: Some(op.qubit),
                reg: None,
                detail: self.cfg.q_ops[op.op].mnemonic.clone(),
                released: Some(released),
            });
            if !released {
                continue;
            }
            let result = match op.action {
                Action::Rotate => {
                    let matrix =
                        self.program.matrices[op.op].expect("rotation operations carry a matrix");
                    self.backend.apply_single(op.qubit, &matrix)
                }
                Action::CzSource { .. } => Ok(()), // the pair applies once, on the target
                Action::CzTarget { partner } => self.backend.apply_cz(partner, op.qubit),
                Action::Measure => {
                    self.inflight.push((t + op.duration as u64, op.qubit));
                    Ok(())
                }
            };
            if let Err(e) = result {
                self.stop(SimError::Backend(e));
                return true;
            }
        }
        fired
    }

    fn next_event_time(&self) -> Option<u64> {
        let queue_min = self
            .queues
            .iter()
            .filter_map(|q| q.front().map(|op| op.ts))
            .min();
        let buffer_min = self.buffer.iter().map(|op| op.ts).min();
        let inflight_min = self.inflight.iter().map(|&(ct, _)| ct).min();
        [queue_min, buffer_min, inflight_min]
            .into_iter()
            .flatten()
            .min()
    }

    fn quiescent(&self) -> bool {
        self.buffer.is_empty()
            && self.inflight.is_empty()
            && self.queues.iter().all(|q| q.is_empty())
    }

    fn run(mut self, opts: &RunOptions) -> RunOutcome {
        loop {
            let issued = self.classical_phase();
            let mut fired = false;
            if self.halt.is_none() {
                if let Timer::Active(t) = self.timer {
                    fired = self.trigger_phase(t);
                }
            }
            if self.halt.is_some() {
                break;
            }
            if self.state.pc >= self.program.instrs.len() && self.quiescent() {
                break;
            }

            self.wall += 1;
            self.timer = match self.timer {
                Timer::Idle => Timer::Idle,
                Timer::Pending => Timer::Active(0),
                Timer::Active(t) => Timer::Active(t + 1),
            };

            // Nothing issued and nothing will change until the next
            // event: skip the idle stretch in one step.
            if issued == 0 {
                match (self.timer, self.next_event_time()) {
                    (Timer::Active(t), Some(next)) if next > t => {
                        self.wall += next - t;
                        self.timer = Timer::Active(next);
                    }
                    (_, None) if !fired && self.state.pc < self.program.instrs.len() => {
                        // The pipeline is stalled, nothing is queued or
                        // in flight, and the trigger phase was idle: the
                        // stall can never resolve.
                        let pc = self.state.pc;
                        self.stop(SimError::Deadlock { pc });
                        break;
                    }
                    _ => {}
                }
            }

            if self.wall > opts.max_cycles {
                self.stop(SimError::CycleLimitExceeded {
                    limit: opts.max_cycles,
                });
                break;
            }
        }

        RunOutcome {
            trace: self.trace,
            state: self.state,
            backend: self.backend,
            wall_cycles: self.wall,
            halt: self.halt,
        }
    }
}

/// Runs a prepared program. Reusable across shots: preparation is done
/// once, each run gets fresh state seeded from `opts.seed`.
pub fn run_prepared(
    cfg: &InstantiationConfig,
    program: &ExecProgram,
    opts: &RunOptions,
) -> RunOutcome {
    Machine::new(cfg, program, opts).run(opts)
}

/// Prepares and runs an instruction list.
pub fn run_program(
    cfg: &InstantiationConfig,
    instructions: &[Instruction],
    opts: &RunOptions,
) -> Result<RunOutcome, PrepareError> {
    let program = prepare(instructions, cfg)?;
    Ok(run_prepared(cfg, &program, opts))
}
