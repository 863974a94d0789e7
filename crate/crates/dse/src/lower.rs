//! Lowering a scheduled circuit to an instruction stream under one
//! architecture cell, and counting the 32-bit words it takes. Operations
//! sharing a start cycle form one timing point; SOMQ merges identical
//! same-point operations into one slot; a least-recently-used pool of 32
//! target registers accounts for SMIS/SMIT setup. Setup words can be
//! excluded from the totals, which matches the assumption that target
//! registers can always provide the required qubit list and gives the
//! theoretical maximum SOMQ benefit.

use std::collections::BTreeMap;

use crate::circuit::{CircuitTarget, ScheduledCircuit};
use crate::config::{DseConfig, IllegalConfig, TimingScheme};

/// Whether SMIS/SMIT setup instructions enter the totals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetupMode {
    /// Registers are assumed preloaded; setup is tracked but not counted.
    Uncounted,
    /// Setup words under the LRU register pool count toward the total.
    CountedLru,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoweredSlot {
    pub mnemonic: String,
    pub reg: u8,
    pub two_qubit: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LoweredStmt {
    Qwait(u64),
    Smis {
        reg: u8,
        qubits: Vec<u8>,
    },
    Smit {
        reg: u8,
        pairs: Vec<(u8, u8)>,
    },
    /// A quantum bundle of arbitrary slot count; it occupies
    /// ceil(slots / w) instruction words. Under ts2 the wait to this
    /// point occupies one extra slot.
    Bundle {
        pi: u64,
        wait_slot: Option<u64>,
        slots: Vec<LoweredSlot>,
    },
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DseReport {
    pub total: u64,
    pub qwaits: u64,
    pub bundles: u64,
    pub setup: u64,
    /// Operation slots after SOMQ merging, excluding waits and QNOP fill.
    pub effective_ops: u64,
    pub eff_ops_per_bundle: f64,
    /// Peak instruction words per timeline cycle over all timing points.
    pub r_req: f64,
}

#[derive(Debug, Clone)]
pub struct Lowering {
    pub stmts: Vec<LoweredStmt>,
    pub vliw_width: u8,
    qwait_words: u64,
    bundle_words: u64,
    setup_words: u64,
    effective_ops: u64,
    r_req: f64,
}

impl Lowering {
    pub fn report(&self, mode: SetupMode) -> DseReport {
        let setup = match mode {
            SetupMode::Uncounted => 0,
            SetupMode::CountedLru => self.setup_words,
        };
        DseReport {
            total: self.qwait_words + self.bundle_words + setup,
            qwaits: self.qwait_words,
            bundles: self.bundle_words,
            setup: self.setup_words,
            effective_ops: self.effective_ops,
            eff_ops_per_bundle: if self.bundle_words == 0 {
                0.0
            } else {
                self.effective_ops as f64 / self.bundle_words as f64
            },
            r_req: self.r_req,
        }
    }
}

/// LRU pool of target registers keyed by mask content.
struct RegPool<K> {
    capacity: usize,
    entries: Vec<(K, u8, u64)>,
    tick: u64,
}

impl<K: PartialEq + Clone> RegPool<K> {
    fn new(capacity: usize) -> Self {
        RegPool {
            capacity,
            entries: Vec::new(),
            tick: 0,
        }
    }

    /// Returns the register holding `key` and whether it had to be
    /// (re)loaded.
    fn acquire(&mut self, key: &K) -> (u8, bool) {
        self.tick += 1;
        if let Some(entry) = self.entries.iter_mut().find(|(k, _, _)| k == key) {
            entry.2 = self.tick;
            return (entry.1, false);
        }
        if self.entries.len() < self.capacity {
            let reg = self.entries.len() as u8;
            self.entries.push((key.clone(), reg, self.tick));
            return (reg, true);
        }
        let victim = self
            .entries
            .iter()
            .enumerate()
            .min_by_key(|(_, (_, _, used))| *used)
            .map(|(i, _)| i)
            .unwrap();
        self.entries[victim] = (key.clone(), self.entries[victim].1, self.tick);
        (self.entries[victim].1, true)
    }
}

fn ceil_div(a: usize, b: usize) -> u64 {
    (a as u64).div_ceil(b as u64)
}

/// Lowers a validated circuit under one architecture cell.
pub fn lower(circuit: &ScheduledCircuit, cfg: &DseConfig) -> Result<Lowering, IllegalConfig> {
    cfg.validate()?;
    let w = cfg.vliw_width as usize;
    let mut out = Lowering {
        stmts: Vec::new(),
        vliw_width: cfg.vliw_width,
        qwait_words: 0,
        bundle_words: 0,
        setup_words: 0,
        effective_ops: 0,
        r_req: 0.0,
    };
    let mut s_pool: RegPool<Vec<u8>> = RegPool::new(32);
    let mut t_pool: RegPool<Vec<(u8, u8)>> = RegPool::new(32);

    let mut previous_point = 0u64;
    let mut idx = 0usize;
    while idx < circuit.ops.len() {
        let start = circuit.ops[idx].start;
        let mut end = idx;
        while end < circuit.ops.len() && circuit.ops[end].start == start {
            end += 1;
        }
        let point_ops = &circuit.ops[idx..end];
        idx = end;

        // Build the slot list for this timing point.
        let mut single_masks: Vec<(String, Vec<u8>)> = Vec::new();
        let mut pair_masks: Vec<(String, Vec<(u8, u8)>)> = Vec::new();
        if cfg.somq {
            let mut singles: BTreeMap<&str, Vec<u8>> = BTreeMap::new();
            let mut pairs: BTreeMap<&str, Vec<(u8, u8)>> = BTreeMap::new();
            for op in point_ops {
                match op.target {
                    CircuitTarget::Qubit(q) => singles.entry(&op.mnemonic).or_default().push(q),
                    CircuitTarget::Pair(a, b) => {
                        pairs.entry(&op.mnemonic).or_default().push((a, b))
                    }
                }
            }
            for (mnemonic, mut qubits) in singles {
                qubits.sort_unstable();
                single_masks.push((mnemonic.to_string(), qubits));
            }
            for (mnemonic, mut list) in pairs {
                list.sort_unstable();
                pair_masks.push((mnemonic.to_string(), list));
            }
        } else {
            for op in point_ops {
                match op.target {
                    CircuitTarget::Qubit(q) => single_masks.push((op.mnemonic.clone(), vec![q])),
                    CircuitTarget::Pair(a, b) => {
                        pair_masks.push((op.mnemonic.clone(), vec![(a, b)]))
                    }
                }
            }
        }

        // Register allocation, emitting setup on every (re)load.
        let mut slots: Vec<LoweredSlot> = Vec::new();
        let mut point_setup = 0u64;
        for (mnemonic, qubits) in single_masks {
            let (reg, load) = s_pool.acquire(&qubits);
            if load {
                out.stmts.push(LoweredStmt::Smis { reg, qubits });
                point_setup += 1;
            }
            slots.push(LoweredSlot {
                mnemonic,
                reg,
                two_qubit: false,
            });
        }
        for (mnemonic, pairs) in pair_masks {
            let (reg, load) = t_pool.acquire(&pairs);
            if load {
                out.stmts.push(LoweredStmt::Smit { reg, pairs });
                point_setup += 1;
            }
            slots.push(LoweredSlot {
                mnemonic,
                reg,
                two_qubit: true,
            });
        }
        out.setup_words += point_setup;

        // Timing specification for the interval since the last point.
        let interval = start - previous_point;
        previous_point = start;
        let mut point_qwaits = 0u64;
        let (pi, wait_slot) = match cfg.scheme {
            TimingScheme::Ts1 => {
                out.stmts.push(LoweredStmt::Qwait(interval));
                point_qwaits += 1;
                (0, None)
            }
            TimingScheme::Ts2 => (0, Some(interval)),
            TimingScheme::Ts3 => {
                let max_pi = cfg.max_pi();
                if interval > max_pi {
                    out.stmts.push(LoweredStmt::Qwait(interval - max_pi));
                    point_qwaits += 1;
                    (max_pi, None)
                } else {
                    (interval, None)
                }
            }
        };
        out.qwait_words += point_qwaits;

        let slot_count = slots.len() + wait_slot.iter().count();
        let words = ceil_div(slot_count, w);
        out.bundle_words += words;
        out.effective_ops += slots.len() as u64;
        out.stmts.push(LoweredStmt::Bundle {
            pi,
            wait_slot,
            slots,
        });

        let peak = (point_qwaits + words) as f64 / interval.max(1) as f64;
        if peak > out.r_req {
            out.r_req = peak;
        }
    }

    Ok(out)
}

/// Lower and summarize in one step.
pub fn count_instructions(
    circuit: &ScheduledCircuit,
    cfg: &DseConfig,
    mode: SetupMode,
) -> Result<DseReport, IllegalConfig> {
    Ok(lower(circuit, cfg)?.report(mode))
}
