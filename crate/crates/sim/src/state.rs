//! The architectural state visible to eQASM programs.

use eqasm_core::{CmpFlagSet, InstantiationConfig};

/// Register files, flags, measurement bookkeeping and data memory. The
/// per-qubit measurement result register `Qi` is valid exactly when its
/// pending counter `Ci` is zero; that invariant is the representation
/// here, not a separate bit.
#[derive(Debug, Clone)]
pub struct ArchState {
    pub pc: usize,
    pub gpr: Vec<u32>,
    pub cmp_flags: CmpFlagSet,
    /// Single-qubit target registers (qubit masks).
    pub sregs: Vec<u32>,
    /// Two-qubit target registers (pair masks).
    pub tregs: Vec<u32>,
    /// Last finished measurement result per qubit (reset value 0).
    pub q_result: Vec<u8>,
    /// Pending measurement count per qubit (the counter attached to Qi).
    pub meas_pending: Vec<u32>,
    /// Fast-conditional-execution flags per qubit:
    /// \[always, last == 1, last == 0, last two equal\].
    pub exec_flags: Vec<[bool; 4]>,
    /// (last, previous) finished results per qubit.
    pub last_results: Vec<(Option<u8>, Option<u8>)>,
    pub data_mem: Vec<u8>,
}

impl ArchState {
    pub fn new(cfg: &InstantiationConfig) -> Self {
        let n = cfg.num_qubits() as usize;
        ArchState {
            pc: 0,
            gpr: vec![0; cfg.num_gprs as usize],
            cmp_flags: CmpFlagSet::reset(),
            sregs: vec![0; cfg.num_sregs as usize],
            tregs: vec![0; cfg.num_tregs as usize],
            q_result: vec![0; n],
            meas_pending: vec![0; n],
            exec_flags: vec![[true, false, false, false]; n],
            last_results: vec![(None, None); n],
            data_mem: vec![0; cfg.data_mem_size as usize],
        }
    }

    /// Qi is readable only while no measurement on qubit `i` is pending.
    pub fn q_valid(&self, qubit: u8) -> bool {
        self.meas_pending[qubit as usize] == 0
    }

    /// Records a finished measurement: writes the result register,
    /// decrements the pending counter and rederives the execution flags.
    pub fn finish_measurement(&mut self, qubit: u8, bit: u8) {
        let q = qubit as usize;
        self.q_result[q] = bit;
        self.meas_pending[q] = self.meas_pending[q].saturating_sub(1);
        let (last, _) = self.last_results[q];
        self.last_results[q] = (Some(bit), last);
        let (last, prev) = self.last_results[q];
        self.exec_flags[q] = [
            true,
            last == Some(1),
            last == Some(0),
            last.is_some() && last == prev,
        ];
    }
}
