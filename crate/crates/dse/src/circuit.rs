//! Scheduled circuits: the input of the exploration. Scheduling and
//! qubit mapping happen upstream; here a circuit is a list of operations
//! with fixed start cycles and legal operands.

use eqasm_core::ChipTopology;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CircuitTarget {
    Qubit(u8),
    Pair(u8, u8),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduledOp {
    pub start: u64,
    pub mnemonic: String,
    pub target: CircuitTarget,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScheduledCircuit {
    pub topology: ChipTopology,
    /// Operations ordered by non-decreasing start cycle.
    pub ops: Vec<ScheduledOp>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("operation {0} starts before its predecessor")]
    UnsortedStart(usize),
    #[error("operation {index} targets qubit {qubit} outside the chip")]
    QubitOutOfRange { index: usize, qubit: u8 },
    #[error("operation {index} targets ({src}, {tgt}), not an allowed pair")]
    PairNotAllowed { index: usize, src: u8, tgt: u8 },
    #[error("operations {0} and {1} touch qubit {2} in the same cycle")]
    SameCycleOverlap(usize, usize, u8),
}

/// Default connectivity for a given chip size: the seven-qubit lattice
/// for seven qubits, a ring otherwise.
pub fn default_topology_for(num_qubits: u8) -> ChipTopology {
    if num_qubits == 7 {
        ChipTopology::seven_qubit()
    } else {
        ChipTopology::ring(num_qubits)
    }
}

impl ScheduledCircuit {
    pub fn num_qubits(&self) -> u8 {
        self.topology.num_qubits
    }

    pub fn validate(&self) -> Vec<CircuitError> {
        let mut errors = Vec::new();
        let mut prev_start = 0u64;
        let mut cycle_users: Vec<(u64, u8, usize)> = Vec::new();
        for (index, op) in self.ops.iter().enumerate() {
            if op.start < prev_start {
                errors.push(CircuitError::UnsortedStart(index));
            }
            prev_start = prev_start.max(op.start);
            let qubits: Vec<u8> = match op.target {
                CircuitTarget::Qubit(q) => vec![q],
                CircuitTarget::Pair(a, b) => {
                    if self.topology.edge_index(a, b).is_none() {
                        errors.push(CircuitError::PairNotAllowed {
                            index,
                            src: a,
                            tgt: b,
                        });
                    }
                    vec![a, b]
                }
            };
            for q in qubits {
                if q >= self.topology.num_qubits {
                    errors.push(CircuitError::QubitOutOfRange { index, qubit: q });
                    continue;
                }
                if let Some(&(_, _, other)) = cycle_users
                    .iter()
                    .find(|&&(start, qubit, _)| start == op.start && qubit == q)
                {
                    errors.push(CircuitError::SameCycleOverlap(other, index, q));
                }
                cycle_users.push((op.start, q, index));
            }
            cycle_users.retain(|&(start, _, _)| start == op.start);
        }
        errors
    }

    /// Total operation count, and the two-qubit share of it.
    pub fn gate_stats(&self) -> (usize, f64) {
        let total = self.ops.len();
        let two = self
            .ops
            .iter()
            .filter(|op| matches!(op.target, CircuitTarget::Pair(..)))
            .count();
        (
            total,
            if total == 0 {
                0.0
            } else {
                two as f64 / total as f64
            },
        )
    }
}
