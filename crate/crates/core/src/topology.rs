//! Quantum chip topology: qubits as vertices, allowed qubit pairs as
//! directed edges. Edge order is significant — it fixes the bit positions
//! used by two-qubit pair masks, so the topology is part of the
//! instantiation and travels with the configuration file.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Directed connectivity of a quantum chip. `edges[e]` is the allowed
/// qubit pair with address `e`, written `(source, target)`. A pair and its
/// reverse are distinct edges because a two-qubit gate may act on its
/// operands asymmetrically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChipTopology {
    pub num_qubits: u8,
    pub edges: Vec<(u8, u8)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error("edge {edge} references qubit {qubit}, but the chip has qubits 0..{num_qubits}")]
    DanglingQubit {
        edge: usize,
        qubit: u8,
        num_qubits: u8,
    },
    #[error("edge {1} duplicates edge {0}")]
    DuplicateEdge(usize, usize),
    #[error("edge {edge} ({src}->{tgt}) has no reverse edge ({tgt}->{src})")]
    MissingReverseEdge { edge: usize, src: u8, tgt: u8 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairError {
    #[error("({0}, {1}) is not an allowed qubit pair of this topology")]
    NotAnAllowedPair(u8, u8),
}

impl ChipTopology {
    /// The seven-qubit square-lattice patch targeted by the default
    /// instantiation. Edge 0 is (2 -> 0); edge k+8 is the reverse of edge
    /// k, which puts qubit 0 on edges 0, 1, 8 and 9 (target on 0 and 9,
    /// source on 1 and 8).
    pub fn seven_qubit() -> Self {
        let forward: [(u8, u8); 8] = [
            (2, 0),
            (0, 3),
            (1, 3),
            (1, 4),
            (2, 5),
            (3, 5),
            (3, 6),
            (4, 6),
        ];
        let mut edges: Vec<(u8, u8)> = forward.to_vec();
        edges.extend(forward.iter().map(|&(a, b)| (b, a)));
        ChipTopology {
            num_qubits: 7,
            edges,
        }
    }

    /// Ring connectivity for synthetic chips of other sizes. Every
    /// neighbouring pair is present in both orientations.
    pub fn ring(num_qubits: u8) -> Self {
        assert!(num_qubits >= 2, "a ring needs at least two qubits");
        if num_qubits == 2 {
            return ChipTopology {
                num_qubits,
                edges: vec![(0, 1), (1, 0)],
            };
        }
        let forward: Vec<(u8, u8)> = (0..num_qubits).map(|i| (i, (i + 1) % num_qubits)).collect();
        let mut edges = forward.clone();
        edges.extend(forward.iter().map(|&(a, b)| (b, a)));
        ChipTopology { num_qubits, edges }
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edge address of the directed pair `(src, tgt)`, if it is allowed.
    pub fn edge_index(&self, src: u8, tgt: u8) -> Option<usize> {
        self.edges.iter().position(|&e| e == (src, tgt))
    }

    /// Edge addresses on which `qubit` plays the source role and the
    /// target role, respectively.
    pub fn edge_roles(&self, qubit: u8) -> (Vec<usize>, Vec<usize>) {
        let mut source = Vec::new();
        let mut target = Vec::new();
        for (e, &(src, tgt)) in self.edges.iter().enumerate() {
            if src == qubit {
                source.push(e);
            }
            if tgt == qubit {
                target.push(e);
            }
        }
        (source, target)
    }

    /// Checks every structural invariant and returns all violations.
    pub fn validate(&self) -> Vec<TopologyError> {
        let mut errors = Vec::new();
        for (e, &(src, tgt)) in self.edges.iter().enumerate() {
            for q in [src, tgt] {
                if q >= self.num_qubits {
                    errors.push(TopologyError::DanglingQubit {
                        edge: e,
                        qubit: q,
                        num_qubits: self.num_qubits,
                    });
                }
            }
            if let Some(first) = self.edges[..e].iter().position(|&d| d == (src, tgt)) {
                errors.push(TopologyError::DuplicateEdge(first, e));
            }
            if self.edge_index(tgt, src).is_none() {
                errors.push(TopologyError::MissingReverseEdge { edge: e, src, tgt });
            }
        }
        errors
    }

    /// Converts a directed pair list into a pair mask: bit `e` set iff
    /// edge `e` is selected.
    pub fn pair_list_to_mask(&self, pairs: &[(u8, u8)]) -> Result<u32, PairError> {
        let mut mask = 0u32;
        for &(src, tgt) in pairs {
            let e = self
                .edge_index(src, tgt)
                .ok_or(PairError::NotAnAllowedPair(src, tgt))?;
            mask |= 1 << e;
        }
        Ok(mask)
    }

    /// Inverse of [`pair_list_to_mask`](Self::pair_list_to_mask): pairs in
    /// edge-address order.
    pub fn mask_to_pair_list(&self, mask: u32) -> Vec<(u8, u8)> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(e, _)| mask & (1 << e) != 0)
            .map(|(_, &pair)| pair)
            .collect()
    }
}
