//! The instantiation configuration: everything that is fixed when eQASM
//! is instantiated for a concrete platform. Widths and opcode assignments
//! decide the binary format, so programs assembled under one
//! configuration are rejected by tools running another; a hash of the
//! canonical serialization travels in every program binary for that
//! purpose.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::topology::ChipTopology;

/// Classification of a configured quantum operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QOpKind {
    Single,
    TwoQubit,
    Measure,
    Qnop,
}

/// What the operation does to the quantum state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QOpSemantics {
    /// Rotation about `axis` (unit vector) by `angle_deg` degrees.
    Rotation { axis: [f64; 3], angle_deg: f64 },
    /// Controlled-phase gate on a directed qubit pair.
    ControlledPhase,
    /// Projective measurement in the computational basis.
    MeasureZ,
    /// Placeholder; never reaches the quantum state.
    Nop,
}

/// One entry of the quantum opcode table. The mnemonic is what programs
/// write; the opcode is what the bundle format stores; the rest tells the
/// microarchitecture how to execute it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QOpDef {
    pub mnemonic: String,
    pub opcode: u16,
    pub kind: QOpKind,
    /// Duration in cycles.
    pub duration: u32,
    /// Execution flag selector: 0 always executes, 1 executes iff the last
    /// measurement result was 1, 2 iff it was 0, 3 iff the last two results
    /// were equal. Measurements must use 0.
    #[serde(default)]
    pub exec_flag: u8,
    pub semantics: QOpSemantics,
}

fn default_vliw_width() -> u8 {
    2
}
fn default_pi_width() -> u8 {
    3
}
fn default_qubit_mask_width() -> u8 {
    7
}
fn default_pair_mask_width() -> u8 {
    16
}
fn default_reg_count() -> u8 {
    32
}
fn default_qwait_imm_width() -> u8 {
    20
}
fn default_q_opcode_width() -> u8 {
    9
}
fn default_cycle_time_ns() -> u32 {
    20
}
fn default_data_mem_size() -> u32 {
    64 * 1024
}
fn default_queue_depth() -> usize {
    64
}
fn default_issue_rate() -> u8 {
    2
}

/// Everything fixed during eQASM instantiation: field widths, register
/// counts, the chip topology, and the quantum opcode table with durations
/// and execution-flag selectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstantiationConfig {
    /// Quantum operations per bundle instruction word.
    #[serde(default = "default_vliw_width")]
    pub vliw_width: u8,
    /// Bits of the pre-interval field in bundle words.
    #[serde(default = "default_pi_width")]
    pub pi_width: u8,
    /// Bits of the SMIS qubit mask; equals the qubit count.
    #[serde(default = "default_qubit_mask_width")]
    pub qubit_mask_width: u8,
    /// Bits of the SMIT pair mask; equals the edge count.
    #[serde(default = "default_pair_mask_width")]
    pub pair_mask_width: u8,
    #[serde(default = "default_reg_count")]
    pub num_gprs: u8,
    #[serde(default = "default_reg_count")]
    pub num_sregs: u8,
    #[serde(default = "default_reg_count")]
    pub num_tregs: u8,
    /// Bits of the QWAIT immediate; QWAITR reads this many low GPR bits.
    #[serde(default = "default_qwait_imm_width")]
    pub qwait_imm_width: u8,
    #[serde(default = "default_q_opcode_width")]
    pub q_opcode_width: u8,
    #[serde(default = "default_cycle_time_ns")]
    pub cycle_time_ns: u32,
    /// Data memory size in bytes.
    #[serde(default = "default_data_mem_size")]
    pub data_mem_size: u32,
    /// Capacity of each per-qubit event queue; the reserve phase stalls
    /// when a queue is full.
    #[serde(default = "default_queue_depth")]
    pub queue_depth: usize,
    /// Instruction words the classical pipeline can process per cycle.
    #[serde(default = "default_issue_rate")]
    pub issue_rate: u8,
    #[serde(default = "ChipTopology::seven_qubit")]
    pub topology: ChipTopology,
    #[serde(default = "default_q_ops")]
    pub q_ops: Vec<QOpDef>,
}

impl Default for InstantiationConfig {
    fn default() -> Self {
        // An empty document deserializes to all field defaults.
        toml::from_str("").expect("default configuration")
    }
}

fn rotation(axis: [f64; 3], angle_deg: f64) -> QOpSemantics {
    QOpSemantics::Rotation { axis, angle_deg }
}

fn default_q_ops() -> Vec<QOpDef> {
    let x = [1.0, 0.0, 0.0];
    let y = [0.0, 1.0, 0.0];
    let single = |mnemonic: &str, opcode: u16, exec_flag: u8, sem: QOpSemantics| QOpDef {
        mnemonic: mnemonic.to_string(),
        opcode,
        kind: QOpKind::Single,
        duration: 1,
        exec_flag,
        semantics: sem,
    };
    vec![
        QOpDef {
            mnemonic: "QNOP".into(),
            opcode: 0,
            kind: QOpKind::Qnop,
            duration: 1,
            exec_flag: 0,
            semantics: QOpSemantics::Nop,
        },
        single("I", 1, 0, rotation(x, 0.0)),
        single("X", 2, 0, rotation(x, 180.0)),
        single("Y", 3, 0, rotation(y, 180.0)),
        single("X90", 4, 0, rotation(x, 90.0)),
        single("Y90", 5, 0, rotation(y, 90.0)),
        single("XM90", 6, 0, rotation(x, -90.0)),
        single("YM90", 7, 0, rotation(y, -90.0)),
        // Conditional X: released only when the last measurement read 1.
        single("C_X", 8, 1, rotation(x, 180.0)),
        QOpDef {
            mnemonic: "CZ".into(),
            opcode: 9,
            kind: QOpKind::TwoQubit,
            duration: 2,
            exec_flag: 0,
            semantics: QOpSemantics::ControlledPhase,
        },
        QOpDef {
            mnemonic: "MEASZ".into(),
            opcode: 10,
            kind: QOpKind::Measure,
            duration: 15,
            exec_flag: 0,
            semantics: QOpSemantics::MeasureZ,
        },
    ]
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error(
        "bundle format needs {required} bits (1 + {w} x ({q_opcode_width} + 5) + {pi_width}) \
         but the instruction word has 32"
    )]
    BitBudgetExceeded {
        required: u32,
        w: u8,
        q_opcode_width: u8,
        pi_width: u8,
    },
    #[error("operations '{first}' and '{second}' share opcode {opcode}")]
    DuplicateOpcode {
        first: String,
        second: String,
        opcode: u16,
    },
    #[error("operation mnemonic '{0}' is defined twice")]
    DuplicateMnemonic(String),
    #[error("{what} is {actual} but the topology implies {expected}")]
    MaskWidthMismatch {
        what: &'static str,
        actual: u8,
        expected: u8,
    },
    #[error("opcode 0 is reserved for QNOP, found '{0}'")]
    QnopOpcodeReserved(String),
    #[error("opcode {opcode} of '{mnemonic}' does not fit in {width} bits")]
    OpcodeOutOfRange {
        mnemonic: String,
        opcode: u16,
        width: u8,
    },
    #[error("measurement '{0}' must use execution flag 0")]
    MeasureFlagNotDefault(String),
    #[error("execution flag selector {flag} of '{mnemonic}' is not in 0..4")]
    ExecFlagOutOfRange { mnemonic: String, flag: u8 },
    #[error("rotation axis of '{0}' has zero length")]
    ZeroRotationAxis(String),
    #[error("{what} must be between {min} and {max}, got {actual}")]
    FieldOutOfRange {
        what: &'static str,
        actual: u32,
        min: u32,
        max: u32,
    },
}

impl InstantiationConfig {
    /// Bits needed by the bundle word layout:
    /// format bit + w slots of (q_opcode + register address) + PI.
    pub fn bundle_bits_required(&self) -> u32 {
        1 + self.vliw_width as u32 * (self.q_opcode_width as u32 + 5) + self.pi_width as u32
    }

    /// Largest pre-interval a bundle word can carry.
    pub fn max_pi(&self) -> u32 {
        if self.pi_width >= 32 {
            u32::MAX
        } else {
            (1u32 << self.pi_width) - 1
        }
    }

    /// Largest QWAIT immediate.
    pub fn max_qwait(&self) -> u32 {
        if self.qwait_imm_width >= 32 {
            u32::MAX
        } else {
            (1u32 << self.qwait_imm_width) - 1
        }
    }

    /// Case-insensitive opcode table lookup by mnemonic.
    pub fn op_by_mnemonic(&self, mnemonic: &str) -> Option<&QOpDef> {
        self.q_ops
            .iter()
            .find(|op| op.mnemonic.eq_ignore_ascii_case(mnemonic))
    }

    pub fn op_by_opcode(&self, opcode: u16) -> Option<&QOpDef> {
        self.q_ops.iter().find(|op| op.opcode == opcode)
    }

    pub fn num_qubits(&self) -> u8 {
        self.topology.num_qubits
    }

    /// Checks every configuration invariant and returns all violations.
    /// Topology structure has its own pass ([`ChipTopology::validate`]).
    pub fn validate(&self) -> Vec<ConfigError> {
        let mut errors = Vec::new();

        let required = self.bundle_bits_required();
        if required > 32 {
            errors.push(ConfigError::BitBudgetExceeded {
                required,
                w: self.vliw_width,
                q_opcode_width: self.q_opcode_width,
                pi_width: self.pi_width,
            });
        }

        if self.qubit_mask_width != self.topology.num_qubits {
            errors.push(ConfigError::MaskWidthMismatch {
                what: "qubit_mask_width",
                actual: self.qubit_mask_width,
                expected: self.topology.num_qubits,
            });
        }
        let num_edges = self.topology.num_edges();
        if self.pair_mask_width as usize != num_edges {
            errors.push(ConfigError::MaskWidthMismatch {
                what: "pair_mask_width",
                actual: self.pair_mask_width,
                expected: num_edges as u8,
            });
        }

        let ranges: [(&'static str, u32, u32, u32); 8] = [
            ("vliw_width", self.vliw_width as u32, 1, 8),
            ("pi_width", self.pi_width as u32, 0, 8),
            ("num_gprs", self.num_gprs as u32, 1, 32),
            ("num_sregs", self.num_sregs as u32, 1, 32),
            ("num_tregs", self.num_tregs as u32, 1, 32),
            ("qwait_imm_width", self.qwait_imm_width as u32, 1, 20),
            ("q_opcode_width", self.q_opcode_width as u32, 1, 16),
            ("issue_rate", self.issue_rate as u32, 1, 16),
        ];
        for (what, actual, min, max) in ranges {
            if actual < min || actual > max {
                errors.push(ConfigError::FieldOutOfRange {
                    what,
                    actual,
                    min,
                    max,
                });
            }
        }
        // Mask immediates live in the 20 low bits left of the 5-bit
        // register address in the single instruction format.
        for (what, actual) in [
            ("qubit_mask_width", self.qubit_mask_width),
            ("pair_mask_width", self.pair_mask_width),
        ] {
            if actual == 0 || actual > 20 {
                errors.push(ConfigError::FieldOutOfRange {
                    what,
                    actual: actual as u32,
                    min: 1,
                    max: 20,
                });
            }
        }

        for (i, op) in self.q_ops.iter().enumerate() {
            for earlier in &self.q_ops[..i] {
                if earlier.opcode == op.opcode {
                    errors.push(ConfigError::DuplicateOpcode {
                        first: earlier.mnemonic.clone(),
                        second: op.mnemonic.clone(),
                        opcode: op.opcode,
                    });
                }
                if earlier.mnemonic.eq_ignore_ascii_case(&op.mnemonic) {
                    errors.push(ConfigError::DuplicateMnemonic(op.mnemonic.clone()));
                }
            }
            if op.opcode == 0 && op.kind != QOpKind::Qnop {
                errors.push(ConfigError::QnopOpcodeReserved(op.mnemonic.clone()));
            }
            if self.q_opcode_width < 16 && op.opcode >= 1 << self.q_opcode_width {
                errors.push(ConfigError::OpcodeOutOfRange {
                    mnemonic: op.mnemonic.clone(),
                    opcode: op.opcode,
                    width: self.q_opcode_width,
                });
            }
            if op.exec_flag > 3 {
                errors.push(ConfigError::ExecFlagOutOfRange {
                    mnemonic: op.mnemonic.clone(),
                    flag: op.exec_flag,
                });
            }
            // A cancelled measurement would leave the pending counter
            // stuck, deadlocking any later FMR on that qubit.
            if op.kind == QOpKind::Measure && op.exec_flag != 0 {
                errors.push(ConfigError::MeasureFlagNotDefault(op.mnemonic.clone()));
            }
            if let QOpSemantics::Rotation { axis, .. } = op.semantics {
                if axis.iter().map(|c| c * c).sum::<f64>() < 1e-12 {
                    errors.push(ConfigError::ZeroRotationAxis(op.mnemonic.clone()));
                }
            }
        }

        errors
    }

    /// Canonical TOML serialization used for hashing and shipped as the
    /// default configuration file.
    pub fn to_canonical_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    /// First four bytes (little endian) of the SHA-256 of the canonical
    /// serialization. Embedded in program binaries so that decoding under
    /// a different instantiation fails loudly.
    pub fn hash(&self) -> u32 {
        let digest = Sha256::digest(self.to_canonical_toml().as_bytes());
        u32::from_le_bytes([digest[0], digest[1], digest[2], digest[3]])
    }

    pub fn hash_hex(&self) -> String {
        format!("{:08x}", self.hash())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        let cfg = InstantiationConfig::default();
        assert!(cfg.validate().is_empty());
        assert!(cfg.topology.validate().is_empty());
        // 1 + 2*(9+5) + 3 fills the 32-bit word exactly.
        assert_eq!(cfg.bundle_bits_required(), 32);
    }

    #[test]
    fn pair_mask_width_must_match_edge_count() {
        let cfg = InstantiationConfig {
            pair_mask_width: 12,
            ..Default::default()
        };
        assert!(cfg.validate().iter().any(|e| matches!(
            e,
            ConfigError::MaskWidthMismatch {
                what: "pair_mask_width",
                actual: 12,
                expected: 16
            }
        )));
    }

    #[test]
    fn duplicate_opcode_is_reported() {
        let mut cfg = InstantiationConfig::default();
        cfg.q_ops[2].opcode = 0x01; // clashes with I
        assert!(cfg
            .validate()
            .iter()
            .any(|e| matches!(e, ConfigError::DuplicateOpcode { opcode: 1, .. })));
    }

    #[test]
    fn oversized_bundle_is_rejected() {
        let cfg = InstantiationConfig {
            vliw_width: 3,
            ..Default::default()
        };
        // 1 + 3*14 + 3 = 46 bits
        assert!(cfg
            .validate()
            .iter()
            .any(|e| matches!(e, ConfigError::BitBudgetExceeded { required: 46, .. })));
    }

    #[test]
    fn narrow_vliw_fits_with_slack() {
        let cfg = InstantiationConfig {
            vliw_width: 1,
            ..Default::default()
        };
        // 18 bits; unused space is fine
        assert!(cfg.validate().is_empty());
    }

    #[test]
    fn conditional_measurement_is_rejected() {
        let mut cfg = InstantiationConfig::default();
        let measz = cfg
            .q_ops
            .iter_mut()
            .find(|op| op.mnemonic == "MEASZ")
            .unwrap();
        measz.exec_flag = 1;
        assert!(cfg
            .validate()
            .iter()
            .any(|e| matches!(e, ConfigError::MeasureFlagNotDefault(_))));
    }

    #[test]
    fn toml_round_trip_preserves_config_and_hash() {
        let cfg = InstantiationConfig::default();
        let text = cfg.to_canonical_toml();
        let back = InstantiationConfig::from_toml(&text).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.hash(), cfg.hash());
    }

    #[test]
    fn hash_tracks_config_changes() {
        let cfg = InstantiationConfig::default();
        let mut other = cfg.clone();
        other.pi_width = 2;
        assert_ne!(cfg.hash(), other.hash());
    }

    #[test]
    fn mnemonic_lookup_is_case_insensitive() {
        let cfg = InstantiationConfig::default();
        assert_eq!(cfg.op_by_mnemonic("measz").unwrap().mnemonic, "MEASZ");
        assert_eq!(cfg.op_by_mnemonic("MeasZ").unwrap().mnemonic, "MEASZ");
        assert!(cfg.op_by_mnemonic("H").is_none());
    }
}
