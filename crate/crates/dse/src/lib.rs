//! Instruction-count design-space exploration. Scheduled circuits are
//! lowered to instruction streams under a configurable architecture cell
//! (timing scheme, PI width, SOMQ, VLIW width); the lowering both counts
//! 32-bit instruction words and materializes assembly text, so counted
//! cells can be cross-checked against the real assembler word for word.

pub mod bench;
pub mod circuit;
pub mod clifford;
pub mod config;
pub mod lower;
pub mod materialize;
pub mod report;

pub use bench::{generate_benchmark, BenchKind, BenchParams};
pub use circuit::{CircuitError, CircuitTarget, ScheduledCircuit, ScheduledOp};
pub use config::{default_sweep, DseConfig, IllegalConfig, SweepCell, TimingScheme};
pub use lower::{count_instructions, lower, DseReport, Lowering, SetupMode};
pub use materialize::{cell_instantiation, materialize, MaterializeError};
pub use report::{render_csv, sweep, SweepRow};
