//! Cycle-accurate simulator of the eQASM control microarchitecture: a
//! classical pipeline feeding a quantum pipeline through queue-based
//! timing control. Quantum instructions are executed in two phases — a
//! reserve phase that builds a timeline of timestamped micro-operations
//! in the non-deterministic domain, and a trigger phase in which a
//! deterministic timer releases (or cancels, under fast conditional
//! execution) every device operation at its timing point. A state-vector
//! backend gives the released operations observable quantum semantics.

pub mod machine;
pub mod opsel;
pub mod program;
pub mod script;
pub mod state;
pub mod trace;

pub use machine::{run_prepared, run_program, RunOptions, RunOutcome, SimError};
pub use opsel::{resolve_opsel, OpSel, OpSelError};
pub use program::{prepare, ExecProgram, PrepareError};
pub use script::ScriptedResults;
pub use state::ArchState;
pub use trace::{Domain, EventKind, Trace, TraceEvent};
