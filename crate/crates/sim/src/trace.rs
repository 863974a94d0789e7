//! Execution trace. One record per event, rendered line by line as
//! `cycle<TAB>domain<TAB>kind<TAB>subject<TAB>detail<TAB>status`.
//! Quantum-domain records carry the timeline cycle, classical-domain
//! records the wall cycle. The format is stable; snapshot tests and the
//! CLI rely on it byte for byte.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Classical,
    Quantum,
}

impl Domain {
    fn letter(self) -> &'static str {
        match self {
            Domain::Classical => "C",
            Domain::Quantum => "Q",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    /// A device operation reached its timing point.
    Trigger,
    /// A measurement result was written back.
    MeasResult,
    /// An FMR instruction read a result register.
    Fmr,
    /// The processor stopped with an error.
    Halt,
    /// An undelivered operation drained after a stop.
    Drained,
}

impl EventKind {
    fn name(self) -> &'static str {
        match self {
            EventKind::Trigger => "trigger",
            EventKind::MeasResult => "meas_result",
            EventKind::Fmr => "fmr",
            EventKind::Halt => "halt",
            EventKind::Drained => "drained",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEvent {
    pub cycle: u64,
    pub domain: Domain,
    pub kind: EventKind,
    /// Affected qubit, if any.
    pub qubit: Option<u8>,
    /// Affected GPR, if any.
    pub reg: Option<u8>,
    pub detail: String,
    /// For triggers: whether fast conditional execution released the
    /// operation.
    pub released: Option<bool>,
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let subject = match (self.qubit, self.reg) {
            (Some(q), _) => format!("q{q}"),
            (None, Some(r)) => format!("R{r}"),
            (None, None) => "-".to_string(),
        };
        let status = match self.released {
            Some(true) => "released",
            Some(false) => "canceled",
            None => "-",
        };
        write!(
            f,
            "{}\t{}\t{}\t{}\t{}\t{}",
            self.cycle,
            self.domain.letter(),
            self.kind.name(),
            subject,
            self.detail,
            status
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trace {
    pub events: Vec<TraceEvent>,
}

impl Trace {
    pub fn push(&mut self, event: TraceEvent) {
        self.events.push(event);
    }

    /// All released trigger events as (timeline cycle, qubit, operation).
    pub fn released_triggers(&self) -> Vec<(u64, u8, String)> {
        self.events
            .iter()
            .filter(|e| e.kind == EventKind::Trigger && e.released == Some(true))
            .map(|e| (e.cycle, e.qubit.unwrap_or(u8::MAX), e.detail.clone()))
            .collect()
    }

    /// All measurement write-backs as (timeline cycle, qubit, bit).
    pub fn measurement_results(&self) -> Vec<(u64, u8, u8)> {
        self.events
            .iter()
            .filter(|e| e.kind == EventKind::MeasResult)
            .map(|e| {
                (
                    e.cycle,
                    e.qubit.unwrap_or(u8::MAX),
                    e.detail.parse().unwrap_or(2),
                )
            })
            .collect()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for event in &self.events {
            out.push_str(&event.to_string());
            out.push('\n');
        }
        out
    }
}
