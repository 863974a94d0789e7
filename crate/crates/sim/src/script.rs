//! Scripted measurement results. A script holds one outcome queue per
//! qubit; while a queue is non-empty its bits override the backend's
//! sampled outcomes (the state still collapses, by post-selection). The
//! file format is line oriented:
//!
//! ```text
//! # comment
//! q0: 1 0 1 0
//! q2: 0 0 1
//! ```

use std::collections::VecDeque;

#[derive(Debug, Clone, Default)]
pub struct ScriptedResults {
    queues: Vec<VecDeque<u8>>,
}

impl ScriptedResults {
    pub fn new(num_qubits: u8) -> Self {
        ScriptedResults {
            queues: vec![VecDeque::new(); num_qubits as usize],
        }
    }

    pub fn push(&mut self, qubit: u8, bit: u8) {
        self.queues[qubit as usize].push_back(bit);
    }

    pub fn with(mut self, qubit: u8, bits: &[u8]) -> Self {
        for &b in bits {
            self.push(qubit, b);
        }
        self
    }

    /// Next scripted outcome for `qubit`, if any remains.
    pub fn pop(&mut self, qubit: u8) -> Option<u8> {
        self.queues.get_mut(qubit as usize)?.pop_front()
    }

    pub fn parse(text: &str, num_qubits: u8) -> Result<Self, String> {
        let mut script = ScriptedResults::new(num_qubits);
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (head, rest) = line
                .split_once(':')
                .ok_or_else(|| format!("line {}: expected 'q<N>: bits...'", idx + 1))?;
            let head = head.trim();
            let qubit: u8 = head
                .strip_prefix(['q', 'Q'])
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| format!("line {}: bad qubit name '{head}'", idx + 1))?;
            if qubit >= num_qubits {
                return Err(format!("line {}: qubit {qubit} out of range", idx + 1));
            }
            for token in rest.split([' ', '\t', ',']).filter(|t| !t.is_empty()) {
                match token {
                    "0" => script.push(qubit, 0),
                    "1" => script.push(qubit, 1),
                    other => {
                        return Err(format!("line {}: bad result '{other}'", idx + 1));
                    }
                }
            }
        }
        Ok(script)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_pops_in_order() {
        let text = "# alternating results\nq0: 1 0 1\nq2: 0, 1\n";
        let mut script = ScriptedResults::parse(text, 7).unwrap();
        assert_eq!(script.pop(0), Some(1));
        assert_eq!(script.pop(0), Some(0));
        assert_eq!(script.pop(0), Some(1));
        assert_eq!(script.pop(0), None);
        assert_eq!(script.pop(2), Some(0));
        assert_eq!(script.pop(1), None);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ScriptedResults::parse("q9: 1", 7).is_err());
        assert!(ScriptedResults::parse("x0: 1", 7).is_err());
        assert!(ScriptedResults::parse("q0: 2", 7).is_err());
        assert!(ScriptedResults::parse("q0 1", 7).is_err());
    }
}
