//! Source-level diagnostics with file positions.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    /// 1-based source line; 0 when no source position applies.
    pub line: usize,
    /// 1-based column; 0 when no source position applies.
    pub col: usize,
    pub message: String,
}

impl Diagnostic {
    pub fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        Diagnostic {
            line,
            col,
            message: message.into(),
        }
    }

    pub fn global(message: impl Into<String>) -> Self {
        Diagnostic {
            line: 0,
            col: 0,
            message: message.into(),
        }
    }

    /// Renders as `file:line:col: error: message` for standard error.
    pub fn render(&self, file: &str) -> String {
        if self.line == 0 {
            format!("{file}: error: {}", self.message)
        } else {
            format!("{file}:{}:{}: error: {}", self.line, self.col, self.message)
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            f.write_str(&self.message)
        } else {
            write!(f, "{}:{}: {}", self.line, self.col, self.message)
        }
    }
}
