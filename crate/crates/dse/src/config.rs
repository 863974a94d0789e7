//! Architecture cells of the exploration: a timing-specification scheme,
//! a PI field width, SOMQ on or off, and a VLIW width.

use thiserror::Error;

/// How timing points are specified in the instruction stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimingScheme {
    /// Every timing point gets its own QWAIT instruction.
    Ts1,
    /// The wait rides inside the quantum bundle, occupying one slot.
    Ts2,
    /// Short waits go into the bundle's PI field, long ones into QWAIT.
    Ts3,
}

impl TimingScheme {
    pub fn name(self) -> &'static str {
        match self {
            TimingScheme::Ts1 => "ts1",
            TimingScheme::Ts2 => "ts2",
            TimingScheme::Ts3 => "ts3",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DseConfig {
    pub scheme: TimingScheme,
    pub pi_width: u8,
    pub somq: bool,
    pub vliw_width: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IllegalConfig {
    #[error("ts2 needs a VLIW width of at least 2 to differ from ts1")]
    Ts2NeedsWidth,
    #[error("{scheme} requires pi_width {want}, got {got}")]
    PiWidthMismatch {
        scheme: &'static str,
        want: &'static str,
        got: u8,
    },
    #[error("VLIW width {0} outside 1..=8")]
    BadVliwWidth(u8),
}

impl DseConfig {
    pub fn validate(&self) -> Result<(), IllegalConfig> {
        if self.vliw_width < 1 || self.vliw_width > 8 {
            return Err(IllegalConfig::BadVliwWidth(self.vliw_width));
        }
        match self.scheme {
            TimingScheme::Ts1 | TimingScheme::Ts2 => {
                if self.pi_width != 0 {
                    return Err(IllegalConfig::PiWidthMismatch {
                        scheme: self.scheme.name(),
                        want: "0",
                        got: self.pi_width,
                    });
                }
                if self.scheme == TimingScheme::Ts2 && self.vliw_width < 2 {
                    return Err(IllegalConfig::Ts2NeedsWidth);
                }
            }
            TimingScheme::Ts3 => {
                if self.pi_width == 0 || self.pi_width > 8 {
                    return Err(IllegalConfig::PiWidthMismatch {
                        scheme: "ts3",
                        want: "1..=8",
                        got: self.pi_width,
                    });
                }
            }
        }
        Ok(())
    }

    /// Largest interval the PI field can hold (0 when there is none).
    pub fn max_pi(&self) -> u64 {
        if self.scheme == TimingScheme::Ts3 {
            (1u64 << self.pi_width) - 1
        } else {
            0
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepCell {
    pub config_id: u8,
    pub config: DseConfig,
}

/// The numbered configurations: 1 = (ts1, no PI, no SOMQ),
/// 2 = (ts2, no PI, no SOMQ), 3-6 = (ts3, PI width 1-4, no SOMQ),
/// 7-10 = the same with SOMQ.
pub fn numbered_config(id: u8, vliw_width: u8) -> Option<DseConfig> {
    let (scheme, pi_width, somq) = match id {
        1 => (TimingScheme::Ts1, 0, false),
        2 => (TimingScheme::Ts2, 0, false),
        3..=6 => (TimingScheme::Ts3, id - 2, false),
        7..=10 => (TimingScheme::Ts3, id - 6, true),
        _ => return None,
    };
    Some(DseConfig {
        scheme,
        pi_width,
        somq,
        vliw_width,
    })
}

/// All legal (configuration, width) cells of the standard grid:
/// 10 configurations by w in 1..=4, minus the ts2 cell at w = 1.
pub fn default_sweep() -> Vec<SweepCell> {
    let mut cells = Vec::new();
    for id in 1..=10 {
        for w in 1..=4 {
            let config = numbered_config(id, w).unwrap();
            if config.validate().is_ok() {
                cells.push(SweepCell {
                    config_id: id,
                    config,
                });
            }
        }
    }
    cells
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn the_grid_has_39_cells() {
        let cells = default_sweep();
        assert_eq!(cells.len(), 39);
        assert!(!cells
            .iter()
            .any(|c| c.config_id == 2 && c.config.vliw_width == 1));
    }

    #[test]
    fn ts2_at_width_one_is_illegal() {
        let config = numbered_config(2, 1).unwrap();
        assert_eq!(config.validate(), Err(IllegalConfig::Ts2NeedsWidth));
    }

    #[test]
    fn ts1_with_a_pi_field_is_illegal() {
        let config = DseConfig {
            scheme: TimingScheme::Ts1,
            pi_width: 2,
            somq: false,
            vliw_width: 2,
        };
        assert!(matches!(
            config.validate(),
            Err(IllegalConfig::PiWidthMismatch { .. })
        ));
    }
}
