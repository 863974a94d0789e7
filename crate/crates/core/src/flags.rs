//! Comparison flags. `CMP Rs, Rt` sets every flag at once from one
//! register comparison; `BR`/`FBR` then select a single flag by name.

use std::fmt;

use serde::{Deserialize, Serialize};

/// One of the twelve comparison flags. `Always` and `Never` are constant;
/// the rest cover signed and unsigned orderings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CmpFlag {
    Always,
    Never,
    Eq,
    Ne,
    Lt,
    Ge,
    Le,
    Gt,
    Ltu,
    Geu,
    Leu,
    Gtu,
}

impl CmpFlag {
    pub const ALL: [CmpFlag; 12] = [
        CmpFlag::Always,
        CmpFlag::Never,
        CmpFlag::Eq,
        CmpFlag::Ne,
        CmpFlag::Lt,
        CmpFlag::Ge,
        CmpFlag::Le,
        CmpFlag::Gt,
        CmpFlag::Ltu,
        CmpFlag::Geu,
        CmpFlag::Leu,
        CmpFlag::Gtu,
    ];

    /// 4-bit code used by the binary encoding.
    pub fn code(self) -> u8 {
        Self::ALL.iter().position(|&f| f == self).unwrap() as u8
    }

    pub fn from_code(code: u8) -> Option<CmpFlag> {
        Self::ALL.get(code as usize).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            CmpFlag::Always => "ALWAYS",
            CmpFlag::Never => "NEVER",
            CmpFlag::Eq => "EQ",
            CmpFlag::Ne => "NE",
            CmpFlag::Lt => "LT",
            CmpFlag::Ge => "GE",
            CmpFlag::Le => "LE",
            CmpFlag::Gt => "GT",
            CmpFlag::Ltu => "LTU",
            CmpFlag::Geu => "GEU",
            CmpFlag::Leu => "LEU",
            CmpFlag::Gtu => "GTU",
        }
    }

    /// Case-insensitive lookup by assembly name.
    pub fn parse(name: &str) -> Option<CmpFlag> {
        Self::ALL
            .iter()
            .copied()
            .find(|f| f.name().eq_ignore_ascii_case(name))
    }
}

impl fmt::Display for CmpFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The architectural comparison flag register file, packed into one word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CmpFlagSet {
    bits: u16,
}

impl CmpFlagSet {
    /// Reset state: the result of comparing two zeroed registers.
    pub fn reset() -> Self {
        Self::from_compare(0, 0)
    }

    /// Sets every flag from one comparison of two 32-bit register values.
    pub fn from_compare(a: u32, b: u32) -> Self {
        let (sa, sb) = (a as i32, b as i32);
        let mut bits = 0u16;
        let mut set = |flag: CmpFlag, value: bool| {
            if value {
                bits |= 1 << flag.code();
            }
        };
        set(CmpFlag::Always, true);
        set(CmpFlag::Never, false);
        set(CmpFlag::Eq, a == b);
        set(CmpFlag::Ne, a != b);
        set(CmpFlag::Lt, sa < sb);
        set(CmpFlag::Ge, sa >= sb);
        set(CmpFlag::Le, sa <= sb);
        set(CmpFlag::Gt, sa > sb);
        set(CmpFlag::Ltu, a < b);
        set(CmpFlag::Geu, a >= b);
        set(CmpFlag::Leu, a <= b);
        set(CmpFlag::Gtu, a > b);
        CmpFlagSet { bits }
    }

    pub fn get(&self, flag: CmpFlag) -> bool {
        self.bits & (1 << flag.code()) != 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_flags() {
        for set in [CmpFlagSet::reset(), CmpFlagSet::from_compare(3, 7)] {
            assert!(set.get(CmpFlag::Always));
            assert!(!set.get(CmpFlag::Never));
        }
    }

    #[test]
    fn flag_pairs_are_complementary() {
        let cases = [
            (0u32, 0u32),
            (1, 2),
            (2, 1),
            (u32::MAX, 0),    // -1 vs 0 signed, max vs 0 unsigned
            (0x8000_0000, 1), // INT_MIN vs 1
            (5, 5),
        ];
        for (a, b) in cases {
            let f = CmpFlagSet::from_compare(a, b);
            assert_eq!(f.get(CmpFlag::Eq), !f.get(CmpFlag::Ne));
            assert_eq!(f.get(CmpFlag::Lt), !f.get(CmpFlag::Ge));
            assert_eq!(f.get(CmpFlag::Le), !f.get(CmpFlag::Gt));
            assert_eq!(f.get(CmpFlag::Ltu), !f.get(CmpFlag::Geu));
            assert_eq!(f.get(CmpFlag::Leu), !f.get(CmpFlag::Gtu));
        }
    }

    #[test]
    fn signed_and_unsigned_orderings_differ() {
        // -1 < 1 signed, but 0xFFFF_FFFF > 1 unsigned.
        let f = CmpFlagSet::from_compare(u32::MAX, 1);
        assert!(f.get(CmpFlag::Lt));
        assert!(f.get(CmpFlag::Gtu));
    }

    #[test]
    fn flag_codes_round_trip() {
        for flag in CmpFlag::ALL {
            assert_eq!(CmpFlag::from_code(flag.code()), Some(flag));
            assert_eq!(CmpFlag::parse(flag.name()), Some(flag));
            assert_eq!(CmpFlag::parse(&flag.name().to_lowercase()), Some(flag));
        }
        assert_eq!(CmpFlag::from_code(12), None);
        assert_eq!(CmpFlag::parse("XYZ"), None);
    }
}
