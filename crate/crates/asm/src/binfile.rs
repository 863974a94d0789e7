//! Program binary container. A 16-byte header — magic `EQSM`, format
//! version, the instantiation configuration hash, and the word count —
//! followed by the instruction words, all little endian. The embedded
//! hash makes decoding under a different configuration fail loudly
//! instead of producing garbage.

use thiserror::Error;

pub const MAGIC: [u8; 4] = *b"EQSM";
pub const FORMAT_VERSION: u32 = 1;
const HEADER_LEN: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BinError {
    #[error("not an eQASM binary (bad magic)")]
    BadMagic,
    #[error("unsupported binary format version {0}")]
    BadVersion(u32),
    #[error("binary was assembled under configuration {found:08x}, expected {expected:08x}")]
    ConfigHashMismatch { found: u32, expected: u32 },
    #[error("binary is truncated: header says {words} words, found {available} bytes of payload")]
    Truncated { words: u32, available: usize },
}

pub fn write_binary(words: &[u32], config_hash: u32) -> Vec<u8> {
    let mut bytes = Vec::with_capacity(HEADER_LEN + words.len() * 4);
    bytes.extend_from_slice(&MAGIC);
    bytes.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    bytes.extend_from_slice(&config_hash.to_le_bytes());
    bytes.extend_from_slice(&(words.len() as u32).to_le_bytes());
    for w in words {
        bytes.extend_from_slice(&w.to_le_bytes());
    }
    bytes
}

pub fn read_binary(bytes: &[u8], expected_hash: u32) -> Result<Vec<u32>, BinError> {
    if bytes.len() < HEADER_LEN || bytes[..4] != MAGIC {
        return Err(BinError::BadMagic);
    }
    let le32 = |offset: usize| {
        u32::from_le_bytes([
            bytes[offset],
            bytes[offset + 1],
            bytes[offset + 2],
            bytes[offset + 3],
        ])
    };
    let version = le32(4);
    if version != FORMAT_VERSION {
        return Err(BinError::BadVersion(version));
    }
    let found = le32(8);
    if found != expected_hash {
        return Err(BinError::ConfigHashMismatch {
            found,
            expected: expected_hash,
        });
    }
    let words = le32(12);
    let available = bytes.len() - HEADER_LEN;
    if available != words as usize * 4 {
        return Err(BinError::Truncated { words, available });
    }
    Ok((0..words as usize)
        .map(|i| le32(HEADER_LEN + i * 4))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let words = vec![0x8000_0001, 0x1234_5678, 0];
        let bytes = write_binary(&words, 0xdead_beef);
        assert_eq!(read_binary(&bytes, 0xdead_beef).unwrap(), words);
    }

    #[test]
    fn config_hash_is_enforced() {
        let bytes = write_binary(&[1], 0xaaaa_0000);
        assert_eq!(
            read_binary(&bytes, 0xbbbb_0000),
            Err(BinError::ConfigHashMismatch {
                found: 0xaaaa_0000,
                expected: 0xbbbb_0000
            })
        );
    }

    #[test]
    fn corruption_is_detected() {
        assert_eq!(read_binary(b"not a binary", 0), Err(BinError::BadMagic));
        let mut bytes = write_binary(&[1, 2], 0);
        bytes.truncate(bytes.len() - 4);
        assert!(matches!(
            read_binary(&bytes, 0),
            Err(BinError::Truncated { .. })
        ));
        let mut bytes = write_binary(&[1], 0);
        bytes[4] = 9;
        assert_eq!(read_binary(&bytes, 0), Err(BinError::BadVersion(9)));
    }
}
