//! Static metadata for the seven supported algorithms.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Identifier of a supported cipher.
///
/// The derived ordering is the lexicographic order of the canonical names,
/// which the selector uses as its final tie-break.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum CipherId {
    Aes,
    Blowfish,
    Des,
    Rc2,
    Rc4,
    Skipjack,
    Tdes,
}

impl CipherId {
    /// All identifiers, in registry (table) order.
    pub const ALL: [CipherId; 7] = [
        CipherId::Aes,
        CipherId::Des,
        CipherId::Tdes,
        CipherId::Rc2,
        CipherId::Blowfish,
        CipherId::Skipjack,
        CipherId::Rc4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CipherId::Aes => "AES",
            CipherId::Des => "DES",
            CipherId::Tdes => "TDES",
            CipherId::Rc2 => "RC2",
            CipherId::Blowfish => "BLOWFISH",
            CipherId::Skipjack => "SKIPJACK",
            CipherId::Rc4 => "RC4",
        }
    }

    pub fn info(self) -> CipherInfo {
        info(self)
    }
}

impl fmt::Display for CipherId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown cipher `{0}`")]
pub struct UnknownCipher(pub String);

impl FromStr for CipherId {
    type Err = UnknownCipher;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm: String = s
            .chars()
            .filter(|c| !matches!(c, '-' | '_' | ' '))
            .collect::<String>()
            .to_ascii_uppercase();
        Ok(match norm.as_str() {
            "AES" => CipherId::Aes,
            "DES" => CipherId::Des,
            "TDES" | "3DES" | "TRIPLEDES" | "DESEDE" => CipherId::Tdes,
            "RC2" => CipherId::Rc2,
            "BLOWFISH" => CipherId::Blowfish,
            "SKIPJACK" => CipherId::Skipjack,
            "RC4" | "ARC4" | "ARCFOUR" => CipherId::Rc4,
            _ => return Err(UnknownCipher(s.to_string())),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CipherType {
    Block,
    Stream,
}

impl fmt::Display for CipherType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CipherType::Block => "block",
            CipherType::Stream => "stream",
        })
    }
}

/// Supported key lengths in (effective) bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeySizes {
    Fixed(&'static [u32]),
    /// Inclusive range with a step.
    Range { min: u32, max: u32, step: u32 },
}

impl KeySizes {
    pub fn contains(&self, bits: u32) -> bool {
        match *self {
            KeySizes::Fixed(set) => set.contains(&bits),
            KeySizes::Range { min, max, step } => {
                bits >= min && bits <= max && (bits - min) % step == 0
            }
        }
    }

    pub fn min(&self) -> u32 {
        match *self {
            KeySizes::Fixed(set) => set.iter().copied().min().unwrap_or(0),
            KeySizes::Range { min, .. } => min,
        }
    }

    pub fn max(&self) -> u32 {
        match *self {
            KeySizes::Fixed(set) => set.iter().copied().max().unwrap_or(0),
            KeySizes::Range { max, .. } => max,
        }
    }

    /// Representative sizes: every fixed size, or min / 128 / max of a range.
    pub fn classes(&self) -> Vec<u32> {
        match *self {
            KeySizes::Fixed(set) => set.to_vec(),
            KeySizes::Range { min, max, .. } => {
                let mut v = vec![min];
                if self.contains(128) && min < 128 && 128 < max {
                    v.push(128);
                }
                v.push(max);
                v
            }
        }
    }

    pub fn iter(&self) -> Box<dyn Iterator<Item = u32>> {
        match *self {
            KeySizes::Fixed(set) => Box::new(set.iter().copied()),
            KeySizes::Range { min, max, step } => Box::new((min..=max).step_by(step as usize)),
        }
    }
}

impl fmt::Display for KeySizes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            KeySizes::Fixed(set) => {
                let parts: Vec<String> = set.iter().map(u32::to_string).collect();
                f.write_str(&parts.join(", "))
            }
            KeySizes::Range { min, max, .. } => write!(f, "{min} to {max}"),
        }
    }
}

/// One registry row: structure, type, rounds and key sizes of an algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CipherInfo {
    pub id: CipherId,
    pub structure: &'static str,
    pub cipher_type: CipherType,
    /// 0 for the stream cipher.
    pub block_size_bits: u32,
    /// Round counts; AES lists one per key size. For RC4 this is the number
    /// of key-scheduling iterations.
    pub rounds: &'static [u32],
    pub key_sizes_bits: KeySizes,
}

impl CipherInfo {
    pub fn block_size_bytes(&self) -> usize {
        (self.block_size_bits / 8) as usize
    }

    pub fn min_key_bits(&self) -> u32 {
        self.key_sizes_bits.min()
    }

    pub fn max_key_bits(&self) -> u32 {
        self.key_sizes_bits.max()
    }
}

pub fn info(id: CipherId) -> CipherInfo {
    match id {
        CipherId::Aes => CipherInfo {
            id,
            structure: "Substitution-permutation network",
            cipher_type: CipherType::Block,
            block_size_bits: 128,
            rounds: &[10, 12, 14],
            key_sizes_bits: KeySizes::Fixed(&[128, 192, 256]),
        },
        CipherId::Des => CipherInfo {
            id,
            structure: "Balanced Feistel network",
            cipher_type: CipherType::Block,
            block_size_bits: 64,
            rounds: &[16],
            key_sizes_bits: KeySizes::Fixed(&[56]),
        },
        CipherId::Tdes => CipherInfo {
            id,
            structure: "Feistel network",
            cipher_type: CipherType::Block,
            block_size_bits: 64,
            rounds: &[48],
            key_sizes_bits: KeySizes::Fixed(&[112, 168]),
        },
        CipherId::Rc2 => CipherInfo {
            id,
            structure: "Source-heavy Feistel network",
            cipher_type: CipherType::Block,
            block_size_bits: 64,
            rounds: &[18],
            key_sizes_bits: KeySizes::Range { min: 40, max: 1024, step: 8 },
        },
        CipherId::Blowfish => CipherInfo {
            id,
            structure: "Feistel network",
            cipher_type: CipherType::Block,
            block_size_bits: 64,
            rounds: &[16],
            key_sizes_bits: KeySizes::Range { min: 32, max: 448, step: 8 },
        },
        CipherId::Skipjack => CipherInfo {
            id,
            structure: "Unbalanced Feistel network",
            cipher_type: CipherType::Block,
            block_size_bits: 64,
            rounds: &[32],
            key_sizes_bits: KeySizes::Fixed(&[80]),
        },
        CipherId::Rc4 => CipherInfo {
            id,
            structure: "----",
            cipher_type: CipherType::Stream,
            block_size_bits: 0,
            rounds: &[256],
            key_sizes_bits: KeySizes::Range { min: 40, max: 2048, step: 8 },
        },
    }
}

/// The full registry in table order.
pub fn registry() -> Vec<CipherInfo> {
    CipherId::ALL.iter().map(|&id| info(id)).collect()
}
