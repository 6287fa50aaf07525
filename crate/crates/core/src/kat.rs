//! Known-answer vectors for every cipher.
//!
//! Vectors come from the algorithms' standards documents and widely
//! published references; each one was cross-checked against an independent
//! implementation (see `tests/oracles/kat_oracle.py`) before being frozen.
//! Vectors whose key is outside the registry range (short RC4 keys, RC2
//! with a reduced effective length) exercise the raw primitive directly.

use crate::cipher::{make_cipher_state, KeyMaterial};
use crate::ciphers::{Rc2, Rc4};
use crate::mode::ecb_encrypt;
use crate::registry::CipherId;

#[derive(Debug, Clone, Copy)]
pub enum KatPath {
    /// KeyMaterial + CipherState: checks encrypt and decrypt.
    Registry,
    /// RC2 primitive with an explicit effective key length in bits.
    Rc2Effective(usize),
    /// RC4 primitive with a key shorter than the registry minimum.
    Rc4Raw,
}

#[derive(Debug, Clone, Copy)]
pub struct KatVector {
    pub name: &'static str,
    pub cipher: CipherId,
    pub key: &'static str,
    pub plaintext: &'static str,
    pub ciphertext: &'static str,
    pub path: KatPath,
}

const fn v(
    name: &'static str,
    cipher: CipherId,
    key: &'static str,
    plaintext: &'static str,
    ciphertext: &'static str,
    path: KatPath,
) -> KatVector {
    KatVector { name, cipher, key, plaintext, ciphertext, path }
}

use CipherId::*;
use KatPath::*;

#[rustfmt::skip]
pub const VECTORS: &[KatVector] = &[
    v("AES-128 FIPS-197 C.1", Aes, "000102030405060708090a0b0c0d0e0f",
      "00112233445566778899aabbccddeeff", "69c4e0d86a7b0430d8cdb78070b4c55a", Registry),
    v("AES-192 FIPS-197 C.2", Aes, "000102030405060708090a0b0c0d0e0f1011121314151617",
      "00112233445566778899aabbccddeeff", "dda97ca4864cdfe06eaf70a0ec0d7191", Registry),
    v("AES-256 FIPS-197 C.3", Aes, "000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f",
      "00112233445566778899aabbccddeeff", "8ea2b7ca516745bfeafc49904b496089", Registry),
    v("DES worked example", Des, "133457799bbcdff1", "0123456789abcdef", "85e813540f0ab405", Registry),
    v("DES zero-output pair", Des, "0e329232ea6d0d73", "8787878787878787", "0000000000000000", Registry),
    v("TDES-168 SP 800-67 first block", Tdes, "0123456789abcdef23456789abcdef01456789abcdef0123",
      "5468652071756663", "a826fd8ce53b855f", Registry),
    v("TDES-168 three-key", Tdes, "0123456789abcdef23456789abcdef01456789abcdef0123",
      "5468652071756963", "1ccf23869d09333e", Registry),
    v("TDES-112 two-key", Tdes, "0123456789abcdef23456789abcdef01",
      "0123456789abcdef", "a6bb373e196b375e", Registry),
    v("RC2 RFC 2268 #1 (eff 63)", Rc2, "0000000000000000", "0000000000000000", "ebb773f993278eff", Rc2Effective(63)),
    v("RC2 RFC 2268 #2", Rc2, "ffffffffffffffff", "ffffffffffffffff", "278b27e42e2f0d49", Registry),
    v("RC2 RFC 2268 #3", Rc2, "3000000000000000", "1000000000000001", "30649edf9be7d2c2", Registry),
    v("RC2 RFC 2268 #4 (1-byte key)", Rc2, "88", "0000000000000000", "61a8a244adacccf0", Rc2Effective(64)),
    v("RC2 RFC 2268 #5 (7-byte key)", Rc2, "88bca90e90875a", "0000000000000000", "6ccf4308974c267f", Rc2Effective(64)),
    v("RC2 RFC 2268 #6 (eff 64)", Rc2, "88bca90e90875a7f0f79c384627bafb2", "0000000000000000",
      "1a807d272bbe5db1", Rc2Effective(64)),
    v("RC2 RFC 2268 #7", Rc2, "88bca90e90875a7f0f79c384627bafb2", "0000000000000000", "2269552ab0f85ca6", Registry),
    v("RC2 RFC 2268 #8 (eff 129)", Rc2,
      "88bca90e90875a7f0f79c384627bafb216f80a6f85920584c42fceb0be255daf1e",
      "0000000000000000", "5b78d3a43dfff1f1", Rc2Effective(129)),
    v("Blowfish zero key", Blowfish, "0000000000000000", "0000000000000000", "4ef997456198dd78", Registry),
    v("Blowfish ones key", Blowfish, "ffffffffffffffff", "ffffffffffffffff", "51866fd5b85ecb8a", Registry),
    v("Blowfish 3000 key", Blowfish, "3000000000000000", "1000000000000001", "7d856f9a613063f2", Registry),
    v("Blowfish 0123 key", Blowfish, "0123456789abcdef", "1111111111111111", "61f9c3802281b096", Registry),
    v("Blowfish fedc key", Blowfish, "fedcba9876543210", "0123456789abcdef", "0aceab0fc6a0a28d", Registry),
    v("Skipjack declassified spec", Skipjack, "00998877665544332211", "33221100ddccbbaa", "2587cae27a12d300", Registry),
    v("RC4 Key/Plaintext", Rc4, "4b6579", "506c61696e74657874", "bbf316e8d940af0ad3", Rc4Raw),
    v("RC4 Wiki/pedia", Rc4, "57696b69", "7065646961", "1021bf0420", Rc4Raw),
    v("RC4 Secret/Attack at dawn", Rc4, "536563726574", "41747461636b206174206461776e",
      "45a01f645fc35b383552544b9bf5", Registry),
    v("RC4 RFC 6229 40-bit keystream", Rc4, "0102030405", "00000000000000000000000000000000",
      "b2396305f03dc027ccc3524a0a1118a8", Registry),
    v("RC4 RFC 6229 128-bit keystream", Rc4, "0102030405060708090a0b0c0d0e0f10",
      "00000000000000000000000000000000", "9ac7cc9a609d1ef7b2932899cde41b97", Registry),
];

#[derive(Debug, Clone)]
pub struct KatResult {
    pub name: &'static str,
    pub cipher: CipherId,
    pub passed: bool,
    pub detail: String,
}

pub fn decode_hex(s: &str) -> Result<Vec<u8>, String> {
    let s = s.trim();
    if s.len() % 2 != 0 {
        return Err(format!("odd-length hex string ({} digits)", s.len()));
    }
    (0..s.len())
        .step_by(2)
        .map(|i| {
            u8::from_str_radix(&s[i..i + 2], 16).map_err(|_| format!("invalid hex at offset {i}"))
        })
        .collect()
}

pub fn encode_hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn run_one(vec: &KatVector) -> Result<(), String> {
    let key = decode_hex(vec.key)?;
    let pt = decode_hex(vec.plaintext)?;
    let want = decode_hex(vec.ciphertext)?;
    match vec.path {
        Registry => {
            let km = KeyMaterial::new(vec.cipher, key).map_err(|e| e.to_string())?;
            let mut state = make_cipher_state(&km).map_err(|e| e.to_string())?;
            if state.block_size_bytes().is_some() {
                let ct = state.encrypt_block(&pt).map_err(|e| e.to_string())?;
                if ct != want {
                    return Err(format!("encrypt gave {}", encode_hex(&ct)));
                }
                let back = state.decrypt_block(&ct).map_err(|e| e.to_string())?;
                if back != pt {
                    return Err(format!("decrypt gave {}", encode_hex(&back)));
                }
            } else {
                let ct = ecb_encrypt(&mut state, &pt).map_err(|e| e.to_string())?;
                if ct != want {
                    return Err(format!("keystream XOR gave {}", encode_hex(&ct)));
                }
            }
        }
        Rc2Effective(bits) => {
            let rc2 = Rc2::new(&key, bits);
            let mut block = pt.clone();
            rc2.encrypt_block(&mut block);
            if block != want {
                return Err(format!("encrypt gave {}", encode_hex(&block)));
            }
            rc2.decrypt_block(&mut block);
            if block != pt {
                return Err(format!("decrypt gave {}", encode_hex(&block)));
            }
        }
        Rc4Raw => {
            let mut data = pt.clone();
            Rc4::new(&key).apply_in_place(&mut data);
            if data != want {
                return Err(format!("keystream XOR gave {}", encode_hex(&data)));
            }
        }
    }
    Ok(())
}

pub fn run_kats() -> Vec<KatResult> {
    VECTORS
        .iter()
        .map(|vec| match run_one(vec) {
            Ok(()) => KatResult { name: vec.name, cipher: vec.cipher, passed: true, detail: String::new() },
            Err(detail) => KatResult { name: vec.name, cipher: vec.cipher, passed: false, detail },
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_cipher_has_a_registry_vector() {
        for id in CipherId::ALL {
            assert!(
                VECTORS.iter().any(|v| v.cipher == id && matches!(v.path, Registry)),
                "{id}"
            );
        }
    }

    #[test]
    fn all_vectors_pass() {
        for r in run_kats() {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
    }

    #[test]
    fn hex_helpers() {
        assert_eq!(decode_hex("00ff10").unwrap(), vec![0, 255, 16]);
        assert!(decode_hex("abc").is_err());
        assert!(decode_hex("zz").is_err());
        assert_eq!(encode_hex(&[0xde, 0xad]), "dead");
    }
}
