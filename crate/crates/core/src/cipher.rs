//! Keyed cipher states behind one block/stream interface.
//!
//! None of these implementations are constant time. They exist to be
//! measured and compared, not to protect data.

use rand::RngCore;

use crate::ciphers::{Aes, Blowfish, Des, Rc2, Rc4, Skipjack, TripleDes};
use crate::registry::{info, CipherId, CipherType};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CipherError {
    #[error("{cipher} does not support {key_bits}-bit keys (supported: {supported})")]
    UnsupportedKeySize { cipher: CipherId, key_bits: u32, supported: String },
    #[error("malformed {cipher} key: {reason}")]
    MalformedKey { cipher: CipherId, reason: String },
    #[error("{cipher} expects {expected}-byte blocks, got {actual}")]
    WrongBlockLength { cipher: CipherId, expected: usize, actual: usize },
    #[error("block operation requested on the stream cipher state")]
    StreamCipherMisuse,
    #[error("stream operation requested on a {0} block cipher state")]
    BlockCipherMisuse(CipherId),
}

/// Raw key bytes tagged with the cipher and the effective key length.
///
/// DES and TDES keys carry parity bits: 8, 16 and 24 byte keys have 56, 112
/// and 168 effective bits respectively. Every other cipher uses
/// `8 * key_bytes.len()`.
#[derive(Clone, PartialEq, Eq)]
pub struct KeyMaterial {
    cipher: CipherId,
    key_bytes: Vec<u8>,
    key_bits: u32,
}

impl std::fmt::Debug for KeyMaterial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("KeyMaterial")
            .field("cipher", &self.cipher)
            .field("key_bits", &self.key_bits)
            .finish_non_exhaustive()
    }
}

/// Number of key bytes that encode `key_bits` effective bits for `cipher`.
pub fn key_len_for_bits(cipher: CipherId, key_bits: u32) -> Option<usize> {
    match (cipher, key_bits) {
        (CipherId::Des, 56) => Some(8),
        (CipherId::Tdes, 112) => Some(16),
        (CipherId::Tdes, 168) => Some(24),
        (CipherId::Des | CipherId::Tdes, _) => None,
        (_, bits) if bits % 8 == 0 => Some(bits as usize / 8),
        _ => None,
    }
}

fn effective_bits(cipher: CipherId, len: usize) -> Result<u32, CipherError> {
    match cipher {
        CipherId::Des => match len {
            8 => Ok(56),
            _ => Err(CipherError::MalformedKey {
                cipher,
                reason: format!("expected 8 bytes (56 bits + parity), got {len}"),
            }),
        },
        CipherId::Tdes => match len {
            16 => Ok(112),
            24 => Ok(168),
            _ => Err(CipherError::MalformedKey {
                cipher,
                reason: format!("expected 16 or 24 bytes, got {len}"),
            }),
        },
        _ => Ok((8 * len) as u32),
    }
}

impl KeyMaterial {
    /// Key bits are inferred from the byte length.
    pub fn new(cipher: CipherId, key_bytes: impl Into<Vec<u8>>) -> Result<Self, CipherError> {
        let key_bytes = key_bytes.into();
        let key_bits = effective_bits(cipher, key_bytes.len())?;
        Self::check_supported(cipher, key_bits)?;
        Ok(KeyMaterial { cipher, key_bytes, key_bits })
    }

    /// Explicit key bits; the byte length must agree with them.
    pub fn with_bits(
        cipher: CipherId,
        key_bytes: impl Into<Vec<u8>>,
        key_bits: u32,
    ) -> Result<Self, CipherError> {
        let key_bytes = key_bytes.into();
        Self::check_supported(cipher, key_bits)?;
        let expected = key_len_for_bits(cipher, key_bits);
        if expected != Some(key_bytes.len()) {
            return Err(CipherError::MalformedKey {
                cipher,
                reason: format!(
                    "{} bytes do not encode a {key_bits}-bit key",
                    key_bytes.len()
                ),
            });
        }
        Ok(KeyMaterial { cipher, key_bytes, key_bits })
    }

    /// Uniformly random key of the given effective size.
    pub fn random<R: RngCore + ?Sized>(
        cipher: CipherId,
        key_bits: u32,
        rng: &mut R,
    ) -> Result<Self, CipherError> {
        Self::check_supported(cipher, key_bits)?;
        let len = key_len_for_bits(cipher, key_bits).ok_or_else(|| CipherError::MalformedKey {
            cipher,
            reason: format!("{key_bits} bits is not a whole number of bytes"),
        })?;
        let mut key_bytes = vec![0u8; len];
        rng.fill_bytes(&mut key_bytes);
        Ok(KeyMaterial { cipher, key_bytes, key_bits })
    }

    fn check_supported(cipher: CipherId, key_bits: u32) -> Result<(), CipherError> {
        let sizes = info(cipher).key_sizes_bits;
        if sizes.contains(key_bits) {
            Ok(())
        } else {
            Err(CipherError::UnsupportedKeySize { cipher, key_bits, supported: sizes.to_string() })
        }
    }

    pub fn cipher(&self) -> CipherId {
        self.cipher
    }

    pub fn key_bytes(&self) -> &[u8] {
        &self.key_bytes
    }

    pub fn key_bits(&self) -> u32 {
        self.key_bits
    }
}

/// Post-key-schedule state.
///
/// Block variants are immutable once built; the RC4 variant advances as
/// keystream is consumed and must not be shared between callers.
#[derive(Debug, Clone)]
pub enum CipherState {
    Aes(Aes),
    Des(Des),
    Tdes(TripleDes),
    Rc2(Rc2),
    Blowfish(Blowfish),
    Skipjack(Skipjack),
    Rc4(Rc4),
}

/// Common shape of the block primitives, used to monomorphise mode loops.
pub(crate) trait BlockPrimitive {
    const BLOCK: usize;
    fn encrypt(&self, block: &mut [u8]);
    fn decrypt(&self, block: &mut [u8]);

    /// Whole blocks in sequence; `data.len()` is a multiple of `BLOCK`.
    #[inline(always)]
    fn encrypt_blocks(&self, data: &mut [u8]) {
        for b in data.chunks_exact_mut(Self::BLOCK) {
            self.encrypt(b);
        }
    }

    #[inline(always)]
    fn decrypt_blocks(&self, data: &mut [u8]) {
        for b in data.chunks_exact_mut(Self::BLOCK) {
            self.decrypt(b);
        }
    }
}

macro_rules! block_primitive {
    ($($t:ty),*) => {$(
        impl BlockPrimitive for $t {
            const BLOCK: usize = <$t>::BLOCK_BYTES;
            #[inline(always)]
            fn encrypt(&self, block: &mut [u8]) { self.encrypt_block(block) }
            #[inline(always)]
            fn decrypt(&self, block: &mut [u8]) { self.decrypt_block(block) }
        }
    )*};
}

block_primitive!(Aes, Des, TripleDes, Rc2, Blowfish);

impl BlockPrimitive for Skipjack {
    const BLOCK: usize = Skipjack::BLOCK_BYTES;
    #[inline(always)]
    fn encrypt(&self, block: &mut [u8]) {
        self.encrypt_block(block)
    }
    #[inline(always)]
    fn decrypt(&self, block: &mut [u8]) {
        self.decrypt_block(block)
    }
    fn encrypt_blocks(&self, data: &mut [u8]) {
        Skipjack::encrypt_blocks(self, data)
    }
    fn decrypt_blocks(&self, data: &mut [u8]) {
        Skipjack::decrypt_blocks(self, data)
    }
}

/// Dispatch a generic closure over the block primitive inside a state.
macro_rules! with_block {
    ($state:expr, $p:ident => $body:expr, rc4 => $rc4:expr) => {
        match $state {
            CipherState::Aes($p) => $body,
            CipherState::Des($p) => $body,
            CipherState::Tdes($p) => $body,
            CipherState::Rc2($p) => $body,
            CipherState::Blowfish($p) => $body,
            CipherState::Skipjack($p) => $body,
            CipherState::Rc4(_) => $rc4,
        }
    };
}
pub(crate) use with_block;

/// Run the key schedule for `key`.
pub fn make_cipher_state(key: &KeyMaterial) -> Result<CipherState, CipherError> {
    let k = key.key_bytes.as_slice();
    Ok(match key.cipher {
        CipherId::Aes => CipherState::Aes(Aes::new(k)),
        CipherId::Des => CipherState::Des(Des::new(k.try_into().expect("validated length"))),
        CipherId::Tdes => CipherState::Tdes(TripleDes::new(k)),
        // Effective key length equals the supplied key length.
        CipherId::Rc2 => CipherState::Rc2(Rc2::new(k, key.key_bits as usize)),
        CipherId::Blowfish => CipherState::Blowfish(Blowfish::new(k)),
        CipherId::Skipjack => {
            CipherState::Skipjack(Skipjack::new(k.try_into().expect("validated length")))
        }
        CipherId::Rc4 => CipherState::Rc4(Rc4::new(k)),
    })
}

impl CipherState {
    pub fn new(key: &KeyMaterial) -> Result<Self, CipherError> {
        make_cipher_state(key)
    }

    pub fn cipher(&self) -> CipherId {
        match self {
            CipherState::Aes(_) => CipherId::Aes,
            CipherState::Des(_) => CipherId::Des,
            CipherState::Tdes(_) => CipherId::Tdes,
            CipherState::Rc2(_) => CipherId::Rc2,
            CipherState::Blowfish(_) => CipherId::Blowfish,
            CipherState::Skipjack(_) => CipherId::Skipjack,
            CipherState::Rc4(_) => CipherId::Rc4,
        }
    }

    pub fn cipher_type(&self) -> CipherType {
        info(self.cipher()).cipher_type
    }

    /// `None` for the stream cipher.
    pub fn block_size_bytes(&self) -> Option<usize> {
        with_block!(self, p => Some(block_len(p)), rc4 => None)
    }

    fn check_block(&self, len: usize) -> Result<(), CipherError> {
        match self.block_size_bytes() {
            None => Err(CipherError::StreamCipherMisuse),
            Some(b) if b != len => Err(CipherError::WrongBlockLength {
                cipher: self.cipher(),
                expected: b,
                actual: len,
            }),
            Some(_) => Ok(()),
        }
    }

    pub fn encrypt_block_in_place(&self, block: &mut [u8]) -> Result<(), CipherError> {
        self.check_block(block.len())?;
        with_block!(self, p => p.encrypt(block), rc4 => unreachable!());
        Ok(())
    }

    pub fn decrypt_block_in_place(&self, block: &mut [u8]) -> Result<(), CipherError> {
        self.check_block(block.len())?;
        with_block!(self, p => p.decrypt(block), rc4 => unreachable!());
        Ok(())
    }

    pub fn encrypt_block(&self, block: &[u8]) -> Result<Vec<u8>, CipherError> {
        let mut out = block.to_vec();
        self.encrypt_block_in_place(&mut out)?;
        Ok(out)
    }

    pub fn decrypt_block(&self, block: &[u8]) -> Result<Vec<u8>, CipherError> {
        let mut out = block.to_vec();
        self.decrypt_block_in_place(&mut out)?;
        Ok(out)
    }

    /// XOR keystream into `data` and advance the state.
    pub fn rc4_apply_in_place(&mut self, data: &mut [u8]) -> Result<(), CipherError> {
        match self {
            CipherState::Rc4(rc4) => {
                rc4.apply_in_place(data);
                Ok(())
            }
            other => Err(CipherError::BlockCipherMisuse(other.cipher())),
        }
    }

    pub fn rc4_apply(&mut self, data: &[u8]) -> Result<Vec<u8>, CipherError> {
        let mut out = data.to_vec();
        self.rc4_apply_in_place(&mut out)?;
        Ok(out)
    }

    pub fn as_rc4(&self) -> Option<&Rc4> {
        match self {
            CipherState::Rc4(r) => Some(r),
            _ => None,
        }
    }
}

fn block_len<P: BlockPrimitive>(_: &P) -> usize {
    P::BLOCK
}

pub fn encrypt_block(state: &CipherState, block: &[u8]) -> Result<Vec<u8>, CipherError> {
    state.encrypt_block(block)
}

pub fn decrypt_block(state: &CipherState, block: &[u8]) -> Result<Vec<u8>, CipherError> {
    state.decrypt_block(block)
}

pub fn rc4_apply(state: &mut CipherState, data: &[u8]) -> Result<Vec<u8>, CipherError> {
    state.rc4_apply(data)
}
