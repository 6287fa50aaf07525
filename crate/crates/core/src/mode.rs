//! ECB with PKCS#5/#7 padding, plus an unpadded pass-through for RC4.
//!
//! ECB leaks equal-plaintext-block structure. It is here because it is the
//! mode being benchmarked.

use crate::cipher::{with_block, BlockPrimitive, CipherError, CipherState};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModeError {
    #[error("block size {0} outside 1..=255")]
    BadBlockSize(usize),
    #[error("corrupt padding: {0}")]
    CorruptPadding(String),
    #[error("ciphertext length {len} is not a positive multiple of {block}")]
    WrongLength { len: usize, block: usize },
    #[error(transparent)]
    Cipher(#[from] CipherError),
}

/// Padded message: a positive multiple of the block size whose trailing
/// `p` bytes all equal `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaddedMessage {
    body: Vec<u8>,
    block_size_bytes: usize,
}

impl PaddedMessage {
    /// Wrap bytes that claim to be padded, checking the trailer.
    pub fn new(body: Vec<u8>, block_size_bytes: usize) -> Result<Self, ModeError> {
        check_block_size(block_size_bytes)?;
        if body.is_empty() || body.len() % block_size_bytes != 0 {
            return Err(ModeError::WrongLength { len: body.len(), block: block_size_bytes });
        }
        let msg = PaddedMessage { body, block_size_bytes };
        msg.pad_len()?;
        Ok(msg)
    }

    pub fn body(&self) -> &[u8] {
        &self.body
    }

    pub fn into_body(self) -> Vec<u8> {
        self.body
    }

    pub fn block_size_bytes(&self) -> usize {
        self.block_size_bytes
    }

    fn pad_len(&self) -> Result<usize, ModeError> {
        pad_len(&self.body, self.block_size_bytes)
    }
}

fn check_block_size(b: usize) -> Result<(), ModeError> {
    if (1..=255).contains(&b) {
        Ok(())
    } else {
        Err(ModeError::BadBlockSize(b))
    }
}

fn pad_len(body: &[u8], block: usize) -> Result<usize, ModeError> {
    let p = *body.last().ok_or_else(|| ModeError::CorruptPadding("empty message".into()))? as usize;
    if p == 0 || p > block || p > body.len() {
        return Err(ModeError::CorruptPadding(format!("pad byte {p} out of range 1..={block}")));
    }
    if body[body.len() - p..].iter().any(|&b| b as usize != p) {
        return Err(ModeError::CorruptPadding(format!("trailer is not {p} bytes of {p:#04x}")));
    }
    Ok(p)
}

pub fn pkcs_pad(data: &[u8], block_size_bytes: usize) -> Result<PaddedMessage, ModeError> {
    check_block_size(block_size_bytes)?;
    let p = block_size_bytes - data.len() % block_size_bytes;
    let mut body = Vec::with_capacity(data.len() + p);
    body.extend_from_slice(data);
    body.resize(data.len() + p, p as u8);
    Ok(PaddedMessage { body, block_size_bytes })
}

pub fn pkcs_unpad(msg: PaddedMessage) -> Result<Vec<u8>, ModeError> {
    let p = msg.pad_len()?;
    let mut body = msg.body;
    body.truncate(body.len() - p);
    Ok(body)
}

/// Output length of [`ecb_encrypt`] for a plaintext of `len` bytes.
pub fn ecb_output_len(state: &CipherState, len: usize) -> usize {
    match state.block_size_bytes() {
        Some(b) => (len / b + 1) * b,
        None => len,
    }
}

fn ecb_encrypt_with<P: BlockPrimitive>(p: &P, plaintext: &[u8], out: &mut Vec<u8>) {
    let b = P::BLOCK;
    let full = plaintext.len() / b * b;
    let pad = b - plaintext.len() % b;
    out.clear();
    out.reserve(full + b);
    out.extend_from_slice(plaintext);
    out.resize(full + b, pad as u8);
    p.encrypt_blocks(out);
}

fn ecb_decrypt_with<P: BlockPrimitive>(p: &P, ciphertext: &[u8]) -> Result<Vec<u8>, ModeError> {
    let b = P::BLOCK;
    if ciphertext.is_empty() || ciphertext.len() % b != 0 {
        return Err(ModeError::WrongLength { len: ciphertext.len(), block: b });
    }
    let mut out = ciphertext.to_vec();
    p.decrypt_blocks(&mut out);
    let pad = pad_len(&out, b)?;
    out.truncate(out.len() - pad);
    Ok(out)
}

/// Pad and encrypt into `out`, reusing its allocation.
///
/// RC4 states are advanced and the plaintext is passed through unpadded.
pub fn ecb_encrypt_into(
    state: &mut CipherState,
    plaintext: &[u8],
    out: &mut Vec<u8>,
) -> Result<(), ModeError> {
    if let CipherState::Rc4(rc4) = state {
        out.clear();
        out.resize(plaintext.len(), 0);
        rc4.apply_into(plaintext, out);
        return Ok(());
    }
    with_block!(&*state, p => ecb_encrypt_with(p, plaintext, out), rc4 => unreachable!());
    Ok(())
}

pub fn ecb_encrypt(state: &mut CipherState, plaintext: &[u8]) -> Result<Vec<u8>, ModeError> {
    let mut out = Vec::new();
    ecb_encrypt_into(state, plaintext, &mut out)?;
    Ok(out)
}

pub fn ecb_decrypt(state: &mut CipherState, ciphertext: &[u8]) -> Result<Vec<u8>, ModeError> {
    if let CipherState::Rc4(rc4) = state {
        let mut out = ciphertext.to_vec();
        rc4.apply_in_place(&mut out);
        return Ok(out);
    }
    with_block!(&*state, p => ecb_decrypt_with(p, ciphertext), rc4 => unreachable!())
}
