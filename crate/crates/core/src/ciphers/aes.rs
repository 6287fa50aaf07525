//! AES (Rijndael with a 128-bit block) for 128, 192 and 256-bit keys.
//!
//! Table-driven: the four encryption and four decryption round tables are
//! derived from the S-box at compile time. Not constant time.

#[rustfmt::skip]
const SBOX: [u8; 256] = [
    0x63, 0x7c, 0x77, 0x7b, 0xf2, 0x6b, 0x6f, 0xc5, 0x30, 0x01, 0x67, 0x2b, 0xfe, 0xd7, 0xab, 0x76,
    0xca, 0x82, 0xc9, 0x7d, 0xfa, 0x59, 0x47, 0xf0, 0xad, 0xd4, 0xa2, 0xaf, 0x9c, 0xa4, 0x72, 0xc0,
    0xb7, 0xfd, 0x93, 0x26, 0x36, 0x3f, 0xf7, 0xcc, 0x34, 0xa5, 0xe5, 0xf1, 0x71, 0xd8, 0x31, 0x15,
    0x04, 0xc7, 0x23, 0xc3, 0x18, 0x96, 0x05, 0x9a, 0x07, 0x12, 0x80, 0xe2, 0xeb, 0x27, 0xb2, 0x75,
    0x09, 0x83, 0x2c, 0x1a, 0x1b, 0x6e, 0x5a, 0xa0, 0x52, 0x3b, 0xd6, 0xb3, 0x29, 0xe3, 0x2f, 0x84,
    0x53, 0xd1, 0x00, 0xed, 0x20, 0xfc, 0xb1, 0x5b, 0x6a, 0xcb, 0xbe, 0x39, 0x4a, 0x4c, 0x58, 0xcf,
    0xd0, 0xef, 0xaa, 0xfb, 0x43, 0x4d, 0x33, 0x85, 0x45, 0xf9, 0x02, 0x7f, 0x50, 0x3c, 0x9f, 0xa8,
    0x51, 0xa3, 0x40, 0x8f, 0x92, 0x9d, 0x38, 0xf5, 0xbc, 0xb6, 0xda, 0x21, 0x10, 0xff, 0xf3, 0xd2,
    0xcd, 0x0c, 0x13, 0xec, 0x5f, 0x97, 0x44, 0x17, 0xc4, 0xa7, 0x7e, 0x3d, 0x64, 0x5d, 0x19, 0x73,
    0x60, 0x81, 0x4f, 0xdc, 0x22, 0x2a, 0x90, 0x88, 0x46, 0xee, 0xb8, 0x14, 0xde, 0x5e, 0x0b, 0xdb,
    0xe0, 0x32, 0x3a, 0x0a, 0x49, 0x06, 0x24, 0x5c, 0xc2, 0xd3, 0xac, 0x62, 0x91, 0x95, 0xe4, 0x79,
    0xe7, 0xc8, 0x37, 0x6d, 0x8d, 0xd5, 0x4e, 0xa9, 0x6c, 0x56, 0xf4, 0xea, 0x65, 0x7a, 0xae, 0x08,
    0xba, 0x78, 0x25, 0x2e, 0x1c, 0xa6, 0xb4, 0xc6, 0xe8, 0xdd, 0x74, 0x1f, 0x4b, 0xbd, 0x8b, 0x8a,
    0x70, 0x3e, 0xb5, 0x66, 0x48, 0x03, 0xf6, 0x0e, 0x61, 0x35, 0x57, 0xb9, 0x86, 0xc1, 0x1d, 0x9e,
    0xe1, 0xf8, 0x98, 0x11, 0x69, 0xd9, 0x8e, 0x94, 0x9b, 0x1e, 0x87, 0xe9, 0xce, 0x55, 0x28, 0xdf,
    0x8c, 0xa1, 0x89, 0x0d, 0xbf, 0xe6, 0x42, 0x68, 0x41, 0x99, 0x2d, 0x0f, 0xb0, 0x54, 0xbb, 0x16,
];

const fn inv_sbox() -> [u8; 256] {
    let mut inv = [0u8; 256];
    let mut i = 0;
    while i < 256 {
        inv[SBOX[i] as usize] = i as u8;
        i += 1;
    }
    inv
}

const INV_SBOX: [u8; 256] = inv_sbox();

const fn xtime(x: u8) -> u8 {
    (x << 1) ^ if x & 0x80 != 0 { 0x1b } else { 0 }
}

const fn gmul(mut a: u8, mut b: u8) -> u8 {
    let mut p = 0u8;
    while b != 0 {
        if b & 1 != 0 {
            p ^= a;
        }
        a = xtime(a);
        b >>= 1;
    }
    p
}

const fn enc_tables() -> [[u32; 256]; 4] {
    let mut t = [[0u32; 256]; 4];
    let mut i = 0;
    while i < 256 {
        let s = SBOX[i];
        let w = (gmul(s, 2) as u32) << 24 | (s as u32) << 16 | (s as u32) << 8 | gmul(s, 3) as u32;
        t[0][i] = w;
        t[1][i] = w.rotate_right(8);
        t[2][i] = w.rotate_right(16);
        t[3][i] = w.rotate_right(24);
        i += 1;
    }
    t
}

const fn dec_tables() -> [[u32; 256]; 4] {
    let mut t = [[0u32; 256]; 4];
    let mut i = 0;
    while i < 256 {
        let s = INV_SBOX[i];
        let w = (gmul(s, 14) as u32) << 24
            | (gmul(s, 9) as u32) << 16
            | (gmul(s, 13) as u32) << 8
            | gmul(s, 11) as u32;
        t[0][i] = w;
        t[1][i] = w.rotate_right(8);
        t[2][i] = w.rotate_right(16);
        t[3][i] = w.rotate_right(24);
        i += 1;
    }
    t
}

static TE: [[u32; 256]; 4] = enc_tables();
static TD: [[u32; 256]; 4] = dec_tables();

const RCON: [u32; 10] = [
    0x0100_0000, 0x0200_0000, 0x0400_0000, 0x0800_0000, 0x1000_0000, 0x2000_0000, 0x4000_0000,
    0x8000_0000, 0x1b00_0000, 0x3600_0000,
];

fn sub_word(w: u32) -> u32 {
    let b = w.to_be_bytes();
    u32::from_be_bytes([
        SBOX[b[0] as usize],
        SBOX[b[1] as usize],
        SBOX[b[2] as usize],
        SBOX[b[3] as usize],
    ])
}

fn inv_mix_column(w: u32) -> u32 {
    // TD already includes InvSubBytes, so undo it with the forward S-box.
    let b = w.to_be_bytes();
    TD[0][SBOX[b[0] as usize] as usize]
        ^ TD[1][SBOX[b[1] as usize] as usize]
        ^ TD[2][SBOX[b[2] as usize] as usize]
        ^ TD[3][SBOX[b[3] as usize] as usize]
}

#[derive(Clone)]
pub struct Aes {
    rounds: usize,
    enc: Vec<u32>,
    dec: Vec<u32>,
}

impl std::fmt::Debug for Aes {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Aes").field("rounds", &self.rounds).finish_non_exhaustive()
    }
}

impl Aes {
    pub const BLOCK_BYTES: usize = 16;

    /// Key must be 16, 24 or 32 bytes; callers validate the length.
    pub fn new(key: &[u8]) -> Self {
        let nk = key.len() / 4;
        assert!(matches!(nk, 4 | 6 | 8), "AES key must be 16, 24 or 32 bytes");
        let rounds = nk + 6;
        let total = 4 * (rounds + 1);
        let mut w = Vec::with_capacity(total);
        for chunk in key.chunks_exact(4) {
            w.push(u32::from_be_bytes([chunk[0], chunk[1], chunk[2], chunk[3]]));
        }
        for i in nk..total {
            let mut t = w[i - 1];
            if i % nk == 0 {
                t = sub_word(t.rotate_left(8)) ^ RCON[i / nk - 1];
            } else if nk > 6 && i % nk == 4 {
                t = sub_word(t);
            }
            w.push(w[i - nk] ^ t);
        }

        // Equivalent inverse cipher: reversed round order, InvMixColumns on
        // every round key except the first and last.
        let mut dec = Vec::with_capacity(total);
        for r in (0..=rounds).rev() {
            for c in 0..4 {
                let k = w[4 * r + c];
                dec.push(if r == 0 || r == rounds { k } else { inv_mix_column(k) });
            }
        }
        Aes { rounds, enc: w, dec }
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    /// Round key `r` (0 ..= rounds) as 16 bytes.
    pub fn round_key(&self, r: usize) -> [u8; 16] {
        let mut out = [0u8; 16];
        for c in 0..4 {
            out[4 * c..4 * c + 4].copy_from_slice(&self.enc[4 * r + c].to_be_bytes());
        }
        out
    }

    #[inline]
    pub fn encrypt_block(&self, block: &mut [u8]) {
        let rk = &self.enc;
        let mut s0 = load(block, 0) ^ rk[0];
        let mut s1 = load(block, 4) ^ rk[1];
        let mut s2 = load(block, 8) ^ rk[2];
        let mut s3 = load(block, 12) ^ rk[3];
        let mut k = 4;
        for _ in 1..self.rounds {
            let t0 = TE[0][(s0 >> 24) as usize]
                ^ TE[1][(s1 >> 16 & 0xff) as usize]
                ^ TE[2][(s2 >> 8 & 0xff) as usize]
                ^ TE[3][(s3 & 0xff) as usize]
                ^ rk[k];
            let t1 = TE[0][(s1 >> 24) as usize]
                ^ TE[1][(s2 >> 16 & 0xff) as usize]
                ^ TE[2][(s3 >> 8 & 0xff) as usize]
                ^ TE[3][(s0 & 0xff) as usize]
                ^ rk[k + 1];
            let t2 = TE[0][(s2 >> 24) as usize]
                ^ TE[1][(s3 >> 16 & 0xff) as usize]
                ^ TE[2][(s0 >> 8 & 0xff) as usize]
                ^ TE[3][(s1 & 0xff) as usize]
                ^ rk[k + 2];
            let t3 = TE[0][(s3 >> 24) as usize]
                ^ TE[1][(s0 >> 16 & 0xff) as usize]
                ^ TE[2][(s1 >> 8 & 0xff) as usize]
                ^ TE[3][(s2 & 0xff) as usize]
                ^ rk[k + 3];
            s0 = t0;
            s1 = t1;
            s2 = t2;
            s3 = t3;
            k += 4;
        }
        let last = |a: u32, b: u32, c: u32, d: u32, key: u32| {
            u32::from_be_bytes([
                SBOX[(a >> 24) as usize],
                SBOX[(b >> 16 & 0xff) as usize],
                SBOX[(c >> 8 & 0xff) as usize],
                SBOX[(d & 0xff) as usize],
            ]) ^ key
        };
        store(block, 0, last(s0, s1, s2, s3, rk[k]));
        store(block, 4, last(s1, s2, s3, s0, rk[k + 1]));
        store(block, 8, last(s2, s3, s0, s1, rk[k + 2]));
        store(block, 12, last(s3, s0, s1, s2, rk[k + 3]));
    }

    #[inline]
    pub fn decrypt_block(&self, block: &mut [u8]) {
        let rk = &self.dec;
        let mut s0 = load(block, 0) ^ rk[0];
        let mut s1 = load(block, 4) ^ rk[1];
        let mut s2 = load(block, 8) ^ rk[2];
        let mut s3 = load(block, 12) ^ rk[3];
        let mut k = 4;
        for _ in 1..self.rounds {
            let t0 = TD[0][(s0 >> 24) as usize]
                ^ TD[1][(s3 >> 16 & 0xff) as usize]
                ^ TD[2][(s2 >> 8 & 0xff) as usize]
                ^ TD[3][(s1 & 0xff) as usize]
                ^ rk[k];
            let t1 = TD[0][(s1 >> 24) as usize]
                ^ TD[1][(s0 >> 16 & 0xff) as usize]
                ^ TD[2][(s3 >> 8 & 0xff) as usize]
                ^ TD[3][(s2 & 0xff) as usize]
                ^ rk[k + 1];
            let t2 = TD[0][(s2 >> 24) as usize]
                ^ TD[1][(s1 >> 16 & 0xff) as usize]
                ^ TD[2][(s0 >> 8 & 0xff) as usize]
                ^ TD[3][(s3 & 0xff) as usize]
                ^ rk[k + 2];
            let t3 = TD[0][(s3 >> 24) as usize]
                ^ TD[1][(s2 >> 16 & 0xff) as usize]
                ^ TD[2][(s1 >> 8 & 0xff) as usize]
                ^ TD[3][(s0 & 0xff) as usize]
                ^ rk[k + 3];
            s0 = t0;
            s1 = t1;
            s2 = t2;
            s3 = t3;
            k += 4;
        }
        let last = |a: u32, b: u32, c: u32, d: u32, key: u32| {
            u32::from_be_bytes([
                INV_SBOX[(a >> 24) as usize],
                INV_SBOX[(b >> 16 & 0xff) as usize],
                INV_SBOX[(c >> 8 & 0xff) as usize],
                INV_SBOX[(d & 0xff) as usize],
            ]) ^ key
        };
        store(block, 0, last(s0, s3, s2, s1, rk[k]));
        store(block, 4, last(s1, s0, s3, s2, rk[k + 1]));
        store(block, 8, last(s2, s1, s0, s3, rk[k + 2]));
        store(block, 12, last(s3, s2, s1, s0, rk[k + 3]));
    }
}

#[inline(always)]
fn load(b: &[u8], at: usize) -> u32 {
    u32::from_be_bytes([b[at], b[at + 1], b[at + 2], b[at + 3]])
}

#[inline(always)]
fn store(b: &mut [u8], at: usize, w: u32) {
    b[at..at + 4].copy_from_slice(&w.to_be_bytes());
}
