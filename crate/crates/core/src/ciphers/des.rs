//! DES and two/three-key EDE Triple DES.
//!
//! The S-boxes are merged with the P permutation into eight 64-entry
//! tables, and the initial/final permutations use byte-indexed lookup
//! tables. All tables are built at compile time from the standard's
//! bit-position tables. Parity bits of the key are ignored.

const IP: [u8; 64] = [
    58, 50, 42, 34, 26, 18, 10, 2, 60, 52, 44, 36, 28, 20, 12, 4, 62, 54, 46, 38, 30, 22, 14, 6,
    64, 56, 48, 40, 32, 24, 16, 8, 57, 49, 41, 33, 25, 17, 9, 1, 59, 51, 43, 35, 27, 19, 11, 3,
    61, 53, 45, 37, 29, 21, 13, 5, 63, 55, 47, 39, 31, 23, 15, 7,
];

const FP: [u8; 64] = [
    40, 8, 48, 16, 56, 24, 64, 32, 39, 7, 47, 15, 55, 23, 63, 31, 38, 6, 46, 14, 54, 22, 62, 30,
    37, 5, 45, 13, 53, 21, 61, 29, 36, 4, 44, 12, 52, 20, 60, 28, 35, 3, 43, 11, 51, 19, 59, 27,
    34, 2, 42, 10, 50, 18, 58, 26, 33, 1, 41, 9, 49, 17, 57, 25,
];

const PC1: [u8; 56] = [
    57, 49, 41, 33, 25, 17, 9, 1, 58, 50, 42, 34, 26, 18, 10, 2, 59, 51, 43, 35, 27, 19, 11, 3,
    60, 52, 44, 36, 63, 55, 47, 39, 31, 23, 15, 7, 62, 54, 46, 38, 30, 22, 14, 6, 61, 53, 45, 37,
    29, 21, 13, 5, 28, 20, 12, 4,
];

const PC2: [u8; 48] = [
    14, 17, 11, 24, 1, 5, 3, 28, 15, 6, 21, 10, 23, 19, 12, 4, 26, 8, 16, 7, 27, 20, 13, 2, 41,
    52, 31, 37, 47, 55, 30, 40, 51, 45, 33, 48, 44, 49, 39, 56, 34, 53, 46, 42, 50, 36, 29, 32,
];

const P: [u8; 32] = [
    16, 7, 20, 21, 29, 12, 28, 17, 1, 15, 23, 26, 5, 18, 31, 10, 2, 8, 24, 14, 32, 27, 3, 9, 19,
    13, 30, 6, 22, 11, 4, 25,
];

const SHIFTS: [u32; 16] = [1, 1, 2, 2, 2, 2, 2, 2, 1, 2, 2, 2, 2, 2, 2, 1];

#[rustfmt::skip]
const SBOXES: [[u8; 64]; 8] = [
    [14, 4, 13, 1, 2, 15, 11, 8, 3, 10, 6, 12, 5, 9, 0, 7,
     0, 15, 7, 4, 14, 2, 13, 1, 10, 6, 12, 11, 9, 5, 3, 8,
     4, 1, 14, 8, 13, 6, 2, 11, 15, 12, 9, 7, 3, 10, 5, 0,
     15, 12, 8, 2, 4, 9, 1, 7, 5, 11, 3, 14, 10, 0, 6, 13],
    [15, 1, 8, 14, 6, 11, 3, 4, 9, 7, 2, 13, 12, 0, 5, 10,
     3, 13, 4, 7, 15, 2, 8, 14, 12, 0, 1, 10, 6, 9, 11, 5,
     0, 14, 7, 11, 10, 4, 13, 1, 5, 8, 12, 6, 9, 3, 2, 15,
     13, 8, 10, 1, 3, 15, 4, 2, 11, 6, 7, 12, 0, 5, 14, 9],
    [10, 0, 9, 14, 6, 3, 15, 5, 1, 13, 12, 7, 11, 4, 2, 8,
     13, 7, 0, 9, 3, 4, 6, 10, 2, 8, 5, 14, 12, 11, 15, 1,
     13, 6, 4, 9, 8, 15, 3, 0, 11, 1, 2, 12, 5, 10, 14, 7,
     1, 10, 13, 0, 6, 9, 8, 7, 4, 15, 14, 3, 11, 5, 2, 12],
    [7, 13, 14, 3, 0, 6, 9, 10, 1, 2, 8, 5, 11, 12, 4, 15,
     13, 8, 11, 5, 6, 15, 0, 3, 4, 7, 2, 12, 1, 10, 14, 9,
     10, 6, 9, 0, 12, 11, 7, 13, 15, 1, 3, 14, 5, 2, 8, 4,
     3, 15, 0, 6, 10, 1, 13, 8, 9, 4, 5, 11, 12, 7, 2, 14],
    [2, 12, 4, 1, 7, 10, 11, 6, 8, 5, 3, 15, 13, 0, 14, 9,
     14, 11, 2, 12, 4, 7, 13, 1, 5, 0, 15, 10, 3, 9, 8, 6,
     4, 2, 1, 11, 10, 13, 7, 8, 15, 9, 12, 5, 6, 3, 0, 14,
     11, 8, 12, 7, 1, 14, 2, 13, 6, 15, 0, 9, 10, 4, 5, 3],
    [12, 1, 10, 15, 9, 2, 6, 8, 0, 13, 3, 4, 14, 7, 5, 11,
     10, 15, 4, 2, 7, 12, 9, 5, 6, 1, 13, 14, 0, 11, 3, 8,
     9, 14, 15, 5, 2, 8, 12, 3, 7, 0, 4, 10, 1, 13, 11, 6,
     4, 3, 2, 12, 9, 5, 15, 10, 11, 14, 1, 7, 6, 0, 8, 13],
    [4, 11, 2, 14, 15, 0, 8, 13, 3, 12, 9, 7, 5, 10, 6, 1,
     13, 0, 11, 7, 4, 9, 1, 10, 14, 3, 5, 12, 2, 15, 8, 6,
     1, 4, 11, 13, 12, 3, 7, 14, 10, 15, 6, 8, 0, 5, 9, 2,
     6, 11, 13, 8, 1, 4, 10, 7, 9, 5, 0, 15, 14, 2, 3, 12],
    [13, 2, 8, 4, 6, 15, 11, 1, 10, 9, 3, 14, 5, 0, 12, 7,
     1, 15, 13, 8, 10, 3, 7, 4, 12, 5, 6, 11, 0, 14, 9, 2,
     7, 11, 4, 1, 9, 12, 14, 2, 0, 6, 10, 13, 15, 3, 5, 8,
     2, 1, 14, 7, 4, 10, 8, 13, 15, 12, 9, 0, 3, 5, 6, 11],
];

/// Generic bit permutation. Positions are 1-based from the most significant
/// bit of an `in_width`-bit input; output is `table.len()` bits wide.
const fn permute(input: u64, in_width: u32, table: &[u8]) -> u64 {
    let mut out = 0u64;
    let mut i = 0;
    while i < table.len() {
        let bit = (input >> (in_width - table[i] as u32)) & 1;
        out = (out << 1) | bit;
        i += 1;
    }
    out
}

/// Byte-sliced form of a 64 -> 64 bit permutation.
const fn byte_tables(table: &[u8; 64]) -> [[u64; 256]; 8] {
    let mut t = [[0u64; 256]; 8];
    let mut byte = 0;
    while byte < 8 {
        let mut v = 0;
        while v < 256 {
            let input = (v as u64) << (56 - 8 * byte);
            t[byte][v] = permute(input, 64, table);
            v += 1;
        }
        byte += 1;
    }
    t
}

/// S-box `b` followed by P, indexed by the raw 6-bit S-box input.
const fn sp_tables() -> [[u32; 64]; 8] {
    let mut t = [[0u32; 64]; 8];
    let mut b = 0;
    while b < 8 {
        let mut v = 0;
        while v < 64 {
            let row = ((v >> 4) & 2) | (v & 1);
            let col = (v >> 1) & 0xf;
            let s = SBOXES[b][row * 16 + col] as u64;
            let pre = s << (28 - 4 * b);
            t[b][v] = permute(pre, 32, &P) as u32;
            v += 1;
        }
        b += 1;
    }
    t
}

static IP_TABLE: [[u64; 256]; 8] = byte_tables(&IP);
static FP_TABLE: [[u64; 256]; 8] = byte_tables(&FP);
static SP: [[u32; 64]; 8] = sp_tables();

#[inline(always)]
fn apply_byte_table(t: &[[u64; 256]; 8], x: u64) -> u64 {
    let b = x.to_be_bytes();
    t[0][b[0] as usize]
        | t[1][b[1] as usize]
        | t[2][b[2] as usize]
        | t[3][b[3] as usize]
        | t[4][b[4] as usize]
        | t[5][b[5] as usize]
        | t[6][b[6] as usize]
        | t[7][b[7] as usize]
}

#[inline(always)]
fn initial_permutation(x: u64) -> u64 {
    apply_byte_table(&IP_TABLE, x)
}

#[inline(always)]
fn final_permutation(x: u64) -> u64 {
    apply_byte_table(&FP_TABLE, x)
}

/// Round subkey split into the eight 6-bit S-box inputs.
type Subkey = [u8; 8];

#[inline(always)]
fn feistel(r: u32, k: &Subkey) -> u32 {
    // Box b reads expansion bits 4b-1 ..= 4b+4 (1-based, wrapping), which
    // is a rotation of R followed by a 6-bit mask.
    let mut out = 0u32;
    for b in 0..8 {
        let e = r.rotate_right((59 - 4 * b as u32) % 32) & 0x3f;
        out |= SP[b][(e as u8 ^ k[b]) as usize];
    }
    out
}

#[derive(Clone)]
pub struct Des {
    subkeys: [Subkey; 16],
}

impl std::fmt::Debug for Des {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Des").finish_non_exhaustive()
    }
}

impl Des {
    pub const BLOCK_BYTES: usize = 8;

    pub fn new(key: [u8; 8]) -> Self {
        let cd = permute(u64::from_be_bytes(key), 64, &PC1);
        let mut c = (cd >> 28) as u32 & 0x0fff_ffff;
        let mut d = cd as u32 & 0x0fff_ffff;
        let mut subkeys = [[0u8; 8]; 16];
        for (round, shift) in SHIFTS.iter().enumerate() {
            c = ((c << shift) | (c >> (28 - shift))) & 0x0fff_ffff;
            d = ((d << shift) | (d >> (28 - shift))) & 0x0fff_ffff;
            let k48 = permute(((c as u64) << 28) | d as u64, 56, &PC2);
            for b in 0..8 {
                subkeys[round][b] = ((k48 >> (42 - 6 * b)) & 0x3f) as u8;
            }
        }
        Des { subkeys }
    }

    /// 48-bit round key `i` (0-based), as in the standard's worked examples.
    pub fn round_key(&self, i: usize) -> u64 {
        self.subkeys[i].iter().fold(0u64, |acc, &six| (acc << 6) | six as u64)
    }

    /// Sixteen rounds on a block already in IP order; output is R16 || L16
    /// ready for the final permutation.
    #[inline(always)]
    fn rounds(&self, x: u64, decrypt: bool) -> u64 {
        let mut l = (x >> 32) as u32;
        let mut r = x as u32;
        if decrypt {
            for k in self.subkeys.iter().rev() {
                let t = r;
                r = l ^ feistel(r, k);
                l = t;
            }
        } else {
            for k in self.subkeys.iter() {
                let t = r;
                r = l ^ feistel(r, k);
                l = t;
            }
        }
        ((r as u64) << 32) | l as u64
    }

    pub fn encrypt_u64(&self, block: u64) -> u64 {
        final_permutation(self.rounds(initial_permutation(block), false))
    }

    pub fn decrypt_u64(&self, block: u64) -> u64 {
        final_permutation(self.rounds(initial_permutation(block), true))
    }

    #[inline]
    pub fn encrypt_block(&self, block: &mut [u8]) {
        let x = read_u64(block);
        block.copy_from_slice(&self.encrypt_u64(x).to_be_bytes());
    }

    #[inline]
    pub fn decrypt_block(&self, block: &mut [u8]) {
        let x = read_u64(block);
        block.copy_from_slice(&self.decrypt_u64(x).to_be_bytes());
    }
}

/// Encrypt-decrypt-encrypt with three DES keys (K1, K2, K3). Two-key
/// variants set K3 = K1.
#[derive(Clone, Debug)]
pub struct TripleDes {
    k1: Des,
    k2: Des,
    k3: Des,
}

impl TripleDes {
    pub const BLOCK_BYTES: usize = 8;

    /// 16-byte (K1, K2, K1) or 24-byte (K1, K2, K3) key.
    pub fn new(key: &[u8]) -> Self {
        assert!(key.len() == 16 || key.len() == 24, "TDES key must be 16 or 24 bytes");
        let part = |i: usize| -> [u8; 8] { key[8 * i..8 * i + 8].try_into().unwrap() };
        let k1 = Des::new(part(0));
        let k2 = Des::new(part(1));
        let k3 = if key.len() == 24 { Des::new(part(2)) } else { k1.clone() };
        TripleDes { k1, k2, k3 }
    }

    // IP and FP cancel between the three stages, so they are applied once.
    pub fn encrypt_u64(&self, block: u64) -> u64 {
        let x = initial_permutation(block);
        let x = self.k1.rounds(x, false);
        let x = self.k2.rounds(x, true);
        let x = self.k3.rounds(x, false);
        final_permutation(x)
    }

    pub fn decrypt_u64(&self, block: u64) -> u64 {
        let x = initial_permutation(block);
        let x = self.k3.rounds(x, true);
        let x = self.k2.rounds(x, false);
        let x = self.k1.rounds(x, true);
        final_permutation(x)
    }

    #[inline]
    pub fn encrypt_block(&self, block: &mut [u8]) {
        let x = read_u64(block);
        block.copy_from_slice(&self.encrypt_u64(x).to_be_bytes());
    }

    #[inline]
    pub fn decrypt_block(&self, block: &mut [u8]) {
        let x = read_u64(block);
        block.copy_from_slice(&self.decrypt_u64(x).to_be_bytes());
    }
}

#[inline(always)]
fn read_u64(b: &[u8]) -> u64 {
    u64::from_be_bytes(b[..8].try_into().unwrap())
}
