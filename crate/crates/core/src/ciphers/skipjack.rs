//! Skipjack: 64-bit block, 80-bit key, 32 rounds of rules A and B.

#[rustfmt::skip]
static F: [u8; 256] = [
    0xa3, 0xd7, 0x09, 0x83, 0xf8, 0x48, 0xf6, 0xf4, 0xb3, 0x21, 0x15, 0x78, 0x99, 0xb1, 0xaf, 0xf9,
    0xe7, 0x2d, 0x4d, 0x8a, 0xce, 0x4c, 0xca, 0x2e, 0x52, 0x95, 0xd9, 0x1e, 0x4e, 0x38, 0x44, 0x28,
    0x0a, 0xdf, 0x02, 0xa0, 0x17, 0xf1, 0x60, 0x68, 0x12, 0xb7, 0x7a, 0xc3, 0xe9, 0xfa, 0x3d, 0x53,
    0x96, 0x84, 0x6b, 0xba, 0xf2, 0x63, 0x9a, 0x19, 0x7c, 0xae, 0xe5, 0xf5, 0xf7, 0x16, 0x6a, 0xa2,
    0x39, 0xb6, 0x7b, 0x0f, 0xc1, 0x93, 0x81, 0x1b, 0xee, 0xb4, 0x1a, 0xea, 0xd0, 0x91, 0x2f, 0xb8,
    0x55, 0xb9, 0xda, 0x85, 0x3f, 0x41, 0xbf, 0xe0, 0x5a, 0x58, 0x80, 0x5f, 0x66, 0x0b, 0xd8, 0x90,
    0x35, 0xd5, 0xc0, 0xa7, 0x33, 0x06, 0x65, 0x69, 0x45, 0x00, 0x94, 0x56, 0x6d, 0x98, 0x9b, 0x76,
    0x97, 0xfc, 0xb2, 0xc2, 0xb0, 0xfe, 0xdb, 0x20, 0xe1, 0xeb, 0xd6, 0xe4, 0xdd, 0x47, 0x4a, 0x1d,
    0x42, 0xed, 0x9e, 0x6e, 0x49, 0x3c, 0xcd, 0x43, 0x27, 0xd2, 0x07, 0xd4, 0xde, 0xc7, 0x67, 0x18,
    0x89, 0xcb, 0x30, 0x1f, 0x8d, 0xc6, 0x8f, 0xaa, 0xc8, 0x74, 0xdc, 0xc9, 0x5d, 0x5c, 0x31, 0xa4,
    0x70, 0x88, 0x61, 0x2c, 0x9f, 0x0d, 0x2b, 0x87, 0x50, 0x82, 0x54, 0x64, 0x26, 0x7d, 0x03, 0x40,
    0x34, 0x4b, 0x1c, 0x73, 0xd1, 0xc4, 0xfd, 0x3b, 0xcc, 0xfb, 0x7f, 0xab, 0xe6, 0x3e, 0x5b, 0xa5,
    0xad, 0x04, 0x23, 0x9c, 0x14, 0x51, 0x22, 0xf0, 0x29, 0x79, 0x71, 0x7e, 0xff, 0x8c, 0x0e, 0xe2,
    0x0c, 0xef, 0xbc, 0x72, 0x75, 0x6f, 0x37, 0xa1, 0xec, 0xd3, 0x8e, 0x62, 0x8b, 0x86, 0x10, 0xe8,
    0x08, 0x77, 0x11, 0xbe, 0x92, 0x4f, 0x24, 0xc5, 0x32, 0x36, 0x9d, 0xcf, 0xf3, 0xa6, 0xbb, 0xac,
    0x5e, 0x6c, 0xa9, 0x13, 0x57, 0x25, 0xb5, 0xe3, 0xbd, 0xa8, 0x3a, 0x01, 0x05, 0x59, 0x2a, 0x46,
];

#[derive(Clone)]
pub struct Skipjack {
    /// `keyed[j][x] = F[x ^ key[j]]` for each of the ten key bytes.
    keyed: Box<[[u8; 256]; 10]>,
}

impl std::fmt::Debug for Skipjack {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Skipjack").finish_non_exhaustive()
    }
}

/// Key byte index for byte `i` of step `k`: the key is cycled four bytes
/// per step, so the pattern repeats every five steps.
const fn kb(step: usize, i: usize) -> usize {
    (4 * step + i) % 10
}

impl Skipjack {
    pub const BLOCK_BYTES: usize = 8;

    pub fn new(key: [u8; 10]) -> Self {
        let mut keyed = Box::new([[0u8; 256]; 10]);
        for (j, table) in keyed.iter_mut().enumerate() {
            for (x, t) in table.iter_mut().enumerate() {
                *t = F[x ^ key[j] as usize];
            }
        }
        Skipjack { keyed }
    }

    #[inline(always)]
    fn g(&self, w: u16, step: usize) -> u16 {
        let t = &*self.keyed;
        let [g1, g2] = w.to_be_bytes();
        let g3 = t[kb(step, 0)][g2 as usize] ^ g1;
        let g4 = t[kb(step, 1)][g3 as usize] ^ g2;
        let g5 = t[kb(step, 2)][g4 as usize] ^ g3;
        let g6 = t[kb(step, 3)][g5 as usize] ^ g4;
        u16::from_be_bytes([g5, g6])
    }

    #[inline(always)]
    fn g_inv(&self, w: u16, step: usize) -> u16 {
        let t = &*self.keyed;
        let [g5, g6] = w.to_be_bytes();
        let g4 = t[kb(step, 3)][g5 as usize] ^ g6;
        let g3 = t[kb(step, 2)][g4 as usize] ^ g5;
        let g2 = t[kb(step, 1)][g3 as usize] ^ g4;
        let g1 = t[kb(step, 0)][g2 as usize] ^ g3;
        u16::from_be_bytes([g1, g2])
    }

    #[inline(always)]
    fn encrypt_words<const N: usize>(&self, w: &mut [[u16; 4]; N]) {
        for step in 0..32 {
            let counter = step as u16 + 1;
            let rule_a = (step / 8) % 2 == 0;
            for [w1, w2, w3, w4] in w.iter_mut() {
                let g = self.g(*w1, step);
                if rule_a {
                    (*w1, *w2, *w3, *w4) = (g ^ *w4 ^ counter, g, *w2, *w3);
                } else {
                    (*w1, *w2, *w3, *w4) = (*w4, g, *w1 ^ *w2 ^ counter, *w3);
                }
            }
        }
    }

    #[inline(always)]
    fn decrypt_words<const N: usize>(&self, w: &mut [[u16; 4]; N]) {
        for step in (0..32).rev() {
            let counter = step as u16 + 1;
            let rule_a = (step / 8) % 2 == 0;
            for [w1, w2, w3, w4] in w.iter_mut() {
                let a = self.g_inv(*w2, step);
                if rule_a {
                    (*w1, *w2, *w3, *w4) = (a, *w3, *w4, *w1 ^ *w2 ^ counter);
                } else {
                    (*w1, *w2, *w3, *w4) = (a, *w3 ^ a ^ counter, *w4, *w1);
                }
            }
        }
    }

    #[inline]
    pub fn encrypt_block(&self, block: &mut [u8]) {
        let mut w = [read(block)];
        self.encrypt_words(&mut w);
        write(block, w[0]);
    }

    #[inline]
    pub fn decrypt_block(&self, block: &mut [u8]) {
        let mut w = [read(block)];
        self.decrypt_words(&mut w);
        write(block, w[0]);
    }

    /// Encrypt consecutive blocks, four at a time where possible so the
    /// table-lookup chains of independent blocks overlap.
    pub fn encrypt_blocks(&self, data: &mut [u8]) {
        self.blocks(data, Self::encrypt_words::<4>, Self::encrypt_block);
    }

    pub fn decrypt_blocks(&self, data: &mut [u8]) {
        self.blocks(data, Self::decrypt_words::<4>, Self::decrypt_block);
    }

    #[inline(always)]
    fn blocks(&self, data: &mut [u8], four: fn(&Self, &mut [[u16; 4]; 4]), one: fn(&Self, &mut [u8])) {
        let mut chunks = data.chunks_exact_mut(32);
        for c in &mut chunks {
            let mut w = [read(&c[0..8]), read(&c[8..16]), read(&c[16..24]), read(&c[24..32])];
            four(self, &mut w);
            for (i, words) in w.into_iter().enumerate() {
                write(&mut c[8 * i..8 * i + 8], words);
            }
        }
        for b in chunks.into_remainder().chunks_exact_mut(8) {
            one(self, b);
        }
    }
}

#[inline(always)]
fn read(b: &[u8]) -> [u16; 4] {
    [
        u16::from_be_bytes([b[0], b[1]]),
        u16::from_be_bytes([b[2], b[3]]),
        u16::from_be_bytes([b[4], b[5]]),
        u16::from_be_bytes([b[6], b[7]]),
    ]
}

#[inline(always)]
fn write(b: &mut [u8], w: [u16; 4]) {
    for (i, x) in w.iter().enumerate() {
        b[2 * i..2 * i + 2].copy_from_slice(&x.to_be_bytes());
    }
}
