//! Blowfish, 64-bit block, 32 to 448-bit keys.

use super::blowfish_tables::{P_INIT, S_INIT};

#[derive(Clone)]
pub struct Blowfish {
    p: [u32; 18],
    s: Box<[[u32; 256]; 4]>,
}

impl std::fmt::Debug for Blowfish {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Blowfish").finish_non_exhaustive()
    }
}

impl Blowfish {
    pub const BLOCK_BYTES: usize = 8;

    /// `key` is 1..=72 bytes (the algorithm accepts up to 576 bits even
    /// though 448 is the documented maximum).
    pub fn new(key: &[u8]) -> Self {
        assert!((1..=72).contains(&key.len()), "Blowfish key must be 1..=72 bytes");
        let mut bf = Blowfish { p: P_INIT, s: Box::new(S_INIT) };
        let mut pos = 0;
        for p in bf.p.iter_mut() {
            let mut w = 0u32;
            for _ in 0..4 {
                w = (w << 8) | key[pos] as u32;
                pos = (pos + 1) % key.len();
            }
            *p ^= w;
        }
        let (mut l, mut r) = (0u32, 0u32);
        for i in (0..18).step_by(2) {
            (l, r) = bf.encrypt_words(l, r);
            bf.p[i] = l;
            bf.p[i + 1] = r;
        }
        for b in 0..4 {
            for i in (0..256).step_by(2) {
                (l, r) = bf.encrypt_words(l, r);
                bf.s[b][i] = l;
                bf.s[b][i + 1] = r;
            }
        }
        bf
    }

    #[inline(always)]
    fn f(&self, x: u32) -> u32 {
        let [a, b, c, d] = x.to_be_bytes();
        (self.s[0][a as usize].wrapping_add(self.s[1][b as usize]) ^ self.s[2][c as usize])
            .wrapping_add(self.s[3][d as usize])
    }

    #[inline(always)]
    fn encrypt_words(&self, mut l: u32, mut r: u32) -> (u32, u32) {
        for i in (0..16).step_by(2) {
            l ^= self.p[i];
            r ^= self.f(l);
            r ^= self.p[i + 1];
            l ^= self.f(r);
        }
        (r ^ self.p[17], l ^ self.p[16])
    }

    #[inline(always)]
    fn decrypt_words(&self, mut l: u32, mut r: u32) -> (u32, u32) {
        for i in (2..18).step_by(2).rev() {
            l ^= self.p[i + 1];
            r ^= self.f(l);
            r ^= self.p[i];
            l ^= self.f(r);
        }
        (r ^ self.p[0], l ^ self.p[1])
    }

    #[inline]
    pub fn encrypt_block(&self, block: &mut [u8]) {
        let l = u32::from_be_bytes(block[0..4].try_into().unwrap());
        let r = u32::from_be_bytes(block[4..8].try_into().unwrap());
        let (l, r) = self.encrypt_words(l, r);
        block[0..4].copy_from_slice(&l.to_be_bytes());
        block[4..8].copy_from_slice(&r.to_be_bytes());
    }

    #[inline]
    pub fn decrypt_block(&self, block: &mut [u8]) {
        let l = u32::from_be_bytes(block[0..4].try_into().unwrap());
        let r = u32::from_be_bytes(block[4..8].try_into().unwrap());
        let (l, r) = self.decrypt_words(l, r);
        block[0..4].copy_from_slice(&l.to_be_bytes());
        block[4..8].copy_from_slice(&r.to_be_bytes());
    }
}
