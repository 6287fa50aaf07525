//! RC4 keystream generator. The key schedule runs 256 swap iterations.

#[derive(Clone)]
pub struct Rc4 {
    s: [u8; 256],
    i: u8,
    j: u8,
}

impl std::fmt::Debug for Rc4 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Rc4").field("i", &self.i).field("j", &self.j).finish_non_exhaustive()
    }
}

impl Rc4 {
    /// Any key of 1..=256 bytes.
    pub fn new(key: &[u8]) -> Self {
        assert!((1..=256).contains(&key.len()), "RC4 key must be 1..=256 bytes");
        let mut s = [0u8; 256];
        for (i, x) in s.iter_mut().enumerate() {
            *x = i as u8;
        }
        let mut j = 0u8;
        for i in 0..256 {
            j = j.wrapping_add(s[i]).wrapping_add(key[i % key.len()]);
            s.swap(i, j as usize);
        }
        Rc4 { s, i: 0, j: 0 }
    }

    pub fn permutation(&self) -> &[u8; 256] {
        &self.s
    }

    pub fn indices(&self) -> (u8, u8) {
        (self.i, self.j)
    }

    /// XOR the next `data.len()` keystream bytes into `data`.
    #[inline]
    pub fn apply_in_place(&mut self, data: &mut [u8]) {
        let (mut i, mut j) = (self.i, self.j);
        let s = &mut self.s;
        for b in data.iter_mut() {
            i = i.wrapping_add(1);
            let si = s[i as usize];
            j = j.wrapping_add(si);
            let sj = s[j as usize];
            s[i as usize] = sj;
            s[j as usize] = si;
            *b ^= s[si.wrapping_add(sj) as usize];
        }
        self.i = i;
        self.j = j;
    }

    /// XOR keystream into `src`, writing to `dst` (same length).
    #[inline]
    pub fn apply_into(&mut self, src: &[u8], dst: &mut [u8]) {
        assert_eq!(src.len(), dst.len());
        let (mut i, mut j) = (self.i, self.j);
        let s = &mut self.s;
        for (out, &b) in dst.iter_mut().zip(src) {
            i = i.wrapping_add(1);
            let si = s[i as usize];
            j = j.wrapping_add(si);
            let sj = s[j as usize];
            s[i as usize] = sj;
            s[j as usize] = si;
            *out = b ^ s[si.wrapping_add(sj) as usize];
        }
        self.i = i;
        self.j = j;
    }
}
