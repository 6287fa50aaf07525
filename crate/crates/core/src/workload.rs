//! Seeded synthetic payloads standing in for text, media, sparse and dense
//! files, plus a byte-entropy density measure.

use std::fmt;
use std::str::FromStr;

use rand::distributions::{Distribution, Uniform};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Generator used for every seeded buffer (and for benchmark keys).
pub const PRNG_NAME: &str = "ChaCha8Rng (rand_chacha 0.3, seed_from_u64)";

/// `media_like` payloads are zeroed for the first `MEDIA_ZERO_RUN` bytes of
/// every `MEDIA_PERIOD` bytes.
pub const MEDIA_PERIOD: usize = 4096;
pub const MEDIA_ZERO_RUN: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WorkloadKind {
    ZerosSparse,
    RandomDense,
    TextAnsi,
    TextUtf16,
    MediaLike,
}

impl WorkloadKind {
    pub const ALL: [WorkloadKind; 5] = [
        WorkloadKind::ZerosSparse,
        WorkloadKind::RandomDense,
        WorkloadKind::TextAnsi,
        WorkloadKind::TextUtf16,
        WorkloadKind::MediaLike,
    ];

    pub fn name(self) -> &'static str {
        match self {
            WorkloadKind::ZerosSparse => "zeros_sparse",
            WorkloadKind::RandomDense => "random_dense",
            WorkloadKind::TextAnsi => "text_ansi",
            WorkloadKind::TextUtf16 => "text_utf16",
            WorkloadKind::MediaLike => "media_like",
        }
    }
}

impl fmt::Display for WorkloadKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WorkloadKind {
    type Err = WorkloadError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        WorkloadKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| WorkloadError::UnknownKind(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WorkloadError {
    #[error("workload size must be at least 1 byte")]
    BadSize,
    #[error("density of an empty workload is undefined")]
    EmptyWorkload,
    #[error("unknown workload kind `{0}`")]
    UnknownKind(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WorkloadSpec {
    pub kind: WorkloadKind,
    pub size_bytes: u64,
    pub seed: u64,
}

impl WorkloadSpec {
    pub fn new(kind: WorkloadKind, size_bytes: u64, seed: u64) -> Self {
        WorkloadSpec { kind, size_bytes, seed }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Workload {
    pub spec: WorkloadSpec,
    pub bytes: Vec<u8>,
}

impl fmt::Debug for Workload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Workload").field("spec", &self.spec).finish_non_exhaustive()
    }
}

fn fill_ansi(rng: &mut ChaCha8Rng, out: &mut [u8]) {
    let printable = Uniform::new_inclusive(0x20u8, 0x7e);
    for b in out.iter_mut() {
        *b = printable.sample(rng);
    }
}

pub fn generate_workload(spec: WorkloadSpec) -> Result<Workload, WorkloadError> {
    if spec.size_bytes == 0 {
        return Err(WorkloadError::BadSize);
    }
    let n = usize::try_from(spec.size_bytes).map_err(|_| WorkloadError::BadSize)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut bytes = vec![0u8; n];
    match spec.kind {
        WorkloadKind::ZerosSparse => {}
        WorkloadKind::RandomDense => rng.fill_bytes(&mut bytes),
        WorkloadKind::TextAnsi => fill_ansi(&mut rng, &mut bytes),
        WorkloadKind::TextUtf16 => {
            // Little-endian code units: character byte then 0x00.
            let mut chars = vec![0u8; n.div_ceil(2)];
            fill_ansi(&mut rng, &mut chars);
            for (i, c) in chars.into_iter().enumerate() {
                bytes[2 * i] = c;
            }
        }
        WorkloadKind::MediaLike => {
            rng.fill_bytes(&mut bytes);
            for period in bytes.chunks_mut(MEDIA_PERIOD) {
                let run = period.len().min(MEDIA_ZERO_RUN);
                period[..run].fill(0);
            }
        }
    }
    Ok(Workload { spec, bytes })
}

/// Shannon entropy of the byte histogram, in bits per byte.
pub fn byte_entropy(bytes: &[u8]) -> Result<f64, WorkloadError> {
    if bytes.is_empty() {
        return Err(WorkloadError::EmptyWorkload);
    }
    let mut counts = [0u64; 256];
    for &b in bytes {
        counts[b as usize] += 1;
    }
    let n = bytes.len() as f64;
    let h = counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let f = c as f64 / n;
            -f * f.log2()
        })
        .sum::<f64>();
    Ok(h.clamp(0.0, 8.0))
}

pub fn estimate_density(w: &Workload) -> Result<f64, WorkloadError> {
    byte_entropy(&w.bytes)
}
