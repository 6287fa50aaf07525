//! Timed encryption runs and the four case-study scenarios.
//!
//! Protocol: the key schedule and workload buffer are prepared before any
//! timing. Each run encrypts the whole buffer (ECB + padding, or RC4 from a
//! fresh post-schedule state) into a reused output buffer. `warmup` untimed
//! runs precede `reps` timed runs on the monotonic clock, and the median is
//! recorded. Padding is inside the timed region.

use std::collections::BTreeMap;
use std::hint::black_box;
use std::io::{BufRead, Write};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cipher::{make_cipher_state, CipherError, KeyMaterial};
use crate::mode::{ecb_encrypt_into, ecb_output_len, ModeError};
use crate::registry::{info, CipherId};
use crate::workload::{generate_workload, Workload, WorkloadError, WorkloadKind, WorkloadSpec};

pub const MIB: u64 = 1 << 20;
pub const DEFAULT_REPS: u32 = 5;
pub const DEFAULT_WARMUP: u32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("case study configuration mismatch: {0}")]
    ConfigMismatch(String),
    #[error("reps must be at least 1")]
    NoReps,
    #[error(transparent)]
    Cipher(#[from] CipherError),
    #[error(transparent)]
    Mode(#[from] ModeError),
    #[error(transparent)]
    Workload(#[from] WorkloadError),
    #[error("sample I/O: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed sample record: {0}")]
    Parse(String),
}

/// One timed measurement: median of `reps` runs after `warmup` runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchmarkSample {
    pub cipher: CipherId,
    pub key_bits: u32,
    pub workload_kind: WorkloadKind,
    pub size_bytes: u64,
    pub elapsed_ns: u64,
    pub reps: u32,
    pub warmup: u32,
}

/// A sample plus the raw per-rep timings it was reduced from.
#[derive(Debug, Clone)]
pub struct Measurement {
    pub sample: BenchmarkSample,
    pub raw_ns: Vec<u64>,
}

/// Encryption rate in MiB/s (2^20 bytes per MiB).
pub fn encryption_rate(s: &BenchmarkSample) -> f64 {
    rate_mib_s(s.size_bytes, s.elapsed_ns)
}

pub fn rate_mib_s(size_bytes: u64, elapsed_ns: u64) -> f64 {
    (size_bytes as f64 / MIB as f64) / (elapsed_ns as f64 / 1e9)
}

/// Median of a non-empty set; even counts average the middle pair.
pub fn median_ns(raw: &[u64]) -> u64 {
    let mut v = raw.to_vec();
    v.sort_unstable();
    let n = v.len();
    assert!(n > 0, "median of empty set");
    if n % 2 == 1 {
        v[n / 2]
    } else {
        ((v[n / 2 - 1] as u128 + v[n / 2] as u128) / 2) as u64
    }
}

/// Time encryption of an arbitrary payload (may be empty).
pub fn time_payload(
    key: &KeyMaterial,
    payload: &[u8],
    reps: u32,
    warmup: u32,
) -> Result<Vec<u64>, BenchError> {
    if reps == 0 {
        return Err(BenchError::NoReps);
    }
    let fresh = make_cipher_state(key)?;
    let mut state = fresh.clone();
    let mut out = Vec::with_capacity(ecb_output_len(&fresh, payload.len()));
    for _ in 0..warmup {
        state.clone_from(&fresh);
        ecb_encrypt_into(&mut state, payload, &mut out)?;
        black_box(&out);
    }
    let mut raw = Vec::with_capacity(reps as usize);
    for _ in 0..reps {
        state.clone_from(&fresh);
        let start = Instant::now();
        ecb_encrypt_into(&mut state, black_box(payload), &mut out)?;
        black_box(&out);
        let ns = start.elapsed().as_nanos().min(u64::MAX as u128) as u64;
        raw.push(ns.max(1));
    }
    Ok(raw)
}

pub fn time_encryption_detailed(
    key: &KeyMaterial,
    w: &Workload,
    reps: u32,
    warmup: u32,
) -> Result<Measurement, BenchError> {
    let raw_ns = time_payload(key, &w.bytes, reps, warmup)?;
    let sample = BenchmarkSample {
        cipher: key.cipher(),
        key_bits: key.key_bits(),
        workload_kind: w.spec.kind,
        size_bytes: w.bytes.len() as u64,
        elapsed_ns: median_ns(&raw_ns).max(1),
        reps,
        warmup,
    };
    Ok(Measurement { sample, raw_ns })
}

pub fn time_encryption(
    key: &KeyMaterial,
    w: &Workload,
    reps: u32,
    warmup: u32,
) -> Result<BenchmarkSample, BenchError> {
    Ok(time_encryption_detailed(key, w, reps, warmup)?.sample)
}

/// Deterministic benchmark key for (cipher, key bits) under `seed`.
pub fn bench_key(cipher: CipherId, key_bits: u32, seed: u64) -> Result<KeyMaterial, CipherError> {
    let tag = ((cipher as u64) << 32) | key_bits as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    KeyMaterial::random(cipher, key_bits, &mut rng)
}

/// Parameters for one of the four case studies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseStudyConfig {
    pub study: u8,
    pub ciphers: Vec<CipherId>,
    pub sizes: Vec<u64>,
    pub kinds: Vec<WorkloadKind>,
    /// Keys per cipher for study 4 and custom runs; other studies use each
    /// cipher's minimum key size.
    pub key_bits_sweep: BTreeMap<CipherId, Vec<u32>>,
    pub reps: u32,
    pub warmup: u32,
    pub seed: u64,
}

impl CaseStudyConfig {
    /// Desk-scale defaults for `study` (1..=4).
    pub fn defaults(study: u8) -> Result<Self, BenchError> {
        let mut cfg = CaseStudyConfig {
            study,
            ciphers: CipherId::ALL.to_vec(),
            sizes: vec![],
            kinds: vec![],
            key_bits_sweep: BTreeMap::new(),
            reps: DEFAULT_REPS,
            warmup: DEFAULT_WARMUP,
            seed: 2013,
        };
        match study {
            1 => {
                cfg.sizes = vec![MIB];
                cfg.kinds = WorkloadKind::ALL.to_vec();
            }
            2 => {
                cfg.sizes = [1, 2, 4, 8, 16].iter().map(|m| m * MIB).collect();
                cfg.kinds = vec![WorkloadKind::MediaLike];
            }
            3 => {
                cfg.sizes = vec![4 * MIB];
                cfg.kinds = vec![WorkloadKind::ZerosSparse, WorkloadKind::RandomDense];
            }
            4 => {
                cfg.sizes = vec![4 * MIB];
                cfg.kinds = vec![WorkloadKind::MediaLike];
                cfg.key_bits_sweep = default_key_sweep();
            }
            other => return Err(BenchError::ConfigMismatch(format!("no case study {other}"))),
        }
        Ok(cfg)
    }

    /// A free-form grid (study 0): every size x kind x cipher, with keys from
    /// `key_bits_sweep` or the cipher minimum.
    pub fn custom(ciphers: Vec<CipherId>, sizes: Vec<u64>, kinds: Vec<WorkloadKind>) -> Self {
        CaseStudyConfig {
            study: 0,
            ciphers,
            sizes,
            kinds,
            key_bits_sweep: BTreeMap::new(),
            reps: DEFAULT_REPS,
            warmup: DEFAULT_WARMUP,
            seed: 2013,
        }
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let bad = |m: String| Err(BenchError::ConfigMismatch(m));
        if self.study > 4 {
            return bad(format!("no case study {}", self.study));
        }
        if self.ciphers.is_empty() {
            return bad("at least one cipher is required".into());
        }
        if self.reps == 0 {
            return Err(BenchError::NoReps);
        }
        if self.sizes.iter().any(|&s| s == 0) {
            return bad("sizes must be positive".into());
        }
        for (c, sweep) in &self.key_bits_sweep {
            let sizes = info(*c).key_sizes_bits;
            if let Some(b) = sweep.iter().find(|&&b| !sizes.contains(b)) {
                return bad(format!("{c} does not support {b}-bit keys"));
            }
        }
        match self.study {
            0 => {
                if self.sizes.is_empty() || self.kinds.is_empty() {
                    return bad("a custom run needs at least one size and one kind".into());
                }
            }
            1 => {
                if self.sizes.len() != 1 {
                    return bad("study 1 holds the size fixed: give exactly one size".into());
                }
                if self.kinds.is_empty() {
                    return bad("study 1 needs at least one workload kind".into());
                }
            }
            2 => {
                if self.sizes.is_empty() {
                    return bad("study 2 needs a list of sizes".into());
                }
                if self.kinds.len() != 1 {
                    return bad("study 2 holds the kind fixed: give exactly one kind".into());
                }
            }
            3 => {
                if self.sizes.len() != 1 {
                    return bad("study 3 holds the size fixed: give exactly one size".into());
                }
                if self.kinds.is_empty()
                    || self.kinds.iter().any(|k| {
                        !matches!(k, WorkloadKind::ZerosSparse | WorkloadKind::RandomDense)
                    })
                {
                    return bad("study 3 compares zeros_sparse and random_dense only".into());
                }
            }
            _ => {
                if self.sizes.len() != 1 || self.kinds.len() != 1 {
                    return bad("study 4 holds the workload fixed: one size and one kind".into());
                }
                for c in &self.ciphers {
                    if self.key_bits_sweep.get(c).map_or(true, Vec::is_empty) {
                        return bad(format!("study 4 has no key sweep for {c}"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Number of samples a run will produce.
    pub fn sample_count(&self) -> usize {
        let workloads = self.sizes.len() * self.kinds.len();
        workloads * self.ciphers.iter().map(|&c| self.key_bits_for(c).len()).sum::<usize>()
    }

    fn key_bits_for(&self, cipher: CipherId) -> Vec<u32> {
        match (self.study, self.key_bits_sweep.get(&cipher)) {
            (4, sweep) => sweep.cloned().unwrap_or_default(),
            (0, Some(sweep)) if !sweep.is_empty() => sweep.clone(),
            _ => vec![info(cipher).min_key_bits()],
        }
    }
}

pub fn default_key_sweep() -> BTreeMap<CipherId, Vec<u32>> {
    BTreeMap::from([
        (CipherId::Aes, vec![128, 192, 256]),
        (CipherId::Des, vec![56]),
        (CipherId::Tdes, vec![112, 168]),
        (CipherId::Rc2, vec![40, 64, 128, 256, 512, 1024]),
        (CipherId::Blowfish, vec![32, 64, 128, 256, 448]),
        (CipherId::Skipjack, vec![80]),
        (CipherId::Rc4, vec![40, 128, 256, 1024, 2048]),
    ])
}

/// Run a case study, calling `on_sample` after each measurement.
///
/// Workloads are generated one at a time before their timed runs; the
/// measurements themselves run sequentially on the calling thread.
pub fn run_case_study_with(
    cfg: &CaseStudyConfig,
    mut on_sample: impl FnMut(&BenchmarkSample),
) -> Result<Vec<BenchmarkSample>, BenchError> {
    cfg.validate()?;
    let mut samples = Vec::with_capacity(cfg.sample_count());
    for &kind in &cfg.kinds {
        for &size in &cfg.sizes {
            let w = generate_workload(WorkloadSpec::new(kind, size, cfg.seed))?;
            for &cipher in &cfg.ciphers {
                for bits in cfg.key_bits_for(cipher) {
                    let key = bench_key(cipher, bits, cfg.seed)?;
                    let s = time_encryption(&key, &w, cfg.reps, cfg.warmup)?;
                    on_sample(&s);
                    samples.push(s);
                }
            }
        }
    }
    Ok(samples)
}

pub fn run_case_study(cfg: &CaseStudyConfig) -> Result<Vec<BenchmarkSample>, BenchError> {
    run_case_study_with(cfg, |_| {})
}

/// Flat output row: the sample plus its derived rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub cipher: CipherId,
    pub key_bits: u32,
    pub kind: WorkloadKind,
    pub size_bytes: u64,
    pub elapsed_ns: u64,
    pub rate_mib_s: f64,
    pub reps: u32,
    pub warmup: u32,
}

impl From<&BenchmarkSample> for SampleRecord {
    fn from(s: &BenchmarkSample) -> Self {
        SampleRecord {
            cipher: s.cipher,
            key_bits: s.key_bits,
            kind: s.workload_kind,
            size_bytes: s.size_bytes,
            elapsed_ns: s.elapsed_ns,
            rate_mib_s: encryption_rate(s),
            reps: s.reps,
            warmup: s.warmup,
        }
    }
}

impl From<SampleRecord> for BenchmarkSample {
    fn from(r: SampleRecord) -> Self {
        BenchmarkSample {
            cipher: r.cipher,
            key_bits: r.key_bits,
            workload_kind: r.kind,
            size_bytes: r.size_bytes,
            elapsed_ns: r.elapsed_ns,
            reps: r.reps,
            warmup: r.warmup,
        }
    }
}

pub fn write_csv<W: Write>(samples: &[BenchmarkSample], out: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    for s in samples {
        w.serialize(SampleRecord::from(s)).map_err(|e| BenchError::Parse(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_jsonl<W: Write>(samples: &[BenchmarkSample], mut out: W) -> Result<(), BenchError> {
    for s in samples {
        let line = serde_json::to_string(&SampleRecord::from(s))
            .map_err(|e| BenchError::Parse(e.to_string()))?;
        writeln!(out, "{line}")?;
    }
    Ok(())
}

pub fn write_txt<W: Write>(samples: &[BenchmarkSample], mut out: W) -> Result<(), BenchError> {
    writeln!(
        out,
        "{:<9} {:>8} {:<13} {:>12} {:>14} {:>11} {:>4} {:>6}",
        "cipher", "key_bits", "kind", "size_bytes", "elapsed_ns", "rate_MiB/s", "reps", "warmup"
    )?;
    for s in samples {
        writeln!(
            out,
            "{:<9} {:>8} {:<13} {:>12} {:>14} {:>11.2} {:>4} {:>6}",
            s.cipher.name(),
            s.key_bits,
            s.workload_kind.name(),
            s.size_bytes,
            s.elapsed_ns,
            encryption_rate(s),
            s.reps,
            s.warmup
        )?;
    }
    Ok(())
}

pub fn read_jsonl<R: BufRead>(input: R) -> Result<Vec<BenchmarkSample>, BenchError> {
    let mut samples = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: SampleRecord = serde_json::from_str(&line)
            .map_err(|e| BenchError::Parse(format!("line {}: {e}", i + 1)))?;
        samples.push(rec.into());
    }
    Ok(samples)
}

pub fn read_csv<R: std::io::Read>(input: R) -> Result<Vec<BenchmarkSample>, BenchError> {
    let mut r = csv::Reader::from_reader(input);
    r.deserialize::<SampleRecord>()
        .map(|rec| rec.map(Into::into).map_err(|e| BenchError::Parse(e.to_string())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rate_unit_definition() {
        assert_eq!(rate_mib_s(MIB, 1_000_000_000), 1.0);
    }

    #[test]
    fn rate_reproduces_published_rows() {
        // 72,000,118 B in 634 ms and 61,392,454 B in 216 ms.
        assert!((rate_mib_s(72_000_118, 634_000_000) - 108.28).abs() <= 0.05);
        assert!((rate_mib_s(61_392_454, 216_000_000) - 271.01).abs() <= 0.1);
    }

    #[test]
    fn median_rules() {
        assert_eq!(median_ns(&[5, 1, 3]), 3);
        assert_eq!(median_ns(&[4, 1, 3, 2]), 2);
        assert_eq!(median_ns(&[7]), 7);
    }

    #[test]
    fn median_within_raw_bounds() {
        let key = bench_key(CipherId::Aes, 128, 1).unwrap();
        let w = generate_workload(WorkloadSpec::new(WorkloadKind::RandomDense, 64 * 1024, 1)).unwrap();
        let m = time_encryption_detailed(&key, &w, 5, 1).unwrap();
        assert_eq!(m.raw_ns.len(), 5);
        let lo = *m.raw_ns.iter().min().unwrap();
        let hi = *m.raw_ns.iter().max().unwrap();
        assert!(lo <= m.sample.elapsed_ns && m.sample.elapsed_ns <= hi);
        assert!(m.sample.elapsed_ns > 0);
        assert_eq!(m.sample.size_bytes, 64 * 1024);
        assert_eq!((m.sample.reps, m.sample.warmup), (5, 1));
    }

    #[test]
    fn key_schedule_not_timed() {
        // Blowfish's schedule runs 521 block encryptions; an empty-payload
        // run must not pay for it.
        let key = bench_key(CipherId::Blowfish, 448, 5).unwrap();
        let sched: Vec<u64> = (0..9)
            .map(|_| {
                let t = Instant::now();
                black_box(make_cipher_state(black_box(&key)).unwrap());
                t.elapsed().as_nanos() as u64
            })
            .collect();
        let empty = median_ns(&time_payload(&key, &[], 9, 2).unwrap());
        assert!(empty * 4 < median_ns(&sched), "empty {empty} ns vs schedule {} ns", median_ns(&sched));

        let aes128 = median_ns(&time_payload(&bench_key(CipherId::Aes, 128, 5).unwrap(), &[], 25, 5).unwrap());
        let aes256 = median_ns(&time_payload(&bench_key(CipherId::Aes, 256, 5).unwrap(), &[], 25, 5).unwrap());
        assert!(aes128 < 50_000 && aes256 < 50_000, "{aes128} {aes256}");
    }

    #[test]
    fn zero_reps_rejected() {
        let key = bench_key(CipherId::Rc4, 40, 1).unwrap();
        assert!(matches!(time_payload(&key, b"abc", 0, 0), Err(BenchError::NoReps)));
    }

    #[test]
    fn bench_keys_are_deterministic_and_sized() {
        for id in CipherId::ALL {
            let bits = info(id).min_key_bits();
            let a = bench_key(id, bits, 3).unwrap();
            assert_eq!(a, bench_key(id, bits, 3).unwrap());
            assert_eq!(a.key_bits(), bits);
        }
        assert_ne!(
            bench_key(CipherId::Aes, 128, 3).unwrap().key_bytes(),
            bench_key(CipherId::Aes, 128, 4).unwrap().key_bytes()
        );
    }

    #[test]
    fn default_configs_validate_and_count() {
        for study in 1..=4 {
            CaseStudyConfig::defaults(study).unwrap().validate().unwrap();
        }
        assert_eq!(CaseStudyConfig::defaults(1).unwrap().sample_count(), 35);
        assert_eq!(CaseStudyConfig::defaults(2).unwrap().sample_count(), 35);
        assert_eq!(CaseStudyConfig::defaults(3).unwrap().sample_count(), 14);
        assert_eq!(CaseStudyConfig::defaults(4).unwrap().sample_count(), 3 + 1 + 2 + 6 + 5 + 1 + 5);
        assert!(CaseStudyConfig::defaults(5).is_err());
    }

    #[test]
    fn config_mismatches() {
        let mut c = CaseStudyConfig::defaults(2).unwrap();
        c.kinds = vec![];
        assert!(matches!(c.validate(), Err(BenchError::ConfigMismatch(_))));

        let mut c = CaseStudyConfig::defaults(3).unwrap();
        c.kinds.push(WorkloadKind::TextAnsi);
        assert!(matches!(c.validate(), Err(BenchError::ConfigMismatch(_))));

        let mut c = CaseStudyConfig::defaults(4).unwrap();
        c.key_bits_sweep.remove(&CipherId::Rc4);
        assert!(matches!(c.validate(), Err(BenchError::ConfigMismatch(_))));

        let mut c = CaseStudyConfig::defaults(4).unwrap();
        c.key_bits_sweep.insert(CipherId::Skipjack, vec![128]);
        assert!(matches!(c.validate(), Err(BenchError::ConfigMismatch(_))));

        let mut c = CaseStudyConfig::defaults(1).unwrap();
        c.sizes = vec![1, 2];
        assert!(matches!(c.validate(), Err(BenchError::ConfigMismatch(_))));

        let mut c = CaseStudyConfig::custom(vec![CipherId::Des], vec![8], vec![WorkloadKind::TextAnsi]);
        c.validate().unwrap();
        c.key_bits_sweep.insert(CipherId::Des, vec![64]);
        assert!(matches!(c.validate(), Err(BenchError::ConfigMismatch(_))));

        let mut c = CaseStudyConfig::defaults(1).unwrap();
        c.ciphers.clear();
        assert!(matches!(c.validate(), Err(BenchError::ConfigMismatch(_))));
    }

    #[test]
    fn small_study_one_counts() {
        let mut c = CaseStudyConfig::defaults(1).unwrap();
        c.sizes = vec![4096];
        c.reps = 1;
        c.warmup = 0;
        let s = run_case_study(&c).unwrap();
        assert_eq!(s.len(), 35);
        for cipher in CipherId::ALL {
            assert_eq!(s.iter().filter(|x| x.cipher == cipher).count(), 5);
            assert!(s.iter().filter(|x| x.cipher == cipher).all(|x| x.key_bits == info(cipher).min_key_bits()));
        }
    }

    #[test]
    fn small_study_four_sweeps_keys() {
        let mut c = CaseStudyConfig::defaults(4).unwrap();
        c.sizes = vec![2048];
        c.ciphers = vec![CipherId::Aes];
        c.reps = 1;
        let s = run_case_study(&c).unwrap();
        assert_eq!(s.iter().map(|x| x.key_bits).collect::<Vec<_>>(), vec![128, 192, 256]);
    }

    #[test]
    fn record_formats_roundtrip() {
        let samples = vec![
            BenchmarkSample {
                cipher: CipherId::Tdes,
                key_bits: 112,
                workload_kind: WorkloadKind::TextUtf16,
                size_bytes: 12345,
                elapsed_ns: 999,
                reps: 5,
                warmup: 2,
            },
            BenchmarkSample {
                cipher: CipherId::Rc4,
                key_bits: 40,
                workload_kind: WorkloadKind::ZerosSparse,
                size_bytes: 1,
                elapsed_ns: 1,
                reps: 1,
                warmup: 0,
            },
        ];
        let mut csv_buf = Vec::new();
        write_csv(&samples, &mut csv_buf).unwrap();
        let text = String::from_utf8(csv_buf.clone()).unwrap();
        assert!(text.starts_with("cipher,key_bits,kind,size_bytes,elapsed_ns,rate_mib_s,reps,warmup"));
        assert_eq!(read_csv(csv_buf.as_slice()).unwrap(), samples);

        let mut jl = Vec::new();
        write_jsonl(&samples, &mut jl).unwrap();
        assert_eq!(read_jsonl(jl.as_slice()).unwrap(), samples);
        assert!(String::from_utf8(jl).unwrap().contains("\"cipher\":\"TDES\""));
    }
}
