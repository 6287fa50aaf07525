//! Affine time-vs-bytes fits per (cipher, key bits) and their on-disk form.
//!
//! Profiles are JSON documents. Reals are written as decimal strings using
//! the shortest representation that parses back to the same `f64`, so a
//! save/load cycle is exact.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use chrono::{DateTime, SubsecRound, Utc};
use serde::{Deserialize, Serialize};

use crate::bench::BenchmarkSample;
use crate::registry::CipherId;
use crate::workload::PRNG_NAME;

pub const PROFILE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProfileError {
    #[error("{cipher}-{key_bits}: need at least 2 samples, have {have}")]
    InsufficientSamples { cipher: CipherId, key_bits: u32, have: usize },
    #[error("{cipher}-{key_bits}: all samples share size {size_bytes}")]
    DegenerateSizes { cipher: CipherId, key_bits: u32, size_bytes: u64 },
    #[error("{cipher}-{key_bits}: fitted slope {slope} ns/byte is not positive")]
    NonPositiveSlope { cipher: CipherId, key_bits: u32, slope: f64 },
    #[error("no fit for {cipher}-{key_bits} in profile")]
    NoFitAvailable { cipher: CipherId, key_bits: u32 },
    #[error("profile I/O failed: {0}")]
    IoFailure(String),
    #[error("profile schema violation: {0}")]
    SchemaViolation(String),
}

/// Serde adapter writing `f64` as a round-trippable decimal string.
mod real_str {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        let text = String::deserialize(d)?;
        let v: f64 = text.trim().parse().map_err(|_| D::Error::custom(format!("bad real `{text}`")))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(D::Error::custom(format!("non-finite real `{text}`")))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearFit {
    pub cipher: CipherId,
    pub key_bits: u32,
    #[serde(with = "real_str")]
    pub slope_ns_per_byte: f64,
    #[serde(with = "real_str")]
    pub intercept_ns: f64,
    #[serde(with = "real_str")]
    pub r_squared: f64,
    pub n_samples: u32,
}

impl LinearFit {
    /// Predicted nanoseconds as a real, clamped at zero.
    pub fn predict_ns_f64(&self, size_bytes: u64) -> f64 {
        (self.slope_ns_per_byte * size_bytes as f64 + self.intercept_ns).max(0.0)
    }

    pub fn predict_ns(&self, size_bytes: u64) -> u64 {
        self.predict_ns_f64(size_bytes).round() as u64
    }

    /// Throughput implied by the slope, in MiB/s.
    pub fn rate_mib_s(&self) -> f64 {
        1e9 / (self.slope_ns_per_byte * (1u64 << 20) as f64)
    }

    fn check(&self) -> Result<(), String> {
        let id = format!("{}-{}", self.cipher, self.key_bits);
        if !(self.slope_ns_per_byte > 0.0) {
            return Err(format!("{id}: slope must be positive"));
        }
        if !(0.0..=1.0).contains(&self.r_squared) {
            return Err(format!("{id}: r_squared outside [0, 1]"));
        }
        if self.n_samples < 2 {
            return Err(format!("{id}: n_samples below 2"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchmarkProfile {
    pub version: u32,
    pub prng_name: String,
    pub created_at: DateTime<Utc>,
    pub host_note: String,
    pub samples: Vec<BenchmarkSample>,
    pub fits: Vec<LinearFit>,
}

type GroupKey = (CipherId, u32);

fn group(samples: &[BenchmarkSample]) -> BTreeMap<GroupKey, Vec<&BenchmarkSample>> {
    let mut groups: BTreeMap<GroupKey, Vec<&BenchmarkSample>> = BTreeMap::new();
    for s in samples {
        groups.entry((s.cipher, s.key_bits)).or_default().push(s);
    }
    groups
}

/// Ordinary least squares of elapsed_ns on size_bytes for one group.
fn fit_group(key: GroupKey, group: &[&BenchmarkSample]) -> Result<LinearFit, ProfileError> {
    let (cipher, key_bits) = key;
    if group.len() < 2 {
        return Err(ProfileError::InsufficientSamples { cipher, key_bits, have: group.len() });
    }
    if group.iter().all(|s| s.size_bytes == group[0].size_bytes) {
        return Err(ProfileError::DegenerateSizes { cipher, key_bits, size_bytes: group[0].size_bytes });
    }
    let n = group.len() as f64;
    let mean_x = group.iter().map(|s| s.size_bytes as f64).sum::<f64>() / n;
    let mean_y = group.iter().map(|s| s.elapsed_ns as f64).sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for s in group {
        let dx = s.size_bytes as f64 - mean_x;
        let dy = s.elapsed_ns as f64 - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let slope = sxy / sxx;
    if !(slope > 0.0) {
        return Err(ProfileError::NonPositiveSlope { cipher, key_bits, slope });
    }
    let intercept = mean_y - slope * mean_x;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0) };
    Ok(LinearFit {
        cipher,
        key_bits,
        slope_ns_per_byte: slope,
        intercept_ns: intercept,
        r_squared,
        n_samples: group.len() as u32,
    })
}

/// One fit per (cipher, key_bits) group, in group order. Fails on the first
/// group that cannot be fitted.
pub fn fit_profile(samples: &[BenchmarkSample]) -> Result<Vec<LinearFit>, ProfileError> {
    if samples.len() < 2 {
        let (cipher, key_bits) = samples.first().map_or((CipherId::Aes, 0), |s| (s.cipher, s.key_bits));
        return Err(ProfileError::InsufficientSamples { cipher, key_bits, have: samples.len() });
    }
    group(samples).into_iter().map(|(k, g)| fit_group(k, &g)).collect()
}

/// Fits every group that can be fitted; returns the fits and the per-group
/// errors for the rest.
pub fn fit_available(samples: &[BenchmarkSample]) -> (Vec<LinearFit>, Vec<ProfileError>) {
    let mut fits = Vec::new();
    let mut skipped = Vec::new();
    for (k, g) in group(samples) {
        match fit_group(k, &g) {
            Ok(f) => fits.push(f),
            Err(e) => skipped.push(e),
        }
    }
    (fits, skipped)
}

pub fn predict_time(
    profile: &BenchmarkProfile,
    cipher: CipherId,
    key_bits: u32,
    size_bytes: u64,
) -> Result<u64, ProfileError> {
    Ok(profile.fit(cipher, key_bits)?.predict_ns(size_bytes))
}

impl BenchmarkProfile {
    pub fn empty(host_note: impl Into<String>) -> Self {
        BenchmarkProfile {
            version: PROFILE_VERSION,
            prng_name: PRNG_NAME.to_string(),
            created_at: Utc::now().trunc_subsecs(6),
            host_note: host_note.into(),
            samples: Vec::new(),
            fits: Vec::new(),
        }
    }

    /// Profile holding `samples` and a fit for every group that admits one.
    pub fn from_samples(samples: Vec<BenchmarkSample>, host_note: impl Into<String>) -> (Self, Vec<ProfileError>) {
        let (fits, skipped) = fit_available(&samples);
        let mut p = Self::empty(host_note);
        p.samples = samples;
        p.fits = fits;
        (p, skipped)
    }

    pub fn fit(&self, cipher: CipherId, key_bits: u32) -> Result<&LinearFit, ProfileError> {
        self.fits
            .iter()
            .find(|f| f.cipher == cipher && f.key_bits == key_bits)
            .ok_or(ProfileError::NoFitAvailable { cipher, key_bits })
    }

    /// Every (cipher, key_bits) pair that appears in a sample or a fit.
    pub fn profiled_pairs(&self) -> Vec<(CipherId, u32)> {
        let set: BTreeSet<GroupKey> = self
            .samples
            .iter()
            .map(|s| (s.cipher, s.key_bits))
            .chain(self.fits.iter().map(|f| (f.cipher, f.key_bits)))
            .collect();
        set.into_iter().collect()
    }

    /// Check version, fit invariants, uniqueness and that each fit matches a
    /// refit of its stored samples.
    pub fn validate(&self) -> Result<(), ProfileError> {
        let bad = |m: String| Err(ProfileError::SchemaViolation(m));
        if self.version != PROFILE_VERSION {
            return bad(format!("unsupported version {}", self.version));
        }
        let groups = group(&self.samples);
        let mut seen = BTreeSet::new();
        for f in &self.fits {
            f.check().map_err(ProfileError::SchemaViolation)?;
            if !seen.insert((f.cipher, f.key_bits)) {
                return bad(format!("duplicate fit for {}-{}", f.cipher, f.key_bits));
            }
            let Some(g) = groups.get(&(f.cipher, f.key_bits)) else {
                return bad(format!("fit {}-{} has no samples", f.cipher, f.key_bits));
            };
            let refit = fit_group((f.cipher, f.key_bits), g)
                .map_err(|e| ProfileError::SchemaViolation(format!("fit not derivable: {e}")))?;
            if !(close(refit.slope_ns_per_byte, f.slope_ns_per_byte)
                && close(refit.intercept_ns, f.intercept_ns)
                && refit.n_samples == f.n_samples)
            {
                return bad(format!("fit {}-{} disagrees with its samples", f.cipher, f.key_bits));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String, ProfileError> {
        serde_json::to_string_pretty(self).map_err(|e| ProfileError::SchemaViolation(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self, ProfileError> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| ProfileError::SchemaViolation(e.to_string()))?;
        match value.get("version").and_then(serde_json::Value::as_u64) {
            Some(v) if v == PROFILE_VERSION as u64 => {}
            Some(v) => return Err(ProfileError::SchemaViolation(format!("unsupported version {v}"))),
            None => return Err(ProfileError::SchemaViolation("missing or non-integer `version`".into())),
        }
        let p: BenchmarkProfile =
            serde_json::from_value(value).map_err(|e| ProfileError::SchemaViolation(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1e-300)
}

pub fn save_profile(profile: &BenchmarkProfile, dest: &Path) -> Result<(), ProfileError> {
    let text = profile.to_json()?;
    fs::write(dest, text + "\n").map_err(|e| ProfileError::IoFailure(format!("{}: {e}", dest.display())))
}

pub fn load_profile(src: &Path) -> Result<BenchmarkProfile, ProfileError> {
    let text = fs::read_to_string(src).map_err(|e| ProfileError::IoFailure(format!("{}: {e}", src.display())))?;
    BenchmarkProfile::from_json(&text)
}
