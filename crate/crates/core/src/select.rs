//! Constraint-filtered argmin of predicted encryption time.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::profile::BenchmarkProfile;
use crate::registry::{info, CipherId, CipherType};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RequiredType {
    Block,
    Stream,
    Any,
}

impl RequiredType {
    pub fn admits(self, t: CipherType) -> bool {
        match self {
            RequiredType::Any => true,
            RequiredType::Block => t == CipherType::Block,
            RequiredType::Stream => t == CipherType::Stream,
        }
    }
}

impl fmt::Display for RequiredType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RequiredType::Block => "block",
            RequiredType::Stream => "stream",
            RequiredType::Any => "any",
        })
    }
}

impl FromStr for RequiredType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "block" => Ok(RequiredType::Block),
            "stream" => Ok(RequiredType::Stream),
            "any" => Ok(RequiredType::Any),
            other => Err(format!("unknown cipher type `{other}` (block, stream, any)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectionConstraint {
    pub required_type: RequiredType,
    pub min_key_bits: u32,
    pub allowed_ciphers: BTreeSet<CipherId>,
    pub size_bytes: u64,
}

impl SelectionConstraint {
    /// All seven ciphers allowed, any type, no key floor.
    pub fn new(size_bytes: u64) -> Self {
        SelectionConstraint {
            required_type: RequiredType::Any,
            min_key_bits: 0,
            allowed_ciphers: CipherId::ALL.into_iter().collect(),
            size_bytes,
        }
    }

    pub fn validate(&self) -> Result<(), SelectError> {
        if self.allowed_ciphers.is_empty() {
            return Err(SelectError::InvalidConstraint("allowed cipher set is empty".into()));
        }
        if self.size_bytes == 0 {
            return Err(SelectError::InvalidConstraint("size must be positive".into()));
        }
        Ok(())
    }

    /// First constraint that (cipher, key_bits) violates, if any.
    pub fn violation(&self, cipher: CipherId, key_bits: u32) -> Option<Rejection> {
        let actual = info(cipher).cipher_type;
        if !self.allowed_ciphers.contains(&cipher) {
            Some(Rejection::NotAllowed)
        } else if !self.required_type.admits(actual) {
            Some(Rejection::WrongType { required: self.required_type, actual })
        } else if key_bits < self.min_key_bits {
            Some(Rejection::KeyTooShort { key_bits, min_key_bits: self.min_key_bits })
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Rejection {
    NotAllowed,
    WrongType { required: RequiredType, actual: CipherType },
    KeyTooShort { key_bits: u32, min_key_bits: u32 },
    NoFit,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::NotAllowed => f.write_str("not in allowed set"),
            Rejection::WrongType { required, actual } => {
                let actual = match actual {
                    CipherType::Block => "block",
                    CipherType::Stream => "stream",
                };
                write!(f, "{actual} cipher, {required} required")
            }
            Rejection::KeyTooShort { key_bits, min_key_bits } => {
                write!(f, "{key_bits}-bit key below minimum {min_key_bits}")
            }
            Rejection::NoFit => f.write_str("no fit in profile"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    /// 1-based position in the ranking; rank 1 is the winner.
    Ranked { rank: u32 },
    Rejected { reason: Rejection },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationaleEntry {
    pub cipher: CipherId,
    pub key_bits: u32,
    pub predicted_ns: Option<u64>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectionDecision {
    pub cipher: CipherId,
    pub key_bits: u32,
    pub predicted_ns: u64,
    /// Ranked entries in rank order, then rejected ones.
    pub rationale: Vec<RationaleEntry>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SelectError {
    #[error("no cipher satisfies the constraint")]
    NoFeasibleCipher { rationale: Vec<RationaleEntry> },
    #[error("no candidate has a fit in the profile")]
    NoFitAvailable { rationale: Vec<RationaleEntry> },
    #[error("invalid constraint: {0}")]
    InvalidConstraint(String),
}

/// Profiled (cipher, key_bits) pairs that satisfy the constraint.
pub fn candidates(profile: &BenchmarkProfile, c: &SelectionConstraint) -> Vec<(CipherId, u32)> {
    profile
        .profiled_pairs()
        .into_iter()
        .filter(|&(cipher, bits)| c.violation(cipher, bits).is_none())
        .collect()
}

/// Total order used for ranking: predicted time, then larger key, then id.
pub fn rank_order(a: (f64, CipherId, u32), b: (f64, CipherId, u32)) -> std::cmp::Ordering {
    a.0.total_cmp(&b.0).then(b.2.cmp(&a.2)).then(a.1.cmp(&b.1))
}

pub fn select(profile: &BenchmarkProfile, c: &SelectionConstraint) -> Result<SelectionDecision, SelectError> {
    c.validate()?;
    let mut ranked: Vec<(f64, CipherId, u32)> = Vec::new();
    let mut rejected: Vec<RationaleEntry> = Vec::new();
    let mut any_candidate = false;
    for (cipher, key_bits) in profile.profiled_pairs() {
        let fit = profile.fit(cipher, key_bits).ok();
        let reason = c.violation(cipher, key_bits);
        any_candidate |= reason.is_none();
        match (reason, fit) {
            (None, Some(f)) => ranked.push((f.predict_ns_f64(c.size_bytes), cipher, key_bits)),
            (reason, fit) => rejected.push(RationaleEntry {
                cipher,
                key_bits,
                predicted_ns: fit.map(|f| f.predict_ns(c.size_bytes)),
                verdict: Verdict::Rejected { reason: reason.unwrap_or(Rejection::NoFit) },
            }),
        }
    }
    ranked.sort_by(|a, b| rank_order(*a, *b));
    let mut rationale: Vec<RationaleEntry> = ranked
        .iter()
        .enumerate()
        .map(|(i, &(ns, cipher, key_bits))| RationaleEntry {
            cipher,
            key_bits,
            predicted_ns: Some(ns.round() as u64),
            verdict: Verdict::Ranked { rank: i as u32 + 1 },
        })
        .collect();
    rationale.extend(rejected);
    match ranked.first() {
        Some(&(ns, cipher, key_bits)) => Ok(SelectionDecision {
            cipher,
            key_bits,
            predicted_ns: ns.round() as u64,
            rationale,
        }),
        None if any_candidate => Err(SelectError::NoFitAvailable { rationale }),
        None => Err(SelectError::NoFeasibleCipher { rationale }),
    }
}

/// Registry-level check: for each cipher, the first constraint no key size
/// of that cipher can meet. Empty when at least one cipher could qualify.
pub fn registry_feasibility(c: &SelectionConstraint) -> Vec<(CipherId, Option<Rejection>)> {
    CipherId::ALL
        .into_iter()
        .map(|id| (id, c.violation(id, info(id).max_key_bits())))
        .collect()
}

pub fn is_registry_feasible(c: &SelectionConstraint) -> bool {
    registry_feasibility(c).iter().any(|(_, r)| r.is_none())
}

fn fmt_ns(ns: Option<u64>) -> String {
    match ns {
        Some(ns) => format!("{:.3}", ns as f64 / 1e6),
        None => "-".into(),
    }
}

fn write_rows(out: &mut String, rows: &[RationaleEntry]) {
    let _ = writeln!(out, "{:<9} {:>8} {:>15}  {}", "cipher", "key_bits", "predicted_ms", "status");
    for r in rows {
        let status = match r.verdict {
            Verdict::Ranked { rank } => format!("rank {rank}"),
            Verdict::Rejected { reason } => format!("rejected: {reason}"),
        };
        let _ = writeln!(out, "{:<9} {:>8} {:>15}  {}", r.cipher.name(), r.key_bits, fmt_ns(r.predicted_ns), status);
    }
}

/// Table of every profiled pair with its prediction and verdict, then the winner.
pub fn explain(d: &SelectionDecision) -> String {
    let mut out = String::new();
    write_rows(&mut out, &d.rationale);
    let _ = writeln!(
        out,
        "winner: {}-{} predicted {} ms ({} ns)",
        d.cipher,
        d.key_bits,
        fmt_ns(Some(d.predicted_ns)),
        d.predicted_ns
    );
    out
}

/// Report for a failed selection.
pub fn explain_failure(err: &SelectError) -> String {
    let mut out = String::new();
    match err {
        SelectError::NoFeasibleCipher { rationale } | SelectError::NoFitAvailable { rationale } => {
            write_rows(&mut out, rationale);
            let _ = writeln!(out, "no winner: {err}");
        }
        SelectError::InvalidConstraint(_) => {
            let _ = writeln!(out, "{err}");
        }
    }
    out
}

/// One line per cipher naming the constraint it cannot meet at any key size.
pub fn explain_infeasible(c: &SelectionConstraint) -> String {
    let mut out = String::new();
    for (id, reason) in registry_feasibility(c) {
        let _ = match reason {
            Some(Rejection::KeyTooShort { key_bits, min_key_bits }) => writeln!(
                out,
                "{:<9} rejected: largest key {key_bits} bits below minimum {min_key_bits}",
                id.name()
            ),
            Some(r) => writeln!(out, "{:<9} rejected: {r}", id.name()),
            None => writeln!(out, "{:<9} feasible", id.name()),
        };
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::BenchmarkSample;
    use crate::profile::LinearFit;
    use crate::workload::WorkloadKind;
    use proptest::prelude::*;

    const MB100: u64 = 100 * (1 << 20);

    fn fit(cipher: CipherId, key_bits: u32, slope: f64, intercept: f64) -> LinearFit {
        LinearFit { cipher, key_bits, slope_ns_per_byte: slope, intercept_ns: intercept, r_squared: 1.0, n_samples: 2 }
    }

    fn profile(fits: Vec<LinearFit>) -> BenchmarkProfile {
        let mut p = BenchmarkProfile::empty("test");
        p.fits = fits;
        p
    }

    /// Proportional fits through the 100 MB row of the published timings.
    fn table_row_profile() -> BenchmarkProfile {
        let row = [
            (CipherId::Aes, 128, 909.0),
            (CipherId::Des, 56, 2595.0),
            (CipherId::Tdes, 112, 7628.0),
            (CipherId::Rc2, 40, 2189.0),
            (CipherId::Blowfish, 32, 1223.0),
            (CipherId::Skipjack, 80, 3505.0),
            (CipherId::Rc4, 40, 372.0),
        ];
        profile(row.iter().map(|&(c, k, ms)| fit(c, k, ms * 1e6 / MB100 as f64, 0.0)).collect())
    }

    fn with_type(t: RequiredType, min: u32) -> SelectionConstraint {
        SelectionConstraint { required_type: t, min_key_bits: min, ..SelectionConstraint::new(MB100) }
    }

    #[test]
    fn published_row_choices() {
        let p = table_row_profile();
        let d = select(&p, &with_type(RequiredType::Any, 40)).unwrap();
        assert_eq!((d.cipher, d.key_bits), (CipherId::Rc4, 40));
        let d = select(&p, &with_type(RequiredType::Block, 0)).unwrap();
        assert_eq!((d.cipher, d.key_bits), (CipherId::Aes, 128));
        assert_eq!(d.predicted_ns, 909_000_000);
    }

    #[test]
    fn candidate_filters() {
        let mut p = table_row_profile();
        p.fits.push(fit(CipherId::Tdes, 168, 1.0, 0.0));
        let got = candidates(&p, &with_type(RequiredType::Block, 112));
        assert_eq!(got, vec![(CipherId::Aes, 128), (CipherId::Tdes, 112), (CipherId::Tdes, 168)]);

        let only_des = SelectionConstraint {
            allowed_ciphers: [CipherId::Des].into_iter().collect(),
            ..SelectionConstraint::new(5)
        };
        assert_eq!(candidates(&p, &only_des), vec![(CipherId::Des, 56)]);
        let d = select(&p, &only_des).unwrap();
        assert_eq!((d.cipher, d.key_bits), (CipherId::Des, 56));

        let stream = candidates(&p, &with_type(RequiredType::Stream, 0));
        assert!(stream.iter().all(|(c, _)| *c == CipherId::Rc4));
    }

    #[test]
    fn ties_prefer_larger_key_then_name() {
        let p = profile(vec![
            fit(CipherId::Tdes, 112, 1.0, 0.0),
            fit(CipherId::Tdes, 168, 1.0, 0.0),
            fit(CipherId::Blowfish, 168, 1.0, 0.0),
        ]);
        let d = select(&p, &SelectionConstraint::new(10)).unwrap();
        assert_eq!((d.cipher, d.key_bits), (CipherId::Blowfish, 168));
    }

    #[test]
    fn errors() {
        let p = table_row_profile();
        assert!(matches!(
            select(&p, &with_type(RequiredType::Stream, 4096)),
            Err(SelectError::NoFeasibleCipher { .. })
        ));
        let mut empty = SelectionConstraint::new(1);
        empty.allowed_ciphers.clear();
        assert!(matches!(select(&p, &empty), Err(SelectError::InvalidConstraint(_))));
        assert!(matches!(select(&p, &SelectionConstraint::new(0)), Err(SelectError::InvalidConstraint(_))));

        // Sampled but unfitted pair.
        let mut unfitted = BenchmarkProfile::empty("t");
        unfitted.samples.push(BenchmarkSample {
            cipher: CipherId::Aes,
            key_bits: 128,
            workload_kind: WorkloadKind::ZerosSparse,
            size_bytes: 10,
            elapsed_ns: 10,
            reps: 1,
            warmup: 0,
        });
        assert!(matches!(
            select(&unfitted, &SelectionConstraint::new(1)),
            Err(SelectError::NoFitAvailable { .. })
        ));
    }

    #[test]
    fn explain_shapes() {
        let p = table_row_profile();
        let d = select(&p, &SelectionConstraint::new(MB100)).unwrap();
        let text = explain(&d);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 1 + 7 + 1);
        assert!(lines.last().unwrap().starts_with("winner: RC4-40"));
        assert!(lines.last().unwrap().contains(&format!("({} ns)", d.predicted_ns)));
        let winner_row = d.rationale.iter().find(|r| r.verdict == Verdict::Ranked { rank: 1 }).unwrap();
        assert_eq!(winner_row.predicted_ns, Some(d.predicted_ns));

        let c = with_type(RequiredType::Stream, 4096);
        assert!(!is_registry_feasible(&c));
        let report = explain_infeasible(&c);
        assert_eq!(report.lines().count(), 7);
        assert!(report.contains("RC4       rejected: largest key 2048 bits below minimum 4096"));
        assert!(report.contains("AES       rejected: block cipher, stream required"));
    }

    fn arb_instance() -> impl Strategy<Value = (BenchmarkProfile, SelectionConstraint)> {
        let pair = (0usize..7, 0usize..4, 1u32..8, 0u32..4);
        (
            proptest::collection::vec(pair, 0..12),
            0usize..3,
            prop_oneof![Just(0u32), 32u32..300],
            proptest::collection::btree_set(0usize..7, 1..=7),
            1u64..1 << 30,
        )
            .prop_map(|(pairs, t, min, allowed, size)| {
                let mut fits: Vec<LinearFit> = Vec::new();
                for (ci, ki, slope, icpt) in pairs {
                    let cipher = CipherId::ALL[ci];
                    let key_bits = [40, 128, 168, 256][ki];
                    if fits.iter().any(|f| f.cipher == cipher && f.key_bits == key_bits) {
                        continue;
                    }
                    // Small integer coefficients make exact ties common.
                    fits.push(fit(cipher, key_bits, slope as f64, icpt as f64 * 1000.0));
                }
                let c = SelectionConstraint {
                    required_type: [RequiredType::Block, RequiredType::Stream, RequiredType::Any][t],
                    min_key_bits: min,
                    allowed_ciphers: allowed.into_iter().map(|i| CipherId::ALL[i]).collect(),
                    size_bytes: size,
                };
                (profile(fits), c)
            })
    }

    fn brute_force(p: &BenchmarkProfile, c: &SelectionConstraint) -> Option<(CipherId, u32)> {
        let mut best: Option<(f64, CipherId, u32)> = None;
        for f in &p.fits {
            let allowed = c.allowed_ciphers.contains(&f.cipher);
            let typed = c.required_type.admits(info(f.cipher).cipher_type);
            if !(allowed && typed && f.key_bits >= c.min_key_bits) {
                continue;
            }
            let t = (f.slope_ns_per_byte * c.size_bytes as f64 + f.intercept_ns).max(0.0);
            let better = match best {
                None => true,
                Some((bt, bc, bk)) => t < bt || (t == bt && (f.key_bits > bk || (f.key_bits == bk && f.cipher < bc))),
            };
            if better {
                best = Some((t, f.cipher, f.key_bits));
            }
        }
        best.map(|(_, c, k)| (c, k))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        #[test]
        fn agrees_with_brute_force((p, c) in arb_instance()) {
            let got = select(&p, &c).ok().map(|d| (d.cipher, d.key_bits));
            prop_assert_eq!(got, brute_force(&p, &c));
        }

        #[test]
        fn winner_is_feasible((p, c) in arb_instance()) {
            if let Ok(d) = select(&p, &c) {
                prop_assert!(c.allowed_ciphers.contains(&d.cipher));
                prop_assert!(c.required_type.admits(info(d.cipher).cipher_type));
                prop_assert!(d.key_bits >= c.min_key_bits);
                prop_assert!(p.fit(d.cipher, d.key_bits).is_ok());
            }
        }

        #[test]
        fn scaling_preserves_choice((p, c) in arb_instance(), exp in -20i32..20) {
            let k = 2f64.powi(exp);
            let mut scaled = p.clone();
            for f in &mut scaled.fits {
                f.slope_ns_per_byte *= k;
                f.intercept_ns *= k;
            }
            let a = select(&p, &c).ok().map(|d| (d.cipher, d.key_bits));
            let b = select(&scaled, &c).ok().map(|d| (d.cipher, d.key_bits));
            prop_assert_eq!(a, b);
        }

        #[test]
        fn shrinking_allowed_never_helps((p, c) in arb_instance(), drop in 0usize..7) {
            let mut smaller = c.clone();
            smaller.allowed_ciphers.remove(&CipherId::ALL[drop]);
            if smaller.allowed_ciphers.is_empty() {
                return Ok(());
            }
            if let (Ok(full), Ok(sub)) = (select(&p, &c), select(&p, &smaller)) {
                prop_assert!(sub.predicted_ns >= full.predicted_ns);
            }
            if select(&p, &c).is_err() {
                prop_assert!(select(&p, &smaller).is_err());
            }
        }
    }
}
