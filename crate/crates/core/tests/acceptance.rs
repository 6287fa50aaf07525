//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Runs without the libtest harness so the lines are always shown
//! and the timing criteria never share the CPU with each other.

use std::collections::BTreeSet;
use std::time::Instant;

use chrono::{TimeZone, Utc};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use symbench::bench::{bench_key, BenchmarkSample, CaseStudyConfig, MIB};
use symbench::kat::run_kats;
use symbench::profile::{load_profile, save_profile, BenchmarkProfile, LinearFit};
use symbench::select::{select, RequiredType, SelectionConstraint};
use symbench::{
    ecb_decrypt, ecb_encrypt, encryption_rate, generate_workload, info, make_cipher_state, run_case_study,
    time_encryption, CipherId, CipherType, KeyMaterial, WorkloadKind, WorkloadSpec,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn kat_suite() -> Outcome {
    let start = Instant::now();
    let results = run_kats();
    let secs = start.elapsed().as_secs_f64();
    let failed: Vec<_> = results.iter().filter(|r| !r.passed).map(|r| format!("{} ({})", r.name, r.detail)).collect();
    let ciphers: BTreeSet<_> = results.iter().map(|r| r.cipher).collect();
    let pass = failed.is_empty() && ciphers.len() == 7 && secs < 1.0;
    outcome(
        pass,
        format!("{}/{} vectors, {} ciphers, {:.3} s; failures: {:?}", results.len() - failed.len(), results.len(), ciphers.len(), secs, failed),
    )
}

fn roundtrip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0002);
    let mut checked = 0;
    let mut failures = Vec::new();
    for id in CipherId::ALL {
        for bits in info(id).key_sizes_bits.classes() {
            for _ in 0..1000 {
                let key = KeyMaterial::random(id, bits, &mut rng).unwrap();
                let state = make_cipher_state(&key).unwrap();
                let len = rng.gen_range(0..=256);
                let msg: Vec<u8> = (0..len).map(|_| rng.gen()).collect();
                let ct = ecb_encrypt(&mut state.clone(), &msg).unwrap();
                let back = ecb_decrypt(&mut state.clone(), &ct).unwrap();
                checked += 1;
                if back != msg {
                    failures.push(format!("{id}-{bits} len {len}"));
                }
            }
        }
    }
    outcome(failures.is_empty(), format!("{checked} pairs across all key-size classes; {} failures {:?}", failures.len(), failures.iter().take(3).collect::<Vec<_>>()))
}

fn tdes_degeneracy() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0003);
    let mut mismatches = 0;
    for _ in 0..1000 {
        let k: [u8; 8] = rng.gen();
        let block: [u8; 8] = rng.gen();
        let des = make_cipher_state(&KeyMaterial::new(CipherId::Des, k.to_vec()).unwrap()).unwrap();
        let tdes = make_cipher_state(&KeyMaterial::new(CipherId::Tdes, [k, k, k].concat()).unwrap()).unwrap();
        if des.encrypt_block(&block).unwrap() != tdes.encrypt_block(&block).unwrap() {
            mismatches += 1;
        }
    }
    outcome(mismatches == 0, format!("1000 random blocks, {mismatches} mismatches"))
}

fn table_rates() -> Outcome {
    let sample = |size, ms: u64| BenchmarkSample {
        cipher: CipherId::Aes,
        key_bits: 128,
        workload_kind: WorkloadKind::MediaLike,
        size_bytes: size,
        elapsed_ns: ms * 1_000_000,
        reps: 1,
        warmup: 0,
    };
    let a = encryption_rate(&sample(72_000_118, 634));
    let b = encryption_rate(&sample(61_392_454, 216));
    let pass = (a - 108.28).abs() <= 0.05 && (b - 271.01).abs() <= 0.1;
    outcome(pass, format!("{a:.4} MiB/s (108.28 +/- 0.05), {b:.4} MiB/s (271.01 +/- 0.1)"))
}

fn r_squared(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    sxy * sxy / (sxx * syy)
}

fn linearity() -> Outcome {
    let start = Instant::now();
    let cfg = CaseStudyConfig::defaults(2).unwrap();
    let samples = run_case_study(&cfg).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let mut pass = secs < 120.0;
    let mut parts = Vec::new();
    for id in CipherId::ALL {
        let mut pts: Vec<(f64, f64)> = samples
            .iter()
            .filter(|s| s.cipher == id)
            .map(|s| (s.size_bytes as f64, s.elapsed_ns as f64))
            .collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let r2 = r_squared(&pts);
        let ratios: Vec<f64> = pts.windows(2).map(|w| w[1].1 / w[0].1).collect();
        let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().copied().fold(0.0, f64::max);
        let ok = r2 >= 0.99 && lo >= 1.7 && hi <= 2.3 && pts.len() == 5;
        pass &= ok;
        parts.push(format!("{}{} r2={r2:.5} ratio=[{lo:.3},{hi:.3}]", id, if ok { "" } else { "(!)" }));
    }
    outcome(pass, format!("{:.1} s; {}", secs, parts.join("; ")))
}

/// Median-of-5 samples for every cipher (minimum key) and kind at 8 MiB.
fn eight_mib_grid() -> Vec<BenchmarkSample> {
    let mut cfg = CaseStudyConfig::defaults(1).unwrap();
    cfg.sizes = vec![8 * MIB];
    run_case_study(&cfg).unwrap()
}

fn density_independence(grid: &[BenchmarkSample]) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for id in CipherId::ALL {
        let rates: Vec<f64> = grid.iter().filter(|s| s.cipher == id).map(encryption_rate).collect();
        let mean = rates.iter().sum::<f64>() / rates.len() as f64;
        let var = rates.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / rates.len() as f64;
        let cv = var.sqrt() / mean;
        let ok = cv <= 0.10 && rates.len() == 5;
        pass &= ok;
        parts.push(format!("{id} cv={:.2}%", cv * 100.0));
    }
    outcome(pass, parts.join(", "))
}

fn ordering(grid: &[BenchmarkSample]) -> Outcome {
    let dense: Vec<&BenchmarkSample> = grid.iter().filter(|s| s.workload_kind == WorkloadKind::RandomDense).collect();
    let fastest = dense.iter().min_by_key(|s| s.elapsed_ns).unwrap();
    let slowest = dense.iter().max_by_key(|s| s.elapsed_ns).unwrap();
    let fastest_block = dense
        .iter()
        .filter(|s| info(s.cipher).cipher_type == CipherType::Block)
        .min_by_key(|s| s.elapsed_ns)
        .unwrap();
    let mut by_rate: Vec<_> = dense.iter().map(|s| (s.cipher, encryption_rate(s))).collect();
    by_rate.sort_by(|a, b| b.1.total_cmp(&a.1));
    let order: Vec<String> = by_rate.iter().map(|(c, r)| format!("{c} {r:.1}")).collect();
    let rc4_fastest = fastest.cipher == CipherId::Rc4;
    let tdes_slowest = slowest.cipher == CipherId::Tdes;
    let aes_note = if fastest_block.cipher == CipherId::Aes {
        "AES fastest block cipher".to_string()
    } else {
        format!("REPORT: fastest block cipher is {} not AES", fastest_block.cipher)
    };
    outcome(
        rc4_fastest && tdes_slowest,
        format!("RC4 fastest={rc4_fastest}, TDES slowest={tdes_slowest}, {aes_note}; MiB/s: {}", order.join(" > ")),
    )
}

fn aes_key_size_effect() -> Outcome {
    let w = generate_workload(WorkloadSpec::new(WorkloadKind::RandomDense, 8 * MIB, 2013)).unwrap();
    let t128 = time_encryption(&bench_key(CipherId::Aes, 128, 8).unwrap(), &w, 9, 2).unwrap().elapsed_ns;
    let t256 = time_encryption(&bench_key(CipherId::Aes, 256, 8).unwrap(), &w, 9, 2).unwrap().elapsed_ns;
    let ratio = t256 as f64 / t128 as f64;
    outcome(t256 >= t128, format!("AES-128 {:.2} ms, AES-256 {:.2} ms, ratio {ratio:.3}", t128 as f64 / 1e6, t256 as f64 / 1e6))
}

/// Independent argmin: scan fits, keep the best under (time, -key_bits, id).
fn brute_force(p: &BenchmarkProfile, c: &SelectionConstraint) -> Option<(CipherId, u32)> {
    let mut best: Option<(f64, u32, CipherId)> = None;
    for f in &p.fits {
        let t = info(f.cipher).cipher_type;
        let type_ok = match c.required_type {
            RequiredType::Any => true,
            RequiredType::Block => t == CipherType::Block,
            RequiredType::Stream => t == CipherType::Stream,
        };
        if !type_ok || !c.allowed_ciphers.contains(&f.cipher) || f.key_bits < c.min_key_bits {
            continue;
        }
        let ns = (f.slope_ns_per_byte * c.size_bytes as f64 + f.intercept_ns).max(0.0);
        let replace = match best {
            None => true,
            Some((bns, bbits, bid)) => {
                ns < bns || (ns == bns && f.key_bits > bbits) || (ns == bns && f.key_bits == bbits && f.cipher.name() < bid.name())
            }
        };
        if replace {
            best = Some((ns, f.key_bits, f.cipher));
        }
    }
    best.map(|(_, k, c)| (c, k))
}

fn selector_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0009);
    let mut disagreements = 0;
    let mut decided = 0;
    for _ in 0..10_000 {
        let mut p = BenchmarkProfile::empty("oracle");
        let mut used = BTreeSet::new();
        for _ in 0..rng.gen_range(0..14) {
            let id = CipherId::ALL[rng.gen_range(0..7)];
            let classes = info(id).key_sizes_bits.classes();
            let bits = classes[rng.gen_range(0..classes.len())];
            if !used.insert((id, bits)) {
                continue;
            }
            // Coarse coefficients so exact ties occur.
            p.fits.push(LinearFit {
                cipher: id,
                key_bits: bits,
                slope_ns_per_byte: rng.gen_range(1..6) as f64 * 0.5,
                intercept_ns: rng.gen_range(0..4) as f64 * 1e4,
                r_squared: 1.0,
                n_samples: 2,
            });
        }
        let allowed: BTreeSet<CipherId> = CipherId::ALL.into_iter().filter(|_| rng.gen_bool(0.7)).collect();
        let allowed = if allowed.is_empty() { [CipherId::ALL[rng.gen_range(0..7)]].into() } else { allowed };
        let c = SelectionConstraint {
            required_type: [RequiredType::Any, RequiredType::Block, RequiredType::Stream][rng.gen_range(0..3)],
            min_key_bits: [0, 40, 64, 112, 128, 168, 256, 1024][rng.gen_range(0..8)],
            allowed_ciphers: allowed,
            size_bytes: [1u64, 100, 20_000, MIB, 64 * MIB][rng.gen_range(0..5)],
        };
        let got = select(&p, &c).ok().map(|d| (d.cipher, d.key_bits));
        decided += got.is_some() as u32;
        if got != brute_force(&p, &c) {
            disagreements += 1;
        }
    }
    outcome(disagreements == 0, format!("10000 instances ({decided} with a winner), {disagreements} disagreements"))
}

fn run_cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = symbench::cli::dispatch(std::iter::once("symbench").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&err).into_owned())
}

fn end_to_end() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let samples = dir.path().join("study2.csv");
    let profile = dir.path().join("profile.json");
    let (s, p) = (samples.to_str().unwrap(), profile.to_str().unwrap());
    let (code, _, err) = run_cli(&["bench", "--case-study", "2", "--out", s]);
    if code != 0 {
        return outcome(false, format!("bench exited {code}: {err}"));
    }
    let (code, _, err) = run_cli(&["fit", "--in", s, "--out", p]);
    if code != 0 {
        return outcome(false, format!("fit exited {code}: {err}"));
    }
    let size = (482 * MIB).to_string();
    let (code, out, err) = run_cli(&["select", "--profile", p, "--size", &size, "--require", "block", "--format", "jsonl"]);
    if code != 0 {
        return outcome(false, format!("select exited {code}: {err}"));
    }
    let decision: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    let winner: CipherId = serde_json::from_value(decision["cipher"].clone()).unwrap();
    let feasible = info(winner).cipher_type == CipherType::Block;

    let loaded = load_profile(&profile).unwrap();
    let predicted = loaded.fit(CipherId::Aes, 128).unwrap().predict_ns_f64(482 * MIB);
    let w = generate_workload(WorkloadSpec::new(WorkloadKind::MediaLike, 64 * MIB, 2013)).unwrap();
    let direct64 = time_encryption(&bench_key(CipherId::Aes, 128, 2013).unwrap(), &w, 5, 2).unwrap().elapsed_ns;
    let direct = direct64 as f64 * 482.0 / 64.0;
    let err_frac = (predicted - direct).abs() / direct;
    outcome(
        feasible && err_frac <= 0.10,
        format!(
            "winner {}-{} (block={feasible}); AES-128 @482 MiB predicted {:.1} ms vs 64 MiB-scaled {:.1} ms, error {:.2}%",
            winner,
            decision["key_bits"],
            predicted / 1e6,
            direct / 1e6,
            err_frac * 100.0
        ),
    )
}

fn random_profile(rng: &mut ChaCha8Rng) -> BenchmarkProfile {
    let mut samples = Vec::new();
    for _ in 0..rng.gen_range(0..6) {
        let id = CipherId::ALL[rng.gen_range(0..7)];
        let classes = info(id).key_sizes_bits.classes();
        let bits = classes[rng.gen_range(0..classes.len())];
        let slope = rng.gen_range(0.5..60.0);
        let intercept = rng.gen_range(0.0..1e6);
        for _ in 0..rng.gen_range(1..6) {
            let size = rng.gen_range(1..1u64 << 34);
            let ns = (slope * size as f64 + intercept) * rng.gen_range(0.95..1.05);
            samples.push(BenchmarkSample {
                cipher: id,
                key_bits: bits,
                workload_kind: WorkloadKind::ALL[rng.gen_range(0..5)],
                size_bytes: size,
                elapsed_ns: ns as u64 + 1,
                reps: rng.gen_range(1..20),
                warmup: rng.gen_range(0..5),
            });
        }
    }
    let note: String = (0..rng.gen_range(0..24)).map(|_| ['a', 'Z', ' ', 'é', '"', '\\', '\n', '€', '7'][rng.gen_range(0..9)]).collect();
    let (mut p, _) = BenchmarkProfile::from_samples(samples, note);
    p.created_at = Utc.timestamp_opt(rng.gen_range(0..4_000_000_000), rng.gen_range(0..1_000_000_000)).unwrap();
    p
}

fn profile_persistence() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0011);
    let mut mismatches = 0;
    let mut fits = 0;
    for i in 0..1000 {
        let p = random_profile(&mut rng);
        fits += p.fits.len();
        let path = dir.path().join(format!("p{i}.json"));
        save_profile(&p, &path).unwrap();
        match load_profile(&path) {
            Ok(q) if q == p => {}
            _ => mismatches += 1,
        }
    }
    outcome(mismatches == 0, format!("1000 random profiles ({fits} fits), {mismatches} mismatches"))
}

fn main() {
    let started = Instant::now();
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();
    let mut record = |n, name, o: Outcome| {
        println!("{} [{n:>2}] {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        results.push((n, name, o));
    };
    record(1, "known-answer vectors", kat_suite());
    record(2, "roundtrip", roundtrip());
    record(3, "TDES degeneracy", tdes_degeneracy());
    record(4, "published rate arithmetic", table_rates());
    record(5, "size linearity", linearity());
    let grid = eight_mib_grid();
    record(6, "type/density independence", density_independence(&grid));
    record(7, "speed ordering", ordering(&grid));
    record(8, "AES key-size effect", aes_key_size_effect());
    record(9, "selector oracle equivalence", selector_oracle());
    record(10, "end-to-end bench/fit/select", end_to_end());
    record(11, "profile persistence", profile_persistence());
    let failed: Vec<u32> = results.iter().filter(|r| !r.2.pass).map(|r| r.0).collect();
    println!(
        "acceptance: {}/{} passed in {:.1} s{}",
        results.len() - failed.len(),
        results.len(),
        started.elapsed().as_secs_f64(),
        if failed.is_empty() { String::new() } else { format!("; failed {failed:?}") }
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
