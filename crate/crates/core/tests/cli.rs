use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use symbench::bench::{write_csv, BenchmarkSample};
use symbench::{CipherId, WorkloadKind};

fn symbench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symbench")).args(args).output().expect("binary runs")
}

fn text(b: &[u8]) -> String {
    String::from_utf8_lossy(b).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Samples at the three smaller published file sizes for each cipher at its
/// minimum key.
fn published_samples() -> Vec<BenchmarkSample> {
    let rows: [(CipherId, u32, [f64; 3]); 7] = [
        (CipherId::Aes, 128, [101.0, 455.0, 909.0]),
        (CipherId::Des, 56, [272.0, 1253.0, 2595.0]),
        (CipherId::Tdes, 112, [788.0, 3804.0, 7628.0]),
        (CipherId::Rc2, 40, [238.0, 1095.0, 2189.0]),
        (CipherId::Blowfish, 32, [133.0, 614.0, 1223.0]),
        (CipherId::Skipjack, 80, [381.0, 1729.0, 3505.0]),
        (CipherId::Rc4, 40, [40.0, 198.0, 372.0]),
    ];
    let sizes = [10.7, 50.0, 100.0];
    let mut out = Vec::new();
    for (cipher, key_bits, ms) in rows {
        for (mb, t) in sizes.iter().zip(ms) {
            out.push(BenchmarkSample {
                cipher,
                key_bits,
                workload_kind: WorkloadKind::MediaLike,
                size_bytes: (mb * 1_048_576.0) as u64,
                elapsed_ns: (t * 1e6) as u64,
                reps: 1,
                warmup: 0,
            });
        }
    }
    out
}

#[test]
fn kat_prints_pass_lines() {
    let o = symbench(&["kat"]);
    assert_eq!(o.status.code(), Some(0));
    let out = text(&o.stdout);
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS ")).count(), symbench::kat::VECTORS.len());
    assert!(!out.contains("FAIL"));
}

#[test]
fn published_profile_selects_aes_for_block() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("published.csv");
    let profile = dir.path().join("profile.json");
    let mut buf = Vec::new();
    write_csv(&published_samples(), &mut buf).unwrap();
    fs::write(&csv_path, buf).unwrap();

    let o = symbench(&["fit", "--in", p(&csv_path), "--out", p(&profile)]);
    assert_eq!(o.status.code(), Some(0), "{}", text(&o.stderr));
    assert_eq!(text(&o.stdout).lines().count(), 1 + 7);

    let o = symbench(&["select", "--profile", p(&profile), "--size", "104857600", "--require", "block"]);
    assert_eq!(o.status.code(), Some(0), "{}", text(&o.stderr));
    let out = text(&o.stdout);
    assert!(out.lines().last().unwrap().starts_with("winner: AES-128"), "{out}");

    let o = symbench(&["select", "--profile", p(&profile), "--size", "104857600", "--format", "jsonl"]);
    let d: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(d["cipher"], "RC4");
    assert_eq!(d["key_bits"], 40);

    let o = symbench(&["select", "--profile", p(&profile), "--size", "1M", "--allow", "DES"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(text(&o.stdout).contains("winner: DES-56"));

    // Feasible in the registry, but nothing profiled at that key size.
    let o = symbench(&["select", "--profile", p(&profile), "--size", "1M", "--min-key-bits", "192"]);
    assert_eq!(o.status.code(), Some(3));

    let o = symbench(&["report", "--profile", p(&profile), "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let out = text(&o.stdout);
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "workload,AES-128,BLOWFISH-32,DES-56,RC2-40,RC4-40,SKIPJACK-80,TDES-112");
    assert_eq!(lines.count(), 3);
    assert!(out.contains("909.000"));

    let o = symbench(&["report", "--profile", p(&profile), "--sizes", "482MiB"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(text(&o.stdout).lines().count(), 3);
}

#[test]
fn infeasible_stream_key() {
    let o = symbench(&["select", "--require", "stream", "--min-key-bits", "4096"]);
    assert_eq!(o.status.code(), Some(3));
    let out = text(&o.stdout);
    assert_eq!(out.lines().count(), 7);
    assert!(out.contains("RC4"));
    assert!(!text(&o.stderr).is_empty());
}

#[test]
fn gen_bench_fit_select_small() {
    let dir = tempfile::tempdir().unwrap();
    let samples = dir.path().join("s.jsonl");
    let profile = dir.path().join("p.json");
    let o = symbench(&[
        "bench", "--ciphers", "AES,RC4,DES", "--sizes", "16K,32K,64K", "--kinds", "text_ansi", "--reps", "3",
        "--warmup", "1", "--format", "jsonl", "--out", p(&samples),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", text(&o.stderr));
    assert_eq!(fs::read_to_string(&samples).unwrap().lines().count(), 9);

    let o = symbench(&["fit", "--in", p(&samples), "--out", p(&profile)]);
    assert_eq!(o.status.code(), Some(0), "{}", text(&o.stderr));
    let o = symbench(&["select", "--profile", p(&profile), "--size", "64K", "--require", "block", "--min-key-bits", "100"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(text(&o.stdout).contains("winner: AES-128"));
}

#[test]
fn bench_key_sweep_and_formats() {
    let o = symbench(&["bench", "--ciphers", "AES", "--sizes", "4K", "--key-bits", "128,256", "--reps", "1", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", text(&o.stderr));
    let out = text(&o.stdout);
    assert!(out.starts_with("cipher,key_bits,kind,size_bytes,elapsed_ns,rate_mib_s,reps,warmup"));
    assert!(out.contains("AES,128,random_dense,4096,"));
    assert!(out.contains("AES,256,random_dense,4096,"));

    let o = symbench(&["bench", "--ciphers", "DES", "--sizes", "4K", "--key-bits", "128"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn encrypt_decrypt_roundtrip_with_warning() {
    let dir = tempfile::tempdir().unwrap();
    let plain = dir.path().join("plain.bin");
    let sealed = dir.path().join("sealed.bin");
    let back = dir.path().join("back.bin");
    let o = symbench(&["gen", "--kinds", "text_utf16", "--size", "1000", "--seed", "4", "--out", p(&plain)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::metadata(&plain).unwrap().len(), 1000);

    for (cipher, key) in [
        ("AES", "000102030405060708090a0b0c0d0e0f"),
        ("3DES", "0123456789abcdef23456789abcdef01456789abcdef0123"),
        ("SKIPJACK", "00998877665544332211"),
        ("RC4", "0102030405"),
    ] {
        let o = symbench(&["encrypt", "--cipher", cipher, "--key-hex", key, "--in", p(&plain), "--out", p(&sealed)]);
        assert_eq!(o.status.code(), Some(0), "{}", text(&o.stderr));
        assert!(text(&o.stderr).contains("ECB"));
        let o = symbench(&["decrypt", "--cipher", cipher, "--key-hex", key, "--in", p(&sealed), "--out", p(&back)]);
        assert_eq!(o.status.code(), Some(0), "{}", text(&o.stderr));
        assert_eq!(fs::read(&back).unwrap(), fs::read(&plain).unwrap(), "{cipher}");
    }

    let key_file = dir.path().join("key.hex");
    fs::write(&key_file, "000102030405060708090a0b0c0d0e0f\n").unwrap();
    let o = symbench(&["encrypt", "--cipher", "AES", "--key-file", p(&key_file), "--in", p(&plain), "--out", p(&sealed)]);
    assert_eq!(o.status.code(), Some(0));
    // Wrong key: padding check fails.
    let o = symbench(&["decrypt", "--cipher", "AES", "--key-hex", "ff0102030405060708090a0b0c0d0e0f", "--in", p(&sealed), "--out", p(&back)]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn io_and_schema_errors_exit_four() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"version": 999}"#).unwrap();
    let o = symbench(&["select", "--profile", p(&bad), "--size", "10"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(text(&o.stderr).contains("version"));
    let o = symbench(&["report", "--profile", p(&dir.path().join("missing.json"))]);
    assert_eq!(o.status.code(), Some(4));
    let o = symbench(&["encrypt", "--cipher", "AES", "--key-hex", "00", "--in", "x", "--out", "y"]);
    assert_eq!(o.status.code(), Some(1));
}
