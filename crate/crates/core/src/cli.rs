//! Command-line front end. `dispatch` takes the argument vector and two
//! writers and returns the process exit code.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{
    read_csv, read_jsonl, run_case_study_with, write_csv, write_jsonl, write_txt, BenchError, BenchmarkSample,
    CaseStudyConfig,
};
use crate::cipher::{make_cipher_state, KeyMaterial};
use crate::kat::{decode_hex, run_kats};
use crate::mode::{ecb_decrypt, ecb_encrypt};
use crate::profile::{load_profile, save_profile, BenchmarkProfile, ProfileError};
use crate::registry::{info, CipherId};
use crate::select::{
    explain, explain_failure, explain_infeasible, is_registry_feasible, select, RequiredType, SelectError,
    SelectionConstraint,
};
use crate::workload::{estimate_density, generate_workload, WorkloadKind, WorkloadSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_KAT_FAILURE: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_IO: i32 = 4;

pub const ECB_WARNING: &str = "warning: ECB mode leaks repeated plaintext blocks and must not be used \
to protect real data; this tool uses it only to reproduce benchmark conditions";

#[derive(Parser, Debug)]
#[command(name = "symbench", version, about = "Benchmark symmetric ciphers and pick the fastest one that fits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the known-answer vectors.
    Kat,
    /// Write a synthetic workload file.
    Gen(GenArgs),
    /// Time encryption over a case study or a custom grid.
    Bench(BenchArgs),
    /// Fit linear profiles to benchmark samples.
    Fit(FitArgs),
    /// Choose the cipher with the lowest predicted time.
    Select(SelectArgs),
    /// Encrypt a file (ECB + PKCS#7, or RC4).
    Encrypt(CryptArgs),
    /// Decrypt a file produced by `encrypt`.
    Decrypt(CryptArgs),
    /// Render a profile as a sizes-by-ciphers timing table.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Txt,
    Jsonl,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_delimiter = ',', default_value = "random_dense")]
    kinds: Vec<String>,
    #[arg(long, value_parser = parse_size)]
    size: u64,
    #[arg(long, default_value_t = 2013)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long)]
    case_study: Option<u8>,
    #[arg(long, value_delimiter = ',')]
    ciphers: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',', value_parser = parse_size)]
    sizes: Option<Vec<u64>>,
    #[arg(long, value_delimiter = ',')]
    kinds: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',')]
    key_bits: Option<Vec<u32>>,
    #[arg(long)]
    reps: Option<u32>,
    #[arg(long)]
    warmup: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    /// Samples file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also fit and write a profile here.
    #[arg(long)]
    profile: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args, Debug)]
struct FitArgs {
    /// Samples as CSV or JSONL (chosen by --format or the file extension).
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Debug)]
struct SelectArgs {
    #[arg(long)]
    profile: Option<PathBuf>,
    #[arg(long, value_parser = parse_size)]
    size: Option<u64>,
    #[arg(long, default_value = "any")]
    require: String,
    #[arg(long, default_value_t = 0)]
    min_key_bits: u32,
    #[arg(long, value_delimiter = ',')]
    allow: Option<Vec<String>>,
    /// `jsonl` prints the decision as one JSON object.
    #[arg(long, value_enum, default_value = "txt")]
    format: Format,
}

#[derive(Args, Debug)]
struct CryptArgs {
    #[arg(long = "ciphers", alias = "cipher")]
    cipher: String,
    #[arg(long)]
    key_hex: Option<String>,
    /// File holding the key as hex.
    #[arg(long)]
    key_file: Option<PathBuf>,
    /// Expected key size; checked against the key length.
    #[arg(long)]
    key_bits: Option<u32>,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct ReportArgs {
    #[arg(long)]
    profile: PathBuf,
    /// Render fitted predictions at these sizes instead of measured samples.
    #[arg(long, value_delimiter = ',', value_parser = parse_size)]
    sizes: Option<Vec<u64>>,
    #[arg(long, value_enum, default_value = "txt")]
    format: Format,
}

/// Byte counts with optional binary (K, KiB, M, MiB, G, GiB) or decimal
/// (KB, MB, GB) suffixes.
pub fn parse_size(text: &str) -> Result<u64, String> {
    let t = text.trim();
    let split = t.find(|c: char| !c.is_ascii_digit()).unwrap_or(t.len());
    let (num, unit) = t.split_at(split);
    let n: u64 = num.parse().map_err(|_| format!("invalid size `{text}`"))?;
    let mult: u64 = match unit.trim().to_ascii_lowercase().as_str() {
        "" | "b" => 1,
        "k" | "kib" => 1 << 10,
        "m" | "mib" => 1 << 20,
        "g" | "gib" => 1 << 30,
        "kb" => 1_000,
        "mb" => 1_000_000,
        "gb" => 1_000_000_000,
        _ => return Err(format!("unknown size unit in `{text}`")),
    };
    n.checked_mul(mult).ok_or_else(|| format!("size `{text}` overflows"))
}

/// Failure carrying its exit code and message.
struct Fail(i32, String);

type Outcome = Result<i32, Fail>;

fn usage(msg: impl Into<String>) -> Fail {
    Fail(EXIT_USAGE, msg.into())
}

fn io(msg: impl Into<String>) -> Fail {
    Fail(EXIT_IO, msg.into())
}

fn wr(e: std::io::Error) -> Fail {
    io(format!("write failed: {e}"))
}

fn from_bench(e: BenchError) -> Fail {
    match e {
        BenchError::Io(_) | BenchError::Parse(_) => io(e.to_string()),
        other => usage(other.to_string()),
    }
}

fn from_profile(e: ProfileError) -> Fail {
    match e {
        ProfileError::IoFailure(_) | ProfileError::SchemaViolation(_) => io(e.to_string()),
        other => usage(other.to_string()),
    }
}

fn parse_ciphers(names: &[String]) -> Result<Vec<CipherId>, Fail> {
    names.iter().map(|n| n.parse::<CipherId>().map_err(|e| usage(e.to_string()))).collect()
}

fn parse_kinds(names: &[String]) -> Result<Vec<WorkloadKind>, Fail> {
    names.iter().map(|n| n.parse::<WorkloadKind>().map_err(|e| usage(e.to_string()))).collect()
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Fail> {
    fs::write(path, bytes).map_err(|e| io(format!("{}: {e}", path.display())))
}

fn read_file(path: &Path) -> Result<Vec<u8>, Fail> {
    fs::read(path).map_err(|e| io(format!("{}: {e}", path.display())))
}

fn cmd_kat(out: &mut dyn Write) -> Outcome {
    let results = run_kats();
    let mut failed = 0;
    for r in &results {
        if r.passed {
            writeln!(out, "PASS {}", r.name).map_err(wr)?;
        } else {
            failed += 1;
            writeln!(out, "FAIL {}: {}", r.name, r.detail).map_err(wr)?;
        }
    }
    writeln!(out, "{} of {} vectors passed", results.len() - failed, results.len()).map_err(wr)?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_KAT_FAILURE })
}

fn cmd_gen(a: GenArgs, out: &mut dyn Write) -> Outcome {
    let kinds = parse_kinds(&a.kinds)?;
    let [kind] = kinds[..] else {
        return Err(usage("gen takes exactly one kind"));
    };
    let w = generate_workload(WorkloadSpec::new(kind, a.size, a.seed)).map_err(|e| usage(e.to_string()))?;
    write_file(&a.out, &w.bytes)?;
    let density = estimate_density(&w).map_err(|e| usage(e.to_string()))?;
    writeln!(out, "{} {} bytes seed {} density {:.4} bits/byte -> {}", kind, a.size, a.seed, density, a.out.display())
        .map_err(wr)?;
    Ok(EXIT_OK)
}

fn bench_config(a: &BenchArgs) -> Result<CaseStudyConfig, Fail> {
    let mut cfg = match a.case_study {
        Some(n) => CaseStudyConfig::defaults(n).map_err(from_bench)?,
        None => {
            let sizes = a.sizes.clone().ok_or_else(|| usage("bench needs --case-study or --sizes"))?;
            CaseStudyConfig::custom(CipherId::ALL.to_vec(), sizes, vec![WorkloadKind::RandomDense])
        }
    };
    if let Some(c) = &a.ciphers {
        cfg.ciphers = parse_ciphers(c)?;
    }
    if let Some(s) = &a.sizes {
        cfg.sizes = s.clone();
    }
    if let Some(k) = &a.kinds {
        cfg.kinds = parse_kinds(k)?;
    }
    if let Some(bits) = &a.key_bits {
        let mut sweep = BTreeMap::new();
        for &c in &cfg.ciphers {
            let ks: Vec<u32> = bits.iter().copied().filter(|&b| info(c).key_sizes_bits.contains(b)).collect();
            if ks.is_empty() {
                return Err(usage(format!("{c} supports none of the requested key sizes ({})", info(c).key_sizes_bits)));
            }
            sweep.insert(c, ks);
        }
        cfg.key_bits_sweep = sweep;
    }
    cfg.reps = a.reps.unwrap_or(cfg.reps);
    cfg.warmup = a.warmup.unwrap_or(cfg.warmup);
    cfg.seed = a.seed.unwrap_or(cfg.seed);
    cfg.validate().map_err(from_bench)?;
    Ok(cfg)
}

fn write_samples(samples: &[BenchmarkSample], format: Format, dest: &mut dyn Write) -> Result<(), Fail> {
    match format {
        Format::Csv => write_csv(samples, dest),
        Format::Jsonl => write_jsonl(samples, dest),
        Format::Txt => write_txt(samples, dest),
    }
    .map_err(from_bench)
}

fn cmd_bench(a: BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let cfg = bench_config(&a)?;
    let total = cfg.sample_count();
    let mut done = 0;
    let samples = run_case_study_with(&cfg, |s| {
        done += 1;
        let _ = writeln!(
            err,
            "[{done}/{total}] {}-{} {} {} B: {:.3} ms",
            s.cipher,
            s.key_bits,
            s.workload_kind,
            s.size_bytes,
            s.elapsed_ns as f64 / 1e6
        );
    })
    .map_err(from_bench)?;
    match &a.out {
        Some(path) => {
            let mut buf = Vec::new();
            write_samples(&samples, a.format, &mut buf)?;
            write_file(path, &buf)?;
        }
        None => write_samples(&samples, a.format, out)?,
    }
    if let Some(path) = &a.profile {
        let (profile, skipped) = BenchmarkProfile::from_samples(samples, host_note());
        for e in skipped {
            writeln!(err, "not fitted: {e}").map_err(wr)?;
        }
        save_profile(&profile, path).map_err(from_profile)?;
    }
    Ok(EXIT_OK)
}

fn host_note() -> String {
    format!("symbench {} on {}-{}", env!("CARGO_PKG_VERSION"), std::env::consts::OS, std::env::consts::ARCH)
}

fn cmd_fit(a: FitArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let format = a.format.unwrap_or_else(|| match a.input.extension().and_then(|e| e.to_str()) {
        Some("jsonl") | Some("json") => Format::Jsonl,
        _ => Format::Csv,
    });
    let bytes = read_file(&a.input)?;
    let samples = match format {
        Format::Csv => read_csv(bytes.as_slice()),
        Format::Jsonl => read_jsonl(bytes.as_slice()),
        Format::Txt => return Err(usage("fit reads csv or jsonl samples")),
    }
    .map_err(from_bench)?;
    let (profile, skipped) = BenchmarkProfile::from_samples(samples, host_note());
    for e in &skipped {
        writeln!(err, "not fitted: {e}").map_err(wr)?;
    }
    if profile.fits.is_empty() {
        return Err(io("no (cipher, key_bits) group could be fitted"));
    }
    save_profile(&profile, &a.out).map_err(from_profile)?;
    writeln!(out, "{:<9} {:>8} {:>14} {:>14} {:>10} {:>3}", "cipher", "key_bits", "ns_per_byte", "intercept_ns", "r_squared", "n")
        .map_err(wr)?;
    for f in &profile.fits {
        writeln!(
            out,
            "{:<9} {:>8} {:>14.6} {:>14.1} {:>10.6} {:>3}",
            f.cipher.name(),
            f.key_bits,
            f.slope_ns_per_byte,
            f.intercept_ns,
            f.r_squared,
            f.n_samples
        )
        .map_err(wr)?;
    }
    Ok(EXIT_OK)
}

fn cmd_select(a: SelectArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let required_type: RequiredType = a.require.parse().map_err(usage)?;
    let allowed_ciphers: BTreeSet<CipherId> = match &a.allow {
        Some(names) => parse_ciphers(names)?.into_iter().collect(),
        None => CipherId::ALL.into_iter().collect(),
    };
    if allowed_ciphers.is_empty() {
        return Err(usage("--allow must name at least one cipher"));
    }
    let mut c = SelectionConstraint { required_type, min_key_bits: a.min_key_bits, allowed_ciphers, size_bytes: 1 };
    if !is_registry_feasible(&c) {
        write!(out, "{}", explain_infeasible(&c)).map_err(wr)?;
        writeln!(err, "no cipher can satisfy the constraint at any supported key size").map_err(wr)?;
        return Ok(EXIT_INFEASIBLE);
    }
    let path = a.profile.ok_or_else(|| usage("select needs --profile"))?;
    c.size_bytes = a.size.ok_or_else(|| usage("select needs --size"))?;
    let profile = load_profile(&path).map_err(from_profile)?;
    match select(&profile, &c) {
        Ok(d) => {
            match a.format {
                Format::Jsonl => writeln!(out, "{}", serde_json::to_string(&d).map_err(|e| io(e.to_string()))?),
                Format::Csv => writeln!(out, "cipher,key_bits,predicted_ns\n{},{},{}", d.cipher, d.key_bits, d.predicted_ns),
                Format::Txt => write!(out, "{}", explain(&d)),
            }
            .map_err(wr)?;
            Ok(EXIT_OK)
        }
        Err(e @ SelectError::InvalidConstraint(_)) => Err(usage(e.to_string())),
        Err(e) => {
            write!(out, "{}", explain_failure(&e)).map_err(wr)?;
            writeln!(err, "{e}").map_err(wr)?;
            Ok(EXIT_INFEASIBLE)
        }
    }
}

fn crypt_key(a: &CryptArgs) -> Result<KeyMaterial, Fail> {
    let cipher: CipherId = a.cipher.parse().map_err(|e: crate::registry::UnknownCipher| usage(e.to_string()))?;
    let hex = match (&a.key_hex, &a.key_file) {
        (Some(h), None) => h.clone(),
        (None, Some(p)) => String::from_utf8(read_file(p)?).map_err(|_| usage("key file is not text"))?,
        _ => return Err(usage("give exactly one of --key-hex or --key-file")),
    };
    let bytes = decode_hex(&hex).map_err(|e| usage(format!("key: {e}")))?;
    match a.key_bits {
        Some(bits) => KeyMaterial::with_bits(cipher, bytes, bits),
        None => KeyMaterial::new(cipher, bytes),
    }
    .map_err(|e| usage(e.to_string()))
}

fn cmd_crypt(a: CryptArgs, decrypt: bool, err: &mut dyn Write) -> Outcome {
    writeln!(err, "{ECB_WARNING}").map_err(wr)?;
    let key = crypt_key(&a)?;
    let input = read_file(&a.input)?;
    let mut state = make_cipher_state(&key).map_err(|e| usage(e.to_string()))?;
    let result = if decrypt { ecb_decrypt(&mut state, &input) } else { ecb_encrypt(&mut state, &input) };
    let bytes = result.map_err(|e| io(e.to_string()))?;
    write_file(&a.out, &bytes)?;
    Ok(EXIT_OK)
}

/// Rows are (kind, size) for measured tables and sizes for predicted ones;
/// columns are the profiled (cipher, key_bits) pairs.
fn cmd_report(a: ReportArgs, out: &mut dyn Write) -> Outcome {
    let profile = load_profile(&a.profile).map_err(from_profile)?;
    let columns: Vec<(CipherId, u32)> = match &a.sizes {
        Some(_) => profile.fits.iter().map(|f| (f.cipher, f.key_bits)).collect(),
        None => profile.profiled_pairs(),
    };
    let headers: Vec<String> = columns.iter().map(|(c, k)| format!("{c}-{k}")).collect();
    let mut rows: Vec<(String, Vec<Option<f64>>)> = Vec::new();
    match &a.sizes {
        Some(sizes) => {
            for &size in sizes {
                let cells = columns
                    .iter()
                    .map(|&(c, k)| profile.fit(c, k).ok().map(|f| f.predict_ns_f64(size) / 1e6))
                    .collect();
                rows.push((size.to_string(), cells));
            }
        }
        None => {
            let keys: BTreeSet<(u64, WorkloadKind)> =
                profile.samples.iter().map(|s| (s.size_bytes, s.workload_kind)).collect();
            for (size, kind) in keys {
                let cells = columns
                    .iter()
                    .map(|&(c, k)| {
                        let hits: Vec<u64> = profile
                            .samples
                            .iter()
                            .filter(|s| s.cipher == c && s.key_bits == k && s.size_bytes == size && s.workload_kind == kind)
                            .map(|s| s.elapsed_ns)
                            .collect();
                        (!hits.is_empty()).then(|| hits.iter().sum::<u64>() as f64 / hits.len() as f64 / 1e6)
                    })
                    .collect();
                rows.push((format!("{kind} {size}"), cells));
            }
        }
    }
    let label = if a.sizes.is_some() { "size_bytes" } else { "workload" };
    let cell = |v: &Option<f64>| v.map_or_else(|| "-".to_string(), |ms| format!("{ms:.3}"));
    match a.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut head = vec![label.to_string()];
            head.extend(headers.iter().cloned());
            w.write_record(&head).map_err(|e| io(e.to_string()))?;
            for (name, cells) in &rows {
                let mut rec = vec![name.clone()];
                rec.extend(cells.iter().map(cell));
                w.write_record(&rec).map_err(|e| io(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| io(e.to_string()))?;
            out.write_all(&bytes).map_err(wr)?;
        }
        Format::Txt | Format::Jsonl => {
            let first = rows.iter().map(|r| r.0.len()).chain([label.len()]).max().unwrap_or(0);
            let width = headers.iter().map(String::len).max().unwrap_or(0).max(10);
            write!(out, "{label:<first$}").map_err(wr)?;
            for h in &headers {
                write!(out, " {h:>width$}").map_err(wr)?;
            }
            writeln!(out, "\n(times in ms)").map_err(wr)?;
            for (name, cells) in &rows {
                write!(out, "{name:<first$}").map_err(wr)?;
                for c in cells {
                    write!(out, " {:>width$}", cell(c)).map_err(wr)?;
                }
                writeln!(out).map_err(wr)?;
            }
        }
    }
    Ok(EXIT_OK)
}

/// Parse `args` (including the program name) and run the subcommand.
pub fn dispatch<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.command {
        Command::Kat => cmd_kat(out),
        Command::Gen(a) => cmd_gen(a, out),
        Command::Bench(a) => cmd_bench(a, out, err),
        Command::Fit(a) => cmd_fit(a, out, err),
        Command::Select(a) => cmd_select(a, out, err),
        Command::Encrypt(a) => cmd_crypt(a, false, err),
        Command::Decrypt(a) => cmd_crypt(a, true, err),
        Command::Report(a) => cmd_report(a, out),
    };
    match result {
        Ok(code) => code,
        Err(Fail(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = dispatch(std::iter::once("symbench").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn sizes_parse() {
        assert_eq!(parse_size("123"), Ok(123));
        assert_eq!(parse_size("4KiB"), Ok(4096));
        assert_eq!(parse_size("16M"), Ok(16 << 20));
        assert_eq!(parse_size("10MB"), Ok(10_000_000));
        assert!(parse_size("4 parsecs").is_err());
        assert!(parse_size("").is_err());
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(&[]).0, EXIT_USAGE);
        assert_eq!(run(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run(&["select", "--require", "quantum"]).0, EXIT_USAGE);
        assert_eq!(run(&["select", "--require", "block"]).0, EXIT_USAGE);
        assert_eq!(run(&["bench", "--case-study", "9"]).0, EXIT_USAGE);
        assert_eq!(run(&["bench", "--ciphers", "ROT13", "--sizes", "16"]).0, EXIT_USAGE);
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("select"));
    }

    #[test]
    fn kat_lists_every_vector() {
        let (code, out, _) = run(&["kat"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out.lines().filter(|l| l.starts_with("PASS ")).count(), crate::kat::VECTORS.len());
    }

    #[test]
    fn oversized_stream_key_is_infeasible() {
        let (code, out, _) = run(&["select", "--require", "stream", "--min-key-bits", "4096"]);
        assert_eq!(code, EXIT_INFEASIBLE);
        assert!(out.contains("RC4"));
    }

    #[test]
    fn missing_profile_is_io_error() {
        let (code, _, err) = run(&["select", "--profile", "/nonexistent/p.json", "--size", "10"]);
        assert_eq!(code, EXIT_IO);
        assert!(err.contains("error:"));
    }
}
