//! Python bindings: ciphers, workloads, timing, profiles and selection.

use std::collections::BTreeSet;
use std::path::PathBuf;

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyBytes;

use symbench::bench::{self, BenchmarkSample, CaseStudyConfig};
use symbench::profile::{self, BenchmarkProfile, ProfileError};
use symbench::select::{self, RequiredType, SelectionConstraint};
use symbench::{CipherId, KeyMaterial, WorkloadKind, WorkloadSpec};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn profile_err(e: ProfileError) -> PyErr {
    match e {
        ProfileError::IoFailure(m) => PyOSError::new_err(m),
        other => value_err(other),
    }
}

fn cipher_id(name: &str) -> PyResult<CipherId> {
    name.parse().map_err(value_err)
}

fn kind(name: &str) -> PyResult<WorkloadKind> {
    name.parse().map_err(value_err)
}

/// (name, type, block_bits, min_key_bits, max_key_bits) for each cipher.
#[pyfunction]
fn ciphers() -> Vec<(String, String, u32, u32, u32)> {
    symbench::registry::registry()
        .into_iter()
        .map(|i| {
            let t = match i.cipher_type {
                symbench::CipherType::Block => "block",
                symbench::CipherType::Stream => "stream",
            };
            (i.id.name().to_string(), t.to_string(), i.block_size_bits, i.min_key_bits(), i.max_key_bits())
        })
        .collect()
}

/// (name, passed, detail) for every known-answer vector.
#[pyfunction]
fn run_kats() -> Vec<(String, bool, String)> {
    symbench::kat::run_kats().into_iter().map(|r| (r.name.to_string(), r.passed, r.detail)).collect()
}

fn crypt(py: Python<'_>, cipher: &str, key: &[u8], data: &[u8], decrypt: bool) -> PyResult<Py<PyBytes>> {
    let km = KeyMaterial::new(cipher_id(cipher)?, key.to_vec()).map_err(value_err)?;
    let mut state = symbench::make_cipher_state(&km).map_err(value_err)?;
    let out = if decrypt {
        symbench::ecb_decrypt(&mut state, data)
    } else {
        symbench::ecb_encrypt(&mut state, data)
    }
    .map_err(value_err)?;
    Ok(PyBytes::new(py, &out).unbind())
}

/// ECB + PKCS#7 (RC4: plain keystream XOR). Not for protecting data.
#[pyfunction]
fn encrypt(py: Python<'_>, cipher: &str, key: &[u8], data: &[u8]) -> PyResult<Py<PyBytes>> {
    crypt(py, cipher, key, data, false)
}

#[pyfunction]
fn decrypt(py: Python<'_>, cipher: &str, key: &[u8], data: &[u8]) -> PyResult<Py<PyBytes>> {
    crypt(py, cipher, key, data, true)
}

#[pyfunction]
#[pyo3(signature = (kind_name, size_bytes, seed=0))]
fn generate_workload(py: Python<'_>, kind_name: &str, size_bytes: u64, seed: u64) -> PyResult<Py<PyBytes>> {
    let w = symbench::generate_workload(WorkloadSpec::new(kind(kind_name)?, size_bytes, seed)).map_err(value_err)?;
    Ok(PyBytes::new(py, &w.bytes).unbind())
}

/// Shannon entropy in bits per byte.
#[pyfunction]
fn estimate_density(data: &[u8]) -> PyResult<f64> {
    symbench::workload::byte_entropy(data).map_err(value_err)
}

/// MiB/s for `size_bytes` encrypted in `elapsed_ns`.
#[pyfunction]
fn encryption_rate(size_bytes: u64, elapsed_ns: u64) -> f64 {
    bench::rate_mib_s(size_bytes, elapsed_ns)
}

#[pyclass(name = "Sample", frozen, from_py_object)]
#[derive(Clone)]
struct PySample(BenchmarkSample);

#[pymethods]
impl PySample {
    #[getter]
    fn cipher(&self) -> &'static str {
        self.0.cipher.name()
    }
    #[getter]
    fn key_bits(&self) -> u32 {
        self.0.key_bits
    }
    #[getter]
    fn kind(&self) -> &'static str {
        self.0.workload_kind.name()
    }
    #[getter]
    fn size_bytes(&self) -> u64 {
        self.0.size_bytes
    }
    #[getter]
    fn elapsed_ns(&self) -> u64 {
        self.0.elapsed_ns
    }
    #[getter]
    fn reps(&self) -> u32 {
        self.0.reps
    }
    #[getter]
    fn warmup(&self) -> u32 {
        self.0.warmup
    }
    #[getter]
    fn rate_mib_s(&self) -> f64 {
        bench::encryption_rate(&self.0)
    }
    fn __repr__(&self) -> String {
        format!(
            "Sample({}-{}, {}, {} B, {} ns)",
            self.0.cipher, self.0.key_bits, self.0.workload_kind, self.0.size_bytes, self.0.elapsed_ns
        )
    }
}

/// Time one (cipher, key size) over a generated workload.
#[pyfunction]
#[pyo3(signature = (cipher, key_bits, kind_name, size_bytes, reps=5, warmup=2, seed=0))]
fn time_encryption(
    py: Python<'_>,
    cipher: &str,
    key_bits: u32,
    kind_name: &str,
    size_bytes: u64,
    reps: u32,
    warmup: u32,
    seed: u64,
) -> PyResult<PySample> {
    let key = bench::bench_key(cipher_id(cipher)?, key_bits, seed).map_err(value_err)?;
    let w = symbench::generate_workload(WorkloadSpec::new(kind(kind_name)?, size_bytes, seed)).map_err(value_err)?;
    let s = py.detach(|| bench::time_encryption(&key, &w, reps, warmup)).map_err(value_err)?;
    Ok(PySample(s))
}

/// Run a case study (1..=4) with optional overrides.
#[pyfunction]
#[pyo3(signature = (study, ciphers=None, sizes=None, kinds=None, reps=None, warmup=None, seed=None))]
fn run_case_study(
    py: Python<'_>,
    study: u8,
    ciphers: Option<Vec<String>>,
    sizes: Option<Vec<u64>>,
    kinds: Option<Vec<String>>,
    reps: Option<u32>,
    warmup: Option<u32>,
    seed: Option<u64>,
) -> PyResult<Vec<PySample>> {
    let mut cfg = CaseStudyConfig::defaults(study).map_err(value_err)?;
    if let Some(c) = ciphers {
        cfg.ciphers = c.iter().map(|n| cipher_id(n)).collect::<PyResult<_>>()?;
    }
    if let Some(s) = sizes {
        cfg.sizes = s;
    }
    if let Some(k) = kinds {
        cfg.kinds = k.iter().map(|n| kind(n)).collect::<PyResult<_>>()?;
    }
    cfg.reps = reps.unwrap_or(cfg.reps);
    cfg.warmup = warmup.unwrap_or(cfg.warmup);
    cfg.seed = seed.unwrap_or(cfg.seed);
    let samples = py.detach(|| bench::run_case_study(&cfg)).map_err(value_err)?;
    Ok(samples.into_iter().map(PySample).collect())
}

#[pyclass(name = "Profile", frozen)]
struct PyProfile(BenchmarkProfile);

#[pymethods]
impl PyProfile {
    /// Fit every (cipher, key_bits) group that has two or more distinct sizes.
    #[staticmethod]
    #[pyo3(signature = (samples, host_note=String::new()))]
    fn from_samples(samples: Vec<PySample>, host_note: String) -> Self {
        let (p, _) = BenchmarkProfile::from_samples(samples.into_iter().map(|s| s.0).collect(), host_note);
        PyProfile(p)
    }

    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        profile::load_profile(&path).map(PyProfile).map_err(profile_err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        BenchmarkProfile::from_json(text).map(PyProfile).map_err(profile_err)
    }

    fn save(&self, path: PathBuf) -> PyResult<()> {
        profile::save_profile(&self.0, &path).map_err(profile_err)
    }

    fn to_json(&self) -> PyResult<String> {
        self.0.to_json().map_err(profile_err)
    }

    /// (cipher, key_bits, slope_ns_per_byte, intercept_ns, r_squared, n_samples)
    fn fits(&self) -> Vec<(String, u32, f64, f64, f64, u32)> {
        self.0
            .fits
            .iter()
            .map(|f| (f.cipher.name().to_string(), f.key_bits, f.slope_ns_per_byte, f.intercept_ns, f.r_squared, f.n_samples))
            .collect()
    }

    fn samples(&self) -> Vec<PySample> {
        self.0.samples.iter().copied().map(PySample).collect()
    }

    fn predict_ns(&self, cipher: &str, key_bits: u32, size_bytes: u64) -> PyResult<u64> {
        profile::predict_time(&self.0, cipher_id(cipher)?, key_bits, size_bytes).map_err(profile_err)
    }

    /// Returns (cipher, key_bits, predicted_ns, report) for the winner.
    #[pyo3(signature = (size_bytes, require="any", min_key_bits=0, allow=None))]
    fn select(
        &self,
        size_bytes: u64,
        require: &str,
        min_key_bits: u32,
        allow: Option<Vec<String>>,
    ) -> PyResult<(String, u32, u64, String)> {
        let required_type: RequiredType = require.parse().map_err(value_err)?;
        let allowed_ciphers: BTreeSet<CipherId> = match allow {
            Some(names) => names.iter().map(|n| cipher_id(n)).collect::<PyResult<_>>()?,
            None => CipherId::ALL.into_iter().collect(),
        };
        let c = SelectionConstraint { required_type, min_key_bits, allowed_ciphers, size_bytes };
        match select::select(&self.0, &c) {
            Ok(d) => Ok((d.cipher.name().to_string(), d.key_bits, d.predicted_ns, select::explain(&d))),
            Err(e) => Err(value_err(select::explain_failure(&e))),
        }
    }

    fn __len__(&self) -> usize {
        self.0.samples.len()
    }
}

#[pymodule]
fn symbench_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(ciphers, m)?)?;
    m.add_function(wrap_pyfunction!(run_kats, m)?)?;
    m.add_function(wrap_pyfunction!(encrypt, m)?)?;
    m.add_function(wrap_pyfunction!(decrypt, m)?)?;
    m.add_function(wrap_pyfunction!(generate_workload, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_density, m)?)?;
    m.add_function(wrap_pyfunction!(encryption_rate, m)?)?;
    m.add_function(wrap_pyfunction!(time_encryption, m)?)?;
    m.add_function(wrap_pyfunction!(run_case_study, m)?)?;
    m.add_class::<PySample>()?;
    m.add_class::<PyProfile>()?;
    Ok(())
}
