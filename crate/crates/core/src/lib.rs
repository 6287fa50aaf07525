//! Symmetric cipher benchmarking and selection.
//!
//! Seven ciphers (AES, DES, TDES, RC2, Blowfish, Skipjack, RC4) implemented
//! from their published descriptions, an ECB/PKCS#7 mode layer, seeded
//! synthetic workloads, a median-of-N timing harness, least-squares
//! time-vs-size profiles, and a selector that picks the cipher with the
//! lowest predicted encryption time under caller constraints.
//!
//! The cipher code is not constant time and ECB is not a confidentiality
//! mode. Use this crate to measure and compare, not to protect data.

pub mod bench;
pub mod cipher;
pub mod ciphers;
pub mod cli;
pub mod kat;
pub mod mode;
pub mod profile;
pub mod registry;
pub mod select;
pub mod workload;

pub use bench::{
    encryption_rate, run_case_study, time_encryption, BenchError, BenchmarkSample, CaseStudyConfig,
};
pub use cipher::{
    decrypt_block, encrypt_block, make_cipher_state, rc4_apply, CipherError, CipherState,
    KeyMaterial,
};
pub use mode::{ecb_decrypt, ecb_encrypt, pkcs_pad, pkcs_unpad, ModeError, PaddedMessage};
pub use profile::{
    fit_profile, load_profile, predict_time, save_profile, BenchmarkProfile, LinearFit,
    ProfileError,
};
pub use registry::{info, CipherId, CipherInfo, CipherType, KeySizes};
pub use select::{
    candidates, explain, select, RequiredType, SelectError, SelectionConstraint,
    SelectionDecision,
};
pub use workload::{estimate_density, generate_workload, Workload, WorkloadKind, WorkloadSpec};
