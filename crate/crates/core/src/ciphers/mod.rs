//! Raw cipher primitives. These take already-validated key bytes and
//! operate in place; registry-level validation lives in [`crate::cipher`].

pub mod aes;
pub mod blowfish;
mod blowfish_tables;
pub mod des;
pub mod rc2;
pub mod rc4;
pub mod skipjack;

pub use aes::Aes;
pub use blowfish::Blowfish;
pub use des::{Des, TripleDes};
pub use rc2::Rc2;
pub use rc4::Rc4;
pub use skipjack::Skipjack;
