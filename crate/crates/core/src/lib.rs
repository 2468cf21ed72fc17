//! Entropic uncertainty bounds for rank-1 POVMs.
//!
//! The crate computes Maassen–Uffink type bounds on Shannon entropies of
//! POVM outcomes, strengthens them by optimizing over the freedom in the
//! Naimark extension, and checks every bound numerically against a search
//! over pure states.
//!
//! Module map:
//!
//! - [`linalg`]: dense complex vectors/matrices, orthonormal completion,
//!   `exp(iH)`, Haar-random unitaries.
//! - [`measurement`]: states, POVMs, Born rule, Shannon entropy, mixed-PVM union.
//! - [`naimark`]: minimal Naimark extensions and ancilla unitaries.
//! - [`bounds`]: every bound formula plus the Robertson relation.
//! - [`optimize`]: multi-restart pattern search over `W` and over states.
//! - [`verify`], [`ensemble`], [`demo`], [`io`]: soundness certificates,
//!   randomized ensembles, built-in instances and JSON/CSV formats.

#![forbid(unsafe_code)]

pub mod bounds;
pub mod demo;
pub mod ensemble;
pub mod error;
pub mod io;
pub mod linalg;
pub mod measurement;
pub mod naimark;
pub mod optimize;
pub mod verify;

pub use error::{Error, Result};
