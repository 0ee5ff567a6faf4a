//! Two-way entanglement purification in the minimum-distance setting.
//!
//! `n` noisy EPR pairs suffer arbitrary errors on at most `t` pairs. A
//! protocol adaptively measures commuting Pauli operators, exchanging
//! outcomes after each one, and must always end with at least `k` perfect
//! pairs. This crate provides the phaseless Pauli algebra, stabilizer and
//! candidate-error bookkeeping, the adaptive simulator and exhaustive
//! verifier, the hand-built protocols, the greedy synthesizer, and the
//! coding bounds they are compared against.

pub mod bounds;
pub mod engine;
pub mod error;
pub mod errorspace;
mod linalg;
pub mod pauli;
pub mod protocols;
pub mod stabilizer;
pub mod synth;

pub use engine::{
    generic_correction, simulate, simulate_observed, verify, verify_runs, verify_with, History,
    Params, Report, Step, Strategy, Transcript, VerifyOptions,
};
pub use error::{Error, Result};
pub use errorspace::{count_errors, enumerate_errors, CosetClass, ErrorSet};
pub use pauli::{Dim, PauliVec};
pub use stabilizer::{StabilizerSet, Syndrome};
