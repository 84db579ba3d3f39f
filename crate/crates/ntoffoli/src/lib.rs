//! Single-step n-bit i-Toffoli and CNOT^n gates on Ising-coupled qubits.

pub mod config;
pub mod driven;
pub mod error;
pub mod evolution;
pub mod experiments;
pub mod fidelity;
pub mod gates;
pub mod linalg;
pub mod model;
pub mod qec;
pub mod synth;
pub mod units;

pub use error::{Error, Result};
