//! Synthesis of multi-controlled single-qubit gates into elementary
//! {one-qubit, CNOT} circuits.
//!
//! The crate provides:
//!
//! * exact linear-depth decomposition of `C^k U` for arbitrary 2x2 unitaries
//!   (4n^2 - 12n + 10 CNOTs on n = k + 1 qubits),
//! * approximate decompositions that trade a spectral error `epsilon` for
//!   linear CNOT counts (the "theorem 1" and multi-target-optimized
//!   "theorem 3" strategies),
//! * multi-controlled SU(2) and multi-controlled X building blocks
//!   (dirty-ancilla chains, relative-phase Toffolis, multi-target sharing),
//! * a dense statevector oracle that verifies every construction, and
//! * closed-form CNOT cost models plus a CLI driver (`mcgate`).
//!
//! Qubit `0` is the least-significant bit of a basis-state index everywhere.

pub mod circuit;
pub mod cost;
pub mod error;
pub mod mcsu2;
pub mod mcu;
pub mod mcx;
pub mod oracle;
pub mod qasm;
pub mod unitary;

pub use circuit::{Circuit, Gate, QubitId};
pub use error::{Error, Result};
pub use unitary::UnitaryMatrix2;
