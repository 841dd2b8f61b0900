//! Exact state-vector simulation of interaction-free measurement devices.
//!
//! The crate covers four layers, bottom-up:
//!
//! * [`quantum`]: labelled bases, dense complex operators and states, tensor
//!   products, spectral matrix powers and projective measurement with
//!   explicit branch bookkeeping.
//! * [`interrogation`]: the single-interferometer Zeno interrogator
//!   (polarization rotator plus absorbing object).
//! * [`shutter`]: the nested two-interferometer quantum shutter, its odd-cycle
//!   closed form, the large-N limit and the assembled shutter gates.
//! * [`protocols`]: quantum memory write/read and the shutter CNOT, driven by
//!   measurement branches and classical feedforward.
//!
//! Everything is `no_std` + `alloc`; IO, configuration and file formats live in
//! the companion `qshutter` crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod error;
pub mod interrogation;
pub mod protocols;
pub mod quantum;
pub mod shutter;

pub use error::{Error, Result};
pub use quantum::{
    Basis, Branch, BranchState, ClassicalValue, Mode, Operator, PortLabel, PureState, Record, C64,
};

/// Tolerance for operator identities (unitarity, closed form vs brute force).
pub const OPERATOR_TOL: f64 = 1e-10;
/// Tolerance for norms and probabilities.
pub const PROBABILITY_TOL: f64 = 1e-12;
