//! Simulation kernels and gadget checks for constant-depth circuits built from
//! reflections about product states.
//!
//! The crate is `no_std` (with `alloc`). Enable the `std` feature to get
//! `std::error::Error` impls through the dependencies.
//!
//! Conventions used throughout:
//! - qubit 0 is the least significant bit of a basis-state index;
//! - subset masks for Fourier coefficients share that indexing;
//! - a Boolean function's `+1` value corresponds to output bit `0`.
#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod circuit;
pub mod constructions;
pub mod error;
pub mod fourier;
pub mod gates;
pub mod library;
pub mod majority;
pub mod math;
pub mod random;
pub mod report;
pub mod rng;
pub mod sim;
pub mod states;
pub mod synth;
pub mod verify;

use core::sync::atomic::{AtomicUsize, Ordering};

pub use circuit::{Circuit, Layer, Violation};
pub use error::{Error, Result};
pub use gates::{Gate, PrimitiveOp, SingleQubitState, Unitary2};
pub use num_complex::Complex64 as C64;
pub use report::GadgetReport;
pub use rng::SplitMix64;
pub use sim::{DensityMatrix, Projector, Statevector};

/// Default limit on the number of qubits in a statevector.
pub const DEFAULT_QUBIT_CAP: usize = 26;

static QUBIT_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_QUBIT_CAP);

/// Current process-wide qubit cap.
pub fn qubit_cap() -> usize {
    QUBIT_CAP.load(Ordering::Relaxed)
}

/// Lowers the qubit cap. Requests above the current cap are ignored; the new
/// cap is returned.
pub fn set_qubit_cap(cap: usize) -> usize {
    QUBIT_CAP.fetch_min(cap, Ordering::Relaxed);
    qubit_cap()
}

/// Errors when `n` qubits exceed the current cap.
pub fn check_cap(n: usize) -> Result<()> {
    let cap = qubit_cap();
    if n > cap {
        Err(Error::QubitCap { requested: n, cap })
    } else {
        Ok(())
    }
}
