//! Weighted graph states and their fusion with dual-rail linear optics.
//!
//! A weighted graph state on `n` qubits is `∏ e^{-iχ_ab |11⟩⟨11|_ab} |+⟩^⊗n`.
//! Registers are dense state vectors with qubit 0 as the most significant
//! bit: the bit of qubit `q` in basis index `i` is `(i >> (n - 1 - q)) & 1`.
//!
//! Local gate conventions used throughout:
//!
//! * `z_rotation(θ)` is `e^{iθZ} = diag(e^{iθ}, e^{-iθ})`
//! * `phase_one(φ)` is `e^{iφ|1⟩⟨1|} = diag(1, e^{iφ})`
//!
//! Projections written as bras `A⟨0| + B⟨1|` follow the coefficient
//! convention of the fusion literature; [`state::QubitProjection::from_bra`]
//! converts them to the stored ket.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod error;
pub mod graph;
pub mod math;
pub mod optics;
pub mod protocols;
pub mod state;

pub use error::{Error, Result};
pub use graph::{Edge, WeightedGraph};
pub use math::{Mat2, C64};
pub use state::{LocalGate, PureState, QubitProjection};
