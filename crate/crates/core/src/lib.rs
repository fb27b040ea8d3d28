//! Open-loop decoherence control for a single qubit coupled to a bosonic bath.
//!
//! The crate is organised bottom-up:
//!
//! - [`bath`]: spectral densities, discrete mode lists and thermal factors.
//! - [`quad`]: adaptive Gauss-Kronrod quadrature used by the continuum integrals.
//! - [`decay`]: the free damping function and sampled coherence curves.
//! - [`control`]: the bang-bang pulsed damping function, its filter factor and
//!   stroboscopic series.
//! - [`pauli`]: exact toggling-frame algebra over the single-qubit Pauli group,
//!   including the zeroth-order average Hamiltonian decoupling check.
//! - [`exact`]: a brute-force qubit plus truncated-Fock-bath density-matrix
//!   engine that serves as the oracle for everything above.
//!
//! Units are `hbar = k_B = 1` throughout.

// `!(x >= 0.0)` guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bath;
pub mod control;
pub mod decay;
mod error;
pub mod exact;
pub mod pauli;
pub mod quad;

pub use error::{Error, Result};

pub use num_complex::Complex64;
