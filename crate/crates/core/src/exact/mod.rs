//! Brute-force oracle: the qubit together with up to three truncated bosonic
//! modes, evolved as a dense density matrix.
//!
//! Basis index is `q * D_B + b`, where `q = 0` is the `sigma_z = +1` state and
//! `b` is the mixed-radix bath occupation index (first mode most significant).
//! The bath operators are truncated ladder matrices, so every result is exact
//! up to Fock truncation and floating-point round-off.

mod engine;
mod model;
mod scan;
mod state;

pub use engine::{apply_pulse, ExactEngine, SequenceSample};
pub use model::{Coupling, ExactModel, DIMENSION_CAP, HERMITICITY_TOL, MAX_MODES};
pub use scan::{convergence_scan, ConvergenceReport, SCAN_TOL};
pub use state::{
    minimal_cutoff, partial_trace_qubit, product_state, thermal_state, thermal_weights, DensityMatrix,
    QubitMatrix, OCCUPANCY_LIMIT, STATE_TOL,
};

use num_complex::Complex64;

pub(crate) type Mat = faer::Mat<Complex64>;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `-ln(|rho_01(t)| / |rho_01(0)|)` between two reduced qubit states.
pub fn decay_exponent(initial: &QubitMatrix, later: &QubitMatrix) -> f64 {
    -(later.coherence() / initial.coherence()).ln()
}
