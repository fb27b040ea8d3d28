use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use faer::Side;
use num_complex::Complex64;

use super::model::ExactModel;
use super::state::{
    partial_trace_qubit, product_state, thermal_weights, thermal_weights_unchecked, DensityMatrix,
    QubitMatrix,
};
use super::{Mat, ZERO};
use crate::control::PulseTrainSpec;
use crate::pauli::{Axis, GateSequence, Step};
use crate::{Error, Result};

/// Reduced qubit state at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SequenceSample {
    pub t: f64,
    pub qubit: QubitMatrix,
}

/// A model with its Hamiltonian diagonalised once. `U(tau)` matrices are
/// cached per distinct duration; the cache is the only mutable part and is
/// behind a lock, so an engine can be shared between threads.
pub struct ExactEngine {
    model: ExactModel,
    eigenvalues: Vec<f64>,
    vectors: Mat,
    vectors_adj: Mat,
    bath_weights: Vec<f64>,
    cache: Mutex<HashMap<u64, Arc<(Mat, Mat)>>>,
}

impl std::fmt::Debug for ExactEngine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ExactEngine")
            .field("model", &self.model)
            .field("dim", &self.model.dim())
            .finish_non_exhaustive()
    }
}

impl ExactEngine {
    pub fn new(model: ExactModel) -> Result<Self> {
        let weights = thermal_weights(&model)?;
        Self::with_bath_weights(model, weights)
    }

    /// Skips the thermal truncation check; used by truncation scans.
    pub(crate) fn new_unchecked(model: ExactModel) -> Result<Self> {
        let weights = thermal_weights_unchecked(&model);
        Self::with_bath_weights(model, weights)
    }

    fn with_bath_weights(model: ExactModel, bath_weights: Vec<f64>) -> Result<Self> {
        let h = model.build_hamiltonian()?;
        let evd = h
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::Eigen(format!("{e:?}")))?;
        let vectors = evd.U().to_owned();
        let s = evd.S();
        let diag = s.column_vector();
        let eigenvalues: Vec<f64> = (0..h.nrows()).map(|i| diag[i].re).collect();
        if eigenvalues.iter().any(|e| !e.is_finite()) {
            return Err(Error::Eigen("non-finite eigenvalue".into()));
        }
        let vectors_adj = adjoint(&vectors);
        Ok(Self {
            model,
            eigenvalues,
            vectors,
            vectors_adj,
            bath_weights,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn model(&self) -> &ExactModel {
        &self.model
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn bath_weights(&self) -> &[f64] {
        &self.bath_weights
    }

    /// `rho_q (x) rho_B` with the model's thermal bath.
    pub fn initial_state(&self, qubit: &QubitMatrix) -> DensityMatrix {
        product_state(qubit, &self.bath_weights)
    }

    /// `(U(tau), U(tau)^dag)`.
    fn propagator(&self, tau: f64) -> Arc<(Mat, Mat)> {
        let key = tau.to_bits();
        if let Some(u) = self.cache.lock().unwrap().get(&key) {
            return Arc::clone(u);
        }
        let n = self.model.dim();
        let phases: Vec<Complex64> = self
            .eigenvalues
            .iter()
            .map(|&e| Complex64::from_polar(1.0, -e * tau))
            .collect();
        let scaled = Mat::from_fn(n, n, |i, j| self.vectors[(i, j)] * phases[j]);
        let u = &scaled * &self.vectors_adj;
        let u_adj = adjoint(&u);
        let entry = Arc::new((u, u_adj));
        self.cache
            .lock()
            .unwrap()
            .entry(key)
            .or_insert_with(|| Arc::clone(&entry));
        entry
    }

    /// `exp(-iH tau) rho exp(iH tau)`.
    pub fn propagate(&self, rho: &DensityMatrix, tau: f64) -> Result<DensityMatrix> {
        if !(tau.is_finite() && tau >= 0.0) {
            return Err(Error::invalid(format!("duration must be >= 0, got {tau}")));
        }
        check_dim(rho, self.model.dim())?;
        if tau == 0.0 {
            return Ok(rho.clone());
        }
        let u = self.propagator(tau);
        let out = DensityMatrix(&(&u.0 * &rho.0) * &u.1);
        out.debug_check();
        Ok(out)
    }

    /// Plays `repetitions` copies of `seq` from `initial (x) rho_B`, pulses
    /// being ideal pi rotations. Samples `t = 0` and every cycle boundary.
    pub fn run_sequence(
        &self,
        seq: &GateSequence,
        repetitions: usize,
        initial: &QubitMatrix,
    ) -> Result<Vec<SequenceSample>> {
        initial.validate()?;
        let mut rho = self.initial_state(initial);
        let cycle = seq.cycle_time();
        let mut out = Vec::with_capacity(repetitions + 1);
        out.push(SequenceSample {
            t: 0.0,
            qubit: partial_trace_qubit(&rho)?,
        });
        for rep in 1..=repetitions {
            for step in seq.steps() {
                rho = match step {
                    Step::Delay(d) => {
                        let tau = *d.numer() as f64 / *d.denom() as f64 * seq.base();
                        self.propagate(&rho, tau)?
                    }
                    Step::Pulse(axis) => apply_pulse(&rho, *axis, std::f64::consts::PI)?,
                };
            }
            let qubit = partial_trace_qubit(&rho)?;
            debug_assert!(qubit.validate().is_ok(), "reduced state left the Bloch ball");
            out.push(SequenceSample {
                t: rep as f64 * cycle,
                qubit,
            });
        }
        Ok(out)
    }

    /// [`Self::run_sequence`] for a pi_x train; sample `N` follows `N` cycles.
    pub fn run_train(
        &self,
        train: &PulseTrainSpec,
        initial: &QubitMatrix,
    ) -> Result<Vec<SequenceSample>> {
        self.run_sequence(&train.cycle(), train.n_cycles() as usize, initial)
    }

    /// Unpulsed evolution sampled at each of `times`.
    pub fn free_evolution(
        &self,
        initial: &QubitMatrix,
        times: &[f64],
    ) -> Result<Vec<SequenceSample>> {
        initial.validate()?;
        let rho0 = self.initial_state(initial);
        times
            .iter()
            .map(|&t| {
                let rho = self.propagate(&rho0, t)?;
                Ok(SequenceSample {
                    t,
                    qubit: partial_trace_qubit(&rho)?,
                })
            })
            .collect()
    }

    /// `-ln(|rho_01(t)|/|rho_01(0)|)` of free evolution from `|+>`.
    pub fn gamma_free(&self, times: &[f64]) -> Result<Vec<f64>> {
        let q0 = QubitMatrix::plus();
        Ok(self
            .free_evolution(&q0, times)?
            .iter()
            .map(|s| super::decay_exponent(&q0, &s.qubit))
            .collect())
    }

    /// Decay exponent after each of `N = 1..=n_cycles` cycles of a pi_x train.
    pub fn gamma_train(&self, train: &PulseTrainSpec) -> Result<Vec<f64>> {
        let q0 = QubitMatrix::plus();
        Ok(self
            .run_train(train, &q0)?
            .iter()
            .skip(1)
            .map(|s| super::decay_exponent(&q0, &s.qubit))
            .collect())
    }
}

fn check_dim(rho: &DensityMatrix, dim: usize) -> Result<()> {
    if rho.dim() == dim {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "state has dimension {}, model has {dim}",
            rho.dim()
        )))
    }
}

pub(crate) fn adjoint(m: &Mat) -> Mat {
    Mat::from_fn(m.ncols(), m.nrows(), |i, j| m[(j, i)].conj())
}

/// `(R (x) I) rho (R (x) I)^dag` with `R = exp(-i angle sigma_axis / 2)`.
pub fn apply_pulse(rho: &DensityMatrix, axis: Axis, angle: f64) -> Result<DensityMatrix> {
    if !angle.is_finite() {
        return Err(Error::invalid("pulse angle must be finite"));
    }
    if !rho.dim().is_multiple_of(2) {
        return Err(Error::invalid("dimension is not a qubit times a bath"));
    }
    let (c, s) = ((0.5 * angle).cos(), (0.5 * angle).sin());
    let cc = Complex64::new(c, 0.0);
    let r: [[Complex64; 2]; 2] = match axis {
        Axis::X => [[cc, Complex64::new(0.0, -s)], [Complex64::new(0.0, -s), cc]],
        Axis::Y => [[cc, Complex64::new(-s, 0.0)], [Complex64::new(s, 0.0), cc]],
        Axis::Z => [[Complex64::new(c, -s), ZERO], [ZERO, Complex64::new(c, s)]],
    };
    let db = rho.dim() / 2;
    let m = &rho.0;
    let out = Mat::from_fn(2 * db, 2 * db, |i, j| {
        let (p, a) = (i / db, i % db);
        let (q, b) = (j / db, j % db);
        let mut acc = ZERO;
        for k in 0..2 {
            for l in 0..2 {
                let w = r[p][k] * r[q][l].conj();
                if w != ZERO {
                    acc += w * m[(k * db + a, l * db + b)];
                }
            }
        }
        acc
    });
    let out = DensityMatrix(out);
    out.debug_check();
    Ok(out)
}
