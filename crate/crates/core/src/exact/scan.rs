use super::engine::ExactEngine;
use super::model::ExactModel;
use crate::{Error, Result};

/// Agreement required between consecutive truncations.
pub const SCAN_TOL: f64 = 1e-5;

/// Free-decay exponents of one model at several uniform Fock cutoffs.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub n_max: Vec<usize>,
    pub times: Vec<f64>,
    pub gammas: Vec<Vec<f64>>,
    /// `max_t |Gamma(n_{i+1}) - Gamma(n_i)|` for each consecutive pair.
    pub differences: Vec<f64>,
}

impl ConvergenceReport {
    /// Whether the last pair of cutoffs agrees to [`SCAN_TOL`].
    pub fn passed(&self) -> bool {
        self.differences.last().is_some_and(|&d| d < SCAN_TOL)
    }

    /// Smallest listed cutoff whose successor agrees with it to `tol`.
    pub fn first_converged(&self, tol: f64) -> Option<usize> {
        self.differences
            .iter()
            .position(|&d| d < tol)
            .map(|i| self.n_max[i])
    }
}

/// Reruns the `|+>` free-decay curve at `times` for every cutoff in
/// `n_max_list`. The thermal truncation check is skipped so that too-small
/// cutoffs show up as differences instead of errors.
pub fn convergence_scan(
    model: &ExactModel,
    n_max_list: &[usize],
    times: &[f64],
) -> Result<ConvergenceReport> {
    if n_max_list.len() < 2 {
        return Err(Error::invalid("a scan needs at least two cutoffs"));
    }
    if times.is_empty() {
        return Err(Error::invalid("a scan needs at least one time"));
    }
    let gammas = n_max_list
        .iter()
        .map(|&n| {
            let m = model.retruncated(vec![n; model.modes().len()])?;
            ExactEngine::new_unchecked(m)?.gamma_free(times)
        })
        .collect::<Result<Vec<_>>>()?;
    let differences = gammas
        .windows(2)
        .map(|w| {
            w[0].iter()
                .zip(&w[1])
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
        .collect();
    Ok(ConvergenceReport {
        n_max: n_max_list.to_vec(),
        times: times.to_vec(),
        gammas,
        differences,
    })
}
