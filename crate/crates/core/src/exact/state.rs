use faer::Side;
use num_complex::Complex64;

use super::model::ExactModel;
use super::{Mat, ZERO};
use crate::{Error, Result};

/// Tolerance on trace, Hermiticity and positivity of a density matrix.
pub const STATE_TOL: f64 = 1e-10;

/// Largest accepted thermal population of a mode's top Fock level.
pub const OCCUPANCY_LIMIT: f64 = 1e-6;

/// Dense density matrix over a model's Hilbert space.
#[derive(Debug, Clone)]
pub struct DensityMatrix(pub(crate) Mat);

impl DensityMatrix {
    /// Wraps a matrix after checking trace, Hermiticity and positivity.
    pub fn new(m: Mat) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::invalid("density matrix must be square and non-empty"));
        }
        let rho = Self(m);
        rho.validate()?;
        Ok(rho)
    }

    pub fn matrix(&self) -> &Mat {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.0[(i, i)]).sum()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        super::model::hermiticity_defect(&self.0)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        let ev = self
            .0
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|e| Error::Eigen(format!("{e:?}")))?;
        Ok(ev.into_iter().fold(f64::INFINITY, f64::min))
    }

    /// Checks the three state invariants to [`STATE_TOL`].
    pub fn validate(&self) -> Result<()> {
        let tr = self.trace();
        if (tr - 1.0).norm() > STATE_TOL {
            return Err(Error::invalid(format!("trace {tr} differs from 1")));
        }
        let h = self.hermiticity_defect();
        if h > STATE_TOL {
            return Err(Error::invalid(format!("not Hermitian (defect {h:e})")));
        }
        let lo = self.min_eigenvalue()?;
        if lo < -STATE_TOL {
            return Err(Error::invalid(format!("negative eigenvalue {lo:e}")));
        }
        Ok(())
    }

    /// Trace and Hermiticity only; cheap enough for every step.
    pub(crate) fn debug_check(&self) {
        if cfg!(debug_assertions) {
            let tr = self.trace();
            debug_assert!((tr - 1.0).norm() < STATE_TOL, "trace drifted to {tr}");
            let h = self.hermiticity_defect();
            debug_assert!(h < STATE_TOL, "Hermiticity defect {h:e}");
        }
    }
}

/// Reduced 2x2 qubit density matrix, `m[i][j] = <i| rho |j>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitMatrix(pub [[Complex64; 2]; 2]);

impl QubitMatrix {
    /// `|psi><psi|` for the normalised state `a|0> + b|1>`.
    pub fn pure(a: Complex64, b: Complex64) -> Result<Self> {
        let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::invalid("qubit amplitudes must be finite and not both zero"));
        }
        let (a, b) = (a / norm, b / norm);
        Ok(Self([[a * a.conj(), a * b.conj()], [b * a.conj(), b * b.conj()]]))
    }

    /// `(|0> + |1>)/sqrt(2)`.
    pub fn plus() -> Self {
        let h = Complex64::new(0.5, 0.0);
        Self([[h, h], [h, h]])
    }

    pub fn ground() -> Self {
        Self([[ZERO, ZERO], [ZERO, Complex64::new(1.0, 0.0)]])
    }

    pub fn excited() -> Self {
        Self([[Complex64::new(1.0, 0.0), ZERO], [ZERO, ZERO]])
    }

    /// `(I + r . sigma)/2` for a Bloch vector with `|r| <= 1`.
    pub fn from_bloch(r: [f64; 3]) -> Result<Self> {
        let len = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
        if !(len <= 1.0 + 1e-12) {
            return Err(Error::invalid(format!("Bloch vector length {len} exceeds 1")));
        }
        let [x, y, z] = r;
        Ok(Self([
            [Complex64::new(0.5 * (1.0 + z), 0.0), Complex64::new(0.5 * x, -0.5 * y)],
            [Complex64::new(0.5 * x, 0.5 * y), Complex64::new(0.5 * (1.0 - z), 0.0)],
        ]))
    }

    pub fn bloch(&self) -> [f64; 3] {
        let c = self.0[1][0];
        [2.0 * c.re, 2.0 * c.im, (self.0[0][0] - self.0[1][1]).re]
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    /// `|rho_01|`.
    pub fn coherence(&self) -> f64 {
        self.0[0][1].norm()
    }

    pub fn populations(&self) -> [f64; 2] {
        [self.0[0][0].re, self.0[1][1].re]
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let m = &self.0;
        [
            m[0][0].im.abs(),
            m[1][1].im.abs(),
            (m[0][1] - m[1][0].conj()).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let [x, y, z] = self.bloch();
        let tr = self.trace().re;
        0.5 * (tr - (x * x + y * y + z * z).sqrt())
    }

    pub fn validate(&self) -> Result<()> {
        if (self.trace() - 1.0).norm() > STATE_TOL
            || self.hermiticity_defect() > STATE_TOL
            || self.min_eigenvalue() < -STATE_TOL
        {
            return Err(Error::invalid(format!("invalid qubit state {:?}", self.0)));
        }
        Ok(())
    }

    /// Frobenius distance.
    pub fn distance(&self, other: &QubitMatrix) -> f64 {
        let mut s = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                s += (self.0[i][j] - other.0[i][j]).norm_sqr();
            }
        }
        s.sqrt()
    }

    /// `<psi| rho |psi>` for a pure reference state `psi`.
    pub fn fidelity_with_pure(&self, psi: &QubitMatrix) -> Result<f64> {
        // Tr(rho psi) equals <psi|rho|psi> when psi is a projector
        let mut f = ZERO;
        for i in 0..2 {
            for j in 0..2 {
                f += self.0[i][j] * psi.0[j][i];
            }
        }
        if psi.min_eigenvalue().abs() > 1e-9 {
            return Err(Error::invalid("reference state is not pure"));
        }
        Ok(f.re)
    }
}

/// Truncated Gibbs populations of every bath basis state, checking each
/// mode's top-level occupancy against [`OCCUPANCY_LIMIT`].
pub fn thermal_weights(model: &ExactModel) -> Result<Vec<f64>> {
    let per_mode = mode_populations(model);
    for (k, p) in per_mode.iter().enumerate() {
        let top = *p.last().unwrap();
        if top > OCCUPANCY_LIMIT {
            return Err(Error::Truncation {
                mode: k,
                occupancy: top,
                limit: OCCUPANCY_LIMIT,
            });
        }
    }
    Ok(product_weights(model, &per_mode))
}

/// Smallest cutoff `n_max >= 2` whose truncated Gibbs state puts less than
/// [`OCCUPANCY_LIMIT`] in the top level.
pub fn minimal_cutoff(omega: f64, temperature: f64) -> Result<usize> {
    if !(omega > 0.0 && temperature >= 0.0 && temperature.is_finite()) {
        return Err(Error::invalid("minimal_cutoff needs omega > 0 and T >= 0"));
    }
    if temperature == 0.0 {
        return Ok(2);
    }
    let q = (-omega / temperature).exp();
    // top level of n_max + 1 levels: q^n (1 - q) / (1 - q^(n+1))
    (2..=super::DIMENSION_CAP / 2)
        .find(|&n| q.powi(n as i32) * (1.0 - q) / (1.0 - q.powi(n as i32 + 1)) < OCCUPANCY_LIMIT)
        .ok_or_else(|| Error::invalid(format!("T = {temperature} is too hot for any cutoff")))
}

/// Same as [`thermal_weights`] without the truncation check.
pub(crate) fn thermal_weights_unchecked(model: &ExactModel) -> Vec<f64> {
    product_weights(model, &mode_populations(model))
}

fn mode_populations(model: &ExactModel) -> Vec<Vec<f64>> {
    let t = model.temperature();
    model
        .modes()
        .iter()
        .zip(model.truncation())
        .map(|(m, &n_max)| {
            let mut p: Vec<f64> = (0..=n_max)
                .map(|n| {
                    if t == 0.0 {
                        if n == 0 {
                            1.0
                        } else {
                            0.0
                        }
                    } else {
                        (-(n as f64) * m.omega() / t).exp()
                    }
                })
                .collect();
            let z: f64 = p.iter().sum();
            p.iter_mut().for_each(|x| *x /= z);
            p
        })
        .collect()
}

fn product_weights(model: &ExactModel, per_mode: &[Vec<f64>]) -> Vec<f64> {
    (0..model.bath_dim())
        .map(|b| {
            model
                .occupations(b)
                .iter()
                .zip(per_mode)
                .map(|(&n, p)| p[n])
                .product()
        })
        .collect()
}

/// Thermal bath state on the truncated bath space.
pub fn thermal_state(model: &ExactModel) -> Result<DensityMatrix> {
    Ok(diagonal_state(&thermal_weights(model)?))
}

fn diagonal_state(w: &[f64]) -> DensityMatrix {
    let n = w.len();
    DensityMatrix(Mat::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(w[i], 0.0)
        } else {
            ZERO
        }
    }))
}

/// `rho_q (x) diag(bath_weights)`.
pub fn product_state(qubit: &QubitMatrix, bath_weights: &[f64]) -> DensityMatrix {
    let db = bath_weights.len();
    let mut m = Mat::zeros(2 * db, 2 * db);
    for p in 0..2 {
        for q in 0..2 {
            for (b, &w) in bath_weights.iter().enumerate() {
                m[(p * db + b, q * db + b)] = qubit.0[p][q] * w;
            }
        }
    }
    DensityMatrix(m)
}

/// `Tr_B rho`.
pub fn partial_trace_qubit(rho: &DensityMatrix) -> Result<QubitMatrix> {
    let dim = rho.dim();
    if !dim.is_multiple_of(2) {
        return Err(Error::invalid("dimension is not a qubit times a bath"));
    }
    let db = dim / 2;
    let mut out = [[ZERO; 2]; 2];
    for (p, row) in out.iter_mut().enumerate() {
        for (q, entry) in row.iter_mut().enumerate() {
            *entry = (0..db).map(|b| rho.0[(p * db + b, q * db + b)]).sum();
        }
    }
    Ok(QubitMatrix(out))
}
