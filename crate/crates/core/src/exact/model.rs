use num_complex::Complex64;

use super::{Mat, ONE, ZERO};
use crate::bath::Mode;
use crate::{Error, Result};

pub const MAX_MODES: usize = 3;
pub const DIMENSION_CAP: usize = 4096;
pub const HERMITICITY_TOL: f64 = 1e-12;

/// How the qubit talks to the modes.
#[derive(Debug, Clone, PartialEq)]
pub enum Coupling {
    /// `sigma_z * sum_k (g_k b_k^dag + g_k^* b_k)` with the modes' own `g_k`.
    Dephasing,
    /// `sum_k (g_k sigma_+ b_k + g_k^* sigma_- b_k^dag)` with the modes' own `g_k`.
    JaynesCummings,
    /// `sum_alpha sigma_alpha * sum_k (g_ak b_k^dag + g_ak^* b_k)` over the
    /// axes that are present; each list has one coupling per mode and the
    /// modes' own `g_k` are ignored.
    General {
        x: Option<Vec<Complex64>>,
        y: Option<Vec<Complex64>>,
        z: Option<Vec<Complex64>>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactModel {
    omega0: f64,
    modes: Vec<Mode>,
    truncation: Vec<usize>,
    temperature: f64,
    coupling: Coupling,
}

impl ExactModel {
    /// Model with the same Fock cutoff `n_max` on every mode.
    pub fn new(
        omega0: f64,
        modes: Vec<Mode>,
        n_max: usize,
        temperature: f64,
        coupling: Coupling,
    ) -> Result<Self> {
        let truncation = vec![n_max; modes.len()];
        Self::with_truncation(omega0, modes, truncation, temperature, coupling)
    }

    /// Model with a separate cutoff per mode.
    pub fn with_truncation(
        omega0: f64,
        modes: Vec<Mode>,
        truncation: Vec<usize>,
        temperature: f64,
        coupling: Coupling,
    ) -> Result<Self> {
        if !omega0.is_finite() {
            return Err(Error::invalid("omega0 must be finite"));
        }
        if !(temperature.is_finite() && temperature >= 0.0) {
            return Err(Error::invalid(format!("temperature must be >= 0, got {temperature}")));
        }
        if modes.len() > MAX_MODES {
            return Err(Error::invalid(format!(
                "at most {MAX_MODES} modes, got {}",
                modes.len()
            )));
        }
        if truncation.len() != modes.len() {
            return Err(Error::invalid("one truncation level per mode required"));
        }
        if let Some(n) = truncation.iter().find(|&&n| n < 2) {
            return Err(Error::invalid(format!("n_max must be >= 2, got {n}")));
        }
        if let Coupling::General { x, y, z } = &coupling {
            for g in [x, y, z].into_iter().flatten() {
                if g.len() != modes.len() {
                    return Err(Error::invalid("general coupling needs one entry per mode"));
                }
                if g.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
                    return Err(Error::invalid("general coupling must be finite"));
                }
            }
        }
        let dim = truncation
            .iter()
            .try_fold(2usize, |acc, &n| acc.checked_mul(n + 1))
            .unwrap_or(usize::MAX);
        if dim > DIMENSION_CAP {
            return Err(Error::DimensionCap {
                dim,
                cap: DIMENSION_CAP,
            });
        }
        Ok(Self {
            omega0,
            modes,
            truncation,
            temperature,
            coupling,
        })
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn truncation(&self) -> &[usize] {
        &self.truncation
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn coupling(&self) -> &Coupling {
        &self.coupling
    }

    /// Same model with different cutoffs.
    pub fn retruncated(&self, truncation: Vec<usize>) -> Result<Self> {
        Self::with_truncation(
            self.omega0,
            self.modes.clone(),
            truncation,
            self.temperature,
            self.coupling.clone(),
        )
    }

    /// Same model with the bath couplings switched off.
    pub fn uncoupled(&self) -> Self {
        let mut out = self.clone();
        out.modes = self
            .modes
            .iter()
            .map(|m| Mode::real(m.omega(), 0.0).expect("frequency already validated"))
            .collect();
        if let Coupling::General { x, y, z } = &mut out.coupling {
            for g in [x, y, z].into_iter().flatten() {
                g.iter_mut().for_each(|c| *c = ZERO);
            }
        }
        out
    }

    pub fn bath_dim(&self) -> usize {
        self.truncation.iter().map(|n| n + 1).product()
    }

    pub fn dim(&self) -> usize {
        2 * self.bath_dim()
    }

    /// Occupation levels of each mode for bath index `b`.
    pub(crate) fn occupations(&self, mut b: usize) -> Vec<usize> {
        let mut occ = vec![0; self.modes.len()];
        for k in (0..self.modes.len()).rev() {
            let levels = self.truncation[k] + 1;
            occ[k] = b % levels;
            b /= levels;
        }
        occ
    }

    fn stride(&self, k: usize) -> usize {
        self.truncation[k + 1..].iter().map(|n| n + 1).product()
    }

    /// `sum_k (g_k b_k^dag + g_k^* b_k)` on the bath space.
    fn field(&self, g: &[Complex64]) -> Mat {
        let db = self.bath_dim();
        let mut m = Mat::zeros(db, db);
        for (k, &gk) in g.iter().enumerate() {
            self.add_ladder(&mut m, k, gk, true);
            self.add_ladder(&mut m, k, gk.conj(), false);
        }
        m
    }

    /// Adds `c * b_k^dag` (raise) or `c * b_k` to `m`.
    fn add_ladder(&self, m: &mut Mat, k: usize, c: Complex64, raise: bool) {
        if c == ZERO {
            return;
        }
        let stride = self.stride(k);
        let n_max = self.truncation[k];
        for b in 0..self.bath_dim() {
            let n = (b / stride) % (n_max + 1);
            if raise && n < n_max {
                // <n+1| b^dag |n> = sqrt(n+1)
                m[(b + stride, b)] += c * ((n + 1) as f64).sqrt();
            } else if !raise && n > 0 {
                m[(b - stride, b)] += c * (n as f64).sqrt();
            }
        }
    }

    fn ladder(&self, k: usize, c: Complex64, raise: bool) -> Mat {
        let db = self.bath_dim();
        let mut m = Mat::zeros(db, db);
        self.add_ladder(&mut m, k, c, raise);
        m
    }

    /// Full Hamiltonian as a dense matrix.
    pub fn build_hamiltonian(&self) -> Result<Mat> {
        let db = self.bath_dim();
        let dim = self.dim();
        let mut h = Mat::zeros(dim, dim);
        for b in 0..db {
            let bath_energy: f64 = self
                .occupations(b)
                .iter()
                .zip(&self.modes)
                .map(|(&n, m)| n as f64 * m.omega())
                .sum();
            h[(b, b)] = Complex64::new(0.5 * self.omega0 + bath_energy, 0.0);
            h[(db + b, db + b)] = Complex64::new(-0.5 * self.omega0 + bath_energy, 0.0);
        }
        match &self.coupling {
            Coupling::Dephasing => {
                let g: Vec<_> = self.modes.iter().map(Mode::g).collect();
                add_kron(&mut h, sigma(Axis3::Z), &self.field(&g));
            }
            Coupling::JaynesCummings => {
                // sigma_+ = |0><1|, sigma_- = |1><0|
                let plus = [[ZERO, ONE], [ZERO, ZERO]];
                let minus = [[ZERO, ZERO], [ONE, ZERO]];
                for (k, m) in self.modes.iter().enumerate() {
                    add_kron(&mut h, plus, &self.ladder(k, m.g(), false));
                    add_kron(&mut h, minus, &self.ladder(k, m.g().conj(), true));
                }
            }
            Coupling::General { x, y, z } => {
                for (axis, g) in [(Axis3::X, x), (Axis3::Y, y), (Axis3::Z, z)] {
                    if let Some(g) = g {
                        add_kron(&mut h, sigma(axis), &self.field(g));
                    }
                }
            }
        }
        let defect = hermiticity_defect(&h);
        if defect > HERMITICITY_TOL {
            return Err(Error::invalid(format!(
                "assembled Hamiltonian deviates from Hermitian by {defect:e}"
            )));
        }
        Ok(h)
    }
}

#[derive(Clone, Copy)]
pub(crate) enum Axis3 {
    X,
    Y,
    Z,
}

pub(crate) fn sigma(axis: Axis3) -> [[Complex64; 2]; 2] {
    let i = Complex64::new(0.0, 1.0);
    match axis {
        Axis3::X => [[ZERO, ONE], [ONE, ZERO]],
        Axis3::Y => [[ZERO, -i], [i, ZERO]],
        Axis3::Z => [[ONE, ZERO], [ZERO, -ONE]],
    }
}

/// `h += a (x) b` for a 2x2 qubit factor.
fn add_kron(h: &mut Mat, a: [[Complex64; 2]; 2], b: &Mat) {
    let db = b.nrows();
    for (p, row) in a.iter().enumerate() {
        for (q, &apq) in row.iter().enumerate() {
            if apq == ZERO {
                continue;
            }
            for j in 0..db {
                for i in 0..db {
                    let v = b[(i, j)];
                    if v != ZERO {
                        h[(p * db + i, q * db + j)] += apq * v;
                    }
                }
            }
        }
    }
}

pub(crate) fn hermiticity_defect(m: &Mat) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in 0..=j {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}
