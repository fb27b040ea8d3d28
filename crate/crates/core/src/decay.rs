//! Free (unpulsed) pure dephasing: the damping function `Gamma_0(t)` and the
//! coherence magnitude `exp(-Gamma_0)` it produces.
//!
//! The deterministic `exp(i omega_0 t)` rotation of the coherence is never
//! included here; curves report magnitudes only.

use crate::bath::{coth_half_unchecked, Bath, BathSpec, Mode, Ohmic};
use crate::quad::{integrate, upper_cutoff};
use crate::{Error, Result};

/// Relative tolerance handed to the quadrature for continuum integrals.
pub(crate) const CONTINUUM_TOL: f64 = 1e-10;

/// Tail tolerance used to place the upper integration limit.
pub(crate) const TAIL_EPS: f64 = 1e-12;

/// Fraction of the cutoff below which the integrand is replaced by its
/// analytic small-frequency limit.
pub(crate) const LOWER_EDGE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoherenceSample {
    pub t: f64,
    pub gamma: f64,
    pub coherence: f64,
}

impl DecoherenceSample {
    pub fn new(t: f64, gamma: f64) -> Self {
        Self {
            t,
            gamma,
            coherence: (-gamma).exp(),
        }
    }
}

/// A sampled coherence curve. The first sample is always the anchor
/// `(t0, 0, 1)`; for stroboscopic series sample `n` is taken after `n` cycles.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoherenceCurve {
    pub label: String,
    pub samples: Vec<DecoherenceSample>,
}

impl DecoherenceCurve {
    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.t)
    }

    pub fn coherences(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.coherence)
    }
}

/// `Gamma_0(k; t) = 4|g|^2 coth(w/2T) (1 - cos wt) / w^2` for one mode,
/// evaluated as `8|g|^2 coth sin^2(wt/2) / w^2`.
pub(crate) fn mode_gamma0(mode: &Mode, temperature: f64, t: f64) -> f64 {
    let w = mode.omega();
    let s = (0.5 * w * t).sin();
    8.0 * mode.coupling_sq() * coth_half_unchecked(w, temperature) * s * s / (w * w)
}

pub fn gamma0_discrete(modes: &[Mode], temperature: f64, t: f64) -> Result<f64> {
    check_time(t)?;
    if !(temperature >= 0.0) {
        return Err(Error::invalid("temperature must be >= 0"));
    }
    Ok(modes.iter().map(|m| mode_gamma0(m, temperature, t)).sum())
}

pub(crate) fn free_integrand(ohmic: &Ohmic, temperature: f64, t: f64, w: f64) -> f64 {
    let s = (0.5 * w * t).sin();
    ohmic.density(w) * 4.0 * coth_half_unchecked(w, temperature) * 2.0 * s * s / (w * w)
}

/// Closed-form integral of the free integrand over `[0, a]` for `a << omega_c`,
/// using its leading small-frequency behaviour.
fn free_lower_edge(ohmic: &Ohmic, temperature: f64, t: f64, a: f64) -> f64 {
    if temperature > 0.0 {
        // integrand -> 4 alpha T t^2
        4.0 * ohmic.alpha() * temperature * t * t * a
    } else {
        // integrand -> 2 alpha t^2 w
        ohmic.alpha() * t * t * a * a
    }
}

pub fn gamma0_continuum(spec: &BathSpec, t: f64) -> Result<f64> {
    check_time(t)?;
    let ohmic = spec.continuum()?;
    if t == 0.0 || ohmic.alpha() == 0.0 {
        return Ok(0.0);
    }
    let temp = spec.temperature();
    let lo = LOWER_EDGE * ohmic.omega_c();
    let hi = upper_cutoff(spec, TAIL_EPS)?;
    let body = integrate(|w| free_integrand(ohmic, temp, t, w), lo, hi, CONTINUUM_TOL)?;
    Ok(body.value + free_lower_edge(ohmic, temp, t, lo))
}

/// `Gamma_0(t)` for either kind of bath.
pub fn gamma0(spec: &BathSpec, t: f64) -> Result<f64> {
    match spec.bath() {
        Bath::Discrete(modes) => gamma0_discrete(modes, spec.temperature(), t),
        Bath::Continuum(_) => gamma0_continuum(spec, t),
    }
}

/// Uniform grid from 0 to `t_max` with `n_samples` points.
pub fn free_curve(spec: &BathSpec, t_max: f64, n_samples: usize) -> Result<DecoherenceCurve> {
    if n_samples < 2 {
        return Err(Error::invalid("a curve needs at least 2 samples"));
    }
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(Error::invalid(format!("t_max must be > 0, got {t_max}")));
    }
    let step = t_max / (n_samples - 1) as f64;
    let samples = (0..n_samples)
        .map(|i| {
            let t = if i + 1 == n_samples { t_max } else { i as f64 * step };
            Ok(DecoherenceSample::new(t, gamma0(spec, t)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DecoherenceCurve {
        label: "free".into(),
        samples,
    })
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("elapsed time must be >= 0, got {t}")))
    }
}
