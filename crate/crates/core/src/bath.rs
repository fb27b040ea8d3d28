//! Bath descriptions: discrete bosonic modes or an Ohmic continuum, each at a
//! fixed temperature.

use num_complex::Complex64;

use crate::{Error, Result};

/// Below this value of `omega / 2T` the hyperbolic cotangent is taken from its
/// Laurent series.
const COTH_SERIES_THRESHOLD: f64 = 1e-6;

/// A single bosonic mode with angular frequency `omega` and complex coupling
/// `g` to the qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    omega: f64,
    g: Complex64,
}

impl Mode {
    pub fn new(omega: f64, g: Complex64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::invalid(format!(
                "mode frequency must be finite and > 0, got {omega}"
            )));
        }
        if !(g.re.is_finite() && g.im.is_finite()) {
            return Err(Error::invalid("mode coupling must be finite"));
        }
        Ok(Self { omega, g })
    }

    /// Mode with a real coupling.
    pub fn real(omega: f64, g: f64) -> Result<Self> {
        Self::new(omega, Complex64::new(g, 0.0))
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn g(&self) -> Complex64 {
        self.g
    }

    pub fn coupling_sq(&self) -> f64 {
        self.g.norm_sqr()
    }
}

/// Ohmic spectral density `I(omega) = alpha * omega * exp(-omega / omega_c)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ohmic {
    alpha: f64,
    omega_c: f64,
}

impl Ohmic {
    /// Coupling strength used when none is configured. With this value the
    /// prefactor `4 I(omega)` has unit slope at small frequency.
    pub const DEFAULT_ALPHA: f64 = 0.25;

    pub fn new(alpha: f64, omega_c: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::invalid(format!("alpha must be >= 0, got {alpha}")));
        }
        if !(omega_c.is_finite() && omega_c > 0.0) {
            return Err(Error::invalid(format!(
                "cutoff frequency must be > 0, got {omega_c}"
            )));
        }
        Ok(Self { alpha, omega_c })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }

    pub fn density(&self, omega: f64) -> f64 {
        self.alpha * omega * (-omega / self.omega_c).exp()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Bath {
    Discrete(Vec<Mode>),
    Continuum(Ohmic),
}

/// A bath together with its temperature.
#[derive(Debug, Clone, PartialEq)]
pub struct BathSpec {
    bath: Bath,
    temperature: f64,
}

impl BathSpec {
    pub fn discrete(modes: Vec<Mode>, temperature: f64) -> Result<Self> {
        check_temperature(temperature)?;
        Ok(Self {
            bath: Bath::Discrete(modes),
            temperature,
        })
    }

    pub fn ohmic(alpha: f64, omega_c: f64, temperature: f64) -> Result<Self> {
        check_temperature(temperature)?;
        Ok(Self {
            bath: Bath::Continuum(Ohmic::new(alpha, omega_c)?),
            temperature,
        })
    }

    pub fn bath(&self) -> &Bath {
        &self.bath
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    /// The Ohmic density, or an error for a discrete bath.
    pub fn continuum(&self) -> Result<&Ohmic> {
        match &self.bath {
            Bath::Continuum(o) => Ok(o),
            Bath::Discrete(_) => Err(Error::UnsupportedBath(
                "a discrete bath has no spectral density",
            )),
        }
    }

    pub fn modes(&self) -> Option<&[Mode]> {
        match &self.bath {
            Bath::Discrete(m) => Some(m),
            Bath::Continuum(_) => None,
        }
    }

    /// `I(omega)` for a continuum bath.
    pub fn spectral_density(&self, omega: f64) -> Result<f64> {
        let ohmic = self.continuum()?;
        if !(omega >= 0.0) {
            return Err(Error::invalid(format!(
                "spectral density needs omega >= 0, got {omega}"
            )));
        }
        Ok(ohmic.density(omega))
    }

    /// `1 / omega_c` for a continuum, `1 / max_k omega_k` for discrete modes.
    pub fn correlation_time(&self) -> Result<f64> {
        match &self.bath {
            Bath::Continuum(o) => Ok(1.0 / o.omega_c),
            Bath::Discrete(modes) => modes
                .iter()
                .map(Mode::omega)
                .reduce(f64::max)
                .map(|w| 1.0 / w)
                .ok_or_else(|| Error::invalid("discrete bath has no modes")),
        }
    }

    /// Replaces a continuum by `n` modes on a uniform midpoint grid over
    /// `(0, omega_max)` with `|g_k|^2 = I(omega_k) * d_omega`.
    pub fn discretize(&self, n: usize, omega_max: f64) -> Result<BathSpec> {
        let ohmic = self.continuum()?;
        if n == 0 || !(omega_max > 0.0) {
            return Err(Error::invalid("discretization needs n > 0 and omega_max > 0"));
        }
        let dw = omega_max / n as f64;
        let modes = (0..n)
            .map(|k| {
                let w = (k as f64 + 0.5) * dw;
                Mode::real(w, (ohmic.density(w) * dw).sqrt())
            })
            .collect::<Result<Vec<_>>>()?;
        BathSpec::discrete(modes, self.temperature)
    }
}

fn check_temperature(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("temperature must be >= 0, got {t}")))
    }
}

/// Thermal factor `coth(omega / 2T)`; exactly 1 at zero temperature.
pub fn coth_half(omega: f64, temperature: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::invalid(format!(
            "coth_half needs omega > 0, got {omega}"
        )));
    }
    check_temperature(temperature)?;
    Ok(coth_half_unchecked(omega, temperature))
}

pub(crate) fn coth_half_unchecked(omega: f64, temperature: f64) -> f64 {
    if temperature == 0.0 {
        return 1.0;
    }
    let x = omega / (2.0 * temperature);
    if x < COTH_SERIES_THRESHOLD {
        1.0 / x + x / 3.0
    } else {
        1.0 / x.tanh()
    }
}
