//! Bang-bang control of the dephasing qubit by trains of ideal x-axis
//! pi-pulses.
//!
//! A train with separation `delta_t` and `N` cycles fires pulses at
//! `delta_t, 2 delta_t, ..., 2N delta_t`; each cycle lasts `2 delta_t`. At the
//! cycle boundaries `t_N = 2 N delta_t` every mode's contribution to the
//! damping function is its free value multiplied by `tan^2(w delta_t / 2)`:
//!
//! ```text
//! Gamma_P(N) = sum_k [4 |g_k|^2 coth(w_k / 2T) / w_k^2] * F(w_k delta_t, N)
//! F(theta, N) = 2 sin^2(N theta) tan^2(theta / 2)
//! ```
//!
//! This follows from integrating the mode phase against the +/-1 toggling
//! sign of `sigma_z`. The closed-form interference factor `|1 - f_k|^2` in
//! its frequently quoted form agrees with `F` only for a single cycle; it is
//! kept as [`gamma_p_printed`] for comparison.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::bath::{coth_half_unchecked, Bath, BathSpec, Mode, Ohmic};
use crate::decay::{
    gamma0, mode_gamma0, DecoherenceCurve, DecoherenceSample, CONTINUUM_TOL, TAIL_EPS,
};
use crate::pauli::{Axis, GateSequence, Step};
use crate::quad::{integrate_with_breakpoints, upper_cutoff};
use crate::{Error, Result};

/// Half-width of the window around odd multiples of pi in which
/// [`filter_factor`] is evaluated in the re-centred form.
pub const POLE_WINDOW: f64 = 1e-4;

/// Equidistant train of instantaneous x-axis pi-pulses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseTrainSpec {
    delta_t: f64,
    n_cycles: u32,
}

impl PulseTrainSpec {
    pub fn new(delta_t: f64, n_cycles: u32) -> Result<Self> {
        if !(delta_t.is_finite() && delta_t > 0.0) {
            return Err(Error::invalid(format!(
                "pulse separation must be > 0, got {delta_t}"
            )));
        }
        if n_cycles == 0 {
            return Err(Error::invalid("a pulse train needs at least one cycle"));
        }
        Ok(Self { delta_t, n_cycles })
    }

    pub fn delta_t(&self) -> f64 {
        self.delta_t
    }

    pub fn n_cycles(&self) -> u32 {
        self.n_cycles
    }

    pub fn total_time(&self) -> f64 {
        2.0 * self.n_cycles as f64 * self.delta_t
    }

    /// One cycle `d:1, p:x, d:1, p:x` in units of `delta_t`; repeat it
    /// `n_cycles` times to obtain the full train.
    pub fn cycle(&self) -> GateSequence {
        GateSequence::new(
            vec![
                Step::delay(1, 1),
                Step::Pulse(Axis::X),
                Step::delay(1, 1),
                Step::Pulse(Axis::X),
            ],
            self.delta_t,
        )
        .expect("the train cycle is a valid sequence")
    }
}

/// `F(theta, N) = 2 sin^2(N theta) tan^2(theta / 2)`, finite everywhere.
///
/// Near `theta = (2j + 1) pi` the identity `F = 2 (sin(N eps) / tan(eps / 2))^2`
/// with `eps = theta - (2j + 1) pi` is used; its limit is `8 N^2`.
pub fn filter_factor(theta: f64, n: u32) -> f64 {
    let nf = n as f64;
    let j = ((theta / PI - 1.0) * 0.5).round();
    let eps = theta - (2.0 * j + 1.0) * PI;
    if eps.abs() < POLE_WINDOW {
        if eps == 0.0 {
            return 8.0 * nf * nf;
        }
        let r = (nf * eps).sin() / (0.5 * eps).tan();
        return 2.0 * r * r;
    }
    let s = (nf * theta).sin();
    let t = (0.5 * theta).tan();
    2.0 * s * s * t * t
}

fn mode_prefactor(mode: &Mode, temperature: f64) -> f64 {
    let w = mode.omega();
    4.0 * mode.coupling_sq() * coth_half_unchecked(w, temperature) / (w * w)
}

pub fn gamma_p_discrete(modes: &[Mode], temperature: f64, train: &PulseTrainSpec) -> Result<f64> {
    if !(temperature >= 0.0) {
        return Err(Error::invalid("temperature must be >= 0"));
    }
    Ok(modes
        .iter()
        .map(|m| mode_prefactor(m, temperature) * filter_factor(m.omega() * train.delta_t, train.n_cycles))
        .sum())
}

fn pulsed_integrand(ohmic: &Ohmic, temperature: f64, train: &PulseTrainSpec, w: f64) -> f64 {
    ohmic.density(w) * 4.0 * coth_half_unchecked(w, temperature)
        * filter_factor(w * train.delta_t, train.n_cycles)
        / (w * w)
}

/// Frequencies `(2j + 1) pi / delta_t` strictly inside `(0, w_max)`.
pub fn pole_frequencies(delta_t: f64, w_max: f64) -> Vec<f64> {
    let spacing = 2.0 * PI / delta_t;
    let first = PI / delta_t;
    (0..)
        .map(|j| first + j as f64 * spacing)
        .take_while(|&w| w < w_max)
        .collect()
}

pub fn gamma_p_continuum(spec: &BathSpec, train: &PulseTrainSpec) -> Result<f64> {
    let ohmic = spec.continuum()?;
    if ohmic.alpha() == 0.0 {
        return Ok(0.0);
    }
    let temp = spec.temperature();
    let hi = upper_cutoff(spec, TAIL_EPS)?;
    let poles = pole_frequencies(train.delta_t, hi);
    // The integrand vanishes like w^2 (T > 0) or w^3 (T = 0) at the origin.
    let r = integrate_with_breakpoints(
        |w| pulsed_integrand(ohmic, temp, train, w),
        0.0,
        hi,
        &poles,
        CONTINUUM_TOL,
    )?;
    Ok(r.value)
}

/// `Gamma_P(N, delta_t)` for either kind of bath.
pub fn gamma_p(spec: &BathSpec, train: &PulseTrainSpec) -> Result<f64> {
    match spec.bath() {
        Bath::Discrete(modes) => gamma_p_discrete(modes, spec.temperature(), train),
        Bath::Continuum(_) => gamma_p_continuum(spec, train),
    }
}

/// The interference factor `|1 - f_k|^2` with
/// `f_k = 2 (1 - e^{i theta}) / (1 - e^{2 i theta}) * sum_{n=1}^{N} e^{2 i (n-1) theta}`,
/// evaluated literally.
pub fn printed_interference(theta: f64, n: u32) -> Result<f64> {
    let i = Complex64::i();
    let e1 = (i * theta).exp();
    let e2 = (i * 2.0 * theta).exp();
    let denom = Complex64::new(1.0, 0.0) - e2;
    if denom.norm() < 1e-12 {
        return Err(Error::Singular(format!(
            "printed interference factor is singular at theta = {theta}"
        )));
    }
    let sum: Complex64 = (1..=n)
        .map(|k| (i * 2.0 * (k as f64 - 1.0) * theta).exp())
        .sum();
    let f = 2.0 * (Complex64::new(1.0, 0.0) - e1) / denom * sum;
    Ok((Complex64::new(1.0, 0.0) - f).norm_sqr())
}

/// `sum_k Gamma_0(k; 2 N delta_t) |1 - f_k|^2` using [`printed_interference`].
/// Matches [`gamma_p_discrete`] for `N = 1` and differs from it otherwise.
pub fn gamma_p_printed(modes: &[Mode], temperature: f64, train: &PulseTrainSpec) -> Result<f64> {
    if !(temperature >= 0.0) {
        return Err(Error::invalid("temperature must be >= 0"));
    }
    let t_n = train.total_time();
    modes.iter().try_fold(0.0, |acc, m| {
        let x = printed_interference(m.omega() * train.delta_t, train.n_cycles)?;
        Ok(acc + mode_gamma0(m, temperature, t_n) * x)
    })
}

/// Coherence sampled at `t_N = 2 N delta_t` for `N = 0..=n_max`; sample `N`
/// holds `Gamma_P(N, delta_t)` (sample 0 is the `(0, 0, 1)` anchor).
pub fn stroboscopic_series(spec: &BathSpec, delta_t: f64, n_max: u32) -> Result<DecoherenceCurve> {
    if n_max == 0 {
        return Err(Error::invalid("n_max must be >= 1"));
    }
    PulseTrainSpec::new(delta_t, 1)?;
    let mut samples = Vec::with_capacity(n_max as usize + 1);
    samples.push(DecoherenceSample::new(0.0, 0.0));
    for n in 1..=n_max {
        let train = PulseTrainSpec::new(delta_t, n)?;
        samples.push(DecoherenceSample::new(train.total_time(), gamma_p(spec, &train)?));
    }
    Ok(DecoherenceCurve {
        label: format!("pulsed dt={delta_t}"),
        samples,
    })
}

/// Number of cycles `N = t / (2 delta_t)`, which must be a positive integer.
pub fn cycles_for(t: f64, delta_t: f64) -> Result<u32> {
    if !(t > 0.0 && delta_t > 0.0) {
        return Err(Error::invalid("echo time and pulse separation must be > 0"));
    }
    let n = t / (2.0 * delta_t);
    let rounded = n.round();
    if rounded < 1.0 || (n - rounded).abs() > 1e-9 * rounded || rounded > u32::MAX as f64 {
        return Err(Error::invalid(format!(
            "t / (2 delta_t) = {n} is not a positive integer cycle count"
        )));
    }
    Ok(rounded as u32)
}

/// `Gamma_0(t) - Gamma_P(N, delta_t)` with `t = 2 N delta_t`: the log-scale
/// coherence recovered by ending a pulse train at `t`.
pub fn echo_gain(spec: &BathSpec, t: f64, delta_t: f64) -> Result<f64> {
    let n = cycles_for(t, delta_t)?;
    let train = PulseTrainSpec::new(delta_t, n)?;
    Ok(gamma0(spec, train.total_time())? - gamma_p(spec, &train)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decay::gamma0_discrete;
    use proptest::prelude::*;

    fn mode(w: f64, g: f64) -> Mode {
        Mode::real(w, g).unwrap()
    }

    #[test]
    fn filter_small_theta() {
        for n in [1, 3, 10] {
            let theta = 1e-3;
            let f = filter_factor(theta, n);
            let approx = (n * n) as f64 * theta.powi(4) / 2.0;
            assert!(((f - approx) / approx).abs() < 1e-4);
        }
    }

    #[test]
    fn filter_forced_values() {
        assert!((filter_factor(PI / 2.0, 1) - 2.0).abs() < 1e-14);
        for n in [1u32, 2, 5, 40] {
            let pole = 8.0 * (n * n) as f64;
            assert_eq!(filter_factor(PI, n), pole);
            // Taylor limit approached from both sides
            for d in [1e-6, -1e-6] {
                let v = filter_factor(PI + d, n);
                assert!(((v - pole) / pole).abs() < 1e-9, "n={n} d={d}: {v}");
            }
            assert!(((filter_factor(3.0 * PI, n) - pole) / pole).abs() < 1e-12);
        }
    }

    #[test]
    fn filter_guard_is_continuous() {
        for n in [1u32, 2, 7, 100, 1000] {
            for j in [0.0, 1.0, 5.0] {
                let pole = (2.0 * j + 1.0) * PI;
                for sign in [1.0, -1.0] {
                    let inside = filter_factor(pole + sign * POLE_WINDOW * (1.0 - 1e-12), n);
                    let outside = filter_factor(pole + sign * POLE_WINDOW * (1.0 + 1e-12), n);
                    let rel = ((inside - outside) / outside).abs();
                    assert!(rel < 1e-8, "n={n} j={j}: {inside} vs {outside}");
                }
            }
        }
    }

    #[test]
    fn filter_n1_identity_on_random_thetas() {
        // F(theta, 1) = (1 - cos 2 theta) tan^2(theta / 2)
        let mut x = 0.123_456_789f64;
        for _ in 0..1000 {
            x = (x * 3.987_654_321 + 0.317).fract();
            let theta = (x - 0.5) * 40.0;
            let lhs = filter_factor(theta, 1);
            let rhs = (1.0 - (2.0 * theta).cos()) * (0.5 * theta).tan().powi(2);
            assert!((lhs - rhs).abs() <= 1e-9 * rhs.abs().max(1.0), "{theta}");
        }
    }

    #[test]
    fn single_mode_composed_value() {
        let train = PulseTrainSpec::new(PI / 2.0, 1).unwrap();
        let g = gamma_p_discrete(&[mode(1.0, 0.5)], 0.0, &train).unwrap();
        assert!((g - 2.0).abs() < 1e-14);
    }

    #[test]
    fn n1_matches_free_times_tan_squared() {
        let modes = [mode(1.0, 0.3), mode(2.3, 0.2)];
        let dt = 0.4;
        let train = PulseTrainSpec::new(dt, 1).unwrap();
        let expected: f64 = modes
            .iter()
            .map(|m| gamma0_discrete(&[*m], 0.7, 2.0 * dt).unwrap() * (m.omega() * dt / 2.0).tan().powi(2))
            .sum();
        let g = gamma_p_discrete(&modes, 0.7, &train).unwrap();
        assert!((g - expected).abs() < 1e-14);
    }

    #[test]
    fn printed_form_n1_and_n2() {
        assert!((printed_interference(PI / 2.0, 1).unwrap() - 1.0).abs() < 1e-14);
        let train = PulseTrainSpec::new(PI / 2.0, 1).unwrap();
        let a = gamma_p_printed(&[mode(1.0, 0.5)], 0.0, &train).unwrap();
        assert!((a - 2.0).abs() < 1e-14);
        // N = 2, theta -> 0: the printed factor tends to 1 instead of 0
        let x = printed_interference(1e-5, 2).unwrap();
        assert!((x - 1.0).abs() < 1e-8);
        assert!(filter_factor(1e-5, 2) < 1e-18);
        assert!(matches!(printed_interference(PI, 3), Err(Error::Singular(_))));
        assert!(printed_interference(0.0, 1).is_err());
    }

    #[test]
    fn continuous_flipping_limit() {
        let modes = [mode(1.0, 0.3), mode(4.0, 0.2)];
        let w_max = 4.0;
        let dt = 1e-4 / w_max;
        let t_total: f64 = 2.0;
        let n = (t_total / (2.0 * dt)).round() as u32;
        let train = PulseTrainSpec::new(dt, n).unwrap();
        let gp = gamma_p_discrete(&modes, 0.5, &train).unwrap();
        let g0 = gamma0_discrete(&modes, 0.5, train.total_time()).unwrap();
        assert!(gp < 1e-6 * g0, "{gp} vs {g0}");
    }

    #[test]
    fn resonant_mode_grows_quadratically() {
        let w = 2.0;
        let spec = BathSpec::discrete(vec![mode(w, 0.05)], 0.0).unwrap();
        let series = stroboscopic_series(&spec, PI / w, 6).unwrap();
        let g1 = series.samples[1].gamma;
        for n in 1..=6usize {
            let ratio = series.samples[n].gamma / g1;
            assert!((ratio - (n * n) as f64).abs() < 1e-9);
        }
        let free = gamma0(&spec, series.samples[6].t).unwrap();
        assert!(series.samples[6].gamma > free);
    }

    #[test]
    fn series_first_point() {
        let spec = BathSpec::discrete(vec![mode(1.0, 0.2)], 0.3).unwrap();
        let s = stroboscopic_series(&spec, 0.2, 3).unwrap();
        assert_eq!(s.samples.len(), 4);
        assert_eq!(s.samples[0].gamma, 0.0);
        let one = gamma_p(&spec, &PulseTrainSpec::new(0.2, 1).unwrap()).unwrap();
        assert_eq!(s.samples[1].gamma, one);
        assert!((s.samples[1].t - 0.4).abs() < 1e-15);
        assert!(stroboscopic_series(&spec, 0.2, 0).is_err());
    }

    #[test]
    fn echo_gain_cases() {
        let spec = BathSpec::discrete(vec![mode(1.0, 0.3)], 0.2).unwrap();
        // one cycle, small theta: gain = Gamma_0(2dt) (1 - tan^2(theta/2)) > 0
        let dt = 0.05;
        let gain = echo_gain(&spec, 2.0 * dt, dt).unwrap();
        let g0 = gamma0(&spec, 2.0 * dt).unwrap();
        let expected = g0 * (1.0 - (0.5 * dt).tan().powi(2));
        assert!(gain > 0.0 && (gain - expected).abs() < 1e-15);
        // resonant pulsing makes things worse
        let dt = PI;
        let gain = echo_gain(&spec, 2.0 * dt * 3.0, dt).unwrap();
        assert!(gain < 0.0);
        assert!(echo_gain(&spec, 1.0, 0.3).is_err());
    }

    #[test]
    fn pole_frequencies_listing() {
        let p = pole_frequencies(1.0, 12.0);
        assert_eq!(p.len(), 2);
        assert!((p[0] - PI).abs() < 1e-15 && (p[1] - 3.0 * PI).abs() < 1e-14);
        assert!(pole_frequencies(1.0, 3.0).is_empty());
    }

    #[test]
    fn continuum_pulsed_matches_dense_grid() {
        // Large delta_t puts several pole peaks inside the band.
        let spec = BathSpec::ohmic(0.25, 1.0, 0.5).unwrap();
        let train = PulseTrainSpec::new(1.5, 3).unwrap();
        let q = gamma_p_continuum(&spec, &train).unwrap();
        let ohmic = *spec.continuum().unwrap();
        let hi = upper_cutoff(&spec, TAIL_EPS).unwrap();
        let n = 2_000_000;
        let h = hi / n as f64;
        let f = |w: f64| pulsed_integrand(&ohmic, 0.5, &train, w);
        let mut s = 0.5 * f(hi);
        for i in 1..n {
            s += f(i as f64 * h);
        }
        let oracle = s * h;
        assert!(((q - oracle) / oracle).abs() < 1e-5, "{q} vs {oracle}");
    }

    #[test]
    fn continuum_large_spacing_does_not_echo() {
        let spec = BathSpec::ohmic(0.25, 100.0, 1e4).unwrap();
        let tau_c = spec.correlation_time().unwrap();
        let dt = 20.0 * tau_c;
        let gp = gamma_p(&spec, &PulseTrainSpec::new(dt, 1).unwrap()).unwrap();
        let g0 = gamma0(&spec, 2.0 * dt).unwrap();
        assert!(gp > 0.5 * g0, "{gp} vs {g0}");
    }

    #[test]
    fn continuum_halving_spacing_quarters_gamma() {
        let spec = BathSpec::ohmic(0.25, 100.0, 1e4).unwrap();
        let t = 0.2;
        let a = gamma_p(&spec, &PulseTrainSpec::new(1e-4, cycles_for(t, 1e-4).unwrap()).unwrap()).unwrap();
        let b = gamma_p(&spec, &PulseTrainSpec::new(5e-5, cycles_for(t, 5e-5).unwrap()).unwrap()).unwrap();
        assert!((a / b - 4.0).abs() < 0.05, "{}", a / b);
    }

    #[test]
    fn train_validation() {
        assert!(PulseTrainSpec::new(0.0, 1).is_err());
        assert!(PulseTrainSpec::new(-1.0, 1).is_err());
        assert!(PulseTrainSpec::new(1.0, 0).is_err());
        let t = PulseTrainSpec::new(0.25, 4).unwrap();
        assert_eq!(t.total_time(), 2.0);
        assert_eq!(t.cycle().to_string(), "d:1, p:x, d:1, p:x");
    }

    proptest! {
        #[test]
        fn filter_symmetries(theta in -50.0f64..50.0, n in 1u32..20) {
            let f = filter_factor(theta, n);
            prop_assert!(f >= 0.0);
            let scale = f.max(1e-12);
            prop_assert!((filter_factor(-theta, n) - f).abs() <= 1e-9 * scale);
            prop_assert!((filter_factor(theta + 2.0 * PI, n) - f).abs() <= 1e-7 * scale);
        }
    }
}
