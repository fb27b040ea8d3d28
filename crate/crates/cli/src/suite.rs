//! Analytic-versus-exact comparison cases for discrete baths.

use bangbang_core::bath::Mode;
use bangbang_core::control::{gamma_p_discrete, PulseTrainSpec};
use bangbang_core::decay::gamma0_discrete;
use bangbang_core::exact::{minimal_cutoff, Coupling, ExactEngine, ExactModel};
use bangbang_core::Complex64;

use crate::error::{CliError, CliResult};

pub const DEFAULT_OMEGA0: f64 = 1.3;
pub const DEFAULT_MARGIN: usize = 6;
pub const DEFAULT_TOL: f64 = 1e-4;
/// Extra Fock levels per mode used for the convergence evidence.
pub const CONVERGENCE_STEP: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleCase {
    pub name: String,
    pub modes: Vec<Mode>,
    pub temperature: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseSettings {
    pub omega0: f64,
    /// Fock levels added above the thermal minimum; ignored when `n_max` is set.
    pub margin: usize,
    pub n_max: Option<usize>,
    pub coupling: Coupling,
    pub times: Vec<f64>,
    /// Pulse separations for pi_x trains; empty skips the pulsed comparison.
    pub delta_ts: Vec<f64>,
    pub cycles: u32,
    pub check_convergence: bool,
}

impl CaseSettings {
    /// Ten free-decay times `0.6 i` and pi_x trains with `N = 1..5` at
    /// `delta_t in {0.1, 0.3, 1.0} / omega_max`.
    pub fn standard(case: &OracleCase) -> Self {
        let w_max = case.modes.iter().map(Mode::omega).fold(0.0, f64::max);
        Self {
            omega0: DEFAULT_OMEGA0,
            margin: DEFAULT_MARGIN,
            n_max: None,
            coupling: Coupling::Dephasing,
            times: (1..=10).map(|i| 0.6 * i as f64).collect(),
            delta_ts: [0.1, 0.3, 1.0].iter().map(|r| r / w_max).collect(),
            cycles: 5,
            check_convergence: true,
        }
    }
}

/// One and two modes at `T in {0, omega/2, 2 omega}` of the lowest mode.
pub fn standard_cases() -> Vec<OracleCase> {
    let one = vec![Mode::real(1.0, 0.25).expect("valid mode")];
    let two = vec![
        Mode::real(1.0, 0.2).expect("valid mode"),
        Mode::new(1.6, Complex64::from_polar(0.15, 0.7)).expect("valid mode"),
    ];
    let mut out = Vec::new();
    for (label, modes) in [("1 mode", one), ("2 modes", two)] {
        for t in [0.0, 0.5, 2.0] {
            out.push(OracleCase {
                name: format!("{label}, T={t}"),
                modes: modes.clone(),
                temperature: t,
            });
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Probe {
    Free { t: f64 },
    Pulsed { delta_t: f64, n: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    pub probe: Probe,
    pub analytic: f64,
    pub exact: f64,
}

impl Comparison {
    pub fn difference(&self) -> f64 {
        (self.analytic - self.exact).abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseReport {
    pub name: String,
    pub truncation: Vec<usize>,
    pub dim: usize,
    /// Largest free-decay change when every cutoff grows by
    /// [`CONVERGENCE_STEP`].
    pub convergence: Option<f64>,
    pub comparisons: Vec<Comparison>,
}

impl CaseReport {
    pub fn max_difference(&self) -> f64 {
        self.comparisons
            .iter()
            .map(Comparison::difference)
            .fold(0.0, f64::max)
    }

    pub fn passed(&self, tol: f64) -> bool {
        self.comparisons.iter().all(|c| c.difference() < tol)
    }
}

/// Thermal minimum plus `margin` levels for each mode.
pub fn truncation_for(modes: &[Mode], temperature: f64, margin: usize) -> CliResult<Vec<usize>> {
    modes
        .iter()
        .map(|m| Ok(minimal_cutoff(m.omega(), temperature)? + margin))
        .collect()
}

pub fn run_case(case: &OracleCase, settings: &CaseSettings) -> CliResult<CaseReport> {
    if case.modes.is_empty() {
        return Err(CliError::Config(format!("case '{}' has no modes", case.name)));
    }
    if settings.delta_ts.is_empty() && settings.times.is_empty() {
        return Err(CliError::Config("nothing to compare: no times and no delta_t".into()));
    }
    let truncation = match settings.n_max {
        Some(n) => vec![n; case.modes.len()],
        None => truncation_for(&case.modes, case.temperature, settings.margin)?,
    };
    let model = ExactModel::with_truncation(
        settings.omega0,
        case.modes.clone(),
        truncation.clone(),
        case.temperature,
        settings.coupling.clone(),
    )?;
    let dim = model.dim();
    let engine = ExactEngine::new(model.clone())?;

    let mut comparisons = Vec::new();
    let free = engine.gamma_free(&settings.times)?;
    for (&t, exact) in settings.times.iter().zip(&free) {
        comparisons.push(Comparison {
            probe: Probe::Free { t },
            analytic: gamma0_discrete(&case.modes, case.temperature, t)?,
            exact: *exact,
        });
    }
    for &dt in &settings.delta_ts {
        let train = PulseTrainSpec::new(dt, settings.cycles)?;
        let exact = engine.gamma_train(&train)?;
        for (n, g) in (1..=settings.cycles).zip(exact) {
            let analytic =
                gamma_p_discrete(&case.modes, case.temperature, &PulseTrainSpec::new(dt, n)?)?;
            comparisons.push(Comparison {
                probe: Probe::Pulsed { delta_t: dt, n },
                analytic,
                exact: g,
            });
        }
    }

    let convergence = if settings.check_convergence && !settings.times.is_empty() {
        let bigger = model.retruncated(truncation.iter().map(|n| n + CONVERGENCE_STEP).collect())?;
        let refined = ExactEngine::new(bigger)?.gamma_free(&settings.times)?;
        Some(
            free.iter()
                .zip(&refined)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
        )
    } else {
        None
    };

    Ok(CaseReport {
        name: case.name.clone(),
        truncation,
        dim,
        convergence,
        comparisons,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_suite_shape() {
        let cases = standard_cases();
        assert_eq!(cases.len(), 6);
        let s = CaseSettings::standard(&cases[3]);
        assert_eq!(s.times.len(), 10);
        assert!((s.delta_ts[0] - 0.1 / 1.6).abs() < 1e-15);
    }

    #[test]
    fn small_case_agrees() {
        let case = OracleCase {
            name: "weak".into(),
            modes: vec![Mode::real(1.0, 0.1).unwrap()],
            temperature: 0.0,
        };
        let mut s = CaseSettings::standard(&case);
        s.times.truncate(3);
        s.delta_ts.truncate(1);
        s.cycles = 2;
        let r = run_case(&case, &s).unwrap();
        assert_eq!(r.comparisons.len(), 5);
        assert!(r.passed(1e-6), "{}", r.max_difference());
        assert!(r.convergence.unwrap() < 1e-8);
    }

    #[test]
    fn empty_case_rejected() {
        let case = OracleCase {
            name: "empty".into(),
            modes: vec![],
            temperature: 0.0,
        };
        let s = CaseSettings::standard(&standard_cases()[0]);
        assert!(matches!(run_case(&case, &s), Err(CliError::Config(_))));
    }
}
