//! Globally adaptive Gauss-Kronrod (7/15) quadrature on finite intervals.
//!
//! The error estimate and its rescaling follow QUADPACK's `qk15`. Intervals
//! are kept in a max-heap on their error estimate and the worst one is bisected
//! until the summed estimate meets `max(tol * |value|, tol_abs)`, where
//! `tol_abs = 1e-14 * (b - a) * max |f|` over every sampled point.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::bath::BathSpec;
use crate::{Error, Result};

/// Hard cap on integrand evaluations per call.
pub const MAX_EVALUATIONS: usize = 1_000_000;

/// Relative tolerance used by the decoherence integrals when none is given.
pub const DEFAULT_TOL: f64 = 1e-9;

const ABS_TOL_FACTOR: f64 = 1e-14;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

struct Sampler<F> {
    f: F,
    evaluations: usize,
    max_abs: f64,
}

impl<F: Fn(f64) -> f64> Sampler<F> {
    fn eval(&mut self, x: f64) -> Result<f64> {
        let y = (self.f)(x);
        self.evaluations += 1;
        if !y.is_finite() {
            return Err(Error::NonFinite { at: x, value: y });
        }
        self.max_abs = self.max_abs.max(y.abs());
        Ok(y)
    }

    fn kronrod(&mut self, a: f64, b: f64) -> Result<Segment> {
        let centre = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let fc = self.eval(centre)?;
        let mut res_k = fc * WGK[7];
        let mut res_g = fc * WG[3];
        let mut res_abs = res_k.abs();
        let mut fv1 = [0.0; 7];
        let mut fv2 = [0.0; 7];
        for j in 0..7 {
            let dx = half * XGK[j];
            let f1 = self.eval(centre - dx)?;
            let f2 = self.eval(centre + dx)?;
            fv1[j] = f1;
            fv2[j] = f2;
            res_k += WGK[j] * (f1 + f2);
            res_abs += WGK[j] * (f1.abs() + f2.abs());
            if j % 2 == 1 {
                res_g += WG[j / 2] * (f1 + f2);
            }
        }
        let mean = 0.5 * res_k;
        let mut res_asc = WGK[7] * (fc - mean).abs();
        for j in 0..7 {
            res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
        }
        let res_abs = res_abs * half.abs();
        let res_asc = res_asc * half.abs();
        let mut err = ((res_k - res_g) * half).abs();
        if res_asc != 0.0 && err != 0.0 {
            err = res_asc * (1.0f64).min((200.0 * err / res_asc).powf(1.5));
        }
        if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
            err = err.max(50.0 * f64::EPSILON * res_abs);
        }
        Ok(Segment {
            a,
            b,
            value: res_k * half,
            error: err,
        })
    }
}

fn check_tolerance(tol: f64) -> Result<()> {
    if tol > 0.0 && tol <= 1e-2 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "relative tolerance must lie in (0, 1e-2], got {tol}"
        )))
    }
}

/// Adaptive integral of `f` over `[a, b]` to relative tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadResult> {
    check_tolerance(tol)?;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::invalid(format!(
            "integration bounds must be finite with a < b, got [{a}, {b}]"
        )));
    }
    let mut sampler = Sampler {
        f: &f,
        evaluations: 0,
        max_abs: 0.0,
    };
    integrate_segment(&mut sampler, a, b, tol, MAX_EVALUATIONS)
}

fn integrate_segment<F: Fn(f64) -> f64>(
    sampler: &mut Sampler<F>,
    a: f64,
    b: f64,
    tol: f64,
    budget: usize,
) -> Result<QuadResult> {
    let start = sampler.evaluations;
    sampler.max_abs = 0.0;
    let first = sampler.kronrod(a, b)?;
    let mut heap = BinaryHeap::new();
    // Segments too narrow to bisect further in floating point.
    let mut frozen: Vec<Segment> = Vec::new();
    let mut value = first.value;
    let mut error = first.error;
    heap.push(first);

    loop {
        let target = (tol * value.abs()).max(ABS_TOL_FACTOR * (b - a) * sampler.max_abs);
        if error <= target {
            break;
        }
        let used = sampler.evaluations - start;
        let Some(worst) = heap.pop() else {
            return Err(Error::NonConvergence {
                evaluations: used,
                error_estimate: error,
                target,
            });
        };
        if used + 30 > budget {
            return Err(Error::NonConvergence {
                evaluations: used,
                error_estimate: error,
                target,
            });
        }
        let mid = 0.5 * (worst.a + worst.b);
        if !(worst.a < mid && mid < worst.b) {
            frozen.push(worst);
            continue;
        }
        let left = sampler.kronrod(worst.a, mid)?;
        let right = sampler.kronrod(mid, worst.b)?;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum from scratch so that running-update rounding does not leak.
    let all = heap.iter().chain(frozen.iter());
    let (value, error) = all.fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
    Ok(QuadResult {
        value,
        error_estimate: error,
        evaluations: sampler.evaluations - start,
    })
}

/// Integrates each piece between consecutive breakpoints independently and
/// sums the values and error estimates.
pub fn integrate_with_breakpoints<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    tol: f64,
) -> Result<QuadResult> {
    check_tolerance(tol)?;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::invalid(format!(
            "integration bounds must be finite with a < b, got [{a}, {b}]"
        )));
    }
    if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::invalid("breakpoints must be strictly increasing"));
    }
    if breakpoints.iter().any(|&p| !(p > a && p < b)) {
        return Err(Error::invalid("breakpoints must lie strictly inside (a, b)"));
    }
    let mut sampler = Sampler {
        f: &f,
        evaluations: 0,
        max_abs: 0.0,
    };
    let mut edges = Vec::with_capacity(breakpoints.len() + 2);
    edges.push(a);
    edges.extend_from_slice(breakpoints);
    edges.push(b);
    let mut total = QuadResult {
        value: 0.0,
        error_estimate: 0.0,
        evaluations: 0,
    };
    for w in edges.windows(2) {
        let budget = MAX_EVALUATIONS.saturating_sub(sampler.evaluations);
        let piece = integrate_segment(&mut sampler, w[0], w[1], tol, budget)?;
        total.value += piece.value;
        total.error_estimate += piece.error_estimate;
    }
    total.evaluations = sampler.evaluations;
    Ok(total)
}

/// Upper frequency beyond which the Ohmic decoherence integrand is negligible
/// relative to `eps`: `omega_c * max(35, L + 2 ln L + 10)` with `L = ln(1/eps)`.
pub fn upper_cutoff(spec: &BathSpec, eps: f64) -> Result<f64> {
    let ohmic = spec.continuum()?;
    if !(eps > 0.0 && eps <= 1e-3) {
        return Err(Error::invalid(format!(
            "tail tolerance must lie in (0, 1e-3], got {eps}"
        )));
    }
    let l = (1.0 / eps).ln();
    let multiple = (l + 2.0 * l.ln() + 10.0).max(35.0);
    Ok(ohmic.omega_c() * multiple)
}
