//! Single-qubit Pauli group algebra for toggling-frame bookkeeping.
//!
//! Sequences of ideal pi-pulses are represented by the Pauli letters `X`, `Y`
//! and `Z` (a pi rotation about an axis equals its letter up to a global
//! phase). Interval lengths are exact rational multiples of a base spacing,
//! so the zeroth-order average of a coupling `sigma_alpha` is computed with
//! rational arithmetic and the decoupling verdict has no tolerance.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{Signed, Zero};

use crate::{Error, Result};

/// Power of `i`: the phase `i^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn all() -> [Phase; 4] {
        [Phase::ONE, Phase::I, Phase::MINUS_ONE, Phase::MINUS_I]
    }

    pub fn power(self) -> u8 {
        self.0
    }

    pub fn inverse(self) -> Phase {
        Phase((4 - self.0) % 4)
    }

    /// `(re, im)` of `i^k`.
    pub fn value(self) -> (i32, i32) {
        match self.0 {
            0 => (1, 0),
            1 => (0, 1),
            2 => (-1, 0),
            _ => (0, -1),
        }
    }

    fn times(self, other: Phase) -> Phase {
        Phase((self.0 + other.0) % 4)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.0 {
            0 => "+1",
            1 => "+i",
            2 => "-1",
            _ => "-i",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::I, Letter::X, Letter::Y, Letter::Z];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Letter::I => "I",
            Letter::X => "X",
            Letter::Y => "Y",
            Letter::Z => "Z",
        })
    }
}

/// Element `i^k * sigma` of the 16-element single-qubit Pauli group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliOp {
    pub phase: Phase,
    pub letter: Letter,
}

impl PauliOp {
    pub const IDENTITY: PauliOp = PauliOp::letter(Letter::I);

    pub const fn new(phase: Phase, letter: Letter) -> Self {
        Self { phase, letter }
    }

    pub const fn letter(letter: Letter) -> Self {
        Self {
            phase: Phase::ONE,
            letter,
        }
    }

    /// All sixteen group elements.
    pub fn group() -> impl Iterator<Item = PauliOp> {
        Phase::all()
            .into_iter()
            .flat_map(|p| Letter::ALL.into_iter().map(move |l| PauliOp::new(p, l)))
    }

    pub fn multiply(self, rhs: PauliOp) -> PauliOp {
        let (extra, letter) = letter_product(self.letter, rhs.letter);
        PauliOp::new(self.phase.times(rhs.phase).times(extra), letter)
    }

    pub fn inverse(self) -> PauliOp {
        // letters square to the identity
        PauliOp::new(self.phase.inverse(), self.letter)
    }

    /// `frame^-1 * self * frame`.
    pub fn conjugated_by(self, frame: PauliOp) -> PauliOp {
        frame.inverse().multiply(self).multiply(frame)
    }

    /// 2x2 matrix as `[[(re, im); 2]; 2]` with integer entries.
    pub fn matrix(self) -> [[(i32, i32); 2]; 2] {
        let base: [[(i32, i32); 2]; 2] = match self.letter {
            Letter::I => [[(1, 0), (0, 0)], [(0, 0), (1, 0)]],
            Letter::X => [[(0, 0), (1, 0)], [(1, 0), (0, 0)]],
            Letter::Y => [[(0, 0), (0, -1)], [(0, 1), (0, 0)]],
            Letter::Z => [[(1, 0), (0, 0)], [(0, 0), (-1, 0)]],
        };
        let (pr, pi) = self.phase.value();
        base.map(|row| row.map(|(r, i)| (pr * r - pi * i, pr * i + pi * r)))
    }
}

impl Mul for PauliOp {
    type Output = PauliOp;

    fn mul(self, rhs: PauliOp) -> PauliOp {
        self.multiply(rhs)
    }
}

impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.phase, self.letter)
    }
}

/// `a * b = i^k * c` for letters.
fn letter_product(a: Letter, b: Letter) -> (Phase, Letter) {
    use Letter::*;
    match (a, b) {
        (I, l) | (l, I) => (Phase::ONE, l),
        (X, X) | (Y, Y) | (Z, Z) => (Phase::ONE, I),
        (X, Y) => (Phase::I, Z),
        (Y, X) => (Phase::MINUS_I, Z),
        (Y, Z) => (Phase::I, X),
        (Z, Y) => (Phase::MINUS_I, X),
        (Z, X) => (Phase::I, Y),
        (X, Z) => (Phase::MINUS_I, Y),
    }
}

pub fn multiply(a: PauliOp, b: PauliOp) -> PauliOp {
    a.multiply(b)
}

/// `frame^-1 * sigma * frame` for a phaseless letter `sigma`.
pub fn conjugate_frame(frame: PauliOp, sigma: Letter) -> PauliOp {
    PauliOp::letter(sigma).conjugated_by(frame)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn letter(self) -> Letter {
        match self {
            Axis::X => Letter::X,
            Axis::Y => Letter::Y,
            Axis::Z => Letter::Z,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Axis::X => 'x',
            Axis::Y => 'y',
            Axis::Z => 'z',
        }
    }

    pub fn from_char(c: char) -> Option<Axis> {
        match c.to_ascii_lowercase() {
            'x' => Some(Axis::X),
            'y' => Some(Axis::Y),
            'z' => Some(Axis::Z),
            _ => None,
        }
    }

    /// Parses an axis set such as `"xyz"`, `"z"` or `"x,y"`.
    pub fn parse_set(text: &str) -> Result<Vec<Axis>> {
        let mut out = Vec::new();
        for (i, c) in text.chars().enumerate() {
            if c == ',' || c.is_whitespace() {
                continue;
            }
            let axis = Axis::from_char(c).ok_or_else(|| Error::Parse {
                index: i,
                message: format!("unknown axis '{c}'"),
            })?;
            if !out.contains(&axis) {
                out.push(axis);
            }
        }
        if out.is_empty() {
            return Err(Error::Parse {
                index: 0,
                message: "empty axis set".into(),
            });
        }
        out.sort();
        Ok(out)
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// One token of a pulse sequence: free evolution for a rational multiple of
/// the base spacing, or an instantaneous pi-pulse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Step {
    Delay(Rational64),
    Pulse(Axis),
}

impl Step {
    pub fn delay(numer: i64, denom: i64) -> Step {
        Step::Delay(Rational64::new(numer, denom))
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Delay(r) => write!(f, "d:{r}"),
            Step::Pulse(a) => write!(f, "p:{a}"),
        }
    }
}

/// An ordered pulse sequence together with the physical length of one unit
/// of delay.
///
/// Text form: comma-separated `d:<rational>` and `p:<axis>` tokens, e.g.
/// `d:1/2, p:x, d:1, p:x, d:1/2`. [`fmt::Display`] prints that canonical form.
#[derive(Debug, Clone, PartialEq)]
pub struct GateSequence {
    steps: Vec<Step>,
    base: f64,
}

impl GateSequence {
    pub fn new(steps: Vec<Step>, base: f64) -> Result<Self> {
        if !(base.is_finite() && base > 0.0) {
            return Err(Error::invalid(format!("base spacing must be > 0, got {base}")));
        }
        let mut pulses = 0;
        let mut positive = false;
        for s in &steps {
            match s {
                Step::Pulse(_) => pulses += 1,
                Step::Delay(d) if d.is_negative() => {
                    return Err(Error::invalid(format!("negative duration {d}")))
                }
                Step::Delay(d) => positive |= !d.is_zero(),
            }
        }
        if pulses == 0 {
            return Err(Error::invalid("a sequence needs at least one pulse"));
        }
        if !positive {
            return Err(Error::invalid("a sequence needs a strictly positive duration"));
        }
        Ok(Self { steps, base })
    }

    /// Parses the text form with a base spacing of 1.
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with_base(text, 1.0)
    }

    pub fn parse_with_base(text: &str, base: f64) -> Result<Self> {
        let steps = text
            .split(',')
            .enumerate()
            .map(|(i, tok)| parse_step(i, tok.trim()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(steps, base)
    }

    pub fn with_base(mut self, base: f64) -> Result<Self> {
        if !(base.is_finite() && base > 0.0) {
            return Err(Error::invalid(format!("base spacing must be > 0, got {base}")));
        }
        self.base = base;
        Ok(self)
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn base(&self) -> f64 {
        self.base
    }

    pub fn pulses(&self) -> Vec<Axis> {
        self.steps
            .iter()
            .filter_map(|s| match s {
                Step::Pulse(a) => Some(*a),
                Step::Delay(_) => None,
            })
            .collect()
    }

    pub fn n_pulses(&self) -> usize {
        self.pulses().len()
    }

    /// Free-evolution lengths `dt_0 .. dt_{n_P}` between consecutive pulses
    /// (adjacent delays merged, missing ones zero), in base units.
    pub fn intervals(&self) -> Vec<Rational64> {
        let mut out = vec![Rational64::zero()];
        for s in &self.steps {
            match s {
                Step::Delay(d) => *out.last_mut().unwrap() += *d,
                Step::Pulse(_) => out.push(Rational64::zero()),
            }
        }
        out
    }

    /// `T_c` in base units.
    pub fn cycle_units(&self) -> Rational64 {
        self.intervals().into_iter().sum()
    }

    /// `T_c` in physical time.
    pub fn cycle_time(&self) -> f64 {
        rational_to_f64(self.cycle_units()) * self.base
    }

    /// Quarter-spaced Carr-Purcell cycle `dt/2, X, dt, X, dt/2` with `T_c = 2 dt`.
    pub fn carr_purcell(delta_t: f64) -> Result<Self> {
        Self::symmetric_pair(Axis::X, delta_t)
    }

    /// The Carr-Purcell pattern with z-axis pulses.
    pub fn z_train(delta_t: f64) -> Result<Self> {
        Self::symmetric_pair(Axis::Z, delta_t)
    }

    /// `dt, X, dt, Z, dt, X, dt, Z`: the toggling frames run through all four
    /// Pauli letters, so every `sigma_alpha` averages to zero.
    pub fn xzxz(delta_t: f64) -> Result<Self> {
        let d = Step::delay(1, 1);
        Self::new(
            vec![
                d,
                Step::Pulse(Axis::X),
                d,
                Step::Pulse(Axis::Z),
                d,
                Step::Pulse(Axis::X),
                d,
                Step::Pulse(Axis::Z),
            ],
            delta_t,
        )
    }

    fn symmetric_pair(axis: Axis, delta_t: f64) -> Result<Self> {
        Self::new(
            vec![
                Step::delay(1, 2),
                Step::Pulse(axis),
                Step::delay(1, 1),
                Step::Pulse(axis),
                Step::delay(1, 2),
            ],
            delta_t,
        )
    }
}

impl fmt::Display for GateSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for GateSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

fn parse_step(index: usize, tok: &str) -> Result<Step> {
    let err = |message: String| Error::Parse { index, message };
    let (kind, arg) = tok
        .split_once(':')
        .ok_or_else(|| err(format!("expected 'd:<rational>' or 'p:<axis>', got '{tok}'")))?;
    match kind.trim() {
        "d" => parse_rational(arg.trim()).map(Step::Delay).map_err(err),
        "p" => {
            let arg = arg.trim();
            let mut chars = arg.chars();
            match (chars.next().and_then(Axis::from_char), chars.next()) {
                (Some(a), None) => Ok(Step::Pulse(a)),
                _ => Err(err(format!("unknown pulse axis '{arg}'"))),
            }
        }
        other => Err(err(format!("unknown step kind '{other}'"))),
    }
}

fn parse_rational(s: &str) -> std::result::Result<Rational64, String> {
    let parse_int = |t: &str| {
        let t = t.trim();
        if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
            Err(format!("invalid duration '{s}'"))
        } else {
            t.parse::<i64>().map_err(|e| format!("invalid duration '{s}': {e}"))
        }
    };
    match s.split_once('/') {
        None => Ok(Rational64::from_integer(parse_int(s)?)),
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d == 0 {
                return Err(format!("zero denominator in '{s}'"));
            }
            Ok(Rational64::new(parse_int(n)?, d))
        }
    }
}

fn rational_to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `P_0 = I` and `P_k = pulse_k * P_{k-1}`; the last entry is the full-cycle
/// product.
pub fn cumulative_frames(seq: &GateSequence) -> Vec<PauliOp> {
    let mut frames = vec![PauliOp::IDENTITY];
    for axis in seq.pulses() {
        let prev = *frames.last().unwrap();
        frames.push(PauliOp::letter(axis.letter()) * prev);
    }
    frames
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cyclicity {
    pub cyclic: bool,
    /// Product of all pulses; its phase is informational when cyclic.
    pub residual: PauliOp,
}

pub fn is_cyclic(seq: &GateSequence) -> Cyclicity {
    let residual = *cumulative_frames(seq).last().unwrap();
    Cyclicity {
        cyclic: residual.letter == Letter::I,
        residual,
    }
}

/// Real coefficients of an operator over `{I, X, Y, Z}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PauliCoefficients(pub [Rational64; 4]);

impl PauliCoefficients {
    pub fn get(&self, letter: Letter) -> Rational64 {
        self.0[letter.index()]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn to_f64(&self) -> [f64; 4] {
        self.0.map(rational_to_f64)
    }

    /// Non-zero entries as `(letter, coefficient)`.
    pub fn nonzero(&self) -> Vec<(Letter, Rational64)> {
        Letter::ALL
            .into_iter()
            .map(|l| (l, self.get(l)))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }
}

impl fmt::Display for PauliCoefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.nonzero();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (l, c)) in terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c}){l}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AxisAverage {
    pub axis: Axis,
    pub coefficients: PauliCoefficients,
}

impl AxisAverage {
    pub fn decoupled(&self) -> bool {
        self.coefficients.is_zero()
    }
}

/// System-side factors of the zeroth-order average Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct AverageReport {
    pub cyclicity: Cyclicity,
    /// `T_c` in base units.
    pub cycle_units: Rational64,
    /// `(1/T_c) sum_k dt_k P_k^-1 sigma_alpha P_k` for each requested axis.
    pub couplings: Vec<AxisAverage>,
    /// The same average of `sigma_z`, i.e. the transformed `H_S ~ sigma_z`.
    pub system: PauliCoefficients,
}

impl AverageReport {
    pub fn all_decoupled(&self) -> bool {
        self.couplings.iter().all(AxisAverage::decoupled)
    }

    pub fn axis(&self, axis: Axis) -> Option<&AxisAverage> {
        self.couplings.iter().find(|a| a.axis == axis)
    }
}

fn average_of(frames: &[PauliOp], intervals: &[Rational64], total: Rational64, sigma: Letter) -> PauliCoefficients {
    let mut acc = [Rational64::zero(); 4];
    for (frame, dt) in frames.iter().zip(intervals) {
        let c = conjugate_frame(*frame, sigma);
        let sign = match c.phase {
            Phase::ONE => 1,
            Phase::MINUS_ONE => -1,
            _ => unreachable!("conjugating a Hermitian letter keeps a real phase"),
        };
        acc[c.letter.index()] += *dt * Rational64::from_integer(sign);
    }
    PauliCoefficients(acc.map(|c| c / total))
}

/// Zeroth-order toggling-frame average of each requested coupling axis. A
/// non-cyclic sequence is reported through [`AverageReport::cyclicity`].
pub fn zeroth_average(seq: &GateSequence, axes: &[Axis]) -> Result<AverageReport> {
    let total = seq.cycle_units();
    if total.is_zero() {
        return Err(Error::invalid("sequence has zero total duration"));
    }
    let frames = cumulative_frames(seq);
    let intervals = seq.intervals();
    let couplings = axes
        .iter()
        .map(|&axis| AxisAverage {
            axis,
            coefficients: average_of(&frames, &intervals, total, axis.letter()),
        })
        .collect();
    Ok(AverageReport {
        cyclicity: is_cyclic(seq),
        cycle_units: total,
        couplings,
        system: average_of(&frames, &intervals, total, Letter::Z),
    })
}
