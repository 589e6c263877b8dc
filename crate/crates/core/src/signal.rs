//! Piecewise-constant Boolean signals over a discrete time line.
//!
//! A [`Signal`] is a total function from time to bits. It is stored as the
//! value it holds on `(-inf, t0)` plus the strictly increasing list of instants
//! at which it switches. Every interval is closed on the left and open on the
//! right, so `eval(t)` sees a switch at `t` while `left_limit(t)` does not.
//!
//! Time is an integer tick count. One tick spans `[k, k + 1)`, and a signal is
//! constant on every tick, so the left limit at `t > 0` is simply the value at
//! `t - 1`.

use std::fmt;
use std::ops::{Add, Sub};

use thiserror::Error;

/// A value of the two-element Boolean algebra.
pub type Bit = bool;

/// A non-negative instant on the tick grid.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Time(pub u64);

impl Time {
    pub const ZERO: Time = Time(0);

    pub fn ticks(self) -> u64 {
        self.0
    }
}

impl From<u64> for Time {
    fn from(ticks: u64) -> Self {
        Time(ticks)
    }
}

impl Add for Time {
    type Output = Time;

    fn add(self, rhs: Time) -> Time {
        Time(self.0.saturating_add(rhs.0))
    }
}

impl Sub for Time {
    type Output = Time;

    /// Saturates at zero.
    fn sub(self, rhs: Time) -> Time {
        Time(self.0.saturating_sub(rhs.0))
    }
}

impl fmt::Display for Time {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A point at which equations are evaluated: either the constant pre-history
/// `(-inf, t0)` of every signal involved, or a tick.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Instant {
    Before,
    At(Time),
}

impl Instant {
    /// The pre-history followed by every tick in `[0, horizon]`. Tick
    /// `horizon` stands for the constant tail.
    pub fn sweep(horizon: Time) -> impl Iterator<Item = Instant> {
        std::iter::once(Instant::Before).chain((0..=horizon.0).map(|t| Instant::At(Time(t))))
    }
}

impl fmt::Display for Instant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instant::Before => f.write_str("t<0"),
            Instant::At(t) => write!(f, "t={t}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignalError {
    #[error("toggles not increasing at index {index}")]
    NotIncreasing { index: usize },
    #[error("toggle at index {index} ({at}) is not below the horizon {horizon}")]
    BeyondHorizon { index: usize, at: Time, horizon: Time },
    #[error("horizon mismatch: {left} vs {right}")]
    HorizonMismatch { left: Time, right: Time },
    #[error("cannot shrink horizon from {from} to {to}")]
    ShrinkHorizon { from: Time, to: Time },
}

/// Strictly increasing set of switch instants.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct EdgeSet(Vec<Time>);

impl EdgeSet {
    pub fn new(times: Vec<Time>) -> Self {
        debug_assert!(times.windows(2).all(|w| w[0] < w[1]));
        EdgeSet(times)
    }

    pub fn times(&self) -> &[Time] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn min(&self) -> Option<Time> {
        self.0.first().copied()
    }

    pub fn contains(&self, t: Time) -> bool {
        self.0.binary_search(&t).is_ok()
    }

    /// The members strictly greater than `t`.
    pub fn after(&self, t: Time) -> EdgeSet {
        let start = self.0.partition_point(|&x| x <= t);
        EdgeSet(self.0[start..].to_vec())
    }

    pub fn is_subset_of(&self, other: &EdgeSet) -> bool {
        self.0.iter().all(|&t| other.contains(t))
    }
}

/// A Boolean signal with a finite description on `[0, horizon)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signal {
    initial: Bit,
    toggles: Vec<Time>,
    horizon: Time,
}

impl Signal {
    /// Builds the signal equal to `initial` before the first toggle and
    /// flipping at each listed instant.
    pub fn from_intervals(initial: Bit, toggles: Vec<Time>, horizon: Time) -> Result<Signal, SignalError> {
        for (index, pair) in toggles.windows(2).enumerate() {
            if pair[0] >= pair[1] {
                return Err(SignalError::NotIncreasing { index: index + 1 });
            }
        }
        if let Some((index, &at)) = toggles.iter().enumerate().find(|(_, &t)| t >= horizon) {
            return Err(SignalError::BeyondHorizon { index, at, horizon });
        }
        Ok(Signal { initial, toggles, horizon })
    }

    /// Convenience wrapper over [`Signal::from_intervals`] taking raw ticks.
    pub fn from_ticks(initial: Bit, toggles: &[u64], horizon: u64) -> Result<Signal, SignalError> {
        Signal::from_intervals(initial, toggles.iter().copied().map(Time).collect(), Time(horizon))
    }

    pub fn constant(value: Bit, horizon: Time) -> Signal {
        Signal { initial: value, toggles: Vec::new(), horizon }
    }

    /// The characteristic function of `[start, end)`, clipped to the horizon.
    /// Pass `end >= horizon` for a set that is unbounded on the right.
    pub fn indicator(start: Time, end: Time, horizon: Time) -> Signal {
        let mut toggles = Vec::with_capacity(2);
        if start < end && start < horizon {
            toggles.push(start);
            if end < horizon {
                toggles.push(end);
            }
        }
        Signal { initial: false, toggles, horizon }
    }

    /// Rebuilds a signal from its value on every tick of `[0, samples.len())`.
    pub fn from_samples(initial: Bit, samples: &[Bit]) -> Signal {
        let mut toggles = Vec::new();
        let mut current = initial;
        for (t, &value) in samples.iter().enumerate() {
            if value != current {
                toggles.push(Time(t as u64));
                current = value;
            }
        }
        Signal { initial, toggles, horizon: Time(samples.len() as u64) }
    }

    /// Value on `(-inf, t0)`.
    pub fn initial(&self) -> Bit {
        self.initial
    }

    pub fn toggles(&self) -> &[Time] {
        &self.toggles
    }

    pub fn horizon(&self) -> Time {
        self.horizon
    }

    pub fn is_constant(&self) -> bool {
        self.toggles.is_empty()
    }

    /// Value from the last toggle onward.
    pub fn final_value(&self) -> Bit {
        self.initial ^ (self.toggles.len() % 2 == 1)
    }

    pub fn eval(&self, t: Time) -> Bit {
        let switched = self.toggles.partition_point(|&x| x <= t);
        self.initial ^ (switched % 2 == 1)
    }

    /// `x(t - 0)`: the value on some `(t - eps, t)`.
    pub fn left_limit(&self, t: Time) -> Bit {
        let switched = self.toggles.partition_point(|&x| x < t);
        self.initial ^ (switched % 2 == 1)
    }

    /// Value at an evaluation point; the pre-history holds `initial`.
    pub fn at(&self, point: Instant) -> Bit {
        match point {
            Instant::Before => self.initial,
            Instant::At(t) => self.eval(t),
        }
    }

    /// Left limit at an evaluation point.
    pub fn left_at(&self, point: Instant) -> Bit {
        match point {
            Instant::Before => self.initial,
            Instant::At(t) => self.left_limit(t),
        }
    }

    /// Values on every tick of `[0, horizon)`.
    pub fn samples(&self) -> Vec<Bit> {
        let mut out = Vec::with_capacity(self.horizon.0 as usize);
        let mut value = self.initial;
        let mut next = self.toggles.iter().peekable();
        for t in 0..self.horizon.0 {
            if next.next_if(|&&x| x == Time(t)).is_some() {
                value = !value;
            }
            out.push(value);
        }
        out
    }

    /// Instants where `x(t - 0) = 0` and `x(t) = 1`.
    pub fn rising_edges(&self) -> EdgeSet {
        self.edges(true)
    }

    /// Instants where `x(t - 0) = 1` and `x(t) = 0`.
    pub fn falling_edges(&self) -> EdgeSet {
        self.edges(false)
    }

    fn edges(&self, rising: bool) -> EdgeSet {
        // toggle i moves the signal to initial ^ (i is even)
        let skip = usize::from(self.initial == rising);
        EdgeSet(self.toggles.iter().skip(skip).step_by(2).copied().collect())
    }

    /// Same signal described on a longer window.
    pub fn extend_horizon(&self, horizon: Time) -> Result<Signal, SignalError> {
        if horizon < self.horizon {
            return Err(SignalError::ShrinkHorizon { from: self.horizon, to: horizon });
        }
        Ok(Signal { horizon, ..self.clone() })
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(&self) -> Signal {
        Signal { initial: !self.initial, ..self.clone() }
    }

    pub fn and(&self, other: &Signal) -> Result<Signal, SignalError> {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn or(&self, other: &Signal) -> Result<Signal, SignalError> {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn xor(&self, other: &Signal) -> Result<Signal, SignalError> {
        self.zip_with(other, |a, b| a ^ b)
    }

    /// Pointwise combination of two signals on the same horizon.
    pub fn zip_with(&self, other: &Signal, op: impl Fn(Bit, Bit) -> Bit) -> Result<Signal, SignalError> {
        if self.horizon != other.horizon {
            return Err(SignalError::HorizonMismatch { left: self.horizon, right: other.horizon });
        }
        let (mut a, mut b) = (self.initial, other.initial);
        let initial = op(a, b);
        let mut current = initial;
        let mut toggles = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.toggles.len() || j < other.toggles.len() {
            let ta = self.toggles.get(i).copied();
            let tb = other.toggles.get(j).copied();
            let t = match (ta, tb) {
                (Some(x), Some(y)) => x.min(y),
                (Some(x), None) => x,
                (None, Some(y)) => y,
                (None, None) => unreachable!(),
            };
            if ta == Some(t) {
                a = !a;
                i += 1;
            }
            if tb == Some(t) {
                b = !b;
                j += 1;
            }
            let value = op(a, b);
            if value != current {
                toggles.push(t);
                current = value;
            }
        }
        Ok(Signal { initial, toggles, horizon: self.horizon })
    }

    /// `y(t) = 1` iff `x` is 1 on the whole closed window `[t - d, t]`. Times
    /// before zero hold `initial`. A run that would only start at or after the
    /// horizon is dropped.
    pub fn window_and(&self, d: Time) -> Signal {
        let mut toggles = Vec::with_capacity(self.toggles.len());
        // 1-runs: a rising toggle opens, the next toggle closes
        let mut k = usize::from(self.initial);
        if self.initial {
            // the run starting at -inf is unaffected by any finite window
            if let Some(&end) = self.toggles.first() {
                toggles.push(end);
            }
        }
        while k < self.toggles.len() {
            let start = self.toggles[k] + d;
            let end = self.toggles.get(k + 1).copied();
            let kept = match end {
                Some(end) => start < end,
                None => start < self.horizon,
            };
            if kept {
                toggles.push(start);
                toggles.extend(end);
            }
            k += 2;
        }
        Signal { initial: self.initial, toggles, horizon: self.horizon }
    }

    /// Maximal runs of ones as `[start, end)` tick ranges; `None` marks an end
    /// of the time line (`-inf` for a start, `+inf` for an end).
    pub fn one_runs(&self) -> Vec<(Option<Time>, Option<Time>)> {
        let mut runs = Vec::new();
        let mut k = 0;
        if self.initial {
            runs.push((None, self.toggles.first().copied()));
            k = 1;
        }
        while k < self.toggles.len() {
            runs.push((Some(self.toggles[k]), self.toggles.get(k + 1).copied()));
            k += 2;
        }
        runs
    }
}

impl fmt::Display for Signal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} :", u8::from(self.initial))?;
        for t in &self.toggles {
            write!(f, " {t}")?;
        }
        write!(f, " | {}", self.horizon)
    }
}
