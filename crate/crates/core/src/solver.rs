//! The general latch system
//!
//! ```text
//!   !x(t-0) & x(t)  = !x(t-0) & u(t)
//!    x(t-0) & !x(t) =  x(t-0) & v(t)
//!    u(t) & v(t)    =  0
//! ```
//!
//! solved constructively from the alternating rising edges of `u` and `v`,
//! together with its single-equation form and an independent tick sweep.

use std::fmt;

use thiserror::Error;

use crate::signal::{Bit, EdgeSet, Instant, Signal, SignalError, Time};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error(transparent)]
    Signal(#[from] SignalError),
    #[error("admissibility violated at {at}: u and v are both 1")]
    Inadmissible { at: Instant },
    #[error("initial state {} is incompatible with constraint {constraint}", u8::from(*init))]
    IncompatibleInit { constraint: InitialConstraint, init: Bit },
}

/// What the inputs' pre-history says about `x(0 - 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InitialConstraint {
    /// `u(0-0) = v(0-0) = 0`: both initial values are solutions.
    Free,
    /// `v(0-0) = 1`.
    Forced0,
    /// `u(0-0) = 1`.
    Forced1,
}

impl InitialConstraint {
    pub fn admits(self, init: Bit) -> bool {
        match self {
            InitialConstraint::Free => true,
            InitialConstraint::Forced0 => !init,
            InitialConstraint::Forced1 => init,
        }
    }

    pub fn forced(self) -> Option<Bit> {
        match self {
            InitialConstraint::Free => None,
            InitialConstraint::Forced0 => Some(false),
            InitialConstraint::Forced1 => Some(true),
        }
    }

    /// The admissible initial values, in increasing order.
    pub fn feasible(self) -> Vec<Bit> {
        [false, true].into_iter().filter(|&b| self.admits(b)).collect()
    }
}

impl fmt::Display for InitialConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InitialConstraint::Free => "free",
            InitialConstraint::Forced0 => "forced 0",
            InitialConstraint::Forced1 => "forced 1",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScheduleStart {
    /// `t0 = min U0`, used from `x(0-0) = 0`.
    RiseOfU,
    /// `t0' = min V0'`, used from `x(0-0) = 1`.
    RiseOfV,
}

/// The alternating instants `t0 < t1 < ...` at which the solution switches.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeSchedule {
    pub times: Vec<Time>,
    pub starts_with: ScheduleStart,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatchSolution {
    pub x: Signal,
    pub schedule: EdgeSchedule,
    pub initial_used: Bit,
}

/// Which equation of the system fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SystemEquation {
    Rise,
    Fall,
    Admissibility,
}

impl fmt::Display for SystemEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SystemEquation::Rise => "rise equation",
            SystemEquation::Fall => "fall equation",
            SystemEquation::Admissibility => "admissibility",
        })
    }
}

/// Failure modes of the single-equation form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnionFailure {
    /// No term of the union is 1.
    Uncovered,
    /// More than one term is 1.
    NotExclusive,
}

impl fmt::Display for UnionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UnionFailure::Uncovered => "no term holds",
            UnionFailure::NotExclusive => "terms not exclusive",
        })
    }
}

/// Outcome of checking an equation at every evaluation point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict<C> {
    Holds,
    Fails { at: Instant, clause: C },
}

impl<C> Verdict<C> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn failure_point(&self) -> Option<Instant> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails { at, .. } => Some(*at),
        }
    }
}

impl<C: fmt::Display> fmt::Display for Verdict<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds => f.write_str("holds"),
            Verdict::Fails { at, clause } => write!(f, "fails at {at} ({clause})"),
        }
    }
}

fn same_horizon(a: &Signal, b: &Signal) -> Result<(), SignalError> {
    if a.horizon() != b.horizon() {
        return Err(SignalError::HorizonMismatch { left: a.horizon(), right: b.horizon() });
    }
    Ok(())
}

/// Ok iff `u(t) & v(t) = 0` everywhere, pre-history included.
pub fn check_admissible(u: &Signal, v: &Signal) -> Result<(), SolverError> {
    let both = u.and(v)?;
    if both.initial() {
        return Err(SolverError::Inadmissible { at: Instant::Before });
    }
    match both.toggles().first() {
        Some(&t) => Err(SolverError::Inadmissible { at: Instant::At(t) }),
        None => Ok(()),
    }
}

pub fn initial_constraint(u: &Signal, v: &Signal) -> Result<InitialConstraint, SolverError> {
    check_admissible(u, v)?;
    Ok(match (u.left_limit(Time::ZERO), v.left_limit(Time::ZERO)) {
        (false, false) => InitialConstraint::Free,
        (true, false) => InitialConstraint::Forced1,
        (false, true) => InitialConstraint::Forced0,
        (true, true) => unreachable!("excluded by admissibility"),
    })
}

/// The chain of edge sets `U0, V1, U2, ...` (or `V0', U1', ...` when `init`
/// is 1). Each set holds the rising edges of its signal strictly after the
/// minimum of the previous set; the chain stops before the first empty set.
pub fn edge_sets(u: &Signal, v: &Signal, init: Bit) -> Result<Vec<EdgeSet>, SolverError> {
    check_admissible(u, v)?;
    let rises = [u.rising_edges(), v.rising_edges()];
    let mut which = usize::from(init);
    let mut sets = Vec::new();
    let mut current = rises[which].clone();
    while let Some(t) = current.min() {
        sets.push(current);
        which ^= 1;
        current = rises[which].after(t);
    }
    Ok(sets)
}

pub fn edge_schedule(u: &Signal, v: &Signal, init: Bit) -> Result<EdgeSchedule, SolverError> {
    let times = edge_sets(u, v, init)?.iter().filter_map(EdgeSet::min).collect();
    let starts_with = if init { ScheduleStart::RiseOfV } else { ScheduleStart::RiseOfU };
    Ok(EdgeSchedule { times, starts_with })
}

fn checked_constraint(u: &Signal, v: &Signal, init: Bit) -> Result<(), SolverError> {
    let constraint = initial_constraint(u, v)?;
    if !constraint.admits(init) {
        return Err(SolverError::IncompatibleInit { constraint, init });
    }
    Ok(())
}

/// The solution starting from `x(0-0) = init`: it switches exactly at the
/// schedule instants, so it is `init` followed by alternating indicators.
pub fn solve(u: &Signal, v: &Signal, init: Bit) -> Result<LatchSolution, SolverError> {
    checked_constraint(u, v, init)?;
    let schedule = edge_schedule(u, v, init)?;
    let x = Signal::from_intervals(init, schedule.times.clone(), u.horizon())?;
    Ok(LatchSolution { x, schedule, initial_used: init })
}

/// Tick-by-tick sweep of the solution table: `x = 1` where `u = 1`, `x = 0`
/// where `v = 1`, otherwise `x` keeps its left limit.
pub fn interval_oracle(u: &Signal, v: &Signal, init: Bit) -> Result<Signal, SolverError> {
    checked_constraint(u, v, init)?;
    let (us, vs) = (u.samples(), v.samples());
    let mut prev = init;
    let samples: Vec<Bit> = us
        .iter()
        .zip(&vs)
        .map(|(&ut, &vt)| {
            prev = if ut {
                true
            } else if vt {
                false
            } else {
                prev
            };
            prev
        })
        .collect();
    Ok(Signal::from_samples(init, &samples))
}

/// The first failing equation of the system at one evaluation point.
pub fn system_failure_at(u: &Signal, v: &Signal, x: &Signal, at: Instant) -> Option<SystemEquation> {
    let (x0, xt) = (x.left_at(at), x.at(at));
    let (ut, vt) = (u.at(at), v.at(at));
    if (!x0 & xt) != (!x0 & ut) {
        Some(SystemEquation::Rise)
    } else if (x0 & !xt) != (x0 & vt) {
        Some(SystemEquation::Fall)
    } else if ut & vt {
        Some(SystemEquation::Admissibility)
    } else {
        None
    }
}

pub fn system_holds_at(u: &Signal, v: &Signal, x: &Signal, at: Instant) -> bool {
    system_failure_at(u, v, x, at).is_none()
}

/// The three terms of the single-equation form: set, reset and hold.
fn equation5_terms(u: &Signal, v: &Signal, x: &Signal, at: Instant) -> [Bit; 3] {
    let (x0, xt) = (x.left_at(at), x.at(at));
    let (ut, vt) = (u.at(at), v.at(at));
    [xt & ut & !vt, !xt & !ut & vt, ((!x0 & !xt) | (x0 & xt)) & !ut & !vt]
}

pub fn equation5_failure_at(u: &Signal, v: &Signal, x: &Signal, at: Instant) -> Option<UnionFailure> {
    let terms = equation5_terms(u, v, x, at);
    match terms.iter().filter(|&&b| b).count() {
        0 => Some(UnionFailure::Uncovered),
        1 => None,
        _ => Some(UnionFailure::NotExclusive),
    }
}

pub fn equation5_holds_at(u: &Signal, v: &Signal, x: &Signal, at: Instant) -> bool {
    equation5_failure_at(u, v, x, at).is_none()
}

/// Checks the three-equation system at the pre-history and every tick of
/// `[0, horizon]`, reporting the earliest failure.
pub fn holds_system(u: &Signal, v: &Signal, x: &Signal) -> Result<Verdict<SystemEquation>, SignalError> {
    same_horizon(u, v)?;
    same_horizon(u, x)?;
    Ok(Instant::sweep(u.horizon())
        .find_map(|at| system_failure_at(u, v, x, at).map(|clause| Verdict::Fails { at, clause }))
        .unwrap_or(Verdict::Holds))
}

/// Checks that exactly one term of the single-equation form is 1 at every
/// evaluation point.
pub fn holds_equation5(u: &Signal, v: &Signal, x: &Signal) -> Result<Verdict<UnionFailure>, SignalError> {
    same_horizon(u, v)?;
    same_horizon(u, x)?;
    Ok(Instant::sweep(u.horizon())
        .find_map(|at| equation5_failure_at(u, v, x, at).map(|clause| Verdict::Fails { at, clause }))
        .unwrap_or(Verdict::Holds))
}
