//! Latches and flip-flops built on the general latch solver.
//!
//! Single latches substitute their inputs into [`solve`]. The edge-triggered
//! RS and D flip-flops chain two solver calls (master, then slave on `!C`).
//! JK and T flip-flops feed `Q` back into the master, so they are solved by a
//! clock-phased sweep: on a tick with `C = 1` the slave holds and the master
//! reads that held `Q`; with `C = 0` the master holds and the slave copies it.
//!
//! [`verify_device`] evaluates each device's single-equation characterization
//! directly, independently of the constructors.

use std::fmt;

use thiserror::Error;

use crate::signal::{Bit, Instant, Signal, SignalError, Time};
use crate::solver::{solve, InitialConstraint, SolverError, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stage {
    Latch,
    Master,
    Slave,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Latch => "latch",
            Stage::Master => "master",
            Stage::Slave => "slave",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeviceError {
    #[error("a C element needs at least one input")]
    NoInputs,
    #[error("missing input signal {0}")]
    MissingInput(String),
    #[error("missing next-state signal P")]
    MissingNextState,
    #[error("{0} needs an initial next state (init_p)")]
    MissingInitP(DeviceKind),
    #[error(transparent)]
    Signal(#[from] SignalError),
    #[error("{stage}: {source}")]
    Stage {
        stage: Stage,
        #[source]
        source: SolverError,
    },
}

impl DeviceError {
    fn at(stage: Stage) -> impl FnOnce(SolverError) -> DeviceError {
        move |source| match source {
            SolverError::Signal(e) => DeviceError::Signal(e),
            source => DeviceError::Stage { stage, source },
        }
    }
}

/// Minimum assertion durations for the inertial RS latch.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct InertialParams {
    /// Rise inertia, applied to the set input.
    pub d_r: Time,
    /// Fall inertia, applied to the reset input.
    pub d_f: Time,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DeviceKind {
    CElement,
    Rs,
    ClockedRs,
    DLatch,
    EdgeRs,
    Dff,
    Jk,
    Jk3,
    T,
    InertialRs(InertialParams),
}

impl DeviceKind {
    pub const TOKENS: [&'static str; 10] = ["c", "rs", "crs", "dlatch", "edgers", "dff", "jk", "jk3", "tff", "irs"];

    /// Parses a command-line token; `irs` takes the given inertial parameters.
    pub fn from_token(token: &str, params: InertialParams) -> Option<DeviceKind> {
        Some(match token {
            "c" => DeviceKind::CElement,
            "rs" => DeviceKind::Rs,
            "crs" => DeviceKind::ClockedRs,
            "dlatch" => DeviceKind::DLatch,
            "edgers" => DeviceKind::EdgeRs,
            "dff" => DeviceKind::Dff,
            "jk" => DeviceKind::Jk,
            "jk3" => DeviceKind::Jk3,
            "tff" => DeviceKind::T,
            "irs" => DeviceKind::InertialRs(params),
            _ => return None,
        })
    }

    pub fn token(self) -> &'static str {
        match self {
            DeviceKind::CElement => "c",
            DeviceKind::Rs => "rs",
            DeviceKind::ClockedRs => "crs",
            DeviceKind::DLatch => "dlatch",
            DeviceKind::EdgeRs => "edgers",
            DeviceKind::Dff => "dff",
            DeviceKind::Jk => "jk",
            DeviceKind::Jk3 => "jk3",
            DeviceKind::T => "tff",
            DeviceKind::InertialRs(_) => "irs",
        }
    }

    /// True for the master-slave devices, which also expose `P`.
    pub fn has_next_state(self) -> bool {
        matches!(self, DeviceKind::EdgeRs | DeviceKind::Dff | DeviceKind::Jk | DeviceKind::Jk3 | DeviceKind::T)
    }

    /// Named inputs the device reads. The C element takes any number.
    pub fn input_names(self) -> &'static [&'static str] {
        match self {
            DeviceKind::CElement => &[],
            DeviceKind::Rs | DeviceKind::InertialRs(_) => &["R", "S"],
            DeviceKind::ClockedRs | DeviceKind::EdgeRs => &["R", "S", "C"],
            DeviceKind::DLatch | DeviceKind::Dff => &["D", "C"],
            DeviceKind::Jk | DeviceKind::Jk3 => &["J", "K", "C"],
            DeviceKind::T => &["C"],
        }
    }
}

impl fmt::Display for DeviceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// Inputs and solved state signals of one device run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeviceTrace {
    pub inputs: Vec<(String, Signal)>,
    pub q: Signal,
    pub p: Option<Signal>,
}

impl DeviceTrace {
    pub fn new(inputs: Vec<(String, Signal)>, q: Signal, p: Option<Signal>) -> Self {
        DeviceTrace { inputs, q, p }
    }

    pub fn input(&self, name: &str) -> Option<&Signal> {
        self.inputs.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }

    fn require(&self, name: &str) -> Result<&Signal, DeviceError> {
        self.input(name).ok_or_else(|| DeviceError::MissingInput(name.to_owned()))
    }

    pub fn horizon(&self) -> Time {
        self.q.horizon()
    }
}

fn named(pairs: &[(&str, &Signal)]) -> Vec<(String, Signal)> {
    pairs.iter().map(|(n, s)| ((*n).to_owned(), (*s).clone())).collect()
}

fn latch(u: &Signal, v: &Signal, init: Bit, stage: Stage) -> Result<Signal, DeviceError> {
    solve(u, v, init).map(|s| s.x).map_err(DeviceError::at(stage))
}

/// Muller C element over any number of inputs: rises when all inputs are 1,
/// falls when all are 0, holds otherwise.
pub fn c_element(inputs: &[Signal], init: Bit) -> Result<Signal, DeviceError> {
    let (first, rest) = inputs.split_first().ok_or(DeviceError::NoInputs)?;
    let mut all = first.clone();
    let mut none = first.not();
    for x in rest {
        all = all.and(x)?;
        none = none.and(&x.not())?;
    }
    latch(&all, &none, init, Stage::Latch)
}

/// RS latch: `S` sets, `R` resets.
pub fn rs_latch(r: &Signal, s: &Signal, init: Bit) -> Result<Signal, DeviceError> {
    latch(s, r, init, Stage::Latch)
}

pub fn clocked_rs(r: &Signal, s: &Signal, c: &Signal, init: Bit) -> Result<Signal, DeviceError> {
    clocked_rs_stage(r, s, c, init, Stage::Latch)
}

fn clocked_rs_stage(r: &Signal, s: &Signal, c: &Signal, init: Bit, stage: Stage) -> Result<Signal, DeviceError> {
    latch(&s.and(c)?, &r.and(c)?, init, stage)
}

pub fn d_latch(d: &Signal, c: &Signal, init: Bit) -> Result<Signal, DeviceError> {
    d_latch_stage(d, c, init, Stage::Latch)
}

fn d_latch_stage(d: &Signal, c: &Signal, init: Bit, stage: Stage) -> Result<Signal, DeviceError> {
    latch(&d.and(c)?, &d.not().and(c)?, init, stage)
}

/// The slave of every master-slave device: a D latch on `(P, !C)`.
fn slave(p: &Signal, c: &Signal, init_q: Bit) -> Result<Signal, DeviceError> {
    d_latch_stage(p, &c.not(), init_q, Stage::Slave)
}

pub fn edge_rs_ff(r: &Signal, s: &Signal, c: &Signal, init_p: Bit, init_q: Bit) -> Result<DeviceTrace, DeviceError> {
    let p = clocked_rs_stage(r, s, c, init_p, Stage::Master)?;
    let q = slave(&p, c, init_q)?;
    Ok(DeviceTrace::new(named(&[("R", r), ("S", s), ("C", c)]), q, Some(p)))
}

pub fn d_ff(d: &Signal, c: &Signal, init_p: Bit, init_q: Bit) -> Result<DeviceTrace, DeviceError> {
    let p = d_latch_stage(d, c, init_p, Stage::Master)?;
    let q = slave(&p, c, init_q)?;
    Ok(DeviceTrace::new(named(&[("D", d), ("C", c)]), q, Some(p)))
}

/// Solves a master-slave pair whose master inputs depend on `Q`. `master`
/// returns the master's (set, reset) pair at a point given `Q` there.
fn clock_phased_sweep(
    c: &Signal,
    init_p: Bit,
    init_q: Bit,
    master: impl Fn(Instant, Bit) -> (Bit, Bit),
) -> Result<(Signal, Signal), DeviceError> {
    if c.initial() {
        let (set, reset) = master(Instant::Before, init_q);
        let constraint = match (set, reset) {
            (true, true) => {
                return Err(DeviceError::Stage {
                    stage: Stage::Master,
                    source: SolverError::Inadmissible { at: Instant::Before },
                })
            }
            (true, false) => InitialConstraint::Forced1,
            (false, true) => InitialConstraint::Forced0,
            (false, false) => InitialConstraint::Free,
        };
        if !constraint.admits(init_p) {
            let source = SolverError::IncompatibleInit { constraint, init: init_p };
            return Err(DeviceError::Stage { stage: Stage::Master, source });
        }
    } else if init_q != init_p {
        let constraint = if init_p { InitialConstraint::Forced1 } else { InitialConstraint::Forced0 };
        let source = SolverError::IncompatibleInit { constraint, init: init_q };
        return Err(DeviceError::Stage { stage: Stage::Slave, source });
    }

    let horizon = c.horizon().ticks() as usize;
    let (mut ps, mut qs) = (Vec::with_capacity(horizon), Vec::with_capacity(horizon));
    let (mut p, mut q) = (init_p, init_q);
    for (t, clock) in c.samples().into_iter().enumerate() {
        let at = Instant::At(Time(t as u64));
        if clock {
            let (set, reset) = master(at, q);
            if set && reset {
                let source = SolverError::Inadmissible { at };
                return Err(DeviceError::Stage { stage: Stage::Master, source });
            }
            p = set || (p && !reset);
        } else {
            q = p;
        }
        ps.push(p);
        qs.push(q);
    }
    Ok((Signal::from_samples(init_p, &ps), Signal::from_samples(init_q, &qs)))
}

fn same_horizons(signals: &[&Signal]) -> Result<(), SignalError> {
    let first = signals[0].horizon();
    match signals.iter().find(|s| s.horizon() != first) {
        Some(s) => Err(SignalError::HorizonMismatch { left: first, right: s.horizon() }),
        None => Ok(()),
    }
}

/// JK flip-flop: master set `J & !Q`, reset `K & Q`.
pub fn jk_ff(j: &Signal, k: &Signal, c: &Signal, init_p: Bit, init_q: Bit) -> Result<DeviceTrace, DeviceError> {
    same_horizons(&[j, k, c])?;
    let (p, q) = clock_phased_sweep(c, init_p, init_q, |at, q| (j.at(at) && !q, k.at(at) && q))?;
    Ok(DeviceTrace::new(named(&[("J", j), ("K", k), ("C", c)]), q, Some(p)))
}

/// JK flip-flop as a D flip-flop with `D = J & !Q | !K & Q`.
pub fn jk_ff_variant3(
    j: &Signal,
    k: &Signal,
    c: &Signal,
    init_p: Bit,
    init_q: Bit,
) -> Result<DeviceTrace, DeviceError> {
    same_horizons(&[j, k, c])?;
    let (p, q) = clock_phased_sweep(c, init_p, init_q, |at, q| {
        let d = (j.at(at) && !q) || (!k.at(at) && q);
        (d, !d)
    })?;
    Ok(DeviceTrace::new(named(&[("J", j), ("K", k), ("C", c)]), q, Some(p)))
}

/// T flip-flop: `Q` toggles at every falling edge of `C`.
pub fn t_ff(c: &Signal, init_p: Bit, init_q: Bit) -> Result<DeviceTrace, DeviceError> {
    let (p, q) = clock_phased_sweep(c, init_p, init_q, |_, q| (!q, q))?;
    Ok(DeviceTrace::new(named(&[("C", c)]), q, Some(p)))
}

/// RS latch that ignores set (reset) pulses shorter than `d_r` (`d_f`).
pub fn inertial_rs_latch(r: &Signal, s: &Signal, params: InertialParams, init: Bit) -> Result<Signal, DeviceError> {
    latch(&s.window_and(params.d_r), &r.window_and(params.d_f), init, Stage::Latch)
}

/// Runs a device on named inputs. Flip-flops require `init_p`.
pub fn run_device(
    kind: DeviceKind,
    inputs: &[(String, Signal)],
    init_p: Option<Bit>,
    init_q: Bit,
) -> Result<DeviceTrace, DeviceError> {
    let get = |name: &str| {
        inputs.iter().find(|(n, _)| n == name).map(|(_, s)| s).ok_or_else(|| DeviceError::MissingInput(name.to_owned()))
    };
    let init_p = || init_p.ok_or(DeviceError::MissingInitP(kind));
    let single = |q: Signal| {
        let names = kind.input_names();
        let ins = inputs.iter().filter(|(n, _)| names.contains(&n.as_str())).cloned().collect();
        DeviceTrace::new(ins, q, None)
    };
    match kind {
        DeviceKind::CElement => {
            let signals: Vec<Signal> = inputs.iter().map(|(_, s)| s.clone()).collect();
            let q = c_element(&signals, init_q)?;
            Ok(DeviceTrace::new(inputs.to_vec(), q, None))
        }
        DeviceKind::Rs => Ok(single(rs_latch(get("R")?, get("S")?, init_q)?)),
        DeviceKind::ClockedRs => Ok(single(clocked_rs(get("R")?, get("S")?, get("C")?, init_q)?)),
        DeviceKind::DLatch => Ok(single(d_latch(get("D")?, get("C")?, init_q)?)),
        DeviceKind::InertialRs(params) => Ok(single(inertial_rs_latch(get("R")?, get("S")?, params, init_q)?)),
        DeviceKind::EdgeRs => edge_rs_ff(get("R")?, get("S")?, get("C")?, init_p()?, init_q),
        DeviceKind::Dff => d_ff(get("D")?, get("C")?, init_p()?, init_q),
        DeviceKind::Jk => jk_ff(get("J")?, get("K")?, get("C")?, init_p()?, init_q),
        DeviceKind::Jk3 => jk_ff_variant3(get("J")?, get("K")?, get("C")?, init_p()?, init_q),
        DeviceKind::T => t_ff(get("C")?, init_p()?, init_q),
    }
}

/// The case of a device equation that applies at a point, named after the
/// input condition selecting it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Clause {
    Set,
    Reset,
    Hold,
    ClockHigh,
    ClockLow,
    /// No case applies: the inputs violate admissibility.
    Inadmissible,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Clause::Set => "set term",
            Clause::Reset => "reset term",
            Clause::Hold => "hold term",
            Clause::ClockHigh => "C(t)=1 term",
            Clause::ClockLow => "C(t)=0 term",
            Clause::Inadmissible => "inadmissible inputs",
        })
    }
}

/// Left limit and present value of a signal at a point.
#[derive(Clone, Copy)]
struct Probe {
    prev: Bit,
    now: Bit,
}

impl Probe {
    fn of(x: &Signal, at: Instant) -> Probe {
        Probe { prev: x.left_at(at), now: x.at(at) }
    }

    fn steady(self) -> Bit {
        (!self.prev && !self.now) || (self.prev && self.now)
    }
}

type Term = (Clause, Bit, Bit);

fn rs_terms(r: Bit, s: Bit, q: Probe) -> [Term; 3] {
    [(Clause::Set, !r && s, q.now), (Clause::Reset, r && !s, !q.now), (Clause::Hold, !r && !s, q.steady())]
}

/// The C = 0 case shared by all master-slave devices: `P` steady and `Q = P`.
fn slave_term(c: Bit, p: Probe, q: Probe) -> Term {
    (Clause::ClockLow, !c, (!q.now && !p.prev && !p.now) || (q.now && p.prev && p.now))
}

fn master_slave_terms(c: Bit, p: Probe, q: Probe, master: Bit) -> Vec<Term> {
    vec![(Clause::ClockHigh, c, q.steady() && master), slave_term(c, p, q)]
}

fn device_terms(
    kind: DeviceKind,
    trace: &DeviceTrace,
    windowed: &[Signal],
    at: Instant,
) -> Result<Vec<Term>, DeviceError> {
    let q = Probe::of(&trace.q, at);
    let val = |name: &str| trace.require(name).map(|s| s.at(at));
    let next = || trace.p.as_ref().map(|p| Probe::of(p, at)).ok_or(DeviceError::MissingNextState);
    Ok(match kind {
        DeviceKind::CElement => {
            if trace.inputs.is_empty() {
                return Err(DeviceError::NoInputs);
            }
            let all = trace.inputs.iter().all(|(_, s)| s.at(at));
            let any = trace.inputs.iter().any(|(_, s)| s.at(at));
            vec![(Clause::Set, all, q.now), (Clause::Reset, !any, !q.now), (Clause::Hold, !all && any, q.steady())]
        }
        DeviceKind::Rs => rs_terms(val("R")?, val("S")?, q).to_vec(),
        DeviceKind::InertialRs(_) => rs_terms(windowed[0].at(at), windowed[1].at(at), q).to_vec(),
        DeviceKind::ClockedRs => {
            let (r, s, c) = (val("R")?, val("S")?, val("C")?);
            vec![
                (Clause::Set, c && !r && s, q.now),
                (Clause::Reset, c && r && !s, !q.now),
                (Clause::Hold, (!r && !s) || !c, q.steady()),
            ]
        }
        DeviceKind::DLatch => {
            let (d, c) = (val("D")?, val("C")?);
            vec![(Clause::ClockHigh, c, (!q.now && !d) || (q.now && d)), (Clause::ClockLow, !c, q.steady())]
        }
        DeviceKind::EdgeRs => {
            let (r, s, c, p) = (val("R")?, val("S")?, val("C")?, next()?);
            let master = (p.now && !r && s) || (!p.now && r && !s) || (p.steady() && !r && !s);
            master_slave_terms(c, p, q, master)
        }
        DeviceKind::Dff => {
            let (d, c, p) = (val("D")?, val("C")?, next()?);
            master_slave_terms(c, p, q, (!p.now && !d) || (p.now && d))
        }
        DeviceKind::Jk => {
            let (j, k, c, p) = (val("J")?, val("K")?, val("C")?, next()?);
            let hold = (!j && !k) || (!j && !q.now) || (!k && q.now);
            let master = (p.now && j && !q.now) || (!p.now && k && q.now) || (p.steady() && hold);
            master_slave_terms(c, p, q, master)
        }
        DeviceKind::Jk3 => {
            let (j, k, c, p) = (val("J")?, val("K")?, val("C")?, next()?);
            let master =
                (p.now && j && !q.now) || (!p.now && k && q.now) || (!p.now && !j && !q.now) || (p.now && !k && q.now);
            master_slave_terms(c, p, q, master)
        }
        DeviceKind::T => {
            let (c, p) = (val("C")?, next()?);
            vec![
                (Clause::ClockHigh, c, (!q.prev && !q.now && p.now) || (q.prev && q.now && !p.now)),
                slave_term(c, p, q),
            ]
        }
    })
}

/// Evaluates the device's single-equation characterization at the
/// pre-history and at every tick, reporting the earliest point where it is 0.
pub fn verify_device(kind: DeviceKind, trace: &DeviceTrace) -> Result<Verdict<Clause>, DeviceError> {
    let mut all: Vec<&Signal> = trace.inputs.iter().map(|(_, s)| s).collect();
    all.push(&trace.q);
    all.extend(trace.p.as_ref());
    same_horizons(&all)?;

    let windowed = match kind {
        DeviceKind::InertialRs(params) => {
            vec![trace.require("R")?.window_and(params.d_f), trace.require("S")?.window_and(params.d_r)]
        }
        _ => Vec::new(),
    };
    for at in Instant::sweep(trace.horizon()) {
        let terms = device_terms(kind, trace, &windowed, at)?;
        if !terms.iter().any(|&(_, guard, body)| guard && body) {
            let clause = terms.iter().find(|t| t.1).map_or(Clause::Inadmissible, |t| t.0);
            return Ok(Verdict::Fails { at, clause });
        }
    }
    Ok(Verdict::Holds)
}

#[cfg(test)]
mod tests {
    use super::*;

    const H: u64 = 12;

    fn sig(initial: bool, toggles: &[u64]) -> Signal {
        Signal::from_ticks(initial, toggles, H).unwrap()
    }

    fn pulse(a: u64, b: u64) -> Signal {
        Signal::indicator(Time(a), Time(b), Time(H))
    }

    fn zero() -> Signal {
        Signal::constant(false, Time(H))
    }

    fn one() -> Signal {
        Signal::constant(true, Time(H))
    }

    fn from(a: u64) -> Signal {
        pulse(a, H)
    }

    fn union(a: &Signal, b: &Signal) -> Signal {
        a.or(b).unwrap()
    }

    #[test]
    fn c_element_examples() {
        // rises when both are 1 (3), holds through disagreement, falls when both are 0 (7)
        assert_eq!(c_element(&[pulse(1, 5), pulse(3, 7)], false).unwrap(), pulse(3, 7));
        let x = sig(true, &[2, 6, 9]);
        assert_eq!(c_element(std::slice::from_ref(&x), x.left_limit(Time(0))).unwrap(), x);
        for c in [false, true] {
            let k = Signal::constant(c, Time(H));
            assert_eq!(c_element(&[k.clone(), k.clone(), k.clone()], c).unwrap(), k);
        }
        assert_eq!(c_element(&[], false), Err(DeviceError::NoInputs));
        assert!(matches!(
            c_element(&[one(), one()], false),
            Err(DeviceError::Stage { stage: Stage::Latch, source: SolverError::IncompatibleInit { .. } })
        ));
    }

    #[test]
    fn rs_latch_examples() {
        assert_eq!(rs_latch(&pulse(6, 7), &pulse(2, 3), false).unwrap(), pulse(2, 6));
        for q in [false, true] {
            assert_eq!(rs_latch(&zero(), &zero(), q).unwrap(), Signal::constant(q, Time(H)));
        }
        assert_eq!(
            rs_latch(&pulse(2, 4), &pulse(1, 3), false),
            Err(DeviceError::Stage {
                stage: Stage::Latch,
                source: SolverError::Inadmissible { at: Instant::At(Time(2)) }
            })
        );
    }

    #[test]
    fn clocked_rs_examples() {
        let (r, s) = (pulse(6, 7), pulse(2, 3));
        assert_eq!(clocked_rs(&r, &s, &one(), false).unwrap(), rs_latch(&r, &s, false).unwrap());
        assert_eq!(clocked_rs(&r, &s, &zero(), true).unwrap(), one());
        assert_eq!(clocked_rs(&zero(), &pulse(1, 3), &pulse(2, 4), false).unwrap(), from(2));
        // R and S both high is fine while the clock is low
        assert!(clocked_rs(&pulse(1, 3), &pulse(1, 3), &from(5), false).is_ok());
    }

    #[test]
    fn d_latch_examples() {
        let d = sig(false, &[2, 5, 6, 9]);
        let q = d_latch(&d, &one(), d.eval(Time(0))).unwrap();
        assert_eq!(q.samples(), d.samples());
        assert_eq!(d_latch(&d, &zero(), true).unwrap(), one());
        assert_eq!(d_latch(&pulse(1, 4), &pulse(2, 3), false).unwrap(), from(2));
    }

    #[test]
    fn edge_rs_examples() {
        for q in [false, true] {
            let t = edge_rs_ff(&pulse(1, 2), &pulse(4, 5), &zero(), q, q).unwrap();
            assert_eq!(t.q, Signal::constant(q, Time(H)));
            assert_eq!(t.p, Some(Signal::constant(q, Time(H))));
        }
        let t = edge_rs_ff(&zero(), &pulse(2, 3), &pulse(1, 4), false, false).unwrap();
        assert_eq!(t.p, Some(from(2)));
        assert_eq!(t.q, from(4));
        assert!(matches!(
            edge_rs_ff(&zero(), &zero(), &zero(), true, false),
            Err(DeviceError::Stage { stage: Stage::Slave, .. })
        ));
    }

    #[test]
    fn d_ff_examples() {
        let c = union(&pulse(1, 4), &pulse(5, 8));
        let t = d_ff(&pulse(3, 6), &c, false, false).unwrap();
        assert_eq!(t.q, pulse(4, 8));
        let t = d_ff(&pulse(3, 6), &zero(), true, true).unwrap();
        assert_eq!((t.p.unwrap(), t.q), (one(), one()));
        assert_eq!(d_ff(&one(), &pulse(1, 3), false, false).unwrap().q, from(3));
    }

    #[test]
    fn jk_examples() {
        let c = sig(false, &[1, 2, 3, 4, 5, 6]);
        assert_eq!(jk_ff(&one(), &one(), &c, false, false).unwrap().q, t_ff(&c, false, false).unwrap().q);
        let t = jk_ff(&zero(), &zero(), &c, true, true).unwrap();
        assert_eq!((t.p.unwrap(), t.q), (one(), one()));
        let t = jk_ff(&sig(false, &[0]), &zero(), &pulse(1, 2), false, false).unwrap();
        assert_eq!(t.q, from(2));
    }

    #[test]
    fn jk3_examples() {
        let c = sig(false, &[1, 2, 3, 4, 5, 6]);
        assert_eq!(jk_ff_variant3(&one(), &one(), &c, false, false).unwrap(), {
            let mut t = t_ff(&c, false, false).unwrap();
            t.inputs = named(&[("J", &one()), ("K", &one()), ("C", &c)]);
            t
        });
        for q in [false, true] {
            let t = jk_ff_variant3(&zero(), &zero(), &c, q, q).unwrap();
            assert_eq!(t.q, Signal::constant(q, Time(H)));
        }
        // single falling edge at 2 with J = 1, K = 0 captures D(2-0) = J & !Q = 1
        let t = jk_ff_variant3(&one(), &zero(), &pulse(1, 2), false, false).unwrap();
        assert!(!t.q.left_limit(Time(2)));
        assert!(t.q.eval(Time(2)));
    }

    #[test]
    fn t_ff_examples() {
        let c = sig(false, &[1, 2, 3, 4, 5, 6]);
        let t = t_ff(&c, false, false).unwrap();
        assert_eq!(t.q, union(&pulse(2, 4), &from(6)));
        assert_eq!(t_ff(&zero(), true, true).unwrap().q, one());
        // with the clock high from the start the master already holds !Q
        assert!(t_ff(&one(), true, false).is_ok());
        assert!(matches!(t_ff(&one(), false, false), Err(DeviceError::Stage { stage: Stage::Master, .. })));
        assert!(matches!(t_ff(&zero(), true, false), Err(DeviceError::Stage { stage: Stage::Slave, .. })));
        // parity of falling edges
        let c = sig(false, &[1, 2, 3, 4, 7, 9]);
        let q = t_ff(&c, false, false).unwrap().q;
        assert_eq!(q.eval(Time(H - 1)), c.falling_edges().len() % 2 == 1);
    }

    #[test]
    fn inertial_examples() {
        let (r, s) = (pulse(7, 9), pulse(2, 5));
        assert_eq!(
            inertial_rs_latch(&r, &s, InertialParams::default(), false).unwrap(),
            rs_latch(&r, &s, false).unwrap()
        );
        let slow = InertialParams { d_r: Time(2), d_f: Time(0) };
        assert_eq!(inertial_rs_latch(&zero(), &pulse(2, 3), slow, false).unwrap(), zero());
        assert_eq!(inertial_rs_latch(&zero(), &pulse(2, 6), slow, false).unwrap(), from(4));
    }

    #[test]
    fn verify_accepts_constructed_traces() {
        let (r, s) = (pulse(6, 7), pulse(2, 3));
        let q = rs_latch(&r, &s, false).unwrap();
        let trace = DeviceTrace::new(named(&[("R", &r), ("S", &s)]), q, None);
        assert!(verify_device(DeviceKind::Rs, &trace).unwrap().holds());

        let c = sig(false, &[1, 2, 3, 4, 5, 6]);
        let t = t_ff(&c, false, false).unwrap();
        assert!(verify_device(DeviceKind::T, &t).unwrap().holds());
        let run = run_device(DeviceKind::T, &t.inputs, Some(false), false).unwrap();
        assert_eq!(run, t);

        // asymmetric windows and pulses so R and S cannot be confused
        let kind = DeviceKind::InertialRs(InertialParams { d_r: Time(1), d_f: Time(3) });
        let (r, s) = (from(7), pulse(2, 6));
        let inputs = named(&[("R", &r), ("S", &s)]);
        let trace = run_device(kind, &inputs, None, false).unwrap();
        assert_eq!(trace.q, pulse(3, 10));
        assert!(verify_device(kind, &trace).unwrap().holds());
    }

    #[test]
    fn verify_rejects_broken_traces() {
        // Q held through the falling edge at 2
        let c = sig(false, &[1, 2, 3, 4]);
        let mut t = t_ff(&c, false, false).unwrap();
        t.q = zero();
        assert_eq!(
            verify_device(DeviceKind::T, &t).unwrap(),
            Verdict::Fails { at: Instant::At(Time(2)), clause: Clause::ClockLow }
        );

        let d = pulse(2, 8);
        let c = from(1);
        let mut q = d_latch(&d, &c, false).unwrap();
        assert!(verify_device(DeviceKind::DLatch, &DeviceTrace::new(named(&[("D", &d), ("C", &c)]), q.clone(), None))
            .unwrap()
            .holds());
        q = q.xor(&pulse(4, 5)).unwrap();
        let trace = DeviceTrace::new(named(&[("D", &d), ("C", &c)]), q, None);
        assert_eq!(
            verify_device(DeviceKind::DLatch, &trace).unwrap(),
            Verdict::Fails { at: Instant::At(Time(4)), clause: Clause::ClockHigh }
        );

        let trace = DeviceTrace::new(named(&[("D", &d)]), zero(), None);
        assert_eq!(verify_device(DeviceKind::DLatch, &trace), Err(DeviceError::MissingInput("C".into())));
        let trace = DeviceTrace::new(named(&[("C", &c)]), zero(), None);
        assert_eq!(verify_device(DeviceKind::T, &trace), Err(DeviceError::MissingNextState));
    }

    #[test]
    fn run_device_dispatch() {
        let inputs = named(&[("S", &pulse(2, 3)), ("R", &pulse(6, 7)), ("X", &one())]);
        let t = run_device(DeviceKind::Rs, &inputs, None, false).unwrap();
        assert_eq!(t.q, pulse(2, 6));
        assert_eq!(t.inputs.len(), 2);
        assert_eq!(run_device(DeviceKind::Dff, &inputs, None, false), Err(DeviceError::MissingInput("D".into())));
        let inputs = named(&[("C", &pulse(2, 3))]);
        assert_eq!(run_device(DeviceKind::T, &inputs, None, false), Err(DeviceError::MissingInitP(DeviceKind::T)));
        for token in DeviceKind::TOKENS {
            let kind = DeviceKind::from_token(token, InertialParams::default()).unwrap();
            assert_eq!(kind.token(), token);
        }
    }
}
