//! Seeded random signal generation and the property suite run by `fuzz`.
//!
//! Every case draws from its own ChaCha stream keyed by `(seed, case index)`,
//! so cases can be evaluated in any order or in parallel and still reproduce.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::devices::{
    c_element, clocked_rs, d_ff, d_latch, edge_rs_ff, jk_ff, jk_ff_variant3, rs_latch, t_ff, verify_device, DeviceKind,
    DeviceTrace,
};
use crate::signal::{Bit, Instant, Signal, Time};
use crate::solver::{
    equation5_holds_at, holds_equation5, holds_system, initial_constraint, interval_oracle, solve, system_holds_at,
};
use crate::waveform::WaveformDoc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FuzzConfig {
    pub seed: u64,
    pub cases: u64,
    pub max_toggles: usize,
    pub horizon: Time,
}

/// The generator for one case.
pub fn case_rng(seed: u64, case: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case);
    rng
}

/// Uniform initial bit and up to `max_toggles` toggles at distinct ticks.
pub fn random_signal(rng: &mut impl Rng, max_toggles: usize, horizon: Time) -> Signal {
    let h = horizon.ticks() as usize;
    let count = rng.gen_range(0..=max_toggles.min(h));
    let mut toggles: Vec<Time> = sample(rng, h, count).into_iter().map(|t| Time(t as u64)).collect();
    toggles.sort_unstable();
    Signal::from_intervals(rng.gen(), toggles, horizon).expect("sorted distinct ticks below the horizon")
}

/// Draws `u` and `v` freely, then clears `v` wherever `u` is 1.
pub fn random_admissible_pair(rng: &mut impl Rng, max_toggles: usize, horizon: Time) -> (Signal, Signal) {
    let u = random_signal(rng, max_toggles, horizon);
    let v = random_signal(rng, max_toggles, horizon);
    let v = v.and(&u.not()).expect("same horizon");
    (u, v)
}

/// A random feasible initial value for the pair.
pub fn random_init(rng: &mut impl Rng, u: &Signal, v: &Signal) -> Bit {
    let constraint = initial_constraint(u, v).expect("admissible pair");
    constraint.forced().unwrap_or_else(|| rng.gen())
}

/// Random `(init_p, init_q)` consistent with a master-slave device at its
/// pre-history. `master` maps `Q(0-0)` to the master's (set, reset) there.
pub fn random_stage_inits(rng: &mut impl Rng, c: &Signal, master: impl Fn(Bit) -> (Bit, Bit)) -> (Bit, Bit) {
    if c.initial() {
        let q: Bit = rng.gen();
        let p = match master(q) {
            (true, _) => true,
            (_, true) => false,
            _ => rng.gen(),
        };
        (p, q)
    } else {
        let p: Bit = rng.gen();
        (p, p)
    }
}

/// Result of one property on one case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail(String),
    /// The case does not meet the property's preconditions.
    Discard,
}

/// Signals of one fuzz case: an admissible pair `u`, `v`, an arbitrary
/// candidate state `x`, a clock `C` and two data inputs `D`, `E`.
pub const CASE_NAMES: [&str; 6] = ["u", "v", "x", "C", "D", "E"];

pub type Case = Vec<Signal>;

pub fn generate_case(config: &FuzzConfig, index: u64) -> Case {
    let mut rng = case_rng(config.seed, index);
    let (u, v) = random_admissible_pair(&mut rng, config.max_toggles, config.horizon);
    let mut rest: Vec<Signal> = (0..4).map(|_| random_signal(&mut rng, config.max_toggles, config.horizon)).collect();
    let mut case = vec![u, v];
    case.append(&mut rest);
    case
}

pub struct Property {
    pub name: &'static str,
    pub check: fn(&[Signal]) -> Outcome,
}

fn fail(msg: impl Into<String>) -> Outcome {
    Outcome::Fail(msg.into())
}

fn equivalence(case: &[Signal]) -> Outcome {
    let (u, v, x) = (&case[0], &case[1], &case[2]);
    if u.and(v).map_or(true, |uv| uv != Signal::constant(false, u.horizon())) {
        return Outcome::Discard;
    }
    let sys = holds_system(u, v, x).expect("same horizon");
    let eq5 = holds_equation5(u, v, x).expect("same horizon");
    if sys.holds() != eq5.holds() || sys.failure_point() != eq5.failure_point() {
        return fail(format!("system {sys} but equation {eq5}"));
    }
    for at in Instant::sweep(u.horizon()) {
        if system_holds_at(u, v, x, at) != equation5_holds_at(u, v, x, at) {
            return fail(format!("pointwise verdicts differ at {at}"));
        }
    }
    Outcome::Pass
}

fn solver_soundness(case: &[Signal]) -> Outcome {
    let (u, v) = (&case[0], &case[1]);
    let Ok(constraint) = initial_constraint(u, v) else { return Outcome::Discard };
    for init in constraint.feasible() {
        let x = match solve(u, v, init) {
            Ok(s) => s.x,
            Err(e) => return fail(format!("solve(init={}) failed: {e}", u8::from(init))),
        };
        let sys = holds_system(u, v, &x).expect("same horizon");
        if !sys.holds() {
            return fail(format!("solution violates the system: {sys}"));
        }
        let eq5 = holds_equation5(u, v, &x).expect("same horizon");
        if !eq5.holds() {
            return fail(format!("solution violates the single equation: {eq5}"));
        }
        match interval_oracle(u, v, init) {
            Ok(o) if o == x => {}
            Ok(o) => return fail(format!("solve gives {x}, sweep gives {o}")),
            Err(e) => return fail(format!("sweep failed: {e}")),
        }
    }
    Outcome::Pass
}

/// First tick from which two solutions agree, and whether they stay equal
/// from there on.
pub fn coincide_after_first_agreement(x: &Signal, y: &Signal) -> Result<(), Time> {
    let (xs, ys) = (x.samples(), y.samples());
    let Some(first) = xs.iter().zip(&ys).position(|(a, b)| a == b) else { return Ok(()) };
    match (first..xs.len()).find(|&t| xs[t] != ys[t]) {
        Some(t) => Err(Time(t as u64)),
        None if x.final_value() != y.final_value() => Err(x.horizon()),
        None => Ok(()),
    }
}

fn two_solutions(case: &[Signal]) -> Outcome {
    let (u, v) = (&case[0], &case[1]);
    match initial_constraint(u, v) {
        Ok(c) if c.forced().is_none() => {}
        _ => return Outcome::Discard,
    }
    let (x0, x1) = match (solve(u, v, false), solve(u, v, true)) {
        (Ok(a), Ok(b)) => (a, b),
        _ => return fail("a free pair rejected an initial value"),
    };
    if let (Some(t0), Some(t0p)) = (x0.schedule.times.first(), x1.schedule.times.first()) {
        if t0 == t0p {
            return fail(format!("t0 = t0' = {t0}"));
        }
    }
    match coincide_after_first_agreement(&x0.x, &x1.x) {
        Ok(()) => Outcome::Pass,
        Err(t) => fail(format!("solutions diverge again at {t}")),
    }
}

fn check_trace(kind: DeviceKind, trace: &DeviceTrace) -> Result<(), String> {
    match verify_device(kind, trace) {
        Ok(v) if v.holds() => Ok(()),
        Ok(v) => Err(format!("{kind} trace: equation {v}")),
        Err(e) => Err(format!("{kind} trace: {e}")),
    }
}

fn falling_edge_only(trace: &DeviceTrace, c: &Signal) -> Result<(), String> {
    let falls = c.falling_edges();
    match trace.q.toggles().iter().find(|&&t| !falls.contains(t)) {
        Some(t) => Err(format!("Q switches at {t}, not a falling edge of C")),
        None => Ok(()),
    }
}

fn devices(case: &[Signal]) -> Outcome {
    let (u, v, x, c, d, e) = (&case[0], &case[1], &case[2], &case[3], &case[4], &case[5]);
    // initial states are drawn from a stream keyed by the case content so
    // that shrinking re-evaluates a candidate deterministically
    let key = case.iter().flat_map(|s| s.toggles()).fold(0u64, |acc, t| acc.rotate_left(7) ^ t.ticks());
    let mut rng = case_rng(key, 0);
    let named = |pairs: &[(&str, &Signal)]| -> Vec<(String, Signal)> {
        pairs.iter().map(|(n, s)| ((*n).to_owned(), (*s).clone())).collect()
    };

    let mut run = || -> Result<(), String> {
        // single latches
        let init = random_init(&mut rng, &u.and(x).unwrap(), &u.not().and(&x.not()).unwrap());
        let q = c_element(&[u.clone(), x.clone()], init).map_err(|e| e.to_string())?;
        check_trace(DeviceKind::CElement, &DeviceTrace::new(named(&[("u", u), ("x", x)]), q, None))?;

        let init = random_init(&mut rng, u, v);
        let q = rs_latch(v, u, init).map_err(|e| e.to_string())?;
        check_trace(DeviceKind::Rs, &DeviceTrace::new(named(&[("R", v), ("S", u)]), q, None))?;

        let (sc, rc) = (u.and(c).unwrap(), v.and(c).unwrap());
        let init = random_init(&mut rng, &sc, &rc);
        let q = clocked_rs(v, u, c, init).map_err(|e| e.to_string())?;
        check_trace(DeviceKind::ClockedRs, &DeviceTrace::new(named(&[("R", v), ("S", u), ("C", c)]), q, None))?;

        let init = random_init(&mut rng, &d.and(c).unwrap(), &d.not().and(c).unwrap());
        let q = d_latch(d, c, init).map_err(|e| e.to_string())?;
        check_trace(DeviceKind::DLatch, &DeviceTrace::new(named(&[("D", d), ("C", c)]), q, None))?;

        // master-slave devices
        let (p, q) = random_stage_inits(&mut rng, c, |_| (u.initial(), v.initial()));
        let t = edge_rs_ff(v, u, c, p, q).map_err(|e| e.to_string())?;
        check_trace(DeviceKind::EdgeRs, &t)?;
        falling_edge_only(&t, c)?;

        let (p, q) = random_stage_inits(&mut rng, c, |_| (d.initial(), !d.initial()));
        let t = d_ff(d, c, p, q).map_err(|e| e.to_string())?;
        check_trace(DeviceKind::Dff, &t)?;
        falling_edge_only(&t, c)?;
        for fall in c.falling_edges().times() {
            if t.q.eval(*fall) != d.left_limit(*fall) {
                return Err(format!("D flip-flop did not capture D({fall}-0)"));
            }
        }

        let (p, q) = random_stage_inits(&mut rng, c, |q| (d.initial() && !q, e.initial() && q));
        let t = jk_ff(d, e, c, p, q).map_err(|e| e.to_string())?;
        check_trace(DeviceKind::Jk, &t)?;
        falling_edge_only(&t, c)?;

        let (p, q) = random_stage_inits(&mut rng, c, |q| {
            let dv = (d.initial() && !q) || (!e.initial() && q);
            (dv, !dv)
        });
        let t = jk_ff_variant3(d, e, c, p, q).map_err(|e| e.to_string())?;
        check_trace(DeviceKind::Jk3, &t)?;
        falling_edge_only(&t, c)?;

        let (p, q) = random_stage_inits(&mut rng, c, |q| (!q, q));
        let t = t_ff(c, p, q).map_err(|e| e.to_string())?;
        check_trace(DeviceKind::T, &t)?;
        falling_edge_only(&t, c)?;
        if t.q.toggles().len() != c.falling_edges().len() {
            return Err("T flip-flop missed a falling edge".into());
        }
        Ok(())
    };
    if u.and(v).map_or(true, |uv| uv != Signal::constant(false, u.horizon())) {
        return Outcome::Discard;
    }
    match run() {
        Ok(()) => Outcome::Pass,
        Err(msg) => Outcome::Fail(msg),
    }
}

pub const PROPERTIES: [Property; 4] = [
    Property { name: "system-equation-equivalence", check: equivalence },
    Property { name: "solver-soundness", check: solver_soundness },
    Property { name: "two-solution-coincidence", check: two_solutions },
    Property { name: "device-closed-forms", check: devices },
];

/// Greedily removes toggles while the property keeps failing.
pub fn shrink(case: &[Signal], check: fn(&[Signal]) -> Outcome) -> Case {
    let mut best = case.to_vec();
    loop {
        let mut improved = false;
        'signals: for i in 0..best.len() {
            for k in 0..best[i].toggles().len() {
                let mut candidate = best.clone();
                let s = &best[i];
                let mut toggles = s.toggles().to_vec();
                toggles.remove(k);
                candidate[i] = Signal::from_intervals(s.initial(), toggles, s.horizon()).expect("subset of toggles");
                if matches!(check(&candidate), Outcome::Fail(_)) {
                    best = candidate;
                    improved = true;
                    break 'signals;
                }
            }
        }
        if !improved {
            return best;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub case: u64,
    pub property: &'static str,
    pub message: String,
    pub doc: WaveformDoc,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzReport {
    pub cases: u64,
    pub discarded: u64,
    pub failure: Option<Counterexample>,
}

fn case_doc(case: &[Signal], horizon: Time) -> WaveformDoc {
    let mut doc = WaveformDoc::new(horizon);
    for (name, signal) in CASE_NAMES.iter().zip(case) {
        doc.push(name, signal.clone()).expect("distinct valid names");
    }
    doc
}

/// Runs `properties` on every case; the reported counterexample is the
/// lowest failing case index, shrunk.
pub fn run_properties(config: &FuzzConfig, properties: &[Property]) -> FuzzReport {
    let outcomes: Vec<(u64, Option<(usize, String)>)> = (0..config.cases)
        .into_par_iter()
        .map(|index| {
            let case = generate_case(config, index);
            let mut discarded = 0;
            for (p, property) in properties.iter().enumerate() {
                match (property.check)(&case) {
                    Outcome::Pass => {}
                    Outcome::Discard => discarded += 1,
                    Outcome::Fail(msg) => return (discarded, Some((p, msg))),
                }
            }
            (discarded, None)
        })
        .collect();

    let discarded = outcomes.iter().map(|(d, _)| d).sum();
    let failure = outcomes.into_iter().enumerate().find_map(|(index, (_, failed))| {
        let (p, _) = failed?;
        let property = &properties[p];
        let shrunk = shrink(&generate_case(config, index as u64), property.check);
        let message = match (property.check)(&shrunk) {
            Outcome::Fail(msg) => msg,
            _ => unreachable!("shrinking keeps the case failing"),
        };
        Some(Counterexample {
            case: index as u64,
            property: property.name,
            message,
            doc: case_doc(&shrunk, config.horizon),
        })
    });
    FuzzReport { cases: config.cases, discarded, failure }
}

pub fn run_fuzz(config: &FuzzConfig) -> FuzzReport {
    run_properties(config, &PROPERTIES)
}
