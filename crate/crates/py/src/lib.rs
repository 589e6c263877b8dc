//! Python bindings: the `Signal` type, the latch solver, device models and
//! checks, waveform documents and the fuzz harness.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use ideal_latches::devices::{self, DeviceKind, DeviceTrace, InertialParams};
use ideal_latches::fuzz::{self, FuzzConfig};
use ideal_latches::solver;
use ideal_latches::waveform::{self, WaveformDoc};
use ideal_latches::{Signal, Time};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Piecewise-constant boolean signal on ticks `0..horizon`, stored as an
/// initial value and strictly increasing toggle ticks.
#[pyclass(name = "Signal", module = "ideal_latches", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PySignal(Signal);

#[pymethods]
impl PySignal {
    #[new]
    #[pyo3(signature = (initial, toggles, horizon))]
    fn new(initial: bool, toggles: Vec<u64>, horizon: u64) -> PyResult<Self> {
        Signal::from_ticks(initial, &toggles, horizon).map(PySignal).map_err(value_error)
    }

    #[staticmethod]
    fn constant(value: bool, horizon: u64) -> Self {
        PySignal(Signal::constant(value, Time(horizon)))
    }

    /// Indicator of `[start, end)`, clipped to the horizon.
    #[staticmethod]
    fn indicator(start: u64, end: u64, horizon: u64) -> Self {
        PySignal(Signal::indicator(Time(start), Time(end), Time(horizon)))
    }

    #[staticmethod]
    fn from_samples(initial: bool, samples: Vec<bool>) -> Self {
        PySignal(Signal::from_samples(initial, &samples))
    }

    #[getter]
    fn initial(&self) -> bool {
        self.0.initial()
    }

    #[getter]
    fn toggles(&self) -> Vec<u64> {
        self.0.toggles().iter().map(|t| t.ticks()).collect()
    }

    #[getter]
    fn horizon(&self) -> u64 {
        self.0.horizon().ticks()
    }

    fn eval(&self, t: u64) -> bool {
        self.0.eval(Time(t))
    }

    fn left_limit(&self, t: u64) -> bool {
        self.0.left_limit(Time(t))
    }

    fn samples(&self) -> Vec<bool> {
        self.0.samples()
    }

    fn rising_edges(&self) -> Vec<u64> {
        self.0.rising_edges().times().iter().map(|t| t.ticks()).collect()
    }

    fn falling_edges(&self) -> Vec<u64> {
        self.0.falling_edges().times().iter().map(|t| t.ticks()).collect()
    }

    fn __invert__(&self) -> Self {
        PySignal(self.0.not())
    }

    fn __and__(&self, other: PyRef<'_, PySignal>) -> PyResult<Self> {
        self.0.and(&other.0).map(PySignal).map_err(value_error)
    }

    fn __or__(&self, other: PyRef<'_, PySignal>) -> PyResult<Self> {
        self.0.or(&other.0).map(PySignal).map_err(value_error)
    }

    fn __xor__(&self, other: PyRef<'_, PySignal>) -> PyResult<Self> {
        self.0.xor(&other.0).map(PySignal).map_err(value_error)
    }

    /// 1 at `t` when the signal has been 1 throughout `[t - d, t]`.
    fn window_and(&self, d: u64) -> Self {
        PySignal(self.0.window_and(Time(d)))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Signal({}, {:?}, {})", if self.0.initial() { "True" } else { "False" }, self.toggles(), self.horizon())
    }
}

/// Solution `x` of the latch system for inputs `u`, `v` and initial state.
#[pyfunction]
fn solve(u: PyRef<'_, PySignal>, v: PyRef<'_, PySignal>, init: bool) -> PyResult<PySignal> {
    solver::solve(&u.0, &v.0, init).map(|s| PySignal(s.x)).map_err(value_error)
}

/// Toggle times of the solution, alternating rises of `u` and `v`.
#[pyfunction]
fn edge_schedule(u: PyRef<'_, PySignal>, v: PyRef<'_, PySignal>, init: bool) -> PyResult<Vec<u64>> {
    let schedule = solver::edge_schedule(&u.0, &v.0, init).map_err(value_error)?;
    Ok(schedule.times.iter().map(|t| t.ticks()).collect())
}

/// Initial states admitted by the inputs: `[0, 1]`, `[0]` or `[1]`.
#[pyfunction]
fn feasible_inits(u: PyRef<'_, PySignal>, v: PyRef<'_, PySignal>) -> PyResult<Vec<bool>> {
    Ok(solver::initial_constraint(&u.0, &v.0).map_err(value_error)?.feasible())
}

#[pyfunction]
fn holds_system(u: PyRef<'_, PySignal>, v: PyRef<'_, PySignal>, x: PyRef<'_, PySignal>) -> PyResult<bool> {
    Ok(solver::holds_system(&u.0, &v.0, &x.0).map_err(value_error)?.holds())
}

#[pyfunction]
fn holds_equation5(u: PyRef<'_, PySignal>, v: PyRef<'_, PySignal>, x: PyRef<'_, PySignal>) -> PyResult<bool> {
    Ok(solver::holds_equation5(&u.0, &v.0, &x.0).map_err(value_error)?.holds())
}

/// Both verdicts as text, e.g. `system: holds, eq5: holds`.
#[pyfunction]
fn check(u: PyRef<'_, PySignal>, v: PyRef<'_, PySignal>, x: PyRef<'_, PySignal>) -> PyResult<String> {
    let sys = solver::holds_system(&u.0, &v.0, &x.0).map_err(value_error)?;
    let eq5 = solver::holds_equation5(&u.0, &v.0, &x.0).map_err(value_error)?;
    Ok(format!("system: {sys}, eq5: {eq5}"))
}

fn device_kind(kind: &str, d_r: u64, d_f: u64) -> PyResult<DeviceKind> {
    let params = InertialParams { d_r: Time(d_r), d_f: Time(d_f) };
    DeviceKind::from_token(kind, params)
        .ok_or_else(|| value_error(format!("unknown device {kind:?}, expected one of {:?}", DeviceKind::TOKENS)))
}

fn named_inputs(inputs: &Bound<'_, PyDict>) -> PyResult<Vec<(String, Signal)>> {
    inputs
        .iter()
        .map(|(name, signal)| Ok((name.extract::<String>()?, signal.extract::<PyRef<'_, PySignal>>()?.0.clone())))
        .collect()
}

/// Runs a device on named inputs (`{"R": r, "S": s}` etc.). Returns
/// `(Q, P)`, with `P` None for single latches.
#[pyfunction]
#[pyo3(signature = (kind, inputs, init_q, init_p=None, d_r=0, d_f=0))]
fn run_device(
    kind: &str,
    inputs: &Bound<'_, PyDict>,
    init_q: bool,
    init_p: Option<bool>,
    d_r: u64,
    d_f: u64,
) -> PyResult<(PySignal, Option<PySignal>)> {
    let kind = device_kind(kind, d_r, d_f)?;
    let trace = devices::run_device(kind, &named_inputs(inputs)?, init_p, init_q).map_err(value_error)?;
    Ok((PySignal(trace.q), trace.p.map(PySignal)))
}

/// Checks a trace against the device's closed-form equation. Returns None
/// when it holds, otherwise a description of the earliest failure.
#[pyfunction]
#[pyo3(signature = (kind, inputs, q, p=None, d_r=0, d_f=0))]
fn verify_device(
    kind: &str,
    inputs: &Bound<'_, PyDict>,
    q: PyRef<'_, PySignal>,
    p: Option<PyRef<'_, PySignal>>,
    d_r: u64,
    d_f: u64,
) -> PyResult<Option<String>> {
    let kind = device_kind(kind, d_r, d_f)?;
    let trace = DeviceTrace::new(named_inputs(inputs)?, q.0.clone(), p.map(|p| p.0.clone()));
    let verdict = devices::verify_device(kind, &trace).map_err(value_error)?;
    Ok((!verdict.holds()).then(|| verdict.to_string()))
}

type Entries = Vec<(String, PySignal)>;

/// Parses a waveform document into `(horizon, [(name, Signal), ...])`.
#[pyfunction]
fn parse_waveforms(text: &str) -> PyResult<(u64, Entries)> {
    let doc = waveform::parse_waveforms(text).map_err(value_error)?;
    let entries = doc.entries().iter().map(|(n, s)| (n.clone(), PySignal(s.clone()))).collect();
    Ok((doc.horizon().ticks(), entries))
}

fn build_doc(horizon: u64, entries: Vec<(String, PyRef<'_, PySignal>)>) -> PyResult<WaveformDoc> {
    let mut doc = WaveformDoc::new(Time(horizon));
    for (name, signal) in entries {
        doc.push(&name, signal.0.clone()).map_err(value_error)?;
    }
    Ok(doc)
}

#[pyfunction]
fn format_waveforms(horizon: u64, entries: Vec<(String, PyRef<'_, PySignal>)>) -> PyResult<String> {
    Ok(waveform::format_waveforms(&build_doc(horizon, entries)?))
}

#[pyfunction]
fn emit_vcd(horizon: u64, entries: Vec<(String, PyRef<'_, PySignal>)>) -> PyResult<String> {
    waveform::emit_vcd(&build_doc(horizon, entries)?).map_err(value_error)
}

/// Runs the property suite. Returns None when every case passes, otherwise
/// `(property, case, message, counterexample_document)`.
#[pyfunction]
fn run_fuzz(
    py: Python<'_>,
    seed: u64,
    cases: u64,
    max_toggles: usize,
    horizon: u64,
) -> PyResult<Option<(String, u64, String, String)>> {
    if cases == 0 || max_toggles == 0 || horizon == 0 {
        return Err(value_error("cases, max_toggles and horizon must be positive"));
    }
    let config = FuzzConfig { seed, cases, max_toggles, horizon: Time(horizon) };
    let report = py.detach(|| fuzz::run_fuzz(&config));
    Ok(report.failure.map(|cx| (cx.property.to_owned(), cx.case, cx.message, waveform::format_waveforms(&cx.doc))))
}

#[pymodule]
#[pyo3(name = "ideal_latches")]
fn init_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySignal>()?;
    m.add("DEVICES", DeviceKind::TOKENS.to_vec())?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(edge_schedule, m)?)?;
    m.add_function(wrap_pyfunction!(feasible_inits, m)?)?;
    m.add_function(wrap_pyfunction!(holds_system, m)?)?;
    m.add_function(wrap_pyfunction!(holds_equation5, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(run_device, m)?)?;
    m.add_function(wrap_pyfunction!(verify_device, m)?)?;
    m.add_function(wrap_pyfunction!(parse_waveforms, m)?)?;
    m.add_function(wrap_pyfunction!(format_waveforms, m)?)?;
    m.add_function(wrap_pyfunction!(emit_vcd, m)?)?;
    m.add_function(wrap_pyfunction!(run_fuzz, m)?)?;
    Ok(())
}
