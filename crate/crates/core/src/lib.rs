//! Ideal (non-inertial) latches over piecewise-constant Boolean signals.
//!
//! - [`signal`]: signals, left limits, edge sets and pointwise operators.
//! - [`solver`]: the general latch system, its constructive solution and
//!   its single-equation form.
//! - [`devices`]: C element, RS/clocked RS/D latches, edge-triggered RS, D,
//!   JK and T flip-flops, and the inertial RS latch.
//! - [`waveform`]: the text waveform format and VCD export.
//! - [`fuzz`]: seeded generators and the randomized property suite.

pub mod devices;
pub mod fuzz;
pub mod signal;
pub mod solver;
pub mod waveform;

pub use devices::{DeviceError, DeviceKind, DeviceTrace, InertialParams};
pub use signal::{Bit, EdgeSet, Instant, Signal, SignalError, Time};
pub use solver::{EdgeSchedule, InitialConstraint, LatchSolution, SolverError, Verdict};
pub use waveform::WaveformDoc;
