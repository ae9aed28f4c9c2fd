//! Simulation of checked models.
//!
//! Atomic components are executed in their bound form ([`BoundComponent`]).
//! Composed components are flattened into a [`System`] of atomic instances
//! whose in-ports are wired directly to the out-port (or external input)
//! that ultimately drives them.

mod choose;
mod ed;
mod eval;
mod system;
mod text;
mod ts;

use thiserror::Error;

pub use choose::{Chooser, FirstDeclared, Policy, Replay, Seeded};
pub use ed::{run_ed, step_ed, Emissions, Event, EventStep, EventTrace};
pub use eval::{enabled, eval_guard, fire, match_input, Env, Firing};
pub use system::{ComponentState, Instance, Source, System, SystemState};
pub use text::{event_log, parse_cell, parse_script, parse_stimulus, trace_tsv};
pub use ts::{enumerate_ts, run_ts, CycleRecord, InstanceSnapshot, PortValuation, Trace};

pub use crate::model::{BoundComponent, Value};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExecError {
    #[error("unknown main component `{0}`")]
    UnknownMain(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("cannot execute `{component}`: {message}")]
    Bind { component: String, message: String },
    #[error("`{0}` has an automaton without an initial state")]
    NoInitialState(String),
    #[error("`{0}` is not an input port of the main component")]
    UnknownPort(String),
    #[error("value `{value}` does not conform to port `{port}`")]
    TypeMismatch { port: String, value: String },
    #[error("forwarding absent message from port `{port}` (line {line})")]
    AbsentForward { port: String, line: u32 },
    #[error("more than one message on port `{port}` in one cycle (line {line})")]
    SequenceInTs { port: String, line: u32 },
    #[error("integer overflow (line {line})")]
    Overflow { line: u32 },
    #[error("behavior enumeration exceeded the bound of {0}")]
    BoundExceeded(usize),
    #[error("cycle {cycle}: {source}")]
    AtCycle {
        cycle: usize,
        #[source]
        source: Box<ExecError>,
    },
}

impl ExecError {
    pub(crate) fn at_cycle(self, cycle: usize) -> ExecError {
        match self {
            e @ (ExecError::AtCycle { .. } | ExecError::BoundExceeded(_)) => e,
            e => ExecError::AtCycle {
                cycle,
                source: Box::new(e),
            },
        }
    }
}
