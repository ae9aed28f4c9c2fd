use std::collections::{BTreeMap, HashSet};

use super::choose::{Chooser, Policy, Replay};
use super::system::{System, SystemState};
use super::ExecError;
use crate::model::{ResolvedModel, TypeRef, Value};

/// One cycle's input cells by port name; a missing entry means absent.
pub type PortValuation = BTreeMap<String, Option<Value>>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InstanceSnapshot {
    pub path: String,
    /// `None` for a component without automaton.
    pub state: Option<String>,
    pub vars: Vec<(String, Value)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleRecord {
    /// 1-based.
    pub cycle: usize,
    /// In-port valuation as fed, in port declaration order.
    pub inputs: Vec<Option<Value>>,
    /// Out-port valuation as observed in this cycle.
    pub outputs: Vec<Option<Value>>,
    /// States after this cycle.
    pub states: Vec<InstanceSnapshot>,
}

impl CycleRecord {
    /// `State` for an atomic main, `path:State;...` for a composed one, `-`
    /// where there is no automaton.
    pub fn state_text(&self) -> String {
        let one = |s: &InstanceSnapshot| s.state.clone().unwrap_or_else(|| "-".to_string());
        match self.states.as_slice() {
            [s] if s.path.is_empty() => one(s),
            many => many
                .iter()
                .map(|s| format!("{}:{}", s.path, one(s)))
                .collect::<Vec<_>>()
                .join(";"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Trace {
    pub in_ports: Vec<String>,
    pub out_ports: Vec<String>,
    pub records: Vec<CycleRecord>,
}

impl Trace {
    /// The values of out-port `port`, one per cycle.
    pub fn output_column(&self, port: &str) -> Option<Vec<Option<Value>>> {
        let i = self.out_ports.iter().position(|p| p == port)?;
        Some(self.records.iter().map(|r| r.outputs[i].clone()).collect())
    }
}

impl System {
    fn external_rows(&self, stimulus: &[PortValuation], cycles: usize) -> Result<Vec<Vec<Option<Value>>>, ExecError> {
        for row in stimulus {
            for (name, v) in row {
                let Some((_, ty)) = self.in_ports.iter().find(|(p, _)| p == name) else {
                    return Err(ExecError::UnknownPort(name.clone()));
                };
                if let Some(v) = v {
                    let declared = match v {
                        Value::Enum { lit, .. } => matches!(
                            ty,
                            TypeRef::Enum(q) if self.literals.get(q).is_some_and(|l| l.contains(lit))
                        ),
                        _ => true,
                    };
                    if !v.conforms_to(ty) || !declared {
                        return Err(ExecError::TypeMismatch {
                            port: name.clone(),
                            value: v.to_string(),
                        });
                    }
                }
            }
        }
        Ok((0..cycles)
            .map(|t| {
                self.in_ports
                    .iter()
                    .map(|(p, _)| stimulus.get(t).and_then(|row| row.get(p).cloned().flatten()))
                    .collect()
            })
            .collect())
    }

    fn record(&self, cycle: usize, inputs: &[Option<Value>], observed: Vec<Option<Value>>, after: &SystemState) -> CycleRecord {
        let states = self
            .instances
            .iter()
            .zip(&after.instances)
            .map(|(inst, cs)| InstanceSnapshot {
                path: inst.path.clone(),
                state: cs.state.map(|s| inst.component.states[s].clone()),
                vars: inst
                    .component
                    .vars
                    .iter()
                    .zip(&cs.vars)
                    .map(|(d, v)| (d.name.clone(), v.clone()))
                    .collect(),
            })
            .collect();
        CycleRecord {
            cycle,
            inputs: inputs.to_vec(),
            outputs: observed,
            states,
        }
    }

    fn empty_trace(&self) -> Trace {
        Trace {
            in_ports: self.in_ports.iter().map(|(p, _)| p.clone()).collect(),
            out_ports: self.out_ports.iter().map(|(p, _)| p.clone()).collect(),
            records: Vec::new(),
        }
    }

    /// Runs `cycles` cycles. Cycle 1 observes the initial outputs.
    pub fn run_ts(
        &self,
        stimulus: &[PortValuation],
        cycles: usize,
        chooser: &mut dyn Chooser,
    ) -> Result<Trace, ExecError> {
        let rows = self.external_rows(stimulus, cycles)?;
        let mut trace = self.empty_trace();
        let mut st = self.initial(chooser).map_err(|e| e.at_cycle(1))?;
        for (t, ext) in rows.iter().enumerate() {
            let observed = self.observed(&st);
            st = self.step_ts(&st, ext, chooser).map_err(|e| e.at_cycle(t + 1))?;
            trace.records.push(self.record(t + 1, ext, observed, &st));
        }
        Ok(trace)
    }

    /// Every trace reachable under some resolution of the choices, sorted.
    /// Fails once more than `bound` distinct partial runs are alive.
    pub fn enumerate_ts(&self, stimulus: &[PortValuation], cycles: usize, bound: usize) -> Result<Vec<Trace>, ExecError> {
        let rows = self.external_rows(stimulus, cycles)?;
        let mut frontier: Vec<(Trace, SystemState)> = Vec::new();
        for st in expand(bound, |r| self.initial(r)).map_err(|e| e.at_cycle(1))? {
            frontier.push((self.empty_trace(), st));
        }
        for (t, ext) in rows.iter().enumerate() {
            let mut seen = HashSet::new();
            let mut next = Vec::new();
            for (trace, st) in &frontier {
                let observed = self.observed(st);
                for after in expand(bound, |r| self.step_ts(st, ext, r)).map_err(|e| e.at_cycle(t + 1))? {
                    let mut tr = trace.clone();
                    tr.records.push(self.record(t + 1, ext, observed.clone(), &after));
                    if seen.insert((tr.clone(), after.clone())) {
                        next.push((tr, after));
                        if next.len() > bound {
                            return Err(ExecError::BoundExceeded(bound));
                        }
                    }
                }
            }
            frontier = next;
        }
        let mut traces: Vec<Trace> = frontier.into_iter().map(|(t, _)| t).collect();
        traces.sort();
        traces.dedup();
        Ok(traces)
    }
}

// All results of `f` over every resolution of its choices.
fn expand<T>(bound: usize, mut f: impl FnMut(&mut Replay) -> Result<T, ExecError>) -> Result<Vec<T>, ExecError> {
    let mut r = Replay::new();
    let mut out = Vec::new();
    loop {
        out.push(f(&mut r)?);
        if out.len() > bound {
            return Err(ExecError::BoundExceeded(bound));
        }
        if !r.advance() {
            return Ok(out);
        }
    }
}

/// Runs `main` for `cycles` cycles. [`Policy::Exhaustive`] is rejected; use
/// [`enumerate_ts`].
pub fn run_ts(
    model: &ResolvedModel,
    main: &str,
    stimulus: &[PortValuation],
    cycles: usize,
    policy: Policy,
) -> Result<Trace, ExecError> {
    let sys = System::new(model, main)?;
    let mut chooser = policy
        .chooser()
        .ok_or_else(|| ExecError::Unsupported("exhaustive policy in a single run".into()))?;
    sys.run_ts(stimulus, cycles, chooser.as_mut())
}

pub fn enumerate_ts(
    model: &ResolvedModel,
    main: &str,
    stimulus: &[PortValuation],
    cycles: usize,
    bound: usize,
) -> Result<Vec<Trace>, ExecError> {
    System::new(model, main)?.enumerate_ts(stimulus, cycles, bound)
}
