use super::choose::{Chooser, Policy};
use super::eval::{enabled, fire, Env};
use super::system::ComponentState;
use super::ExecError;
use crate::model::{bind, BoundComponent, ResolvedModel, Value};
use crate::syntax::Direction;

/// A message arriving on an in-port.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event {
    pub port: String,
    pub value: Value,
}

/// Per port, in output-block order, the values sent.
pub type Emissions = Vec<(String, Vec<Value>)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventStep {
    pub event: Event,
    pub emissions: Emissions,
    pub state: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventTrace {
    pub initial_state: String,
    pub initial_emissions: Emissions,
    pub steps: Vec<EventStep>,
}

/// Consumes one event. Without an enabled transition the event is dropped
/// and nothing changes.
pub fn step_ed(
    c: &BoundComponent,
    cs: &ComponentState,
    port: usize,
    value: &Value,
    chooser: &mut dyn Chooser,
) -> Result<(ComponentState, Emissions), ExecError> {
    let Some(state) = cs.state else {
        return Ok((cs.clone(), Vec::new()));
    };
    let mut inputs = vec![None; c.ports.len()];
    inputs[port] = Some(value.clone());
    let env = Env { inputs: &inputs, vars: &cs.vars };
    let en = enabled(c, state, env)?;
    let pick = match en.len() {
        0 => return Ok((cs.clone(), Vec::new())),
        1 => en[0],
        n => en[chooser.choose(n)],
    };
    let t = &c.transitions[pick];
    let f = fire(c, &t.outputs, env, chooser, t.line)?;
    let next = ComponentState {
        state: Some(t.target),
        vars: f.vars,
    };
    Ok((next, named(c, f.emissions)))
}

fn named(c: &BoundComponent, emissions: Vec<(usize, Vec<Value>)>) -> Emissions {
    emissions
        .into_iter()
        .filter(|(_, v)| !v.is_empty())
        .map(|(p, v)| (c.ports[p].name.clone(), v))
        .collect()
}

fn state_name(c: &BoundComponent, cs: &ComponentState) -> String {
    cs.state.map_or_else(|| "-".to_string(), |s| c.states[s].clone())
}

/// Processes `script` in order, one event at a time, after emitting the
/// initial output.
pub fn run_ed(model: &ResolvedModel, main: &str, script: &[Event], policy: Policy) -> Result<EventTrace, ExecError> {
    let ct = model
        .find_component(main)
        .ok_or_else(|| ExecError::UnknownMain(main.to_string()))?;
    if !ct.is_atomic() {
        return Err(ExecError::Unsupported(format!(
            "event-driven execution of composed component `{}`",
            ct.name
        )));
    }
    let c = bind(ct, model).map_err(|message| ExecError::Bind {
        component: ct.display_name(),
        message,
    })?;
    let mut chooser = policy
        .chooser()
        .ok_or_else(|| ExecError::Unsupported("exhaustive policy in a single run".into()))?;
    let chooser = chooser.as_mut();

    let mut ports = Vec::with_capacity(script.len());
    for ev in script {
        let idx = c
            .port_index(&ev.port)
            .filter(|&i| c.ports[i].direction == Direction::In)
            .ok_or_else(|| ExecError::UnknownPort(ev.port.clone()))?;
        if !ev.value.is_value_of(&c.ports[idx].ty, model) {
            return Err(ExecError::TypeMismatch {
                port: ev.port.clone(),
                value: ev.value.to_string(),
            });
        }
        ports.push(idx);
    }

    let vars: Vec<Value> = c.vars.iter().map(|v| v.initial.clone()).collect();
    let (mut cs, initial_emissions) = if c.states.is_empty() {
        (ComponentState { state: None, vars }, Vec::new())
    } else {
        let init = match c.initials.len() {
            0 => return Err(ExecError::NoInitialState(c.name.clone())),
            1 => &c.initials[0],
            n => &c.initials[chooser.choose(n)],
        };
        let inputs = vec![None; c.ports.len()];
        let f = fire(&c, &init.outputs, Env { inputs: &inputs, vars: &vars }, chooser, 0)?;
        (
            ComponentState {
                state: Some(init.state),
                vars: f.vars,
            },
            named(&c, f.emissions),
        )
    };
    let mut trace = EventTrace {
        initial_state: state_name(&c, &cs),
        initial_emissions,
        steps: Vec::new(),
    };
    for (ev, &port) in script.iter().zip(&ports) {
        let (next, emissions) = step_ed(&c, &cs, port, &ev.value, chooser)?;
        cs = next;
        trace.steps.push(EventStep {
            event: ev.clone(),
            emissions,
            state: state_name(&c, &cs),
        });
    }
    Ok(trace)
}
