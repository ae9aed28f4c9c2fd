use std::collections::{BTreeMap, HashMap};

use super::choose::Chooser;
use super::eval::{enabled, fire, Env, Firing};
use super::ExecError;
use crate::model::{bind, substitute_generics, BoundComponent, ComponentType, ResolvedModel, TypeRef, Value};
use crate::syntax::QualifiedName;
use crate::syntax::Direction;

/// Where an in-port of an instance (or an out-port of the main component)
/// takes its value from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    /// An in-port of the main component, by index among its in-ports.
    External(usize),
    /// An out-port of an atomic instance.
    Instance { instance: usize, port: usize },
    Unconnected,
}

/// An atomic component at a position in the composition hierarchy.
#[derive(Debug, Clone)]
pub struct Instance {
    /// Dotted subcomponent path; empty for an atomic main component.
    pub path: String,
    pub component: BoundComponent,
    /// Per port; meaningful for in-ports only.
    pub inputs: Vec<Source>,
}

/// A main component flattened into its atomic instances.
#[derive(Debug, Clone)]
pub struct System {
    pub main: String,
    pub in_ports: Vec<(String, TypeRef)>,
    pub out_ports: Vec<(String, TypeRef)>,
    pub instances: Vec<Instance>,
    pub outputs: Vec<Source>,
    /// Declared literals of the enums typing the in-ports.
    pub literals: BTreeMap<QualifiedName, Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ComponentState {
    /// Current automaton state; `None` for a component without automaton.
    pub state: Option<usize>,
    pub vars: Vec<Value>,
}

/// Run-time state between two cycles.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SystemState {
    pub instances: Vec<ComponentState>,
    /// Per instance and port, the message sent in the previous cycle. It is
    /// observable, and readable by connected instances, in the current cycle.
    pub pending: Vec<Vec<Option<Value>>>,
}

type Endpoint = (String, String);

impl System {
    pub fn new(model: &ResolvedModel, main: &str) -> Result<System, ExecError> {
        let ct = model
            .find_component(main)
            .ok_or_else(|| ExecError::UnknownMain(main.to_string()))?;
        if !ct.generic_params.is_empty() {
            return Err(ExecError::Unsupported(format!(
                "main component `{}` has type parameters",
                ct.name
            )));
        }
        let ports = |d: Direction| -> Result<Vec<(String, TypeRef)>, ExecError> {
            ct.ports
                .iter()
                .filter(|p| p.direction == d)
                .map(|p| {
                    p.ty.clone().map(|t| (p.name.clone(), t)).ok_or_else(|| ExecError::Bind {
                        component: ct.name.to_string(),
                        message: format!("port `{}` has an unresolved type", p.name),
                    })
                })
                .collect()
        };
        let in_ports = ports(Direction::In)?;
        let literals = in_ports
            .iter()
            .filter_map(|(_, t)| match t {
                TypeRef::Enum(q) => model.enums.get(q).map(|e| (q.clone(), e.literals.clone())),
                _ => None,
            })
            .collect();
        let mut sys = System {
            main: ct.display_name(),
            in_ports,
            out_ports: ports(Direction::Out)?,
            instances: Vec::new(),
            outputs: Vec::new(),
            literals,
        };
        let mut drivers: HashMap<Endpoint, Endpoint> = HashMap::new();
        let mut terminals: HashMap<Endpoint, Source> = HashMap::new();
        for (i, (p, _)) in sys.in_ports.iter().enumerate() {
            terminals.insert((String::new(), p.clone()), Source::External(i));
        }
        sys.flatten(model, ct, String::new(), &mut drivers, &mut terminals)?;

        let resolve = |at: Endpoint| -> Source {
            let mut at = at;
            for _ in 0..=drivers.len() {
                if let Some(s) = terminals.get(&at) {
                    return *s;
                }
                match drivers.get(&at) {
                    Some(next) => at = next.clone(),
                    None => return Source::Unconnected,
                }
            }
            Source::Unconnected
        };
        for inst in &mut sys.instances {
            inst.inputs = inst
                .component
                .ports
                .iter()
                .map(|p| match p.direction {
                    Direction::In => resolve((inst.path.clone(), p.name.clone())),
                    Direction::Out => Source::Unconnected,
                })
                .collect();
        }
        if ct.is_atomic() {
            sys.outputs = sys
                .out_ports
                .iter()
                .map(|(p, _)| Source::Instance {
                    instance: 0,
                    port: sys.instances[0].component.port_index(p).unwrap_or(usize::MAX),
                })
                .collect();
        } else {
            sys.outputs = sys
                .out_ports
                .iter()
                .map(|(p, _)| resolve((String::new(), p.clone())))
                .collect();
        }
        if sys.outputs.iter().any(|s| matches!(s, Source::External(_))) {
            return Err(ExecError::Unsupported(format!(
                "`{}` passes an input straight through to an output",
                sys.main
            )));
        }
        Ok(sys)
    }

    fn flatten(
        &mut self,
        model: &ResolvedModel,
        ct: &ComponentType,
        path: String,
        drivers: &mut HashMap<Endpoint, Endpoint>,
        terminals: &mut HashMap<Endpoint, Source>,
    ) -> Result<(), ExecError> {
        if ct.is_atomic() {
            let component = bind(ct, model).map_err(|message| ExecError::Bind {
                component: ct.display_name(),
                message,
            })?;
            let idx = self.instances.len();
            for (i, p) in component.ports.iter().enumerate() {
                if p.direction == Direction::Out {
                    terminals.insert((path.clone(), p.name.clone()), Source::Instance { instance: idx, port: i });
                }
            }
            self.instances.push(Instance {
                path,
                component,
                inputs: Vec::new(),
            });
            return Ok(());
        }
        let join = |inst: &Option<String>| match (inst, path.is_empty()) {
            (None, _) => path.clone(),
            (Some(s), true) => s.clone(),
            (Some(s), false) => format!("{path}.{s}"),
        };
        for c in &ct.connectors {
            if c.source.instance.is_none() && c.target.instance.is_none() {
                return Err(ExecError::Unsupported(format!(
                    "`{}` connects input `{}` directly to output `{}`",
                    ct.display_name(),
                    c.source.port,
                    c.target.port
                )));
            }
            drivers.insert(
                (join(&c.target.instance), c.target.port.clone()),
                (join(&c.source.instance), c.source.port.clone()),
            );
        }
        for sub in &ct.subcomponents {
            let unresolved = || ExecError::Bind {
                component: ct.display_name(),
                message: format!("subcomponent `{}` has an unresolved type", sub.name),
            };
            let base = sub
                .ty
                .as_ref()
                .and_then(|q| model.components.get(q))
                .ok_or_else(unresolved)?;
            let bindings: BTreeMap<String, TypeRef> = base
                .generic_params
                .iter()
                .cloned()
                .zip(sub.type_args.iter().cloned())
                .collect();
            let inst = substitute_generics(base, &bindings).map_err(|d| ExecError::Bind {
                component: ct.display_name(),
                message: d.message,
            })?;
            self.flatten(model, &inst, join(&Some(sub.name.clone())), drivers, terminals)?;
        }
        Ok(())
    }

    /// Chooses initial states and computes their outputs, which are
    /// observed in cycle 1.
    pub fn initial(&self, chooser: &mut dyn Chooser) -> Result<SystemState, ExecError> {
        let mut instances = Vec::new();
        let mut pending = Vec::new();
        for inst in &self.instances {
            let c = &inst.component;
            let vars: Vec<Value> = c.vars.iter().map(|v| v.initial.clone()).collect();
            if c.states.is_empty() {
                instances.push(ComponentState { state: None, vars });
                pending.push(vec![None; c.ports.len()]);
                continue;
            }
            let init = match c.initials.len() {
                0 => return Err(ExecError::NoInitialState(c.name.clone())),
                1 => &c.initials[0],
                n => &c.initials[chooser.choose(n)],
            };
            let inputs = vec![None; c.ports.len()];
            let f = fire(c, &init.outputs, Env { inputs: &inputs, vars: &vars }, chooser, 0)?;
            pending.push(single_messages(c, &f, 0)?);
            instances.push(ComponentState {
                state: Some(init.state),
                vars: f.vars,
            });
        }
        Ok(SystemState { instances, pending })
    }

    /// The valuation of instance `i`'s ports in the current cycle.
    pub fn inputs_of(&self, i: usize, st: &SystemState, external: &[Option<Value>]) -> Vec<Option<Value>> {
        self.instances[i]
            .inputs
            .iter()
            .map(|s| self.read(*s, st, external))
            .collect()
    }

    fn read(&self, s: Source, st: &SystemState, external: &[Option<Value>]) -> Option<Value> {
        match s {
            Source::External(k) => external.get(k).cloned().flatten(),
            Source::Instance { instance, port } => st.pending[instance].get(port).cloned().flatten(),
            Source::Unconnected => None,
        }
    }

    /// The main component's out-ports as observed in the current cycle.
    pub fn observed(&self, st: &SystemState) -> Vec<Option<Value>> {
        self.outputs.iter().map(|s| self.read(*s, st, &[])).collect()
    }

    /// One time-synchronous cycle: every instance reads its inputs, fires
    /// one enabled transition or idles. What is sent becomes observable in
    /// the next cycle; messages nobody reads are lost.
    pub fn step_ts(
        &self,
        st: &SystemState,
        external: &[Option<Value>],
        chooser: &mut dyn Chooser,
    ) -> Result<SystemState, ExecError> {
        let mut next = st.clone();
        for (i, inst) in self.instances.iter().enumerate() {
            let c = &inst.component;
            let cur = &st.instances[i];
            let Some(state) = cur.state else {
                next.pending[i] = vec![None; c.ports.len()];
                continue;
            };
            let inputs = self.inputs_of(i, st, external);
            let env = Env { inputs: &inputs, vars: &cur.vars };
            let en = enabled(c, state, env)?;
            let pick = match en.len() {
                0 => {
                    next.pending[i] = vec![None; c.ports.len()];
                    continue;
                }
                1 => en[0],
                n => en[chooser.choose(n)],
            };
            let t = &c.transitions[pick];
            let f = fire(c, &t.outputs, env, chooser, t.line)?;
            next.pending[i] = single_messages(c, &f, t.line)?;
            next.instances[i] = ComponentState {
                state: Some(t.target),
                vars: f.vars,
            };
        }
        Ok(next)
    }
}

fn single_messages(c: &BoundComponent, f: &Firing, line: u32) -> Result<Vec<Option<Value>>, ExecError> {
    let mut out: Vec<Option<Value>> = vec![None; c.ports.len()];
    let mut written = vec![false; c.ports.len()];
    for (p, values) in &f.emissions {
        if written[*p] || values.len() > 1 {
            return Err(ExecError::SequenceInTs {
                port: c.ports[*p].name.clone(),
                line,
            });
        }
        written[*p] = true;
        out[*p] = values.first().cloned();
    }
    Ok(out)
}
