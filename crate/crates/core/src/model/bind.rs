//! Lowering of a checked atomic component into an index-based form the
//! simulators execute directly.

use super::scope::{Block, NameClass, Scope, Slot, Target};
use super::types::*;
use super::value::Value;
use crate::syntax::{
    Assignment, Automaton, BinaryOp, Direction, Expr, ExprKind, QualifiedName, UnaryOp, ValueKind,
    ValueTerm,
};

/// A value position on a transition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Operand {
    Const(Value),
    Read(Slot),
    NoData,
    Seq(Vec<Operand>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundExpr {
    Const(Value),
    Read(Slot),
    Unary(UnaryOp, Box<BoundExpr>),
    Binary(BinaryOp, Box<BoundExpr>, Box<BoundExpr>),
}

/// A match or an assignment with its target resolved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Binding {
    pub slot: Slot,
    pub alternatives: Vec<Operand>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundInitial {
    pub state: usize,
    pub outputs: Vec<Binding>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundTransition {
    pub source: usize,
    pub target: usize,
    pub guard: Option<BoundExpr>,
    pub inputs: Vec<Binding>,
    pub outputs: Vec<Binding>,
    /// Line of the transition, for runtime messages.
    pub line: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundPort {
    pub name: String,
    pub direction: Direction,
    pub ty: TypeRef,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundVar {
    pub name: String,
    pub ty: TypeRef,
    pub initial: Value,
}

/// An atomic component ready for execution. A component without an
/// automaton has no states and never fires.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundComponent {
    pub name: String,
    pub ports: Vec<BoundPort>,
    pub vars: Vec<BoundVar>,
    pub states: Vec<String>,
    pub initials: Vec<BoundInitial>,
    pub transitions: Vec<BoundTransition>,
}

impl BoundComponent {
    pub fn port_index(&self, name: &str) -> Option<usize> {
        self.ports.iter().position(|p| p.name == name)
    }
}

/// Lowers an atomic, fully instantiated component. Fails on anything the
/// checker would reject.
pub fn bind(ct: &ComponentType, model: &ResolvedModel) -> Result<BoundComponent, String> {
    if !ct.is_atomic() {
        return Err(format!("`{}` is not atomic", ct.display_name()));
    }
    if !ct.generic_params.is_empty() {
        return Err(format!(
            "`{}` has unbound type parameters",
            ct.display_name()
        ));
    }
    if ct.automata.len() > 1 {
        return Err(format!(
            "`{}` declares {} automata; execution supports at most one",
            ct.display_name(),
            ct.automata.len()
        ));
    }
    let scope = Scope::new(ct, model);
    let mut ports = Vec::new();
    for p in &ct.ports {
        let ty = p
            .ty
            .clone()
            .ok_or_else(|| format!("port `{}` has an unresolved type", p.name))?;
        ports.push(BoundPort {
            name: p.name.clone(),
            direction: p.direction,
            ty,
        });
    }
    let mut vars = Vec::new();
    for v in &ct.variables {
        let ty = v
            .ty
            .clone()
            .ok_or_else(|| format!("variable `{}` has an unresolved type", v.name))?;
        let initial = match &v.initial {
            Some(t) => Value::from_literal(t, &ty, model)?
                .ok_or_else(|| format!("variable `{}` cannot start as `--`", v.name))?,
            None => Value::default_for(&ty, model)
                .ok_or_else(|| format!("variable `{}` of type {ty} has no default value", v.name))?,
        };
        vars.push(BoundVar {
            name: v.name.clone(),
            ty,
            initial,
        });
    }
    let mut out = BoundComponent {
        name: ct.display_name(),
        ports,
        vars,
        states: Vec::new(),
        initials: Vec::new(),
        transitions: Vec::new(),
    };
    if let Some(a) = ct.automata.first() {
        bind_automaton(&scope, a, &mut out)?;
    }
    Ok(out)
}

fn bind_automaton(scope: &Scope<'_>, a: &Automaton, out: &mut BoundComponent) -> Result<(), String> {
    for s in &a.states {
        if !out.states.contains(&s.name) {
            out.states.push(s.name.clone());
        }
    }
    let state = |name: &str, states: &[String]| {
        states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| format!("state `{name}` is not declared"))
    };
    for i in &a.initials {
        out.initials.push(BoundInitial {
            state: state(&i.state, &out.states)?,
            outputs: bind_assignments(scope, &i.output)?,
        });
    }
    for t in &a.transitions {
        let guard = t
            .guard
            .as_ref()
            .map(|g| bind_expr(scope, &g.expr))
            .transpose()?;
        let mut inputs = Vec::new();
        for m in &t.input {
            let slot = target(scope, m.target.as_ref(), &m.alternatives, Block::Input)?;
            inputs.push(Binding {
                slot,
                alternatives: operands(scope, slot, &m.alternatives)?,
            });
        }
        out.transitions.push(BoundTransition {
            source: state(&t.source, &out.states)?,
            target: state(&t.target, &out.states)?,
            guard,
            inputs,
            outputs: bind_assignments(scope, &t.output)?,
            line: t.loc.line,
        });
    }
    Ok(())
}

fn bind_assignments(scope: &Scope<'_>, items: &[Assignment]) -> Result<Vec<Binding>, String> {
    items
        .iter()
        .map(|a| {
            let slot = target(scope, a.target.as_ref(), &a.alternatives, Block::Output)?;
            Ok(Binding {
                slot,
                alternatives: operands(scope, slot, &a.alternatives)?,
            })
        })
        .collect()
}

fn target(
    scope: &Scope<'_>,
    name: Option<&crate::syntax::Name>,
    alternatives: &[ValueTerm],
    block: Block,
) -> Result<Slot, String> {
    match scope.target_of(name, alternatives, block) {
        Target::Slot(s) => Ok(s),
        other => Err(format!(
            "cannot determine the port or variable of `{}` ({other:?})",
            alternatives
                .iter()
                .map(crate::syntax::value_text)
                .collect::<Vec<_>>()
                .join(" | ")
        )),
    }
}

fn operands(scope: &Scope<'_>, slot: Slot, alternatives: &[ValueTerm]) -> Result<Vec<Operand>, String> {
    let ty = scope
        .slot_type(slot)
        .ok_or_else(|| format!("`{}` has an unresolved type", scope.slot_name(slot)))?;
    alternatives.iter().map(|v| operand(scope, ty, v)).collect()
}

fn operand(scope: &Scope<'_>, ty: &TypeRef, v: &ValueTerm) -> Result<Operand, String> {
    match &v.kind {
        ValueKind::NoData => Ok(Operand::NoData),
        ValueKind::Sequence(items) => items
            .iter()
            .map(|it| operand(scope, ty, it))
            .collect::<Result<_, _>>()
            .map(Operand::Seq),
        ValueKind::Name(n) => match scope.classify(n) {
            NameClass::Slot(s) => Ok(Operand::Read(s)),
            NameClass::Literal(_) | NameClass::AmbiguousLiteral(_) => {
                Value::from_literal(v, ty, scope.model)?
                    .map(Operand::Const)
                    .ok_or_else(|| "unexpected `--`".to_string())
            }
            NameClass::Unknown => Err(format!("name `{n}` is undefined")),
        },
        _ => Value::from_literal(v, ty, scope.model)?
            .map(Operand::Const)
            .ok_or_else(|| "unexpected `--`".to_string()),
    }
}

fn bind_expr(scope: &Scope<'_>, e: &Expr) -> Result<BoundExpr, String> {
    Ok(match &e.kind {
        ExprKind::Int(i) => BoundExpr::Const(Value::Int(*i)),
        ExprKind::Bool(b) => BoundExpr::Const(Value::Bool(*b)),
        ExprKind::Str(s) => BoundExpr::Const(Value::Str(s.clone())),
        ExprKind::Name(n) => match scope.classify(n) {
            NameClass::Slot(s) => BoundExpr::Read(s),
            NameClass::Literal(q) => BoundExpr::Const(enum_value(q, n)),
            NameClass::AmbiguousLiteral(_) => {
                return Err(format!("enum literal `{n}` is ambiguous"))
            }
            NameClass::Unknown => return Err(format!("name `{n}` is undefined")),
        },
        ExprKind::Unary(op, inner) => BoundExpr::Unary(*op, Box::new(bind_expr(scope, inner)?)),
        ExprKind::Binary(op, l, r) => BoundExpr::Binary(
            *op,
            Box::new(bind_expr(scope, l)?),
            Box::new(bind_expr(scope, r)?),
        ),
    })
}

fn enum_value(ty: QualifiedName, lit: &str) -> Value {
    Value::Enum {
        ty,
        lit: lit.to_string(),
    }
}
