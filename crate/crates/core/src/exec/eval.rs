use super::choose::Chooser;
use super::ExecError;
use crate::model::{Binding, BoundComponent, BoundExpr, BoundTransition, Operand, Slot, Value};
use crate::syntax::{BinaryOp, UnaryOp};

/// What a transition sees: one entry per port (`None` = absent; out-ports
/// are always absent) and the current variable values.
#[derive(Debug, Clone, Copy)]
pub struct Env<'a> {
    pub inputs: &'a [Option<Value>],
    pub vars: &'a [Value],
}

impl Env<'_> {
    fn read(&self, slot: Slot) -> Option<&Value> {
        match slot {
            Slot::Port(i) => self.inputs.get(i).and_then(Option::as_ref),
            Slot::Var(i) => self.vars.get(i),
        }
    }
}

/// Evaluates a guard. A guard touching an absent port is false as a whole.
pub fn eval_guard(e: &BoundExpr, env: Env<'_>, line: u32) -> Result<bool, ExecError> {
    Ok(matches!(eval(e, env, line)?, Some(Value::Bool(true))))
}

// `None` means an absent port was read somewhere below.
fn eval(e: &BoundExpr, env: Env<'_>, line: u32) -> Result<Option<Value>, ExecError> {
    let overflow = || ExecError::Overflow { line };
    Ok(match e {
        BoundExpr::Const(v) => Some(v.clone()),
        BoundExpr::Read(s) => env.read(*s).cloned(),
        BoundExpr::Unary(op, inner) => match (op, eval(inner, env, line)?) {
            (_, None) => None,
            (UnaryOp::Not, Some(Value::Bool(b))) => Some(Value::Bool(!b)),
            (UnaryOp::Neg, Some(Value::Int(i))) => {
                Some(Value::Int(i.checked_neg().ok_or_else(overflow)?))
            }
            (_, Some(v)) => return Err(ill_typed(op_name_unary(*op), &v, line)),
        },
        BoundExpr::Binary(op, l, r) => {
            // strict: both sides are evaluated so that absence anywhere counts
            let (l, r) = (eval(l, env, line)?, eval(r, env, line)?);
            let (Some(l), Some(r)) = (l, r) else {
                return Ok(None);
            };
            Some(binary(*op, l, r, line)?)
        }
    })
}

fn binary(op: BinaryOp, l: Value, r: Value, line: u32) -> Result<Value, ExecError> {
    use BinaryOp::*;
    let overflow = || ExecError::Overflow { line };
    Ok(match (op, &l, &r) {
        (Eq, _, _) => Value::Bool(l == r),
        (Ne, _, _) => Value::Bool(l != r),
        (And, Value::Bool(a), Value::Bool(b)) => Value::Bool(*a && *b),
        (Or, Value::Bool(a), Value::Bool(b)) => Value::Bool(*a || *b),
        (Lt, Value::Int(a), Value::Int(b)) => Value::Bool(a < b),
        (Le, Value::Int(a), Value::Int(b)) => Value::Bool(a <= b),
        (Gt, Value::Int(a), Value::Int(b)) => Value::Bool(a > b),
        (Ge, Value::Int(a), Value::Int(b)) => Value::Bool(a >= b),
        (Add, Value::Int(a), Value::Int(b)) => Value::Int(a.checked_add(*b).ok_or_else(overflow)?),
        (Sub, Value::Int(a), Value::Int(b)) => Value::Int(a.checked_sub(*b).ok_or_else(overflow)?),
        (Mul, Value::Int(a), Value::Int(b)) => Value::Int(a.checked_mul(*b).ok_or_else(overflow)?),
        _ => return Err(ill_typed(op.symbol(), &l, line)),
    })
}

fn op_name_unary(op: UnaryOp) -> &'static str {
    match op {
        UnaryOp::Not => "!",
        UnaryOp::Neg => "-",
    }
}

fn ill_typed(op: &str, v: &Value, line: u32) -> ExecError {
    ExecError::Unsupported(format!("operator `{op}` applied to `{v}` (line {line})"))
}

/// True iff every match of the input block is satisfied. Absence satisfies
/// only `--`; a name alternative compares against the current value it reads.
pub fn match_input(t: &BoundTransition, env: Env<'_>) -> bool {
    t.inputs.iter().all(|b| {
        let actual = env.read(b.slot);
        b.alternatives.iter().any(|alt| match alt {
            Operand::NoData => actual.is_none(),
            Operand::Const(v) => actual == Some(v),
            Operand::Read(s) => actual.is_some() && actual == env.read(*s),
            Operand::Seq(_) => false,
        })
    })
}

/// Indices of the transitions leaving `state` that are enabled, in
/// declaration order.
pub fn enabled(c: &BoundComponent, state: usize, env: Env<'_>) -> Result<Vec<usize>, ExecError> {
    let mut out = Vec::new();
    for (i, t) in c.transitions.iter().enumerate() {
        if t.source != state || !match_input(t, env) {
            continue;
        }
        if let Some(g) = &t.guard {
            if !eval_guard(g, env, t.line)? {
                continue;
            }
        }
        out.push(i);
    }
    Ok(out)
}

/// The effect of an output block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Firing {
    /// Port index and the values sent on it, in output-block order. An
    /// explicit `--` contributes an empty list.
    pub emissions: Vec<(usize, Vec<Value>)>,
    /// Variables after the assignments; unassigned ones keep their value.
    pub vars: Vec<Value>,
}

/// Executes an output block. Right-hand sides read the values from before
/// the block; each `|` choice is resolved by `chooser`.
pub fn fire(
    c: &BoundComponent,
    outputs: &[Binding],
    env: Env<'_>,
    chooser: &mut dyn Chooser,
    line: u32,
) -> Result<Firing, ExecError> {
    let mut vars = env.vars.to_vec();
    let mut emissions = Vec::new();
    for b in outputs {
        let alt = match b.alternatives.len() {
            0 => continue,
            1 => &b.alternatives[0],
            n => &b.alternatives[chooser.choose(n)],
        };
        match b.slot {
            Slot::Port(p) => {
                let mut values = Vec::new();
                collect(c, alt, env, line, &mut values)?;
                emissions.push((p, values));
            }
            Slot::Var(v) => {
                let value = match alt {
                    Operand::Const(x) => x.clone(),
                    Operand::Read(s) => read(c, *s, env, line)?,
                    Operand::NoData | Operand::Seq(_) => {
                        return Err(ExecError::Unsupported(format!(
                            "variable `{}` assigned `--` or a sequence (line {line})",
                            c.vars[v].name
                        )))
                    }
                };
                vars[v] = value;
            }
        }
    }
    Ok(Firing { emissions, vars })
}

fn collect(
    c: &BoundComponent,
    op: &Operand,
    env: Env<'_>,
    line: u32,
    out: &mut Vec<Value>,
) -> Result<(), ExecError> {
    match op {
        Operand::NoData => {}
        Operand::Const(v) => out.push(v.clone()),
        Operand::Read(s) => out.push(read(c, *s, env, line)?),
        Operand::Seq(items) => {
            for it in items {
                collect(c, it, env, line, out)?;
            }
        }
    }
    Ok(())
}

fn read(c: &BoundComponent, s: Slot, env: Env<'_>, line: u32) -> Result<Value, ExecError> {
    env.read(s).cloned().ok_or_else(|| ExecError::AbsentForward {
        port: match s {
            Slot::Port(i) => c.ports[i].name.clone(),
            Slot::Var(i) => c.vars[i].name.clone(),
        },
        line,
    })
}
