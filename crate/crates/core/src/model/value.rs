use std::fmt;

use super::types::{ResolvedModel, TypeRef};
use crate::syntax::{quote, QualifiedName, ValueKind, ValueTerm};

/// A single message or variable value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Int(i64),
    Bool(bool),
    Str(String),
    Enum { ty: QualifiedName, lit: String },
}

impl Value {
    pub fn conforms_to(&self, ty: &TypeRef) -> bool {
        match (self, ty) {
            (Value::Int(_), TypeRef::Integer)
            | (Value::Bool(_), TypeRef::Boolean)
            | (Value::Str(_), TypeRef::String) => true,
            (Value::Enum { ty: e, .. }, TypeRef::Enum(t)) => e == t,
            _ => false,
        }
    }

    /// Like `conforms_to`, and an enum literal must also be declared.
    pub fn is_value_of(&self, ty: &TypeRef, model: &ResolvedModel) -> bool {
        match (self, ty) {
            (Value::Enum { ty: e, lit }, TypeRef::Enum(t)) => {
                e == t && model.enums.get(t).is_some_and(|d| d.literals.contains(lit))
            }
            _ => self.conforms_to(ty),
        }
    }

    /// Value of an uninitialized variable: `0`, `false`, `""`, or the first
    /// enum literal. `None` for empty enums and unbound type parameters.
    pub fn default_for(ty: &TypeRef, model: &ResolvedModel) -> Option<Value> {
        match ty {
            TypeRef::Integer => Some(Value::Int(0)),
            TypeRef::Boolean => Some(Value::Bool(false)),
            TypeRef::String => Some(Value::Str(String::new())),
            TypeRef::Enum(q) => model.enums.get(q)?.literals.first().map(|l| Value::Enum {
                ty: q.clone(),
                lit: l.clone(),
            }),
            TypeRef::GenericParam(_) => None,
        }
    }

    /// Interprets a literal term as a value of type `ty`. `Ok(None)` is `--`.
    pub fn from_literal(
        term: &ValueTerm,
        ty: &TypeRef,
        model: &ResolvedModel,
    ) -> Result<Option<Value>, String> {
        let v = match (&term.kind, ty) {
            (ValueKind::NoData, _) => return Ok(None),
            (ValueKind::Int(i), TypeRef::Integer) => Value::Int(*i),
            (ValueKind::Bool(b), TypeRef::Boolean) => Value::Bool(*b),
            (ValueKind::Str(s), TypeRef::String) => Value::Str(s.clone()),
            (ValueKind::Name(n), TypeRef::Enum(q))
                if model.enums.get(q).is_some_and(|e| e.literals.contains(n)) =>
            {
                Value::Enum {
                    ty: q.clone(),
                    lit: n.clone(),
                }
            }
            _ => {
                return Err(format!(
                    "`{}` is not a value of type {ty}",
                    crate::syntax::value_text(term)
                ))
            }
        };
        Ok(Some(v))
    }
}

/// Enum values print as bare literals, strings double-quoted.
impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Str(s) => f.write_str(&quote(s)),
            Value::Enum { lit, .. } => f.write_str(lit),
        }
    }
}

/// `--` for absence, the value's text otherwise.
pub fn optional_text(v: Option<&Value>) -> String {
    v.map_or_else(|| "--".to_string(), ToString::to_string)
}
