//! The name environment of one component: ports, variables and visible enum
//! literals. Typing of value terms and guard expressions, and the type-based
//! inference of omitted port or variable names, live here.

use super::types::*;
use crate::diag::SourceLoc;
use crate::syntax::{
    BinaryOp, Direction, Expr, ExprKind, Name, QualifiedName, UnaryOp, ValueKind, ValueTerm,
};

/// A port or variable of the enclosing component, by declaration index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    Port(usize),
    Var(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Block {
    Input,
    Output,
}

/// What an identifier in value position denotes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NameClass {
    Slot(Slot),
    Literal(QualifiedName),
    AmbiguousLiteral(Vec<QualifiedName>),
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermType {
    Single(TypeRef),
    /// Element type; `None` for `[]`.
    Sequence(Option<TypeRef>),
    NoData,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Untypable {
    UnknownName(String, SourceLoc),
    AmbiguousLiteral(String, Vec<QualifiedName>, SourceLoc),
    /// The referenced declaration's type did not resolve.
    Untyped(SourceLoc),
    Heterogeneous(SourceLoc),
}

/// A port or variable considered by name-omission inference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub slot: Slot,
    pub name: String,
    pub ty: TypeRef,
    /// `None` for variables.
    pub direction: Option<Direction>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Inference {
    Unique(Slot),
    Ambiguous(Vec<Slot>),
    NoMatch,
}

/// Outcome of determining the port or variable a match or assignment refers to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Target {
    Slot(Slot),
    /// The written name is not a port or variable.
    Undeclared,
    Ambiguous(Vec<Slot>),
    NoMatch,
    /// Inference was not attempted because an alternative contains an
    /// unknown or ambiguous name.
    Blocked,
}

#[derive(Clone, Copy)]
pub struct Scope<'a> {
    pub component: &'a ComponentType,
    pub model: &'a ResolvedModel,
}

impl<'a> Scope<'a> {
    pub fn new(component: &'a ComponentType, model: &'a ResolvedModel) -> Self {
        Scope { component, model }
    }

    /// Ports shadow variables of the same name; the first declaration wins.
    pub fn lookup(&self, name: &str) -> Option<Slot> {
        let c = self.component;
        c.ports
            .iter()
            .position(|p| p.name == name)
            .map(Slot::Port)
            .or_else(|| c.variables.iter().position(|v| v.name == name).map(Slot::Var))
    }

    pub fn slot_name(&self, s: Slot) -> &'a str {
        match s {
            Slot::Port(i) => &self.component.ports[i].name,
            Slot::Var(i) => &self.component.variables[i].name,
        }
    }

    pub fn slot_type(&self, s: Slot) -> Option<&'a TypeRef> {
        match s {
            Slot::Port(i) => self.component.ports[i].ty.as_ref(),
            Slot::Var(i) => self.component.variables[i].ty.as_ref(),
        }
    }

    /// `None` for variables.
    pub fn direction(&self, s: Slot) -> Option<Direction> {
        match s {
            Slot::Port(i) => Some(self.component.ports[i].direction),
            Slot::Var(_) => None,
        }
    }

    /// Human-readable kind and name, e.g. "input port 'x'".
    pub fn describe(&self, s: Slot) -> String {
        let kind = match self.direction(s) {
            Some(Direction::In) => "input port",
            Some(Direction::Out) => "output port",
            None => "variable",
        };
        format!("{kind} '{}'", self.slot_name(s))
    }

    /// Visible enums declaring `lit`.
    pub fn literal_enums(&self, lit: &str) -> Vec<QualifiedName> {
        self.component
            .visible_enums
            .iter()
            .filter(|q| {
                self.model
                    .enums
                    .get(*q)
                    .is_some_and(|e| e.literals.iter().any(|l| l == lit))
            })
            .cloned()
            .collect()
    }

    /// Ports and variables come first, then enum literals.
    pub fn classify(&self, name: &str) -> NameClass {
        if let Some(s) = self.lookup(name) {
            return NameClass::Slot(s);
        }
        let mut enums = self.literal_enums(name);
        match enums.len() {
            0 => NameClass::Unknown,
            1 => NameClass::Literal(enums.pop().unwrap()),
            _ => NameClass::AmbiguousLiteral(enums),
        }
    }

    fn single_type(&self, v: &ValueTerm) -> Result<TypeRef, Untypable> {
        match &v.kind {
            ValueKind::Int(_) => Ok(TypeRef::Integer),
            ValueKind::Bool(_) => Ok(TypeRef::Boolean),
            ValueKind::Str(_) => Ok(TypeRef::String),
            ValueKind::Name(n) => match self.classify(n) {
                NameClass::Slot(s) => self
                    .slot_type(s)
                    .cloned()
                    .ok_or_else(|| Untypable::Untyped(v.loc.clone())),
                NameClass::Literal(q) => Ok(TypeRef::Enum(q)),
                NameClass::AmbiguousLiteral(qs) => {
                    Err(Untypable::AmbiguousLiteral(n.clone(), qs, v.loc.clone()))
                }
                NameClass::Unknown => Err(Untypable::UnknownName(n.clone(), v.loc.clone())),
            },
            // The parser rules out `--` and nesting inside sequences.
            ValueKind::NoData | ValueKind::Sequence(_) => Err(Untypable::Heterogeneous(v.loc.clone())),
        }
    }

    /// The type of a value term in this component.
    pub fn type_of(&self, v: &ValueTerm) -> Result<TermType, Untypable> {
        match &v.kind {
            ValueKind::NoData => Ok(TermType::NoData),
            ValueKind::Sequence(items) => {
                let mut elem: Option<TypeRef> = None;
                for it in items {
                    let t = self.single_type(it)?;
                    match &elem {
                        None => elem = Some(t),
                        Some(e) if *e == t => {}
                        Some(_) => return Err(Untypable::Heterogeneous(v.loc.clone())),
                    }
                }
                Ok(TermType::Sequence(elem))
            }
            _ => self.single_type(v).map(TermType::Single),
        }
    }

    /// Whether a single (non-sequence) term can carry type `ty`. Ambiguous
    /// enum literals are admitted by each enum declaring them.
    fn admits_single(&self, ty: &TypeRef, v: &ValueTerm) -> bool {
        match &v.kind {
            ValueKind::Name(n) => match self.classify(n) {
                NameClass::AmbiguousLiteral(qs) => {
                    matches!(ty, TypeRef::Enum(q) if qs.contains(q))
                }
                _ => self.single_type(v).is_ok_and(|t| &t == ty),
            },
            _ => self.single_type(v).is_ok_and(|t| &t == ty),
        }
    }

    /// Whether `cand` can be the target of alternative `v`.
    pub fn admits(&self, cand: &Candidate, v: &ValueTerm) -> bool {
        match &v.kind {
            ValueKind::NoData => cand.direction.is_some(),
            ValueKind::Sequence(items) => {
                cand.direction == Some(Direction::Out)
                    && items.iter().all(|it| self.admits_single(&cand.ty, it))
            }
            _ => self.admits_single(&cand.ty, v),
        }
    }

    /// Candidates for an omitted name: in-ports and variables for inputs,
    /// out-ports and variables for outputs, out-ports only for sequences.
    pub fn candidates(&self, block: Block, alternatives: &[ValueTerm]) -> Vec<Candidate> {
        let want = match block {
            Block::Input => Direction::In,
            Block::Output => Direction::Out,
        };
        let has_seq = alternatives
            .iter()
            .any(|a| matches!(a.kind, ValueKind::Sequence(_)));
        let mut out: Vec<Candidate> = Vec::new();
        let c = self.component;
        for (i, p) in c.ports.iter().enumerate() {
            if p.direction != want || out.iter().any(|x| x.name == p.name) {
                continue;
            }
            if let Some(ty) = &p.ty {
                out.push(Candidate {
                    slot: Slot::Port(i),
                    name: p.name.clone(),
                    ty: ty.clone(),
                    direction: Some(p.direction),
                });
            }
        }
        if !(block == Block::Output && has_seq) {
            for (i, v) in c.variables.iter().enumerate() {
                if self.lookup(&v.name) != Some(Slot::Var(i)) {
                    continue;
                }
                if let Some(ty) = &v.ty {
                    out.push(Candidate {
                        slot: Slot::Var(i),
                        name: v.name.clone(),
                        ty: ty.clone(),
                        direction: None,
                    });
                }
            }
        }
        out
    }

    /// Name of the first unknown or ambiguous identifier among the alternatives.
    pub fn first_unresolvable(&self, alternatives: &[ValueTerm]) -> Option<Untypable> {
        for a in alternatives {
            let items: &[ValueTerm] = match &a.kind {
                ValueKind::Sequence(items) => items,
                _ => std::slice::from_ref(a),
            };
            for it in items {
                if let ValueKind::Name(n) = &it.kind {
                    match self.classify(n) {
                        NameClass::Unknown => {
                            return Some(Untypable::UnknownName(n.clone(), it.loc.clone()))
                        }
                        NameClass::AmbiguousLiteral(qs) => {
                            return Some(Untypable::AmbiguousLiteral(n.clone(), qs, it.loc.clone()))
                        }
                        _ => {}
                    }
                }
            }
        }
        None
    }

    /// Resolves the target of a match or assignment, inferring it from the
    /// alternatives' types when the name is omitted.
    pub fn target_of(&self, target: Option<&Name>, alternatives: &[ValueTerm], block: Block) -> Target {
        if let Some(n) = target {
            return self.lookup(&n.name).map_or(Target::Undeclared, Target::Slot);
        }
        if self.first_unresolvable(alternatives).is_some() {
            return Target::Blocked;
        }
        match infer_target(self, alternatives, &self.candidates(block, alternatives)) {
            Inference::Unique(s) => Target::Slot(s),
            Inference::Ambiguous(v) => Target::Ambiguous(v),
            Inference::NoMatch => Target::NoMatch,
        }
    }

    /// Type of a guard expression. Errors carry the offending subexpression's
    /// location and a message; names are assumed to resolve.
    pub fn expr_type(&self, e: &Expr) -> Result<TypeRef, (SourceLoc, String)> {
        let err = |msg: String| Err((e.loc.clone(), msg));
        match &e.kind {
            ExprKind::Int(_) => Ok(TypeRef::Integer),
            ExprKind::Bool(_) => Ok(TypeRef::Boolean),
            ExprKind::Str(_) => Ok(TypeRef::String),
            ExprKind::Name(n) => match self.classify(n) {
                NameClass::Slot(s) => self
                    .slot_type(s)
                    .cloned()
                    .ok_or_else(|| (e.loc.clone(), format!("'{n}' has no resolved type"))),
                NameClass::Literal(q) => Ok(TypeRef::Enum(q)),
                NameClass::AmbiguousLiteral(_) => err(format!("enum literal '{n}' is ambiguous")),
                NameClass::Unknown => err(format!("name '{n}' is undefined")),
            },
            ExprKind::Unary(op, inner) => {
                let t = self.expr_type(inner)?;
                let want = match op {
                    UnaryOp::Not => TypeRef::Boolean,
                    UnaryOp::Neg => TypeRef::Integer,
                };
                if t == want {
                    Ok(want)
                } else {
                    err(format!("operand of this operator must be {want}, found {t}"))
                }
            }
            ExprKind::Binary(op, l, r) => {
                let lt = self.expr_type(l)?;
                let rt = self.expr_type(r)?;
                let (operand, result) = match op {
                    BinaryOp::Or | BinaryOp::And => (Some(TypeRef::Boolean), TypeRef::Boolean),
                    BinaryOp::Lt | BinaryOp::Le | BinaryOp::Gt | BinaryOp::Ge => {
                        (Some(TypeRef::Integer), TypeRef::Boolean)
                    }
                    BinaryOp::Add | BinaryOp::Sub | BinaryOp::Mul => {
                        (Some(TypeRef::Integer), TypeRef::Integer)
                    }
                    BinaryOp::Eq | BinaryOp::Ne => (None, TypeRef::Boolean),
                };
                match operand {
                    Some(want) if lt != want || rt != want => err(format!(
                        "operands of `{}` must be {want}, found {lt} and {rt}",
                        op.symbol()
                    )),
                    None if lt != rt => err(format!(
                        "cannot compare {lt} with {rt} using `{}`",
                        op.symbol()
                    )),
                    _ => Ok(result),
                }
            }
        }
    }
}

/// The unique candidate admitting every alternative, if there is exactly one.
pub fn infer_target(scope: &Scope<'_>, alternatives: &[ValueTerm], candidates: &[Candidate]) -> Inference {
    let hits: Vec<Slot> = candidates
        .iter()
        .filter(|c| alternatives.iter().all(|a| scope.admits(c, a)))
        .map(|c| c.slot)
        .collect();
    match hits.len() {
        0 => Inference::NoMatch,
        1 => Inference::Unique(hits[0]),
        _ => Inference::Ambiguous(hits),
    }
}
