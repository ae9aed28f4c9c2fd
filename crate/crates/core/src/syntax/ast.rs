//! Abstract syntax of model files (`.maa`) and type declaration files (`.types`).
//!
//! Names are kept exactly as written. Whether a bare identifier in value position
//! is an enum literal or a port/variable reference is decided during resolution.

use std::fmt;

use crate::diag::SourceLoc;

/// A dot-separated name such as `bumperbot.types`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QualifiedName(pub Vec<String>);

impl QualifiedName {
    pub fn parse(s: &str) -> Self {
        if s.is_empty() {
            QualifiedName(Vec::new())
        } else {
            QualifiedName(s.split('.').map(str::to_string).collect())
        }
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, name: &str) -> Self {
        let mut parts = self.0.clone();
        parts.push(name.to_string());
        QualifiedName(parts)
    }

    pub fn last(&self) -> Option<&str> {
        self.0.last().map(String::as_str)
    }

    /// Everything but the last segment.
    pub fn parent(&self) -> QualifiedName {
        let mut parts = self.0.clone();
        parts.pop();
        QualifiedName(parts)
    }
}

impl fmt::Display for QualifiedName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.join("."))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Import {
    pub name: QualifiedName,
    pub star: bool,
    pub loc: SourceLoc,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompilationUnit {
    pub package: QualifiedName,
    pub imports: Vec<Import>,
    pub component: ComponentDecl,
}

impl CompilationUnit {
    pub fn qualified_name(&self) -> QualifiedName {
        self.package.child(&self.component.name)
    }
}

/// A type as written at a use site: a (possibly qualified) name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeName {
    pub name: QualifiedName,
    pub loc: SourceLoc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    In,
    Out,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::In => "in",
            Direction::Out => "out",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PortDecl {
    pub name: String,
    pub direction: Direction,
    pub ty: TypeName,
    pub loc: SourceLoc,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableDecl {
    pub name: String,
    pub ty: TypeName,
    pub initial: Option<ValueTerm>,
    pub loc: SourceLoc,
}

/// `component Type<Args> instance;`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubcomponentDecl {
    pub ty: TypeName,
    pub type_args: Vec<TypeName>,
    pub name: String,
    pub loc: SourceLoc,
}

/// One end of a connector: an own port, or `instance.port`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PortRef {
    pub instance: Option<String>,
    pub port: String,
}

impl fmt::Display for PortRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.instance {
            Some(inst) => write!(f, "{}.{}", inst, self.port),
            None => f.write_str(&self.port),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectorDecl {
    pub source: PortRef,
    pub target: PortRef,
    pub loc: SourceLoc,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentDecl {
    pub name: String,
    pub generic_params: Vec<String>,
    pub ports: Vec<PortDecl>,
    pub variables: Vec<VariableDecl>,
    pub subcomponents: Vec<SubcomponentDecl>,
    pub connectors: Vec<ConnectorDecl>,
    pub automata: Vec<Automaton>,
    pub loc: SourceLoc,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stereotype {
    pub name: String,
    pub loc: SourceLoc,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateDecl {
    pub name: String,
    pub stereotypes: Vec<Stereotype>,
    pub loc: SourceLoc,
}

/// One state named in an `initial` statement. A statement listing several
/// states yields one entry per state, each carrying the shared output block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InitialDecl {
    pub state: String,
    pub output: Vec<Assignment>,
    pub loc: SourceLoc,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automaton {
    pub name: Option<String>,
    pub stereotypes: Vec<Stereotype>,
    pub states: Vec<StateDecl>,
    pub initials: Vec<InitialDecl>,
    pub transitions: Vec<Transition>,
    pub loc: SourceLoc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GuardKind {
    Ocl,
    Java,
}

impl GuardKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GuardKind::Ocl => "ocl",
            GuardKind::Java => "java",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Guard {
    /// `None` when the guard omits its kind prefix (OCL by default).
    pub kind: Option<GuardKind>,
    pub expr: Expr,
    pub loc: SourceLoc,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub source: String,
    pub source_loc: SourceLoc,
    /// Equal to `source` when the target was omitted.
    pub target: String,
    /// Location of the written target, `None` when omitted.
    pub target_loc: Option<SourceLoc>,
    pub guard: Option<Guard>,
    pub input: Vec<Match>,
    pub output: Vec<Assignment>,
    pub loc: SourceLoc,
}

/// `x = v1 | v2` in an input block; `target` is `None` when the name is omitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Match {
    pub target: Option<Name>,
    pub alternatives: Vec<ValueTerm>,
    pub loc: SourceLoc,
}

/// `x = v1 | [v2, v3]` in an output block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub target: Option<Name>,
    pub alternatives: Vec<ValueTerm>,
    pub loc: SourceLoc,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Name {
    pub name: String,
    pub loc: SourceLoc,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueTerm {
    pub kind: ValueKind,
    pub loc: SourceLoc,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValueKind {
    Int(i64),
    Bool(bool),
    Str(String),
    /// An identifier: enum literal, port or variable.
    Name(String),
    /// `--`
    NoData,
    /// `[v, ...]`; elements are never sequences or `--`.
    Sequence(Vec<ValueTerm>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Not,
    Neg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Or,
    And,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Add,
    Sub,
    Mul,
}

impl BinaryOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Or => "||",
            BinaryOp::And => "&&",
            BinaryOp::Eq => "==",
            BinaryOp::Ne => "!=",
            BinaryOp::Lt => "<",
            BinaryOp::Le => "<=",
            BinaryOp::Gt => ">",
            BinaryOp::Ge => ">=",
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
        }
    }

    /// Binding strength; higher binds tighter.
    pub fn precedence(self) -> u8 {
        match self {
            BinaryOp::Or => 1,
            BinaryOp::And => 2,
            BinaryOp::Eq | BinaryOp::Ne => 3,
            BinaryOp::Lt | BinaryOp::Le | BinaryOp::Gt | BinaryOp::Ge => 4,
            BinaryOp::Add | BinaryOp::Sub => 5,
            BinaryOp::Mul => 6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub loc: SourceLoc,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprKind {
    Int(i64),
    Bool(bool),
    Str(String),
    Name(String),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    /// Identifiers in left-to-right order, duplicates included.
    pub fn names(&self) -> Vec<(&str, &SourceLoc)> {
        let mut out = Vec::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names<'a>(&'a self, out: &mut Vec<(&'a str, &'a SourceLoc)>) {
        match &self.kind {
            ExprKind::Name(n) => out.push((n, &self.loc)),
            ExprKind::Unary(_, e) => e.collect_names(out),
            ExprKind::Binary(_, l, r) => {
                l.collect_names(out);
                r.collect_names(out);
            }
            ExprKind::Int(_) | ExprKind::Bool(_) | ExprKind::Str(_) => {}
        }
    }
}

/// Contents of a `.types` file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeDeclUnit {
    pub package: QualifiedName,
    pub enums: Vec<EnumDecl>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumDecl {
    pub name: String,
    pub literals: Vec<String>,
    pub loc: SourceLoc,
}

/// Replaces every source location with [`SourceLoc::detached`], for
/// comparing trees by structure alone.
trait Strip {
    fn strip(&mut self);
}

fn strip_loc(loc: &mut SourceLoc) {
    *loc = SourceLoc::detached();
}

impl<T: Strip> Strip for Vec<T> {
    fn strip(&mut self) {
        self.iter_mut().for_each(Strip::strip);
    }
}

impl<T: Strip> Strip for Option<T> {
    fn strip(&mut self) {
        if let Some(x) = self {
            x.strip();
        }
    }
}

impl Strip for Name {
    fn strip(&mut self) {
        strip_loc(&mut self.loc);
    }
}

impl Strip for Stereotype {
    fn strip(&mut self) {
        strip_loc(&mut self.loc);
    }
}

impl Strip for TypeName {
    fn strip(&mut self) {
        strip_loc(&mut self.loc);
    }
}

impl Strip for ValueTerm {
    fn strip(&mut self) {
        strip_loc(&mut self.loc);
        if let ValueKind::Sequence(items) = &mut self.kind {
            items.strip();
        }
    }
}

impl Strip for Expr {
    fn strip(&mut self) {
        strip_loc(&mut self.loc);
        match &mut self.kind {
            ExprKind::Unary(_, e) => e.strip(),
            ExprKind::Binary(_, l, r) => {
                l.strip();
                r.strip();
            }
            _ => {}
        }
    }
}

impl Strip for Match {
    fn strip(&mut self) {
        strip_loc(&mut self.loc);
        self.target.strip();
        self.alternatives.strip();
    }
}

impl Strip for Assignment {
    fn strip(&mut self) {
        strip_loc(&mut self.loc);
        self.target.strip();
        self.alternatives.strip();
    }
}

impl Strip for Transition {
    fn strip(&mut self) {
        strip_loc(&mut self.loc);
        strip_loc(&mut self.source_loc);
        self.target_loc = None;
        if let Some(g) = &mut self.guard {
            strip_loc(&mut g.loc);
            g.expr.strip();
        }
        self.input.strip();
        self.output.strip();
    }
}

impl Strip for StateDecl {
    fn strip(&mut self) {
        strip_loc(&mut self.loc);
        self.stereotypes.strip();
    }
}

impl Strip for InitialDecl {
    fn strip(&mut self) {
        strip_loc(&mut self.loc);
        self.output.strip();
    }
}

impl Strip for Automaton {
    fn strip(&mut self) {
        strip_loc(&mut self.loc);
        self.stereotypes.strip();
        self.states.strip();
        self.initials.strip();
        self.transitions.strip();
    }
}

impl Strip for ComponentDecl {
    fn strip(&mut self) {
        strip_loc(&mut self.loc);
        for p in &mut self.ports {
            strip_loc(&mut p.loc);
            p.ty.strip();
        }
        for v in &mut self.variables {
            strip_loc(&mut v.loc);
            v.ty.strip();
            v.initial.strip();
        }
        for s in &mut self.subcomponents {
            strip_loc(&mut s.loc);
            s.ty.strip();
            s.type_args.strip();
        }
        for c in &mut self.connectors {
            strip_loc(&mut c.loc);
        }
        self.automata.strip();
    }
}

impl CompilationUnit {
    /// A copy with all locations detached; two units are structurally equal
    /// iff their stripped forms are equal.
    pub fn strip_locations(&self) -> CompilationUnit {
        let mut u = self.clone();
        for i in &mut u.imports {
            strip_loc(&mut i.loc);
        }
        u.component.strip();
        u
    }
}
