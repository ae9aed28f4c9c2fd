//! Recursive-descent parser for model files and type declaration files.
//!
//! Reports only the first syntax error. Automaton bodies accept `state`,
//! `initial` and transition statements in any order and any number.

use std::path::Path;
use std::sync::Arc;

use super::ast::*;
use super::lexer::{tokenize, Tok, Token};
use crate::diag::{Code, Diagnostic, SourceLoc};

type PResult<T> = Result<T, Diagnostic>;

const RESERVED: &[&str] = &[
    "package",
    "import",
    "component",
    "port",
    "connect",
    "automaton",
    "state",
    "initial",
    "true",
    "false",
];

fn origin_name(origin: &Path) -> Arc<str> {
    Arc::from(origin.to_string_lossy().as_ref())
}

/// Parses one `.maa` model file.
pub fn parse_component_file(text: &str, origin: &Path) -> Result<CompilationUnit, Vec<Diagnostic>> {
    let file = origin_name(origin);
    let tokens = tokenize(text, &file).map_err(|d| vec![d])?;
    Parser::new(tokens).compilation_unit().map_err(|d| vec![d])
}

/// Parses one `.types` enum declaration file.
pub fn parse_types_file(text: &str, origin: &Path) -> Result<TypeDeclUnit, Vec<Diagnostic>> {
    let file = origin_name(origin);
    let tokens = tokenize(text, &file).map_err(|d| vec![d])?;
    Parser::new(tokens).types_unit().map_err(|d| vec![d])
}

/// Parses a single value such as `42`, `-1`, `"x"`, `true`, `FORWARD` or `--`.
/// Used for stimulus cells and event scripts.
pub fn parse_value(text: &str, origin: &Path) -> Result<ValueTerm, Diagnostic> {
    let file = origin_name(origin);
    let tokens = tokenize(text, &file)?;
    let mut p = Parser::new(tokens);
    let v = p.optional_value_or_sequence()?;
    p.expect(Tok::Eof)?;
    Ok(v)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn new(tokens: Vec<Token>) -> Self {
        Parser { tokens, pos: 0 }
    }

    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn loc(&self) -> SourceLoc {
        self.tokens[self.pos].loc.clone()
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> PResult<T> {
        Err(Diagnostic::new(
            Code::Syn,
            self.loc(),
            format!("expected {expected}, found {}", self.peek()),
        ))
    }

    fn at(&self, tok: &Tok) -> bool {
        self.peek() == tok
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.at(tok) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> PResult<SourceLoc> {
        if self.at(&tok) {
            Ok(self.bump().loc)
        } else {
            self.error(&tok.to_string())
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.at_keyword(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> PResult<SourceLoc> {
        if self.at_keyword(kw) {
            Ok(self.bump().loc)
        } else {
            self.error(&format!("`{kw}`"))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<(String, SourceLoc)> {
        match self.peek() {
            Tok::Ident(s) if !RESERVED.contains(&s.as_str()) => {
                let s = s.clone();
                let loc = self.bump().loc;
                Ok((s, loc))
            }
            _ => self.error(what),
        }
    }

    fn qualified_name(&mut self, what: &str) -> PResult<(QualifiedName, SourceLoc)> {
        let (first, loc) = self.ident(what)?;
        let mut parts = vec![first];
        while self.at(&Tok::Dot) && matches!(self.peek_at(1), Tok::Ident(_)) {
            self.bump();
            parts.push(self.ident("name")?.0);
        }
        Ok((QualifiedName(parts), loc))
    }

    // ---- compilation units ----

    fn compilation_unit(&mut self) -> PResult<CompilationUnit> {
        let package = if self.eat_keyword("package") {
            let (name, _) = self.qualified_name("package name")?;
            self.expect(Tok::Semi)?;
            name
        } else {
            QualifiedName::default()
        };
        let mut imports = Vec::new();
        while self.at_keyword("import") {
            let loc = self.bump().loc;
            let (name, _) = self.qualified_name("import name")?;
            let star = if self.eat(&Tok::Dot) {
                self.expect(Tok::Star)?;
                true
            } else {
                false
            };
            self.expect(Tok::Semi)?;
            imports.push(Import { name, star, loc });
        }
        let component = self.component()?;
        if self.at_keyword("component") {
            return Err(Diagnostic::new(
                Code::Syn,
                self.loc(),
                "a model file may contain only one top-level component",
            ));
        }
        self.expect(Tok::Eof)?;
        Ok(CompilationUnit {
            package,
            imports,
            component,
        })
    }

    fn component(&mut self) -> PResult<ComponentDecl> {
        let loc = self.expect_keyword("component")?;
        let (name, _) = self.ident("component name")?;
        let mut generic_params = Vec::new();
        if self.eat(&Tok::Lt) {
            loop {
                generic_params.push(self.ident("type parameter")?.0);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(Tok::Gt)?;
        }
        self.expect(Tok::LBrace)?;
        let mut c = ComponentDecl {
            name,
            generic_params,
            ports: Vec::new(),
            variables: Vec::new(),
            subcomponents: Vec::new(),
            connectors: Vec::new(),
            automata: Vec::new(),
            loc,
        };
        while !self.at(&Tok::RBrace) {
            self.body_item(&mut c)?;
        }
        self.bump();
        Ok(c)
    }

    fn body_item(&mut self, c: &mut ComponentDecl) -> PResult<()> {
        if self.at_keyword("port") {
            self.bump();
            loop {
                let loc = self.loc();
                let direction = if self.eat_keyword("in") {
                    Direction::In
                } else if self.eat_keyword("out") {
                    Direction::Out
                } else {
                    return self.error("`in` or `out`");
                };
                let ty = self.type_name()?;
                let (name, _) = self.ident("port name")?;
                c.ports.push(PortDecl {
                    name,
                    direction,
                    ty,
                    loc,
                });
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(Tok::Semi)?;
        } else if self.at_keyword("component") {
            let loc = self.bump().loc;
            let ty = self.type_name()?;
            let mut type_args = Vec::new();
            if self.eat(&Tok::Lt) {
                loop {
                    type_args.push(self.type_name()?);
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                self.expect(Tok::Gt)?;
            }
            let (name, _) = self.ident("subcomponent instance name")?;
            self.expect(Tok::Semi)?;
            c.subcomponents.push(SubcomponentDecl {
                ty,
                type_args,
                name,
                loc,
            });
        } else if self.at_keyword("connect") {
            let loc = self.bump().loc;
            let source = self.port_ref()?;
            self.expect(Tok::Arrow)?;
            let target = self.port_ref()?;
            self.expect(Tok::Semi)?;
            c.connectors.push(ConnectorDecl {
                source,
                target,
                loc,
            });
        } else if self.at(&Tok::StereoOpen) || self.at_keyword("automaton") {
            let a = self.automaton()?;
            c.automata.push(a);
        } else if matches!(self.peek(), Tok::Ident(_)) {
            self.eat_keyword("var");
            let ty = self.type_name()?;
            loop {
                let (name, loc) = self.ident("variable name")?;
                let initial = if self.eat(&Tok::Assign) {
                    Some(self.optional_value_or_sequence()?)
                } else {
                    None
                };
                c.variables.push(VariableDecl {
                    name,
                    ty: ty.clone(),
                    initial,
                    loc,
                });
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(Tok::Semi)?;
        } else {
            return self.error("component element or `}`");
        }
        Ok(())
    }

    fn type_name(&mut self) -> PResult<TypeName> {
        let (name, loc) = self.qualified_name("type name")?;
        Ok(TypeName { name, loc })
    }

    fn port_ref(&mut self) -> PResult<PortRef> {
        let (first, _) = self.ident("port name")?;
        if self.eat(&Tok::Dot) {
            let (port, _) = self.ident("port name")?;
            Ok(PortRef {
                instance: Some(first),
                port,
            })
        } else {
            Ok(PortRef {
                instance: None,
                port: first,
            })
        }
    }

    fn stereotypes(&mut self) -> PResult<Vec<Stereotype>> {
        let mut out = Vec::new();
        if self.eat(&Tok::StereoOpen) {
            loop {
                let (name, loc) = self.ident("stereotype name")?;
                out.push(Stereotype { name, loc });
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(Tok::StereoClose)?;
        }
        Ok(out)
    }

    // ---- automata ----

    fn automaton(&mut self) -> PResult<Automaton> {
        let loc = self.loc();
        let stereotypes = self.stereotypes()?;
        self.expect_keyword("automaton")?;
        let name = match self.peek() {
            Tok::Ident(_) => Some(self.ident("automaton name")?.0),
            _ => None,
        };
        self.expect(Tok::LBrace)?;
        let mut a = Automaton {
            name,
            stereotypes,
            states: Vec::new(),
            initials: Vec::new(),
            transitions: Vec::new(),
            loc,
        };
        loop {
            if self.eat(&Tok::RBrace) {
                break;
            } else if self.at_keyword("state") {
                self.bump();
                loop {
                    let loc = self.loc();
                    let stereotypes = self.stereotypes()?;
                    let (name, _) = self.ident("state name")?;
                    a.states.push(StateDecl {
                        name,
                        stereotypes,
                        loc,
                    });
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                self.expect(Tok::Semi)?;
            } else if self.at_keyword("initial") {
                self.bump();
                let mut names = Vec::new();
                loop {
                    names.push(self.ident("state name")?);
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                let output = if self.eat(&Tok::Slash) {
                    self.output_block()?
                } else {
                    Vec::new()
                };
                self.expect(Tok::Semi)?;
                for (state, loc) in names {
                    a.initials.push(InitialDecl {
                        state,
                        output: output.clone(),
                        loc,
                    });
                }
            } else if matches!(self.peek(), Tok::Ident(_)) {
                let t = self.transition()?;
                a.transitions.push(t);
            } else {
                return self.error("`state`, `initial`, a transition or `}`");
            }
        }
        Ok(a)
    }

    fn transition(&mut self) -> PResult<Transition> {
        let (source, source_loc) = self.ident("source state")?;
        let (target, target_loc) = if self.eat(&Tok::Arrow) {
            let (t, l) = self.ident("target state")?;
            (t, Some(l))
        } else {
            (source.clone(), None)
        };
        let guard = if self.at(&Tok::LBracket) {
            Some(self.guard()?)
        } else {
            None
        };
        let input = if self.at(&Tok::Slash) || self.at(&Tok::Semi) {
            Vec::new()
        } else {
            self.input_block()?
        };
        let output = if self.eat(&Tok::Slash) {
            self.output_block()?
        } else {
            Vec::new()
        };
        self.expect(Tok::Semi)?;
        Ok(Transition {
            loc: source_loc.clone(),
            source,
            source_loc,
            target,
            target_loc,
            guard,
            input,
            output,
        })
    }

    fn guard(&mut self) -> PResult<Guard> {
        let loc = self.expect(Tok::LBracket)?;
        let kind = if matches!(self.peek(), Tok::Ident(_)) && *self.peek_at(1) == Tok::Colon {
            let (k, kloc) = self.ident("guard kind")?;
            self.bump();
            Some(match k.as_str() {
                "ocl" => GuardKind::Ocl,
                "java" => GuardKind::Java,
                other => {
                    return Err(Diagnostic::new(
                        Code::Syn,
                        kloc,
                        format!("unknown guard kind `{other}` (expected `ocl` or `java`)"),
                    ))
                }
            })
        } else {
            None
        };
        let expr = self.expr()?;
        self.expect(Tok::RBracket)?;
        Ok(Guard { kind, expr, loc })
    }

    fn named_prefix(&mut self) -> PResult<Option<Name>> {
        if matches!(self.peek(), Tok::Ident(s) if !RESERVED.contains(&s.as_str()))
            && *self.peek_at(1) == Tok::Assign
        {
            let (name, loc) = self.ident("name")?;
            self.bump();
            Ok(Some(Name { name, loc }))
        } else {
            Ok(None)
        }
    }

    fn input_block(&mut self) -> PResult<Vec<Match>> {
        let braced = self.eat(&Tok::LBrace);
        let mut out = Vec::new();
        loop {
            let loc = self.loc();
            let target = self.named_prefix()?;
            let alternatives = self.alternatives()?;
            out.push(Match {
                target,
                alternatives,
                loc,
            });
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        if braced {
            self.expect(Tok::RBrace)?;
        }
        Ok(out)
    }

    fn output_block(&mut self) -> PResult<Vec<Assignment>> {
        let braced = self.eat(&Tok::LBrace);
        let mut out = Vec::new();
        loop {
            let loc = self.loc();
            let target = self.named_prefix()?;
            let alternatives = self.alternatives()?;
            out.push(Assignment {
                target,
                alternatives,
                loc,
            });
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        if braced {
            self.expect(Tok::RBrace)?;
        }
        Ok(out)
    }

    fn alternatives(&mut self) -> PResult<Vec<ValueTerm>> {
        let mut alts = vec![self.optional_value_or_sequence()?];
        while self.eat(&Tok::Pipe) {
            alts.push(self.optional_value_or_sequence()?);
        }
        Ok(alts)
    }

    // ---- values ----

    fn optional_value_or_sequence(&mut self) -> PResult<ValueTerm> {
        let loc = self.loc();
        if self.eat(&Tok::NoData) {
            return Ok(ValueTerm {
                kind: ValueKind::NoData,
                loc,
            });
        }
        if self.eat(&Tok::LBracket) {
            let mut elems = Vec::new();
            if !self.at(&Tok::RBracket) {
                loop {
                    elems.push(self.value()?);
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
            }
            self.expect(Tok::RBracket)?;
            return Ok(ValueTerm {
                kind: ValueKind::Sequence(elems),
                loc,
            });
        }
        self.value()
    }

    fn value(&mut self) -> PResult<ValueTerm> {
        let loc = self.loc();
        let kind = match self.peek().clone() {
            Tok::Minus if matches!(self.peek_at(1), Tok::Int(_)) => {
                self.bump();
                let Tok::Int(digits) = self.bump().tok else {
                    unreachable!()
                };
                ValueKind::Int(int_literal(&digits, true, &loc)?)
            }
            Tok::Int(digits) => {
                self.bump();
                ValueKind::Int(int_literal(&digits, false, &loc)?)
            }
            Tok::Str(s) => {
                self.bump();
                ValueKind::Str(s)
            }
            Tok::Ident(s) if s == "true" || s == "false" => {
                self.bump();
                ValueKind::Bool(s == "true")
            }
            Tok::Ident(_) => ValueKind::Name(self.ident("value")?.0),
            _ => return self.error("a value"),
        };
        Ok(ValueTerm { kind, loc })
    }

    // ---- guard expressions ----

    fn expr(&mut self) -> PResult<Expr> {
        self.binary(1)
    }

    fn binary_op(&self) -> Option<BinaryOp> {
        Some(match self.peek() {
            Tok::OrOr => BinaryOp::Or,
            Tok::AndAnd => BinaryOp::And,
            Tok::EqEq => BinaryOp::Eq,
            Tok::Ne => BinaryOp::Ne,
            Tok::Lt => BinaryOp::Lt,
            Tok::Le => BinaryOp::Le,
            Tok::Gt => BinaryOp::Gt,
            Tok::Ge => BinaryOp::Ge,
            Tok::Plus => BinaryOp::Add,
            Tok::Minus => BinaryOp::Sub,
            Tok::Star => BinaryOp::Mul,
            _ => return None,
        })
    }

    fn binary(&mut self, min_prec: u8) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        while let Some(op) = self.binary_op().filter(|op| op.precedence() >= min_prec) {
            let loc = self.bump().loc;
            let rhs = self.binary(op.precedence() + 1)?;
            lhs = Expr {
                kind: ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)),
                loc,
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Expr> {
        let loc = self.loc();
        if self.eat(&Tok::Bang) {
            let e = self.unary()?;
            return Ok(Expr {
                kind: ExprKind::Unary(UnaryOp::Not, Box::new(e)),
                loc,
            });
        }
        if self.at(&Tok::Minus) {
            if let Tok::Int(digits) = self.peek_at(1).clone() {
                self.bump();
                self.bump();
                return Ok(Expr {
                    kind: ExprKind::Int(int_literal(&digits, true, &loc)?),
                    loc,
                });
            }
            self.bump();
            let e = self.unary()?;
            return Ok(Expr {
                kind: ExprKind::Unary(UnaryOp::Neg, Box::new(e)),
                loc,
            });
        }
        self.primary()
    }

    fn primary(&mut self) -> PResult<Expr> {
        let loc = self.loc();
        let kind = match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                return Ok(e);
            }
            Tok::Int(digits) => {
                self.bump();
                ExprKind::Int(int_literal(&digits, false, &loc)?)
            }
            Tok::Str(s) => {
                self.bump();
                ExprKind::Str(s)
            }
            Tok::Ident(s) if s == "true" || s == "false" => {
                self.bump();
                ExprKind::Bool(s == "true")
            }
            Tok::Ident(_) => ExprKind::Name(self.ident("expression")?.0),
            _ => return self.error("an expression"),
        };
        Ok(Expr { kind, loc })
    }

    // ---- type declaration files ----

    fn types_unit(&mut self) -> PResult<TypeDeclUnit> {
        self.expect_keyword("package")?;
        let (package, _) = self.qualified_name("package name")?;
        self.expect(Tok::Semi)?;
        let mut enums: Vec<EnumDecl> = Vec::new();
        while !self.at(&Tok::Eof) {
            self.expect_keyword("enum")?;
            let (name, loc) = self.ident("enum name")?;
            if enums.iter().any(|e| e.name == name) {
                return Err(Diagnostic::new(
                    Code::Syn,
                    loc,
                    format!("enum `{name}` is declared twice"),
                ));
            }
            self.expect(Tok::LBrace)?;
            let mut literals: Vec<String> = Vec::new();
            if !self.at(&Tok::RBrace) {
                loop {
                    let (lit, lloc) = self.ident("enum literal")?;
                    if literals.contains(&lit) {
                        return Err(Diagnostic::new(
                            Code::Syn,
                            lloc,
                            format!("literal `{lit}` appears twice in enum `{name}`"),
                        ));
                    }
                    literals.push(lit);
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
            }
            self.expect(Tok::RBrace)?;
            enums.push(EnumDecl {
                name,
                literals,
                loc,
            });
        }
        Ok(TypeDeclUnit { package, enums })
    }
}

fn int_literal(digits: &str, negative: bool, loc: &SourceLoc) -> PResult<i64> {
    let out_of_range = || {
        Diagnostic::new(
            Code::Syn,
            loc.clone(),
            format!("integer literal `{digits}` is out of range"),
        )
    };
    let magnitude: u64 = digits.parse().map_err(|_| out_of_range())?;
    if negative {
        if magnitude == 1 << 63 {
            Ok(i64::MIN)
        } else {
            i64::try_from(magnitude).map(|m| -m).map_err(|_| out_of_range())
        }
    } else {
        i64::try_from(magnitude).map_err(|_| out_of_range())
    }
}
