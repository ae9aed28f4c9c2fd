//! Canonical text form of a compilation unit.
//!
//! Braces around input and output blocks and transition targets are always
//! written. Omitted port or variable names stay omitted.

use std::fmt::Write;

use super::ast::*;

pub fn pretty_print(unit: &CompilationUnit) -> String {
    let mut out = String::new();
    if !unit.package.is_empty() {
        let _ = writeln!(out, "package {};\n", unit.package);
    }
    for imp in &unit.imports {
        let _ = writeln!(out, "import {}{};", imp.name, if imp.star { ".*" } else { "" });
    }
    if !unit.imports.is_empty() {
        out.push('\n');
    }
    print_component(&mut out, &unit.component);
    out
}

fn print_component(out: &mut String, c: &ComponentDecl) {
    let _ = write!(out, "component {}", c.name);
    if !c.generic_params.is_empty() {
        let _ = write!(out, "<{}>", c.generic_params.join(", "));
    }
    out.push_str(" {\n");
    let mut sections: Vec<String> = Vec::new();

    if !c.ports.is_empty() {
        let mut s = String::from("  port\n");
        for (i, p) in c.ports.iter().enumerate() {
            let sep = if i + 1 == c.ports.len() { ";" } else { "," };
            let _ = writeln!(s, "    {} {} {}{}", p.direction, p.ty.name, p.name, sep);
        }
        sections.push(s);
    }
    if !c.variables.is_empty() {
        let mut s = String::new();
        for v in &c.variables {
            let _ = write!(s, "  {} {}", v.ty.name, v.name);
            if let Some(init) = &v.initial {
                let _ = write!(s, " = {}", value_text(init));
            }
            s.push_str(";\n");
        }
        sections.push(s);
    }
    if !c.subcomponents.is_empty() {
        let mut s = String::new();
        for sc in &c.subcomponents {
            let _ = write!(s, "  component {}", sc.ty.name);
            if !sc.type_args.is_empty() {
                let args: Vec<String> = sc.type_args.iter().map(|a| a.name.to_string()).collect();
                let _ = write!(s, "<{}>", args.join(", "));
            }
            let _ = writeln!(s, " {};", sc.name);
        }
        sections.push(s);
    }
    if !c.connectors.is_empty() {
        let mut s = String::new();
        for con in &c.connectors {
            let _ = writeln!(s, "  connect {} -> {};", con.source, con.target);
        }
        sections.push(s);
    }
    for a in &c.automata {
        let mut s = String::new();
        print_automaton(&mut s, a);
        sections.push(s);
    }
    out.push_str(&sections.join("\n"));
    out.push_str("}\n");
}

fn stereotype_text(st: &[Stereotype]) -> String {
    if st.is_empty() {
        String::new()
    } else {
        let names: Vec<&str> = st.iter().map(|s| s.name.as_str()).collect();
        format!("<<{}>> ", names.join(", "))
    }
}

fn print_automaton(out: &mut String, a: &Automaton) {
    out.push_str("  ");
    out.push_str(&stereotype_text(&a.stereotypes));
    out.push_str("automaton");
    if let Some(n) = &a.name {
        out.push(' ');
        out.push_str(n);
    }
    out.push_str(" {\n");
    if !a.states.is_empty() {
        let states: Vec<String> = a
            .states
            .iter()
            .map(|s| format!("{}{}", stereotype_text(&s.stereotypes), s.name))
            .collect();
        let _ = writeln!(out, "    state {};", states.join(", "));
    }
    for i in &a.initials {
        let _ = write!(out, "    initial {}", i.state);
        if !i.output.is_empty() {
            let _ = write!(out, " / {{{}}}", assignments_text(&i.output));
        }
        out.push_str(";\n");
    }
    for t in &a.transitions {
        let _ = write!(out, "    {} -> {}", t.source, t.target);
        if let Some(g) = &t.guard {
            let _ = match g.kind {
                Some(k) => write!(out, " [{}: {}]", k.as_str(), expr_text(&g.expr)),
                None => write!(out, " [{}]", expr_text(&g.expr)),
            };
        }
        if !t.input.is_empty() {
            let items: Vec<String> = t
                .input
                .iter()
                .map(|m| binding_text(m.target.as_ref(), &m.alternatives))
                .collect();
            let _ = write!(out, " {{{}}}", items.join(", "));
        }
        if !t.output.is_empty() {
            let _ = write!(out, " / {{{}}}", assignments_text(&t.output));
        }
        out.push_str(";\n");
    }
    out.push_str("  }\n");
}

fn assignments_text(items: &[Assignment]) -> String {
    let parts: Vec<String> = items
        .iter()
        .map(|a| binding_text(a.target.as_ref(), &a.alternatives))
        .collect();
    parts.join(", ")
}

fn binding_text(target: Option<&Name>, alternatives: &[ValueTerm]) -> String {
    let alts: Vec<String> = alternatives.iter().map(value_text).collect();
    match target {
        Some(n) => format!("{} = {}", n.name, alts.join(" | ")),
        None => alts.join(" | "),
    }
}

/// Canonical text of a value term.
pub fn value_text(v: &ValueTerm) -> String {
    match &v.kind {
        ValueKind::Int(i) => i.to_string(),
        ValueKind::Bool(b) => b.to_string(),
        ValueKind::Str(s) => quote(s),
        ValueKind::Name(n) => n.clone(),
        ValueKind::NoData => "--".to_string(),
        ValueKind::Sequence(items) => {
            let parts: Vec<String> = items.iter().map(value_text).collect();
            format!("[{}]", parts.join(", "))
        }
    }
}

/// Double-quotes a string, escaping `"` and `\`.
pub fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// Canonical text of a guard expression with the minimal parentheses needed
/// to reparse to the same tree.
pub fn expr_text(e: &Expr) -> String {
    let mut s = String::new();
    write_expr(&mut s, e, 0);
    s
}

fn write_expr(out: &mut String, e: &Expr, min_prec: u8) {
    match &e.kind {
        ExprKind::Int(i) => {
            let _ = write!(out, "{i}");
        }
        ExprKind::Bool(b) => {
            let _ = write!(out, "{b}");
        }
        ExprKind::Str(s) => out.push_str(&quote(s)),
        ExprKind::Name(n) => out.push_str(n),
        ExprKind::Unary(op, inner) => {
            out.push(match op {
                UnaryOp::Not => '!',
                UnaryOp::Neg => '-',
            });
            let atomic = matches!(inner.kind, ExprKind::Bool(_) | ExprKind::Str(_) | ExprKind::Name(_))
                || matches!(inner.kind, ExprKind::Unary(UnaryOp::Not, _)) && *op == UnaryOp::Not;
            if atomic {
                write_expr(out, inner, 0);
            } else {
                out.push('(');
                write_expr(out, inner, 0);
                out.push(')');
            }
        }
        ExprKind::Binary(op, l, r) => {
            let prec = op.precedence();
            let paren = prec < min_prec;
            if paren {
                out.push('(');
            }
            write_expr(out, l, prec);
            let _ = write!(out, " {} ", op.symbol());
            write_expr(out, r, prec + 1);
            if paren {
                out.push(')');
            }
        }
    }
}
