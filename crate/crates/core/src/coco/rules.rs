use std::collections::{BTreeSet, HashSet};

use super::Profile;
use crate::diag::{Code, Diagnostic, SourceLoc};
use crate::model::{Block, ComponentType, NameClass, ResolvedModel, Scope, Slot, Target, TypeRef};
use crate::syntax::{
    value_text, Assignment, Automaton, Direction, Guard, Name, Transition, ValueKind, ValueTerm,
};

pub(super) struct Checker<'a> {
    scope: Scope<'a>,
    profile: Profile,
    /// Appended to messages when checking a generic instantiation.
    context: String,
    pub(super) out: Vec<Diagnostic>,
}

fn starts_upper(s: &str) -> bool {
    s.chars().next().is_some_and(char::is_uppercase)
}

fn starts_lower(s: &str) -> bool {
    s.chars().next().is_some_and(char::is_lowercase)
}

fn literal_type(v: &ValueTerm) -> Option<TypeRef> {
    match v.kind {
        ValueKind::Int(_) => Some(TypeRef::Integer),
        ValueKind::Bool(_) => Some(TypeRef::Boolean),
        ValueKind::Str(_) => Some(TypeRef::String),
        _ => None,
    }
}

/// Single values of an alternative: the elements of a sequence, or itself.
fn elements(v: &ValueTerm) -> &[ValueTerm] {
    match &v.kind {
        ValueKind::Sequence(items) => items,
        _ => std::slice::from_ref(v),
    }
}

impl<'a> Checker<'a> {
    pub(super) fn new(ct: &'a ComponentType, model: &'a ResolvedModel, profile: Profile) -> Self {
        let context = if ct.type_args.is_empty() {
            String::new()
        } else {
            format!(" (in {})", ct.display_name())
        };
        Checker {
            scope: Scope::new(ct, model),
            profile,
            context,
            out: Vec::new(),
        }
    }

    fn emit(&mut self, code: Code, loc: &SourceLoc, msg: impl Into<String>) {
        let msg = format!("{}{}", msg.into(), self.context);
        self.out.push(Diagnostic::new(code, loc.clone(), msg));
    }

    pub(super) fn run(&mut self) {
        let ct = self.scope.component;
        self.declarations();
        let mut names = HashSet::new();
        for (i, a) in ct.automata.iter().enumerate() {
            if let Some(n) = &a.name {
                if !names.insert(n.as_str()) {
                    self.emit(Code::U1, &a.loc, format!("automaton name '{n}' is already used"));
                }
                if starts_lower(n) {
                    self.emit(Code::C3, &a.loc, format!("automaton name '{n}' must start uppercase"));
                }
            }
            if i > 0 {
                match self.profile {
                    Profile::Ts => self.emit(Code::S1Ts, &a.loc, "multiple automata not allowed in this profile"),
                    Profile::Ed => self.emit(Code::S1Ed, &a.loc, "multiple automata not allowed in this profile"),
                    Profile::Generic => {}
                }
            }
            self.automaton(a);
        }
    }

    fn declarations(&mut self) {
        let ct = self.scope.component;
        let mut seen: Vec<(&str, bool)> = Vec::new();
        for p in &ct.ports {
            if seen.iter().any(|(n, _)| *n == p.name) {
                self.emit(Code::U3, &p.loc, format!("port '{}' is already declared", p.name));
            } else {
                seen.push((&p.name, true));
            }
            if starts_upper(&p.name) {
                self.emit(Code::C2, &p.loc, format!("port name '{}' must start lowercase", p.name));
            }
        }
        for v in &ct.variables {
            match seen.iter().find(|(n, _)| *n == v.name) {
                Some((_, true)) => self.emit(
                    Code::U3,
                    &v.loc,
                    format!("port with name '{}' already exists", v.name),
                ),
                Some((_, false)) => {
                    self.emit(Code::U3, &v.loc, format!("variable '{}' defined twice", v.name))
                }
                None => seen.push((&v.name, false)),
            }
            if starts_upper(&v.name) {
                self.emit(Code::C2, &v.loc, format!("variable name '{}' must start lowercase", v.name));
            }
            if let Some(init) = &v.initial {
                self.initializer(&v.name, v.ty.as_ref(), init);
            }
        }
    }

    fn initializer(&mut self, var: &str, ty: Option<&TypeRef>, init: &ValueTerm) {
        let mismatch = |found: &TypeRef| ty.is_some_and(|t| t != found);
        match &init.kind {
            ValueKind::NoData => {
                self.emit(Code::T4, &init.loc, format!("cannot assign NoData to variable '{var}'"))
            }
            ValueKind::Sequence(_) => {
                self.emit(Code::T5, &init.loc, format!("cannot assign a sequence to variable '{var}'"))
            }
            ValueKind::Name(n) => match self.scope.classify(n) {
                NameClass::Slot(s) => {
                    let what = self.scope.describe(s);
                    self.emit(
                        Code::R3,
                        &init.loc,
                        format!("initial value of variable '{var}' references {what}"),
                    )
                }
                NameClass::Literal(q) => {
                    if mismatch(&TypeRef::Enum(q)) {
                        self.emit(Code::T2, &init.loc, format!("'{n}' is no {}", ty.unwrap()));
                    }
                }
                NameClass::AmbiguousLiteral(qs) => self.ambiguous_literal(n, &qs, &init.loc),
                NameClass::Unknown => self.emit(Code::R2, &init.loc, format!("name '{n}' is undefined")),
            },
            _ => {
                if mismatch(&literal_type(init).unwrap()) {
                    self.emit(
                        Code::T2,
                        &init.loc,
                        format!("'{}' is no {}", value_text(init), ty.unwrap()),
                    );
                }
            }
        }
    }

    fn ambiguous_literal(&mut self, lit: &str, enums: &[crate::syntax::QualifiedName], loc: &SourceLoc) {
        let list: Vec<String> = enums.iter().map(ToString::to_string).collect();
        self.emit(
            Code::R0,
            loc,
            format!("enum literal '{lit}' is declared in several visible enums: {}", list.join(", ")),
        );
    }

    fn automaton(&mut self, a: &Automaton) {
        if a.initials.is_empty() {
            self.emit(Code::C1, &a.loc, "initial state missing");
        }
        let mut states: Vec<&str> = Vec::new();
        for s in &a.states {
            if states.contains(&s.name.as_str()) {
                self.emit(Code::U2, &s.loc, format!("state '{}' defined multiple times", s.name));
            } else {
                states.push(&s.name);
            }
            if starts_lower(&s.name) {
                self.emit(Code::C4, &s.loc, format!("state name '{}' must start uppercase", s.name));
            }
        }
        for i in &a.initials {
            if !states.contains(&i.state.as_str()) {
                self.emit(Code::R1, &i.loc, format!("initial state '{}' is undefined", i.state));
            }
            let slots = self.assignments(&i.output);
            if self.profile == Profile::Ts {
                for v in i.output.iter().flat_map(|a| &a.alternatives) {
                    for e in elements(v) {
                        if let ValueKind::Name(n) = &e.kind {
                            if let NameClass::Slot(s @ Slot::Port(_)) = self.scope.classify(n) {
                                let what = self.scope.describe(s);
                                self.emit(
                                    Code::S2Ts,
                                    &e.loc,
                                    format!("{what} used in message of initial state output"),
                                );
                            }
                        }
                    }
                }
                self.one_message_per_port(&i.output, &slots);
            }
        }
        for t in &a.transitions {
            self.transition(t, &states);
        }
    }

    fn transition(&mut self, t: &Transition, states: &[&str]) {
        if !states.contains(&t.source.as_str()) {
            self.emit(Code::R1, &t.source_loc, format!("state '{}' is undefined", t.source));
        }
        if let Some(loc) = &t.target_loc {
            if !states.contains(&t.target.as_str()) {
                self.emit(Code::R1, loc, format!("state '{}' is undefined", t.target));
            }
        }
        if let Some(g) = &t.guard {
            self.guard(g);
        }
        let inputs: Vec<Option<Slot>> = t
            .input
            .iter()
            .map(|m| self.binding(m.target.as_ref(), &m.alternatives, Block::Input))
            .collect();
        let outputs = self.assignments(&t.output);
        match self.profile {
            Profile::Generic => {}
            Profile::Ts => self.one_message_per_port(&t.output, &outputs),
            Profile::Ed => {
                self.single_message(t, &inputs);
                for m in &t.input {
                    if m.alternatives.iter().any(|v| v.kind == ValueKind::NoData) {
                        self.emit(Code::S3Ed, &m.loc, "triggered by absence of an event");
                    }
                }
            }
        }
    }

    fn guard(&mut self, g: &Guard) {
        let mut typable = true;
        for (n, loc) in g.expr.names() {
            match self.scope.classify(n) {
                NameClass::Slot(s) => {
                    if self.scope.direction(s) == Some(Direction::Out) {
                        self.emit(Code::T6, loc, format!("guard reads from output port '{n}'"));
                    }
                    typable &= self.scope.slot_type(s).is_some();
                }
                NameClass::Literal(_) => {}
                NameClass::AmbiguousLiteral(qs) => {
                    self.ambiguous_literal(n, &qs, loc);
                    typable = false;
                }
                NameClass::Unknown => {
                    self.emit(Code::R2, loc, format!("name '{n}' is undefined"));
                    typable = false;
                }
            }
        }
        if typable {
            match self.scope.expr_type(&g.expr) {
                Ok(TypeRef::Boolean) => {}
                Ok(t) => self.emit(Code::T1, &g.expr.loc, format!("guard must be Boolean, found {t}")),
                Err((loc, msg)) => self.emit(Code::T1, &loc, msg),
            }
        }
    }

    fn assignments(&mut self, items: &[Assignment]) -> Vec<Option<Slot>> {
        items
            .iter()
            .map(|a| self.binding(a.target.as_ref(), &a.alternatives, Block::Output))
            .collect()
    }

    /// Checks one match or assignment; returns its resolved target.
    fn binding(&mut self, name: Option<&Name>, alts: &[ValueTerm], block: Block) -> Option<Slot> {
        match self.scope.target_of(name, alts, block) {
            Target::Slot(s) => {
                match (block, self.scope.direction(s)) {
                    (Block::Input, Some(Direction::Out)) => {
                        let n = self.scope.slot_name(s);
                        self.emit(Code::T6, &name_loc(name, alts), format!("receiving from output port '{n}'"));
                    }
                    (Block::Output, Some(Direction::In)) => {
                        let n = self.scope.slot_name(s);
                        self.emit(Code::T6, &name_loc(name, alts), format!("sending to input port '{n}'"));
                    }
                    _ => {}
                }
                for v in alts {
                    self.alternative(s, v, block);
                }
                Some(s)
            }
            Target::Undeclared => {
                let n = name.expect("only written names can be undeclared");
                self.emit(Code::R2, &n.loc, format!("name '{}' is undefined", n.name));
                self.names_only(alts);
                None
            }
            Target::Blocked => {
                self.names_only(alts);
                None
            }
            Target::Ambiguous(slots) => {
                let names: Vec<&str> = slots.iter().map(|s| self.scope.slot_name(*s)).collect();
                let msg = format!(
                    "'{}' matches several ports or variables ({}); the name must be given",
                    value_text(&alts[0]),
                    names.join(", ")
                );
                self.emit(Code::R2, &alts[0].loc, msg);
                None
            }
            Target::NoMatch => {
                let side = match block {
                    Block::Input => "input port or variable",
                    Block::Output => "output port or variable",
                };
                let text: Vec<String> = alts.iter().map(value_text).collect();
                self.emit(
                    Code::T1,
                    &alts[0].loc,
                    format!("no {side} has a type matching '{}'", text.join(" | ")),
                );
                None
            }
        }
    }

    /// Reference checks for values whose target could not be determined.
    fn names_only(&mut self, alts: &[ValueTerm]) {
        for v in alts {
            for e in elements(v) {
                if let ValueKind::Name(n) = &e.kind {
                    match self.scope.classify(n) {
                        NameClass::Unknown => self.emit(Code::R2, &e.loc, format!("name '{n}' is undefined")),
                        NameClass::AmbiguousLiteral(qs) => self.ambiguous_literal(n, &qs, &e.loc),
                        NameClass::Slot(s) if self.scope.direction(s) == Some(Direction::Out) => {
                            self.emit(Code::T7, &e.loc, format!("output port '{n}' used as value"))
                        }
                        _ => {}
                    }
                }
            }
        }
    }

    fn alternative(&mut self, target: Slot, v: &ValueTerm, block: Block) {
        let var = matches!(target, Slot::Var(_));
        let verb = match block {
            Block::Input => "read",
            Block::Output => "write",
        };
        let tname = self.scope.slot_name(target);
        match &v.kind {
            ValueKind::NoData if var => {
                let prep = if block == Block::Input { "from" } else { "to" };
                self.emit(Code::T4, &v.loc, format!("cannot {verb} NoData {prep} variable '{tname}'"));
            }
            ValueKind::NoData => {}
            ValueKind::Sequence(_) if var => {
                let prep = if block == Block::Input { "from" } else { "to" };
                self.emit(Code::T5, &v.loc, format!("cannot {verb} sequence {prep} variable '{tname}'"));
            }
            ValueKind::Sequence(_) if block == Block::Input => {
                self.emit(
                    Code::T1,
                    &v.loc,
                    format!("port '{tname}' receives single messages, not sequences"),
                );
            }
            ValueKind::Sequence(items) => {
                for it in items {
                    self.element(target, it);
                }
            }
            _ => self.element(target, v),
        }
    }

    fn element(&mut self, target: Slot, v: &ValueTerm) {
        let tty = self.scope.slot_type(target).cloned();
        match &v.kind {
            ValueKind::Name(n) => match self.scope.classify(n) {
                NameClass::Slot(s) => {
                    if self.scope.direction(s) == Some(Direction::Out) {
                        self.emit(Code::T7, &v.loc, format!("output port '{n}' used as value"));
                    } else if let (Some(t), Some(st)) = (&tty, self.scope.slot_type(s)) {
                        if t != st {
                            let what = self.scope.describe(s);
                            self.emit(Code::T3, &v.loc, format!("{what} is no {t}"));
                        }
                    }
                }
                NameClass::Literal(q) => {
                    if let Some(t) = &tty {
                        if *t != TypeRef::Enum(q) {
                            self.emit(Code::T1, &v.loc, format!("'{n}' is no {t}"));
                        }
                    }
                }
                NameClass::AmbiguousLiteral(qs) => self.ambiguous_literal(n, &qs, &v.loc),
                NameClass::Unknown => self.emit(Code::R2, &v.loc, format!("name '{n}' is undefined")),
            },
            _ => {
                if let (Some(t), Some(lt)) = (&tty, literal_type(v)) {
                    if *t != lt {
                        self.emit(Code::T1, &v.loc, format!("'{}' is no {t}", value_text(v)));
                    }
                }
            }
        }
    }

    fn one_message_per_port(&mut self, items: &[Assignment], slots: &[Option<Slot>]) {
        let mut seen = HashSet::new();
        for (a, slot) in items.iter().zip(slots) {
            let Some(s @ Slot::Port(p)) = *slot else { continue };
            let name = self.scope.slot_name(s);
            if a.alternatives.iter().any(|v| matches!(v.kind, ValueKind::Sequence(_))) {
                self.emit(Code::S3Ts, &a.loc, format!("sending sequence of messages on port '{name}' not allowed"));
            }
            if !seen.insert(p) {
                self.emit(Code::S3Ts, &a.loc, format!("port '{name}' is sent more than one message"));
            }
        }
    }

    /// In-ports read by a transition through its guard, input block and
    /// message values.
    fn single_message(&mut self, t: &Transition, inputs: &[Option<Slot>]) {
        let mut read = BTreeSet::new();
        let mut unresolved = false;
        let mut note = |class: NameClass, read: &mut BTreeSet<usize>, scope: &Scope<'_>| match class {
            NameClass::Slot(s @ Slot::Port(p)) if scope.direction(s) == Some(Direction::In) => {
                read.insert(p);
            }
            NameClass::Unknown | NameClass::AmbiguousLiteral(_) => unresolved = true,
            _ => {}
        };
        if let Some(g) = &t.guard {
            for (n, _) in g.expr.names() {
                note(self.scope.classify(n), &mut read, &self.scope);
            }
        }
        for (m, slot) in t.input.iter().zip(inputs) {
            match slot {
                Some(s) => note(NameClass::Slot(*s), &mut read, &self.scope),
                None => note(NameClass::Unknown, &mut read, &self.scope),
            }
            for v in &m.alternatives {
                for e in elements(v) {
                    if let ValueKind::Name(n) = &e.kind {
                        note(self.scope.classify(n), &mut read, &self.scope);
                    }
                }
            }
        }
        for v in t.output.iter().flat_map(|a| &a.alternatives) {
            for e in elements(v) {
                if let ValueKind::Name(n) = &e.kind {
                    note(self.scope.classify(n), &mut read, &self.scope);
                }
            }
        }
        if read.len() > 1 {
            let names: Vec<&str> = read
                .iter()
                .map(|p| self.scope.slot_name(Slot::Port(*p)))
                .collect();
            self.emit(
                Code::S2Ed,
                &t.loc,
                format!("transition reads from multiple input ports ({})", names.join(", ")),
            );
        } else if read.is_empty() && !unresolved {
            self.emit(Code::S2Ed, &t.loc, "transition is not triggered by a message on an input port");
        }
    }
}

fn name_loc(name: Option<&Name>, alts: &[ValueTerm]) -> SourceLoc {
    name.map_or_else(|| alts[0].loc.clone(), |n| n.loc.clone())
}

#[cfg(test)]
mod tests {
    use crate::testutil::{analyze_src, codes};
    use crate::Profile;

    fn run(src: &str, profile: Profile) -> Vec<(&'static str, u32)> {
        codes(&analyze_src(&[src], &[], profile))
    }

    #[test]
    fn unnamed_automata_do_not_clash() {
        let src = "component C {\n  automaton {\n    state A;\n    initial A;\n  }\n  automaton {\n    state B;\n    initial B;\n  }\n}\n";
        assert!(run(src, Profile::Generic).is_empty());
        assert_eq!(run(src, Profile::Ts), [("S1TS", 6)]);
    }

    #[test]
    fn variable_naming_and_initializers() {
        let src = "component C {\n  port in Integer i;\n  Integer Big;\n  Integer v = i;\n  Integer w = --;\n}\n";
        assert_eq!(run(src, Profile::Generic), [("C2", 3), ("R3", 4), ("T4", 5)]);
    }

    #[test]
    fn initial_outputs_are_type_checked() {
        let src = "component C {\n  port out Integer o;\n  automaton {\n    state S;\n    initial S / o = true;\n  }\n}\n";
        assert_eq!(run(src, Profile::Generic), [("T1", 5)]);
    }

    #[test]
    fn guards_are_type_checked() {
        let src = "component C {\n  port in Integer i, out Integer o;\n  automaton {\n    state S;\n    initial S;\n    S [i && true];\n    S [o > 1];\n    S [q > 1];\n  }\n}\n";
        assert_eq!(run(src, Profile::Generic), [("T1", 6), ("T6", 7), ("R2", 8)]);
    }

    #[test]
    fn event_driven_transitions_read_one_port() {
        let src = "component C {\n  port in Integer a, in Integer b, out Integer o;\n  automaton {\n    state S;\n    initial S;\n    S / o = 1;\n    S {a = 1, b = 2};\n    S a = 1 / o = a;\n  }\n}\n";
        assert_eq!(run(src, Profile::Ed), [("S2ED", 6), ("S2ED", 7)]);
        assert!(run(src, Profile::Ts).is_empty());
    }

    #[test]
    fn one_message_per_port_and_cycle() {
        let src = "component C {\n  port in Integer a, out Integer o;\n  automaton {\n    state S;\n    initial S / [1, 2];\n    S / {o = 1, o = 2};\n  }\n}\n";
        assert_eq!(run(src, Profile::Ts), [("S3TS", 5), ("S3TS", 6)]);
        assert!(run(src, Profile::Generic).is_empty());
    }

    #[test]
    fn generic_and_instantiated_sites_report_once() {
        let g = "component G<T> {\n  port in T i, out Integer o;\n  automaton {\n    state S;\n    initial S;\n    S / o = i;\n  }\n}\n";
        let u = "component U {\n  component G<String> g;\n  component G<Boolean> h;\n}\n";
        let a = analyze_src(&[g, u], &[], Profile::Generic);
        assert_eq!(codes(&a), [("T3", 6)]);
        let ok = "component G<T> {\n  port in T i, out T o;\n  automaton {\n    state S;\n    initial S;\n    S / o = i;\n  }\n}\n";
        assert!(analyze_src(&[ok, u], &[], Profile::Generic).diagnostics.is_empty());
    }
}
