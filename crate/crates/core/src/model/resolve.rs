//! Symbol table construction: imports, type names, subcomponent types,
//! connectors and generic instantiation. Everything reported here is `R0`.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use super::types::*;
use crate::diag::{sort_diagnostics, Code, Diagnostic};
use crate::syntax::{
    CompilationUnit, ComponentDecl, Direction, Import, PortRef, QualifiedName, TypeDeclUnit,
    TypeName,
};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Found {
    Enum(QualifiedName),
    Component(QualifiedName),
}

struct Symbols {
    enums: BTreeMap<QualifiedName, EnumType>,
    components: BTreeMap<QualifiedName, usize>,
    packages: BTreeSet<QualifiedName>,
}

impl Symbols {
    fn get(&self, q: &QualifiedName) -> Option<Found> {
        if self.enums.contains_key(q) {
            Some(Found::Enum(q.clone()))
        } else if self.components.contains_key(q) {
            Some(Found::Component(q.clone()))
        } else {
            None
        }
    }
}

/// Name lookup context of one compilation unit.
struct UnitScope<'a> {
    syms: &'a Symbols,
    package: &'a QualifiedName,
    imports: &'a [Import],
    generic_params: &'a [String],
}

impl UnitScope<'_> {
    fn lookup(&self, name: &QualifiedName) -> Result<Found, String> {
        if name.0.len() > 1 {
            return self
                .syms
                .get(name)
                .ok_or_else(|| format!("type `{name}` is not declared"));
        }
        let simple = &name.0[0];
        for imp in self.imports.iter().filter(|i| !i.star) {
            if imp.name.last() == Some(simple.as_str()) {
                if let Some(f) = self.syms.get(&imp.name) {
                    return Ok(f);
                }
            }
        }
        if let Some(f) = self.syms.get(&self.package.child(simple)) {
            return Ok(f);
        }
        let mut hits: Vec<Found> = Vec::new();
        for imp in self.imports.iter().filter(|i| i.star) {
            if let Some(f) = self.syms.get(&imp.name.child(simple)) {
                if !hits.contains(&f) {
                    hits.push(f);
                }
            }
        }
        match hits.len() {
            1 => Ok(hits.pop().unwrap()),
            0 => Err(format!("type `{name}` is not declared or imported")),
            _ => Err(format!(
                "type `{name}` is ambiguous between several star imports"
            )),
        }
    }

    fn type_ref(&self, t: &TypeName) -> Result<TypeRef, String> {
        if t.name.0.len() == 1 {
            let simple = &t.name.0[0];
            if self.generic_params.contains(simple) {
                return Ok(TypeRef::GenericParam(simple.clone()));
            }
            if let Some(b) = TypeRef::builtin(simple) {
                return Ok(b);
            }
        }
        match self.lookup(&t.name)? {
            Found::Enum(q) => Ok(TypeRef::Enum(q)),
            Found::Component(q) => Err(format!(
                "`{q}` is a component type and cannot type a port or variable"
            )),
        }
    }

    fn visible_enums(&self) -> Vec<QualifiedName> {
        let mut out: BTreeSet<QualifiedName> = BTreeSet::new();
        for q in self.syms.enums.keys() {
            let parent = q.parent();
            if &parent == self.package
                || self.imports.iter().any(|i| {
                    (i.star && i.name == parent) || (!i.star && &i.name == q)
                })
            {
                out.insert(q.clone());
            }
        }
        out.into_iter().collect()
    }
}

/// Resolves imports, types and subcomponents of every unit against the
/// declared enums and components.
pub fn resolve(units: &[CompilationUnit], types: &[TypeDeclUnit]) -> (ResolvedModel, Vec<Diagnostic>) {
    let mut diags = Vec::new();
    let mut syms = Symbols {
        enums: BTreeMap::new(),
        components: BTreeMap::new(),
        packages: BTreeSet::new(),
    };

    for tu in types {
        for e in &tu.enums {
            let q = tu.package.child(&e.name);
            if syms.enums.contains_key(&q) {
                diags.push(Diagnostic::new(
                    Code::R0,
                    e.loc.clone(),
                    format!("enum `{q}` is declared more than once"),
                ));
                continue;
            }
            syms.packages.insert(tu.package.clone());
            syms.enums.insert(
                q.clone(),
                EnumType {
                    name: q,
                    literals: e.literals.clone(),
                    loc: e.loc.clone(),
                },
            );
        }
    }
    for (i, u) in units.iter().enumerate() {
        let q = u.qualified_name();
        if syms.components.contains_key(&q) || syms.enums.contains_key(&q) {
            diags.push(Diagnostic::new(
                Code::R0,
                u.component.loc.clone(),
                format!("type `{q}` is declared more than once"),
            ));
            continue;
        }
        syms.packages.insert(u.package.clone());
        syms.components.insert(q, i);
    }

    let mut components = BTreeMap::new();
    for (q, &i) in &syms.components {
        let unit = &units[i];
        let scope = UnitScope {
            syms: &syms,
            package: &unit.package,
            imports: &unit.imports,
            generic_params: &unit.component.generic_params,
        };
        for imp in &unit.imports {
            let ok = if imp.star {
                syms.packages.contains(&imp.name)
            } else {
                syms.get(&imp.name).is_some()
            };
            if !ok {
                diags.push(Diagnostic::new(
                    Code::R0,
                    imp.loc.clone(),
                    format!(
                        "unresolved import `{}{}`",
                        imp.name,
                        if imp.star { ".*" } else { "" }
                    ),
                ));
            }
        }
        let ct = build_component(q.clone(), &unit.component, &scope, units, &syms, &mut diags);
        components.insert(q.clone(), ct);
    }

    let mut model = ResolvedModel {
        enums: syms.enums,
        components,
        instantiations: Vec::new(),
    };
    for ct in model.components.values() {
        check_structure(ct, &model, &mut diags);
    }
    check_cycles(&model, &mut diags);
    model.instantiations = collect_instantiations(&model, &mut diags);
    sort_diagnostics(&mut diags);
    (model, diags)
}

fn build_component(
    name: QualifiedName,
    decl: &ComponentDecl,
    scope: &UnitScope<'_>,
    units: &[CompilationUnit],
    syms: &Symbols,
    diags: &mut Vec<Diagnostic>,
) -> ComponentType {
    let typed = |t: &TypeName, diags: &mut Vec<Diagnostic>| match scope.type_ref(t) {
        Ok(r) => Some(r),
        Err(msg) => {
            diags.push(Diagnostic::new(Code::R0, t.loc.clone(), msg));
            None
        }
    };
    let ports: Vec<Port> = decl
        .ports
        .iter()
        .map(|p| Port {
            name: p.name.clone(),
            direction: p.direction,
            ty: typed(&p.ty, diags),
            loc: p.loc.clone(),
        })
        .collect();
    let variables: Vec<Variable> = decl
        .variables
        .iter()
        .map(|v| Variable {
            name: v.name.clone(),
            ty: typed(&v.ty, diags),
            initial: v.initial.clone(),
            loc: v.loc.clone(),
        })
        .collect();

    let mut subcomponents = Vec::new();
    for s in &decl.subcomponents {
        let mut ty = match scope.lookup(&s.ty.name) {
            Ok(Found::Component(q)) => Some(q),
            Ok(Found::Enum(q)) => {
                diags.push(Diagnostic::new(
                    Code::R0,
                    s.ty.loc.clone(),
                    format!("`{q}` is an enum, not a component type"),
                ));
                None
            }
            Err(msg) => {
                diags.push(Diagnostic::new(Code::R0, s.ty.loc.clone(), msg));
                None
            }
        };
        let args: Vec<Option<TypeRef>> = s.type_args.iter().map(|a| typed(a, diags)).collect();
        if let Some(q) = &ty {
            let params = units[syms.components[q]].component.generic_params.len();
            if params != args.len() {
                diags.push(Diagnostic::new(
                    Code::R0,
                    s.loc.clone(),
                    format!(
                        "component `{q}` expects {params} type argument(s), {} given",
                        args.len()
                    ),
                ));
                ty = None;
            }
        }
        if args.iter().any(Option::is_none) {
            ty = None;
        }
        subcomponents.push(Subcomponent {
            name: s.name.clone(),
            ty,
            type_args: args.into_iter().flatten().collect(),
            loc: s.loc.clone(),
        });
    }

    let mut visible = scope.visible_enums();
    for t in ports.iter().filter_map(|p| p.ty.as_ref()).chain(variables.iter().filter_map(|v| v.ty.as_ref())) {
        if let TypeRef::Enum(q) = t {
            if !visible.contains(q) {
                visible.push(q.clone());
            }
        }
    }
    visible.sort();

    ComponentType {
        name,
        generic_params: decl.generic_params.clone(),
        type_args: Vec::new(),
        ports,
        variables,
        subcomponents,
        connectors: decl.connectors.clone(),
        automata: decl.automata.clone(),
        visible_enums: visible,
        loc: decl.loc.clone(),
    }
}

/// Port of an endpoint as seen from inside `ct`: `(direction, type)` with
/// subcomponent types instantiated.
fn endpoint(
    ct: &ComponentType,
    r: &PortRef,
    model: &ResolvedModel,
) -> Result<(Direction, Option<TypeRef>), String> {
    match &r.instance {
        None => ct
            .port(&r.port)
            .map(|p| (p.direction, p.ty.clone()))
            .ok_or_else(|| format!("component has no port `{}`", r.port)),
        Some(inst) => {
            let sub = ct
                .subcomponents
                .iter()
                .find(|s| &s.name == inst)
                .ok_or_else(|| format!("no subcomponent named `{inst}`"))?;
            let Some(q) = &sub.ty else {
                // Unresolved type, already reported.
                return Err(String::new());
            };
            let target = &model.components[q];
            let p = target
                .port(&r.port)
                .ok_or_else(|| format!("subcomponent `{inst}` has no port `{}`", r.port))?;
            let ty = p.ty.as_ref().map(|t| match t {
                TypeRef::GenericParam(g) => target
                    .generic_params
                    .iter()
                    .position(|x| x == g)
                    .and_then(|i| sub.type_args.get(i).cloned())
                    .unwrap_or_else(|| t.clone()),
                other => other.clone(),
            });
            Ok((p.direction, ty))
        }
    }
}

fn check_structure(ct: &ComponentType, model: &ResolvedModel, diags: &mut Vec<Diagnostic>) {
    if !ct.is_atomic() {
        for a in &ct.automata {
            diags.push(Diagnostic::new(
                Code::R0,
                a.loc.clone(),
                "a component with subcomponents cannot declare an automaton",
            ));
        }
    }
    let mut seen_sub = HashSet::new();
    for s in &ct.subcomponents {
        if !seen_sub.insert(&s.name) {
            diags.push(Diagnostic::new(
                Code::R0,
                s.loc.clone(),
                format!("subcomponent `{}` is declared more than once", s.name),
            ));
        }
    }
    let mut driven: HashSet<&PortRef> = HashSet::new();
    for c in &ct.connectors {
        let err = |msg: String| Diagnostic::new(Code::R0, c.loc.clone(), msg);
        let src = endpoint(ct, &c.source, model);
        let dst = endpoint(ct, &c.target, model);
        let (src, dst) = match (src, dst) {
            (Ok(s), Ok(d)) => (s, d),
            (Err(m), _) | (_, Err(m)) => {
                if !m.is_empty() {
                    diags.push(err(m));
                }
                continue;
            }
        };
        // Own in-ports and subcomponent out-ports send; the others receive.
        let sends = |r: &PortRef, d: Direction| (r.instance.is_none()) == (d == Direction::In);
        if !sends(&c.source, src.0) {
            diags.push(err(format!("`{}` cannot be a connector source", c.source)));
            continue;
        }
        if sends(&c.target, dst.0) {
            diags.push(err(format!("`{}` cannot be a connector target", c.target)));
            continue;
        }
        if let (Some(a), Some(b)) = (&src.1, &dst.1) {
            if a != b {
                diags.push(err(format!(
                    "connector joins `{}` of type {a} with `{}` of type {b}",
                    c.source, c.target
                )));
            }
        }
        if !driven.insert(&c.target) {
            diags.push(err(format!("`{}` is the target of more than one connector", c.target)));
        }
    }
}

fn check_cycles(model: &ResolvedModel, diags: &mut Vec<Diagnostic>) {
    // Depth-first search over the "has a subcomponent of type" relation.
    fn visit<'m>(
        q: &'m QualifiedName,
        model: &'m ResolvedModel,
        stack: &mut Vec<&'m QualifiedName>,
        done: &mut HashSet<&'m QualifiedName>,
        diags: &mut Vec<Diagnostic>,
    ) {
        if done.contains(q) {
            return;
        }
        stack.push(q);
        for s in &model.components[q].subcomponents {
            let Some(t) = &s.ty else { continue };
            if stack.contains(&t) {
                diags.push(Diagnostic::new(
                    Code::R0,
                    s.loc.clone(),
                    format!("subcomponent `{}` makes the composition of `{t}` cyclic", s.name),
                ));
            } else {
                visit(t, model, stack, done, diags);
            }
        }
        stack.pop();
        done.insert(q);
    }
    let mut done = HashSet::new();
    for q in model.components.keys() {
        visit(q, model, &mut Vec::new(), &mut done, diags);
    }
}

fn collect_instantiations(model: &ResolvedModel, diags: &mut Vec<Diagnostic>) -> Vec<ComponentType> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for ct in model.components.values() {
        for s in &ct.subcomponents {
            let Some(q) = &s.ty else { continue };
            if s.type_args.is_empty() || s.type_args.iter().any(TypeRef::is_generic) {
                continue;
            }
            if !seen.insert((q.clone(), s.type_args.clone())) {
                continue;
            }
            let target = &model.components[q];
            let bindings = target
                .generic_params
                .iter()
                .cloned()
                .zip(s.type_args.iter().cloned())
                .collect();
            match substitute_generics(target, &bindings) {
                Ok(inst) => out.push(inst),
                Err(d) => diags.push(d),
            }
        }
    }
    out
}

/// Replaces every generic parameter of `ct` by its binding.
pub fn substitute_generics(
    ct: &ComponentType,
    bindings: &BTreeMap<String, TypeRef>,
) -> Result<ComponentType, Diagnostic> {
    if ct.generic_params.is_empty() {
        return Ok(ct.clone());
    }
    if let Some(missing) = ct.generic_params.iter().find(|p| !bindings.contains_key(*p)) {
        return Err(Diagnostic::new(
            Code::R0,
            ct.loc.clone(),
            format!("no binding for type parameter `{missing}` of `{}`", ct.name),
        ));
    }
    let subst = |t: &TypeRef| match t {
        TypeRef::GenericParam(p) => bindings.get(p).cloned().unwrap_or_else(|| t.clone()),
        other => other.clone(),
    };
    let mut out = ct.clone();
    out.type_args = ct.generic_params.iter().map(|p| bindings[p].clone()).collect();
    out.generic_params.clear();
    for p in &mut out.ports {
        p.ty = p.ty.as_ref().map(subst);
    }
    for v in &mut out.variables {
        v.ty = v.ty.as_ref().map(subst);
    }
    for s in &mut out.subcomponents {
        s.type_args = s.type_args.iter().map(subst).collect();
    }
    for t in &out.type_args {
        if let TypeRef::Enum(q) = t {
            if !out.visible_enums.contains(q) {
                out.visible_enums.push(q.clone());
            }
        }
    }
    out.visible_enums.sort();
    Ok(out)
}
