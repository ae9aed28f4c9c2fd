use std::collections::BTreeMap;
use std::fmt;

use crate::diag::SourceLoc;
use crate::syntax::{Automaton, ConnectorDecl, Direction, QualifiedName, ValueTerm};

/// The type of a port, variable or message.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TypeRef {
    Integer,
    Boolean,
    String,
    Enum(QualifiedName),
    GenericParam(String),
}

impl TypeRef {
    pub fn builtin(name: &str) -> Option<TypeRef> {
        match name {
            "Integer" => Some(TypeRef::Integer),
            "Boolean" => Some(TypeRef::Boolean),
            "String" => Some(TypeRef::String),
            _ => None,
        }
    }

    pub fn is_generic(&self) -> bool {
        matches!(self, TypeRef::GenericParam(_))
    }
}

impl fmt::Display for TypeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeRef::Integer => f.write_str("Integer"),
            TypeRef::Boolean => f.write_str("Boolean"),
            TypeRef::String => f.write_str("String"),
            TypeRef::Enum(q) => write!(f, "{q}"),
            TypeRef::GenericParam(p) => f.write_str(p),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumType {
    pub name: QualifiedName,
    pub literals: Vec<String>,
    pub loc: SourceLoc,
}

/// A port with its resolved type; `ty` is `None` when the written type did
/// not resolve (already reported as `R0`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Port {
    pub name: String,
    pub direction: Direction,
    pub ty: Option<TypeRef>,
    pub loc: SourceLoc,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub ty: Option<TypeRef>,
    pub initial: Option<ValueTerm>,
    pub loc: SourceLoc,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subcomponent {
    pub name: String,
    /// `None` when the component type did not resolve.
    pub ty: Option<QualifiedName>,
    pub type_args: Vec<TypeRef>,
    pub loc: SourceLoc,
}

/// A component type after name and type resolution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentType {
    pub name: QualifiedName,
    pub generic_params: Vec<String>,
    /// Arguments this type was instantiated with; empty for declared types.
    pub type_args: Vec<TypeRef>,
    pub ports: Vec<Port>,
    pub variables: Vec<Variable>,
    pub subcomponents: Vec<Subcomponent>,
    pub connectors: Vec<ConnectorDecl>,
    pub automata: Vec<Automaton>,
    /// Enums whose literals may be written unqualified inside this component.
    pub visible_enums: Vec<QualifiedName>,
    pub loc: SourceLoc,
}

impl ComponentType {
    pub fn is_atomic(&self) -> bool {
        self.subcomponents.is_empty()
    }

    pub fn port(&self, name: &str) -> Option<&Port> {
        self.ports.iter().find(|p| p.name == name)
    }

    /// `Name<Arg, ...>` for instantiations, the plain name otherwise.
    pub fn display_name(&self) -> String {
        if self.type_args.is_empty() {
            self.name.to_string()
        } else {
            let args: Vec<String> = self.type_args.iter().map(ToString::to_string).collect();
            format!("{}<{}>", self.name, args.join(", "))
        }
    }
}

/// All components and enums of a model, with names and types resolved.
#[derive(Debug, Clone, Default)]
pub struct ResolvedModel {
    pub enums: BTreeMap<QualifiedName, EnumType>,
    pub components: BTreeMap<QualifiedName, ComponentType>,
    /// Generic components instantiated with concrete arguments somewhere in the model.
    pub instantiations: Vec<ComponentType>,
}

impl ResolvedModel {
    /// Looks a component up by qualified name, or by simple name when that is unique.
    pub fn find_component(&self, name: &str) -> Option<&ComponentType> {
        let q = QualifiedName::parse(name);
        if let Some(c) = self.components.get(&q) {
            return Some(c);
        }
        let mut hits = self.components.values().filter(|c| c.name.last() == Some(name));
        match (hits.next(), hits.next()) {
            (Some(c), None) => Some(c),
            _ => None,
        }
    }
}
