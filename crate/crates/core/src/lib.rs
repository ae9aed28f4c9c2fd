//! Frontend and simulators for component models with embedded I/O automata.
//!
//! The pipeline is [`syntax`] (parse) → [`model::resolve`] (symbol table) →
//! [`coco::check`] (well-formedness) → [`exec`] (simulation).

pub mod coco;
pub mod diag;
pub mod exec;
pub mod model;
pub mod syntax;

pub use coco::{check, rule_catalog, Profile};
pub use diag::{Code, Diagnostic, Severity, SourceLoc};
pub use model::{resolve, ResolvedModel, TypeRef, Value};
pub use syntax::{CompilationUnit, TypeDeclUnit};

/// Resolution followed by checking.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub model: ResolvedModel,
    pub diagnostics: Vec<Diagnostic>,
}

impl Analysis {
    pub fn has_errors(&self) -> bool {
        self.diagnostics.iter().any(Diagnostic::is_error)
    }
}

/// Resolves `units` against `types` and checks the result under `profile`.
pub fn analyze(units: &[CompilationUnit], types: &[TypeDeclUnit], profile: Profile) -> Analysis {
    let (model, mut diagnostics) = resolve(units, types);
    diagnostics.extend(check(&model, profile));
    coco::dedup(&mut diagnostics);
    Analysis { model, diagnostics }
}
