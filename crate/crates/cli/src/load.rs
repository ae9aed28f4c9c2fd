//! Gathering and parsing model and type files.

use std::fs;
use std::path::{Path, PathBuf};

use maa_core::syntax::{parse_component_file, parse_types_file};
use maa_core::{CompilationUnit, Diagnostic, TypeDeclUnit};
use walkdir::WalkDir;

#[derive(Debug, Default)]
pub struct Sources {
    pub units: Vec<CompilationUnit>,
    pub types: Vec<TypeDeclUnit>,
    /// Syntax errors; files that failed to parse are left out above.
    pub syntax: Vec<Diagnostic>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Model,
    Types,
}

fn kind_of(p: &Path) -> Option<Kind> {
    match p.extension()?.to_str()? {
        "maa" => Some(Kind::Model),
        "types" => Some(Kind::Types),
        _ => None,
    }
}

// Directories contribute their .maa and .types files in name order; a file
// named directly counts as `default` unless its extension says otherwise.
fn expand(path: &Path, default: Kind, out: &mut Vec<(PathBuf, Kind)>) -> Result<(), String> {
    let meta = fs::metadata(path).map_err(|e| format!("{}: {e}", path.display()))?;
    if meta.is_file() {
        out.push((path.to_path_buf(), kind_of(path).unwrap_or(default)));
        return Ok(());
    }
    for entry in WalkDir::new(path).sort_by_file_name() {
        let entry = entry.map_err(|e| format!("{}: {e}", path.display()))?;
        if entry.file_type().is_file() {
            if let Some(k) = kind_of(entry.path()) {
                out.push((entry.into_path(), k));
            }
        }
    }
    Ok(())
}

/// Reads and parses everything reachable from `models` and `types`. Only
/// I/O problems are errors here.
pub fn load(models: &[PathBuf], types: &[PathBuf]) -> Result<Sources, String> {
    let mut files = Vec::new();
    for p in models {
        expand(p, Kind::Model, &mut files)?;
    }
    for p in types {
        expand(p, Kind::Types, &mut files)?;
    }
    let mut seen = std::collections::HashSet::new();
    files.retain(|(p, _)| seen.insert(p.clone()));

    let mut out = Sources::default();
    for (path, kind) in files {
        let text = fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        match kind {
            Kind::Model => match parse_component_file(&text, &path) {
                Ok(u) => out.units.push(u),
                Err(d) => out.syntax.extend(d),
            },
            Kind::Types => match parse_types_file(&text, &path) {
                Ok(t) => out.types.push(t),
                Err(d) => out.syntax.extend(d),
            },
        }
    }
    Ok(out)
}
