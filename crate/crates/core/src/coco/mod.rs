//! Well-formedness checking of resolved models.

mod catalog;
mod rules;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

pub use catalog::{rule_catalog, Applicability, RuleInfo};

use crate::diag::{sort_diagnostics, Diagnostic};
use crate::model::ResolvedModel;

/// Language profile selecting the additional rule sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Profile {
    #[default]
    Generic,
    /// Time-synchronous.
    Ts,
    /// Event-driven.
    Ed,
}

impl Profile {
    pub fn as_str(self) -> &'static str {
        match self {
            Profile::Generic => "generic",
            Profile::Ts => "ts",
            Profile::Ed => "ed",
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Profile {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "generic" => Ok(Profile::Generic),
            "ts" => Ok(Profile::Ts),
            "ed" => Ok(Profile::Ed),
            _ => Err(format!("unknown profile `{s}` (expected generic, ts or ed)")),
        }
    }
}

/// Evaluates every context condition of `profile` on all declared components
/// and on every concrete generic instantiation. A site reported by both a
/// generic component and its instantiation appears once.
pub fn check(model: &ResolvedModel, profile: Profile) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for ct in model.components.values().chain(&model.instantiations) {
        let mut c = rules::Checker::new(ct, model, profile);
        c.run();
        out.extend(c.out);
    }
    dedup(&mut out);
    out
}

/// Sorts and removes repeated (code, location) pairs, keeping the first.
pub fn dedup(diags: &mut Vec<Diagnostic>) {
    let mut seen = HashSet::new();
    diags.retain(|d| seen.insert((d.code, d.loc.clone())));
    sort_diagnostics(diags);
}
