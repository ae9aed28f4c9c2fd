//! Source locations and coded diagnostics shared by every analysis stage.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

/// A position inside a model, type or input file. Lines and columns are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SourceLoc {
    pub file: Arc<str>,
    pub line: u32,
    pub column: u32,
}

impl SourceLoc {
    pub fn new(file: Arc<str>, line: u32, column: u32) -> Self {
        debug_assert!(line >= 1 && column >= 1);
        SourceLoc { file, line, column }
    }

    /// Placeholder location used for synthesized nodes and location-insensitive comparison.
    pub fn detached() -> Self {
        SourceLoc {
            file: Arc::from(""),
            line: 1,
            column: 1,
        }
    }
}

impl fmt::Display for SourceLoc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

/// Rule codes. `Syn` marks syntax errors; every other code names a context condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Code {
    Syn,
    U1,
    U2,
    U3,
    C1,
    C2,
    C3,
    C4,
    R0,
    R1,
    R2,
    R3,
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
    T7,
    S1Ts,
    S2Ts,
    S3Ts,
    S1Ed,
    S2Ed,
    S3Ed,
}

impl Code {
    pub const fn as_str(self) -> &'static str {
        match self {
            Code::Syn => "SYN",
            Code::U1 => "U1",
            Code::U2 => "U2",
            Code::U3 => "U3",
            Code::C1 => "C1",
            Code::C2 => "C2",
            Code::C3 => "C3",
            Code::C4 => "C4",
            Code::R0 => "R0",
            Code::R1 => "R1",
            Code::R2 => "R2",
            Code::R3 => "R3",
            Code::T1 => "T1",
            Code::T2 => "T2",
            Code::T3 => "T3",
            Code::T4 => "T4",
            Code::T5 => "T5",
            Code::T6 => "T6",
            Code::T7 => "T7",
            Code::S1Ts => "S1TS",
            Code::S2Ts => "S2TS",
            Code::S3Ts => "S3TS",
            Code::S1Ed => "S1ED",
            Code::S2Ed => "S2ED",
            Code::S3Ed => "S3ED",
        }
    }

    /// Convention rules only warn; everything else is an error.
    pub const fn severity(self) -> Severity {
        match self {
            Code::C1 | Code::C2 | Code::C3 | Code::C4 => Severity::Warning,
            _ => Severity::Error,
        }
    }

    pub fn parse(s: &str) -> Option<Code> {
        ALL_CODES.iter().copied().find(|c| c.as_str() == s)
    }
}

const ALL_CODES: [Code; 25] = [
    Code::Syn,
    Code::U1,
    Code::U2,
    Code::U3,
    Code::C1,
    Code::C2,
    Code::C3,
    Code::C4,
    Code::R0,
    Code::R1,
    Code::R2,
    Code::R3,
    Code::T1,
    Code::T2,
    Code::T3,
    Code::T4,
    Code::T5,
    Code::T6,
    Code::T7,
    Code::S1Ts,
    Code::S2Ts,
    Code::S3Ts,
    Code::S1Ed,
    Code::S2Ed,
    Code::S3Ed,
];

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Code {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Diagnostic {
    pub code: Code,
    pub severity: Severity,
    pub loc: SourceLoc,
    pub message: String,
}

impl Diagnostic {
    /// Builds a diagnostic whose severity follows from its code.
    pub fn new(code: Code, loc: SourceLoc, message: impl Into<String>) -> Self {
        Diagnostic {
            code,
            severity: code.severity(),
            loc,
            message: message.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {}: {}",
            self.loc, self.severity, self.code, self.message
        )
    }
}

/// Orders diagnostics by file, line, column and code.
pub fn sort_diagnostics(diags: &mut [Diagnostic]) {
    diags.sort_by(|a, b| {
        (&a.loc.file, a.loc.line, a.loc.column, a.code.as_str(), &a.message).cmp(&(
            &b.loc.file,
            b.loc.line,
            b.loc.column,
            b.code.as_str(),
            &b.message,
        ))
    });
}
