use crate::diag::{Code, Severity};

/// Which language profiles a rule applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Applicability {
    All,
    TsOnly,
    EdOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuleInfo {
    pub code: Code,
    pub severity: Severity,
    pub applicability: Applicability,
    pub description: &'static str,
}

const fn rule(code: Code, applicability: Applicability, description: &'static str) -> RuleInfo {
    RuleInfo {
        code,
        severity: code.severity(),
        applicability,
        description,
    }
}

use Applicability::*;

const CATALOG: [RuleInfo; 24] = [
    rule(Code::U1, All, "Automata within a component have unique names."),
    rule(Code::U2, All, "State names are unique within an automaton."),
    rule(Code::U3, All, "The names of variables and ports are unique within a component."),
    rule(Code::C1, All, "An automaton has at least one initial state."),
    rule(Code::C2, All, "The names of variables and ports start with lowercase letters."),
    rule(Code::C3, All, "The names of automata start with uppercase letters."),
    rule(Code::C4, All, "The names of states start with uppercase letters."),
    rule(Code::R0, All, "Imports, types, subcomponents, connectors and enum literals resolve uniquely."),
    rule(Code::R1, All, "States referenced by a transition must be declared."),
    rule(Code::R2, All, "Ports and variables referenced on transitions must be declared."),
    rule(Code::R3, All, "Variable declarations may not reference ports."),
    rule(Code::T1, All, "Messages and values must conform to the according port or variable types."),
    rule(Code::T2, All, "Initial values of variables must conform to their types."),
    rule(Code::T3, All, "Ports and variables used as part of a message or assignment must conform to the target type."),
    rule(Code::T4, All, "The value NoData (--) cannot be used with variables."),
    rule(Code::T5, All, "Sequences of values cannot be read from or assigned to variables."),
    rule(Code::T6, All, "The direction of ports has to be respected."),
    rule(Code::T7, All, "Output ports must not be used as part of messages."),
    rule(Code::S1Ts, TsOnly, "An atomic component contains at most one automaton."),
    rule(Code::S2Ts, TsOnly, "Ports must not be used as part of messages in initial state outputs."),
    rule(Code::S3Ts, TsOnly, "In every cycle at most one message per port is sent."),
    rule(Code::S1Ed, EdOnly, "An atomic component contains at most one automaton."),
    rule(Code::S2Ed, EdOnly, "All inputs must be processed one single message at a time."),
    rule(Code::S3Ed, EdOnly, "The -- symbol may not be used as input."),
];

/// Every implemented rule, in a stable order.
pub fn rule_catalog() -> &'static [RuleInfo] {
    &CATALOG
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_shape() {
        let c = rule_catalog();
        assert_eq!(c.len(), 24);
        let c1 = c.iter().find(|r| r.code == Code::C1).unwrap();
        assert_eq!(c1.severity, Severity::Warning);
        let s3 = c.iter().find(|r| r.code == Code::S3Ts).unwrap();
        assert_eq!(s3.applicability, Applicability::TsOnly);
        let mut codes: Vec<_> = c.iter().map(|r| r.code).collect();
        codes.dedup();
        assert_eq!(codes.len(), 24);
    }
}
