//! Line-oriented stimulus, script and trace formats.

use std::fmt::Write as _;
use std::path::Path;

use super::ed::{Event, EventTrace};
use super::ts::{PortValuation, Trace};
use crate::model::{optional_text, ComponentType, ResolvedModel, TypeRef, Value};
use crate::syntax::{parse_value, Direction};

/// Parses one cell as a value of `ty`; `Ok(None)` is `--`.
pub fn parse_cell(text: &str, ty: &TypeRef, model: &ResolvedModel) -> Result<Option<Value>, String> {
    let term = parse_value(text.trim(), Path::new("<cell>")).map_err(|d| d.message)?;
    Value::from_literal(&term, ty, model)
}

fn in_port_type<'a>(ct: &'a ComponentType, name: &str) -> Option<&'a TypeRef> {
    ct.ports
        .iter()
        .find(|p| p.name == name && p.direction == Direction::In)
        .and_then(|p| p.ty.as_ref())
}

fn main_component<'a>(model: &'a ResolvedModel, main: &str) -> Result<&'a ComponentType, String> {
    model
        .find_component(main)
        .ok_or_else(|| format!("unknown main component `{main}`"))
}

/// A tab-separated table: a header of in-port names, then one row per
/// cycle. Empty cells and short rows leave ports absent.
pub fn parse_stimulus(text: &str, model: &ResolvedModel, main: &str) -> Result<Vec<PortValuation>, String> {
    let ct = main_component(model, main)?;
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let Some((_, header)) = lines.next() else {
        return Ok(Vec::new());
    };
    let mut columns = Vec::new();
    for name in header.split('\t').map(str::trim) {
        let ty = in_port_type(ct, name).ok_or_else(|| format!("line 1: `{name}` is not an input port of `{main}`"))?;
        columns.push((name.to_string(), ty));
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        let cells: Vec<&str> = line.split('\t').collect();
        if cells.len() > columns.len() {
            return Err(format!("line {}: {} cells for {} columns", i + 1, cells.len(), columns.len()));
        }
        let mut row = PortValuation::new();
        for ((name, ty), cell) in columns.iter().zip(cells) {
            if cell.trim().is_empty() {
                continue;
            }
            let v = parse_cell(cell, ty, model).map_err(|e| format!("line {}: column `{name}`: {e}", i + 1))?;
            row.insert(name.clone(), v);
        }
        rows.push(row);
    }
    Ok(rows)
}

/// One event per line, `<port> <value>`; blank lines and `#` comments are skipped.
pub fn parse_script(text: &str, model: &ResolvedModel, main: &str) -> Result<Vec<Event>, String> {
    let ct = main_component(model, main)?;
    let mut events = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (port, value) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| format!("line {}: expected `<port> <value>`", i + 1))?;
        let ty = in_port_type(ct, port).ok_or_else(|| format!("line {}: `{port}` is not an input port of `{main}`", i + 1))?;
        let value = parse_cell(value, ty, model)
            .map_err(|e| format!("line {}: {e}", i + 1))?
            .ok_or_else(|| format!("line {}: an event cannot be `--`", i + 1))?;
        events.push(Event {
            port: port.to_string(),
            value,
        });
    }
    Ok(events)
}

/// Header `cycle`, `in:<p>`..., `out:<q>`..., `state`; one row per cycle.
pub fn trace_tsv(trace: &Trace) -> String {
    let mut out = String::from("cycle");
    for p in &trace.in_ports {
        let _ = write!(out, "\tin:{p}");
    }
    for p in &trace.out_ports {
        let _ = write!(out, "\tout:{p}");
    }
    out.push_str("\tstate\n");
    for r in &trace.records {
        let _ = write!(out, "{}", r.cycle);
        for v in r.inputs.iter().chain(&r.outputs) {
            let _ = write!(out, "\t{}", optional_text(v.as_ref()));
        }
        let _ = writeln!(out, "\t{}", r.state_text());
    }
    out
}

/// `recv`, `emit` and `state` lines per consumed event. Initial emissions
/// precede the first block as `emit` lines.
pub fn event_log(trace: &EventTrace) -> String {
    let mut out = String::new();
    let emit = |out: &mut String, emissions: &[(String, Vec<Value>)]| {
        for (port, values) in emissions {
            for v in values {
                let _ = writeln!(out, "emit {port}={v}");
            }
        }
    };
    emit(&mut out, &trace.initial_emissions);
    for s in &trace.steps {
        let _ = writeln!(out, "recv {}={}", s.event.port, s.event.value);
        emit(&mut out, &s.emissions);
        let _ = writeln!(out, "state {}", s.state);
    }
    out
}
