//! Neutral JSON form of a resolved model.

use maa_core::model::{Block, ComponentType, ResolvedModel, Scope, Target};
use maa_core::syntax::{expr_text, value_text, Automaton, Name, ValueTerm};
use maa_core::Profile;
use serde_json::{json, Value as Json};

/// Keys are sorted (serde_json's default map) and arrays keep declaration
/// order, so equal models export to equal bytes.
pub fn export(model: &ResolvedModel, profile: Profile) -> Json {
    let enums: Vec<Json> = model
        .enums
        .values()
        .map(|e| json!({ "name": e.name.to_string(), "literals": e.literals }))
        .collect();
    let components: Vec<Json> = model.components.values().map(|c| component(model, c)).collect();
    json!({
        "profile": profile.as_str(),
        "enums": enums,
        "components": components,
    })
}

fn component(model: &ResolvedModel, c: &ComponentType) -> Json {
    let scope = Scope::new(c, model);
    let ty = |t: &Option<maa_core::TypeRef>| t.as_ref().map(ToString::to_string);
    json!({
        "name": c.name.to_string(),
        "genericParams": c.generic_params,
        "ports": c.ports.iter().map(|p| json!({
            "name": p.name,
            "direction": p.direction.to_string(),
            "type": ty(&p.ty),
        })).collect::<Vec<_>>(),
        "variables": c.variables.iter().map(|v| json!({
            "name": v.name,
            "type": ty(&v.ty),
            "initial": v.initial.as_ref().map(value_text),
        })).collect::<Vec<_>>(),
        "subcomponents": c.subcomponents.iter().map(|s| json!({
            "name": s.name,
            "type": s.ty.as_ref().map(ToString::to_string),
            "typeArgs": s.type_args.iter().map(ToString::to_string).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "connectors": c.connectors.iter().map(|k| json!({
            "source": k.source.to_string(),
            "target": k.target.to_string(),
        })).collect::<Vec<_>>(),
        "automata": c.automata.iter().map(|a| automaton(&scope, a)).collect::<Vec<_>>(),
    })
}

fn automaton(scope: &Scope<'_>, a: &Automaton) -> Json {
    let stereo = |s: &[maa_core::syntax::Stereotype]| s.iter().map(|s| s.name.clone()).collect::<Vec<_>>();
    json!({
        "name": a.name,
        "stereotypes": stereo(&a.stereotypes),
        "states": a.states.iter().map(|s| json!({
            "name": s.name,
            "stereotypes": stereo(&s.stereotypes),
        })).collect::<Vec<_>>(),
        "initials": a.initials.iter().map(|i| json!({
            "state": i.state,
            "outputs": i.output.iter().map(|x| binding(scope, x.target.as_ref(), &x.alternatives, Block::Output)).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "transitions": a.transitions.iter().map(|t| json!({
            "source": t.source,
            "target": t.target,
            "guard": t.guard.as_ref().map(|g| json!({
                "kind": g.kind.map(|k| k.as_str()),
                "text": expr_text(&g.expr),
            })),
            "inputs": t.input.iter().map(|x| binding(scope, x.target.as_ref(), &x.alternatives, Block::Input)).collect::<Vec<_>>(),
            "outputs": t.output.iter().map(|x| binding(scope, x.target.as_ref(), &x.alternatives, Block::Output)).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

// `written` is the name as given in the text, `resolved` the port or
// variable it denotes after inference (null where that fails).
fn binding(scope: &Scope<'_>, target: Option<&Name>, alts: &[ValueTerm], block: Block) -> Json {
    let resolved = match scope.target_of(target, alts, block) {
        Target::Slot(s) => Some(scope.slot_name(s).to_string()),
        _ => None,
    };
    json!({
        "written": target.map(|n| n.name.clone()),
        "resolved": resolved,
        "alternatives": alts.iter().map(value_text).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use maa_core::syntax::parse_component_file;
    use std::path::Path;

    #[test]
    fn omitted_targets_are_resolved_in_the_export() {
        let text = "component Echo {\n  port in Integer i, out Integer o;\n  automaton {\n    state S;\n    initial S / o = 0;\n    S i / o = i;\n  }\n}\n";
        let unit = parse_component_file(text, Path::new("Echo.maa")).unwrap();
        let (model, diags) = maa_core::resolve(&[unit], &[]);
        assert!(diags.is_empty(), "{diags:?}");
        let v = export(&model, Profile::Ts);
        assert_eq!(v["profile"], "ts");
        let t = &v["components"][0]["automata"][0]["transitions"][0];
        assert_eq!(t["inputs"][0]["written"], Json::Null);
        assert_eq!(t["inputs"][0]["resolved"], "i");
        assert_eq!(t["outputs"][0]["resolved"], "o");
        assert_eq!(v["components"][0]["ports"][1]["direction"], "out");
    }
}
