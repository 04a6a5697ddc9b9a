//! JSON form of plans.
//!
//! ```text
//! {"version":1,"m":3,"root":{"kind":"Product","children":[...],"params":{},
//!  "justification":{"ref":"kuenneth-formula","note":"..."},"path":"root"}}
//! ```
//!
//! Objects are written with sorted keys, so equal plans serialize to equal
//! bytes.

use serde::Deserialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use super::{Justification, NodeKind, Plan, PlanNode};
use crate::algebra::AssignmentDoc;
use crate::calculus::{AtomSpec, ChiMetadata};

pub const PLAN_VERSION: u64 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("node \"{path}\", field \"{field}\": {msg}")]
pub struct PlanParseError {
    pub path: String,
    pub field: String,
    pub msg: String,
}

fn err(path: &str, field: &str, msg: impl Into<String>) -> PlanParseError {
    PlanParseError { path: path.to_string(), field: field.to_string(), msg: msg.into() }
}

fn atom_params(a: &AtomSpec) -> Value {
    match *a {
        AtomSpec::Point => json!({"atom": "point"}),
        AtomSpec::ProjectiveSpace(k) => json!({"atom": "projective_space", "k": k}),
        AtomSpec::EllipticCurve => json!({"atom": "elliptic_curve"}),
        AtomSpec::SerreSurface => json!({"atom": "serre_surface"}),
        AtomSpec::Hypersurface(d) => json!({"atom": "hypersurface", "degree": d}),
    }
}

fn node_to_value(node: &PlanNode) -> Value {
    let params = match &node.kind {
        NodeKind::Atom(a) => atom_params(a),
        NodeKind::Power(_, k) => json!({"k": k}),
        NodeKind::BlowupPoints(_, k) => json!({"count": k}),
        NodeKind::ChiSection { b, metadata, .. } => {
            let mut p = Map::new();
            p.insert("b".into(), json!(b));
            if let Some(md) = metadata {
                p.insert("e".into(), json!(md.e));
                p.insert("r".into(), json!(md.r));
                p.insert("chi".into(), json!(md.chi));
            }
            Value::Object(p)
        }
        NodeKind::AsymmetricBlowup { r, b, c, .. } => json!({"r": r, "b": b, "c": c}),
        _ => json!({}),
    };
    let children: Vec<Value> = node.children().into_iter().map(node_to_value).collect();
    json!({
        "kind": node.kind.name(),
        "children": children,
        "params": params,
        "justification": {"ref": node.justification.reference, "note": node.justification.note},
        "path": node.path,
    })
}

impl Plan {
    pub fn to_value(&self) -> Value {
        let mut doc = Map::new();
        doc.insert("version".into(), json!(PLAN_VERSION));
        doc.insert("m".into(), json!(self.m));
        doc.insert("root".into(), node_to_value(&self.root));
        if let Some(a) = &self.assignment {
            doc.insert("assignment".into(), serde_json::to_value(a).expect("assignment serializes"));
        }
        Value::Object(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("plan serializes")
    }

    /// Parses and validates a plan document.
    pub fn from_json(text: &str) -> Result<Plan, PlanParseError> {
        let doc = parse_unbounded(text).map_err(|e| err("<document>", "<json>", e.to_string()))?;
        let obj = doc.as_object().ok_or_else(|| err("<document>", "<json>", "expected an object"))?;
        match obj.get("version") {
            None => return Err(err("<document>", "version", "missing")),
            Some(v) if v.as_u64() == Some(PLAN_VERSION) => {}
            Some(v) => return Err(err("<document>", "version", format!("unsupported version {v}"))),
        }
        let m = obj
            .get("m")
            .and_then(Value::as_u64)
            .ok_or_else(|| err("<document>", "m", "missing or not a non-negative integer"))?;
        let root = obj.get("root").ok_or_else(|| err("<document>", "root", "missing"))?;
        let root = parse_node(root, "<root>")?;
        let assignment = match obj.get("assignment") {
            None | Some(Value::Null) => None,
            Some(v) => Some(
                serde_json::from_value::<AssignmentDoc>(v.clone())
                    .map_err(|e| err("<document>", "assignment", e.to_string()))?,
            ),
        };
        let plan = Plan { m, root, assignment };
        plan.validate().map_err(|e| PlanParseError {
            path: e.path,
            field: e.field.unwrap_or_else(|| "kind".into()),
            msg: e.msg,
        })?;
        Ok(plan)
    }
}

/// Plans nest two JSON levels per node, which can exceed the default
/// nesting limit; the stack grows on demand instead.
fn parse_unbounded(text: &str) -> serde_json::Result<Value> {
    let mut de = serde_json::Deserializer::from_str(text);
    de.disable_recursion_limit();
    let value = Value::deserialize(serde_stacker::Deserializer::new(&mut de))?;
    de.end()?;
    Ok(value)
}

fn parse_node(v: &Value, parent: &str) -> Result<PlanNode, PlanParseError> {
    let obj = v.as_object().ok_or_else(|| err(parent, "children", "node must be an object"))?;
    let path = obj
        .get("path")
        .and_then(Value::as_str)
        .ok_or_else(|| err(parent, "path", "child node has no string path"))?
        .to_string();
    let p = path.as_str();
    let kind = obj.get("kind").and_then(Value::as_str).ok_or_else(|| err(p, "kind", "missing"))?;
    let empty = Map::new();
    let params = match obj.get("params") {
        None => &empty,
        Some(Value::Object(m)) => m,
        Some(_) => return Err(err(p, "params", "must be an object")),
    };
    let uint = |key: &str| -> Result<u64, PlanParseError> {
        params
            .get(key)
            .and_then(Value::as_u64)
            .ok_or_else(|| err(p, &format!("params.{key}"), "missing or not a non-negative integer"))
    };
    let size = |key: &str| -> Result<usize, PlanParseError> {
        usize::try_from(uint(key)?).map_err(|_| err(p, &format!("params.{key}"), "too large"))
    };
    let justification = match obj.get("justification") {
        Some(Value::Object(j)) => {
            let s = |k: &str| {
                j.get(k)
                    .and_then(Value::as_str)
                    .map(str::to_string)
                    .ok_or_else(|| err(p, &format!("justification.{k}"), "missing"))
            };
            Justification { reference: s("ref")?, note: s("note")? }
        }
        _ => return Err(err(p, "justification", "missing")),
    };
    let raw_children = match obj.get("children") {
        None => Vec::new(),
        Some(Value::Array(c)) => c.clone(),
        Some(_) => return Err(err(p, "children", "must be an array")),
    };
    let mut children = Vec::with_capacity(raw_children.len());
    for c in &raw_children {
        children.push(Box::new(parse_node(c, p)?));
    }
    let arity = |want: &[usize]| -> Result<(), PlanParseError> {
        if want.contains(&children.len()) {
            Ok(())
        } else {
            Err(err(p, "children", format!("{kind} takes {want:?} children, got {}", children.len())))
        }
    };
    let kind = match kind {
        "Atom" => {
            arity(&[0])?;
            let name = params
                .get("atom")
                .and_then(Value::as_str)
                .ok_or_else(|| err(p, "params.atom", "missing"))?;
            NodeKind::Atom(match name {
                "point" => AtomSpec::Point,
                "projective_space" => AtomSpec::ProjectiveSpace(size("k")?),
                "elliptic_curve" => AtomSpec::EllipticCurve,
                "serre_surface" => AtomSpec::SerreSurface,
                "hypersurface" => AtomSpec::Hypersurface(size("degree")?),
                other => return Err(err(p, "params.atom", format!("unknown atom {other:?}"))),
            })
        }
        "Product" => {
            arity(&[2])?;
            let b = children.pop().unwrap();
            NodeKind::Product(children.pop().unwrap(), b)
        }
        "Power" => {
            arity(&[1])?;
            NodeKind::Power(children.pop().unwrap(), size("k")?)
        }
        "BlowupPoints" => {
            arity(&[1])?;
            NodeKind::BlowupPoints(children.pop().unwrap(), size("count")?)
        }
        "BlowupCentre" => {
            arity(&[2])?;
            let z = children.pop().unwrap();
            NodeKind::BlowupCentre(children.pop().unwrap(), z)
        }
        "LefschetzSection" => {
            arity(&[1])?;
            NodeKind::LefschetzSection(children.pop().unwrap())
        }
        "ChiSection" => {
            arity(&[1])?;
            let metadata = if params.contains_key("e") || params.contains_key("r") || params.contains_key("chi") {
                let chi = params
                    .get("chi")
                    .and_then(Value::as_i64)
                    .ok_or_else(|| err(p, "params.chi", "missing or not an integer"))?;
                Some(ChiMetadata { e: uint("e")?, r: uint("r")?, chi })
            } else {
                None
            };
            NodeKind::ChiSection { base: children.pop().unwrap(), b: uint("b")?, metadata }
        }
        "AsymmetricBlowup" => {
            arity(&[1, 2])?;
            let r = size("r")?;
            if r == 0 {
                return Err(err(p, "params.r", "r must be at least 1"));
            }
            let surface = if children.len() == 2 { children.pop() } else { None };
            NodeKind::AsymmetricBlowup { base: children.pop().unwrap(), r, b: uint("b")?, c: uint("c")?, surface }
        }
        "InnerRound" => {
            arity(&[2])?;
            let ptilde = children.pop().unwrap();
            NodeKind::InnerRound { base: children.pop().unwrap(), ptilde }
        }
        other => return Err(err(p, "kind", format!("unknown node kind {other:?}"))),
    };
    Ok(PlanNode { kind, justification, path })
}
