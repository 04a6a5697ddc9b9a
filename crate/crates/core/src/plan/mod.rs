//! Construction plans: expression trees of atoms, products, blowups and
//! sections whose evaluation yields a Hodge diamond.

mod eval;
mod wire;

use std::collections::HashSet;

use thiserror::Error;

use crate::algebra::AssignmentDoc;
use crate::calculus::{AtomSpec, ChiMetadata};

pub use eval::{
    eval_node, eval_plan, eval_with_records, EvalError, Evaluated, NodeRecord, Recorder, TraceEntry,
};
pub(crate) use eval::combine;
pub use wire::PlanParseError;

/// Why a step is legitimate; `reference` is a stable tag naming the rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Justification {
    pub reference: String,
    pub note: String,
}

impl Justification {
    pub fn new(reference: &str, note: impl Into<String>) -> Self {
        Justification { reference: reference.to_string(), note: note.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Atom(AtomSpec),
    Product(Box<PlanNode>, Box<PlanNode>),
    Power(Box<PlanNode>, usize),
    BlowupPoints(Box<PlanNode>, usize),
    BlowupCentre(Box<PlanNode>, Box<PlanNode>),
    LefschetzSection(Box<PlanNode>),
    ChiSection {
        base: Box<PlanNode>,
        b: u64,
        metadata: Option<ChiMetadata>,
    },
    /// Blowup raising `h^{r,1}` by `b` and `h^{1,r}` by `c` modulo `m`.
    /// `surface` is present exactly when `2 <= r <= dim - 2`.
    AsymmetricBlowup {
        base: Box<PlanNode>,
        r: usize,
        b: u64,
        c: u64,
        surface: Option<Box<PlanNode>>,
    },
    /// `m` copies of the point-and-centres blowup sequence, then the blowup
    /// along the blown-up `P^{n-2}` described by `ptilde`.
    InnerRound {
        base: Box<PlanNode>,
        ptilde: Box<PlanNode>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanNode {
    pub kind: NodeKind,
    pub justification: Justification,
    pub path: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plan {
    pub m: u64,
    pub root: PlanNode,
    /// Model assignment the plan was built against, if recorded.
    pub assignment: Option<AssignmentDoc>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("node {path}: {msg}")]
pub struct PlanError {
    pub path: String,
    pub field: Option<String>,
    pub msg: String,
}

impl PlanError {
    fn at(node: &PlanNode, field: Option<&str>, msg: impl Into<String>) -> Self {
        PlanError { path: node.path.clone(), field: field.map(str::to_string), msg: msg.into() }
    }
}

impl NodeKind {
    pub fn name(&self) -> &'static str {
        match self {
            NodeKind::Atom(_) => "Atom",
            NodeKind::Product(..) => "Product",
            NodeKind::Power(..) => "Power",
            NodeKind::BlowupPoints(..) => "BlowupPoints",
            NodeKind::BlowupCentre(..) => "BlowupCentre",
            NodeKind::LefschetzSection(_) => "LefschetzSection",
            NodeKind::ChiSection { .. } => "ChiSection",
            NodeKind::AsymmetricBlowup { .. } => "AsymmetricBlowup",
            NodeKind::InnerRound { .. } => "InnerRound",
        }
    }

    /// Nodes whose output is a blowup of their `base`.
    pub fn is_blowup(&self) -> bool {
        matches!(
            self,
            NodeKind::BlowupPoints(..)
                | NodeKind::BlowupCentre(..)
                | NodeKind::AsymmetricBlowup { .. }
                | NodeKind::InnerRound { .. }
        )
    }
}

impl PlanNode {
    pub fn new(kind: NodeKind, justification: Justification, path: impl Into<String>) -> Self {
        PlanNode { kind, justification, path: path.into() }
    }

    pub fn children(&self) -> Vec<&PlanNode> {
        match &self.kind {
            NodeKind::Atom(_) => vec![],
            NodeKind::Product(a, b) => vec![a, b],
            NodeKind::Power(a, _)
            | NodeKind::BlowupPoints(a, _)
            | NodeKind::LefschetzSection(a)
            | NodeKind::ChiSection { base: a, .. } => vec![a],
            NodeKind::BlowupCentre(a, z) => vec![a, z],
            NodeKind::AsymmetricBlowup { base, surface, .. } => {
                let mut v: Vec<&PlanNode> = vec![base];
                if let Some(s) = surface {
                    v.push(s);
                }
                v
            }
            NodeKind::InnerRound { base, ptilde } => vec![base, ptilde],
        }
    }

    fn children_mut(&mut self) -> Vec<&mut PlanNode> {
        match &mut self.kind {
            NodeKind::Atom(_) => vec![],
            NodeKind::Product(a, b) => vec![a, b],
            NodeKind::Power(a, _)
            | NodeKind::BlowupPoints(a, _)
            | NodeKind::LefschetzSection(a)
            | NodeKind::ChiSection { base: a, .. } => vec![a],
            NodeKind::BlowupCentre(a, z) => vec![a, z],
            NodeKind::AsymmetricBlowup { base, surface, .. } => {
                let mut v: Vec<&mut PlanNode> = vec![base];
                if let Some(s) = surface {
                    v.push(s);
                }
                v
            }
            NodeKind::InnerRound { base, ptilde } => vec![base, ptilde],
        }
    }

    /// Pre-order walk.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a PlanNode)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    pub(crate) fn visit_mut(&mut self, f: &mut impl FnMut(&mut PlanNode)) {
        f(self);
        for c in self.children_mut() {
            c.visit_mut(f);
        }
    }

    pub fn node_count(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    /// Output dimension. Assumes the subtree is well formed.
    pub fn dim(&self) -> usize {
        match &self.kind {
            NodeKind::Atom(a) => a.dim(),
            NodeKind::Product(a, b) => a.dim() + b.dim(),
            NodeKind::Power(a, k) => a.dim() * k,
            NodeKind::BlowupPoints(a, _)
            | NodeKind::BlowupCentre(a, _)
            | NodeKind::AsymmetricBlowup { base: a, .. }
            | NodeKind::InnerRound { base: a, .. } => a.dim(),
            NodeKind::LefschetzSection(a) | NodeKind::ChiSection { base: a, .. } => {
                a.dim().saturating_sub(1)
            }
        }
    }

    /// Checks local well-formedness of the subtree and returns its dimension.
    pub fn validate(&self, m: u64) -> Result<usize, PlanError> {
        let mut seen = HashSet::new();
        self.validate_inner(m, &mut seen)
    }

    fn validate_inner<'a>(&'a self, m: u64, seen: &mut HashSet<&'a str>) -> Result<usize, PlanError> {
        if self.path.is_empty() || self.path.contains(['{', '}']) {
            return Err(PlanError::at(self, Some("path"), "path must be non-empty and free of braces"));
        }
        if !seen.insert(&self.path) {
            return Err(PlanError::at(self, Some("path"), "duplicate node path"));
        }
        let residue = |v: u64, field: &str| {
            if v >= m {
                Err(PlanError::at(self, Some(field), format!("{v} is not a residue modulo {m}")))
            } else {
                Ok(())
            }
        };
        Ok(match &self.kind {
            NodeKind::Atom(a) => {
                a.validate().map_err(|e| PlanError::at(self, Some("params"), e.to_string()))?;
                a.dim()
            }
            NodeKind::Product(a, b) => a.validate_inner(m, seen)? + b.validate_inner(m, seen)?,
            NodeKind::Power(a, k) => a.validate_inner(m, seen)? * k,
            NodeKind::BlowupPoints(a, _) => {
                let n = a.validate_inner(m, seen)?;
                if n < 2 {
                    return Err(PlanError::at(self, Some("count"), "point blowups need dimension at least 2"));
                }
                n
            }
            NodeKind::BlowupCentre(a, z) => {
                let n = a.validate_inner(m, seen)?;
                let d = z.validate_inner(m, seen)?;
                if d + 2 > n {
                    return Err(PlanError::at(
                        self,
                        Some("children"),
                        format!("centre of dimension {d} in a {n}-fold has codimension below 2"),
                    ));
                }
                n
            }
            NodeKind::LefschetzSection(a) => {
                let n = a.validate_inner(m, seen)?;
                if n < 2 {
                    return Err(PlanError::at(self, Some("children"), format!("section of a {n}-fold")));
                }
                n - 1
            }
            NodeKind::ChiSection { base, b, .. } => {
                residue(*b, "b")?;
                let n = base.validate_inner(m, seen)?;
                if n < 2 {
                    return Err(PlanError::at(self, Some("children"), format!("section of a {n}-fold")));
                }
                n - 1
            }
            NodeKind::AsymmetricBlowup { base, r, b, c, surface } => {
                residue(*b, "b")?;
                residue(*c, "c")?;
                let n = base.validate_inner(m, seen)?;
                if *r < 1 || *r + 1 > n {
                    return Err(PlanError::at(self, Some("r"), format!("r = {r} outside [1, {}]", n as i64 - 1)));
                }
                let middle = *r >= 2 && *r + 2 <= n;
                if !middle && b != c {
                    return Err(PlanError::at(self, Some("c"), format!("r = {r} requires b = c")));
                }
                match (middle, surface) {
                    (true, Some(s)) => {
                        let d = s.validate_inner(m, seen)?;
                        if d != 2 {
                            return Err(PlanError::at(self, Some("children"), format!("surface subplan has dimension {d}")));
                        }
                    }
                    (true, None) => {
                        return Err(PlanError::at(self, Some("children"), "missing surface subplan"));
                    }
                    (false, Some(_)) => {
                        return Err(PlanError::at(self, Some("children"), "surface subplan only allowed for 2 <= r <= n-2"));
                    }
                    (false, None) => {}
                }
                n
            }
            NodeKind::InnerRound { base, ptilde } => {
                let n = base.validate_inner(m, seen)?;
                if n < 2 {
                    return Err(PlanError::at(self, Some("children"), format!("inner round on a {n}-fold")));
                }
                let d = ptilde.validate_inner(m, seen)?;
                if d + 2 != n {
                    return Err(PlanError::at(self, Some("children"), format!("ptilde has dimension {d}, need {}", n - 2)));
                }
                let mut root = &**ptilde;
                while root.kind.is_blowup() {
                    root = root.children()[0];
                }
                let ok = match root.kind {
                    NodeKind::Atom(AtomSpec::ProjectiveSpace(k)) => k == n - 2,
                    NodeKind::Atom(AtomSpec::Point) => n == 2,
                    _ => false,
                };
                if !ok {
                    return Err(PlanError::at(
                        self,
                        Some("children"),
                        format!("ptilde must be a blowup chain over P^{}", n - 2),
                    ));
                }
                n
            }
        })
    }
}

impl Plan {
    pub fn new(m: u64, root: PlanNode) -> Self {
        Plan { m, root, assignment: None }
    }

    pub fn validate(&self) -> Result<usize, PlanError> {
        if self.m < 2 {
            return Err(PlanError { path: self.root.path.clone(), field: Some("m".into()), msg: "modulus must be at least 2".into() });
        }
        self.root.validate(self.m)
    }

    pub fn dim(&self) -> usize {
        self.root.dim()
    }
}
