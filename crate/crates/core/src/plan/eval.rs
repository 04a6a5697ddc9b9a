use std::collections::BTreeMap;

use thiserror::Error;

use super::{NodeKind, Plan, PlanError, PlanNode};
use crate::algebra::Assignment;
use crate::calculus::{
    atom, blowup_shift, chi_section_parts, inner_increment, kuenneth, kuenneth_capped,
    lefschetz_section, point_shift, power_capped, AtomSpec, CalculusError, ChiMetadata,
};
use crate::diamond::{DiamondError, Grid, HodgeDiamond};

/// One blowup performed while building a variety, as seen by a later
/// replication of the same sequence inside a larger ambient space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceEntry {
    Centre(HodgeDiamond),
    /// A blowup sequence whose centres are not tracked individually; its
    /// replication contributes a fresh inner increment.
    Opaque { dim: usize },
}

#[derive(Clone, Debug)]
pub struct Evaluated {
    pub diamond: HodgeDiamond,
    pub trace: Vec<TraceEntry>,
}

/// Per-node evaluation data consumed by the structural audits.
#[derive(Clone, Debug)]
pub struct NodeRecord {
    pub path: String,
    pub kind: &'static str,
    /// Diamond of the base child, for nodes that modify a single base.
    pub input: Option<HodgeDiamond>,
    pub output: HodgeDiamond,
    /// Part of the change that is a multiple of `m` by construction.
    pub replicated: Option<Grid>,
    /// Part of the change allowed to move residues.
    pub visible: Option<Grid>,
    /// `(r, b, c)` of an asymmetric blowup.
    pub asym: Option<(usize, u64, u64)>,
    /// Pinned residue of a chi-controlled section.
    pub pinned: Option<u64>,
}

#[derive(Debug, Default)]
pub struct Recorder {
    keep: bool,
    pub records: Vec<NodeRecord>,
    pub chi: BTreeMap<String, ChiMetadata>,
}

impl Recorder {
    /// Collects only section metadata.
    pub fn light() -> Self {
        Recorder::default()
    }

    /// Collects a full [`NodeRecord`] per evaluated node.
    pub fn full() -> Self {
        Recorder { keep: true, ..Recorder::default() }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error("node {path}: {source}")]
    Calculus { path: String, source: CalculusError },
}

fn at<E: Into<CalculusError>>(node: &PlanNode) -> impl FnOnce(E) -> EvalError + '_ {
    move |e| EvalError::Calculus { path: node.path.clone(), source: e.into() }
}

/// Degree caps requested from each child when the parent only needs the
/// band `p + q <= need`.
fn child_needs(node: &PlanNode, need: Option<usize>) -> Vec<Option<usize>> {
    match &node.kind {
        NodeKind::Atom(_) => vec![],
        NodeKind::Product(..) => vec![need, need],
        NodeKind::Power(..) | NodeKind::BlowupPoints(..) => vec![need],
        NodeKind::BlowupCentre(..) | NodeKind::InnerRound { .. } => vec![need, None],
        NodeKind::LefschetzSection(_) => {
            let n = node.dim();
            let copied = n.saturating_sub(1);
            vec![Some(need.map_or(copied, |k| k.min(copied)))]
        }
        NodeKind::ChiSection { .. } => vec![None],
        NodeKind::AsymmetricBlowup { surface, .. } => {
            if surface.is_some() {
                vec![need, None]
            } else {
                vec![need]
            }
        }
    }
}

/// Evaluates `node`, materializing at least the band `p + q <= need`
/// (everything when `need` is `None`).
pub fn eval_node(
    node: &PlanNode,
    m: u64,
    sigma: &Assignment,
    need: Option<usize>,
    rec: &mut Recorder,
) -> Result<Evaluated, EvalError> {
    let needs = child_needs(node, need);
    let mut kids = Vec::with_capacity(needs.len());
    for (c, nd) in node.children().into_iter().zip(needs) {
        kids.push(eval_node(c, m, sigma, nd, rec)?);
    }
    combine(node, kids, need, m, sigma, rec)
}

/// Validates and evaluates a whole plan.
pub fn eval_plan(plan: &Plan, sigma: &Assignment) -> Result<HodgeDiamond, EvalError> {
    plan.validate()?;
    Ok(eval_node(&plan.root, plan.m, sigma, None, &mut Recorder::light())?.diamond)
}

pub fn eval_with_records(plan: &Plan, sigma: &Assignment) -> Result<(Evaluated, Recorder), EvalError> {
    plan.validate()?;
    let mut rec = Recorder::full();
    let out = eval_node(&plan.root, plan.m, sigma, None, &mut rec)?;
    Ok((out, rec))
}

fn points(k: usize) -> impl Iterator<Item = TraceEntry> {
    std::iter::repeat_with(|| TraceEntry::Centre(HodgeDiamond::point())).take(k)
}

struct Change {
    replicated: Option<Grid>,
    visible: Grid,
}

/// Applies `node` to already evaluated children, in `children()` order.
pub(crate) fn combine(
    node: &PlanNode,
    kids: Vec<Evaluated>,
    need: Option<usize>,
    m: u64,
    sigma: &Assignment,
    rec: &mut Recorder,
) -> Result<Evaluated, EvalError> {
    let path = node.path.as_str();
    let mm = i128::from(m);
    let mut kids = kids.into_iter();
    let mut next = || kids.next().expect("child evaluated");
    let mut record = NodeRecord {
        path: node.path.clone(),
        kind: node.kind.name(),
        input: None,
        output: HodgeDiamond::point(),
        replicated: None,
        visible: None,
        asym: None,
        pinned: None,
    };

    let (diamond, trace) = match &node.kind {
        NodeKind::Atom(spec) => (atom(*spec, path).map_err(at(node))?, vec![]),
        NodeKind::Product(..) => {
            let (a, b) = (next(), next());
            (kuenneth_capped(&a.diamond, &b.diamond, need).map_err(at(node))?, vec![])
        }
        NodeKind::Power(_, k) => {
            let a = next();
            (power_capped(&a.diamond, *k, need).map_err(at(node))?, vec![])
        }
        NodeKind::LefschetzSection(_) => {
            let a = next();
            let out = lefschetz_section(&a.diamond, path).map_err(at(node))?;
            record.input = Some(a.diamond);
            (out, vec![])
        }
        NodeKind::ChiSection { b, .. } => {
            let a = next();
            let parts = chi_section_parts(&a.diamond, *b, m, sigma, path).map_err(at(node))?;
            rec.chi.insert(node.path.clone(), parts.metadata);
            let dim = parts.diamond.n();
            record.input = Some(a.diamond);
            record.replicated = Some(parts.replicated);
            record.pinned = Some(*b);
            (parts.diamond, vec![TraceEntry::Opaque { dim }])
        }
        kind => {
            let base = next();
            let n = base.diamond.n();
            let mut trace = base.trace;
            let change = match kind {
                NodeKind::BlowupPoints(_, k) => {
                    trace.extend(points(*k));
                    let k = i128::try_from(*k).map_err(|_| at(node)(crate::algebra::AlgebraError::Overflow))?;
                    Change { replicated: None, visible: scaled(point_shift(n), k, node)? }
                }
                NodeKind::BlowupCentre(..) => {
                    let z = next().diamond;
                    let codim = n.saturating_sub(z.n());
                    let visible = blowup_shift(&z, codim).map_err(at(node))?;
                    trace.push(TraceEntry::Centre(z));
                    Change { replicated: None, visible }
                }
                NodeKind::AsymmetricBlowup { r, b, c, .. } => {
                    record.asym = Some((*r, *b, *c));
                    asymmetric(node, n, *r, *b, m, &mut trace, &mut next)?
                }
                NodeKind::InnerRound { .. } => {
                    let pt = next();
                    let mut rep = point_shift(n).map_err(at(node))?;
                    let mut replicated_trace = Vec::new();
                    for (k, entry) in pt.trace.iter().enumerate() {
                        let inc = match entry {
                            TraceEntry::Centre(c) => {
                                blowup_shift(c, n - c.n()).map_err(at(node))?
                            }
                            TraceEntry::Opaque { .. } => inner_increment(n, &format!("{path}/rep{k}")),
                        };
                        rep = rep.checked_add(&inc).map_err(at(node))?;
                        replicated_trace.push(entry.clone());
                    }
                    let visible = blowup_shift(&pt.diamond, 2).map_err(at(node))?;
                    for _ in 0..m {
                        trace.push(TraceEntry::Centre(HodgeDiamond::point()));
                        trace.extend(replicated_trace.iter().cloned());
                    }
                    trace.push(TraceEntry::Centre(pt.diamond));
                    Change { replicated: Some(rep.checked_scale(mm).map_err(at(node))?), visible }
                }
                _ => unreachable!("non-blowup kinds handled above"),
            };
            let mut total = change.visible.clone();
            if let Some(r) = &change.replicated {
                total = total.checked_add(r).map_err(at(node))?;
            }
            let out = base.diamond.add_increment(&total).map_err(at(node))?;
            record.input = Some(base.diamond);
            record.replicated = change.replicated;
            record.visible = Some(change.visible);
            (out, trace)
        }
    };

    if rec.keep {
        record.output = diamond.clone();
        rec.records.push(record);
    }
    Ok(Evaluated { diamond, trace })
}

fn scaled(g: Result<Grid, CalculusError>, k: i128, node: &PlanNode) -> Result<Grid, EvalError> {
    g.map_err(at(node))?.checked_scale(k).map_err(at(node))
}

fn asymmetric(
    node: &PlanNode,
    n: usize,
    r: usize,
    b: u64,
    m: u64,
    trace: &mut Vec<TraceEntry>,
    next: &mut impl FnMut() -> Evaluated,
) -> Result<Change, EvalError> {
    let path = node.path.as_str();
    let i = i128::from(b);
    let count = b as usize;
    if r == 1 {
        trace.extend(points(count));
        return Ok(Change { replicated: None, visible: scaled(point_shift(n), i, node)? });
    }
    if r + 1 == n {
        let z = atom(AtomSpec::Hypersurface(n), &format!("{path}/Z")).map_err(at(node))?;
        let visible = scaled(point_shift(n), i, node)?
            .checked_add(&scaled(blowup_shift(&z, 2), i, node)?)
            .map_err(at(node))?;
        trace.extend(points(count));
        trace.extend(std::iter::repeat_with(|| TraceEntry::Centre(z.clone())).take(count));
        return Ok(Change { replicated: None, visible });
    }
    let s = next().diamond;
    let zr = if r >= 3 {
        atom(AtomSpec::Hypersurface(r), &format!("{path}/Z")).map_err(at(node))?
    } else {
        HodgeDiamond::point()
    };
    let w = kuenneth(&s, &zr)
        .map_err(at(node))?
        .add_increment(&inner_increment(r, &format!("{path}/w")))
        .map_err(|e: DiamondError| at(node)(e))?;
    let replicated = inner_increment(n, &format!("{path}/round"))
        .checked_scale(i128::from(m))
        .map_err(at(node))?;
    let visible = blowup_shift(&w, n - r).map_err(at(node))?;
    trace.push(TraceEntry::Opaque { dim: n });
    trace.push(TraceEntry::Centre(w));
    Ok(Change { replicated: Some(replicated), visible })
}
