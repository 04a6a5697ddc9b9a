//! Recursive constructions producing plans for prescribed residues.
//!
//! Outer entries (`p` or `q` in `{0, n}`) are realized by products and
//! sections and come out certified: their residues do not depend on any
//! unknown. Inner entries are then adjusted by blowups, whose sizes are
//! chosen after reading the current Hodge numbers under the model
//! assignment.
//!
//! Node paths are derived from the position of a step inside the
//! construction (`x/outer/low/Z/...`), so identical inputs give identical
//! plans and identical unknown names.

use thiserror::Error;

use crate::algebra::{residue, AlgebraError, Assignment};
use crate::calculus::AtomSpec;
use crate::diamond::{DiamondError, ResidueTargets, TargetsError};
use crate::plan::{combine, eval_node, EvalError, Evaluated, Justification, NodeKind, Plan, PlanNode, Recorder};

#[derive(Debug, Error)]
pub enum PlannerError {
    #[error(transparent)]
    Targets(#[from] TargetsError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Diamond(#[from] DiamondError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("{0}")]
    Invalid(String),
}

type Result<T> = std::result::Result<T, PlannerError>;

pub struct PlannerContext {
    pub m: u64,
    /// Model values of the unknown Hodge numbers.
    pub sigma: Assignment,
}

impl PlannerContext {
    pub fn new(m: u64, sigma: Assignment) -> Self {
        PlannerContext { m, sigma }
    }

    fn res(&self, x: i128) -> u64 {
        residue(x, self.m)
    }

    /// Model value of `h^{p,q}` of an evaluated plan.
    fn read(&self, x: &Built, p: usize, q: usize) -> Result<i128> {
        Ok(x.value.diamond.entry(p, q)?.eval(&self.sigma)?)
    }
}

/// A plan subtree together with its evaluation.
#[derive(Clone, Debug)]
pub struct Built {
    pub node: PlanNode,
    pub value: Evaluated,
}

/// Targets on the outer positions `(p, 0)` and `(0, q)` of an `n`-fold.
/// `row[p]` is the target for `h^{p,0}`, `col[q]` the target for `h^{0,q}`.
/// No symmetry between `row[n]` and `col[n]` is assumed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OuterTargets {
    pub row: Vec<u64>,
    pub col: Vec<u64>,
}

impl OuterTargets {
    pub fn new(row: Vec<u64>, col: Vec<u64>) -> Result<Self> {
        if row.is_empty() || row.len() != col.len() {
            return Err(PlannerError::Invalid("outer targets need equally long rows and columns".into()));
        }
        Ok(OuterTargets { row, col })
    }

    pub fn n(&self) -> usize {
        self.row.len() - 1
    }

    /// Outer targets read off full residue targets; unset entries fall
    /// back to their dual, then to 0.
    pub fn from_targets(t: &ResidueTargets) -> Self {
        let n = t.n();
        let get = |p: usize, q: usize| t.get_or_dual(p, q).unwrap_or(u64::from(p + q == 0));
        OuterTargets {
            row: (0..=n).map(|p| get(p, 0)).collect(),
            col: (0..=n).map(|q| get(0, q)).collect(),
        }
    }

    fn truncated(&self) -> Self {
        let n = self.n();
        OuterTargets { row: self.row[..n].to_vec(), col: self.col[..n].to_vec() }
    }
}

fn node(kind: NodeKind, reference: &str, note: impl Into<String>, path: impl Into<String>) -> PlanNode {
    PlanNode::new(kind, Justification::new(reference, note), path)
}

fn atom_node(spec: AtomSpec, path: impl Into<String>) -> PlanNode {
    let note = match spec {
        AtomSpec::SerreSurface => "surface with h^{1,0} = 0 and h^{0,1} = 1; h^{2,0}, h^{1,1} left unknown".to_string(),
        other => format!("diamond of {}", other.label()),
    };
    node(NodeKind::Atom(spec), "atom-diamond", note, path)
}

/// Evaluates a freshly planned subtree and stores the section metadata it
/// produced in the nodes.
pub fn build(mut root: PlanNode, ctx: &PlannerContext) -> Result<Built> {
    root.validate(ctx.m).map_err(EvalError::from)?;
    let mut rec = Recorder::light();
    let value = eval_node(&root, ctx.m, &ctx.sigma, None, &mut rec)?;
    root.visit_mut(&mut |n| {
        if let NodeKind::ChiSection { metadata, .. } = &mut n.kind {
            if let Some(md) = rec.chi.get(&n.path) {
                *metadata = Some(*md);
            }
        }
    });
    Ok(Built { node: root, value })
}

/// A variety of dimension at least `n - 1` whose outer entries on
/// `J_{n-1}` match `t` (which has `t.n() = n - 1`), without assuming
/// `t.row[n-1] = t.col[n-1]`.
pub fn solve_outer_low(n: usize, t: &OuterTargets, ctx: &PlannerContext, scope: &str) -> Result<PlanNode> {
    if n < 2 || t.n() + 1 != n {
        return Err(PlannerError::Invalid(format!("low outer solve needs n >= 2 and targets on J_{}", n.saturating_sub(1))));
    }
    let m = ctx.m;
    if n == 2 {
        let (a10, a01) = (i128::from(t.row[1]), i128::from(t.col[1]));
        let i = ctx.res(a01 - a10) as usize;
        let j = match ctx.res(a10) {
            0 => m as usize,
            j => j as usize,
        };
        let s = node(
            NodeKind::Power(Box::new(atom_node(AtomSpec::SerreSurface, format!("{scope}/S"))), i),
            "kuenneth-formula",
            format!("i = {i} = a01 - a10 mod {m}"),
            format!("{scope}/Si"),
        );
        let e = node(
            NodeKind::Power(Box::new(atom_node(AtomSpec::EllipticCurve, format!("{scope}/E"))), j),
            "kuenneth-formula",
            format!("j = {j} = a10 mod {m}, j >= 1"),
            format!("{scope}/Ej"),
        );
        return Ok(node(
            NodeKind::Product(Box::new(s), Box::new(e)),
            "kuenneth-formula",
            "S^i x E^j: h^{1,0} = j, h^{0,1} = i + j",
            scope,
        ));
    }

    let d = n - 1;
    let sign = |q: usize| if q.is_multiple_of(2) { 1 } else { m - 1 };
    let mut y_row = vec![0; d + 1];
    let mut y_col: Vec<u64> = (0..=d).map(sign).collect();
    y_row[0] = 1;
    y_col[d] = 0;
    let y = solve_outer(d, &OuterTargets::new(y_row, y_col)?, ctx, &format!("{scope}/Y"))?;
    let s = solve_outer(2, &OuterTargets::new(vec![1, 0, 0], vec![1, 1, 0])?, ctx, &format!("{scope}/T"))?;
    let mut z_t = t.clone();
    z_t.col[d] = t.row[d];
    let z = solve_outer(d, &z_t, ctx, &format!("{scope}/Z"))?;

    let diff = i128::from(t.col[d]) - i128::from(t.row[d]);
    let i = ctx.res(if n.is_multiple_of(2) { diff } else { -diff }) as usize;
    let sy = node(
        NodeKind::Product(Box::new(s), Box::new(y)),
        "kuenneth-formula",
        format!("outer entries vanish mod {m} on J_{d} except h^{{0,0}} and h^{{0,{d}}}"),
        format!("{scope}/TY"),
    );
    let pow = node(
        NodeKind::Power(Box::new(sy), i),
        "kuenneth-formula",
        format!("i = {i}: each factor moves h^{{0,{d}}} by (-1)^{n}"),
        format!("{scope}/pow"),
    );
    Ok(node(
        NodeKind::Product(Box::new(z), Box::new(pow)),
        "kuenneth-formula",
        format!("dimension {} = n - 1 + i(n + 1)", d + i * (n + 1)),
        scope,
    ))
}

/// Raises `x` (dimension at least `n - 1`) to an `n`-fold keeping the outer
/// entries of degree at most `n - 1` and pinning `h^{n,0} = h^{0,n}` to `b`.
pub fn outer_mid_lift(x: PlanNode, n: usize, b: u64, ctx: &PlannerContext, scope: &str) -> Result<PlanNode> {
    let m = ctx.m;
    if n == 0 || x.dim() + 1 < n || b >= m {
        return Err(PlannerError::Invalid(format!(
            "cannot lift a {}-fold to dimension {n} with residue {b} mod {m}",
            x.dim()
        )));
    }
    let mut cur = x;
    let mut k = 0;
    while cur.dim() < n + 1 {
        let p2 = atom_node(AtomSpec::ProjectiveSpace(2), format!("{scope}/lift{k}/P2"));
        cur = node(
            NodeKind::Product(Box::new(cur), Box::new(p2)),
            "kuenneth-formula",
            format!("product with P^2 keeps outer entries of degree <= {}", n - 1),
            format!("{scope}/lift{k}"),
        );
        k += 1;
    }
    let mut j = 0;
    while cur.dim() > n + 1 {
        cur = node(
            NodeKind::LefschetzSection(Box::new(cur)),
            "lefschetz-section",
            "section of high degree keeps h^{p,q} for p + q below its dimension",
            format!("{scope}/sec{j}"),
        );
        j += 1;
    }
    Ok(node(
        NodeKind::ChiSection { base: Box::new(cur), b, metadata: None },
        "chi-controlled-section",
        format!(
            "after {m} point blowups, a section of a line bundle L with chi(L^-1) = e mod {m} has h^{{0,{n}}} = {b} mod {m}; reads chi(O) from the model assignment"
        ),
        scope,
    ))
}

/// An `n`-fold whose outer entries on `J_n` match `t`, all certified.
pub fn solve_outer(n: usize, t: &OuterTargets, ctx: &PlannerContext, scope: &str) -> Result<PlanNode> {
    if t.n() != n {
        return Err(PlannerError::Invalid(format!("targets are for dimension {}, not {n}", t.n())));
    }
    if t.row[0] % ctx.m != 1 % ctx.m || t.col[0] % ctx.m != 1 % ctx.m {
        return Err(PlannerError::Invalid("h^{0,0} must be 1".into()));
    }
    if t.row[n] != t.col[n] {
        return Err(PlannerError::Invalid(format!(
            "h^{{{n},0}} and h^{{0,{n}}} are dual and need equal targets, got {} and {}",
            t.row[n], t.col[n]
        )));
    }
    if t.row.iter().chain(&t.col).any(|&v| v >= ctx.m) {
        return Err(PlannerError::Invalid(format!("targets must be residues modulo {}", ctx.m)));
    }
    match n {
        0 => Ok(atom_node(AtomSpec::Point, scope)),
        1 => outer_mid_lift(atom_node(AtomSpec::Point, format!("{scope}/base")), 1, t.row[1], ctx, scope),
        _ => {
            let low = solve_outer_low(n, &t.truncated(), ctx, &format!("{scope}/low"))?;
            outer_mid_lift(low, n, t.row[n], ctx, scope)
        }
    }
}

/// Blowup of `x` changing `h^{r,1}` by `b` and `h^{1,r}` by `c` modulo `m`,
/// and no `h^{p,1}`, `h^{1,p}` with `p > r`.
pub fn asymmetric_blowup(x: Built, r: usize, b: u64, c: u64, ctx: &PlannerContext, scope: &str) -> Result<Built> {
    let n = x.node.dim();
    let m = ctx.m;
    if r < 1 || r + 1 > n || b >= m || c >= m {
        return Err(PlannerError::Invalid(format!("asymmetric blowup with r = {r}, b = {b}, c = {c} on a {n}-fold")));
    }
    let middle = r >= 2 && r + 2 <= n;
    if !middle && b != c {
        return Err(PlannerError::Invalid(format!("r = {r} on a {n}-fold requires b = c")));
    }
    let mut kids = vec![x.value];
    let (surface, note) = if middle {
        let t = OuterTargets::new(vec![1, b, 0], vec![1, c, 0])?;
        let s = build(solve_outer(2, &t, ctx, &format!("{scope}/S"))?, ctx)?;
        kids.push(s.value);
        (
            Some(Box::new(s.node)),
            format!("blow up a {r}-fold W built from the surface subplan with h^{{{r},0}}(W) = 0, h^{{{},0}}(W) = {b}, h^{{0,{}}}(W) = {c} mod {m}; the intermediate blowups change nothing mod {m}", r - 1, r - 1),
        )
    } else if r == 1 {
        (None, format!("blow up {b} points"))
    } else {
        (None, format!("blow up {b} points and {b} hypersurfaces of degree {n} in P^{}", n - 1))
    };
    let node = node(
        NodeKind::AsymmetricBlowup { base: Box::new(x.node), r, b, c, surface },
        "asymmetric-blowup",
        format!("{note}; b, c read from the model assignment"),
        scope,
    );
    let value = combine(&node, kids, None, m, &ctx.sigma, &mut Recorder::light())?;
    Ok(Built { node, value })
}

/// Adjusts the second outer entries `h^{r,1}`, `h^{1,r}` of `x` to the
/// targets, for `r` from `n - 1` down to 1. Unset targets are left alone.
pub fn solve_second_outer(x: Built, t: &ResidueTargets, ctx: &PlannerContext, scope: &str) -> Result<Built> {
    let n = x.node.dim();
    if n < 2 {
        return Ok(x);
    }
    let mut cur = x;
    for r in (1..n).rev() {
        let delta = |cur: &Built, p: usize, q: usize| -> Result<u64> {
            match t.get_or_dual(p, q) {
                Some(a) => Ok(ctx.res(i128::from(a) - ctx.read(cur, p, q)?)),
                None => Ok(0),
            }
        };
        let b = delta(&cur, r, 1)?;
        let c = delta(&cur, 1, r)?;
        if b == 0 && c == 0 {
            continue;
        }
        cur = asymmetric_blowup(cur, r, b, c, ctx, &format!("{scope}/r{r}"))?;
    }
    Ok(cur)
}

/// Blows up `x` so that its inner entries match `t` under the model
/// assignment. Unset targets fall back to their dual, then to 0.
pub fn solve_inner(x: Built, t: &ResidueTargets, ctx: &PlannerContext, scope: &str) -> Result<Built> {
    let n = x.node.dim();
    if n <= 1 {
        return Ok(x);
    }
    let m = ctx.m;
    let target = |p: usize, q: usize| i128::from(t.get_or_dual(p, q).unwrap_or(0));

    let mut second = ResidueTargets::new(m, n)?;
    for (p, q) in ResidueTargets::second_outer_index_set(n) {
        second.set(p, q, target(p, q) - i128::from(p == q))?;
    }
    let x1 = solve_second_outer(x, &second, ctx, &format!("{scope}/outer2"))?;

    let d = n - 2;
    let mut pt_targets = ResidueTargets::new(m, d)?;
    for p in 1..d {
        for q in 1..d {
            pt_targets.set(p, q, target(p + 1, q + 1) - ctx.read(&x1, p + 1, q + 1)?)?;
        }
    }
    let base = build(atom_node(AtomSpec::ProjectiveSpace(d), format!("{scope}/pt/P")), ctx)?;
    let pt = solve_inner(base, &pt_targets, ctx, &format!("{scope}/pt"))?;

    let node = node(
        NodeKind::InnerRound { base: Box::new(x1.node), ptilde: Box::new(pt.node) },
        "inner-round",
        format!(
            "{m} times: blow up a point and replay the centres of ptilde inside its exceptional P^{d}; then blow up ptilde (codimension 2). Targets for ptilde read from the model assignment"
        ),
        scope,
    );
    let value = combine(&node, vec![x1.value, pt.value], None, m, &ctx.sigma, &mut Recorder::light())?;
    Ok(Built { node, value })
}

/// Plan for a variety whose Hodge numbers match `targets` modulo `m`.
/// Unset targets fall back to their dual, then to the value of a point.
pub fn solve_full(targets: &ResidueTargets, sigma: &Assignment) -> Result<Plan> {
    let (m, n) = (targets.m(), targets.n());
    let ctx = PlannerContext::new(m, sigma.clone());
    let outer = solve_outer(n, &OuterTargets::from_targets(targets), &ctx, "x/outer")?;
    let built = solve_inner(build(outer, &ctx)?, targets, &ctx, "x")?;
    Ok(Plan { m, root: built.node, assignment: Some(sigma.to_doc()) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diamond::HodgeDiamond;
    use crate::plan::eval_plan;
    use crate::verify::verify;

    fn ctx(m: u64) -> PlannerContext {
        PlannerContext::new(m, Assignment::random(7, 10))
    }

    fn eval(node: &PlanNode, c: &PlannerContext) -> HodgeDiamond {
        build(node.clone(), c).unwrap().value.diamond
    }

    fn outer(row: &[u64], col: &[u64]) -> OuterTargets {
        OuterTargets::new(row.to_vec(), col.to_vec()).unwrap()
    }

    #[test]
    fn low_surface_case_exponents() {
        let c = ctx(3);
        let plan = solve_outer_low(2, &outer(&[1, 2], &[1, 1]), &c, "t").unwrap();
        let NodeKind::Product(s, e) = &plan.kind else { panic!() };
        assert!(matches!(s.kind, NodeKind::Power(_, 2)));
        assert!(matches!(e.kind, NodeKind::Power(_, 2)));
        let d = eval(&plan, &c);
        assert_eq!(d.get(1, 0).as_constant(), Some(2));
        assert_eq!(d.get(0, 1).as_constant(), Some(4));

        let c = ctx(2);
        let plan = solve_outer_low(2, &outer(&[1, 0], &[1, 1]), &c, "t").unwrap();
        let NodeKind::Product(s, e) = &plan.kind else { panic!() };
        assert!(matches!(s.kind, NodeKind::Power(_, 1)));
        assert!(matches!(e.kind, NodeKind::Power(_, 2)));
    }

    #[test]
    fn low_threefold_case_certifies_asymmetric_top() {
        for m in [2, 3, 4] {
            let c = ctx(m);
            let t = outer(&[1, 1 % m, 0], &[1, 0, 1 % m]);
            let plan = solve_outer_low(3, &t, &c, "t").unwrap();
            let d = eval(&plan, &c);
            assert_eq!(d.get(0, 2).const_mod(m), Some(1 % m));
            assert_eq!(d.get(2, 0).const_mod(m), Some(0));
            assert_eq!(d.get(1, 0).const_mod(m), Some(1 % m));
            assert_eq!(d.get(0, 1).const_mod(m), Some(0));
        }
    }

    #[test]
    fn lift_a_point_to_a_curve() {
        for b in 0..4 {
            let c = ctx(4);
            let plan = outer_mid_lift(atom_node(AtomSpec::Point, "t/pt"), 1, b, &c, "t").unwrap();
            let d = eval(&plan, &c);
            assert_eq!(d.n(), 1);
            assert_eq!(d.get(1, 0).const_mod(4), Some(b));
            assert_eq!(d.get(0, 1).const_mod(4), Some(b));
        }
    }

    #[test]
    fn lift_from_dimension_n_plus_one_is_a_single_section() {
        let c = ctx(3);
        let plan = outer_mid_lift(atom_node(AtomSpec::ProjectiveSpace(4), "t/P4"), 3, 2, &c, "t").unwrap();
        let NodeKind::ChiSection { base, .. } = &plan.kind else { panic!() };
        assert!(matches!(base.kind, NodeKind::Atom(_)));
        assert!(outer_mid_lift(atom_node(AtomSpec::Point, "t/pt"), 3, 0, &c, "u").is_err());
    }

    #[test]
    fn outer_surface_shows_asymmetry() {
        let c = ctx(2);
        let plan = solve_outer(2, &outer(&[1, 0, 0], &[1, 1, 0]), &c, "t").unwrap();
        let d = eval(&plan, &c);
        assert_eq!(d.get(1, 0).const_mod(2), Some(0));
        assert_eq!(d.get(0, 1).const_mod(2), Some(1));
        assert_eq!(d.get(2, 0).const_mod(2), Some(0));
        assert_eq!((d.get(0, 1) - d.get(1, 0)).const_mod(2), Some(1));

        let p = solve_outer(0, &outer(&[1], &[1]), &c, "t").unwrap();
        assert_eq!(eval(&p, &c), HodgeDiamond::point());
        assert!(solve_outer(2, &outer(&[1, 0, 1], &[1, 1, 0]), &c, "t").is_err());
    }

    #[test]
    fn asymmetric_blowup_ends() {
        let c = ctx(3);
        let x = build(atom_node(AtomSpec::ProjectiveSpace(3), "t/P"), &c).unwrap();
        let y = asymmetric_blowup(x.clone(), 1, 2, 2, &c, "t/a").unwrap();
        assert_eq!(y.value.diamond.get(1, 1).as_constant(), Some(3));

        let c = ctx(5);
        let x = build(atom_node(AtomSpec::ProjectiveSpace(4), "t/P"), &c).unwrap();
        let y = asymmetric_blowup(x.clone(), 3, 1, 1, &c, "t/a").unwrap();
        let (dx, dy) = (&x.value.diamond, &y.value.diamond);
        assert_eq!((dy.get(3, 1) - dx.get(3, 1)).as_constant(), Some(1));
        assert_eq!((dy.get(1, 3) - dx.get(1, 3)).as_constant(), Some(1));
        assert!(asymmetric_blowup(x, 3, 1, 2, &c, "t/b").is_err());
    }

    #[test]
    fn asymmetric_blowup_middle_levels() {
        for (n, r) in [(5, 2), (5, 3), (6, 3), (6, 4)] {
            let c = ctx(2);
            let x = build(atom_node(AtomSpec::ProjectiveSpace(n), "t/P"), &c).unwrap();
            let y = asymmetric_blowup(x.clone(), r, 1, 0, &c, "t/a").unwrap();
            let (dx, dy) = (&x.value.diamond, &y.value.diamond);
            assert_eq!((dy.get(r, 1) - dx.get(r, 1)).const_mod(2), Some(1), "n={n} r={r}");
            assert_eq!((dy.get(1, r) - dx.get(1, r)).const_mod(2), Some(0), "n={n} r={r}");
            for p in r + 1..=n {
                assert_eq!((dy.get(p, 1) - dx.get(p, 1)).const_mod(2), Some(0));
                assert_eq!((dy.get(1, p) - dx.get(1, p)).const_mod(2), Some(0));
            }
            let w = y
                .value
                .trace
                .iter()
                .rev()
                .find_map(|e| match e {
                    crate::plan::TraceEntry::Centre(w) => Some(w.clone()),
                    _ => None,
                })
                .unwrap();
            assert_eq!(w.n(), r);
            assert_eq!(w.get(r, 0).const_mod(2), Some(0));
            assert_eq!(w.get(r - 1, 0).const_mod(2), Some(1));
            assert_eq!(w.get(0, r - 1).const_mod(2), Some(0));
        }
    }

    #[test]
    fn second_outer_on_projective_threefold() {
        let c = ctx(2);
        let x = build(atom_node(AtomSpec::ProjectiveSpace(3), "t/P"), &c).unwrap();
        let t = ResidueTargets::from_entries(2, 3, [((1, 1), 0), ((2, 1), 1), ((1, 2), 1)]).unwrap();
        let y = solve_second_outer(x, &t, &c, "t/s").unwrap();
        let report = crate::diamond::check_targets(&y.value.diamond, &t, &c.sigma).unwrap();
        assert!(report.pass);

        let x = build(atom_node(AtomSpec::ProjectiveSpace(3), "t/P"), &c).unwrap();
        let t = ResidueTargets::from_entries(2, 3, [((1, 1), 1), ((2, 1), 0)]).unwrap();
        let y = solve_second_outer(x.clone(), &t, &c, "t/s").unwrap();
        assert_eq!(y.node, x.node);
    }

    #[test]
    fn inner_surface_case_is_a_single_point_round() {
        let c = ctx(3);
        let x = build(atom_node(AtomSpec::ProjectiveSpace(2), "t/P"), &c).unwrap();
        let t = ResidueTargets::from_entries(3, 2, [((1, 1), 0)]).unwrap();
        let y = solve_inner(x, &t, &c, "t").unwrap();
        assert_eq!(y.value.diamond.get(1, 1).eval(&c.sigma).unwrap() % 3, 0);
        let NodeKind::InnerRound { base, .. } = &y.node.kind else { panic!() };
        assert!(matches!(base.kind, NodeKind::AsymmetricBlowup { r: 1, .. }));
    }

    #[test]
    fn full_solve_curve_and_rejections() {
        let sigma = Assignment::random(3, 10);
        let t = ResidueTargets::from_entries(5, 1, [((1, 0), 3), ((0, 1), 3)]).unwrap();
        let plan = solve_full(&t, &sigma).unwrap();
        let r = verify(&plan, &t, &sigma).unwrap();
        assert!(r.pass && r.entries.iter().all(|e| e.certified));
        assert!(ResidueTargets::from_entries(5, 2, [((1, 0), 3), ((1, 2), 2)]).is_err());
    }

    #[test]
    fn full_solve_is_deterministic_and_verifies() {
        let sigma = Assignment::random(11, 10);
        let mut t = ResidueTargets::new(3, 3).unwrap();
        for (p, q, v) in [(1, 0, 2), (0, 1, 1), (2, 0, 0), (0, 2, 2), (3, 0, 1), (1, 1, 2), (2, 1, 1)] {
            t.set(p, q, v).unwrap();
        }
        let a = solve_full(&t, &sigma).unwrap();
        let b = solve_full(&t, &sigma).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        let r = verify(&a, &t, &sigma).unwrap();
        assert!(r.pass, "{}", r.to_json());
        assert_eq!(eval_plan(&a, &sigma).unwrap().n(), 3);
    }
}
