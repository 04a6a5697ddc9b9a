//! Target checking plus structural audits of an evaluated plan.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, Assignment};
use crate::diamond::{check_targets, dual, is_outer, DiamondError, Grid, HodgeDiamond, ResidueTargets};
use crate::plan::{eval_with_records, EvalError, NodeRecord, Plan};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryRecord {
    pub p: usize,
    pub q: usize,
    pub expected: u64,
    pub got: u64,
    /// The residue holds for every assignment of the unknowns.
    pub certified: bool,
}

impl EntryRecord {
    pub fn ok(&self) -> bool {
        self.expected == self.got
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditResult {
    pub name: String,
    pub pass: bool,
    /// Number of nodes the audit applied to.
    pub checked: usize,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub pass: bool,
    pub entries: Vec<EntryRecord>,
    pub audits: Vec<AuditResult>,
}

impl VerificationReport {
    pub fn new(entries: Vec<EntryRecord>, audits: Vec<AuditResult>) -> Self {
        let pass = entries.iter().all(EntryRecord::ok) && audits.iter().all(|a| a.pass);
        VerificationReport { pass, entries, audits }
    }

    pub fn failing_entries(&self) -> impl Iterator<Item = &EntryRecord> {
        self.entries.iter().filter(|e| !e.ok())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("plan has modulus {plan} but targets have modulus {targets}")]
    Modulus { plan: u64, targets: u64 },
    #[error("plan has dimension {plan} but targets have dimension {targets}")]
    Dimension { plan: usize, targets: usize },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Diamond(#[from] DiamondError),
}

const MAX_FAILURES: usize = 20;

struct Audit {
    result: AuditResult,
}

impl Audit {
    fn new(name: &str) -> Self {
        Audit { result: AuditResult { name: name.into(), pass: true, checked: 0, failures: Vec::new() } }
    }

    fn fail(&mut self, msg: String) {
        self.result.pass = false;
        if self.result.failures.len() < MAX_FAILURES {
            self.result.failures.push(msg);
        }
    }

    fn finish(self) -> AuditResult {
        self.result
    }
}

/// Evaluates `plan` under `sigma`, compares it with `targets` and audits
/// every node.
pub fn verify(plan: &Plan, targets: &ResidueTargets, sigma: &Assignment) -> Result<VerificationReport, VerifyError> {
    if plan.m != targets.m() {
        return Err(VerifyError::Modulus { plan: plan.m, targets: targets.m() });
    }
    let (out, rec) = eval_with_records(plan, sigma)?;
    if out.diamond.n() != targets.n() {
        return Err(VerifyError::Dimension { plan: out.diamond.n(), targets: targets.n() });
    }
    let entries = check_targets(&out.diamond, targets, sigma)?.entries;
    let audits = audit_records(&rec.records, plan.m);
    Ok(VerificationReport::new(entries, audits))
}

/// Runs every structural audit over evaluation records.
pub fn audit_records(records: &[NodeRecord], m: u64) -> Vec<AuditResult> {
    vec![
        audit_invariants(records),
        audit_outer_invariance(records),
        audit_asymmetric_shift(records, m),
        audit_replicated(records, m),
        audit_sections(records, m),
    ]
}

fn diff(out: &HodgeDiamond, input: &HodgeDiamond) -> Result<Grid, AlgebraError> {
    let n = out.n();
    let mut g = Grid::zeros(n);
    for p in 0..=n {
        for q in 0..=n {
            if let (Some(a), Some(b)) = (out.try_get(p, q), input.try_get(p, q)) {
                g.set(p, q, a.checked_sub(b)?);
            }
        }
    }
    Ok(g)
}

fn audit_invariants(records: &[NodeRecord]) -> AuditResult {
    let mut a = Audit::new("diamond-invariants");
    for r in records {
        a.result.checked += 1;
        let d = &r.output;
        if !d.try_get(0, 0).is_some_and(|v| v.as_constant() == Some(1)) {
            a.fail(format!("{}: h^(0,0) is not 1", r.path));
        }
        let n = d.n();
        for p in 0..=n {
            for q in 0..=n {
                let (dp, dq) = dual(n, p, q);
                if let (Some(x), Some(y)) = (d.try_get(p, q), d.try_get(dp, dq)) {
                    if x != y {
                        a.fail(format!("{}: h^({p},{q}) = {x} but h^({dp},{dq}) = {y}", r.path));
                    }
                }
            }
        }
    }
    a.finish()
}

fn blowups(records: &[NodeRecord]) -> impl Iterator<Item = (&NodeRecord, &HodgeDiamond)> {
    records.iter().filter_map(|r| match (r.kind, &r.input) {
        ("BlowupPoints" | "BlowupCentre" | "AsymmetricBlowup" | "InnerRound", Some(i)) => Some((r, i)),
        _ => None,
    })
}

fn audit_outer_invariance(records: &[NodeRecord]) -> AuditResult {
    let mut a = Audit::new("outer-invariance");
    for (r, input) in blowups(records) {
        a.result.checked += 1;
        let n = input.n();
        if r.output.n() != n {
            a.fail(format!("{}: dimension changed from {n} to {}", r.path, r.output.n()));
            continue;
        }
        for p in 0..=n {
            for q in 0..=n {
                if !is_outer(n, p, q) {
                    continue;
                }
                if let (Some(x), Some(y)) = (r.output.try_get(p, q), input.try_get(p, q)) {
                    if x != y {
                        a.fail(format!("{}: outer entry ({p},{q}) changed from {y} to {x}", r.path));
                    }
                }
            }
        }
    }
    a.finish()
}

fn audit_asymmetric_shift(records: &[NodeRecord], m: u64) -> AuditResult {
    let mut a = Audit::new("asymmetric-shift");
    for (rec, input) in blowups(records) {
        let Some((r, b, c)) = rec.asym else { continue };
        a.result.checked += 1;
        let delta = match diff(&rec.output, input) {
            Ok(d) => d,
            Err(e) => {
                a.fail(format!("{}: {e}", rec.path));
                continue;
            }
        };
        let n = input.n();
        let mut expect = |p: usize, q: usize, want: u64| {
            let got = delta.get(p, q).const_mod(m);
            if got != Some(want) {
                let shown = got.map_or("not constant".to_string(), |g| g.to_string());
                a.fail(format!("{}: change at ({p},{q}) is {shown} mod {m}, expected {want}", rec.path));
            }
        };
        for p in r + 1..=n {
            expect(p, 1, 0);
            expect(1, p, 0);
        }
        if r == 1 {
            expect(1, 1, b);
        } else {
            expect(r, 1, b);
            expect(1, r, c);
        }
    }
    a.finish()
}

fn audit_replicated(records: &[NodeRecord], m: u64) -> AuditResult {
    let mut a = Audit::new("replicated-region");
    for (rec, input) in blowups(records) {
        a.result.checked += 1;
        let n = input.n();
        let zero = Grid::zeros(n);
        let rep = rec.replicated.as_ref().unwrap_or(&zero);
        let vis = rec.visible.as_ref().unwrap_or(&zero);
        for (p, q, v) in rep.cells() {
            if v.const_mod(m) != Some(0) {
                a.fail(format!("{}: replicated increment at ({p},{q}) is {v}, not a multiple of {m}", rec.path));
            }
        }
        for p in 0..=n {
            for q in 0..=n {
                let (Some(out), Some(inp)) = (rec.output.try_get(p, q), input.try_get(p, q)) else {
                    continue;
                };
                let rebuilt = inp.checked_add(rep.get(p, q)).and_then(|s| s.checked_add(vis.get(p, q)));
                if rebuilt.as_ref() != Ok(out) {
                    a.fail(format!("{}: ({p},{q}) is not base + replicated + visible", rec.path));
                }
            }
        }
    }
    a.finish()
}

fn audit_sections(records: &[NodeRecord], m: u64) -> AuditResult {
    let mut a = Audit::new("section-contract");
    for rec in records {
        if rec.kind != "LefschetzSection" && rec.kind != "ChiSection" {
            continue;
        }
        let Some(input) = &rec.input else { continue };
        a.result.checked += 1;
        let n = rec.output.n();
        if input.n() != n + 1 {
            a.fail(format!("{}: section of a {}-fold has dimension {n}", rec.path, input.n()));
            continue;
        }
        let zero = Grid::zeros(n + 1);
        let rep = rec.replicated.as_ref().unwrap_or(&zero);
        for (p, q, v) in rep.cells() {
            if v.const_mod(m) != Some(0) {
                a.fail(format!("{}: ambient increment at ({p},{q}) is not a multiple of {m}", rec.path));
            }
        }
        for p in 0..n {
            for q in 0..n - p {
                let (Some(out), Some(amb)) = (rec.output.try_get(p, q), input.try_get(p, q)) else {
                    continue;
                };
                if amb.checked_add(rep.get(p, q)).as_ref() != Ok(out) {
                    a.fail(format!("{}: ({p},{q}) not inherited from the ambient", rec.path));
                }
            }
        }
        if let Some(b) = rec.pinned {
            for (p, q) in [(0, n), (n, 0)] {
                if rec.output.try_get(p, q).and_then(|v| v.const_mod(m)) != Some(b) {
                    a.fail(format!("{}: ({p},{q}) not pinned to {b} mod {m}", rec.path));
                }
            }
        }
    }
    a.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::AtomSpec;
    use crate::plan::{Justification, NodeKind, PlanNode};

    fn node(kind: NodeKind, path: &str) -> PlanNode {
        PlanNode::new(kind, Justification::new("test", ""), path)
    }

    fn blown_plane(count: usize) -> Plan {
        let base = node(NodeKind::Atom(AtomSpec::ProjectiveSpace(2)), "v/P2");
        Plan::new(3, node(NodeKind::BlowupPoints(Box::new(base), count), "v/blow"))
    }

    #[test]
    fn tampered_point_count_fails_on_the_changed_entry() {
        let t = ResidueTargets::from_entries(3, 2, [((1, 1), 2), ((1, 0), 0)]).unwrap();
        let good = verify(&blown_plane(1), &t, &Assignment::zero()).unwrap();
        assert!(good.pass, "{}", good.to_json());
        let bad = verify(&blown_plane(2), &t, &Assignment::zero()).unwrap();
        assert!(!bad.pass);
        let failing: Vec<_> = bad.failing_entries().map(|e| (e.p, e.q, e.got)).collect();
        assert_eq!(failing, vec![(1, 1, 0)]);
        assert!(bad.audits.iter().all(|a| a.pass));
    }

    #[test]
    fn report_json_shape() {
        let t = ResidueTargets::from_entries(3, 2, [((1, 1), 2)]).unwrap();
        let r = verify(&blown_plane(1), &t, &Assignment::zero()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["pass"], true);
        assert_eq!(v["entries"][0]["p"], 1);
        assert_eq!(v["entries"][0]["certified"], true);
        assert_eq!(v["audits"].as_array().unwrap().len(), 5);
    }

    #[test]
    fn mismatched_modulus_is_an_error() {
        let t = ResidueTargets::from_entries(2, 2, [((1, 1), 0)]).unwrap();
        assert!(matches!(verify(&blown_plane(1), &t, &Assignment::zero()), Err(VerifyError::Modulus { .. })));
    }
}
