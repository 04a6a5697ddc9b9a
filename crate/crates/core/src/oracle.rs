//! Plain-integer diamonds for the fragment with no unknowns: projective
//! spaces, elliptic curves, products, powers and point blowups.
//!
//! Kept apart from the symbolic calculus on purpose: products are computed
//! by scattering every pair of cells instead of gathering per output cell,
//! and point blowups are written as explicit diagonal increments.

use thiserror::Error;

use crate::algebra::Assignment;
use crate::calculus::AtomSpec;
use crate::plan::{eval_node, NodeKind, PlanNode, Recorder};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleExpr {
    Point,
    ProjectiveSpace(usize),
    EllipticCurve,
    Product(Box<OracleExpr>, Box<OracleExpr>),
    Power(Box<OracleExpr>, usize),
    BlowupPoints(Box<OracleExpr>, usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("node {0}: {1} is outside the integer fragment")]
    OutsideFragment(String, &'static str),
    #[error("node {0}: point blowup of a {1}-fold")]
    TooSmall(String, usize),
    #[error("calculus evaluation failed: {0}")]
    Calculus(String),
}

/// `h[p][q]` of an `n`-fold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntDiamond {
    pub h: Vec<Vec<i64>>,
}

impl IntDiamond {
    pub fn n(&self) -> usize {
        self.h.len() - 1
    }

    pub fn point() -> Self {
        IntDiamond { h: vec![vec![1]] }
    }

    pub fn projective_space(k: usize) -> Self {
        let mut h = vec![vec![0; k + 1]; k + 1];
        for (p, row) in h.iter_mut().enumerate() {
            row[p] = 1;
        }
        IntDiamond { h }
    }

    pub fn elliptic_curve() -> Self {
        IntDiamond { h: vec![vec![1, 1], vec![1, 1]] }
    }
}

pub fn product(x: &IntDiamond, y: &IntDiamond) -> IntDiamond {
    let n = x.n() + y.n();
    let mut h = vec![vec![0i64; n + 1]; n + 1];
    for (p1, row1) in x.h.iter().enumerate() {
        for (q1, &a) in row1.iter().enumerate() {
            for (p2, row2) in y.h.iter().enumerate() {
                for (q2, &b) in row2.iter().enumerate() {
                    h[p1 + p2][q1 + q2] += a * b;
                }
            }
        }
    }
    IntDiamond { h }
}

pub fn power(x: &IntDiamond, k: usize) -> IntDiamond {
    (0..k).fold(IntDiamond::point(), |acc, _| product(&acc, x))
}

/// Blowing up a point of an `n`-fold adds one to `h^{p,p}`, `0 < p < n`.
pub fn blowup_points(x: &IntDiamond, count: usize) -> IntDiamond {
    let mut out = x.clone();
    let n = x.n();
    for p in 1..n {
        out.h[p][p] += count as i64;
    }
    out
}

pub fn oracle_diamond(e: &OracleExpr) -> IntDiamond {
    match e {
        OracleExpr::Point => IntDiamond::point(),
        OracleExpr::ProjectiveSpace(k) => IntDiamond::projective_space(*k),
        OracleExpr::EllipticCurve => IntDiamond::elliptic_curve(),
        OracleExpr::Product(a, b) => product(&oracle_diamond(a), &oracle_diamond(b)),
        OracleExpr::Power(a, k) => power(&oracle_diamond(a), *k),
        OracleExpr::BlowupPoints(a, k) => blowup_points(&oracle_diamond(a), *k),
    }
}

impl OracleExpr {
    fn dim(&self) -> usize {
        match self {
            OracleExpr::Point => 0,
            OracleExpr::ProjectiveSpace(k) => *k,
            OracleExpr::EllipticCurve => 1,
            OracleExpr::Product(a, b) => a.dim() + b.dim(),
            OracleExpr::Power(a, k) => a.dim() * k,
            OracleExpr::BlowupPoints(a, _) => a.dim(),
        }
    }
}

impl TryFrom<&PlanNode> for OracleExpr {
    type Error = OracleError;

    fn try_from(node: &PlanNode) -> Result<Self, OracleError> {
        let sub = |n: &PlanNode| OracleExpr::try_from(n).map(Box::new);
        Ok(match &node.kind {
            NodeKind::Atom(AtomSpec::Point) => OracleExpr::Point,
            NodeKind::Atom(AtomSpec::ProjectiveSpace(k)) => OracleExpr::ProjectiveSpace(*k),
            NodeKind::Atom(AtomSpec::EllipticCurve) => OracleExpr::EllipticCurve,
            NodeKind::Product(a, b) => OracleExpr::Product(sub(a)?, sub(b)?),
            NodeKind::Power(a, k) => OracleExpr::Power(sub(a)?, *k),
            NodeKind::BlowupPoints(a, k) => {
                let a = sub(a)?;
                if a.dim() < 2 {
                    return Err(OracleError::TooSmall(node.path.clone(), a.dim()));
                }
                OracleExpr::BlowupPoints(a, *k)
            }
            other => return Err(OracleError::OutsideFragment(node.path.clone(), other.name())),
        })
    }
}

/// True iff the calculus and the oracle agree on every entry of `node`.
pub fn oracle_compare(node: &PlanNode) -> Result<bool, OracleError> {
    let expected = oracle_diamond(&OracleExpr::try_from(node)?);
    let got = eval_node(node, 2, &Assignment::zero(), None, &mut Recorder::light())
        .map_err(|e| OracleError::Calculus(e.to_string()))?
        .diamond;
    if got.n() != expected.n() {
        return Ok(false);
    }
    for (p, row) in expected.h.iter().enumerate() {
        for (q, &v) in row.iter().enumerate() {
            if got.get(p, q).as_constant() != Some(i128::from(v)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_times_line() {
        let d = product(&IntDiamond::projective_space(2), &IntDiamond::projective_space(1));
        let diag: Vec<i64> = (0..=3).map(|p| d.h[p][p]).collect();
        assert_eq!(diag, vec![1, 2, 2, 1]);
        assert!(d.h.iter().enumerate().all(|(p, r)| r.iter().enumerate().all(|(q, &v)| p == q || v == 0)));
    }

    #[test]
    fn elliptic_cube() {
        let d = power(&IntDiamond::elliptic_curve(), 3);
        assert_eq!(d.h[1][0], 3);
        assert_eq!(d.h[1][1], 9);
    }

    #[test]
    fn plane_blown_up_three_times() {
        assert_eq!(blowup_points(&IntDiamond::projective_space(2), 3).h[1][1], 4);
    }
}
