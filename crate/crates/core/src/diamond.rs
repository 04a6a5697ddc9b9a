//! Hodge diamonds with the two universal constraints, plus residue targets.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::Rng;
use serde_json::{Map, Value};
use thiserror::Error;

use crate::algebra::{residue, AlgebraError, Assignment, SymPoly};
use crate::verify::{EntryRecord, VerificationReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiamondError {
    #[error("h^{{0,0}} must be 1, found {0}")]
    NotConnected(String),
    #[error("Serre duality violated: h^{{{p},{q}}} = {a} but h^{{{dp},{dq}}} = {b}")]
    Duality {
        p: usize,
        q: usize,
        dp: usize,
        dq: usize,
        a: String,
        b: String,
    },
    #[error("conflicting values for the dual pair ({p},{q}) / ({dp},{dq})")]
    ConflictingPair { p: usize, q: usize, dp: usize, dq: usize },
    #[error("entry ({p},{q}) is outside a dimension-{n} diamond")]
    OutOfRange { p: usize, q: usize, n: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("entry ({p},{q}) is not materialized in this diamond")]
    Hidden { p: usize, q: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Square grid of polynomials indexed by `(p, q)`, without invariants.
/// Used for blowup increments and other additive bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    n: usize,
    cells: Vec<SymPoly>,
}

impl Grid {
    pub fn zeros(n: usize) -> Self {
        Grid {
            n,
            cells: vec![SymPoly::zero(); (n + 1) * (n + 1)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, p: usize, q: usize) -> &SymPoly {
        &self.cells[p * (self.n + 1) + q]
    }

    pub fn set(&mut self, p: usize, q: usize, value: SymPoly) {
        let n = self.n;
        self.cells[p * (n + 1) + q] = value;
    }

    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, &SymPoly)> {
        let w = self.n + 1;
        self.cells.iter().enumerate().map(move |(i, c)| (i / w, i % w, c))
    }

    pub fn is_zero(&self) -> bool {
        self.cells.iter().all(SymPoly::is_zero)
    }

    pub fn checked_add(&self, other: &Grid) -> Result<Grid, DiamondError> {
        if self.n != other.n {
            return Err(DiamondError::DimensionMismatch(self.n, other.n));
        }
        let cells = self
            .cells
            .iter()
            .zip(&other.cells)
            .map(|(a, b)| a.checked_add(b))
            .collect::<Result<_, _>>()?;
        Ok(Grid { n: self.n, cells })
    }

    pub fn checked_sub(&self, other: &Grid) -> Result<Grid, DiamondError> {
        if self.n != other.n {
            return Err(DiamondError::DimensionMismatch(self.n, other.n));
        }
        let cells = self
            .cells
            .iter()
            .zip(&other.cells)
            .map(|(a, b)| a.checked_sub(b))
            .collect::<Result<_, _>>()?;
        Ok(Grid { n: self.n, cells })
    }

    pub fn checked_scale(&self, k: i128) -> Result<Grid, DiamondError> {
        let cells = self
            .cells
            .iter()
            .map(|c| c.checked_scale(k))
            .collect::<Result<_, _>>()?;
        Ok(Grid { n: self.n, cells })
    }

    /// First cell whose dual partner differs, if any.
    pub fn duality_violation(&self) -> Option<(usize, usize)> {
        let n = self.n;
        for p in 0..=n {
            for q in 0..=n {
                if (p, q) < (n - p, n - q) && self.get(p, q) != self.get(n - p, n - q) {
                    return Some((p, q));
                }
            }
        }
        None
    }
}

/// Dual partner of `(p, q)` in dimension `n`.
pub fn dual(n: usize, p: usize, q: usize) -> (usize, usize) {
    (n - p, n - q)
}

/// Entries with `p` or `q` in `{0, n}`.
pub fn is_outer(n: usize, p: usize, q: usize) -> bool {
    p == 0 || q == 0 || p == n || q == n
}

/// Representatives of the dual pairs of inner entries `1 <= p, q <= n - 1`.
pub fn inner_representatives(n: usize) -> Vec<(usize, usize)> {
    let mut reps = Vec::new();
    for p in 1..n {
        for q in 1..n {
            if (p, q) <= (n - p, n - q) {
                reps.push((p, q));
            }
        }
    }
    reps
}

/// An `(n+1) x (n+1)` grid of polynomials with `h^{0,0} = 1` and
/// `h^{p,q} = h^{n-p,n-q}` holding as polynomial identities.
///
/// A diamond may be *partial*: when only the band `p + q <= k` (and, by
/// duality, `p + q >= 2n - k`) is needed downstream, the remaining entries
/// are not materialized. Everything user-facing is complete.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeDiamond {
    grid: Grid,
    known: Option<usize>,
}

impl HodgeDiamond {
    pub fn from_grid(grid: Grid) -> Result<Self, DiamondError> {
        Self::from_partial_grid(grid, None)
    }

    /// Builds a diamond whose entries are only materialized on the band
    /// `p + q <= known` and its dual; hidden cells must be zero.
    pub fn from_partial_grid(grid: Grid, known: Option<usize>) -> Result<Self, DiamondError> {
        let known = known.filter(|&k| k < grid.n);
        let d = HodgeDiamond { grid, known };
        d.validate()?;
        Ok(d)
    }

    fn validate(&self) -> Result<(), DiamondError> {
        let h00 = self.grid.get(0, 0);
        if *h00 != SymPoly::one() {
            return Err(DiamondError::NotConnected(h00.to_string()));
        }
        let n = self.n();
        for (p, q, v) in self.grid.cells() {
            if !self.is_known(p, q) {
                debug_assert!(v.is_zero());
                continue;
            }
            let (dp, dq) = dual(n, p, q);
            if (p, q) < (dp, dq) && v != self.grid.get(dp, dq) {
                return Err(DiamondError::Duality {
                    p,
                    q,
                    dp,
                    dq,
                    a: v.to_string(),
                    b: self.grid.get(dp, dq).to_string(),
                });
            }
        }
        Ok(())
    }

    pub fn point() -> Self {
        let mut g = Grid::zeros(0);
        g.set(0, 0, SymPoly::one());
        HodgeDiamond { grid: g, known: None }
    }

    pub fn n(&self) -> usize {
        self.grid.n
    }

    pub fn is_complete(&self) -> bool {
        self.known.is_none()
    }

    /// Highest `p + q` of the materialized lower band; `None` when complete.
    pub fn known_degree(&self) -> Option<usize> {
        self.known
    }

    pub fn is_known(&self, p: usize, q: usize) -> bool {
        match self.known {
            None => true,
            Some(k) => p + q <= k || p + q >= 2 * self.n() - k,
        }
    }

    pub fn try_get(&self, p: usize, q: usize) -> Option<&SymPoly> {
        (p <= self.n() && q <= self.n() && self.is_known(p, q)).then(|| self.grid.get(p, q))
    }

    /// Entry `h^{p,q}`. Panics on out-of-range or hidden entries.
    pub fn get(&self, p: usize, q: usize) -> &SymPoly {
        assert!(self.is_known(p, q), "entry ({p},{q}) is not materialized");
        self.grid.get(p, q)
    }

    pub fn entry(&self, p: usize, q: usize) -> Result<&SymPoly, DiamondError> {
        if p > self.n() || q > self.n() {
            return Err(DiamondError::OutOfRange { p, q, n: self.n() });
        }
        self.try_get(p, q).ok_or(DiamondError::Hidden { p, q })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn add_increment(&self, inc: &Grid) -> Result<HodgeDiamond, DiamondError> {
        let mut sum = self.grid.checked_add(inc)?;
        if let Some(k) = self.known {
            let n = self.n();
            for p in 0..=n {
                for q in 0..=n {
                    if !(p + q <= k || p + q >= 2 * n - k) {
                        sum.set(p, q, SymPoly::zero());
                    }
                }
            }
        }
        HodgeDiamond::from_partial_grid(sum, self.known)
    }

    /// Exact integer values of every materialized entry.
    pub fn eval(&self, sigma: &Assignment) -> Result<Vec<Vec<Option<i128>>>, AlgebraError> {
        let n = self.n();
        let mut out = vec![vec![None; n + 1]; n + 1];
        for (p, row) in out.iter_mut().enumerate() {
            for (q, cell) in row.iter_mut().enumerate() {
                if let Some(v) = self.try_get(p, q) {
                    *cell = Some(v.eval(sigma)?);
                }
            }
        }
        Ok(out)
    }

    /// Integer grid of a complete diamond.
    pub fn eval_complete(&self, sigma: &Assignment) -> Result<Vec<Vec<i128>>, AlgebraError> {
        Ok(self
            .eval(sigma)?
            .into_iter()
            .map(|row| row.into_iter().map(|c| c.expect("complete diamond")).collect())
            .collect())
    }

    /// Classical rotated layout: `h^{0,0}` on top, row `k` holds the entries
    /// with `p + q = k`, `h^{k,0}` leftmost.
    pub fn render_rotated(&self, cell: impl Fn(usize, usize, &SymPoly) -> String) -> String {
        let n = self.n();
        let text = |p: usize, q: usize| match self.try_get(p, q) {
            Some(v) => cell(p, q, v),
            None => "?".to_string(),
        };
        let mut width = 1;
        for p in 0..=n {
            for q in 0..=n {
                width = width.max(text(p, q).chars().count());
            }
        }
        let mut out = String::new();
        for k in 0..=2 * n {
            // entry (p, q) sits in slot n + q - p of 2n + 1 slots
            let mut slots = vec![String::new(); 2 * n + 1];
            for p in k.saturating_sub(n)..=k.min(n) {
                slots[n + (k - p) - p] = text(p, k - p);
            }
            let line: String = slots.iter().map(|s| format!("{s:>width$}")).collect();
            let _ = writeln!(out, "{}", line.trim_end());
        }
        out
    }

    /// Grid layout, one row per `p`, tab separated; convenient for diffing.
    pub fn render_grid(&self, cell: impl Fn(usize, usize, &SymPoly) -> String) -> String {
        let n = self.n();
        let mut out = String::new();
        for p in 0..=n {
            let row: Vec<String> = (0..=n)
                .map(|q| match self.try_get(p, q) {
                    Some(v) => cell(p, q, v),
                    None => "?".to_string(),
                })
                .collect();
            let _ = writeln!(out, "{}", row.join("\t"));
        }
        out
    }
}

/// Builds a diamond from values on one representative of each dual pair.
/// Missing pairs default to 0 and a missing `h^{0,0}` defaults to 1.
pub fn make_diamond(
    n: usize,
    generator: &BTreeMap<(usize, usize), SymPoly>,
) -> Result<HodgeDiamond, DiamondError> {
    let mut grid = Grid::zeros(n);
    let mut seen: BTreeMap<(usize, usize), &SymPoly> = BTreeMap::new();
    for (&(p, q), v) in generator {
        if p > n || q > n {
            return Err(DiamondError::OutOfRange { p, q, n });
        }
        let (dp, dq) = dual(n, p, q);
        let key = (p, q).min((dp, dq));
        if let Some(prev) = seen.insert(key, v) {
            if prev != v {
                return Err(DiamondError::ConflictingPair { p, q, dp, dq });
            }
        }
        grid.set(p, q, v.clone());
        grid.set(dp, dq, v.clone());
    }
    if !generator.contains_key(&(0, 0)) && !generator.contains_key(&(n, n)) {
        grid.set(0, 0, SymPoly::one());
        grid.set(n, n, SymPoly::one());
    }
    HodgeDiamond::from_grid(grid)
}

/// True iff every entry of `a - b` is certified to vanish modulo `m`.
pub fn diamond_equals_mod(a: &HodgeDiamond, b: &HodgeDiamond, m: u64) -> Result<bool, DiamondError> {
    if a.n() != b.n() {
        return Err(DiamondError::DimensionMismatch(a.n(), b.n()));
    }
    let diff = a.grid().checked_sub(b.grid())?;
    let equal = diff.cells().all(|(_, _, c)| c.const_mod(m) == Some(0));
    Ok(equal)
}

/// Compares every targeted entry with its value under `sigma`, and records
/// whether the residue is certified independently of all unknowns.
pub fn check_targets(
    d: &HodgeDiamond,
    t: &ResidueTargets,
    sigma: &Assignment,
) -> Result<VerificationReport, DiamondError> {
    if d.n() != t.n() {
        return Err(DiamondError::DimensionMismatch(d.n(), t.n()));
    }
    let mut entries = Vec::new();
    for (&(p, q), &expected) in t.entries() {
        let v = d.entry(p, q)?;
        let got = residue(v.eval(sigma)?, t.m());
        entries.push(EntryRecord {
            p,
            q,
            expected,
            got,
            certified: v.const_mod(t.m()) == Some(got),
        });
    }
    Ok(VerificationReport::new(entries, Vec::new()))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{}{msg}", key.as_ref().map(|k| format!("key \"{k}\": ")).unwrap_or_default())]
pub struct TargetsError {
    pub key: Option<String>,
    pub msg: String,
}

impl TargetsError {
    fn at(key: impl Into<String>, msg: impl Into<String>) -> Self {
        TargetsError {
            key: Some(key.into()),
            msg: msg.into(),
        }
    }

    fn top(msg: impl Into<String>) -> Self {
        TargetsError {
            key: None,
            msg: msg.into(),
        }
    }
}

/// Partial map `(p, q) -> residue mod m`, consistent with `h^{0,0} = 1`
/// and Serre duality. Residues are stored in `[0, m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueTargets {
    m: u64,
    n: usize,
    entries: BTreeMap<(usize, usize), u64>,
}

impl ResidueTargets {
    pub fn new(m: u64, n: usize) -> Result<Self, TargetsError> {
        if m < 2 {
            return Err(TargetsError::at("m", format!("modulus must be at least 2, got {m}")));
        }
        Ok(ResidueTargets {
            m,
            n,
            entries: BTreeMap::new(),
        })
    }

    /// Adds a target, normalizing `value` into `[0, m)`.
    pub fn set(&mut self, p: usize, q: usize, value: i128) -> Result<(), TargetsError> {
        let key = format!("{p},{q}");
        if p > self.n || q > self.n {
            return Err(TargetsError::at(key, format!("index out of range for n = {}", self.n)));
        }
        let r = residue(value, self.m);
        if ((p, q) == (0, 0) || (p, q) == (self.n, self.n))
            && r != 1 % self.m {
                return Err(TargetsError::at(key, "h^{0,0} must be 1 (mod m)"));
            }
        let (dp, dq) = dual(self.n, p, q);
        if let Some(&other) = self.entries.get(&(dp, dq)) {
            if other != r {
                return Err(TargetsError::at(
                    key,
                    format!("violates Serre duality: ({dp},{dq}) is {other} but this is {r}"),
                ));
            }
        }
        self.entries.insert((p, q), r);
        Ok(())
    }

    pub fn from_entries<I>(m: u64, n: usize, entries: I) -> Result<Self, TargetsError>
    where
        I: IntoIterator<Item = ((usize, usize), i128)>,
    {
        let mut t = Self::new(m, n)?;
        for ((p, q), v) in entries {
            t.set(p, q, v)?;
        }
        Ok(t)
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), u64> {
        &self.entries
    }

    pub fn get(&self, p: usize, q: usize) -> Option<u64> {
        self.entries.get(&(p, q)).copied()
    }

    /// Target for `(p, q)` or its dual partner.
    pub fn get_or_dual(&self, p: usize, q: usize) -> Option<u64> {
        let (dp, dq) = dual(self.n, p, q);
        self.get(p, q).or_else(|| self.get(dp, dq))
    }

    /// `J_n`: the outer positions `(1,0)..(n,0)` and `(0,1)..(0,n)`.
    pub fn outer_index_set(n: usize) -> Vec<(usize, usize)> {
        (1..=n).map(|p| (p, 0)).chain((1..=n).map(|q| (0, q))).collect()
    }

    /// `I_n`: the second-outer positions `(1,q)` and `(p,1)`, `1 <= p, q <= n-1`.
    pub fn second_outer_index_set(n: usize) -> Vec<(usize, usize)> {
        let mut v: Vec<(usize, usize)> = (1..n).map(|q| (1, q)).collect();
        v.extend((2..n).map(|p| (p, 1)));
        v
    }

    /// Restriction to the given positions (entries that are present).
    pub fn restricted_to(&self, positions: &[(usize, usize)]) -> ResidueTargets {
        let entries = positions
            .iter()
            .filter_map(|&(p, q)| self.get_or_dual(p, q).map(|v| ((p, q), v)))
            .collect();
        ResidueTargets {
            m: self.m,
            n: self.n,
            entries,
        }
    }

    /// Uniformly random admissible full diamond of residues.
    pub fn random_full<R: Rng>(n: usize, m: u64, rng: &mut R) -> Self {
        let mut t = Self::new(m, n).expect("m >= 2");
        for p in 0..=n {
            for q in 0..=n {
                let (dp, dq) = dual(n, p, q);
                if (p, q) == (0, 0) || (p, q) == (n, n) {
                    t.entries.insert((p, q), 1 % m);
                } else if let Some(v) = t.entries.get(&(dp, dq)).copied() {
                    t.entries.insert((p, q), v);
                } else {
                    t.entries.insert((p, q), rng.gen_range(0..m));
                }
            }
        }
        t
    }

    pub fn from_json(text: &str) -> Result<Self, TargetsError> {
        let doc: Value =
            serde_json::from_str(text).map_err(|e| TargetsError::top(format!("invalid JSON: {e}")))?;
        let obj = doc
            .as_object()
            .ok_or_else(|| TargetsError::top("top level must be an object"))?;
        let m = obj
            .get("m")
            .and_then(Value::as_u64)
            .ok_or_else(|| TargetsError::at("m", "missing or not a nonnegative integer"))?;
        let n = obj
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| TargetsError::at("n", "missing or not a nonnegative integer"))?;
        let n = usize::try_from(n).map_err(|_| TargetsError::at("n", "too large"))?;
        let mut t = Self::new(m, n)?;
        let entries = match obj.get("entries") {
            None => return Ok(t),
            Some(Value::Object(map)) => map,
            Some(_) => return Err(TargetsError::at("entries", "must be an object")),
        };
        for (key, value) in entries {
            let (p, q) = parse_key(key).ok_or_else(|| {
                TargetsError::at(key.as_str(), "key must have the form \"p,q\" with nonnegative integers")
            })?;
            let v = value
                .as_i64()
                .ok_or_else(|| TargetsError::at(key.as_str(), "value must be an integer"))?;
            t.set(p, q, i128::from(v)).map_err(|e| TargetsError::at(key.as_str(), e.msg))?;
        }
        Ok(t)
    }

    pub fn to_value(&self) -> Value {
        let mut entries = Map::new();
        for (&(p, q), &v) in &self.entries {
            entries.insert(format!("{p},{q}"), Value::from(v));
        }
        let mut top = Map::new();
        top.insert("m".into(), Value::from(self.m));
        top.insert("n".into(), Value::from(self.n as u64));
        top.insert("entries".into(), Value::Object(entries));
        Value::Object(top)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("serializable")
    }
}

fn parse_key(key: &str) -> Option<(usize, usize)> {
    let (a, b) = key.split_once(',')?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: i128) -> SymPoly {
        SymPoly::constant(v)
    }

    fn projective_plane() -> HodgeDiamond {
        let gen: BTreeMap<_, _> = [((0, 0), c(1)), ((1, 1), c(1)), ((2, 2), c(1))].into();
        make_diamond(2, &gen).unwrap()
    }

    #[test]
    fn make_projective_plane() {
        let d = projective_plane();
        for p in 0..3 {
            for q in 0..3 {
                assert_eq!(d.get(p, q), &c(i128::from(p == q)));
            }
        }
    }

    #[test]
    fn make_elliptic_curve() {
        let gen: BTreeMap<_, _> = [((0, 0), c(1)), ((1, 0), c(1)), ((0, 1), c(1)), ((1, 1), c(1))].into();
        let d = make_diamond(1, &gen).unwrap();
        assert!(d.grid().cells().all(|(_, _, v)| *v == c(1)));
    }

    #[test]
    fn duality_fills_asymmetric_surface() {
        let gen: BTreeMap<_, _> = [((1, 0), c(0)), ((0, 1), c(1))].into();
        let d = make_diamond(2, &gen).unwrap();
        assert_eq!(d.get(1, 2), &c(0));
        assert_eq!(d.get(2, 1), &c(1));
        assert_eq!(d.get(2, 2), &c(1));
    }

    #[test]
    fn make_rejects_conflicts_and_bad_h00() {
        let gen: BTreeMap<_, _> = [((1, 0), c(0)), ((1, 2), c(1))].into();
        assert!(matches!(make_diamond(2, &gen), Err(DiamondError::ConflictingPair { .. })));
        let gen: BTreeMap<_, _> = [((0, 0), c(2))].into();
        assert!(matches!(make_diamond(2, &gen), Err(DiamondError::NotConnected(_))));
    }

    #[test]
    fn from_grid_rejects_asymmetric_grid() {
        let mut g = Grid::zeros(2);
        g.set(0, 0, c(1));
        g.set(2, 2, c(1));
        g.set(1, 0, c(3));
        assert!(matches!(HodgeDiamond::from_grid(g), Err(DiamondError::Duality { .. })));
    }

    #[test]
    fn equals_mod_examples() {
        let x = projective_plane();
        let mut delta = Grid::zeros(2);
        delta.set(1, 1, SymPoly::unknown("dm/u").unwrap().checked_scale(3).unwrap());
        let y = x.add_increment(&delta).unwrap();
        assert!(diamond_equals_mod(&x, &y, 3).unwrap());
        assert!(!diamond_equals_mod(&x, &y, 2).unwrap());
        let mut one_point = Grid::zeros(2);
        one_point.set(1, 1, c(1));
        let blown = x.add_increment(&one_point).unwrap();
        assert!(!diamond_equals_mod(&x, &blown, 2).unwrap());
        assert!(matches!(
            diamond_equals_mod(&x, &HodgeDiamond::point(), 2),
            Err(DiamondError::DimensionMismatch(2, 0))
        ));
    }

    #[test]
    fn check_targets_on_projective_plane() {
        let t = ResidueTargets::from_entries(3, 2, [((1, 1), 1)]).unwrap();
        let report = check_targets(&projective_plane(), &t, &Assignment::zero()).unwrap();
        assert!(report.pass);
        assert!(report.entries[0].certified);
    }

    #[test]
    fn partial_diamond_hides_the_band() {
        let mut g = Grid::zeros(4);
        g.set(0, 0, c(1));
        g.set(4, 4, c(1));
        g.set(1, 0, c(2));
        g.set(3, 4, c(2));
        let d = HodgeDiamond::from_partial_grid(g, Some(1)).unwrap();
        assert!(d.is_known(1, 0) && d.is_known(3, 4));
        assert!(!d.is_known(2, 2) && !d.is_known(1, 1));
        assert!(matches!(d.entry(2, 1), Err(DiamondError::Hidden { .. })));
    }

    #[test]
    fn targets_json_round_trip_and_errors() {
        let t = ResidueTargets::from_json(r#"{"m":3,"n":4,"entries":{"1,0":2,"0,1":-2}}"#).unwrap();
        assert_eq!(t.get(1, 0), Some(2));
        assert_eq!(t.get(0, 1), Some(1));
        assert_eq!(ResidueTargets::from_json(&t.to_json()).unwrap(), t);

        let e = ResidueTargets::from_json(r#"{"m":3,"n":2,"entries":{"1,0":1,"1,2":2}}"#).unwrap_err();
        assert_eq!(e.key.as_deref(), Some("1,2"));
        let e = ResidueTargets::from_json(r#"{"m":3,"n":2,"entries":{"0,0":2}}"#).unwrap_err();
        assert_eq!(e.key.as_deref(), Some("0,0"));
        let e = ResidueTargets::from_json(r#"{"m":3,"n":2,"entries":{"5,0":1}}"#).unwrap_err();
        assert_eq!(e.key.as_deref(), Some("5,0"));
        let e = ResidueTargets::from_json(r#"{"m":3,"n":2,"entries":{"x":1}}"#).unwrap_err();
        assert_eq!(e.key.as_deref(), Some("x"));
        let e = ResidueTargets::from_json(r#"{"m":1,"n":2}"#).unwrap_err();
        assert_eq!(e.key.as_deref(), Some("m"));
        assert!(e.to_string().contains("key \"m\""));
    }

    #[test]
    fn index_sets() {
        assert_eq!(
            ResidueTargets::outer_index_set(2),
            vec![(1, 0), (2, 0), (0, 1), (0, 2)]
        );
        assert_eq!(ResidueTargets::second_outer_index_set(2), vec![(1, 1)]);
        assert_eq!(
            ResidueTargets::second_outer_index_set(4),
            vec![(1, 1), (1, 2), (1, 3), (2, 1), (3, 1)]
        );
    }
}
