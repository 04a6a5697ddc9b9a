//! Exact polynomial arithmetic with integer coefficients over named unknowns.
//!
//! Every Hodge number that a construction leaves unspecified is an unknown,
//! identified by a deterministic path string. Unknown names are interned into
//! a process-wide table so that monomials compare as small integer vectors;
//! anything user-visible (printing, serialization) goes back through the
//! names and is ordered by them, never by interning order.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use smallvec::SmallVec;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("unknown id must be non-empty and must not contain '{{' or '}}'")]
    InvalidId,
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(u64),
    #[error("cannot parse polynomial at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

struct Interner {
    ids: HashMap<Arc<str>, u32>,
    names: Vec<Arc<str>>,
}

fn interner() -> &'static RwLock<Interner> {
    static TABLE: OnceLock<RwLock<Interner>> = OnceLock::new();
    TABLE.get_or_init(|| {
        RwLock::new(Interner {
            ids: HashMap::new(),
            names: Vec::new(),
        })
    })
}

/// Handle of a named unknown. Cheap to copy; equal handles mean equal paths.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UnknownId(u32);

impl UnknownId {
    pub fn new(path: &str) -> Result<Self, AlgebraError> {
        if path.is_empty() || path.contains(['{', '}']) {
            return Err(AlgebraError::InvalidId);
        }
        if let Some(&id) = interner().read().expect("interner poisoned").ids.get(path) {
            return Ok(UnknownId(id));
        }
        let mut table = interner().write().expect("interner poisoned");
        if let Some(&id) = table.ids.get(path) {
            return Ok(UnknownId(id));
        }
        let id = u32::try_from(table.names.len()).expect("too many unknowns");
        let name: Arc<str> = Arc::from(path);
        table.names.push(name.clone());
        table.ids.insert(name, id);
        Ok(UnknownId(id))
    }

    /// Builds `prefix/label`. Panics only if the result would be malformed,
    /// which cannot happen for the labels used inside this crate.
    pub(crate) fn child(prefix: &str, label: &str) -> Self {
        Self::new(&format!("{prefix}/{label}")).expect("well-formed unknown id")
    }

    pub fn path(self) -> Arc<str> {
        interner().read().expect("interner poisoned").names[self.0 as usize].clone()
    }
}

impl fmt::Debug for UnknownId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u{{{}}}", self.path())
    }
}

impl fmt::Display for UnknownId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.path())
    }
}

/// A product of unknowns with positive exponents, sorted by handle.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Monomial(SmallVec<[(UnknownId, u32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(id: UnknownId) -> Self {
        let mut v = SmallVec::new();
        v.push((id, 1));
        Monomial(v)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn factors(&self) -> impl Iterator<Item = (UnknownId, u32)> + '_ {
        self.0.iter().copied()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let mut out = SmallVec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, ea) = self.0[i];
            let (b, eb) = other.0[j];
            match a.cmp(&b) {
                std::cmp::Ordering::Less => {
                    out.push((a, ea));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((b, eb));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// Name-based key used for deterministic printing.
    fn print_key(&self) -> (Vec<(Arc<str>, u32)>, u32) {
        let mut named: Vec<(Arc<str>, u32)> = self.0.iter().map(|&(v, e)| (v.path(), e)).collect();
        named.sort();
        (named, self.degree())
    }
}

/// Exact polynomial with integer coefficients in canonical form: terms sorted
/// by monomial, no zero coefficients. Equal polynomials compare equal.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SymPoly {
    terms: Vec<(Monomial, i128)>,
}

impl SymPoly {
    pub fn zero() -> Self {
        SymPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i128) -> Self {
        if c == 0 {
            Self::zero()
        } else {
            SymPoly {
                terms: vec![(Monomial::one(), c)],
            }
        }
    }

    pub fn var(id: UnknownId) -> Self {
        SymPoly {
            terms: vec![(Monomial::var(id), 1)],
        }
    }

    /// Convenience for `var(UnknownId::new(path))`.
    pub fn unknown(path: &str) -> Result<Self, AlgebraError> {
        Ok(Self::var(UnknownId::new(path)?))
    }

    pub fn from_terms<I>(terms: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = (Monomial, i128)>,
    {
        let mut acc: BTreeMap<Monomial, i128> = BTreeMap::new();
        for (m, c) in terms {
            let slot = acc.entry(m).or_insert(0);
            *slot = slot.checked_add(c).ok_or(AlgebraError::Overflow)?;
        }
        Ok(SymPoly {
            terms: acc.into_iter().filter(|&(_, c)| c != 0).collect(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Monomial, i128)] {
        &self.terms
    }

    pub fn constant_term(&self) -> i128 {
        match self.terms.first() {
            Some((m, c)) if m.is_one() => *c,
            _ => 0,
        }
    }

    pub fn as_constant(&self) -> Option<i128> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(m, c)] if m.is_one() => Some(*c),
            _ => None,
        }
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn unknowns(&self) -> Vec<UnknownId> {
        let mut ids: Vec<UnknownId> = self
            .terms
            .iter()
            .flat_map(|(m, _)| m.factors().map(|(v, _)| v))
            .collect();
        ids.sort();
        ids.dedup();
        ids
    }

    fn merge(&self, other: &SymPoly, sign: i128) -> Result<SymPoly, AlgebraError> {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let ord = match (self.terms.get(i), other.terms.get(j)) {
                (Some((a, _)), Some((b, _))) => a.cmp(b),
                (Some(_), None) => std::cmp::Ordering::Less,
                _ => std::cmp::Ordering::Greater,
            };
            match ord {
                std::cmp::Ordering::Less => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    let (m, c) = &other.terms[j];
                    let c = c.checked_mul(sign).ok_or(AlgebraError::Overflow)?;
                    out.push((m.clone(), c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let (m, a) = &self.terms[i];
                    let b = other.terms[j].1.checked_mul(sign).ok_or(AlgebraError::Overflow)?;
                    let c = a.checked_add(b).ok_or(AlgebraError::Overflow)?;
                    if c != 0 {
                        out.push((m.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(SymPoly { terms: out })
    }

    pub fn checked_add(&self, other: &SymPoly) -> Result<SymPoly, AlgebraError> {
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        self.merge(other, 1)
    }

    pub fn checked_sub(&self, other: &SymPoly) -> Result<SymPoly, AlgebraError> {
        if other.is_zero() {
            return Ok(self.clone());
        }
        self.merge(other, -1)
    }

    pub fn checked_scale(&self, k: i128) -> Result<SymPoly, AlgebraError> {
        if k == 0 {
            return Ok(SymPoly::zero());
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| c.checked_mul(k).map(|c| (m.clone(), c)).ok_or(AlgebraError::Overflow))
            .collect::<Result<_, _>>()?;
        Ok(SymPoly { terms })
    }

    pub fn checked_mul(&self, other: &SymPoly) -> Result<SymPoly, AlgebraError> {
        if self.is_zero() || other.is_zero() {
            return Ok(SymPoly::zero());
        }
        if let Some(k) = self.as_constant() {
            return other.checked_scale(k);
        }
        if let Some(k) = other.as_constant() {
            return self.checked_scale(k);
        }
        let mut acc: HashMap<Monomial, i128> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = ca.checked_mul(*cb).ok_or(AlgebraError::Overflow)?;
                let slot = acc.entry(ma.mul(mb)).or_insert(0);
                *slot = slot.checked_add(c).ok_or(AlgebraError::Overflow)?;
            }
        }
        let mut terms: Vec<(Monomial, i128)> = acc.into_iter().filter(|&(_, c)| c != 0).collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        Ok(SymPoly { terms })
    }

    /// Exact value under an assignment.
    pub fn eval(&self, sigma: &Assignment) -> Result<i128, AlgebraError> {
        let mut total: i128 = 0;
        for (m, c) in &self.terms {
            let mut term = *c;
            for (v, e) in m.factors() {
                let x = sigma.value(v);
                for _ in 0..e {
                    term = term.checked_mul(x).ok_or(AlgebraError::Overflow)?;
                }
            }
            total = total.checked_add(term).ok_or(AlgebraError::Overflow)?;
        }
        Ok(total)
    }

    /// Residue certificate: `Some(r)` iff every non-constant coefficient is
    /// divisible by `m`, in which case every evaluation is congruent to `r`.
    pub fn const_mod(&self, m: u64) -> Option<u64> {
        let m = i128::from(m);
        let mut r = 0;
        for (mono, c) in &self.terms {
            if mono.is_one() {
                r = c.rem_euclid(m);
            } else if c % m != 0 {
                return None;
            }
        }
        Some(r as u64)
    }
}

/// Reduces an integer into `[0, m)`.
pub fn residue(x: i128, m: u64) -> u64 {
    x.rem_euclid(i128::from(m)) as u64
}

macro_rules! panicking_op {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&SymPoly> for &SymPoly {
            type Output = SymPoly;
            fn $method(self, rhs: &SymPoly) -> SymPoly {
                self.$checked(rhs).expect("coefficient overflow")
            }
        }
        impl $tr<SymPoly> for SymPoly {
            type Output = SymPoly;
            fn $method(self, rhs: SymPoly) -> SymPoly {
                (&self).$checked(&rhs).expect("coefficient overflow")
            }
        }
    };
}

panicking_op!(Add, add, checked_add);
panicking_op!(Sub, sub, checked_sub);
panicking_op!(Mul, mul, checked_mul);

impl Neg for &SymPoly {
    type Output = SymPoly;
    fn neg(self) -> SymPoly {
        self.checked_scale(-1).expect("coefficient overflow")
    }
}

impl From<i128> for SymPoly {
    fn from(c: i128) -> Self {
        SymPoly::constant(c)
    }
}

impl fmt::Display for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut keyed: Vec<_> = self.terms.iter().map(|(m, c)| (m.print_key(), *c)).collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        for (idx, ((factors, _), c)) in keyed.iter().enumerate() {
            let negative = *c < 0;
            let mag = c.unsigned_abs();
            match (idx, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if factors.is_empty() {
                write!(f, "{mag}")?;
                continue;
            }
            if mag != 1 {
                write!(f, "{mag}*")?;
            }
            for (k, (name, e)) in factors.iter().enumerate() {
                if k > 0 {
                    f.write_str("*")?;
                }
                write!(f, "u{{{name}}}")?;
                if *e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymPoly({self})")
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: &str) -> Result<T, AlgebraError> {
        Err(AlgebraError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn integer(&mut self) -> Result<i128, AlgebraError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        text.parse::<i128>().map_err(|_| AlgebraError::Overflow)
    }

    fn factor(&mut self) -> Result<SymPoly, AlgebraError> {
        match self.peek() {
            Some(b'0'..=b'9') => Ok(SymPoly::constant(self.integer()?)),
            Some(b'u') => {
                self.pos += 1;
                if self.src.get(self.pos) != Some(&b'{') {
                    return self.err("expected '{' after 'u'");
                }
                self.pos += 1;
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos] != b'}' {
                    self.pos += 1;
                }
                if self.pos >= self.src.len() {
                    return self.err("unterminated unknown id");
                }
                let name = std::str::from_utf8(&self.src[start..self.pos])
                    .map_err(|_| AlgebraError::Parse {
                        pos: start,
                        msg: "unknown id is not UTF-8".into(),
                    })?
                    .to_string();
                self.pos += 1;
                let base = SymPoly::unknown(&name)?;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    let e = self.integer()?;
                    let mut acc = SymPoly::one();
                    for _ in 0..e {
                        acc = acc.checked_mul(&base)?;
                    }
                    Ok(acc)
                } else {
                    Ok(base)
                }
            }
            _ => self.err("expected integer or unknown"),
        }
    }

    fn term(&mut self) -> Result<SymPoly, AlgebraError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.checked_mul(&self.factor()?)?;
        }
        Ok(acc)
    }

    fn expr(&mut self) -> Result<SymPoly, AlgebraError> {
        let mut acc = if self.peek() == Some(b'-') {
            self.pos += 1;
            self.term()?.checked_scale(-1)?
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.checked_add(&self.term()?)?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.checked_sub(&self.term()?)?;
                }
                None => return Ok(acc),
                Some(_) => return self.err("unexpected character"),
            }
        }
    }
}

impl FromStr for SymPoly {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Parser {
            src: s.as_bytes(),
            pos: 0,
        }
        .expr()
    }
}

/// Values for unknowns. Explicit values win; otherwise, when a seed is set,
/// a value in `[0, bound)` is derived from a hash of the seed and the
/// unknown's path; otherwise the value is 0.
#[derive(Clone, Default)]
pub struct Assignment {
    values: BTreeMap<String, u64>,
    random: Option<(u64, u64)>,
    cache: Arc<RwLock<HashMap<UnknownId, i128>>>,
}

/// Serialized form of an [`Assignment`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignmentDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<u64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, u64>,
}

pub const DEFAULT_BOUND: u64 = 10;

impl Assignment {
    /// All unknowns evaluate to 0.
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn random(seed: u64, bound: u64) -> Self {
        Assignment {
            random: Some((seed, bound.max(1))),
            ..Self::default()
        }
    }

    pub fn with_value(mut self, path: &str, value: u64) -> Self {
        self.values.insert(path.to_string(), value);
        self.cache = Arc::default();
        self
    }

    pub fn from_doc(doc: &AssignmentDoc) -> Self {
        let mut sigma = match doc.seed {
            Some(seed) => Self::random(seed, doc.bound.unwrap_or(DEFAULT_BOUND)),
            None => Self::zero(),
        };
        sigma.values = doc.values.clone();
        sigma
    }

    pub fn to_doc(&self) -> AssignmentDoc {
        AssignmentDoc {
            seed: self.random.map(|(s, _)| s),
            bound: self.random.map(|(_, b)| b),
            values: self.values.clone(),
        }
    }

    fn derive(&self, path: &str) -> u64 {
        if let Some(&v) = self.values.get(path) {
            return v;
        }
        match self.random {
            Some((seed, bound)) => {
                let mut h = Sha256::new();
                h.update(seed.to_le_bytes());
                h.update(path.as_bytes());
                let digest = h.finalize();
                let mut word = [0u8; 8];
                word.copy_from_slice(&digest[..8]);
                u64::from_le_bytes(word) % bound
            }
            None => 0,
        }
    }

    pub fn value(&self, id: UnknownId) -> i128 {
        if let Some(&v) = self.cache.read().expect("cache poisoned").get(&id) {
            return v;
        }
        let v = i128::from(self.derive(&id.path()));
        self.cache.write().expect("cache poisoned").insert(id, v);
        v
    }
}

impl fmt::Debug for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Assignment")
            .field("values", &self.values)
            .field("random", &self.random)
            .finish()
    }
}

impl PartialEq for Assignment {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values && self.random == other.random
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn u(name: &str) -> SymPoly {
        SymPoly::unknown(name).unwrap()
    }

    #[test]
    fn distributivity() {
        let p = (SymPoly::constant(2) + u("t/u")) * SymPoly::constant(3);
        assert_eq!(p, SymPoly::constant(6) + u("t/u") * SymPoly::constant(3));
        assert_eq!(p.to_string(), "6 + 3*u{t/u}");
    }

    #[test]
    fn ring_law_product() {
        let p = (SymPoly::one() + u("t/u")) * (SymPoly::one() + u("t/v"));
        let q = SymPoly::one() + u("t/u") + u("t/v") + u("t/u") * u("t/v");
        assert_eq!(p, q);
        assert_eq!(p.to_string(), "1 + u{t/u} + u{t/u}*u{t/v} + u{t/v}");
    }

    #[test]
    fn cancellation() {
        let m = SymPoly::constant(7);
        let b = u("t/b");
        let p = (b.clone() + &m * &u("t/u")) - b;
        assert_eq!(p, SymPoly::constant(7) * u("t/u"));
    }

    #[test]
    fn eval_examples() {
        let p = SymPoly::constant(3) + SymPoly::constant(2) * u("e/u");
        assert_eq!(p.eval(&Assignment::zero()).unwrap(), 3);
        assert_eq!(p.eval(&Assignment::zero().with_value("e/u", 5)).unwrap(), 13);
        let q = SymPoly::constant(4) * u("e/u") + SymPoly::constant(5);
        for k in 0..20 {
            let v = q.eval(&Assignment::zero().with_value("e/u", k)).unwrap();
            assert_eq!(residue(v, 4), 5 % 4);
        }
    }

    #[test]
    fn const_mod_examples() {
        let p = SymPoly::constant(3) + SymPoly::constant(2) * u("c/u");
        assert_eq!(p.const_mod(2), Some(1));
        assert_eq!(p.const_mod(3), None);
        let m = 5;
        let q = SymPoly::constant(8)
            + SymPoly::constant(m) * u("c/u")
            + SymPoly::constant(m) * u("c/v") * u("c/w");
        assert_eq!(q.const_mod(m as u64), Some(3));
        assert_eq!(SymPoly::constant(-1).const_mod(4), Some(3));
    }

    #[test]
    fn overflow_is_reported() {
        let big = SymPoly::constant(i128::MAX);
        assert_eq!(big.checked_add(&SymPoly::one()), Err(AlgebraError::Overflow));
        let x = u("o/x");
        let p = x.checked_scale(i128::MAX).unwrap();
        assert_eq!(p.checked_mul(&SymPoly::constant(2)), Err(AlgebraError::Overflow));
        let q = u("o/x") * SymPoly::constant(1 << 100);
        let sigma = Assignment::zero().with_value("o/x", 1 << 40);
        assert_eq!(q.eval(&sigma), Err(AlgebraError::Overflow));
    }

    #[test]
    #[should_panic(expected = "coefficient overflow")]
    fn operator_overflow_aborts() {
        let _ = SymPoly::constant(i128::MAX) + SymPoly::one();
    }

    #[test]
    fn parse_print_examples() {
        let p: SymPoly = "6 + 3*u{node:3/serre_surface/h11}".parse().unwrap();
        assert_eq!(p.to_string(), "6 + 3*u{node:3/serre_surface/h11}");
        let q: SymPoly = "-u{a}^2*u{b} - 4 + 2*u{a}".parse().unwrap();
        assert_eq!(q.to_string(), "-4 + 2*u{a} - u{a}^2*u{b}");
        assert_eq!("0".parse::<SymPoly>().unwrap(), SymPoly::zero());
        assert!("3 +".parse::<SymPoly>().is_err());
        assert!("u{}".parse::<SymPoly>().is_err());
    }

    #[test]
    fn random_assignment_is_deterministic_and_bounded() {
        let a = Assignment::random(42, 10);
        let b = Assignment::random(42, 10);
        for k in 0..50 {
            let id = UnknownId::new(&format!("r/{k}")).unwrap();
            assert_eq!(a.value(id), b.value(id));
            assert!((0..10).contains(&a.value(id)));
        }
        let doc = a.to_doc();
        assert_eq!(Assignment::from_doc(&doc), a);
    }

    fn arb_poly() -> impl Strategy<Value = SymPoly> {
        let names = ["p/a", "p/b", "p/c"];
        prop::collection::vec((-20i128..20, prop::collection::vec((0usize..3, 1u32..3), 0..3)), 0..5)
            .prop_map(move |terms| {
                let mut acc = SymPoly::zero();
                for (c, factors) in terms {
                    let mut t = SymPoly::constant(c);
                    for (v, e) in factors {
                        for _ in 0..e {
                            t = t * SymPoly::unknown(names[v]).unwrap();
                        }
                    }
                    acc = acc + t;
                }
                acc
            })
    }

    fn arb_sigma() -> impl Strategy<Value = Assignment> {
        (0u64..12, 0u64..12, 0u64..12).prop_map(|(a, b, c)| {
            Assignment::zero()
                .with_value("p/a", a)
                .with_value("p/b", b)
                .with_value("p/c", c)
        })
    }

    proptest! {
        #[test]
        fn eval_is_a_ring_homomorphism(p in arb_poly(), q in arb_poly(), s in arb_sigma()) {
            let (ep, eq) = (p.eval(&s).unwrap(), q.eval(&s).unwrap());
            prop_assert_eq!((&p + &q).eval(&s).unwrap(), ep + eq);
            prop_assert_eq!((&p - &q).eval(&s).unwrap(), ep - eq);
            prop_assert_eq!((&p * &q).eval(&s).unwrap(), ep * eq);
        }

        #[test]
        fn const_mod_is_sound(p in arb_poly(), s in arb_sigma(), m in 2u64..7) {
            if let Some(r) = p.const_mod(m) {
                prop_assert_eq!(residue(p.eval(&s).unwrap(), m), r);
            }
        }

        #[test]
        fn parse_inverts_print(p in arb_poly()) {
            let back: SymPoly = p.to_string().parse().unwrap();
            prop_assert_eq!(back, p);
        }

        #[test]
        fn canonical_form_has_no_zero_terms(p in arb_poly(), q in arb_poly()) {
            let r = &p * &q - &q * &p;
            prop_assert!(r.is_zero());
            prop_assert!((&p * &q).terms().iter().all(|(_, c)| *c != 0));
        }
    }
}
