//! Atom diamonds and the combinators that act on them: products, blowups
//! and hyperplane sections.
//!
//! Every function returns diamonds satisfying `h^{0,0} = 1` and Serre
//! duality as polynomial identities. Products and sections accept an
//! optional degree cap; see [`HodgeDiamond`] for partial diamonds.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{residue, AlgebraError, Assignment, SymPoly, UnknownId};
use crate::diamond::{dual, inner_representatives, DiamondError, Grid, HodgeDiamond};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CalculusError {
    #[error("invalid atom: {0}")]
    InvalidAtom(String),
    #[error("blowup centre has codimension {0}, need at least 2")]
    Codimension(usize),
    #[error("a section needs an ambient of dimension at least 2, got {0}")]
    SectionTooSmall(usize),
    #[error("modulus must be at least 2 and the pinned residue must lie in [0, m); got b = {b}, m = {m}")]
    BadResidue { b: u64, m: u64 },
    #[error(transparent)]
    Diamond(#[from] DiamondError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// The varieties whose diamonds are taken as given.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AtomSpec {
    Point,
    ProjectiveSpace(usize),
    EllipticCurve,
    /// Surface with `h^{1,0} = 0` and `h^{0,1} = 1`.
    SerreSurface,
    /// Smooth hypersurface of degree `d` in `P^{d-1}`, of dimension `d - 2`.
    Hypersurface(usize),
}

impl AtomSpec {
    pub fn validate(&self) -> Result<(), CalculusError> {
        match *self {
            AtomSpec::Hypersurface(d) if d < 3 => Err(CalculusError::InvalidAtom(format!(
                "hypersurface degree must be at least 3, got {d}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn dim(&self) -> usize {
        match *self {
            AtomSpec::Point => 0,
            AtomSpec::ProjectiveSpace(k) => k,
            AtomSpec::EllipticCurve => 1,
            AtomSpec::SerreSurface => 2,
            AtomSpec::Hypersurface(d) => d.saturating_sub(2),
        }
    }

    pub fn label(&self) -> String {
        match *self {
            AtomSpec::Point => "point".into(),
            AtomSpec::ProjectiveSpace(k) => format!("P^{k}"),
            AtomSpec::EllipticCurve => "E".into(),
            AtomSpec::SerreSurface => "S".into(),
            AtomSpec::Hypersurface(d) => format!("V_{d}"),
        }
    }
}

fn fresh(prefix: &str, label: &str) -> SymPoly {
    SymPoly::var(UnknownId::child(prefix, label))
}

/// Diamond of an atom. Entries the atom does not determine become fresh
/// unknowns named below `path`.
pub fn atom(spec: AtomSpec, path: &str) -> Result<HodgeDiamond, CalculusError> {
    spec.validate()?;
    let n = spec.dim();
    let mut g = Grid::zeros(n);
    match spec {
        AtomSpec::Point | AtomSpec::ProjectiveSpace(_) => {
            for p in 0..=n {
                g.set(p, p, SymPoly::one());
            }
        }
        AtomSpec::EllipticCurve => {
            for (p, q) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                g.set(p, q, SymPoly::one());
            }
        }
        AtomSpec::SerreSurface => {
            let h20 = fresh(path, "h20");
            let h11 = fresh(path, "h11");
            let one = SymPoly::one();
            let zero = SymPoly::zero();
            let rows = [
                [one.clone(), one.clone(), h20.clone()],
                [zero.clone(), h11, zero],
                [h20, one.clone(), one],
            ];
            for (p, row) in rows.into_iter().enumerate() {
                for (q, v) in row.into_iter().enumerate() {
                    g.set(p, q, v);
                }
            }
        }
        AtomSpec::Hypersurface(_) => {
            for p in 0..=n {
                for q in 0..=n {
                    let (dp, dq) = dual(n, p, q);
                    if (p, q) > (dp, dq) {
                        continue;
                    }
                    let v = if (p, q) == (0, 0) || (p, q) == (0, n) || (p, q) == (n, 0) {
                        SymPoly::one()
                    } else {
                        fresh(path, &format!("h{p},{q}"))
                    };
                    g.set(dp, dq, v.clone());
                    g.set(p, q, v);
                }
            }
        }
    }
    Ok(HodgeDiamond::from_grid(g)?)
}

fn min_cap(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Diamond of a product: the bigraded convolution of the two diamonds.
pub fn kuenneth(x: &HodgeDiamond, y: &HodgeDiamond) -> Result<HodgeDiamond, CalculusError> {
    kuenneth_capped(x, y, None)
}

/// Product diamond materialized only up to total degree `cap`.
pub fn kuenneth_capped(
    x: &HodgeDiamond,
    y: &HodgeDiamond,
    cap: Option<usize>,
) -> Result<HodgeDiamond, CalculusError> {
    let (nx, ny) = (x.n(), y.n());
    let n = nx + ny;
    let known = min_cap(min_cap(cap, x.known_degree()), y.known_degree()).filter(|&k| k < n);
    let mut g = Grid::zeros(n);
    let convolve = |p: usize, q: usize| -> Result<SymPoly, CalculusError> {
        let mut acc = SymPoly::zero();
        for p1 in p.saturating_sub(ny)..=p.min(nx) {
            for q1 in q.saturating_sub(ny)..=q.min(nx) {
                let a = x.grid().get(p1, q1);
                if a.is_zero() {
                    continue;
                }
                let b = y.grid().get(p - p1, q - q1);
                if b.is_zero() {
                    continue;
                }
                acc = acc.checked_add(&a.checked_mul(b)?)?;
            }
        }
        Ok(acc)
    };
    match known {
        None => {
            for p in 0..=n {
                for q in 0..=n {
                    g.set(p, q, convolve(p, q)?);
                }
            }
        }
        Some(k) => {
            for p in 0..=n {
                for q in 0..=(k - p.min(k)) {
                    if p + q > k || q > n {
                        continue;
                    }
                    let v = convolve(p, q)?;
                    g.set(n - p, n - q, v.clone());
                    g.set(p, q, v);
                }
            }
        }
    }
    Ok(HodgeDiamond::from_partial_grid(g, known)?)
}

/// `k`-fold product of `x` with itself; `k = 0` is the point.
pub fn power(x: &HodgeDiamond, k: usize) -> Result<HodgeDiamond, CalculusError> {
    power_capped(x, k, None)
}

pub fn power_capped(
    x: &HodgeDiamond,
    k: usize,
    cap: Option<usize>,
) -> Result<HodgeDiamond, CalculusError> {
    let mut acc = HodgeDiamond::point();
    for _ in 0..k {
        acc = kuenneth_capped(&acc, x, cap)?;
    }
    Ok(acc)
}

/// Change in Hodge numbers caused by blowing up a centre with diamond `z`
/// in codimension `r`: `h^{p,q} += sum_{i=1}^{r-1} z^{p-i,q-i}`.
pub fn blowup_shift(z: &HodgeDiamond, r: usize) -> Result<Grid, CalculusError> {
    if r < 2 {
        return Err(CalculusError::Codimension(r));
    }
    let nz = z.n();
    let n = nz + r;
    let mut g = Grid::zeros(n);
    for p in 1..n {
        for q in 1..n {
            let mut acc = SymPoly::zero();
            for i in 1..r {
                if i > p || i > q || p - i > nz || q - i > nz {
                    continue;
                }
                acc = acc.checked_add(z.entry(p - i, q - i)?)?;
            }
            g.set(p, q, acc);
        }
    }
    Ok(g)
}

/// Increment of blowing up one point of an `n`-fold.
pub fn point_shift(n: usize) -> Result<Grid, CalculusError> {
    blowup_shift(&HodgeDiamond::point(), n)
}

/// Diamond of the blowup of `x` along a centre with diamond `z`.
pub fn blowup(x: &HodgeDiamond, z: &HodgeDiamond) -> Result<HodgeDiamond, CalculusError> {
    let codim = x.n().checked_sub(z.n()).ok_or(CalculusError::Codimension(0))?;
    if codim < 2 {
        return Err(CalculusError::Codimension(codim));
    }
    Ok(x.add_increment(&blowup_shift(z, codim)?)?)
}

/// Fresh, duality-paired increment supported on the inner entries of an
/// `n`-fold, with unknowns named below `prefix`.
pub fn inner_increment(n: usize, prefix: &str) -> Grid {
    let mut g = Grid::zeros(n);
    for (p, q) in inner_representatives(n) {
        let u = fresh(prefix, &format!("d{p},{q}"));
        let (dp, dq) = dual(n, p, q);
        g.set(dp, dq, u.clone());
        g.set(p, q, u);
    }
    g
}

/// Shared body of both section kinds: copy the entries with
/// `p + q <= n - 1`, fill the middle row with `middle`, complete by duality.
fn section_from(
    x: &HodgeDiamond,
    middle: impl Fn(usize) -> SymPoly,
) -> Result<HodgeDiamond, CalculusError> {
    if x.n() < 2 {
        return Err(CalculusError::SectionTooSmall(x.n()));
    }
    let n = x.n() - 1;
    let low = match x.known_degree() {
        Some(k) if k < n - 1 => k,
        _ => n - 1,
    };
    let known = (low < n - 1).then_some(low);
    let mut g = Grid::zeros(n);
    for p in 0..=n {
        for q in 0..=n {
            if p + q <= low {
                let v = x.grid().get(p, q).clone();
                g.set(n - p, n - q, v.clone());
                g.set(p, q, v);
            }
        }
    }
    if known.is_none() {
        for p in 0..=n / 2 {
            let v = middle(p);
            g.set(n - p, p, v.clone());
            g.set(p, n - p, v);
        }
    }
    Ok(HodgeDiamond::from_partial_grid(g, known)?)
}

/// Diamond of a sufficiently positive smooth divisor in `x`: entries with
/// `p + q <= n - 1` are inherited, the middle row is unknown.
pub fn lefschetz_section(x: &HodgeDiamond, path: &str) -> Result<HodgeDiamond, CalculusError> {
    let n = x.n().saturating_sub(1);
    section_from(x, |p| fresh(path, &format!("mid{p},{}", n - p)))
}

/// Bookkeeping of a section with controlled Euler characteristic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChiMetadata {
    /// Target residue of `chi(X, L^{-1})`.
    pub e: u64,
    /// Number of exceptional divisors twisted into the line bundle.
    pub r: u64,
    /// `chi(X, O_X)` under the model assignment.
    pub chi: i64,
}

/// Output of [`chi_section_parts`]: the section, the metadata, and the
/// increment of the `m` point blowups performed on the ambient first.
pub struct ChiSectionParts {
    pub diamond: HodgeDiamond,
    pub metadata: ChiMetadata,
    pub replicated: Grid,
}

/// Section of an `(n+1)`-fold with `h^{0,n} = h^{n,0}` pinned to
/// `b + m*u` for a fresh unknown `u`.
pub fn chi_section(
    x: &HodgeDiamond,
    b: u64,
    m: u64,
    sigma: &Assignment,
    path: &str,
) -> Result<(HodgeDiamond, ChiMetadata), CalculusError> {
    let parts = chi_section_parts(x, b, m, sigma, path)?;
    Ok((parts.diamond, parts.metadata))
}

pub fn chi_section_parts(
    x: &HodgeDiamond,
    b: u64,
    m: u64,
    sigma: &Assignment,
    path: &str,
) -> Result<ChiSectionParts, CalculusError> {
    if m < 2 || b >= m {
        return Err(CalculusError::BadResidue { b, m });
    }
    if x.n() < 2 {
        return Err(CalculusError::SectionTooSmall(x.n()));
    }
    let n = x.n() - 1;
    let mut chi: i128 = 0;
    for q in 0..=n + 1 {
        let v = x.entry(0, q)?.eval(sigma)?;
        chi = if q % 2 == 0 { chi.checked_add(v) } else { chi.checked_sub(v) }
            .ok_or(AlgebraError::Overflow)?;
    }
    let h0n = x.entry(0, n)?.eval(sigma)?;
    let h0n1 = x.entry(0, n + 1)?.eval(sigma)?;
    let inner = h0n - h0n1 - i128::from(b);
    let e = residue(if n.is_multiple_of(2) { inner } else { -inner }, m);
    let r = residue(chi - i128::from(e), m);

    let mm = i128::from(m);
    let replicated = point_shift(x.n())?.checked_scale(mm)?;
    let blown = x.add_increment(&replicated)?;
    let pinned = SymPoly::constant(i128::from(b)).checked_add(&fresh(path, "chi").checked_scale(mm)?)?;
    let diamond = section_from(&blown, |p| {
        if p == 0 {
            pinned.clone()
        } else {
            fresh(path, &format!("mid{p},{}", n - p))
        }
    })?;
    Ok(ChiSectionParts {
        diamond,
        metadata: ChiMetadata { e, r, chi: i64::try_from(chi).map_err(|_| AlgebraError::Overflow)? },
        replicated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diamond::diamond_equals_mod;
    use proptest::prelude::*;

    fn c(v: i128) -> SymPoly {
        SymPoly::constant(v)
    }

    fn pk(k: usize) -> HodgeDiamond {
        atom(AtomSpec::ProjectiveSpace(k), "t/P").unwrap()
    }

    fn ell() -> HodgeDiamond {
        atom(AtomSpec::EllipticCurve, "t/E").unwrap()
    }

    fn consts(d: &HodgeDiamond) -> Vec<Vec<i128>> {
        d.eval_complete(&Assignment::zero()).unwrap()
    }

    #[test]
    fn projective_plane_atom() {
        assert_eq!(consts(&pk(2)), vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
    }

    #[test]
    fn serre_surface_atom() {
        let s = atom(AtomSpec::SerreSurface, "t/S").unwrap();
        let ua = SymPoly::unknown("t/S/h20").unwrap();
        let ub = SymPoly::unknown("t/S/h11").unwrap();
        assert_eq!(s.get(1, 0), &c(0));
        assert_eq!(s.get(0, 1), &c(1));
        assert_eq!(s.get(2, 1), &c(1));
        assert_eq!(s.get(1, 2), &c(0));
        assert_eq!(s.get(2, 0), &ua);
        assert_eq!(s.get(0, 2), &ua);
        assert_eq!(s.get(1, 1), &ub);
    }

    #[test]
    fn quartic_surface_atom() {
        let z = atom(AtomSpec::Hypersurface(4), "t/Z").unwrap();
        assert_eq!(z.n(), 2);
        assert_eq!(z.get(2, 0), &c(1));
        assert_eq!(z.get(0, 2), &c(1));
        assert_eq!(z.get(1, 0).unknowns().len(), 1);
        assert_eq!(z.get(1, 1).unknowns().len(), 1);
        assert_eq!(z.get(1, 0), z.get(1, 2));
        let cubic = atom(AtomSpec::Hypersurface(3), "t/C").unwrap();
        assert_eq!(consts(&cubic), consts(&ell()));
        assert!(atom(AtomSpec::Hypersurface(2), "t/bad").is_err());
    }

    #[test]
    fn kuenneth_examples() {
        let p1p1 = kuenneth(&pk(1), &pk(1)).unwrap();
        assert_eq!(p1p1.get(1, 1), &c(2));
        assert_eq!(p1p1.get(1, 0), &c(0));

        let ee = kuenneth(&ell(), &ell()).unwrap();
        assert_eq!(consts(&ee), vec![vec![1, 2, 1], vec![2, 4, 2], vec![1, 2, 1]]);

        let s = atom(AtomSpec::SerreSurface, "t/S").unwrap();
        let se = kuenneth(&s, &ell()).unwrap();
        assert_eq!(se.get(1, 0), &c(1));
        assert_eq!(se.get(0, 1), &c(2));
        assert_eq!(se.get(0, 2), &(SymPoly::unknown("t/S/h20").unwrap() + c(1)));
    }

    #[test]
    fn power_examples() {
        assert_eq!(power(&ell(), 0).unwrap(), HodgeDiamond::point());
        assert_eq!(power(&ell(), 2).unwrap(), kuenneth(&ell(), &ell()).unwrap());
        let s = atom(AtomSpec::SerreSurface, "t/S").unwrap();
        let s2 = power(&s, 2).unwrap();
        assert_eq!(s2.get(0, 1), &c(2));
        assert_eq!(s2.get(1, 0), &c(0));
    }

    #[test]
    fn capped_product_agrees_on_the_band() {
        let s = atom(AtomSpec::SerreSurface, "t/S").unwrap();
        let full = power(&kuenneth(&s, &ell()).unwrap(), 3).unwrap();
        let capped = power_capped(&kuenneth(&s, &ell()).unwrap(), 3, Some(2)).unwrap();
        assert_eq!(capped.known_degree(), Some(2));
        for p in 0..=full.n() {
            for q in 0..=full.n() {
                if let Some(v) = capped.try_get(p, q) {
                    assert_eq!(v, full.get(p, q), "({p},{q})");
                }
            }
        }
        assert!(capped.try_get(3, 3).is_none());
    }

    #[test]
    fn blowup_shift_examples() {
        let g = blowup_shift(&HodgeDiamond::point(), 3).unwrap();
        assert_eq!(g.get(1, 1), &c(1));
        assert_eq!(g.get(2, 2), &c(1));
        assert_eq!(g.get(2, 1), &c(0));

        let g = blowup_shift(&pk(1), 2).unwrap();
        assert_eq!(g.get(1, 1), &c(1));
        assert_eq!(g.get(2, 2), &c(1));
        assert_eq!(g.get(2, 1), &c(0));

        for n in 4..=6 {
            let z = atom(AtomSpec::Hypersurface(n), "t/Zn").unwrap();
            let g = blowup_shift(&z, 2).unwrap();
            assert_eq!(g.get(n - 1, 1), &c(1));
            assert_eq!(g.get(1, n - 1), &c(1));
        }
        assert_eq!(blowup_shift(&pk(1), 1), Err(CalculusError::Codimension(1)));
    }

    #[test]
    fn blowup_examples() {
        let b = blowup(&pk(3), &HodgeDiamond::point()).unwrap();
        assert_eq!(b.get(1, 1), &c(2));
        assert_eq!(b.get(2, 2), &c(2));
        assert!(blowup(&pk(3), &pk(2)).is_err());

        for m in 2..=5u64 {
            let mut x = pk(2);
            for _ in 0..m {
                x = blowup(&x, &HodgeDiamond::point()).unwrap();
            }
            assert!(diamond_equals_mod(&x, &pk(2), m).unwrap());
        }
    }

    #[test]
    fn lefschetz_examples() {
        let y = lefschetz_section(&pk(4), "t/Y").unwrap();
        assert_eq!(y.n(), 3);
        assert_eq!(y.get(1, 1), &c(1));
        assert_eq!(y.get(2, 2), &c(1));
        assert_eq!(y.get(3, 0), y.get(0, 3));
        assert_eq!(y.get(2, 1), y.get(1, 2));
        assert_eq!(y.get(3, 0).unknowns().len(), 1);
        assert_ne!(y.get(3, 0), y.get(2, 1));

        let twice = lefschetz_section(&lefschetz_section(&pk(5), "t/A").unwrap(), "t/B").unwrap();
        assert_eq!(twice.get(1, 1), &c(1));
        assert!(lefschetz_section(&ell(), "t/C").is_err());
    }

    #[test]
    fn chi_section_examples() {
        for m in 2..=6u64 {
            for b in 0..m {
                let (y, meta) = chi_section(&pk(4), b, m, &Assignment::zero(), "t/chi").unwrap();
                assert_eq!(meta.e, b);
                assert_eq!(meta.r, residue(1 - i128::from(b), m));
                assert_eq!(y.n(), 3);
                assert_eq!(y.get(0, 3).const_mod(m), Some(b));
                assert_eq!(y.get(3, 0), y.get(0, 3));
                assert_eq!(y.get(1, 1).const_mod(m), Some(1));
            }
        }
        assert!(chi_section(&pk(4), 3, 3, &Assignment::zero(), "t/x").is_err());
    }

    fn arb_diamond(tag: &'static str) -> impl Strategy<Value = HodgeDiamond> {
        (0usize..4, prop::collection::vec((0i128..3, any::<bool>()), 16)).prop_map(move |(n, vals)| {
            let mut g = Grid::zeros(n);
            let mut k = 0;
            for p in 0..=n {
                for q in 0..=n {
                    let (dp, dq) = dual(n, p, q);
                    if (p, q) > (dp, dq) {
                        continue;
                    }
                    let v = if (p, q) == (0, 0) {
                        SymPoly::one()
                    } else {
                        let (cst, sym) = vals[k % vals.len()];
                        k += 1;
                        let mut v = SymPoly::constant(cst);
                        if sym {
                            v = v + SymPoly::unknown(&format!("{tag}/{p},{q}")).unwrap();
                        }
                        v
                    };
                    g.set(dp, dq, v.clone());
                    g.set(p, q, v);
                }
            }
            HodgeDiamond::from_grid(g).unwrap()
        })
    }

    proptest! {
        #[test]
        fn kuenneth_is_commutative_and_associative(
            a in arb_diamond("pa"), b in arb_diamond("pb"), c3 in arb_diamond("pc")
        ) {
            prop_assert_eq!(kuenneth(&a, &b).unwrap(), kuenneth(&b, &a).unwrap());
            let l = kuenneth(&kuenneth(&a, &b).unwrap(), &c3).unwrap();
            let r = kuenneth(&a, &kuenneth(&b, &c3).unwrap()).unwrap();
            prop_assert_eq!(l, r);
            prop_assert_eq!(kuenneth(&a, &HodgeDiamond::point()).unwrap(), a.clone());
            prop_assert_eq!(kuenneth(&HodgeDiamond::point(), &a).unwrap(), a);
        }

        #[test]
        fn blowup_keeps_outer_entries(x in arb_diamond("bx"), z in arb_diamond("bz"), extra in 2usize..4) {
            let big = kuenneth(&x, &pk(z.n() + extra)).unwrap();
            let out = blowup(&big, &z).unwrap();
            let n = big.n();
            for p in 0..=n {
                for q in 0..=n {
                    if crate::diamond::is_outer(n, p, q) {
                        prop_assert_eq!(out.get(p, q), big.get(p, q));
                    }
                }
            }
        }

        #[test]
        fn m_fold_point_blowup_is_invisible_mod_m(x in arb_diamond("mx"), m in 2u64..5) {
            let ambient = kuenneth(&x, &pk(2)).unwrap();
            let mut y = ambient.clone();
            for _ in 0..m {
                y = blowup(&y, &HodgeDiamond::point()).unwrap();
            }
            prop_assert!(diamond_equals_mod(&y, &ambient, m).unwrap());
        }
    }
}
