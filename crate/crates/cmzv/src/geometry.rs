//! Möbius transformations and rational self-maps of the extended complex
//! plane over cyclotomic fields: application, exact preimages against a
//! candidate support, pullback of the forms ω(a), closure and unital
//! checks, symmetry groups of finite supports, and complete-edge graphs.
//!
//! Preimages are computed only relative to a candidate set by exact trial
//! division — there is no root-finding over ℂ anywhere.

use crate::cyclotomic::{CycError, CycNum, ExtPoint};
use crate::poly::Poly;
use crate::words::{Letter, Word, WordPoly};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Errors from geometric operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeomError {
    #[error("the three points are not pairwise distinct")]
    DegenerateTriple,
    #[error("polynomial does not split over the candidate set; remainder {0}")]
    DoesNotSplit(String),
    #[error("the invariant sum degenerates to a constant")]
    ConstantResult,
    #[error(transparent)]
    Cyc(#[from] CycError),
}

/// A Möbius transformation z ↦ (az+b)/(cz+d) with ad-bc ≠ 0, normalized so
/// the first nonzero entry in (a,b,c,d) order is 1. The normalization makes
/// the representation unique and hashable for orbit computations.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MobiusMap {
    a: CycNum,
    b: CycNum,
    c: CycNum,
    d: CycNum,
}

impl MobiusMap {
    pub fn new(a: CycNum, b: CycNum, c: CycNum, d: CycNum) -> Self {
        let det = a.mul(&d).sub(&b.mul(&c));
        assert!(!det.is_zero(), "Möbius map must have nonzero determinant");
        let lead = [&a, &b, &c, &d]
            .into_iter()
            .find(|x| !x.is_zero())
            .unwrap()
            .clone();
        let li = lead.inv().unwrap();
        MobiusMap {
            a: a.mul(&li),
            b: b.mul(&li),
            c: c.mul(&li),
            d: d.mul(&li),
        }
    }

    pub fn identity() -> Self {
        MobiusMap::new(CycNum::one(), CycNum::zero(), CycNum::zero(), CycNum::one())
    }

    /// z ↦ μ·z
    pub fn scaling(mu: CycNum) -> Self {
        MobiusMap::new(mu, CycNum::zero(), CycNum::zero(), CycNum::one())
    }

    /// z ↦ μ/z
    pub fn inversion(mu: CycNum) -> Self {
        MobiusMap::new(CycNum::zero(), mu, CycNum::one(), CycNum::zero())
    }

    pub fn entries(&self) -> (&CycNum, &CycNum, &CycNum, &CycNum) {
        (&self.a, &self.b, &self.c, &self.d)
    }

    pub fn apply(&self, z: &ExtPoint) -> ExtPoint {
        match z {
            ExtPoint::Infinity => {
                if self.c.is_zero() {
                    ExtPoint::Infinity
                } else {
                    ExtPoint::Finite(self.a.div(&self.c).unwrap())
                }
            }
            ExtPoint::Finite(z) => {
                let den = self.c.mul(z).add(&self.d);
                if den.is_zero() {
                    ExtPoint::Infinity
                } else {
                    ExtPoint::Finite(self.a.mul(z).add(&self.b).div(&den).unwrap())
                }
            }
        }
    }

    pub fn inverse(&self) -> MobiusMap {
        MobiusMap::new(
            self.d.clone(),
            self.b.clone().neg(),
            self.c.clone().neg(),
            self.a.clone(),
        )
    }

    /// self ∘ other (apply `other` first).
    pub fn compose(&self, other: &MobiusMap) -> MobiusMap {
        MobiusMap::new(
            self.a.mul(&other.a).add(&self.b.mul(&other.c)),
            self.a.mul(&other.b).add(&self.b.mul(&other.d)),
            self.c.mul(&other.a).add(&self.d.mul(&other.c)),
            self.c.mul(&other.b).add(&self.d.mul(&other.d)),
        )
    }

    /// The unique Möbius map with p_i ↦ q_i for two pairwise-distinct triples.
    pub fn from_triples(p: &[ExtPoint; 3], q: &[ExtPoint; 3]) -> Result<MobiusMap, GeomError> {
        Ok(Self::to_standard(q)?.inverse().compose(&Self::to_standard(p)?))
    }

    /// The map sending (z1, z2, z3) to (0, 1, ∞).
    fn to_standard(z: &[ExtPoint; 3]) -> Result<MobiusMap, GeomError> {
        for i in 0..3 {
            for j in (i + 1)..3 {
                if z[i] == z[j] {
                    return Err(GeomError::DegenerateTriple);
                }
            }
        }
        let fin = |p: &ExtPoint| p.as_finite().cloned();
        let m = match (fin(&z[0]), fin(&z[1]), fin(&z[2])) {
            (Some(z1), Some(z2), Some(z3)) => {
                let n = z2.sub(&z3);
                let d = z2.sub(&z1);
                MobiusMap::new(n.clone(), z1.mul(&n).neg(), d.clone(), z3.mul(&d).neg())
            }
            (None, Some(z2), Some(z3)) => MobiusMap::new(
                CycNum::zero(),
                z2.sub(&z3).neg(),
                CycNum::from_int(-1),
                z3.clone(),
            ),
            (Some(z1), None, Some(z3)) => MobiusMap::new(
                CycNum::one(),
                z1.clone().neg(),
                CycNum::one(),
                z3.clone().neg(),
            ),
            (Some(z1), Some(z2), None) => MobiusMap::new(
                CycNum::from_int(-1),
                z1.clone(),
                CycNum::zero(),
                z1.sub(&z2),
            ),
            _ => unreachable!("at most one point can be infinity"),
        };
        Ok(m)
    }
}

impl fmt::Debug for MobiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(({})z + ({})) / (({})z + ({}))",
            self.a, self.b, self.c, self.d
        )
    }
}

/// A rational self-map of Ĉ as a coprime fraction of polynomials over the
/// cyclotomic field, denominator monic.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMap {
    num: Poly,
    den: Poly,
}

impl RationalMap {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "denominator must be nonzero");
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.degree() > 0 {
            (
                num.divmod(&g).unwrap().0,
                den.divmod(&g).unwrap().0,
            )
        } else {
            (num, den)
        };
        let li = den.leading().inv().unwrap();
        num = num.scale(&li);
        den = den.scale(&li);
        assert!(
            num.degree() > 0 || den.degree() > 0 || !num.is_zero(),
            "rational map must be nonconstant or at least well-defined"
        );
        RationalMap { num, den }
    }

    pub fn identity() -> Self {
        RationalMap::new(Poly::x(), Poly::one())
    }

    pub fn from_mobius(m: &MobiusMap) -> Self {
        let (a, b, c, d) = m.entries();
        RationalMap::new(
            Poly::new(vec![b.clone(), a.clone()]),
            Poly::new(vec![d.clone(), c.clone()]),
        )
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn degree(&self) -> usize {
        self.num.degree().max(self.den.degree())
    }

    pub fn is_constant(&self) -> bool {
        self.num.degree() == 0 && self.den.degree() == 0 || self.num.is_zero()
    }

    pub fn apply(&self, z: &ExtPoint) -> ExtPoint {
        match z {
            ExtPoint::Infinity => {
                let (dn, dd) = (self.num.degree(), self.den.degree());
                match dn.cmp(&dd) {
                    std::cmp::Ordering::Greater => ExtPoint::Infinity,
                    std::cmp::Ordering::Less => ExtPoint::zero(),
                    std::cmp::Ordering::Equal => {
                        ExtPoint::Finite(self.num.leading().div(&self.den.leading()).unwrap())
                    }
                }
            }
            ExtPoint::Finite(z) => {
                let d = self.den.eval(z);
                if d.is_zero() {
                    ExtPoint::Infinity
                } else {
                    ExtPoint::Finite(self.num.eval(z).div(&d).unwrap())
                }
            }
        }
    }

    /// Pointwise sum of rational functions.
    pub fn add(&self, other: &RationalMap) -> RationalMap {
        let num = self
            .num
            .mul(&other.den)
            .add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        RationalMap::new(num, den)
    }

    /// self ∘ m for a Möbius m (apply m first).
    pub fn compose_mobius(&self, m: &MobiusMap) -> RationalMap {
        let (a, b, c, d) = m.entries();
        let deg = self.degree();
        let num = self.num.compose_mobius_homogenized(a, b, c, d, deg);
        let den = self.den.compose_mobius_homogenized(a, b, c, d, deg);
        RationalMap::new(num, den)
    }
}

impl fmt::Debug for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}] / [{:?}]", self.num, self.den)
    }
}

/// A finite support: at least three pairwise-distinct points of Ĉ.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SupportSet {
    points: BTreeSet<ExtPoint>,
}

impl SupportSet {
    pub fn new(points: impl IntoIterator<Item = ExtPoint>) -> Self {
        let points: BTreeSet<ExtPoint> = points.into_iter().collect();
        assert!(points.len() >= 3, "support needs at least 3 points");
        SupportSet { points }
    }

    /// The level-N support {0, ∞, 1, μ, ..., μ^{N-1}}.
    pub fn standard(n: u32) -> Self {
        let mut pts = vec![ExtPoint::zero(), ExtPoint::Infinity];
        for k in 0..n {
            pts.push(ExtPoint::root_of_unity(n, k as i64));
        }
        SupportSet::new(pts)
    }

    pub fn points(&self) -> impl Iterator<Item = &ExtPoint> {
        self.points.iter()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, p: &ExtPoint) -> bool {
        self.points.contains(p)
    }

    pub fn finite_points(&self) -> impl Iterator<Item = &CycNum> {
        self.points.iter().filter_map(ExtPoint::as_finite)
    }
}

/// A set of ordered point pairs with endpoints in a support.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct EdgeSet {
    pairs: BTreeSet<(ExtPoint, ExtPoint)>,
}

impl EdgeSet {
    pub fn new(pairs: impl IntoIterator<Item = (ExtPoint, ExtPoint)>) -> Self {
        EdgeSet {
            pairs: pairs.into_iter().collect(),
        }
    }

    pub fn pairs(&self) -> impl Iterator<Item = &(ExtPoint, ExtPoint)> {
        self.pairs.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Preimage multiset of v under R, relative to a candidate set: factors the
/// defining polynomial by exact division against (x - s) for candidate s
/// (∞ accounted through the degree deficit). Fails with the unsplit
/// remainder if R⁻¹(v) ⊄ candidates.
pub fn preimage_multiset(
    r: &RationalMap,
    v: &ExtPoint,
    candidates: &SupportSet,
) -> Result<Vec<(ExtPoint, usize)>, GeomError> {
    let deg = r.degree();
    let mut p = match v {
        ExtPoint::Infinity => r.denominator().clone(),
        ExtPoint::Finite(v) => r.numerator().sub(&r.denominator().scale(v)),
    };
    assert!(!p.is_zero(), "map is constant at the queried value");
    let mut out: BTreeMap<ExtPoint, usize> = BTreeMap::new();
    let deficit = deg - p.degree();
    if deficit > 0 {
        if !candidates.contains(&ExtPoint::Infinity) {
            return Err(GeomError::DoesNotSplit("infinity not a candidate".into()));
        }
        out.insert(ExtPoint::Infinity, deficit);
    }
    for s in candidates.finite_points() {
        let lin = Poly::linear_root(s);
        loop {
            if p.degree() == 0 {
                break;
            }
            let (q, rem) = p.divmod(&lin)?;
            if rem.is_zero() {
                *out.entry(ExtPoint::Finite(s.clone())).or_insert(0) += 1;
                p = q;
            } else {
                break;
            }
        }
    }
    if p.degree() > 0 {
        return Err(GeomError::DoesNotSplit(format!("{:?}", p)));
    }
    Ok(out.into_iter().collect())
}

/// Pullback of the form ω(a) along R, as a degree-1 word polynomial:
/// R*ω(a) = Σ_{s ∈ R⁻¹(a)} ω(s) - Σ_{s ∈ R⁻¹(∞)} ω(s), multiplicities
/// respected and ω(∞) terms deleted by normal form.
pub fn pullback_letter(
    r: &RationalMap,
    a: &ExtPoint,
    candidates: &SupportSet,
) -> Result<WordPoly, GeomError> {
    let mut out = WordPoly::zero();
    for (s, m) in preimage_multiset(r, a, candidates)? {
        out.add_term(
            Word::single(Letter(s)),
            CycNum::from_int(m as i64),
        );
    }
    for (s, m) in preimage_multiset(r, &ExtPoint::Infinity, candidates)? {
        out.add_term(
            Word::single(Letter(s)),
            CycNum::from_int(-(m as i64)),
        );
    }
    Ok(out)
}

/// Pullback of a whole word: the expanded noncommutative product of the
/// letterwise pullbacks.
pub fn pullback_word(
    r: &RationalMap,
    w: &Word,
    candidates: &SupportSet,
) -> Result<WordPoly, GeomError> {
    let mut acc = WordPoly::one();
    for l in w.letters() {
        let p = pullback_letter(r, l.pole(), candidates)?;
        acc = acc.concat(&p);
    }
    Ok(acc)
}

/// True iff R⁻¹(R(s)) ⊆ S for every s ∈ S.
pub fn check_closed(r: &RationalMap, s: &SupportSet) -> bool {
    s.points()
        .all(|p| preimage_multiset(r, &r.apply(p), s).is_ok())
}

/// All Möbius maps g with g(S) = S, by enumerating ordered triples of S as
/// images of one fixed triple; the result is a group.
pub fn symmetry_group(s: &SupportSet) -> Vec<MobiusMap> {
    let pts: Vec<ExtPoint> = s.points().cloned().collect();
    let base: [ExtPoint; 3] = [pts[0].clone(), pts[1].clone(), pts[2].clone()];
    let mut found: BTreeSet<MobiusMap> = BTreeSet::new();
    for q1 in &pts {
        for q2 in &pts {
            if q2 == q1 {
                continue;
            }
            for q3 in &pts {
                if q3 == q1 || q3 == q2 {
                    continue;
                }
                let Ok(g) =
                    MobiusMap::from_triples(&base, &[q1.clone(), q2.clone(), q3.clone()])
                else {
                    continue;
                };
                if pts.iter().all(|p| s.contains(&g.apply(p))) {
                    found.insert(g);
                }
            }
        }
    }
    found.into_iter().collect()
}

/// True iff R⁻¹({0,1,∞}) ⊆ {0,∞,1,μ,...,μ^{N-1}} (the N-unital property).
pub fn is_unital(r: &RationalMap, n: u32) -> bool {
    let s = SupportSet::standard(n);
    [ExtPoint::zero(), ExtPoint::one(), ExtPoint::Infinity]
        .iter()
        .all(|v| preimage_multiset(r, v, &s).is_ok())
}

/// True iff the orbit graph of the edge set under the symmetry group covers
/// S and is connected.
pub fn complete_edges(s: &SupportSet, t: &EdgeSet) -> bool {
    if t.is_empty() {
        return false;
    }
    let pts: Vec<ExtPoint> = s.points().cloned().collect();
    let index: BTreeMap<&ExtPoint, usize> = pts.iter().zip(0..).collect();
    let group = symmetry_group(s);
    let mut dsu: Vec<usize> = (0..pts.len()).collect();
    fn find(dsu: &mut Vec<usize>, i: usize) -> usize {
        if dsu[i] != i {
            let r = find(dsu, dsu[i]);
            dsu[i] = r;
        }
        dsu[i]
    }
    let mut covered = vec![false; pts.len()];
    for (t0, s0) in t.pairs() {
        for g in &group {
            let a = g.apply(t0);
            let b = g.apply(s0);
            let (Some(&ia), Some(&ib)) = (index.get(&a), index.get(&b)) else {
                continue;
            };
            covered[ia] = true;
            covered[ib] = true;
            let (ra, rb) = (find(&mut dsu, ia), find(&mut dsu, ib));
            if ra != rb {
                dsu[ra] = rb;
            }
        }
    }
    if !covered.iter().all(|&c| c) {
        return false;
    }
    let r0 = find(&mut dsu, 0);
    (0..pts.len()).all(|i| find(&mut dsu, i) == r0)
}

/// The H-invariant rational function Σ_{σ∈H} R0∘σ (sum of values).
pub fn invariant_map(h: &[MobiusMap], r0: &MobiusMap) -> Result<RationalMap, GeomError> {
    let base = RationalMap::from_mobius(r0);
    let mut acc: Option<RationalMap> = None;
    for g in h {
        let term = base.compose_mobius(g);
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term),
        });
    }
    let r = acc.expect("nonempty subgroup");
    if r.is_constant() {
        return Err(GeomError::ConstantResult);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::cross_ratio;

    fn pt(i: i64) -> ExtPoint {
        ExtPoint::from_int(i)
    }
    fn mu(n: u32, k: i64) -> ExtPoint {
        ExtPoint::root_of_unity(n, k)
    }

    #[test]
    fn triple_interpolation() {
        let p = [pt(0), pt(1), ExtPoint::Infinity];
        let id = MobiusMap::from_triples(&p, &p).unwrap();
        assert_eq!(id, MobiusMap::identity());
        // (0,1,∞) -> (1,0,∞) is z ↦ 1-z
        let m = MobiusMap::from_triples(&p, &[pt(1), pt(0), ExtPoint::Infinity]).unwrap();
        assert_eq!(m.apply(&pt(5)), pt(-4));
        assert_eq!(
            MobiusMap::from_triples(&p, &[pt(0), pt(0), ExtPoint::Infinity]).unwrap_err(),
            GeomError::DegenerateTriple
        );
    }

    #[test]
    fn level5_example_image() {
        // R with R(μ)=0, R(1)=1, R(μ²)=∞ maps the level-5 support to the
        // paper's seven values, including (√5+1)/2 and (√5+3)/2.
        let m = MobiusMap::from_triples(
            &[mu(5, 1), pt(1), mu(5, 2)],
            &[pt(0), pt(1), ExtPoint::Infinity],
        )
        .unwrap();
        let s = SupportSet::standard(5);
        let image: BTreeSet<ExtPoint> = s.points().map(|p| m.apply(p)).collect();
        let sqrt5 = CycNum::sqrt_rational(&num_rational::BigRational::from_integer(5.into()))
            .unwrap();
        let phi_plus = sqrt5
            .add(&CycNum::from_int(1))
            .scale(&num_rational::BigRational::new(1.into(), 2.into()));
        let phi3 = sqrt5
            .add(&CycNum::from_int(3))
            .scale(&num_rational::BigRational::new(1.into(), 2.into()));
        assert!(image.contains(&ExtPoint::Finite(phi_plus)));
        assert!(image.contains(&ExtPoint::Finite(phi3)));
        assert!(image.contains(&pt(0)));
        assert!(image.contains(&pt(1)));
        assert!(image.contains(&ExtPoint::Infinity));
        // 1 + μ is in the image (it is R(μ³) or R(μ⁴))
        let onemu = CycNum::one().add(&CycNum::root_of_unity(5, 1));
        assert!(image.contains(&ExtPoint::Finite(onemu)));
    }

    #[test]
    fn cross_ratio_mobius_invariance() {
        let zs = [pt(0), pt(1), ExtPoint::Infinity, mu(5, 1)];
        let maps = [
            MobiusMap::scaling(CycNum::root_of_unity(5, 2)),
            MobiusMap::inversion(CycNum::one()),
            MobiusMap::from_triples(
                &[pt(0), pt(1), ExtPoint::Infinity],
                &[pt(3), ExtPoint::Infinity, pt(-2)],
            )
            .unwrap(),
        ];
        let base = cross_ratio(&zs[0], &zs[1], &zs[2], &zs[3]).unwrap();
        for m in &maps {
            let ws: Vec<ExtPoint> = zs.iter().map(|z| m.apply(z)).collect();
            let cr = cross_ratio(&ws[0], &ws[1], &ws[2], &ws[3]).unwrap();
            assert_eq!(cr, base);
        }
    }

    #[test]
    fn preimages_of_square_map() {
        // R = x²: preimage of 1 in {0,1,-1,∞} is {1,-1}
        let r = RationalMap::new(Poly::x().mul(&Poly::x()), Poly::one());
        let s = SupportSet::new([pt(0), pt(1), pt(-1), ExtPoint::Infinity]);
        let pre = preimage_multiset(&r, &pt(1), &s).unwrap();
        assert_eq!(pre, vec![(pt(-1), 1), (pt(1), 1)]);
        let pre0 = preimage_multiset(&r, &pt(0), &s).unwrap();
        assert_eq!(pre0, vec![(pt(0), 2)]);
        let pre_inf = preimage_multiset(&r, &ExtPoint::Infinity, &s).unwrap();
        assert_eq!(pre_inf, vec![(ExtPoint::Infinity, 2)]);
        // ±√2 are not candidates
        assert!(matches!(
            preimage_multiset(&r, &pt(2), &s),
            Err(GeomError::DoesNotSplit(_))
        ));
    }

    #[test]
    fn pullback_of_binomial_map() {
        // R = c·x(1-x): R*ω(0) = ω(0)+ω(1)
        let c = CycNum::from_int(-1);
        let r = RationalMap::new(
            Poly::new(vec![CycNum::zero(), c.clone(), c.neg()]),
            Poly::one(),
        );
        let s = SupportSet::new([pt(0), pt(1), ExtPoint::Infinity]);
        let p = pullback_letter(&r, &pt(0), &s).unwrap();
        let mut expect = WordPoly::zero();
        expect.add_term(Word::single(Letter(pt(0))), CycNum::one());
        expect.add_term(Word::single(Letter(pt(1))), CycNum::one());
        assert_eq!(p, expect);
        // identity pullback
        let id = RationalMap::identity();
        let q = pullback_letter(&id, &mu(5, 1), &SupportSet::standard(5)).unwrap();
        assert_eq!(q, WordPoly::from_letter(Letter(mu(5, 1))));
    }

    #[test]
    fn closure_checks() {
        // x² is closed on {0,1,-1,∞}
        let sq = RationalMap::new(Poly::x().mul(&Poly::x()), Poly::one());
        let s = SupportSet::new([pt(0), pt(1), pt(-1), ExtPoint::Infinity]);
        assert!(check_closed(&sq, &s));
        // x² is not closed on {0,1,∞} (R⁻¹(1) = {±1})
        let s3 = SupportSet::new([pt(0), pt(1), ExtPoint::Infinity]);
        assert!(!check_closed(&sq, &s3));
        // x + 1/x is closed on the level-10 support
        let r = invariant_map(
            &[MobiusMap::identity(), MobiusMap::inversion(CycNum::one())],
            &MobiusMap::identity(),
        )
        .unwrap();
        assert!(check_closed(&r, &SupportSet::standard(10)));
    }

    #[test]
    fn dihedral_symmetry_group() {
        for n in [3u32, 5] {
            let s = SupportSet::standard(n);
            let g = symmetry_group(&s);
            assert_eq!(g.len(), 2 * n as usize, "level {n}");
            // closed under composition and inverse
            let set: BTreeSet<MobiusMap> = g.iter().cloned().collect();
            for a in &g {
                assert!(set.contains(&a.inverse()));
                for b in &g {
                    assert!(set.contains(&a.compose(b)));
                }
            }
            assert!(set.contains(&MobiusMap::identity()));
        }
    }

    #[test]
    fn anharmonic_group_of_three_points() {
        let s = SupportSet::new([pt(0), pt(1), ExtPoint::Infinity]);
        let g = symmetry_group(&s);
        assert_eq!(g.len(), 6);
    }

    #[test]
    fn generic_four_point_group() {
        // {0,1,∞,2}: brute-force count — the anharmonic subgroup preserving
        // the cross-ratio orbit of 2... verified against triple enumeration.
        let s = SupportSet::new([pt(0), pt(1), pt(2), ExtPoint::Infinity]);
        let g = symmetry_group(&s);
        assert!(g.contains(&MobiusMap::identity()));
        // {0,1,2,∞} is a harmonic quadruple (cross-ratio orbit {-1,2,1/2}),
        // whose Möbius stabilizer is dihedral of order 8.
        assert_eq!(g.len(), 8);
        let set: BTreeSet<MobiusMap> = g.iter().cloned().collect();
        for a in &g {
            for b in &g {
                assert!(set.contains(&a.compose(b)));
            }
        }
    }

    #[test]
    fn unital_function_checks() {
        // T1 = x²/(1+x+x²) is 6-unital
        let t1 = RationalMap::new(
            Poly::new(vec![CycNum::zero(), CycNum::zero(), CycNum::one()]),
            Poly::new(vec![CycNum::one(), CycNum::one(), CycNum::one()]),
        );
        assert!(is_unital(&t1, 6));
        assert!(is_unital(&RationalMap::identity(), 4));
        // x - 2 is not 6-unital
        let shift = RationalMap::new(
            Poly::new(vec![CycNum::from_int(-2), CycNum::one()]),
            Poly::one(),
        );
        assert!(!is_unital(&shift, 6));
    }

    #[test]
    fn complete_edges_level_support() {
        let s = SupportSet::standard(5);
        let t = EdgeSet::new([(pt(0), pt(1))]);
        assert!(complete_edges(&s, &t));
        assert!(!complete_edges(&s, &EdgeSet::default()));
        // trivial-symmetry support leaves vertices isolated
        let s4 = SupportSet::new([pt(0), pt(1), pt(2), ExtPoint::Infinity]);
        // (0,1) orbit under the order-4 group: may or may not cover; the
        // level-N statement needs the full dihedral orbit, here we expect
        // failure of coverage or connectivity for an edge set on a support
        // with too little symmetry
        let s5 = SupportSet::new([pt(0), pt(1), pt(3), pt(7), ExtPoint::Infinity]);
        assert!(!complete_edges(&s5, &EdgeSet::new([(pt(0), pt(1))])));
        let _ = s4;
    }

    #[test]
    fn invariant_map_examples() {
        // H = {x, 1/x}, R0 = x -> x + 1/x
        let r = invariant_map(
            &[MobiusMap::identity(), MobiusMap::inversion(CycNum::one())],
            &MobiusMap::identity(),
        )
        .unwrap();
        assert_eq!(r.degree(), 2);
        assert_eq!(r.apply(&pt(2)), ExtPoint::Finite(CycNum::from_frac(5, 2)));
        // H-invariance: R(1/x) = R(x) on sample points
        for z in [pt(3), pt(-2), mu(5, 2)] {
            let inv = MobiusMap::inversion(CycNum::one()).apply(&z);
            assert_eq!(r.apply(&z), r.apply(&inv));
        }
        // H = {x, μ/x}, R0 = x -> x + μ/x
        let mu10 = CycNum::root_of_unity(10, 1);
        let r2 = invariant_map(
            &[MobiusMap::identity(), MobiusMap::inversion(mu10.clone())],
            &MobiusMap::identity(),
        )
        .unwrap();
        assert!(check_closed(&r2, &SupportSet::standard(10)));
        // identity subgroup keeps R0
        let r3 = invariant_map(&[MobiusMap::identity()], &MobiusMap::identity()).unwrap();
        assert_eq!(r3, RationalMap::identity());
    }

    #[test]
    fn pullback_functoriality_for_mobius() {
        // pullback(R2∘R1, a) = expansion of pullback in stages, exactly
        let s = SupportSet::standard(5);
        let r1 = MobiusMap::scaling(CycNum::root_of_unity(5, 1));
        let r2 = MobiusMap::inversion(CycNum::one());
        let comp = r2.compose(&r1);
        let rc = RationalMap::from_mobius(&comp);
        for a in [pt(0), pt(1), mu(5, 3)] {
            let direct = pullback_letter(&rc, &a, &s).unwrap();
            // staged: pull a back through R2, then each letter through R1
            let mid = pullback_letter(&RationalMap::from_mobius(&r2), &a, &s).unwrap();
            let mut staged = WordPoly::zero();
            for (w, c) in mid.terms() {
                let inner = pullback_letter(
                    &RationalMap::from_mobius(&r1),
                    w.letters()[0].pole(),
                    &s,
                )
                .unwrap();
                staged = staged.add(&inner.scale(c));
            }
            assert_eq!(direct, staged, "at {a:?}");
        }
    }
}
