//! Conversion between polylogarithm indices, iterated-integral words, and
//! colored-multiple-zeta-value expressions.
//!
//! The index/word dictionary is
//! L_{s1..sk}(x1..xk) = (-1)^k ∫₀¹ ω(0)^{s1-1}ω(a1) ⋯ ω(0)^{sk-1}ω(ak)
//! with a_i = (x1⋯xi)^{-1}. A [`CmzvExpr`] is a graded polynomial in CMZV
//! atoms L_s(μ^a) and the distinguished weight-1 atom 2πi, with exact
//! cyclotomic coefficients.

use crate::cyclotomic::{CycError, CycNum, ExtPoint};
use crate::words::{Letter, Word};
use num_rational::BigRational;
use std::collections::BTreeMap;
use std::fmt;

/// Errors from the conversion pipeline.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConvertError {
    #[error("index is divergent")]
    Divergent,
    #[error("word is not convergent (starts with ω(1) or ends with ω(0))")]
    NotConvergentWord,
    #[error("word has a pole that is not zero or a root of unity")]
    NonUnitaryPole,
    #[error("word contains a pole outside the transformed support: {0}")]
    UnsupportedPole(String),
    #[error("support chain is not connected")]
    NotConnected,
    #[error("corner-constant system is underdetermined")]
    UnderdeterminedSystem,
    #[error("numeric branch rounding is ambiguous: {0}")]
    RoundingAmbiguous(String),
    #[error("no catalog entry covers the required support")]
    NoCatalogEntry,
    #[error("series c is outside the convergence domain |c| <= 4")]
    ConvergenceDomain,
    #[error("no root of c·x(1-x)=1 lies in a cyclotomic field within the level cap")]
    AlphaNotCyclotomic,
    #[error(transparent)]
    Cyc(#[from] CycError),
}

/// A convergent colored-MZV index L_{s1..sk}(μ^{a1},...,μ^{ak}), stored at
/// the minimal level N (the gcd of N and all a_i is 1 unless k = 0).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CmzvIndex {
    s: Vec<u32>,
    a: Vec<u32>,
    level: u32,
}

impl CmzvIndex {
    /// Builds an index at level N with arguments μ_N^{a_i}; reduces to the
    /// minimal level. Returns None for the divergent case (s1, a1) = (1, 0).
    pub fn new(level: u32, s: Vec<u32>, a: Vec<u32>) -> Option<CmzvIndex> {
        assert_eq!(s.len(), a.len());
        assert!(!s.is_empty());
        assert!(s.iter().all(|&si| si >= 1));
        let a: Vec<u32> = a.iter().map(|&ai| ai % level).collect();
        if s[0] == 1 && a[0] == 0 {
            return None;
        }
        let mut g = level;
        for &ai in &a {
            g = num_integer::gcd(g, ai);
            if g == 1 {
                break;
            }
        }
        let g = if g == 0 { level } else { g };
        Some(CmzvIndex {
            s,
            a: a.iter().map(|&ai| ai / g).collect(),
            level: level / g,
        })
    }

    pub fn zeta(s: u32) -> CmzvIndex {
        assert!(s >= 2);
        CmzvIndex::new(1, vec![s], vec![0]).unwrap()
    }

    pub fn level(&self) -> u32 {
        self.level
    }
    pub fn exponents(&self) -> &[u32] {
        &self.s
    }
    pub fn residues(&self) -> &[u32] {
        &self.a
    }
    pub fn depth(&self) -> usize {
        self.s.len()
    }
    pub fn weight(&self) -> usize {
        self.s.iter().map(|&x| x as usize).sum()
    }

    /// The arguments μ^{a_i} as exact cyclotomic numbers.
    pub fn arguments(&self) -> Vec<CycNum> {
        self.a
            .iter()
            .map(|&ai| CycNum::root_of_unity(self.level, ai as i64))
            .collect()
    }

    /// Re-express at a multiple of the current level.
    pub fn at_level(&self, n: u32) -> CmzvIndex {
        assert!(n % self.level == 0);
        let f = n / self.level;
        CmzvIndex {
            s: self.s.clone(),
            a: self.a.iter().map(|&ai| ai * f).collect(),
            level: n,
        }
    }
}

impl fmt::Debug for CmzvIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L[")?;
        for (i, s) in self.s.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", s)?;
        }
        write!(f, ";")?;
        for (i, a) in self.a.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", a)?;
        }
        write!(f, "]@{}", self.level)
    }
}

impl fmt::Display for CmzvIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// An atom of a CMZV expression: 2πi or a convergent CMZV index.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    TwoPiI,
    Cmzv(CmzvIndex),
}

impl Atom {
    pub fn weight(&self) -> usize {
        match self {
            Atom::TwoPiI => 1,
            Atom::Cmzv(i) => i.weight(),
        }
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::TwoPiI => write!(f, "2PI"),
            Atom::Cmzv(i) => write!(f, "{}", i),
        }
    }
}

/// A multiset of atoms, kept sorted; the product of its atoms.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<Atom>);

impl Monomial {
    pub fn unit() -> Monomial {
        Monomial(Vec::new())
    }
    pub fn atom(a: Atom) -> Monomial {
        Monomial(vec![a])
    }
    pub fn from_atoms(mut atoms: Vec<Atom>) -> Monomial {
        atoms.sort();
        Monomial(atoms)
    }
    pub fn atoms(&self) -> &[Atom] {
        &self.0
    }
    pub fn weight(&self) -> usize {
        self.0.iter().map(Atom::weight).sum()
    }
    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        v.sort();
        Monomial(v)
    }
    pub fn is_product(&self) -> bool {
        self.0.len() >= 2
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "·")?;
            }
            write!(f, "{:?}", a)?;
        }
        Ok(())
    }
}

/// A polynomial expression in CMZV atoms and 2πi with CycNum coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct CmzvExpr {
    terms: BTreeMap<Monomial, CycNum>,
}

impl CmzvExpr {
    pub fn zero() -> CmzvExpr {
        CmzvExpr::default()
    }

    pub fn one() -> CmzvExpr {
        CmzvExpr::constant(CycNum::one())
    }

    pub fn constant(c: CycNum) -> CmzvExpr {
        let mut e = CmzvExpr::zero();
        e.add_term(Monomial::unit(), c);
        e
    }

    pub fn from_rational(q: BigRational) -> CmzvExpr {
        CmzvExpr::constant(CycNum::from_rational(q))
    }

    pub fn atom(a: Atom) -> CmzvExpr {
        let mut e = CmzvExpr::zero();
        e.add_term(Monomial::atom(a), CycNum::one());
        e
    }

    pub fn cmzv(i: CmzvIndex) -> CmzvExpr {
        CmzvExpr::atom(Atom::Cmzv(i))
    }

    pub fn two_pi_i() -> CmzvExpr {
        CmzvExpr::atom(Atom::TwoPiI)
    }

    pub fn add_term(&mut self, m: Monomial, c: CycNum) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &CycNum)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> CycNum {
        self.terms.get(m).cloned().unwrap_or_else(CycNum::zero)
    }

    pub fn add(&self, other: &CmzvExpr) -> CmzvExpr {
        let mut out = self.clone();
        for (m, c) in other.terms.iter() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &CmzvExpr) -> CmzvExpr {
        let mut out = self.clone();
        for (m, c) in other.terms.iter() {
            out.add_term(m.clone(), c.clone().neg());
        }
        out
    }

    pub fn neg(&self) -> CmzvExpr {
        let mut out = CmzvExpr::zero();
        for (m, c) in self.terms.iter() {
            out.add_term(m.clone(), c.clone().neg());
        }
        out
    }

    pub fn scale(&self, c: &CycNum) -> CmzvExpr {
        let mut out = CmzvExpr::zero();
        for (m, a) in self.terms.iter() {
            out.add_term(m.clone(), a.mul(c));
        }
        out
    }

    pub fn scale_rational(&self, q: &BigRational) -> CmzvExpr {
        self.scale(&CycNum::from_rational(q.clone()))
    }

    pub fn mul(&self, other: &CmzvExpr) -> CmzvExpr {
        let mut out = CmzvExpr::zero();
        for (m1, c1) in self.terms.iter() {
            for (m2, c2) in other.terms.iter() {
                out.add_term(m1.mul(m2), c1.mul(c2));
            }
        }
        out
    }

    /// The weight if every monomial has the same one (constants are weight 0
    /// only for the zero/pure-constant expression).
    pub fn homogeneous_weight(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(Monomial::weight);
        let first = it.next()?;
        if it.all(|w| w == first) {
            Some(first)
        } else {
            None
        }
    }

    /// The weight-k component.
    pub fn component(&self, k: usize) -> CmzvExpr {
        let mut out = CmzvExpr::zero();
        for (m, c) in self.terms.iter().filter(|(m, _)| m.weight() == k) {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    /// All distinct atoms appearing in the expression.
    pub fn atoms(&self) -> Vec<Atom> {
        let mut set = std::collections::BTreeSet::new();
        for m in self.terms.keys() {
            for a in m.atoms() {
                set.insert(a.clone());
            }
        }
        set.into_iter().collect()
    }
}

impl fmt::Debug for CmzvExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if m.is_unit() {
                write!(f, "({})", c)?;
            } else {
                write!(f, "({})·{:?}", c, m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for CmzvExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A multiple-polylogarithm index L_{s1..sk}(x1,...,xk) with exact
/// cyclotomic arguments.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolylogIndex {
    pub s: Vec<u32>,
    pub x: Vec<CycNum>,
}

impl PolylogIndex {
    pub fn new(s: Vec<u32>, x: Vec<CycNum>) -> PolylogIndex {
        assert_eq!(s.len(), x.len());
        assert!(!s.is_empty());
        PolylogIndex { s, x }
    }

    /// Li_s(z) with all later arguments 1 (the generalized polylogarithm).
    pub fn generalized(s: Vec<u32>, z: CycNum) -> PolylogIndex {
        let mut x = vec![CycNum::one(); s.len()];
        x[0] = z;
        PolylogIndex { s, x }
    }

    pub fn depth(&self) -> usize {
        self.s.len()
    }

    pub fn weight(&self) -> usize {
        self.s.iter().map(|&x| x as usize).sum()
    }

    /// Convergence of the defining series: |x1⋯xi| ≤ 1 for every i and
    /// (s1, x1) ≠ (1, 1). Moduli are decided exactly for roots of unity and
    /// at 30 guard digits otherwise.
    pub fn is_convergent(&self) -> bool {
        if self.s[0] == 1 && self.x[0].is_one() {
            return false;
        }
        let mut prod = CycNum::one();
        for xi in &self.x {
            if xi.is_zero() {
                return false;
            }
            prod = prod.mul(xi);
            if !modulus_le_one(&prod) {
                return false;
            }
        }
        true
    }
}

/// |c| ≤ 1, exactly for roots of unity, else numerically at 30 guard digits.
pub(crate) fn modulus_le_one(c: &CycNum) -> bool {
    // |c|² = c · conj(c) is real (level ≤ 2 after normalization when the
    // field is a CM field; always rational-checkable via as_rational of the
    // real subfield — here we use: |c|²=1 iff c·c̄=1).
    let norm = c.mul(&c.conj());
    if norm.is_one() {
        return true;
    }
    if let Some(q) = norm.as_rational() {
        return q <= BigRational::from_integer(1.into());
    }
    // |c|² in a real subfield: decide numerically with guard digits
    let v = crate::numeric::eval_cycnum(&norm, 40);
    crate::numeric::bigc::big_to_f64(&v.re) <= 1.0 + 1e-30
}

/// Maps a convergent polylog index to its iterated-integral word:
/// returns ((-1)^k, ω(0)^{s1-1}ω(a1)⋯ω(0)^{sk-1}ω(ak)) with a_i = (x1⋯xi)^{-1}.
pub fn index_to_word(p: &PolylogIndex) -> Result<(i64, Word), ConvertError> {
    if !p.is_convergent() {
        return Err(ConvertError::Divergent);
    }
    let mut letters = Vec::with_capacity(p.weight());
    let mut prod = CycNum::one();
    for (si, xi) in p.s.iter().zip(p.x.iter()) {
        prod = prod.mul(xi);
        let pole = prod.inv()?;
        for _ in 1..*si {
            letters.push(Letter::zero_pole());
        }
        letters.push(Letter(ExtPoint::Finite(pole)));
    }
    let sign = if p.depth() % 2 == 0 { 1 } else { -1 };
    Ok((sign, Word(letters)))
}

/// Parses a word over {ω(0)} ∪ roots of unity back into a CMZV index.
/// Inverse of [`index_to_word`] on the root-of-unity support.
pub fn word_to_index(w: &Word) -> Result<(i64, CmzvIndex), ConvertError> {
    let (sign, p) = word_to_polylog(w)?;
    // arguments must be roots of unity; find the common level
    let mut level = 1u32;
    for xi in &p.x {
        let (n, _) = xi
            .as_root_of_unity()
            .ok_or(ConvertError::NonUnitaryPole)?;
        level = crate::cyclotomic::lcm_level(level, n);
    }
    let mut a = Vec::with_capacity(p.x.len());
    for xi in &p.x {
        let (n, k) = xi.as_root_of_unity().unwrap();
        a.push(k * (level / n));
    }
    let idx = CmzvIndex::new(level, p.s.clone(), a).ok_or(ConvertError::NotConvergentWord)?;
    Ok((sign, idx))
}

/// Parses any convergent word into a polylog index with exact arguments.
pub fn word_to_polylog(w: &Word) -> Result<(i64, PolylogIndex), ConvertError> {
    if w.is_empty() {
        return Err(ConvertError::NotConvergentWord);
    }
    let zero = Letter::zero_pole();
    let one = Letter::one_pole();
    if w.first() == Some(&one) || w.last() == Some(&zero) {
        return Err(ConvertError::NotConvergentWord);
    }
    let mut s = Vec::new();
    let mut poles: Vec<CycNum> = Vec::new();
    let mut zeros_run = 0u32;
    for l in w.letters() {
        if *l == zero {
            zeros_run += 1;
        } else {
            let pole = l
                .pole()
                .as_finite()
                .ok_or(ConvertError::NonUnitaryPole)?
                .clone();
            s.push(zeros_run + 1);
            poles.push(pole);
            zeros_run = 0;
        }
    }
    debug_assert_eq!(zeros_run, 0);
    // x1 = 1/a1, x_i = a_{i-1}/a_i
    let mut x = Vec::with_capacity(poles.len());
    for (i, ai) in poles.iter().enumerate() {
        let xi = if i == 0 {
            ai.inv()?
        } else {
            poles[i - 1].div(ai)?
        };
        x.push(xi);
    }
    let k = s.len();
    let sign = if k % 2 == 0 { 1 } else { -1 };
    Ok((sign, PolylogIndex { s, x }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_level_reduction() {
        // L_2(μ_6^3) = L_2(-1) lives at level 2
        let i = CmzvIndex::new(6, vec![2], vec![3]).unwrap();
        assert_eq!(i.level(), 2);
        assert_eq!(i.residues(), &[1]);
        // ζ(2) at level 4 reduces to level 1
        let z = CmzvIndex::new(4, vec![2], vec![0]).unwrap();
        assert_eq!(z.level(), 1);
        assert_eq!(z, CmzvIndex::zeta(2));
    }

    #[test]
    fn divergent_index_rejected() {
        assert!(CmzvIndex::new(3, vec![1, 2], vec![0, 1]).is_none());
        assert!(CmzvIndex::new(3, vec![1, 2], vec![1, 1]).is_some());
    }

    #[test]
    fn zeta2_word() {
        // Li_2(1) = ζ(2) = -∫ ω(0)ω(1)
        let p = PolylogIndex::new(vec![2], vec![CycNum::one()]);
        let (sign, w) = index_to_word(&p).unwrap();
        assert_eq!(sign, -1);
        assert_eq!(
            w,
            Word(vec![Letter::zero_pole(), Letter::one_pole()])
        );
    }

    #[test]
    fn depth_two_word() {
        // Li_{1,1}(x1,x2) -> (+1, ω(1/x1) ω(1/(x1x2)))
        let x1 = CycNum::from_frac(1, 2);
        let x2 = CycNum::from_frac(1, 3);
        let p = PolylogIndex::new(vec![1, 1], vec![x1.clone(), x2.clone()]);
        let (sign, w) = index_to_word(&p).unwrap();
        assert_eq!(sign, 1);
        let a1 = x1.inv().unwrap();
        let a2 = x1.mul(&x2).inv().unwrap();
        assert_eq!(
            w,
            Word(vec![
                Letter(ExtPoint::Finite(a1)),
                Letter(ExtPoint::Finite(a2))
            ])
        );
    }

    #[test]
    fn word_round_trip() {
        // round trip through word_to_polylog for a batch of indices
        let args: Vec<Vec<CycNum>> = vec![
            vec![CycNum::from_frac(1, 2)],
            vec![CycNum::from_int(-1), CycNum::one()],
            vec![CycNum::root_of_unity(5, 2), CycNum::root_of_unity(5, 4)],
            vec![CycNum::from_frac(1, 3), CycNum::from_int(-1), CycNum::one()],
        ];
        for x in args {
            let depth = x.len();
            for s1 in 1..=3u32 {
                let mut s = vec![1; depth];
                s[0] = s1;
                let p = PolylogIndex::new(s, x.clone());
                if !p.is_convergent() {
                    continue;
                }
                let (sg, w) = index_to_word(&p).unwrap();
                let (sg2, p2) = word_to_polylog(&w).unwrap();
                assert_eq!(sg, sg2);
                assert_eq!(p, p2);
            }
        }
    }

    #[test]
    fn word_to_index_examples() {
        // ω(0)ω(1) -> (-1)·index of ζ(2)
        let w = Word(vec![Letter::zero_pole(), Letter::one_pole()]);
        let (sign, idx) = word_to_index(&w).unwrap();
        assert_eq!(sign, -1);
        assert_eq!(idx, CmzvIndex::zeta(2));
        // ω(-1)ω(1) -> (+1, L_{1,1}(-1,-1))
        let w = Word(vec![
            Letter(ExtPoint::from_int(-1)),
            Letter::one_pole(),
        ]);
        let (sign, idx) = word_to_index(&w).unwrap();
        assert_eq!(sign, 1);
        assert_eq!(idx, CmzvIndex::new(2, vec![1, 1], vec![1, 1]).unwrap());
        // divergent word
        let w = Word(vec![Letter::one_pole(), Letter::zero_pole()]);
        assert_eq!(
            word_to_index(&w).unwrap_err(),
            ConvertError::NotConvergentWord
        );
    }

    #[test]
    fn expr_algebra() {
        let z2 = CmzvExpr::cmzv(CmzvIndex::zeta(2));
        let z3 = CmzvExpr::cmzv(CmzvIndex::zeta(3));
        let p = z2.mul(&z3);
        assert_eq!(p.homogeneous_weight(), Some(5));
        let q = p.add(&p);
        assert_eq!(
            q.coeff(&Monomial::from_atoms(vec![
                Atom::Cmzv(CmzvIndex::zeta(2)),
                Atom::Cmzv(CmzvIndex::zeta(3))
            ])),
            CycNum::from_int(2)
        );
        assert!(p.sub(&p).is_zero());
        let mixed = z2.add(&z3);
        assert_eq!(mixed.homogeneous_weight(), None);
        assert_eq!(mixed.component(2), z2);
    }

    #[test]
    fn convergence_flags() {
        assert!(PolylogIndex::new(vec![2], vec![CycNum::one()]).is_convergent());
        assert!(!PolylogIndex::new(vec![1], vec![CycNum::one()]).is_convergent());
        assert!(PolylogIndex::new(vec![1], vec![CycNum::from_int(-1)]).is_convergent());
        assert!(!PolylogIndex::new(vec![2], vec![CycNum::from_int(2)]).is_convergent());
        // |x1 x2| = |2 · 1/4| ≤ 1 and |x1| = 2 > 1: divergent
        assert!(!PolylogIndex::new(
            vec![2, 2],
            vec![CycNum::from_int(2), CycNum::from_frac(1, 4)]
        )
        .is_convergent());
    }
}
