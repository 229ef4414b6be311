//! Weight-truncated group-like series.
//!
//! A series assigns a coefficient to every word over a finite alphabet up
//! to a truncation weight W; it is group-like when coefficient extraction
//! is multiplicative against the shuffle product, coeff(u⧢v) =
//! coeff(u)·coeff(v), which is how path series behave. Products,
//! inverses (path reversal via the antipode), letter exponentials (circular
//! arcs), letter substitutions, and the regularized group-like lift with
//! vanishing boundary coefficients all live here.
//!
//! Coefficients are generic: symbolic mode uses [`CmzvExpr`], numeric mode
//! an arbitrary-precision complex value. The two modes are distinct types,
//! so they cannot be mixed by construction.

use crate::convert::CmzvExpr;
use crate::cyclotomic::CycNum;
use crate::numeric::{BigC, RCtx};
use crate::words::{shuffle_words, Letter, Word};
use num_rational::BigRational;
use std::collections::{BTreeMap, BTreeSet};

/// Errors from series operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("series have different alphabets or truncation weights")]
    AlphabetMismatch,
    #[error("series is not group-like (unit coefficient differs from 1)")]
    NotGroupLike,
    #[error("letter substitution is not an injective self-map of the alphabet")]
    NonInjectiveMap,
    #[error("input coefficients violate a shuffle relation at ({0}, {1})")]
    InconsistentInput(Word, Word),
}

/// Coefficient scalars for series: exact CMZV expressions or
/// arbitrary-precision complex numbers.
pub trait SeriesValue: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, q: &BigRational) -> Self;
    fn is_zero(&self) -> bool;
    /// Equality for the group-like test: exact in symbolic mode, within the
    /// working tolerance in numeric mode.
    fn close_to(&self, other: &Self) -> bool;
}

impl SeriesValue for CmzvExpr {
    fn zero() -> Self {
        CmzvExpr::zero()
    }
    fn one() -> Self {
        CmzvExpr::one()
    }
    fn add(&self, other: &Self) -> Self {
        CmzvExpr::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        CmzvExpr::mul(self, other)
    }
    fn neg(&self) -> Self {
        CmzvExpr::neg(self)
    }
    fn scale(&self, q: &BigRational) -> Self {
        self.scale_rational(q)
    }
    fn is_zero(&self) -> bool {
        CmzvExpr::is_zero(self)
    }
    fn close_to(&self, other: &Self) -> bool {
        self == other
    }
}

/// Numeric-mode coefficient: a complex value at fixed precision.
#[derive(Clone, Debug)]
pub struct NumValue {
    pub v: BigC,
    pub prec: usize,
}

impl NumValue {
    pub fn new(v: BigC, prec: usize) -> Self {
        NumValue { v, prec }
    }
    fn ctx(&self) -> RCtx {
        RCtx::new(self.prec)
    }
}

impl SeriesValue for NumValue {
    fn zero() -> Self {
        let ctx = RCtx::new(128);
        NumValue::new(BigC::zero(&ctx), 128)
    }
    fn one() -> Self {
        let ctx = RCtx::new(128);
        NumValue::new(BigC::one(&ctx), 128)
    }
    fn add(&self, other: &Self) -> Self {
        let p = self.prec.max(other.prec);
        let ctx = RCtx::new(p);
        NumValue::new(self.v.add(&other.v, &ctx), p)
    }
    fn mul(&self, other: &Self) -> Self {
        let p = self.prec.max(other.prec);
        let ctx = RCtx::new(p);
        NumValue::new(self.v.mul(&other.v, &ctx), p)
    }
    fn neg(&self) -> Self {
        NumValue::new(self.v.neg(), self.prec)
    }
    fn scale(&self, q: &BigRational) -> Self {
        let ctx = self.ctx();
        NumValue::new(self.v.mul_real(&ctx.from_rational(q), &ctx), self.prec)
    }
    fn is_zero(&self) -> bool {
        self.v.is_zero()
    }
    fn close_to(&self, other: &Self) -> bool {
        let p = self.prec.min(other.prec);
        let ctx = RCtx::new(p);
        self.v.sub(&other.v, &ctx).is_small(p as i64 - 16, &ctx)
    }
}

/// A weight-truncated series with coefficients in V, intended to be
/// group-like. Immutable after construction.
#[derive(Clone, Debug)]
pub struct GroupLikeSeries<V: SeriesValue> {
    alphabet: Vec<Letter>,
    w_max: usize,
    coeffs: BTreeMap<Word, V>,
}

/// Symbolic-mode series.
pub type SymSeries = GroupLikeSeries<CmzvExpr>;
/// Numeric-mode series.
pub type NumSeries = GroupLikeSeries<NumValue>;

impl<V: SeriesValue> GroupLikeSeries<V> {
    /// The unit series (constant path).
    pub fn unit(alphabet: Vec<Letter>, w_max: usize) -> Self {
        let alphabet = normalize_alphabet(alphabet);
        GroupLikeSeries {
            alphabet,
            w_max,
            coeffs: BTreeMap::new(),
        }
    }

    /// Builds from an explicit coefficient table (empty word forced to 1).
    pub fn from_coeffs(
        alphabet: Vec<Letter>,
        w_max: usize,
        coeffs: BTreeMap<Word, V>,
    ) -> Self {
        let alphabet = normalize_alphabet(alphabet);
        let mut s = GroupLikeSeries {
            alphabet,
            w_max,
            coeffs: BTreeMap::new(),
        };
        for (w, v) in coeffs {
            if w.is_empty() || w.weight() > w_max || v.is_zero() {
                continue;
            }
            s.coeffs.insert(w, v);
        }
        s
    }

    pub fn alphabet(&self) -> &[Letter] {
        &self.alphabet
    }

    pub fn truncation_weight(&self) -> usize {
        self.w_max
    }

    /// Coefficient of a word (1 for the empty word).
    pub fn coeff(&self, w: &Word) -> V {
        if w.is_empty() {
            return V::one();
        }
        self.coeffs.get(w).cloned().unwrap_or_else(V::zero)
    }

    /// Coefficient extraction extended linearly to word polynomials with
    /// exact cyclotomic coefficients (symbolic mode only makes the scalars
    /// exact; numeric mode folds them in at working precision).
    pub fn coeff_of_poly(&self, p: &crate::words::WordPoly, fold: impl Fn(&CycNum, &V) -> V) -> V {
        let mut acc = V::zero();
        for (w, c) in p.terms() {
            let v = self.coeff(w);
            if !v.is_zero() {
                acc = acc.add(&fold(c, &v));
            }
        }
        acc
    }

    fn same_shape(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet && self.w_max == other.w_max
    }

    /// Concatenation product (path composition), truncated at W.
    pub fn series_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        if !self.same_shape(other) {
            return Err(SeriesError::AlphabetMismatch);
        }
        let mut out = BTreeMap::new();
        for w in enumerate_words(&self.alphabet, self.w_max) {
            if w.is_empty() {
                continue;
            }
            let mut acc = V::zero();
            for (u, v) in w.deconcat() {
                let a = self.coeff(&u);
                if a.is_zero() {
                    continue;
                }
                let b = other.coeff(&v);
                if b.is_zero() {
                    continue;
                }
                acc = acc.add(&a.mul(&b));
            }
            if !acc.is_zero() {
                out.insert(w, acc);
            }
        }
        Ok(GroupLikeSeries {
            alphabet: self.alphabet.clone(),
            w_max: self.w_max,
            coeffs: out,
        })
    }

    /// Inverse of a group-like series: G⁻¹[w] = G[antipode(w)], the series
    /// of the reversed path.
    pub fn series_inverse(&self) -> Result<Self, SeriesError> {
        // the unit coefficient of a group-like series must be 1, which is
        // structural here; full group-likeness is the caller's precondition
        // (checkable via is_grouplike)
        let mut out = BTreeMap::new();
        for (w, v) in &self.coeffs {
            let mut c = v.clone();
            if w.weight() % 2 == 1 {
                c = c.neg();
            }
            out.insert(w.reversed(), c);
        }
        Ok(GroupLikeSeries {
            alphabet: self.alphabet.clone(),
            w_max: self.w_max,
            coeffs: out,
        })
    }

    /// exp(A·(l1 + ... + lk)) truncated at W: every length-n word over the
    /// given letters gets coefficient Aⁿ/n!.
    pub fn exp_letter(a: V, letters: &[Letter], alphabet: Vec<Letter>, w_max: usize) -> Self {
        let alphabet = normalize_alphabet(alphabet);
        let mut coeffs = BTreeMap::new();
        if !a.is_zero() {
            let mut pow = V::one();
            let mut fact = BigRational::from_integer(1.into());
            for n in 1..=w_max {
                pow = pow.mul(&a);
                fact = fact * BigRational::from_integer(n.into());
                let c = pow.scale(&fact.recip());
                for w in words_of_weight(letters, n) {
                    coeffs.insert(w, c.clone());
                }
            }
        }
        GroupLikeSeries {
            alphabet,
            w_max,
            coeffs,
        }
    }

    /// Letter-substitution homomorphism: result[w] = G[σ(w)] for an
    /// injective self-map σ of the alphabet.
    pub fn hom_map(&self, sigma: &BTreeMap<Letter, Letter>) -> Result<Self, SeriesError> {
        let mut inv: BTreeMap<Letter, Letter> = BTreeMap::new();
        for l in &self.alphabet {
            let img = sigma.get(l).ok_or(SeriesError::NonInjectiveMap)?;
            if !self.alphabet.contains(img) {
                return Err(SeriesError::NonInjectiveMap);
            }
            if inv.insert(img.clone(), l.clone()).is_some() {
                return Err(SeriesError::NonInjectiveMap);
            }
        }
        let mut out = BTreeMap::new();
        for (w, v) in &self.coeffs {
            // w = σ(w'), so w' = σ⁻¹(w); words outside the image are dropped
            let mut pre = Vec::with_capacity(w.weight());
            let mut ok = true;
            for l in w.letters() {
                match inv.get(l) {
                    Some(p) => pre.push(p.clone()),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                out.insert(Word(pre), v.clone());
            }
        }
        Ok(GroupLikeSeries {
            alphabet: self.alphabet.clone(),
            w_max: self.w_max,
            coeffs: out,
        })
    }

    /// Checks coeff(u⧢v) = coeff(u)·coeff(v) for all |u|+|v| ≤ W; returns
    /// the violating pair on failure.
    pub fn is_grouplike(&self) -> Result<(), (Word, Word)> {
        let words: Vec<Word> = enumerate_words(&self.alphabet, self.w_max.saturating_sub(1))
            .into_iter()
            .filter(|w| !w.is_empty())
            .collect();
        for u in &words {
            for v in &words {
                if u.weight() + v.weight() > self.w_max || v < u {
                    continue;
                }
                let mut lhs = V::zero();
                for (w, m) in shuffle_words(u, v) {
                    let c = self.coeff(&w);
                    if !c.is_zero() {
                        lhs = lhs.add(&c.scale(&BigRational::from_integer(m.into())));
                    }
                }
                let rhs = self.coeff(u).mul(&self.coeff(v));
                if !lhs.close_to(&rhs) {
                    return Err((u.clone(), v.clone()));
                }
            }
        }
        Ok(())
    }

    /// The unique group-like extension of a partial coefficient map with
    /// vanishing coefficients on x1 (left-divergent letter) and x2
    /// (right-divergent letter).
    ///
    /// `j` supplies coefficients of words that neither start with x1 nor end
    /// with x2. The four-case recursion moves boundary letters inward:
    /// coefficients of pure powers vanish; words with a leading x1-run of
    /// length m fold to insertions of one x1 into the rest; likewise for a
    /// trailing x2-run.
    pub fn regularized_lift(
        j: &dyn Fn(&Word) -> V,
        x1: &Letter,
        x2: &Letter,
        alphabet: Vec<Letter>,
        w_max: usize,
        check: bool,
    ) -> Result<Self, SeriesError> {
        let alphabet = normalize_alphabet(alphabet);
        let mut memo: BTreeMap<Word, V> = BTreeMap::new();
        let mut coeffs = BTreeMap::new();
        for w in enumerate_words(&alphabet, w_max) {
            if w.is_empty() {
                continue;
            }
            let v = reg_coeff(&w, j, x1, x2, &mut memo);
            if !v.is_zero() {
                coeffs.insert(w, v);
            }
        }
        let s = GroupLikeSeries {
            alphabet,
            w_max,
            coeffs,
        };
        if check {
            if let Err((u, v)) = s.is_grouplike() {
                return Err(SeriesError::InconsistentInput(u, v));
            }
        }
        Ok(s)
    }
}

fn normalize_alphabet(mut alphabet: Vec<Letter>) -> Vec<Letter> {
    alphabet.sort();
    alphabet.dedup();
    alphabet
}

/// All words over the alphabet of weight ≤ w_max (including the empty word).
pub fn enumerate_words(alphabet: &[Letter], w_max: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut level = vec![Word::empty()];
    for _ in 0..w_max {
        let mut next = Vec::with_capacity(level.len() * alphabet.len());
        for w in &level {
            for l in alphabet {
                let mut v = w.0.clone();
                v.push(l.clone());
                next.push(Word(v));
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

fn words_of_weight(letters: &[Letter], n: usize) -> Vec<Word> {
    let uniq: Vec<Letter> = {
        let s: BTreeSet<Letter> = letters.iter().cloned().collect();
        s.into_iter().collect()
    };
    let mut level = vec![Word::empty()];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &level {
            for l in &uniq {
                let mut v = w.0.clone();
                v.push(l.clone());
                next.push(Word(v));
            }
        }
        level = next;
    }
    level
}

fn reg_coeff<V: SeriesValue>(
    w: &Word,
    j: &dyn Fn(&Word) -> V,
    x1: &Letter,
    x2: &Letter,
    memo: &mut BTreeMap<Word, V>,
) -> V {
    if w.is_empty() {
        return V::one();
    }
    if let Some(v) = memo.get(w) {
        return v.clone();
    }
    let ls = w.letters();
    let m = ls.iter().take_while(|l| *l == x1).count();
    let n_run = ls.iter().rev().take_while(|l| *l == x2).count();
    let value: V;
    if m == w.weight() || n_run == w.weight() {
        // pure power of x1 or of x2
        value = V::zero();
    } else if m > 0 {
        // fold the trailing x2-run into the tail: ξ_1..ξ_q = ls[m..]
        let tail = &ls[m..];
        let q = tail.len();
        let mut acc = V::zero();
        for i in 1..=q {
            // x1^{m-1} ξ_1..ξ_i x1 ξ_{i+1}..ξ_q
            let mut v = Vec::with_capacity(w.weight());
            v.extend(std::iter::repeat(x1.clone()).take(m - 1));
            v.extend(tail[..i].iter().cloned());
            v.push(x1.clone());
            v.extend(tail[i..].iter().cloned());
            acc = acc.add(&reg_coeff(&Word(v), j, x1, x2, memo));
        }
        value = acc.scale(&-BigRational::new(1.into(), (m as i64).into()));
    } else if n_run > 0 {
        // middle ξ_1..ξ_k = ls[..k], insert one x2 before each ξ_i
        let k = ls.len() - n_run;
        let mid = &ls[..k];
        let mut acc = V::zero();
        for i in 1..=k {
            let mut v = Vec::with_capacity(w.weight());
            v.extend(mid[..i - 1].iter().cloned());
            v.push(x2.clone());
            v.extend(mid[i - 1..].iter().cloned());
            v.extend(std::iter::repeat(x2.clone()).take(n_run - 1));
            acc = acc.add(&reg_coeff(&Word(v), j, x1, x2, memo));
        }
        value = acc.scale(&-BigRational::new(1.into(), (n_run as i64).into()));
    } else {
        value = j(w);
    }
    memo.insert(w.clone(), value.clone());
    value
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convert::{Atom, CmzvIndex};
    use crate::cyclotomic::ExtPoint;

    fn l(i: i64) -> Letter {
        Letter(ExtPoint::from_int(i))
    }

    fn formal(name_level: u32) -> CmzvExpr {
        // a weight-1 atom used as a formal scalar
        CmzvExpr::atom(Atom::Cmzv(
            CmzvIndex::new(name_level, vec![1], vec![1]).unwrap(),
        ))
    }

    #[test]
    fn exp_single_letter() {
        let a = formal(3);
        let s = SymSeries::exp_letter(a.clone(), &[l(0)], vec![l(0), l(1)], 4);
        let w2 = Word(vec![l(0), l(0)]);
        let expect = a.mul(&a).scale_rational(&BigRational::new(1.into(), 2.into()));
        assert_eq!(s.coeff(&w2), expect);
        assert!(s.coeff(&Word(vec![l(0), l(1)])).is_zero());
        assert!(s.is_grouplike().is_ok());
    }

    #[test]
    fn exp_letter_sum() {
        let a = formal(5);
        let s = SymSeries::exp_letter(a.clone(), &[l(0), l(1)], vec![l(0), l(1)], 3);
        // coefficient of ω(0)ω(1) is A²/2
        let expect = a.mul(&a).scale_rational(&BigRational::new(1.into(), 2.into()));
        assert_eq!(s.coeff(&Word(vec![l(0), l(1)])), expect);
        assert!(s.is_grouplike().is_ok());
        // exp(0, ·) is the unit
        let z = SymSeries::exp_letter(CmzvExpr::zero(), &[l(0)], vec![l(0)], 4);
        assert!(z.coeff(&Word(vec![l(0)])).is_zero());
    }

    #[test]
    fn mul_against_hand_convolution() {
        let a = formal(3);
        let b = formal(4);
        let alphabet = vec![l(0), l(1)];
        let g1 = SymSeries::exp_letter(a.clone(), &[l(0)], alphabet.clone(), 3);
        let g2 = SymSeries::exp_letter(b.clone(), &[l(1)], alphabet.clone(), 3);
        let p = g1.series_mul(&g2).unwrap();
        // coeff of ω(0)ω(1) in G1·G2 = G1[01] + G1[0]G2[1] + G2[01] = a·b
        let got = p.coeff(&Word(vec![l(0), l(1)]));
        assert_eq!(got, a.mul(&b));
        // and ω(1)ω(0) picks up nothing (G1 has no ω(1), G2 no ω(0))
        assert!(p.coeff(&Word(vec![l(1), l(0)])).is_zero());
        // unit laws
        let unit = SymSeries::unit(alphabet.clone(), 3);
        assert_eq!(
            g1.series_mul(&unit).unwrap().coeff(&Word(vec![l(0), l(0)])),
            g1.coeff(&Word(vec![l(0), l(0)]))
        );
    }

    #[test]
    fn commuting_exponentials_compose() {
        let a = formal(3);
        let b = formal(4);
        let alphabet = vec![l(0)];
        let g1 = SymSeries::exp_letter(a.clone(), &[l(0)], alphabet.clone(), 4);
        let g2 = SymSeries::exp_letter(b.clone(), &[l(0)], alphabet.clone(), 4);
        let p = g1.series_mul(&g2).unwrap();
        let s = SymSeries::exp_letter(a.add(&b), &[l(0)], alphabet, 4);
        for w in enumerate_words(&[l(0)], 4) {
            assert_eq!(p.coeff(&w), s.coeff(&w), "at {w}");
        }
    }

    #[test]
    fn inverse_cancels() {
        let a = formal(3);
        let alphabet = vec![l(0), l(1)];
        let g = SymSeries::exp_letter(a.clone(), &[l(0), l(1)], alphabet.clone(), 4);
        let gi = g.series_inverse().unwrap();
        let p = g.series_mul(&gi).unwrap();
        for w in enumerate_words(&alphabet, 4) {
            if w.is_empty() {
                continue;
            }
            assert!(p.coeff(&w).is_zero(), "survivor at {w}: {:?}", p.coeff(&w));
        }
        // inverse of the unit is the unit
        let u = SymSeries::unit(alphabet, 3);
        assert!(u.series_inverse().unwrap().coeff(&Word(vec![l(0)])).is_zero());
    }

    #[test]
    fn hom_map_relabels_queries() {
        let a = formal(3);
        let alphabet = vec![l(0), l(1)];
        let g = SymSeries::exp_letter(a.clone(), &[l(0)], alphabet.clone(), 3);
        // σ: ω(0) ↦ ω(1), ω(1) ↦ ω(0)
        let mut sigma = BTreeMap::new();
        sigma.insert(l(0), l(1));
        sigma.insert(l(1), l(0));
        let h = g.hom_map(&sigma).unwrap();
        // h[ω(1)] = g[σ(ω(1))] = g[ω(0)] = a
        assert_eq!(h.coeff(&Word(vec![l(1)])), a);
        assert!(h.coeff(&Word(vec![l(0)])).is_zero());
        // identity map round trip
        let mut ident = BTreeMap::new();
        ident.insert(l(0), l(0));
        ident.insert(l(1), l(1));
        let same = g.hom_map(&ident).unwrap();
        assert_eq!(same.coeff(&Word(vec![l(0)])), g.coeff(&Word(vec![l(0)])));
        let back = h.hom_map(&sigma).unwrap();
        assert_eq!(back.coeff(&Word(vec![l(0)])), g.coeff(&Word(vec![l(0)])));
        // non-injective map rejected
        let mut bad = BTreeMap::new();
        bad.insert(l(0), l(1));
        bad.insert(l(1), l(1));
        assert_eq!(g.hom_map(&bad).unwrap_err(), SeriesError::NonInjectiveMap);
    }

    #[test]
    fn grouplike_witness() {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(Word(vec![l(0)]), CmzvExpr::one());
        // coeff(ω(0)ω(0)) = 0 violates 1·1 = 2·coeff
        let s = SymSeries::from_coeffs(vec![l(0)], 2, coeffs);
        let (u, v) = s.is_grouplike().unwrap_err();
        assert_eq!(u, Word(vec![l(0)]));
        assert_eq!(v, Word(vec![l(0)]));
    }

    #[test]
    fn regularized_lift_forces_euler_reflection() {
        // alphabet {ω(0), ω(1)}, x1 = ω(1), x2 = ω(0); J[ω(0)ω(1)] = -ζ(2)
        // forces coeff(ω(1)ω(0)) = ζ(2) via the shuffle ω(1)⧢ω(0).
        let zeta2 = CmzvExpr::cmzv(CmzvIndex::zeta(2));
        let x1 = Letter::one_pole();
        let x2 = Letter::zero_pole();
        let neg = zeta2.neg();
        let j = move |w: &Word| -> CmzvExpr {
            if *w == Word(vec![Letter::zero_pole(), Letter::one_pole()]) {
                neg.clone()
            } else {
                CmzvExpr::zero()
            }
        };
        let s = SymSeries::regularized_lift(
            &j,
            &x1,
            &x2,
            vec![x1.clone(), x2.clone()],
            2,
            false,
        )
        .unwrap();
        assert_eq!(s.coeff(&Word(vec![x1.clone(), x2.clone()])), zeta2);
        assert!(s.coeff(&Word(vec![x1.clone()])).is_zero());
        assert!(s.coeff(&Word(vec![x2.clone()])).is_zero());
        assert_eq!(
            s.coeff(&Word(vec![x2.clone(), x1.clone()])),
            zeta2.neg()
        );
    }

    #[test]
    fn lift_of_grouplike_restriction_is_grouplike() {
        // restrict a known group-like series and lift it back
        let a = formal(3);
        let b = formal(4);
        let x1 = l(1);
        let x2 = l(0);
        let alphabet = vec![l(0), l(1)];
        let g = SymSeries::exp_letter(a, &[l(0)], alphabet.clone(), 4)
            .series_mul(&SymSeries::exp_letter(b, &[l(1)], alphabet.clone(), 4))
            .unwrap();
        // J = restriction of a group-like series that already vanishes on
        // x1 = ω(1)-initial and x2 = ω(0)-final words? It does not, so lift
        // a genuinely admissible source instead: the middle factor of the
        // boundary-stripped form. Build J from g and check consistency of
        // the lift on its own terms.
        let j = {
            let g = g.clone();
            move |w: &Word| g.coeff(w)
        };
        let s = SymSeries::regularized_lift(&j, &x1, &x2, alphabet, 4, true);
        // g itself has g[x1] ≠ 0, so the lift differs from g but must still
        // be group-like; the check would have errored otherwise.
        let s = s.unwrap();
        assert!(s.coeff(&Word(vec![x1.clone()])).is_zero());
        assert!(s.is_grouplike().is_ok());
    }

    #[test]
    fn lift_is_idempotent() {
        let a = formal(3);
        let x1 = l(1);
        let x2 = l(0);
        let alphabet = vec![l(0), l(1)];
        let g = SymSeries::exp_letter(a, &[l(0), l(1)], alphabet.clone(), 3);
        let j = {
            let g = g.clone();
            move |w: &Word| g.coeff(w)
        };
        let s = SymSeries::regularized_lift(&j, &x1, &x2, alphabet.clone(), 3, false).unwrap();
        let j2 = {
            let s = s.clone();
            move |w: &Word| s.coeff(w)
        };
        let s2 = SymSeries::regularized_lift(&j2, &x1, &x2, alphabet.clone(), 3, false).unwrap();
        for w in enumerate_words(&alphabet, 3) {
            assert_eq!(s.coeff(&w), s2.coeff(&w), "at {w}");
        }
    }
}
