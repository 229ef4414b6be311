//! The noncommutative word algebra over letters ω(a) = dx/(x-a).
//!
//! Words are finite sequences of letters; a [`WordPoly`] is a finite
//! ℚ(μ)-linear combination of words carrying the shuffle and concatenation
//! products, the antipode, and the deconcatenation coproduct. The letter
//! ω(∞) is the zero form: it may appear transiently inside a pullback
//! computation, but any word containing it is deleted when a `WordPoly`
//! normal form is built.

use crate::cyclotomic::{CycNum, ExtPoint};
use std::collections::BTreeMap;
use std::fmt;

/// A letter ω(a), identified by its pole a ∈ Ĉ.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(pub ExtPoint);

impl Letter {
    pub fn omega(p: ExtPoint) -> Self {
        Letter(p)
    }
    pub fn zero_pole() -> Self {
        Letter(ExtPoint::zero())
    }
    pub fn one_pole() -> Self {
        Letter(ExtPoint::one())
    }
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        Letter(ExtPoint::root_of_unity(n, k))
    }
    pub fn is_infinity(&self) -> bool {
        self.0.is_infinity()
    }
    pub fn pole(&self) -> &ExtPoint {
        &self.0
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w({})", self.0)
    }
}

/// A word in the letters, ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }
    pub fn single(l: Letter) -> Self {
        Word(vec![l])
    }
    pub fn weight(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    pub fn letters(&self) -> &[Letter] {
        &self.0
    }
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Word(v)
    }
    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().cloned().collect())
    }
    pub fn first(&self) -> Option<&Letter> {
        self.0.first()
    }
    pub fn last(&self) -> Option<&Letter> {
        self.0.last()
    }
    pub fn prefix(&self, len: usize) -> Word {
        Word(self.0[..len].to_vec())
    }
    pub fn suffix_from(&self, start: usize) -> Word {
        Word(self.0[start..].to_vec())
    }
    pub fn contains_infinity(&self) -> bool {
        self.0.iter().any(Letter::is_infinity)
    }

    /// All deconcatenation splits (prefix, suffix), n+1 of them.
    pub fn deconcat(&self) -> Vec<(Word, Word)> {
        (0..=self.0.len())
            .map(|i| (self.prefix(i), self.suffix_from(i)))
            .collect()
    }

    /// Text form `w[a1,...,an]` with each pole a CycNum literal or `inf`.
    pub fn parse(s: &str) -> Option<Word> {
        let s = s.trim();
        let inner = s.strip_prefix("w[")?.strip_suffix(']')?;
        if inner.trim().is_empty() {
            return Some(Word::empty());
        }
        let mut letters = Vec::new();
        for part in split_top_level(inner) {
            let part = part.trim();
            if part == "inf" {
                letters.push(Letter(ExtPoint::Infinity));
            } else {
                letters.push(Letter(ExtPoint::Finite(CycNum::parse(part).ok()?)));
            }
        }
        Some(Word(letters))
    }
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w[")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", l.0)?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A finite linear combination of words with CycNum coefficients.
///
/// Normal form: no zero coefficients, no stored word contains ω(∞).
#[derive(Clone, PartialEq, Eq, Default)]
pub struct WordPoly {
    terms: BTreeMap<Word, CycNum>,
}

impl WordPoly {
    pub fn zero() -> Self {
        WordPoly {
            terms: BTreeMap::new(),
        }
    }

    /// The empty word with coefficient 1 (the unit of both products).
    pub fn one() -> Self {
        WordPoly::from_word(Word::empty())
    }

    pub fn from_word(w: Word) -> Self {
        let mut p = WordPoly::zero();
        p.add_term(w, CycNum::one());
        p
    }

    pub fn from_letter(l: Letter) -> Self {
        WordPoly::from_word(Word::single(l))
    }

    /// Adds `c·w`, deleting ω(∞)-words and zero results.
    pub fn add_term(&mut self, w: Word, c: CycNum) {
        if c.is_zero() || w.contains_infinity() {
            return;
        }
        let entry = self.terms.entry(w);
        match entry {
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

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &CycNum)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &Word) -> CycNum {
        self.terms.get(w).cloned().unwrap_or_else(CycNum::zero)
    }

    pub fn add(&self, other: &WordPoly) -> WordPoly {
        let mut out = self.clone();
        for (w, c) in other.terms.iter() {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &WordPoly) -> WordPoly {
        let mut out = self.clone();
        for (w, c) in other.terms.iter() {
            out.add_term(w.clone(), c.clone().neg());
        }
        out
    }

    pub fn scale(&self, c: &CycNum) -> WordPoly {
        let mut out = WordPoly::zero();
        for (w, a) in self.terms.iter() {
            out.add_term(w.clone(), a.mul(c));
        }
        out
    }

    /// The weight-k homogeneous component.
    pub fn component(&self, k: usize) -> WordPoly {
        let mut out = WordPoly::zero();
        for (w, c) in self.terms.iter().filter(|(w, _)| w.weight() == k) {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn max_weight(&self) -> usize {
        self.terms.keys().map(Word::weight).max().unwrap_or(0)
    }

    /// Concatenation product, bilinear.
    pub fn concat(&self, other: &WordPoly) -> WordPoly {
        let mut out = WordPoly::zero();
        for (u, a) in self.terms.iter() {
            for (v, b) in other.terms.iter() {
                out.add_term(u.concat(v), a.mul(b));
            }
        }
        out
    }

    /// Shuffle product, bilinear.
    pub fn shuffle(&self, other: &WordPoly) -> WordPoly {
        let mut out = WordPoly::zero();
        for (u, a) in self.terms.iter() {
            for (v, b) in other.terms.iter() {
                let c = a.mul(b);
                for (w, mult) in shuffle_words(u, v) {
                    out.add_term(w, c.mul(&CycNum::from_int(mult)));
                }
            }
        }
        out
    }

    /// Antipode: reversal with sign (-1)^weight, extended linearly.
    pub fn antipode(&self) -> WordPoly {
        let mut out = WordPoly::zero();
        for (w, c) in self.terms.iter() {
            let mut cc = c.clone();
            if w.weight() % 2 == 1 {
                cc = cc.neg();
            }
            out.add_term(w.reversed(), cc);
        }
        out
    }
}

/// Shuffle of two bare words with multiplicities.
pub fn shuffle_words(u: &Word, v: &Word) -> Vec<(Word, i64)> {
    fn rec(u: &[Letter], v: &[Letter], acc: &mut BTreeMap<Vec<Letter>, i64>, prefix: &mut Vec<Letter>) {
        if u.is_empty() && v.is_empty() {
            let mut w = prefix.clone();
            w.shrink_to_fit();
            *acc.entry(w).or_insert(0) += 1;
            return;
        }
        if let Some((x, rest)) = u.split_first() {
            prefix.push(x.clone());
            rec(rest, v, acc, prefix);
            prefix.pop();
        }
        if let Some((y, rest)) = v.split_first() {
            prefix.push(y.clone());
            rec(u, rest, acc, prefix);
            prefix.pop();
        }
    }
    let mut acc = BTreeMap::new();
    let mut prefix = Vec::with_capacity(u.weight() + v.weight());
    rec(&u.0, &v.0, &mut acc, &mut prefix);
    acc.into_iter().map(|(w, m)| (Word(w), m)).collect()
}

impl fmt::Debug for WordPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})·{}", c, w)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::CycNum;

    fn la(i: i64) -> Letter {
        Letter(ExtPoint::from_int(i))
    }

    #[test]
    fn shuffle_two_letters() {
        let a = WordPoly::from_letter(la(2));
        let b = WordPoly::from_letter(la(3));
        let s = a.shuffle(&b);
        assert_eq!(s.coeff(&Word(vec![la(2), la(3)])), CycNum::one());
        assert_eq!(s.coeff(&Word(vec![la(3), la(2)])), CycNum::one());
        assert_eq!(s.num_terms(), 2);
    }

    #[test]
    fn shuffle_with_repeated_letter() {
        // x0 ⧢ x0x1 = 3 interleavings of positions: 2·x0x0x1 + x0x1x0
        let x0 = la(0);
        let x1 = la(1);
        let s = WordPoly::from_letter(x0.clone())
            .shuffle(&WordPoly::from_word(Word(vec![x0.clone(), x1.clone()])));
        assert_eq!(
            s.coeff(&Word(vec![x0.clone(), x0.clone(), x1.clone()])),
            CycNum::from_int(2)
        );
        assert_eq!(
            s.coeff(&Word(vec![x0.clone(), x1.clone(), x0.clone()])),
            CycNum::one()
        );
        assert_eq!(s.num_terms(), 2);
    }

    #[test]
    fn shuffle_unit() {
        let w = WordPoly::from_word(Word(vec![la(1), la(4), la(1)]));
        assert_eq!(WordPoly::one().shuffle(&w), w);
        assert_eq!(w.shuffle(&WordPoly::one()), w);
    }

    #[test]
    fn shuffle_mass_is_binomial() {
        // total coefficient mass of u⧢v is C(n+m, n) when letters are distinct
        let u = Word(vec![la(1), la(2)]);
        let v = Word(vec![la(3), la(4), la(5)]);
        let total: i64 = shuffle_words(&u, &v).iter().map(|(_, m)| m).sum();
        assert_eq!(total, 10);
    }

    #[test]
    fn concat_bilinear() {
        let ab = WordPoly::from_letter(la(1)).add(&WordPoly::from_letter(la(2)));
        let c = WordPoly::from_letter(la(3));
        let p = ab.concat(&c);
        assert_eq!(p.coeff(&Word(vec![la(1), la(3)])), CycNum::one());
        assert_eq!(p.coeff(&Word(vec![la(2), la(3)])), CycNum::one());
        let w = WordPoly::from_word(Word(vec![la(1), la(2)]));
        assert_eq!(w.concat(&WordPoly::one()), w);
    }

    #[test]
    fn antipode_involution_and_sign() {
        let w = WordPoly::from_word(Word(vec![la(1), la(2)]));
        let a = w.antipode();
        assert_eq!(a.coeff(&Word(vec![la(2), la(1)])), CycNum::one());
        assert_eq!(
            WordPoly::from_letter(la(7)).antipode().coeff(&Word::single(la(7))),
            CycNum::from_int(-1)
        );
        let x = WordPoly::from_word(Word(vec![la(1), la(2), la(3)]))
            .add(&WordPoly::from_word(Word(vec![la(4), la(5)])).scale(&CycNum::from_int(3)));
        assert_eq!(x.antipode().antipode(), x);
    }

    #[test]
    fn deconcat_splits() {
        let w = Word(vec![la(1), la(2)]);
        let d = w.deconcat();
        assert_eq!(d.len(), 3);
        assert_eq!(d[0], (Word::empty(), w.clone()));
        assert_eq!(d[1], (Word::single(la(1)), Word::single(la(2))));
        assert_eq!(d[2], (w.clone(), Word::empty()));
        assert_eq!(Word::empty().deconcat().len(), 1);
        assert_eq!(Word(vec![la(1), la(2), la(3)]).deconcat().len(), 4);
    }

    #[test]
    fn infinity_words_die_in_normal_form() {
        let mut p = WordPoly::zero();
        p.add_term(Word(vec![la(1), Letter(ExtPoint::Infinity)]), CycNum::one());
        assert!(p.is_zero());
        let q = WordPoly::from_letter(Letter(ExtPoint::Infinity));
        assert!(q.is_zero());
    }

    #[test]
    fn word_text_round_trip() {
        let w = Word::parse("w[0,1,mu(5)^2,inf]").unwrap();
        assert_eq!(w.weight(), 4);
        assert!(w.contains_infinity());
        let s = format!("{}", w);
        assert_eq!(Word::parse(&s).unwrap(), w);
    }

    #[test]
    fn word_order_is_graded() {
        let short = Word(vec![la(9)]);
        let long = Word(vec![la(0), la(0)]);
        assert!(short < long);
    }
}
