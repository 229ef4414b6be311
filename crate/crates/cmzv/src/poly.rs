//! Dense univariate polynomials over the cyclotomic field (internal).

use crate::cyclotomic::{CycError, CycNum};
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    // coefficients low to high, no trailing zeros; zero polynomial = empty
    coeffs: Vec<CycNum>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn constant(c: CycNum) -> Self {
        let mut p = Poly { coeffs: vec![c] };
        p.trim();
        p
    }

    pub fn one() -> Self {
        Poly::constant(CycNum::one())
    }

    pub fn x() -> Self {
        Poly::new(vec![CycNum::zero(), CycNum::one()])
    }

    /// x - r
    pub fn linear_root(r: &CycNum) -> Self {
        Poly::new(vec![r.clone().neg(), CycNum::one()])
    }

    pub fn new(coeffs: Vec<CycNum>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[CycNum] {
        &self.coeffs
    }

    pub fn leading(&self) -> CycNum {
        self.coeffs.last().cloned().unwrap_or_else(CycNum::zero)
    }

    pub fn constant_term(&self) -> CycNum {
        self.coeffs.first().cloned().unwrap_or_else(CycNum::zero)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(CycNum::zero);
            let b = other.coeffs.get(i).cloned().unwrap_or_else(CycNum::zero);
            out.push(a.add(&b));
        }
        Poly::new(out)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| c.clone().neg()).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &CycNum) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![CycNum::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, e: usize) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn divmod(&self, den: &Poly) -> Result<(Poly, Poly), CycError> {
        assert!(!den.is_zero());
        let mut rem = self.coeffs.clone();
        let dd = den.degree();
        let lead_inv = den.leading().inv()?;
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![CycNum::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let q = rem[i].mul(&lead_inv);
            quot[i - dd] = q.clone();
            for j in 0..=dd {
                rem[i - dd + j] = rem[i - dd + j].sub(&den.coeffs[j].mul(&q));
            }
        }
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divmod(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        // monic normal form
        let li = a.leading().inv().unwrap();
        a.scale(&li)
    }

    pub fn eval(&self, z: &CycNum) -> CycNum {
        let mut acc = CycNum::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c.mul(&CycNum::from_int(i as i64 + 1)))
                .collect(),
        )
    }

    /// Substitutes x ↦ (a x + b)/(c x + d), homogenized to total degree `deg`:
    /// returns Σ_i coeff_i (a x + b)^i (c x + d)^{deg - i}.
    pub fn compose_mobius_homogenized(
        &self,
        a: &CycNum,
        b: &CycNum,
        c: &CycNum,
        d: &CycNum,
        deg: usize,
    ) -> Poly {
        let lin_num = Poly::new(vec![b.clone(), a.clone()]);
        let lin_den = Poly::new(vec![d.clone(), c.clone()]);
        let mut acc = Poly::zero();
        for (i, coeff) in self.coeffs.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            let t = lin_num.pow(i).mul(&lin_den.pow(deg - i)).scale(coeff);
            acc = acc.add(&t);
        }
        acc
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            write!(f, "({})x^{} ", c, i)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divmod_and_gcd() {
        // (x-1)(x-2) and (x-1)(x-3)
        let p = Poly::linear_root(&CycNum::one()).mul(&Poly::linear_root(&CycNum::from_int(2)));
        let q = Poly::linear_root(&CycNum::one()).mul(&Poly::linear_root(&CycNum::from_int(3)));
        let g = p.gcd(&q);
        assert_eq!(g, Poly::linear_root(&CycNum::one()));
        let (quot, rem) = p.divmod(&g).unwrap();
        assert!(rem.is_zero());
        assert_eq!(quot, Poly::linear_root(&CycNum::from_int(2)));
    }

    #[test]
    fn eval_horner() {
        let p = Poly::new(vec![
            CycNum::from_int(1),
            CycNum::from_int(-2),
            CycNum::from_int(1),
        ]);
        // (x-1)²  at x = 3 -> 4
        assert_eq!(p.eval(&CycNum::from_int(3)), CycNum::from_int(4));
    }
}
