//! Exact arithmetic in cyclotomic fields ℚ(μ_N).
//!
//! A [`CycNum`] is an element of ℚ(μ_N) stored in the power basis of
//! μ_N = exp(2πi/N) modulo the N-th cyclotomic polynomial Φ_N, so every
//! element has a unique normal form and equality is coefficient equality.
//! Elements are kept at their minimal level: after every operation the
//! result is re-expressed in the smallest ℚ(μ_M) that contains it. Mixed
//! levels are combined at the lcm of the operand levels.
//!
//! [`ExtPoint`] adjoins the point at infinity; it is the point type of the
//! extended complex plane used for supports and poles of the forms dx/(x-a).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering as AtomicOrdering};
use std::sync::{Mutex, OnceLock};

/// Errors from cyclotomic arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CycError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("level {0} does not divide target level {1}")]
    NotDivisible(u32, u32),
    #[error("degenerate tuple: two of the four cross-ratio points coincide")]
    DegenerateTuple,
    #[error("cannot parse cyclotomic literal: {0}")]
    Parse(String),
    #[error("level {0} exceeds the configured cap {1}")]
    LevelCap(u32, u32),
}

static LEVEL_CAP: AtomicU32 = AtomicU32::new(240);

/// Returns the configured maximum cyclotomic level.
pub fn level_cap() -> u32 {
    LEVEL_CAP.load(AtomicOrdering::Relaxed)
}

/// Sets the maximum cyclotomic level (bounds φ(N) in all computations).
pub fn set_level_cap(cap: u32) {
    LEVEL_CAP.store(cap.max(1), AtomicOrdering::Relaxed);
}

/// Euler totient.
pub fn euler_phi(n: u32) -> u32 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Distinct prime factors, ascending.
pub fn prime_factors(n: u32) -> Vec<u32> {
    let mut n = n;
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    // Exact division of integer polynomials, used for Φ_N construction.
    let mut rem: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd].clone();
    assert!(lead.is_one());
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for i in (dd..rem.len()).rev() {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        let qi = i - dd;
        quot[qi] = c.clone();
        for j in 0..=dd {
            let t = &den[j] * &c;
            rem[qi + j] -= t;
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "inexact division");
    quot
}

/// The N-th cyclotomic polynomial Φ_N as integer coefficients, low to high.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<BigInt>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // Φ over the radical first, then substitute x -> x^(n/rad(n)).
    let primes = prime_factors(n);
    let mut cur = vec![-BigInt::one(), BigInt::one()]; // x - 1 = Φ_1
    let mut rad = 1u32;
    for &p in &primes {
        rad *= p;
        // Φ_{m p}(x) = Φ_m(x^p) / Φ_m(x) for p not dividing m
        let mut subst = vec![BigInt::zero(); (cur.len() - 1) * p as usize + 1];
        for (i, c) in cur.iter().enumerate() {
            subst[i * p as usize] = c.clone();
        }
        cur = poly_div_exact(&subst, &cur);
    }
    let stretch = (n / rad) as usize;
    let mut full = vec![BigInt::zero(); (cur.len() - 1) * stretch + 1];
    for (i, c) in cur.iter().enumerate() {
        full[i * stretch] = c.clone();
    }
    cache.lock().unwrap().insert(n, full.clone());
    full
}

/// Rows k = φ(N)..2φ(N)-2: μ^k expressed in the power basis, for reduction.
fn reduction_table(n: u32) -> Vec<Vec<BigRational>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<Vec<BigRational>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().unwrap().get(&n) {
        return t.clone();
    }
    let phi = euler_phi(n) as usize;
    let cyc = cyclotomic_polynomial(n);
    // μ^phi = -(c_0 + c_1 μ + ... + c_{phi-1} μ^{phi-1}) since Φ_N is monic.
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(phi.max(1));
    let base: Vec<BigRational> = (0..phi)
        .map(|i| -BigRational::from(cyc[i].clone()))
        .collect();
    rows.push(base);
    for k in 1..phi.saturating_sub(1) {
        let prev = rows[k - 1].clone();
        let mut next = vec![BigRational::zero(); phi];
        // multiply by μ: shift, folding the overflow term through row 0
        let top = prev[phi - 1].clone();
        for i in (1..phi).rev() {
            next[i] = prev[i - 1].clone();
        }
        if !top.is_zero() {
            for i in 0..phi {
                let t = &rows[0][i] * &top;
                next[i] += t;
            }
        }
        rows.push(next);
    }
    cache.lock().unwrap().insert(n, rows.clone());
    rows
}

/// An exact element of the cyclotomic field ℚ(μ_N), stored at its minimal level.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycNum {
    level: u32,
    coeffs: Vec<BigRational>,
}

impl CycNum {
    /// Zero (level 1).
    pub fn zero() -> Self {
        CycNum {
            level: 1,
            coeffs: vec![BigRational::zero()],
        }
    }

    /// One (level 1).
    pub fn one() -> Self {
        CycNum {
            level: 1,
            coeffs: vec![BigRational::one()],
        }
    }

    /// A rational number as a level-1 element.
    pub fn from_rational(q: BigRational) -> Self {
        CycNum {
            level: 1,
            coeffs: vec![q],
        }
    }

    /// Integer constant.
    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from(BigInt::from(n)))
    }

    /// The fraction `num/den`.
    pub fn from_frac(num: i64, den: i64) -> Self {
        assert!(den != 0);
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// The root of unity μ_N^k.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        assert!(n >= 1);
        let k = k.rem_euclid(n as i64) as u32;
        let phi = euler_phi(n) as usize;
        let mut coeffs = vec![BigRational::zero(); phi];
        if (k as usize) < phi {
            coeffs[k as usize] = BigRational::one();
        } else {
            let mut x = CycNum {
                level: n,
                coeffs: {
                    let mut c = vec![BigRational::zero(); phi];
                    c[1.min(phi - 1)] = BigRational::one();
                    c
                },
            };
            if phi == 1 {
                // N = 1 or 2: μ = 1 or -1
                x = if n == 2 { Self::from_int(-1) } else { Self::one() };
            }
            let mut acc = CycNum::one();
            for _ in 0..k {
                acc = acc.mul(&x);
            }
            return acc;
        }
        CycNum { level: n, coeffs }.normalized()
    }

    /// Level (conductor) of the minimal cyclotomic field containing this element.
    pub fn level(&self) -> u32 {
        self.level
    }

    /// Power-basis coordinates at the stored (minimal) level.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.level == 1 && self.coeffs[0].is_one()
    }

    /// Returns the element as a rational number if it is one.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.level == 1 {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Returns Some((n, k)) if this element equals μ_n^k. The order of a root
    /// of unity in ℚ(μ_N) divides N for even N and 2N for odd N (e.g. -1 has
    /// field level 1 but order 2), so both candidates are scanned.
    pub fn as_root_of_unity(&self) -> Option<(u32, u32)> {
        let mut candidates = vec![self.level];
        if self.level % 2 == 1 {
            candidates.push(2 * self.level);
        }
        for n in candidates {
            for k in 0..n {
                if *self == CycNum::root_of_unity(n, k as i64) {
                    return Some((n, k));
                }
            }
        }
        None
    }

    fn normalized(mut self) -> Self {
        // strip to minimal level
        loop {
            let n = self.level;
            if n == 1 {
                return self;
            }
            let mut reduced = false;
            for p in prime_factors(n) {
                let m = n / p;
                if let Some(lower) = self.try_at_level(m) {
                    self = lower;
                    reduced = true;
                    break;
                }
            }
            if !reduced {
                return self;
            }
        }
    }

    /// Raw coordinates of this element in the power basis of μ_N, if the
    /// element lies in ℚ(μ_N). This is the representation-level embedding:
    /// the field element itself is unchanged.
    pub fn coeffs_at_level(&self, n: u32) -> Result<Vec<BigRational>, CycError> {
        if n % self.level != 0 {
            // the minimal level must divide N for ℚ(μ_level) ⊆ ℚ(μ_N)...
            // except for the index-2 identification ℚ(μ_M) = ℚ(μ_2M), M odd.
            if !(self.level % 2 == 0 && (self.level / 2) % 2 == 1 && n % (self.level / 2) == 0) {
                return Err(CycError::NotDivisible(self.level, n));
            }
        }
        Ok(self.raise_to(n).coeffs)
    }

    fn raise_to(&self, n: u32) -> CycNum {
        // express at level n (n a multiple of level, or the odd-half case)
        if n == self.level {
            return self.clone();
        }
        let phi_n = euler_phi(n) as usize;
        let mut acc = vec![BigRational::zero(); phi_n.max(1)];
        if n % self.level == 0 {
            let stride = (n / self.level) as usize;
            let mut tmp = CycPoly::zero(n);
            for (k, c) in self.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    tmp.add_monomial(k * stride, c.clone());
                }
            }
            let red = tmp.reduce();
            for (i, c) in red.into_iter().enumerate() {
                acc[i] = c;
            }
            return CycNum {
                level: n,
                coeffs: acc,
            };
        }
        // odd-half case: level = 2M with M odd, target n multiple of M only.
        // μ_{2M} = -μ_M^{(M+1)/2}
        let m = self.level / 2;
        debug_assert!(self.level % 2 == 0 && m % 2 == 1 && n % m == 0);
        let base = CycNum::root_of_unity(n, -((m as i64 + 1) / 2) * (n as i64 / m as i64));
        // μ_{2M}^k = (-1)^k μ_M^{k(M+1)/2}
        let mut result = CycNum::zero();
        let mut pw = CycNum::one();
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut term = pw.clone().scale(c);
                if k % 2 == 1 {
                    term = term.neg();
                }
                result = result.add(&term);
            }
            if k + 1 < self.coeffs.len() {
                pw = pw.mul(&base);
            }
        }
        let _ = pw;
        result.raise_to(n)
    }

    fn try_at_level(&self, m: u32) -> Option<CycNum> {
        // Solve x = sum_j c_j μ_N^{j N/M} over j < φ(M); None if x ∉ ℚ(μ_M).
        let n = self.level;
        let phi_n = euler_phi(n) as usize;
        let phi_m = euler_phi(m) as usize;
        let basis = subfield_basis(n, m);
        // Gaussian elimination on the φ(N) × φ(M) system.
        let mut aug: Vec<Vec<BigRational>> = (0..phi_n)
            .map(|row| {
                let mut r: Vec<BigRational> = (0..phi_m).map(|j| basis[j][row].clone()).collect();
                r.push(self.coeffs[row].clone());
                r
            })
            .collect();
        let mut sol = vec![BigRational::zero(); phi_m];
        let mut row = 0usize;
        let mut pivots = Vec::new();
        for col in 0..phi_m {
            let mut sel = None;
            for r in row..phi_n {
                if !aug[r][col].is_zero() {
                    sel = Some(r);
                    break;
                }
            }
            let Some(sel) = sel else { continue };
            aug.swap(row, sel);
            let inv = aug[row][col].clone();
            for c in col..=phi_m {
                let v = &aug[row][c] / &inv;
                aug[row][c] = v;
            }
            for r in 0..phi_n {
                if r != row && !aug[r][col].is_zero() {
                    let f = aug[r][col].clone();
                    for c in col..=phi_m {
                        let t = &aug[row][c] * &f;
                        aug[r][c] -= t;
                    }
                }
            }
            pivots.push((row, col));
            row += 1;
        }
        // consistency: all remaining rows must have zero rhs
        for r in row..phi_n {
            if !aug[r][phi_m].is_zero() {
                return None;
            }
        }
        for (r, c) in pivots {
            sol[c] = aug[r][phi_m].clone();
        }
        Some(CycNum {
            level: m,
            coeffs: sol,
        })
    }

    fn lift_pair(a: &CycNum, b: &CycNum) -> (CycNum, CycNum, u32) {
        let n = lcm_level(a.level, b.level);
        (a.raise_to(n), b.raise_to(n), n)
    }

    pub fn add(&self, other: &CycNum) -> CycNum {
        let (x, y, n) = Self::lift_pair(self, other);
        let coeffs = x
            .coeffs
            .iter()
            .zip(y.coeffs.iter())
            .map(|(a, b)| a + b)
            .collect();
        CycNum { level: n, coeffs }.normalized()
    }

    pub fn sub(&self, other: &CycNum) -> CycNum {
        self.add(&other.clone().neg())
    }

    pub fn neg(self) -> CycNum {
        CycNum {
            level: self.level,
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(self, q: &BigRational) -> CycNum {
        if q.is_zero() {
            return CycNum::zero();
        }
        CycNum {
            level: self.level,
            coeffs: self.coeffs.into_iter().map(|c| c * q).collect(),
        }
    }

    pub fn mul(&self, other: &CycNum) -> CycNum {
        if self.is_zero() || other.is_zero() {
            return CycNum::zero();
        }
        let (x, y, n) = Self::lift_pair(self, other);
        let phi = euler_phi(n) as usize;
        let mut prod = vec![BigRational::zero(); 2 * phi - 1];
        for (i, a) in x.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    let t = a * b;
                    prod[i + j] += t;
                }
            }
        }
        let mut poly = CycPoly {
            level: n,
            coeffs: prod,
        };
        let red = poly.reduce();
        CycNum {
            level: n,
            coeffs: red,
        }
        .normalized()
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<CycNum, CycError> {
        if self.is_zero() {
            return Err(CycError::DivisionByZero);
        }
        let n = self.level;
        if n == 1 {
            return Ok(CycNum::from_rational(self.coeffs[0].recip()));
        }
        // extended Euclid: a(x)·self + b(x)·Φ_N = 1 in ℚ[x]
        let phi: Vec<BigRational> = cyclotomic_polynomial(n)
            .into_iter()
            .map(BigRational::from)
            .collect();
        let (mut r0, mut r1) = (phi, self.coeffs.clone());
        trim(&mut r0);
        trim(&mut r1);
        let zero: Vec<BigRational> = vec![];
        let one = vec![BigRational::one()];
        let (mut s0, mut s1) = (zero, one);
        while !r1.is_empty() {
            let (q, r) = poly_divmod(&r0, &r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        // r0 = gcd (a nonzero constant since Φ_N is irreducible)
        debug_assert_eq!(r0.len(), 1);
        let c = r0[0].recip();
        let mut coeffs = vec![BigRational::zero(); euler_phi(n) as usize];
        for (i, v) in s0.iter().enumerate() {
            coeffs[i] = v * &c;
        }
        Ok(CycNum { level: n, coeffs }.normalized())
    }

    pub fn div(&self, other: &CycNum) -> Result<CycNum, CycError> {
        Ok(self.mul(&other.inv()?))
    }

    /// Complex conjugate (the Galois map μ ↦ μ^{-1}).
    pub fn conj(&self) -> CycNum {
        self.galois(self.level as i64 - 1)
    }

    /// The Galois automorphism μ_N ↦ μ_N^j, gcd(j, N) = 1.
    pub fn galois(&self, j: i64) -> CycNum {
        let n = self.level;
        if n == 1 {
            return self.clone();
        }
        let j = j.rem_euclid(n as i64) as u32;
        assert_eq!(gcd(j, n), 1, "galois exponent must be a unit mod level");
        let mut acc = CycNum::zero();
        let base = CycNum::root_of_unity(n, j as i64);
        let mut pw = CycNum::one();
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&pw.clone().scale(c));
            }
            if k + 1 < self.coeffs.len() {
                pw = pw.mul(&base);
            }
        }
        acc
    }

    /// Exact power with integer exponent (negative allowed for nonzero base).
    pub fn pow(&self, e: i64) -> Result<CycNum, CycError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = CycNum::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// √q for a rational q, as a cyclotomic number (None if the needed level
    /// exceeds the cap). Nonnegative square root of |q| times i for q < 0.
    pub fn sqrt_rational(q: &BigRational) -> Option<CycNum> {
        if q.is_zero() {
            return Some(CycNum::zero());
        }
        let neg = q.is_negative();
        let aq = q.abs();
        // |q| = (a/b) -> sqrt(a b)/b
        let ab = aq.numer() * aq.denom();
        let mut n = ab.clone();
        let mut square = BigInt::one();
        let mut squarefree = Vec::new();
        let mut p = BigInt::from(2);
        while &p * &p <= n {
            let mut e = 0u32;
            while (&n % &p).is_zero() {
                n /= &p;
                e += 1;
            }
            square *= p.pow(e / 2);
            if e % 2 == 1 {
                squarefree.push(p.clone());
            }
            p += 1;
        }
        if n > BigInt::one() {
            squarefree.push(n.clone());
        }
        let mut acc = CycNum::from_rational(BigRational::new(square, aq.denom().clone()));
        for p in squarefree {
            let pu: u32 = p.to_string().parse().ok()?;
            acc = acc.mul(&sqrt_prime(pu)?);
        }
        if neg {
            acc = acc.mul(&CycNum::root_of_unity(4, 1));
        }
        Some(acc)
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// lcm of two levels, panicking past the configured cap.
pub fn lcm_level(a: u32, b: u32) -> u32 {
    let l = a / gcd(a, b) * b;
    assert!(
        l <= level_cap(),
        "level {l} exceeds configured cap {}",
        level_cap()
    );
    l
}

/// √p for a prime p via Gauss sums (level p, 4p, or 8).
fn sqrt_prime(p: u32) -> Option<CycNum> {
    if p == 2 {
        // μ_8 + μ_8^{-1} = 2 cos(π/4) = √2
        return Some(CycNum::root_of_unity(8, 1).add(&CycNum::root_of_unity(8, -1)));
    }
    if p * 4 > level_cap() && p > level_cap() {
        return None;
    }
    // Gauss sum g = Σ (k|p) μ_p^k equals √p (p ≡ 1 mod 4) or i√p (p ≡ 3 mod 4)
    let mut g = CycNum::zero();
    for k in 1..p {
        let ls = legendre(k, p);
        let term = CycNum::root_of_unity(p, k as i64);
        g = if ls == 1 { g.add(&term) } else { g.sub(&term) };
    }
    if p % 4 == 1 {
        Some(g)
    } else {
        // √p = g / i = -i g
        Some(g.mul(&CycNum::root_of_unity(4, -1)))
    }
}

fn legendre(mut a: u32, p: u32) -> i32 {
    a %= p;
    let mut result = 1u64;
    let mut base = a as u64;
    let mut e = (p as u64 - 1) / 2;
    let m = p as u64;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    if result == 1 {
        1
    } else {
        -1
    }
}

// -- small dense polynomial helpers over BigRational (internal) --

fn trim(p: &mut Vec<BigRational>) {
    while let Some(c) = p.last() {
        if c.is_zero() {
            p.pop();
        } else {
            break;
        }
    }
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                let t = x * y;
                out[i + j] += t;
            }
        }
    }
    trim(&mut out);
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&mut out);
    out
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = a.to_vec();
    trim(&mut rem);
    let db = b.len() - 1;
    let lead = b[db].clone();
    if rem.len() <= db {
        return (vec![], rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    for i in (db..rem.len()).rev() {
        if rem[i].is_zero() {
            continue;
        }
        let q = &rem[i] / &lead;
        quot[i - db] = q.clone();
        for j in 0..=db {
            let t = &b[j] * &q;
            rem[i - db + j] -= t;
        }
    }
    trim(&mut rem);
    trim(&mut quot);
    (quot, rem)
}

struct CycPoly {
    level: u32,
    coeffs: Vec<BigRational>,
}

impl CycPoly {
    fn zero(level: u32) -> Self {
        CycPoly {
            level,
            coeffs: vec![],
        }
    }
    fn add_monomial(&mut self, deg: usize, c: BigRational) {
        if self.coeffs.len() <= deg {
            self.coeffs.resize(deg + 1, BigRational::zero());
        }
        self.coeffs[deg] += c;
    }
    fn reduce(&mut self) -> Vec<BigRational> {
        let n = self.level;
        let phi = euler_phi(n) as usize;
        let mut out = vec![BigRational::zero(); phi];
        if self.coeffs.len() > phi {
            let table = reduction_table(n);
            // fold degrees >= phi down through the table, highest first
            let mut work = std::mem::take(&mut self.coeffs);
            for deg in (phi..work.len()).rev() {
                let c = std::mem::replace(&mut work[deg], BigRational::zero());
                if c.is_zero() {
                    continue;
                }
                let row = &table[deg - phi];
                for (i, r) in row.iter().enumerate() {
                    if !r.is_zero() {
                        let t = r * &c;
                        work[i] += t;
                    }
                }
            }
            for (i, c) in work.into_iter().take(phi).enumerate() {
                out[i] = c;
            }
        } else {
            for (i, c) in self.coeffs.iter().enumerate() {
                out[i] = c.clone();
            }
        }
        out
    }
}

fn subfield_basis(n: u32, m: u32) -> Vec<Vec<BigRational>> {
    // coordinates at level n of μ_M^j for j < φ(M)
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Vec<Vec<BigRational>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(b) = cache.lock().unwrap().get(&(n, m)) {
        return b.clone();
    }
    let phi_m = euler_phi(m) as usize;
    let stride = (n / m) as usize;
    let phi_n = euler_phi(n) as usize;
    let mut rows = Vec::with_capacity(phi_m);
    for j in 0..phi_m {
        let mut p = CycPoly::zero(n);
        p.add_monomial(j * stride, BigRational::one());
        let red = p.reduce();
        let mut v = vec![BigRational::zero(); phi_n];
        for (i, c) in red.into_iter().enumerate() {
            v[i] = c;
        }
        rows.push(v);
    }
    cache.lock().unwrap().insert((n, m), rows.clone());
    rows
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if k == 0 {
                write!(f, "{}", mag)?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}*", mag)?;
                }
                write!(f, "mu({})", self.level)?;
                if k > 1 {
                    write!(f, "^{}", k)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A point of the extended complex plane Ĉ with exact cyclotomic coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtPoint {
    Finite(CycNum),
    Infinity,
}

impl ExtPoint {
    pub fn zero() -> Self {
        ExtPoint::Finite(CycNum::zero())
    }
    pub fn one() -> Self {
        ExtPoint::Finite(CycNum::one())
    }
    pub fn from_int(n: i64) -> Self {
        ExtPoint::Finite(CycNum::from_int(n))
    }
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        ExtPoint::Finite(CycNum::root_of_unity(n, k))
    }
    pub fn is_infinity(&self) -> bool {
        matches!(self, ExtPoint::Infinity)
    }
    pub fn as_finite(&self) -> Option<&CycNum> {
        match self {
            ExtPoint::Finite(c) => Some(c),
            ExtPoint::Infinity => None,
        }
    }
}

impl fmt::Debug for ExtPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtPoint::Finite(c) => write!(f, "{}", c),
            ExtPoint::Infinity => write!(f, "inf"),
        }
    }
}

impl fmt::Display for ExtPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl From<CycNum> for ExtPoint {
    fn from(c: CycNum) -> Self {
        ExtPoint::Finite(c)
    }
}

/// Exact cross-ratio (z3-z1)(z4-z2) / ((z3-z2)(z4-z1)), with the usual
/// limits when one point is ∞ (the two factors containing it are dropped).
pub fn cross_ratio(
    z1: &ExtPoint,
    z2: &ExtPoint,
    z3: &ExtPoint,
    z4: &ExtPoint,
) -> Result<CycNum, CycError> {
    let pts = [z1, z2, z3, z4];
    for i in 0..4 {
        for j in (i + 1)..4 {
            if pts[i] == pts[j] {
                return Err(CycError::DegenerateTuple);
            }
        }
    }
    let diff = |a: &ExtPoint, b: &ExtPoint| -> Option<CycNum> {
        match (a, b) {
            (ExtPoint::Finite(x), ExtPoint::Finite(y)) => Some(x.sub(y)),
            _ => None, // a factor containing ∞ is dropped
        }
    };
    let mut num = CycNum::one();
    let mut den = CycNum::one();
    if let Some(d) = diff(z3, z1) {
        num = num.mul(&d);
    }
    if let Some(d) = diff(z4, z2) {
        num = num.mul(&d);
    }
    if let Some(d) = diff(z3, z2) {
        den = den.mul(&d);
    }
    if let Some(d) = diff(z4, z1) {
        den = den.mul(&d);
    }
    num.div(&den)
}

// -- text syntax: rational literals and "mu(N)^k" monomials --

impl CycNum {
    /// Parses the textual syntax, e.g. `"1/2 + 3*mu(5)^2 - mu(5)^3"`.
    pub fn parse(s: &str) -> Result<CycNum, CycError> {
        let mut p = Parser {
            s: s.as_bytes(),
            pos: 0,
        };
        let v = p.expr()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(CycError::Parse(format!(
                "trailing input at byte {}: {:?}",
                p.pos, s
            )));
        }
        Ok(v)
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && (self.s[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
    }
    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }
    fn expr(&mut self) -> Result<CycNum, CycError> {
        let mut acc = CycNum::zero();
        let mut sign = 1i64;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            sign = -1;
        } else if self.peek() == Some(b'+') {
            self.pos += 1;
        }
        loop {
            let term = self.term()?;
            acc = if sign > 0 {
                acc.add(&term)
            } else {
                acc.sub(&term)
            };
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = 1;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -1;
                }
                _ => break,
            }
        }
        Ok(acc)
    }
    fn term(&mut self) -> Result<CycNum, CycError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = acc.mul(&f);
        }
        Ok(acc)
    }
    fn factor(&mut self) -> Result<CycNum, CycError> {
        self.skip_ws();
        if self.s[self.pos..].starts_with(b"mu(") {
            self.pos += 3;
            let n = self.number()? as u32;
            if self.peek() != Some(b')') {
                return Err(CycError::Parse("expected ')'".into()));
            }
            self.pos += 1;
            let mut k = 1i64;
            if self.peek() == Some(b'^') {
                self.pos += 1;
                let neg = if self.peek() == Some(b'-') {
                    self.pos += 1;
                    true
                } else {
                    false
                };
                k = self.number()?;
                if neg {
                    k = -k;
                }
            }
            if n == 0 || n > level_cap() {
                return Err(CycError::LevelCap(n, level_cap()));
            }
            return Ok(CycNum::root_of_unity(n, k));
        }
        // rational literal a or a/b
        let num = self.number()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let den = self.number()?;
            if den == 0 {
                return Err(CycError::DivisionByZero);
            }
            return Ok(CycNum::from_frac(num, den));
        }
        Ok(CycNum::from_int(num))
    }
    fn number(&mut self) -> Result<i64, CycError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(CycError::Parse(format!(
                "expected a number at byte {}",
                start
            )));
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|e| CycError::Parse(format!("{e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mu(n: u32, k: i64) -> CycNum {
        CycNum::root_of_unity(n, k)
    }

    #[test]
    fn root_of_unity_inverse() {
        let x = mu(6, 1);
        let y = mu(6, -1);
        assert!(x.mul(&y).is_one());
    }

    #[test]
    fn fifth_roots_sum_to_minus_one() {
        let s = mu(5, 1).add(&mu(5, 2)).add(&mu(5, 3)).add(&mu(5, 4));
        assert_eq!(s, CycNum::from_int(-1));
    }

    #[test]
    fn gaussian_product() {
        // (1+i)(1-i) = 2, expanded in ℚ(i) with i² = -1
        let i = mu(4, 1);
        let a = CycNum::one().add(&i);
        let b = CycNum::one().sub(&i);
        assert_eq!(a.mul(&b), CycNum::from_int(2));
    }

    #[test]
    fn embed_examples() {
        // -1 at level 4 is μ_4²
        let m1 = CycNum::from_int(-1);
        let c = m1.coeffs_at_level(4).unwrap();
        let mu4sq = mu(4, 2);
        assert_eq!(mu4sq, m1);
        assert_eq!(c, vec![BigRational::from(BigInt::from(-1)), BigRational::zero()]);
        // μ_3 expressed at level 6 equals μ_6²
        assert_eq!(mu(3, 1), mu(6, 2));
        // identity embeds anywhere
        assert_eq!(CycNum::one().coeffs_at_level(12).unwrap()[0], BigRational::one());
    }

    #[test]
    fn minimal_level_normalization() {
        // μ_6³ = -1 lives at level 1
        assert_eq!(mu(6, 3).level(), 1);
        assert_eq!(mu(6, 3), CycNum::from_int(-1));
        // μ_6 itself is in ℚ(μ_3): minimal level 3
        assert_eq!(mu(6, 1).level(), 3);
        // μ_8² = i has level 4
        assert_eq!(mu(8, 2).level(), 4);
    }

    #[test]
    fn inverse_and_division() {
        let x = mu(5, 2).add(&CycNum::from_frac(1, 3));
        let y = x.inv().unwrap();
        assert!(x.mul(&y).is_one());
        assert_eq!(
            CycNum::zero().inv().unwrap_err(),
            CycError::DivisionByZero
        );
    }

    #[test]
    fn conjugation() {
        let x = mu(12, 5);
        assert!(x.mul(&x.conj()).is_one());
        let phi = CycNum::sqrt_rational(&BigRational::from(BigInt::from(5))).unwrap();
        // √5 is real: fixed by conjugation
        assert_eq!(phi.conj(), phi);
    }

    #[test]
    fn sqrt_of_small_integers() {
        for n in [2i64, 3, 5, 6, 7, 10] {
            let r = CycNum::sqrt_rational(&BigRational::from(BigInt::from(n))).unwrap();
            assert_eq!(r.mul(&r), CycNum::from_int(n), "sqrt({n})^2");
        }
        let im = CycNum::sqrt_rational(&BigRational::from(BigInt::from(-1))).unwrap();
        assert_eq!(im, mu(4, 1));
    }

    #[test]
    fn cross_ratio_normalization() {
        // (0, ∞, x, 1) -> x for generic x
        let x = mu(5, 1).add(&CycNum::from_int(3));
        let r = cross_ratio(
            &ExtPoint::zero(),
            &ExtPoint::Infinity,
            &ExtPoint::Finite(x.clone()),
            &ExtPoint::one(),
        )
        .unwrap();
        assert_eq!(r, x);
        // (0, ∞, 1, x) -> 1/x
        let r = cross_ratio(
            &ExtPoint::zero(),
            &ExtPoint::Infinity,
            &ExtPoint::one(),
            &ExtPoint::Finite(x.clone()),
        )
        .unwrap();
        assert_eq!(r, x.inv().unwrap());
    }

    #[test]
    fn cross_ratio_of_unit_root() {
        // (0, 1, ∞, μ^i) -> 1 - μ^{-i}: the weight-1 span of the level-N
        // support is generated by logs of exactly these values.
        for i in 1..5 {
            let r = cross_ratio(
                &ExtPoint::zero(),
                &ExtPoint::one(),
                &ExtPoint::Infinity,
                &ExtPoint::root_of_unity(5, i),
            )
            .unwrap();
            assert_eq!(r, CycNum::one().sub(&mu(5, -i)));
        }
    }

    #[test]
    fn cross_ratio_degenerate() {
        let e = cross_ratio(
            &ExtPoint::zero(),
            &ExtPoint::zero(),
            &ExtPoint::one(),
            &ExtPoint::Infinity,
        );
        assert_eq!(e.unwrap_err(), CycError::DegenerateTuple);
    }

    #[test]
    fn parse_and_print_round_trip() {
        let x = CycNum::parse("1/2 + 3*mu(5)^2 - mu(5)^3").unwrap();
        let y = CycNum::parse(&x.to_string()).unwrap();
        assert_eq!(x, y);
        assert_eq!(CycNum::parse("mu(6)^3").unwrap(), CycNum::from_int(-1));
    }

    #[test]
    fn phi_table() {
        for (n, phi) in [(1u32, 1u32), (2, 1), (3, 2), (4, 2), (5, 4), (6, 2), (8, 4), (12, 4), (240, 64)] {
            assert_eq!(euler_phi(n), phi);
        }
    }

    #[test]
    fn cyclotomic_poly_small() {
        let p6: Vec<i64> = cyclotomic_polynomial(6)
            .iter()
            .map(|c| c.try_into().unwrap())
            .collect();
        assert_eq!(p6, vec![1, -1, 1]);
        let p12: Vec<i64> = cyclotomic_polynomial(12)
            .iter()
            .map(|c| c.try_into().unwrap())
            .collect();
        assert_eq!(p12, vec![1, 0, -1, 0, 1]);
    }
}
