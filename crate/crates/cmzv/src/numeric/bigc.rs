//! Arbitrary-precision real and complex arithmetic, wrapping astro-float.
//!
//! All operations go through an [`RCtx`] fixing the working precision in
//! bits; elementary functions share a thread-local constants cache.

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::cell::RefCell;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

fn with_cc<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Bits of working precision for `digits` decimal digits plus guard bits.
pub fn bits_for_digits(digits: u32) -> usize {
    ((digits as f64) * std::f64::consts::LOG2_10).ceil() as usize + 32
}

/// Real-arithmetic context: a fixed binary working precision.
#[derive(Clone, Copy, Debug)]
pub struct RCtx {
    pub p: usize,
}

impl RCtx {
    pub fn new(p: usize) -> Self {
        RCtx { p: p.max(64) }
    }

    pub fn with_digits(digits: u32) -> Self {
        RCtx::new(bits_for_digits(digits))
    }

    pub fn zero(&self) -> BigFloat {
        BigFloat::from_f64(0.0, self.p)
    }
    pub fn one(&self) -> BigFloat {
        BigFloat::from_f64(1.0, self.p)
    }
    pub fn from_f64(&self, f: f64) -> BigFloat {
        BigFloat::from_f64(f, self.p)
    }
    pub fn from_i64(&self, n: i64) -> BigFloat {
        BigFloat::from_i64(n, self.p)
    }

    pub fn from_bigint(&self, n: &BigInt) -> BigFloat {
        let (sign, digits) = n.to_u64_digits();
        let mut acc = self.zero();
        let shift = BigFloat::from_i64(1i64 << 32, self.p).mul(
            &BigFloat::from_i64(1i64 << 32, self.p),
            self.p + 64,
            RM,
        );
        for d in digits.iter().rev() {
            acc = acc.mul(&shift, self.p + 64, RM);
            acc = acc.add(&BigFloat::from_u64(*d, self.p), self.p + 64, RM);
        }
        if sign == num_bigint::Sign::Minus {
            acc = acc.neg();
        }
        acc
    }

    pub fn from_rational(&self, q: &BigRational) -> BigFloat {
        let num = self.from_bigint(q.numer());
        let den = self.from_bigint(q.denom());
        num.div(&den, self.p, RM)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.p, RM)
    }
    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.p, RM)
    }
    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.p, RM)
    }
    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.p, RM)
    }
    pub fn pi(&self) -> BigFloat {
        with_cc(|cc| cc.pi(self.p, RM))
    }
    pub fn ln(&self, a: &BigFloat) -> BigFloat {
        with_cc(|cc| a.ln(self.p, RM, cc))
    }
    pub fn exp(&self, a: &BigFloat) -> BigFloat {
        with_cc(|cc| a.exp(self.p, RM, cc))
    }
    pub fn sin(&self, a: &BigFloat) -> BigFloat {
        with_cc(|cc| a.sin(self.p, RM, cc))
    }
    pub fn cos(&self, a: &BigFloat) -> BigFloat {
        with_cc(|cc| a.cos(self.p, RM, cc))
    }
    pub fn atan(&self, a: &BigFloat) -> BigFloat {
        with_cc(|cc| a.atan(self.p, RM, cc))
    }
    pub fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.p, RM)
    }
    pub fn powi(&self, a: &BigFloat, n: usize) -> BigFloat {
        a.powi(n, self.p, RM)
    }

    /// atan2(y, x) with the usual quadrant conventions.
    pub fn atan2(&self, y: &BigFloat, x: &BigFloat) -> BigFloat {
        let pi = self.pi();
        if x.is_zero() {
            let half = self.div(&pi, &self.from_i64(2));
            return if y.is_negative() { half.neg() } else { half };
        }
        let base = self.atan(&self.div(y, x));
        if x.is_positive() {
            base
        } else if y.is_negative() {
            self.sub(&base, &pi)
        } else {
            self.add(&base, &pi)
        }
    }

    /// Approximate magnitude as f64 (zero maps to 0.0).
    pub fn to_f64(&self, a: &BigFloat) -> f64 {
        big_to_f64(a)
    }

    /// 2^-k upper bound style comparison: |a| <= 2^-bits.
    pub fn is_small(&self, a: &BigFloat, bits: i64) -> bool {
        if a.is_zero() {
            return true;
        }
        match a.exponent() {
            Some(e) => (e as i64) <= -bits,
            None => false,
        }
    }
}

/// Lossy conversion to f64 via the raw mantissa words.
pub fn big_to_f64(a: &BigFloat) -> f64 {
    if a.is_zero() {
        return 0.0;
    }
    if a.is_nan() {
        return f64::NAN;
    }
    if a.is_inf_pos() {
        return f64::INFINITY;
    }
    if a.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    let Some((words, _n, sign, exp, _inexact)) = a.as_raw_parts() else {
        return f64::NAN;
    };
    let mut mant = 0.0f64;
    let mut scale = 1.0f64;
    for w in words.iter().rev().take(2) {
        scale /= 18446744073709551616.0; // 2^64
        mant += (*w as f64) * scale;
    }
    let v = mant * 2f64.powi(exp);
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

/// A complex number at arbitrary precision.
#[derive(Clone, Debug)]
pub struct BigC {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigC {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        BigC { re, im }
    }
    pub fn zero(ctx: &RCtx) -> Self {
        BigC::new(ctx.zero(), ctx.zero())
    }
    pub fn one(ctx: &RCtx) -> Self {
        BigC::new(ctx.one(), ctx.zero())
    }
    pub fn real(re: BigFloat, ctx: &RCtx) -> Self {
        BigC::new(re, ctx.zero())
    }
    pub fn from_f64(re: f64, im: f64, ctx: &RCtx) -> Self {
        BigC::new(ctx.from_f64(re), ctx.from_f64(im))
    }
    pub fn i(ctx: &RCtx) -> Self {
        BigC::new(ctx.zero(), ctx.one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &BigC, ctx: &RCtx) -> BigC {
        BigC::new(ctx.add(&self.re, &o.re), ctx.add(&self.im, &o.im))
    }
    pub fn sub(&self, o: &BigC, ctx: &RCtx) -> BigC {
        BigC::new(ctx.sub(&self.re, &o.re), ctx.sub(&self.im, &o.im))
    }
    pub fn neg(&self) -> BigC {
        BigC::new(self.re.neg(), self.im.neg())
    }
    pub fn conj(&self) -> BigC {
        BigC::new(self.re.clone(), self.im.neg())
    }
    pub fn mul(&self, o: &BigC, ctx: &RCtx) -> BigC {
        let re = ctx.sub(&ctx.mul(&self.re, &o.re), &ctx.mul(&self.im, &o.im));
        let im = ctx.add(&ctx.mul(&self.re, &o.im), &ctx.mul(&self.im, &o.re));
        BigC::new(re, im)
    }
    pub fn mul_real(&self, s: &BigFloat, ctx: &RCtx) -> BigC {
        BigC::new(ctx.mul(&self.re, s), ctx.mul(&self.im, s))
    }
    pub fn div(&self, o: &BigC, ctx: &RCtx) -> BigC {
        let d = ctx.add(&ctx.mul(&o.re, &o.re), &ctx.mul(&o.im, &o.im));
        let num = self.mul(&o.conj(), ctx);
        BigC::new(ctx.div(&num.re, &d), ctx.div(&num.im, &d))
    }
    pub fn inv(&self, ctx: &RCtx) -> BigC {
        BigC::one(ctx).div(self, ctx)
    }

    pub fn abs2(&self, ctx: &RCtx) -> BigFloat {
        ctx.add(&ctx.mul(&self.re, &self.re), &ctx.mul(&self.im, &self.im))
    }
    pub fn abs(&self, ctx: &RCtx) -> BigFloat {
        ctx.sqrt(&self.abs2(ctx))
    }
    pub fn arg(&self, ctx: &RCtx) -> BigFloat {
        ctx.atan2(&self.im, &self.re)
    }

    pub fn exp(&self, ctx: &RCtx) -> BigC {
        let r = ctx.exp(&self.re);
        BigC::new(
            ctx.mul(&r, &ctx.cos(&self.im)),
            ctx.mul(&r, &ctx.sin(&self.im)),
        )
    }

    /// Principal branch logarithm.
    pub fn ln(&self, ctx: &RCtx) -> BigC {
        let half = ctx.from_f64(0.5);
        BigC::new(ctx.mul(&ctx.ln(&self.abs2(ctx)), &half), self.arg(ctx))
    }

    pub fn powi(&self, n: u64, ctx: &RCtx) -> BigC {
        let mut acc = BigC::one(ctx);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base, ctx);
            }
            base = base.mul(&base, ctx);
            n >>= 1;
        }
        acc
    }

    /// |self| <= 2^-bits in both components.
    pub fn is_small(&self, bits: i64, ctx: &RCtx) -> bool {
        ctx.is_small(&self.re, bits) && ctx.is_small(&self.im, bits)
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (big_to_f64(&self.re), big_to_f64(&self.im))
    }

    /// Decimal rendering with roughly `digits` significant digits.
    pub fn to_decimal_string(&self, digits: u32) -> String {
        format!(
            "{}{}{}i",
            fmt_big(&self.re, digits),
            if self.im.is_negative() { " - " } else { " + " },
            fmt_big(&self.im.clone().abs(), digits)
        )
    }
}

/// Decimal rendering of a real value.
pub fn fmt_big(a: &BigFloat, digits: u32) -> String {
    let mut v = a.clone();
    let _ = v.set_precision(bits_for_digits(digits), RM);
    with_cc(|cc| {
        v.format(astro_float::Radix::Dec, RM, cc)
            .unwrap_or_else(|_| "nan".to_string())
    })
}

pub trait BigFloatF64Ext {
    fn to_f64_lossy(&self) -> f64;
}

impl BigFloatF64Ext for BigFloat {
    fn to_f64_lossy(&self) -> f64 {
        big_to_f64(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_conversion() {
        let ctx = RCtx::with_digits(50);
        let q = BigRational::new(BigInt::from(1), BigInt::from(3));
        let f = ctx.from_rational(&q);
        let three = ctx.from_i64(3);
        let back = ctx.mul(&f, &three);
        assert!(ctx.is_small(&ctx.sub(&back, &ctx.one()), 150));
    }

    #[test]
    fn big_integer_conversion() {
        let ctx = RCtx::with_digits(60);
        let n: BigInt = BigInt::from(2).pow(100) + BigInt::from(12345);
        let f = ctx.from_bigint(&n);
        let expect = ctx.add(
            &ctx.powi(&ctx.from_i64(2), 100),
            &ctx.from_i64(12345),
        );
        assert!(ctx.is_small(&ctx.sub(&f, &expect), 200));
    }

    #[test]
    fn complex_exp_log_round_trip() {
        let ctx = RCtx::with_digits(40);
        let z = BigC::from_f64(0.3, -1.1, &ctx);
        let w = z.exp(&ctx).ln(&ctx);
        assert!(z.sub(&w, &ctx).is_small(120, &ctx));
    }

    #[test]
    fn atan2_quadrants() {
        let ctx = RCtx::with_digits(30);
        let pi = ctx.pi();
        let q3 = BigC::from_f64(-1.0, -1.0, &ctx).arg(&ctx);
        // arg(-1-i) = -3π/4
        let expect = ctx.mul(&pi, &ctx.from_f64(-0.75));
        assert!(ctx.is_small(&ctx.sub(&q3, &expect), 90));
    }

    #[test]
    fn f64_round_trip() {
        let ctx = RCtx::with_digits(30);
        for v in [0.0, 1.5, -2.25e10, 3.7e-11] {
            let b = ctx.from_f64(v);
            assert!((big_to_f64(&b) - v).abs() <= v.abs() * 1e-14);
        }
    }
}
