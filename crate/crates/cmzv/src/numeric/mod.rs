//! Arbitrary-precision evaluation of CMZV atoms, polylog indices, word
//! integrals along explicit paths, and integer-relation detection.

pub mod bigc;
mod pslq;
mod quadrature;
mod series;
mod transport;

pub use bigc::{bits_for_digits, fmt_big, BigC, BigFloatF64Ext, RCtx};
pub use pslq::pslq;
pub use quadrature::eval_word_quadrature;
pub use transport::{standard_path, PathSpec};

use crate::convert::{index_to_word, Atom, CmzvExpr, CmzvIndex, ConvertError, Monomial};
use crate::cyclotomic::CycNum;
use crate::words::Word;
use num_traits::Zero;
use std::collections::HashMap;

/// Errors from numeric evaluation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumericError {
    #[error("summation did not converge within {0} terms")]
    Unconverged(usize),
    #[error("integration path passes through the pole {0}")]
    PathThroughPole(String),
    #[error("precision too low: need at least {0} digits")]
    PrecisionTooLow(u32),
    #[error(transparent)]
    Convert(#[from] ConvertError),
}

/// Evaluation configuration.
#[derive(Clone, Debug)]
pub struct EvalConfig {
    /// Target decimal digits.
    pub digits: u32,
    /// Cap on summation terms.
    pub max_terms: usize,
    /// Extra decimal digits of working headroom.
    pub guard_digits: u32,
    /// Radius of the semicircular detours around interior poles.
    pub detour_radius: (i64, i64),
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            digits: 30,
            max_terms: 2_000_000,
            guard_digits: 10,
            detour_radius: (1, 8),
        }
    }
}

impl EvalConfig {
    pub fn with_digits(digits: u32) -> Self {
        EvalConfig {
            digits: digits.max(10),
            ..Default::default()
        }
    }

    pub fn ctx(&self) -> RCtx {
        RCtx::with_digits(self.digits + self.guard_digits)
    }

    /// Absolute tolerance 10^(1-digits) for accepting a value.
    pub fn target_bits(&self) -> i64 {
        (((self.digits as f64) - 1.0) * std::f64::consts::LOG2_10) as i64
    }
}

/// Numeric value of an exact cyclotomic number at the given decimal digits.
pub fn eval_cycnum(c: &CycNum, digits: u32) -> BigC {
    let ctx = RCtx::with_digits(digits + 10);
    eval_cycnum_ctx(c, &ctx)
}

/// Numeric value of a CycNum in an existing context.
pub fn eval_cycnum_ctx(c: &CycNum, ctx: &RCtx) -> BigC {
    let n = c.level();
    let two_pi = ctx.mul(&ctx.pi(), &ctx.from_i64(2));
    let step = ctx.div(&two_pi, &ctx.from_i64(n as i64));
    let mut acc = BigC::zero(ctx);
    for (k, q) in c.coeffs().iter().enumerate() {
        if q.is_zero() {
            continue;
        }
        let theta = ctx.mul(&step, &ctx.from_i64(k as i64));
        let zk = BigC::new(ctx.cos(&theta), ctx.sin(&theta));
        acc = acc.add(&zk.mul_real(&ctx.from_rational(q), ctx), ctx);
    }
    acc
}

/// Evaluates a convergent CMZV atom.
///
/// Routing: small cumulative arguments go through direct nested summation
/// with an explicit geometric tail bound; an outer argument on the unit
/// circle away from 1 uses the iterated Euler transform; everything else is
/// transported as an iterated integral along [0,1]. Values are memoized per
/// thread at each precision.
pub fn eval_cmzv(i: &CmzvIndex, cfg: &EvalConfig) -> Result<BigC, NumericError> {
    thread_local! {
        static MEMO: std::cell::RefCell<HashMap<(CmzvIndex, u32), BigC>> =
            std::cell::RefCell::new(HashMap::new());
    }
    let key = (i.clone(), cfg.digits);
    if let Some(v) = MEMO.with(|m| m.borrow().get(&key).cloned()) {
        return Ok(v);
    }
    let v = eval_cmzv_uncached(i, cfg)?;
    MEMO.with(|m| m.borrow_mut().insert(key, v.clone()));
    Ok(v)
}

fn eval_cmzv_uncached(i: &CmzvIndex, cfg: &EvalConfig) -> Result<BigC, NumericError> {
    if let Some(v) = series::eval_index_series(i, cfg)? {
        return Ok(v);
    }
    // integral route
    let p = crate::convert::PolylogIndex::new(
        i.exponents().to_vec(),
        i.arguments(),
    );
    let (sign, word) = index_to_word(&p)?;
    let v = eval_word_integral(&word, &standard_path(), cfg)?;
    Ok(if sign < 0 { v.neg() } else { v })
}

/// Evaluates a convergent iterated integral ∫ ω(a1)⋯ω(an) along `path`.
///
/// A series route is used when every cumulative argument product has small
/// modulus; otherwise the suffix system is transported along the path by
/// analytic continuation with exact Taylor steps.
pub fn eval_word_integral(
    w: &Word,
    path: &PathSpec,
    cfg: &EvalConfig,
) -> Result<BigC, NumericError> {
    if w.is_empty() {
        return Ok(BigC::one(&cfg.ctx()));
    }
    if path.is_standard() {
        if let Ok((sign, p)) = crate::convert::word_to_polylog(w) {
            if let Some(v) = series::eval_polylog_series(&p, cfg)? {
                return Ok(if sign < 0 { v.neg() } else { v });
            }
        }
    }
    transport::eval_word_transport(w, path, cfg)
}

/// Evaluates a CMZV expression (atom-wise, memoized; 2πi exact).
pub fn eval_expr(e: &CmzvExpr, cfg: &EvalConfig) -> Result<BigC, NumericError> {
    let ctx = cfg.ctx();
    let mut acc = BigC::zero(&ctx);
    for (m, c) in e.terms() {
        let mut term = eval_cycnum_ctx(c, &ctx);
        for a in m.atoms() {
            let av = eval_atom(a, cfg)?;
            term = term.mul(&av, &ctx);
        }
        acc = acc.add(&term, &ctx);
    }
    Ok(acc)
}

/// Evaluates a single atom.
pub fn eval_atom(a: &Atom, cfg: &EvalConfig) -> Result<BigC, NumericError> {
    let ctx = cfg.ctx();
    match a {
        Atom::TwoPiI => Ok(BigC::new(
            ctx.zero(),
            ctx.mul(&ctx.pi(), &ctx.from_i64(2)),
        )),
        Atom::Cmzv(i) => eval_cmzv(i, cfg),
    }
}

/// Outcome of an identity verification.
#[derive(Clone, Debug)]
pub struct VerifyOutcome {
    pub pass: bool,
    pub residual: f64,
    pub threshold: f64,
}

/// Checks |eval(lhs - rhs)| < 10^(5-digits).
pub fn verify_identity(
    lhs: &CmzvExpr,
    rhs: &CmzvExpr,
    cfg: &EvalConfig,
) -> Result<VerifyOutcome, NumericError> {
    let ctx = cfg.ctx();
    let l = eval_expr(lhs, cfg)?;
    let r = eval_expr(rhs, cfg)?;
    let d = l.sub(&r, &ctx);
    let residual = bigc::big_to_f64(&d.abs(&ctx));
    let threshold = 10f64.powi(5 - cfg.digits as i32);
    Ok(VerifyOutcome {
        pass: residual < threshold,
        residual,
        threshold,
    })
}

/// Numeric residual of an expression against zero, as |value|.
pub fn residual_of(e: &CmzvExpr, cfg: &EvalConfig) -> Result<f64, NumericError> {
    let ctx = cfg.ctx();
    let v = eval_expr(e, cfg)?;
    Ok(bigc::big_to_f64(&v.abs(&ctx)))
}

/// 2πi in a context.
pub fn two_pi_i(ctx: &RCtx) -> BigC {
    BigC::new(ctx.zero(), ctx.mul(&ctx.pi(), &ctx.from_i64(2)))
}

/// Reference value of ζ(s) computed by the transport engine.
pub fn zeta_value(s: u32, cfg: &EvalConfig) -> Result<BigC, NumericError> {
    eval_cmzv(&CmzvIndex::zeta(s), cfg)
}

pub use transport::eval_word_transport;

/// Shared monomial evaluation for relation-row checks.
pub fn eval_monomial(m: &Monomial, cfg: &EvalConfig) -> Result<BigC, NumericError> {
    let ctx = cfg.ctx();
    let mut acc = BigC::one(&ctx);
    for a in m.atoms() {
        acc = acc.mul(&eval_atom(a, cfg)?, &ctx);
    }
    Ok(acc)
}
