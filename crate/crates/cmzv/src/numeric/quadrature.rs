//! Gauss–Legendre quadrature route for word integrals.
//!
//! The outermost integration ∫ F(t)/(t-a₁) dt is done by composite
//! Gauss–Legendre of order 64 on dyadically subdivided segments of the
//! path, with the inner iterated integral F supplied by the transport
//! evaluator. Subdivision doubles until two refinement levels agree.
//! This is the independent cross-route used to validate the series and
//! transport evaluations.

use super::bigc::{BigC, RCtx};
use super::transport::PathSpec;
use super::{EvalConfig, NumericError};
use crate::words::Word;
use astro_float::BigFloat;

const GL_ORDER: usize = 64;

/// Gauss–Legendre nodes/weights on [-1,1] at working precision.
/// Newton iteration on P_n from double-precision seeds.
fn gl_nodes(order: usize, ctx: &RCtx) -> Vec<(BigFloat, BigFloat)> {
    let mut out = Vec::with_capacity(order);
    for k in 0..order {
        // Tricomi initial guess
        let theta = std::f64::consts::PI * (k as f64 + 0.75) / (order as f64 + 0.5);
        let mut x = ctx.from_f64(theta.cos());
        // Newton on P_n(x)
        for _ in 0..64 {
            let (p, dp) = legendre_and_derivative(order, &x, ctx);
            let dx = ctx.div(&p, &dp);
            x = ctx.sub(&x, &dx);
            if ctx.is_small(&dx, ctx.p as i64 - 8) {
                break;
            }
        }
        let (_, dp) = legendre_and_derivative(order, &x, ctx);
        // w = 2 / ((1-x²) P_n'(x)²)
        let one = ctx.one();
        let w = ctx.div(
            &ctx.from_i64(2),
            &ctx.mul(
                &ctx.sub(&one, &ctx.mul(&x, &x)),
                &ctx.mul(&dp, &dp),
            ),
        );
        out.push((x, w));
    }
    out
}

fn legendre_and_derivative(n: usize, x: &BigFloat, ctx: &RCtx) -> (BigFloat, BigFloat) {
    let mut p0 = ctx.one();
    let mut p1 = x.clone();
    for k in 2..=n {
        let kf = ctx.from_i64(k as i64);
        let a = ctx.from_i64((2 * k - 1) as i64);
        let b = ctx.from_i64((k - 1) as i64);
        let t = ctx.sub(
            &ctx.mul(&ctx.mul(&a, x), &p1),
            &ctx.mul(&b, &p0),
        );
        let t = ctx.div(&t, &kf);
        p0 = p1;
        p1 = t;
    }
    // P_n'(x) = n (x P_n - P_{n-1}) / (x² - 1)
    let nf = ctx.from_i64(n as i64);
    let num = ctx.mul(&nf, &ctx.sub(&ctx.mul(x, &p1), &p0));
    let den = ctx.sub(&ctx.mul(x, x), &ctx.one());
    (p1.clone(), ctx.div(&num, &den))
}

/// Evaluates ∫_path ω(a1)…ω(an) with the outer integral by composite GL
/// and the inner (n-1)-fold integral transported to each node.
pub fn eval_word_quadrature(
    w: &Word,
    path: &PathSpec,
    cfg: &EvalConfig,
) -> Result<BigC, NumericError> {
    let n = w.weight();
    if n == 0 {
        return Ok(BigC::one(&cfg.ctx()));
    }
    let ctx = RCtx::with_digits(cfg.digits + cfg.guard_digits);
    let outer_pole = super::eval_cycnum_ctx(
        w.letters()[0]
            .pole()
            .as_finite()
            .ok_or_else(|| NumericError::PathThroughPole("infinity letter".into()))?,
        &ctx,
    );
    let inner_word = Word(w.letters()[1..].to_vec());
    let nodes = gl_nodes(GL_ORDER, &ctx);

    // value of the inner iterated integral from path start to z, computed by
    // truncating the path at z: we transport along the prefix polyline then a
    // straight hop. For GL nodes on segment [p,q] the prefix is fixed.
    let mut total_prev: Option<BigC> = None;
    let mut subdiv = 1usize;
    loop {
        let mut total = BigC::zero(&ctx);
        let m = path.waypoints.len();
        for seg in 1..m {
            let a = super::eval_cycnum_ctx(&path.waypoints[seg - 1], &ctx);
            let b = super::eval_cycnum_ctx(&path.waypoints[seg], &ctx);
            // endpoint shrink on first/last segment to dodge endpoint poles
            let (a, b) = shrink_segment(&a, &b, seg == 1, seg == m - 1, &ctx, cfg);
            for piece in 0..subdiv {
                let t0 = ctx.from_f64(piece as f64 / subdiv as f64);
                let t1 = ctx.from_f64((piece + 1) as f64 / subdiv as f64);
                let pa = lerp(&a, &b, &t0, &ctx);
                let pb = lerp(&a, &b, &t1, &ctx);
                let half = ctx.from_f64(0.5);
                let mid = pa.add(&pb, &ctx).mul_real(&half, &ctx);
                let rad = pb.sub(&pa, &ctx).mul_real(&half, &ctx);
                for (x, wt) in &nodes {
                    let z = mid.add(&rad.mul_real(x, &ctx), &ctx);
                    let fz = inner_value(&inner_word, path, seg, &z, cfg)?;
                    let dz = rad.mul_real(wt, &ctx);
                    let integrand = fz.div(&z.sub(&outer_pole, &ctx), &ctx);
                    total = total.add(&integrand.mul(&dz, &ctx), &ctx);
                }
            }
        }
        if let Some(prev) = &total_prev {
            let diff = total.sub(prev, &ctx);
            if diff.is_small(cfg.target_bits() + 4, &ctx) {
                return Ok(total);
            }
        }
        total_prev = Some(total);
        subdiv *= 2;
        if subdiv > 64 {
            return Err(NumericError::Unconverged(subdiv));
        }
    }
}

fn lerp(a: &BigC, b: &BigC, t: &BigFloat, ctx: &RCtx) -> BigC {
    a.add(&b.sub(a, ctx).mul_real(t, ctx), ctx)
}

fn shrink_segment(
    a: &BigC,
    b: &BigC,
    at_start: bool,
    at_end: bool,
    ctx: &RCtx,
    cfg: &EvalConfig,
) -> (BigC, BigC) {
    // The outer integrand may be log-singular (integrable) at the endpoints;
    // composite GL with dyadic agreement handles it, but we still pull the
    // endpoints in by a tiny amount tied to the target precision to avoid
    // evaluating exactly on a pole.
    let eps = ctx.from_f64(10f64.powi(-2 * cfg.digits as i32 - 8));
    let mut aa = a.clone();
    let mut bb = b.clone();
    if at_start {
        aa = lerp(a, b, &eps, ctx);
    }
    if at_end {
        let one = ctx.one();
        bb = lerp(a, b, &ctx.sub(&one, &eps), ctx);
    }
    (aa, bb)
}

fn inner_value(
    inner: &Word,
    path: &PathSpec,
    seg: usize,
    z: &BigC,
    cfg: &EvalConfig,
) -> Result<BigC, NumericError> {
    if inner.is_empty() {
        return Ok(BigC::one(&cfg.ctx()));
    }
    super::transport::eval_word_to_point(inner, path, seg, z, cfg)
}
