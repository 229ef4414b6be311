//! PSLQ integer-relation detection over arbitrary-precision reals.
//!
//! Standard one-level PSLQ (Ferguson–Bailey) with γ = 1.16. A candidate
//! relation is returned only after its residual is re-checked against the
//! input vector; the algorithm never asserts exactness.

use super::bigc::{big_to_f64, RCtx};
use super::{EvalConfig, NumericError};
use astro_float::BigFloat;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Finds an integer relation Σ m_i v_i ≈ 0 with |m_i| ≤ max_coeff, or None.
///
/// Requires `cfg.digits ≥ 20 + 10·values.len()`.
pub fn pslq(
    values: &[BigFloat],
    cfg: &EvalConfig,
    max_coeff: i64,
) -> Result<Option<Vec<BigInt>>, NumericError> {
    let n = values.len();
    let need = 20 + 10 * n as u32;
    if cfg.digits < need {
        return Err(NumericError::PrecisionTooLow(need));
    }
    if n < 2 {
        return Ok(None);
    }
    let ctx = RCtx::with_digits(cfg.digits + cfg.guard_digits);
    let detection_bits = ((cfg.digits as f64 - 10.0) * std::f64::consts::LOG2_10) as i64;

    // normalize input
    let mut x: Vec<BigFloat> = values.to_vec();
    let mut norm = ctx.zero();
    for v in &x {
        norm = ctx.add(&norm, &ctx.mul(v, v));
    }
    norm = ctx.sqrt(&norm);
    if norm.is_zero() {
        return Ok(None);
    }
    for v in x.iter_mut() {
        *v = ctx.div(v, &norm);
    }

    // partial sums s_k = sqrt(Σ_{j≥k} x_j²)
    let mut s = vec![ctx.zero(); n];
    let mut acc = ctx.zero();
    for k in (0..n).rev() {
        acc = ctx.add(&acc, &ctx.mul(&x[k], &x[k]));
        s[k] = ctx.sqrt(&acc);
    }
    // H matrix (n × n-1)
    let mut h = vec![vec![ctx.zero(); n - 1]; n];
    for i in 0..n {
        for j in 0..n - 1 {
            h[i][j] = if i < j {
                ctx.zero()
            } else if i == j {
                ctx.div(&s[j + 1], &s[j])
            } else {
                // -x_i x_j / (s_j s_{j+1})
                ctx.div(
                    &ctx.mul(&x[i], &x[j]).neg(),
                    &ctx.mul(&s[j], &s[j + 1]),
                )
            };
        }
    }
    // integer matrices A = I, B = I
    let mut b: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect())
        .collect();

    let nint = |v: &BigFloat| -> BigInt {
        let f = big_to_f64(v);
        BigInt::from(f.round() as i64)
    };

    // initial size reduction
    for i in 1..n {
        for j in (0..i).rev() {
            let t = nint(&ctx.div(&h[i][j], &h[j][j]));
            if t.is_zero() {
                continue;
            }
            let tf = ctx.from_bigint(&t);
            for k in 0..=j {
                let d = ctx.mul(&tf, &h[j][k]);
                h[i][k] = ctx.sub(&h[i][k], &d);
            }
            for row in b.iter_mut() {
                let d = &t * &row[i];
                row[j] = &row[j] + d;
            }
            // x update: x_j += t·x_i
            let d = ctx.mul(&tf, &x[i]);
            x[j] = ctx.add(&x[j], &d);
        }
    }

    let gamma = ctx.from_f64(1.16);
    let max_iter = 200 * n * n + 2000;
    for _ in 0..max_iter {
        // detection: any x_i tiny?
        for (i, xi) in x.iter().enumerate() {
            if ctx.is_small(xi, detection_bits) {
                let rel: Vec<BigInt> = (0..n).map(|k| b[k][i].clone()).collect();
                if rel.iter().any(|c| !c.is_zero())
                    && rel.iter().all(|c| c.abs() <= BigInt::from(max_coeff))
                    && residual_ok(values, &rel, &ctx, detection_bits)
                {
                    return Ok(Some(rel));
                }
            }
        }
        // pick pivot r maximizing γ^r |h_rr|
        let mut best = 0usize;
        let mut best_v: Option<BigFloat> = None;
        let mut g = gamma.clone();
        for r in 0..n - 1 {
            let v = ctx.mul(&g, &h[r][r].clone().abs());
            if best_v.as_ref().map_or(true, |bv| {
                matches!(v.cmp(bv), Some(c) if c > 0)
            }) {
                best = r;
                best_v = Some(v);
            }
            g = ctx.mul(&g, &gamma);
        }
        let r = best;
        // swap rows r, r+1 of H; columns r, r+1 of B; entries of x
        h.swap(r, r + 1);
        x.swap(r, r + 1);
        for row in b.iter_mut() {
            row.swap(r, r + 1);
        }
        // restore H to lower-trapezoidal by a Givens rotation on columns r, r+1
        if r < n - 2 {
            let t0 = h[r][r].clone();
            let t1 = h[r][r + 1].clone();
            let d = ctx.sqrt(&ctx.add(&ctx.mul(&t0, &t0), &ctx.mul(&t1, &t1)));
            if !d.is_zero() {
                let c = ctx.div(&t0, &d);
                let sn = ctx.div(&t1, &d);
                for i in r..n {
                    let a0 = h[i][r].clone();
                    let a1 = h[i][r + 1].clone();
                    h[i][r] = ctx.add(&ctx.mul(&c, &a0), &ctx.mul(&sn, &a1));
                    h[i][r + 1] = ctx.sub(&ctx.mul(&c, &a1), &ctx.mul(&sn, &a0));
                }
            }
        }
        // size reduction
        for i in (r.max(1))..n {
            for j in (0..i.min(n - 1)).rev() {
                if h[j][j].is_zero() {
                    continue;
                }
                let t = nint(&ctx.div(&h[i][j], &h[j][j]));
                if t.is_zero() {
                    continue;
                }
                let tf = ctx.from_bigint(&t);
                for k in 0..=j {
                    let d = ctx.mul(&tf, &h[j][k]);
                    h[i][k] = ctx.sub(&h[i][k], &d);
                }
                for row in b.iter_mut() {
                    let d = &t * &row[i];
                    row[j] = &row[j] + d;
                }
                let d = ctx.mul(&tf, &x[i]);
                x[j] = ctx.add(&x[j], &d);
            }
        }
        // bound exceeded?
        let mut too_big = false;
        for row in &b {
            for v in row {
                if v.abs() > BigInt::from(max_coeff) * 1024 {
                    too_big = true;
                }
            }
        }
        if too_big {
            return Ok(None);
        }
    }
    Ok(None)
}

fn residual_ok(values: &[BigFloat], rel: &[BigInt], ctx: &RCtx, bits: i64) -> bool {
    let mut acc = ctx.zero();
    let mut scale = ctx.zero();
    for (v, c) in values.iter().zip(rel.iter()) {
        let cf = ctx.from_bigint(c);
        acc = ctx.add(&acc, &ctx.mul(v, &cf));
        scale = ctx.add(&scale, &ctx.mul(v, v).abs());
    }
    let scale = ctx.sqrt(&scale);
    if scale.is_zero() {
        return false;
    }
    ctx.is_small(&ctx.div(&acc, &scale), bits - 16)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_four_vs_log_two() {
        let cfg = EvalConfig::with_digits(45);
        let ctx = cfg.ctx();
        let values = vec![ctx.ln(&ctx.from_i64(4)), ctx.ln(&ctx.from_i64(2))];
        let rel = pslq(&values, &cfg, 100).unwrap().unwrap();
        // (1, -2) up to overall sign
        let a = &rel[0];
        let b = &rel[1];
        assert_eq!(a * 2, -(b.clone()), "{rel:?}");
    }

    #[test]
    fn zeta2_vs_pi_squared() {
        let cfg = EvalConfig::with_digits(50);
        let ctx = cfg.ctx();
        let pi = ctx.pi();
        let pi2 = ctx.mul(&pi, &pi);
        let zeta2 = ctx.div(&pi2, &ctx.from_i64(6));
        let rel = pslq(&[zeta2, pi2], &cfg, 100).unwrap().unwrap();
        assert_eq!(rel[0].clone(), -(rel[1].clone() * BigInt::from(6)), "{rel:?}");
    }

    #[test]
    fn incommensurate_values_give_none() {
        let cfg = EvalConfig::with_digits(60);
        let ctx = cfg.ctx();
        let values = vec![
            ctx.ln(&ctx.from_i64(2)),
            ctx.pi(),
            ctx.sqrt(&ctx.from_i64(2)),
        ];
        assert!(pslq(&values, &cfg, 40).unwrap().is_none());
    }

    #[test]
    fn precision_gate() {
        let cfg = EvalConfig::with_digits(20);
        let ctx = cfg.ctx();
        let vals = vec![ctx.one(); 4];
        assert!(matches!(
            pslq(&vals, &cfg, 10),
            Err(NumericError::PrecisionTooLow(_))
        ));
    }
}
