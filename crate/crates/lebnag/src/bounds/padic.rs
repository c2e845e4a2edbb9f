//! Two-variable q-adic bounds: the per-prime coefficient c(d, q), the
//! aggregate C(d), and the valuation bound on Lambda_1.

use super::interval::{Iv, RealCtx};
use super::BoundsError;
use num_bigint::BigInt;

/// c(d, q): the coefficient in nu_q(Lambda_1) < c(d,q) 1.05^2 log^2(n) log y.
///
/// It packages 24 q / log^4 q * D^4 * log A_2 * (1/2) with D = 2 and the
/// three cases for log A_2: log 2 when d in {7,15,55} and q = 3;
/// (3/2) log 2 when d = 231 and q in {3,5,7}; (1/2) log q otherwise.
pub fn c_coeff(d: u64, q: u64, ctx: &mut RealCtx) -> Result<Iv, BoundsError> {
    if ![3, 5, 7, 11].contains(&q) {
        return Err(BoundsError::Domain(format!("q = {q} not in {{3,5,7,11}}")));
    }
    if ![7, 15, 55, 231].contains(&d) {
        return Err(BoundsError::Domain(format!("d = {d} not in {{7,15,55,231}}")));
    }
    let lq = Iv::from_u64(q, ctx).ln(ctx);
    let l2 = ctx.ln2();
    // base = 384 q / log^4 q  (= 24 q * D^4 with D = 2)
    let base = Iv::from_u64(384 * q, ctx).div(&lq.powi(4, ctx), ctx);
    let half = Iv::from_ratio(1, 2, ctx);
    let log_a2 = if d != 231 && q == 3 {
        l2
    } else if d == 231 && q != 11 {
        l2.mul(&Iv::from_ratio(3, 2, ctx), ctx)
    } else {
        lq.mul(&half, ctx)
    };
    Ok(base.mul(&log_a2, ctx).mul(&half, ctx))
}

/// C(d) = 2 sum_q c(d, q) log q.
pub fn c_total(d: u64, ctx: &mut RealCtx) -> Result<Iv, BoundsError> {
    let mut acc = Iv::from_i64(0, ctx);
    for q in [3u64, 5, 7, 11] {
        let lq = Iv::from_u64(q, ctx).ln(ctx);
        acc = acc.add(&c_coeff(d, q, ctx)?.mul(&lq, ctx), ctx);
    }
    Ok(acc.mul(&Iv::from_i64(2, ctx), ctx))
}

/// The valuation bound nu_q(Lambda_1) < c(d,q) 1.05^2 log^2 n log y,
/// valid once 1.05 log n dominates max{10 log(q)/D, 5} (checked).
pub fn bula_padic(q: u64, d: u64, n: u64, y: &BigInt, ctx: &mut RealCtx) -> Result<Iv, BoundsError> {
    let c = c_coeff(d, q, ctx)?;
    let ln_n = Iv::from_u64(n, ctx).ln(ctx);
    let f105 = Iv::from_ratio(105, 100, ctx);
    let guard = ln_n.mul(&f105, ctx);
    let five_logq = Iv::from_u64(q, ctx).ln(ctx).mul(&Iv::from_i64(5, ctx), ctx);
    let five = Iv::from_i64(5, ctx);
    if !guard.lo_ge(&five_logq) || !guard.lo_ge(&five) {
        return Err(BoundsError::Domain(format!(
            "n = {n} too small for the simplified log b' bound at q = {q}"
        )));
    }
    let ly = Iv::from_bigint(y, ctx).ln(ctx);
    Ok(c.mul(&guard.powi(2, ctx), ctx).mul(&ly, ctx))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> RealCtx {
        RealCtx::new(192)
    }

    #[test]
    fn coefficient_displays() {
        let mut c = ctx();
        // c(7, 3) = 576 log 2 / log^4 3
        let got = c_coeff(7, 3, &mut c).unwrap();
        let l2 = c.ln2();
        let l3 = Iv::from_i64(3, &c).ln(&mut c);
        let want = Iv::from_i64(576, &c).mul(&l2, &c).div(&l3.powi(4, &c), &c);
        assert!((got.to_f64() - want.to_f64()).abs() < 1e-40);
        // c(231, 5) = 288 * 5 log 2 / log^4 5
        let got = c_coeff(231, 5, &mut c).unwrap();
        let l5 = Iv::from_i64(5, &c).ln(&mut c);
        let want = Iv::from_i64(288 * 5, &c).mul(&l2, &c).div(&l5.powi(4, &c), &c);
        assert!((got.to_f64() - want.to_f64()).abs() < 1e-40);
        // c(7, 11) = 96 * 11 / log^3 11
        let got = c_coeff(7, 11, &mut c).unwrap();
        let l11 = Iv::from_i64(11, &c).ln(&mut c);
        let want = Iv::from_i64(96 * 11, &c).div(&l11.powi(3, &c), &c);
        assert!((got.to_f64() - want.to_f64()).abs() < 1e-40);
    }

    #[test]
    fn aggregate_intervals_bracket_published_constants() {
        let mut c = ctx();
        let c7 = c_total(7, &mut c).unwrap();
        assert!(c7.lo_f64() > 1695.0 && c7.hi_f64() < 1696.0, "C(7) = {}", c7.to_f64());
        let c15 = c_total(15, &mut c).unwrap();
        let c55 = c_total(55, &mut c).unwrap();
        assert!((c15.to_f64() - c7.to_f64()).abs() < 1e-30);
        assert!((c55.to_f64() - c7.to_f64()).abs() < 1e-30);
        let c231 = c_total(231, &mut c).unwrap();
        assert!(c231.lo_f64() > 2128.0 && c231.hi_f64() < 2129.0, "C(231) = {}", c231.to_f64());
    }

    #[test]
    fn valuation_bound_scales() {
        let mut c = ctx();
        let y = BigInt::from(1_000_000_007u64);
        let b = bula_padic(3, 7, 600_000_000, &y, &mut c).unwrap();
        // c(7,3) = 304.6..., (1.05 log n)^2 = 447.5..., log y = 20.7
        assert!(b.lo_f64() > 2.0e6 && b.hi_f64() < 4.0e6);
        // too-small n is rejected rather than silently wrong
        assert!(bula_padic(11, 7, 20, &y, &mut c).is_err());
    }
}
