//! Heights of quadratic numbers and the elementary y / lambda bounds.

use super::interval::{Iv, RealCtx};
use super::BoundsError;
use crate::quadfield::QuadInt;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Absolute logarithmic height of (a + b sqrt(-d)) / 2^e via the minimal
/// polynomial (2^{2e}) X^2 - (2^{e+1} a) X + (a^2 + d b^2), made primitive.
pub fn log_height(alpha: &QuadInt, ctx: &mut RealCtx) -> Result<Iv, BoundsError> {
    if alpha.is_zero() {
        return Err(BoundsError::Domain("height of zero".into()));
    }
    if alpha.b.is_zero() {
        // rational a / 2^e: h = log max(|num|, den) after reduction
        let mut num = alpha.a.abs();
        let mut e = alpha.e;
        while e > 0 && num.is_even() {
            num /= 2;
            e -= 1;
        }
        let den = BigInt::one() << (e as usize);
        let m = num.max(den);
        return Ok(Iv::from_bigint(&m, ctx).ln(ctx));
    }
    let two = BigInt::from(2);
    let c0 = two.pow(2 * alpha.e);
    let c1: BigInt = -(&alpha.a) * two.pow(alpha.e + 1);
    let c2: BigInt = &alpha.a * &alpha.a + &alpha.b * &alpha.b * BigInt::from(alpha.d);
    let g = c0.gcd(&c1).gcd(&c2);
    let a0: BigInt = &c0 / &g;
    // both conjugates have |alpha| = sqrt(norm); norm = c2/c0
    let norm_num = Iv::from_bigint(&c2, ctx);
    let norm_den = Iv::from_bigint(&c0, ctx);
    let abs2 = norm_num.div(&norm_den, ctx);
    let one = Iv::from_i64(1, ctx);
    let m2 = abs2.max(&one);
    // h = (1/2) log a0 + log max(1, |alpha|) = (1/2)(log a0 + log m2)
    let la0 = Iv::from_bigint(&a0, ctx).ln(ctx);
    let half = Iv::from_ratio(1, 2, ctx);
    Ok(la0.add(&m2.ln(ctx), ctx).mul(&half, ctx))
}

/// y > 4n - 4 sqrt(2n) + 2 for n >= 17 (even y with an odd prime factor).
pub fn y_lower_bound(n: u64, ctx: &mut RealCtx) -> Result<Iv, BoundsError> {
    if n < 17 {
        return Err(BoundsError::Domain(format!("y bound needs n >= 17, got {n}")));
    }
    let nn = Iv::from_u64(n, ctx);
    let four = Iv::from_i64(4, ctx);
    let two = Iv::from_i64(2, ctx);
    let s = nn.mul(&two, ctx).sqrt(ctx);
    Ok(nn.mul(&four, ctx).sub(&s.mul(&four, ctx), ctx).add(&two, ctx))
}

/// log |Lambda| < 0.75 + log c + (1/2) log d - (n/2) log y, valid under
/// y^n > 100 c^2 d (checked exactly).
pub fn lambda_upper(
    c: &BigInt,
    d: u64,
    n: u64,
    y: &BigInt,
    ctx: &mut RealCtx,
) -> Result<Iv, BoundsError> {
    let lhs = y.pow(n as u32);
    let rhs: BigInt = c * c * BigInt::from(100u64 * d);
    if lhs <= rhs {
        return Err(BoundsError::SmallnessHypothesis);
    }
    let c34 = Iv::from_ratio(3, 4, ctx);
    let lc = Iv::from_bigint(c, ctx).ln(ctx);
    let ld = Iv::from_u64(d, ctx).ln(ctx).mul(&Iv::from_ratio(1, 2, ctx), ctx);
    let ly = Iv::from_bigint(y, ctx).ln(ctx);
    let half_n = Iv::from_u64(n, ctx).mul(&Iv::from_ratio(1, 2, ctx), ctx);
    Ok(c34.add(&lc, ctx).add(&ld, ctx).sub(&half_n.mul(&ly, ctx), ctx))
}
