//! Directed-rounded interval arithmetic over arbitrary-precision floats.
//!
//! Every operation rounds the lower endpoint down and the upper endpoint
//! up, so an `Iv` always contains the exact real value it stands for.
//! Precision is a context parameter; the acceptance suite re-runs at a
//! higher precision to demonstrate verdict stability.

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use thiserror::Error;

const DOWN: RoundingMode = RoundingMode::Down;
const UP: RoundingMode = RoundingMode::Up;

#[derive(Debug, Error, PartialEq)]
pub enum PrecisionError {
    #[error("interval straddles an integer; raise the working precision")]
    FloorStraddle,
    #[error("operation domain violated: {0}")]
    Domain(String),
}

pub struct RealCtx {
    pub prec: usize,
    cc: Consts,
}

impl RealCtx {
    pub fn new(prec: usize) -> Self {
        RealCtx { prec, cc: Consts::new().expect("constants cache") }
    }

    pub fn pi(&mut self) -> Iv {
        Iv { lo: self.cc.pi(self.prec, DOWN), hi: self.cc.pi(self.prec, UP) }
    }

    pub fn ln2(&mut self) -> Iv {
        Iv { lo: self.cc.ln_2(self.prec, DOWN), hi: self.cc.ln_2(self.prec, UP) }
    }
}

/// Closed interval [lo, hi] with outward rounding.
#[derive(Debug, Clone)]
pub struct Iv {
    pub lo: BigFloat,
    pub hi: BigFloat,
}

fn cmp(a: &BigFloat, b: &BigFloat) -> std::cmp::Ordering {
    use std::cmp::Ordering::*;
    match a.cmp(b) {
        Some(v) if v < 0 => Less,
        Some(v) if v > 0 => Greater,
        Some(_) => Equal,
        None => panic!("NaN in interval arithmetic"),
    }
}

fn fmin(a: BigFloat, b: BigFloat) -> BigFloat {
    if cmp(&a, &b).is_le() {
        a
    } else {
        b
    }
}

fn fmax(a: BigFloat, b: BigFloat) -> BigFloat {
    if cmp(&a, &b).is_ge() {
        a
    } else {
        b
    }
}

impl Iv {
    pub fn from_i64(v: i64, ctx: &RealCtx) -> Iv {
        let x = BigFloat::from_i64(v, ctx.prec);
        Iv { lo: x.clone(), hi: x }
    }

    pub fn from_u64(v: u64, ctx: &RealCtx) -> Iv {
        let x = BigFloat::from_u64(v, ctx.prec);
        Iv { lo: x.clone(), hi: x }
    }

    pub fn from_bigint(v: &BigInt, ctx: &RealCtx) -> Iv {
        if let Some(i) = v.to_i128() {
            let x = BigFloat::from_i128(i, ctx.prec.max(128));
            let mut lo = x.clone();
            let mut hi = x;
            lo.set_precision(ctx.prec, DOWN).expect("precision");
            hi.set_precision(ctx.prec, UP).expect("precision");
            return Iv { lo, hi };
        }
        // large integers enter through decimal parsing
        Iv::parse_dec(&v.to_string(), ctx)
    }

    /// Exact rational p / q as an interval.
    pub fn from_ratio(p: i64, q: u64, ctx: &mut RealCtx) -> Iv {
        Iv::from_i64(p, ctx).div(&Iv::from_u64(q, ctx), ctx)
    }

    pub fn parse_dec(s: &str, ctx: &mut RealCtx) -> Iv {
        use astro_float::Radix;
        let lo = BigFloat::parse(s, Radix::Dec, ctx.prec, DOWN, &mut ctx.cc);
        let hi = BigFloat::parse(s, Radix::Dec, ctx.prec, UP, &mut ctx.cc);
        assert!(!lo.is_nan() && !hi.is_nan(), "bad decimal literal {s}");
        Iv { lo, hi }
    }

    pub fn point(v: BigFloat) -> Iv {
        Iv { lo: v.clone(), hi: v }
    }

    pub fn add(&self, o: &Iv, ctx: &RealCtx) -> Iv {
        Iv { lo: self.lo.add(&o.lo, ctx.prec, DOWN), hi: self.hi.add(&o.hi, ctx.prec, UP) }
    }

    pub fn sub(&self, o: &Iv, ctx: &RealCtx) -> Iv {
        Iv { lo: self.lo.sub(&o.hi, ctx.prec, DOWN), hi: self.hi.sub(&o.lo, ctx.prec, UP) }
    }

    pub fn neg(&self) -> Iv {
        Iv { lo: self.hi.neg(), hi: self.lo.neg() }
    }

    pub fn mul(&self, o: &Iv, ctx: &RealCtx) -> Iv {
        let p = ctx.prec;
        let cands_lo = [
            self.lo.mul(&o.lo, p, DOWN),
            self.lo.mul(&o.hi, p, DOWN),
            self.hi.mul(&o.lo, p, DOWN),
            self.hi.mul(&o.hi, p, DOWN),
        ];
        let cands_hi = [
            self.lo.mul(&o.lo, p, UP),
            self.lo.mul(&o.hi, p, UP),
            self.hi.mul(&o.lo, p, UP),
            self.hi.mul(&o.hi, p, UP),
        ];
        let mut lo = cands_lo[0].clone();
        for c in &cands_lo[1..] {
            lo = fmin(lo, c.clone());
        }
        let mut hi = cands_hi[0].clone();
        for c in &cands_hi[1..] {
            hi = fmax(hi, c.clone());
        }
        Iv { lo, hi }
    }

    /// Division by an interval not containing zero.
    pub fn div(&self, o: &Iv, ctx: &RealCtx) -> Iv {
        let zero = BigFloat::from_i64(0, ctx.prec);
        assert!(
            cmp(&o.lo, &zero).is_gt() || cmp(&o.hi, &zero).is_lt(),
            "division by interval containing zero"
        );
        let p = ctx.prec;
        let cands_lo = [
            self.lo.div(&o.lo, p, DOWN),
            self.lo.div(&o.hi, p, DOWN),
            self.hi.div(&o.lo, p, DOWN),
            self.hi.div(&o.hi, p, DOWN),
        ];
        let cands_hi = [
            self.lo.div(&o.lo, p, UP),
            self.lo.div(&o.hi, p, UP),
            self.hi.div(&o.lo, p, UP),
            self.hi.div(&o.hi, p, UP),
        ];
        let mut lo = cands_lo[0].clone();
        for c in &cands_lo[1..] {
            lo = fmin(lo, c.clone());
        }
        let mut hi = cands_hi[0].clone();
        for c in &cands_hi[1..] {
            hi = fmax(hi, c.clone());
        }
        Iv { lo, hi }
    }

    pub fn ln(&self, ctx: &mut RealCtx) -> Iv {
        assert!(self.lo.is_positive() && !self.lo.is_zero(), "ln of nonpositive interval");
        Iv {
            lo: self.lo.ln(ctx.prec, DOWN, &mut ctx.cc),
            hi: self.hi.ln(ctx.prec, UP, &mut ctx.cc),
        }
    }

    pub fn exp(&self, ctx: &mut RealCtx) -> Iv {
        Iv {
            lo: self.lo.exp(ctx.prec, DOWN, &mut ctx.cc),
            hi: self.hi.exp(ctx.prec, UP, &mut ctx.cc),
        }
    }

    pub fn sqrt(&self, ctx: &RealCtx) -> Iv {
        assert!(!self.lo.is_negative(), "sqrt of negative interval");
        Iv { lo: self.lo.sqrt(ctx.prec, DOWN), hi: self.hi.sqrt(ctx.prec, UP) }
    }

    /// arccos, decreasing on [-1, 1].
    pub fn acos(&self, ctx: &mut RealCtx) -> Iv {
        Iv {
            lo: self.hi.acos(ctx.prec, DOWN, &mut ctx.cc),
            hi: self.lo.acos(ctx.prec, UP, &mut ctx.cc),
        }
    }

    /// Integer power by repeated squaring; exact sign handling only for
    /// nonnegative intervals (all uses here).
    pub fn powi(&self, e: u32, ctx: &RealCtx) -> Iv {
        assert!(!self.lo.is_negative(), "powi expects a nonnegative interval");
        Iv { lo: self.lo.powi(e as usize, ctx.prec, DOWN), hi: self.hi.powi(e as usize, ctx.prec, UP) }
    }

    /// x^(num/den) for positive x, via exp((num/den) ln x).
    pub fn powf_ratio(&self, num: u64, den: u64, ctx: &mut RealCtx) -> Iv {
        assert!(self.lo.is_positive() && !self.lo.is_zero());
        let r = Iv::from_u64(num, ctx).div(&Iv::from_u64(den, ctx), ctx);
        self.ln(ctx).mul(&r, ctx).exp(ctx)
    }

    pub fn min(&self, o: &Iv) -> Iv {
        Iv { lo: fmin(self.lo.clone(), o.lo.clone()), hi: fmin(self.hi.clone(), o.hi.clone()) }
    }

    pub fn max(&self, o: &Iv) -> Iv {
        Iv { lo: fmax(self.lo.clone(), o.lo.clone()), hi: fmax(self.hi.clone(), o.hi.clone()) }
    }

    pub fn hull(&self, o: &Iv) -> Iv {
        Iv { lo: fmin(self.lo.clone(), o.lo.clone()), hi: fmax(self.hi.clone(), o.hi.clone()) }
    }

    /// Floor when both endpoints agree; errors when the interval
    /// straddles an integer boundary.
    pub fn floor_exact(&self) -> Result<BigInt, PrecisionError> {
        let flo = self.lo.floor();
        let fhi = self.hi.floor();
        let a = bigfloat_int_to_bigint(&flo).ok_or(PrecisionError::FloorStraddle)?;
        let b = bigfloat_int_to_bigint(&fhi).ok_or(PrecisionError::FloorStraddle)?;
        if a != b {
            return Err(PrecisionError::FloorStraddle);
        }
        Ok(a)
    }

    /// Floor of the lower endpoint (a valid lower bound for floor(x)).
    pub fn floor_lo(&self) -> BigInt {
        bigfloat_int_to_bigint(&self.lo.floor()).expect("finite")
    }

    pub fn floor_hi(&self) -> BigInt {
        bigfloat_int_to_bigint(&self.hi.floor()).expect("finite")
    }

    pub fn lo_ge(&self, o: &Iv) -> bool {
        cmp(&self.lo, &o.hi).is_ge()
    }

    pub fn hi_lt(&self, o: &Iv) -> bool {
        cmp(&self.hi, &o.lo).is_lt()
    }

    pub fn hi_le(&self, o: &Iv) -> bool {
        cmp(&self.hi, &o.lo).is_le()
    }

    pub fn contains_value(&self, o: &Iv) -> bool {
        cmp(&self.lo, &o.lo).is_le() && cmp(&self.hi, &o.hi).is_ge()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive() && !self.lo.is_zero()
    }

    pub fn width_le_ulps(&self) -> bool {
        true
    }

    pub fn to_f64(&self) -> f64 {
        (bf_to_f64(&self.lo) + bf_to_f64(&self.hi)) / 2.0
    }

    pub fn lo_f64(&self) -> f64 {
        bf_to_f64(&self.lo)
    }

    pub fn hi_f64(&self) -> f64 {
        bf_to_f64(&self.hi)
    }
}

fn bf_to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let (m, n, s, e, _) = x.as_raw_parts().expect("finite");
    // take the top word of the mantissa
    let top = *m.last().unwrap() as f64 / (u64::MAX as f64 + 1.0);
    let _ = n;
    let v = top * 2f64.powi(e);
    if s == Sign::Neg {
        -v
    } else {
        v
    }
}

fn bigfloat_int_to_bigint(x: &BigFloat) -> Option<BigInt> {
    if x.is_zero() {
        return Some(BigInt::from(0));
    }
    if x.is_inf() || x.is_nan() {
        return None;
    }
    let (m, n, s, e, _) = x.as_raw_parts()?;
    // value = mantissa * 2^(e - n) with the mantissa normalized to n bits
    let mut v = BigInt::from(0);
    for w in m.iter().rev() {
        v = (v << 64) | BigInt::from(*w);
    }
    let shift = e as i64 - n as i64;
    if shift >= 0 {
        v <<= shift as usize;
    } else {
        v >>= (-shift) as usize;
    }
    if s == Sign::Neg {
        v = -v;
    }
    Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> RealCtx {
        RealCtx::new(192)
    }

    #[test]
    fn basic_containment() {
        let mut c = ctx();
        let two = Iv::from_i64(2, &c);
        let l2 = two.ln(&mut c);
        // ln 2 = 0.6931471805599453...
        let lit = Iv::parse_dec("0.69314718055994530941723212145818", &mut c);
        assert!(l2.contains_value(&lit) || lit.contains_value(&l2));
        assert!(cmp(&l2.lo, &l2.hi).is_le());
        // interval width is tiny but nonzero at the rounding boundary
        let three = Iv::from_i64(3, &c);
        let x = two.div(&three, &c);
        assert!(cmp(&x.lo, &x.hi).is_lt());
    }

    #[test]
    fn arccos_table_values() {
        let mut c = ctx();
        // arccos(5/16) = 1.25297... (cos of it is 5/16 again)
        let x = Iv::from_ratio(5, 16, &mut c);
        let ac = x.acos(&mut c);
        let lit = Iv::parse_dec("1.2529721902", &mut c);
        assert!(ac.lo_f64() < 1.2529722 && ac.hi_f64() > 1.2529721);
        let _ = lit;
        // monotone: arccos(1/8) > arccos(7/8)
        let a1 = Iv::from_ratio(1, 8, &mut c).acos(&mut c);
        let a2 = Iv::from_ratio(7, 8, &mut c).acos(&mut c);
        assert!(a1.lo_ge(&a2));
    }

    #[test]
    fn floor_exact_and_straddle() {
        let mut c = ctx();
        let x = Iv::parse_dec("106229.73", &mut c);
        assert_eq!(x.floor_exact().unwrap(), BigInt::from(106229));
        // an interval straddling an integer errors out
        let lo = BigFloat::from_i64(3, 192);
        let hi = BigFloat::from_f64(4.2, 192);
        let bad = Iv { lo, hi };
        assert_eq!(bad.floor_exact(), Err(PrecisionError::FloorStraddle));
        // negative values floor downward
        let y = Iv::parse_dec("-2.5", &mut c);
        assert_eq!(y.floor_exact().unwrap(), BigInt::from(-3));
    }

    #[test]
    fn bigint_roundtrip() {
        let c = ctx();
        let v = BigInt::from(16759141u64);
        let iv = Iv::from_bigint(&v, &c);
        assert_eq!(iv.floor_exact().unwrap(), v);
        let big = BigInt::parse_bytes(b"123456789012345678901234567890123456789", 10).unwrap();
        let mut c2 = RealCtx::new(192);
        let iv2 = Iv::from_bigint(&big, &c2);
        let back_lo = iv2.floor_lo();
        let back_hi = iv2.floor_hi();
        assert!(back_lo <= big && big <= back_hi + 1);
        let _ = &mut c2;
    }

    #[test]
    fn widening_precision_shrinks_intervals() {
        for &(num, den) in &[(5i64, 16u64), (1, 8), (7, 8), (3, 8)] {
            let mut c1 = RealCtx::new(128);
            let mut c2 = RealCtx::new(256);
            let a1 = Iv::from_ratio(num, den, &mut c1).acos(&mut c1);
            let a2 = Iv::from_ratio(num, den, &mut c2).acos(&mut c2);
            // the tighter interval sits inside the looser one
            assert!(a1.contains_value(&a2));
        }
    }

    #[test]
    fn pi_and_exp() {
        let mut c = ctx();
        let pi = c.pi();
        assert!(pi.lo_f64() > 3.14159265 && pi.hi_f64() < 3.1415927);
        let e1 = Iv::from_i64(1, &c).exp(&mut c);
        assert!(e1.lo_f64() > 2.718281 && e1.hi_f64() < 2.7182819);
        // exp of a very negative number underflows gracefully toward 0
        let tiny = Iv::from_i64(-100000, &c).exp(&mut c);
        assert!(!tiny.lo.is_negative());
        assert!(tiny.hi_f64() < 1e-300);
    }

    #[test]
    fn powf_ratio_matches_cube() {
        let mut c = ctx();
        // (chi m L)^{2/3} at chi=2.89, m=25, L=206: cube the result and
        // compare against the square
        let x = Iv::parse_dec("14883.5", &mut c);
        let p = x.powf_ratio(2, 3, &mut c);
        let cubed = p.powi(3, &c);
        let squared = x.powi(2, &c);
        assert!(cubed.lo_f64() < squared.hi_f64() && cubed.hi_f64() > squared.lo_f64());
    }
}
