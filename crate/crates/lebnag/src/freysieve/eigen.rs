//! Eigenvalue congruence bounds: the integer C_{f,ell} whose nonvanishing
//! for some ell < 500 bounds the exponents n compatible with a newform f,
//! and the per-pair gcd that decides whether (f, d) stays in the game.

use super::SieveError;
use crate::arith::kronecker;
use crate::ecurve::{a_ell, CurveRecord};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

fn isqrt_floor(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    while r * r > n {
        r -= 1;
    }
    r
}

/// The trace set T_ell(f): even (or 0 mod 4) integers in the Hasse
/// interval, or empty when ell | d.
fn trace_set(ell: u64, d: u64) -> Vec<i64> {
    if d % ell == 0 {
        return vec![];
    }
    let half = isqrt_floor(4 * ell) as i64;
    let step = if kronecker(-(d as i128), ell as i128).unwrap() == 1 { 4 } else { 2 };
    let mut out = Vec::new();
    let mut a = ell as i64 + 1; // a = ell + 1 mod step means ell + 1 - a = 0 mod step
    while a > half {
        a -= step;
    }
    while a >= -half {
        out.push(a);
        a -= step;
    }
    out.reverse();
    out
}

/// Evaluate a monic integer polynomial at an integer point.
fn poly_eval(coeffs: &[BigInt], at: i64) -> BigInt {
    let x = BigInt::from(at);
    let mut acc = BigInt::zero();
    for c in coeffs.iter().rev() {
        acc = acc * &x + c;
    }
    acc
}

/// |C_{f,ell}| as a rational integer. For a rational newform (an elliptic
/// curve record) this is |C'_{f,ell} * prod_{a in T_ell} (a - c_ell)|
/// with C' = (ell+1)^2 - c_ell^2. For an irrational eigenform the record
/// carries the characteristic polynomial of c_ell and the norm is taken:
/// Norm(a - c_ell) = +-charpoly(a), Norm((ell+1)^2 - c_ell^2) =
/// +-charpoly(ell+1) * charpoly(-(ell+1)), and C' picks up a factor
/// ell^deg.
pub fn eigen_bound(f: &CurveRecord, d: u64, ell: u64) -> Result<BigInt, SieveError> {
    if ell == 2 || f.conductor % ell == 0 {
        return Err(SieveError::Precondition(format!(
            "ell = {ell} must be an odd prime away from the level"
        )));
    }
    let tset = trace_set(ell, d);
    if let Some(poly) = f.charpoly.get(&ell) {
        let deg = (poly.len() - 1) as u32;
        let cprime: BigInt = BigInt::from(ell).pow(deg)
            * poly_eval(poly, ell as i64 + 1).abs()
            * poly_eval(poly, -(ell as i64 + 1)).abs();
        let mut c = cprime;
        for a in tset {
            c *= poly_eval(poly, a).abs();
        }
        return Ok(c);
    }
    let ce = a_ell(f, ell).map_err(SieveError::Curve)?;
    let lp1 = BigInt::from(ell as i64 + 1);
    let ceb = BigInt::from(ce);
    let mut c: BigInt = (&lp1 * &lp1 - &ceb * &ceb).abs();
    for a in tset {
        c *= (BigInt::from(a) - &ceb).abs();
    }
    Ok(c)
}

/// gcd over odd primes ell < ell_max away from the level of |C_{f,ell}|;
/// zero exactly when every C_{f,ell} vanishes. Any n >= 13 compatible
/// with the pair (f, d) must divide the result (when nonzero).
pub fn exponent_bound_b(f: &CurveRecord, d: u64, ell_max: u64) -> Result<BigInt, SieveError> {
    let mut g = BigInt::zero();
    let mut ell = 3u64;
    while ell < ell_max {
        if crate::arith::is_prime(ell) && f.conductor % ell != 0 {
            let c = eigen_bound(f, d, ell)?;
            g = g.gcd(&c);
            if g.is_one() {
                break; // cannot shrink further
            }
        }
        ell += 2;
    }
    Ok(g)
}
