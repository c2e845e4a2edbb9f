//! Lucas sequences, rank of apparition, and the odd-y search pipeline.

use crate::arith::{factor_smooth, gcd_u64};
use crate::quadfield::QuadInt;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum LucasError {
    #[error("gamma + delta and gamma * delta must be nonzero coprime integers")]
    NotALucasPair,
    #[error("gamma / delta is a root of unity")]
    DegenerateRatio,
    #[error("no rank of apparition found below m_max = {0}")]
    RankNotFound(u64),
}

/// A Lucas pair (gamma, conj(gamma)) stored through the integer trace
/// P = gamma + delta and norm Q = gamma * delta.
#[derive(Debug, Clone)]
pub struct LucasPair {
    pub gamma: QuadInt,
    pub p: BigInt,
    pub q: BigInt,
}

impl LucasPair {
    pub fn new(gamma: QuadInt) -> Result<Self, LucasError> {
        if gamma.e > 1 {
            return Err(LucasError::NotALucasPair);
        }
        let p: BigInt = if gamma.e == 1 { gamma.a.clone() } else { &gamma.a * 2 };
        let q = gamma
            .norm()
            .as_integer()
            .ok_or(LucasError::NotALucasPair)?;
        if p.is_zero() || q.is_zero() {
            return Err(LucasError::NotALucasPair);
        }
        if p.gcd(&q) != BigInt::one() {
            return Err(LucasError::NotALucasPair);
        }
        // gamma/delta is a root of unity iff P^2 in {Q, 2Q, 3Q, 4Q}
        // (orders 6/3, 4, 6/3, 1) or P = 0 (order 2)
        let p2 = &p * &p;
        for k in 1..=4 {
            if p2 == &q * k {
                return Err(LucasError::DegenerateRatio);
            }
        }
        Ok(LucasPair { gamma, p, q })
    }

    /// Discriminant D = (gamma - delta)^2 = P^2 - 4Q.
    pub fn disc(&self) -> BigInt {
        &self.p * &self.p - &self.q * 4
    }
}

/// L_m by the integer recurrence L_0 = 0, L_1 = 1,
/// L_{m+2} = P L_{m+1} - Q L_m.
pub fn lucas_term(pair: &LucasPair, m: u64) -> BigInt {
    let (mut a, mut b) = (BigInt::zero(), BigInt::one()); // L_0, L_1
    if m == 0 {
        return a;
    }
    for _ in 1..m {
        let next = &pair.p * &b - &pair.q * &a;
        a = b;
        b = next;
    }
    b
}

/// L_m via the closed form (gamma^m - delta^m) / (gamma - delta),
/// evaluated exactly in the quadratic field.
pub fn lucas_term_closed(pair: &LucasPair, m: u64) -> BigInt {
    if m == 0 {
        return BigInt::zero();
    }
    let gm = pair.gamma.pow(m);
    // (gamma^m - delta^m) = 2 * Im(gamma^m) sqrt(-d), likewise for m = 1
    let num = &gm.b; // numerator of Im over 2^gm.e
    let den = &pair.gamma.b;
    // L_m = (num / 2^gm.e) / (den / 2^e1)
    let e1 = pair.gamma.e;
    let mut val: BigInt = num.clone();
    let mut shift = gm.e as i64 - e1 as i64;
    let (q2, r2) = val.div_rem(den);
    assert!(r2.is_zero(), "closed form must divide exactly");
    val = q2;
    while shift > 0 {
        let (q2, r2) = val.div_rem(&BigInt::from(2));
        assert!(r2.is_zero(), "closed form must be integral");
        val = q2;
        shift -= 1;
    }
    while shift < 0 {
        val *= 2;
        shift += 1;
    }
    val
}

fn lucas_mod(pair: &LucasPair, m: u64, ell: u64) -> u64 {
    let p = pair.p.mod_floor(&BigInt::from(ell)).to_u64().unwrap();
    let q = pair.q.mod_floor(&BigInt::from(ell)).to_u64().unwrap();
    let (mut a, mut b) = (0u64, 1 % ell);
    if m == 0 {
        return a;
    }
    for _ in 1..m {
        let next = crate::arith::submod(
            crate::arith::mulmod(p, b, ell),
            crate::arith::mulmod(q, a, ell),
            ell,
        );
        a = b;
        b = next;
    }
    b
}

/// Rank of apparition of ell: the least m > 0 with ell | L_m.
/// Returns Ok(None) when ell divides Q, in which case no term is ever
/// divisible. Candidate ranks are restricted to the divisibility classes
/// of the classical theorem: m = ell when ell | D; divisors of ell - 1
/// or ell + 1 according to the character of D; {2, 3} for ell = 2.
pub fn rank_of_apparition(pair: &LucasPair, ell: u64, m_max: u64) -> Result<Option<u64>, LucasError> {
    let elli = BigInt::from(ell);
    if pair.q.mod_floor(&elli).is_zero() {
        return Ok(None);
    }
    let d = pair.disc();
    let mut candidates: Vec<u64> = if ell == 2 {
        vec![2, 3]
    } else if d.mod_floor(&elli).is_zero() {
        vec![ell]
    } else {
        let dm = d.mod_floor(&elli).to_i128().unwrap();
        let chi = crate::arith::kronecker(dm, ell as i128).unwrap();
        let target = if chi == 1 { ell - 1 } else { ell + 1 };
        divisors(target)
    };
    candidates.sort_unstable();
    for m in candidates {
        if m > m_max {
            break;
        }
        if lucas_mod(pair, m, ell) == 0 {
            return Ok(Some(m));
        }
    }
    Err(LucasError::RankNotFound(m_max))
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out
}

/// The quartic 5u^4 - 10 d u^2 v^2 + d^2 v^4.
pub fn quartic_l5(d: u64, u: i64, v: i64) -> BigInt {
    let (u, v, d) = (BigInt::from(u), BigInt::from(v), BigInt::from(d));
    let u2 = &u * &u;
    let v2 = &v * &v;
    &u2 * &u2 * 5 - &u2 * &v2 * &d * 10 + &v2 * &v2 * &d * &d
}

/// One odd-y solution from the box search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YoddHit {
    pub d: u64,
    pub u: i64,
    pub v: i64,
    pub x: BigInt,
    pub y: BigInt,
    pub n: u64,
}

/// All squarefree products of subsets of {2,3,5,7,11}, including 1.
pub fn squarefree_d_values() -> Vec<u64> {
    let mut out = Vec::new();
    for mask in 0u32..32 {
        let mut d = 1u64;
        for (i, p) in [2u64, 3, 5, 7, 11].iter().enumerate() {
            if mask >> i & 1 == 1 {
                d *= p;
            }
        }
        out.push(d);
    }
    out.sort_unstable();
    out
}

/// Box search for odd-y solutions with exponent 5: coprime (u, v) with
/// |u|, |v| <= bound whose quartic value is +-5^r 11^s, r <= 1, giving
/// x^2 + c^2 d = y^5 with y = u^2 + d v^2 odd. Symmetric sign pairs are
/// canonicalized to u > 0, v > 0 and results are sorted by (d, u, v).
pub fn yodd_search(bound: u32) -> Vec<YoddHit> {
    let bound = bound as i64;
    let mut out: Vec<YoddHit> = Vec::new();
    for d in squarefree_d_values() {
        for u in 1..=bound {
            for v in 1..=bound {
                if gcd_u64(u as u64, d * v as u64) != 1 {
                    continue;
                }
                let val = quartic_l5(d, u, v);
                // value must be +-5^r 11^s with r <= 1
                let Ok(Some((_, exps))) = factor_smooth(&val, &[5, 11]) else { continue };
                if exps[0] > 1 {
                    continue;
                }
                let y = BigInt::from(u * u + (d as i64) * v * v);
                if y.is_even() || y <= BigInt::one() {
                    continue;
                }
                // c = v * L_5 must be an S-unit
                let c: BigInt = &val * v;
                if factor_smooth(&c, &[2, 3, 5, 7, 11]).unwrap().is_none() {
                    continue;
                }
                let gamma = QuadInt::new(d, u, v, 0);
                let g5 = gamma.pow(5);
                let x = g5.a.abs();
                // the defining identity, checked exactly
                let lhs: BigInt = &x * &x + &c * &c * BigInt::from(d);
                if lhs != y.pow(5) {
                    continue;
                }
                if x.gcd(&y) != BigInt::one() {
                    continue;
                }
                out.push(YoddHit { d, u, v, x, y, n: 5 });
            }
        }
    }
    out.sort_by_key(|h| (h.d, h.u, h.v));
    out
}

/// True iff the pair is one of the two 7-defective shapes
/// +-(1 +- sqrt(-7))/2 or +-(1 +- sqrt(-19))/2.
pub fn defective_pair_check(pair: &LucasPair) -> bool {
    let g = &pair.gamma;
    (g.d == 7 || g.d == 19)
        && g.e == 1
        && g.a.magnitude() == BigInt::one().magnitude()
        && g.b.magnitude() == BigInt::one().magnitude()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(d: u64, a: i64, b: i64, e: u32) -> LucasPair {
        LucasPair::new(QuadInt::new(d, a, b, e)).unwrap()
    }

    #[test]
    fn lucas_term_small_sequence() {
        // gamma = 1 + sqrt(-2): P = 2, Q = 3; L = 0,1,2,1,-4,-11,...
        let p = pair(2, 1, 1, 0);
        assert_eq!(p.p, BigInt::from(2));
        assert_eq!(p.q, BigInt::from(3));
        let expect = [0i64, 1, 2, 1, -4, -11];
        for (m, &v) in expect.iter().enumerate() {
            assert_eq!(lucas_term(&p, m as u64), BigInt::from(v), "m = {m}");
        }
        // and the paper identity this encodes: 1^2 + 2*11^2 = 3^5
        assert_eq!(BigInt::from(1 + 2 * 121), BigInt::from(3).pow(5));
    }

    #[test]
    fn closed_form_matches_recurrence() {
        let mut lcg = 99u64;
        let mut next = || {
            lcg = lcg.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((lcg >> 17) % 19) as i64 - 9
        };
        let mut done = 0;
        while done < 100 {
            let d = [1u64, 2, 3, 7, 11, 15, 19][(next().unsigned_abs() % 7) as usize];
            let (a, b) = (next(), next());
            let e = if d % 4 == 3 && (a - b) % 2 == 0 && (next() % 2 == 0) { 1 } else { 0 };
            let Ok(p) = LucasPair::new(QuadInt::new(d, a, b, e)) else { continue };
            done += 1;
            for m in 0..=50 {
                assert_eq!(lucas_term(&p, m), lucas_term_closed(&p, m), "m = {m}");
            }
        }
    }

    #[test]
    fn degenerate_pairs_rejected() {
        // gamma = sqrt(-3): P = 0
        assert!(LucasPair::new(QuadInt::new(3, 0, 1, 0)).is_err());
        // gamma = (1 + sqrt(-3))/2 is a 6th root of unity: P = 1, Q = 1
        assert!(matches!(
            LucasPair::new(QuadInt::new(3, 1, 1, 1)),
            Err(LucasError::DegenerateRatio)
        ));
        // gamma = 1 + i: P = 2, Q = 2 not coprime
        assert!(LucasPair::new(QuadInt::new(1, 1, 1, 0)).is_err());
    }

    #[test]
    fn rank_examples() {
        let p = pair(2, 1, 1, 0);
        // L_5 = -11; D = -8 is a QR mod 11, so rank divides 10
        assert_eq!(rank_of_apparition(&p, 11, 1000).unwrap(), Some(5));
        // ell = 3 divides Q = 3: no rank
        assert_eq!(rank_of_apparition(&p, 3, 1000).unwrap(), None);
        // ell = 2: L_2 = 2
        assert_eq!(rank_of_apparition(&p, 2, 1000).unwrap(), Some(2));
    }

    #[test]
    fn rank_divisibility_law_small() {
        // ell | L_m iff rank | m, for a grid of small pairs
        for a in -6i64..=6 {
            for b in 1i64..=6 {
                for d in [1u64, 2, 3, 5] {
                    let Ok(p) = LucasPair::new(QuadInt::new(d, a, b, 0)) else { continue };
                    for ell in [2u64, 3, 5, 7, 11, 13] {
                        let rank = match rank_of_apparition(&p, ell, 100) {
                            Ok(r) => r,
                            Err(_) => continue,
                        };
                        for m in 1..=60u64 {
                            let div = lucas_mod(&p, m, ell) == 0;
                            match rank {
                                None => assert!(!div, "ell={ell} m={m} P={} Q={}", p.p, p.q),
                                Some(r) => assert_eq!(div, m % r == 0, "ell={ell} m={m} r={r}"),
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn half_integer_parity_law() {
        // for gamma = (u + v sqrt(-d))/2 with u, v odd and Q odd:
        // L_m even iff 3 | m
        let mut lcg = 7u64;
        let mut next = || {
            lcg = lcg.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (((lcg >> 18) % 15) as i64) * 2 - 15 // odd in [-15, 13]
        };
        let mut done = 0;
        while done < 100 {
            let d = [3u64, 11, 19, 35, 43, 51, 59][(next().unsigned_abs() % 7) as usize];
            let (a, b) = (next(), next());
            let Ok(p) = LucasPair::new(QuadInt::new(d, a, b, 1)) else { continue };
            if p.q.is_even() {
                continue;
            }
            done += 1;
            for m in 0..=100u64 {
                let even = lucas_term(&p, m).is_even();
                assert_eq!(even, m % 3 == 0, "P={} Q={} m={m}", p.p, p.q);
            }
        }
    }

    #[test]
    fn primitive_divisor_spot_check() {
        // for prime m >= 11, L_m has a prime divisor not dividing
        // D * L_1 ... L_{m-1}: strip those gcds and check a factor remains
        let mut lcg = 31u64;
        let mut next = || {
            lcg = lcg.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((lcg >> 20) % 13) as i64 - 6
        };
        let mut done = 0;
        while done < 60 {
            let d = [1u64, 2, 3, 5, 7][(next().unsigned_abs() % 5) as usize];
            let (a, b) = (next(), next());
            let Ok(p) = LucasPair::new(QuadInt::new(d, a, b, 0)) else { continue };
            done += 1;
            for m in [11u64, 13] {
                let mut lm = lucas_term(&p, m).abs();
                let mut junk = p.disc().abs();
                for i in 1..m {
                    junk *= lucas_term(&p, i).abs().max(BigInt::one());
                }
                loop {
                    let g = lm.gcd(&junk);
                    if g == BigInt::one() {
                        break;
                    }
                    lm /= g;
                }
                assert!(lm > BigInt::one(), "no primitive divisor: P={} Q={} m={m}", p.p, p.q);
            }
        }
    }

    #[test]
    fn quartic_values() {
        assert_eq!(quartic_l5(2, 1, 1), BigInt::from(-11));
        assert_eq!(quartic_l5(2, -1, 1), BigInt::from(-11));
        assert_eq!(quartic_l5(7, 3, -2), BigInt::from(-1331));
        assert_eq!(quartic_l5(10, 1, 1), BigInt::from(5));
        assert_eq!(quartic_l5(30, 1, 1), BigInt::from(605));
        assert_eq!(BigInt::from(405 - 2520 + 784), BigInt::from(-1331));
    }

    #[test]
    fn yodd_search_box4_finds_the_five_classes() {
        let hits = yodd_search(4);
        let classes: Vec<(u64, i64, i64)> = hits.iter().map(|h| (h.d, h.u, h.v)).collect();
        assert_eq!(classes, vec![(2, 1, 1), (2, 1, 2), (7, 3, 2), (10, 1, 1), (30, 1, 1)]);
        // identities of the five odd-y solutions
        let expect: Vec<(i64, i64)> = vec![(1, 3), (241, 9), (4443, 37), (401, 11), (4201, 31)];
        let mut got: Vec<(BigInt, BigInt)> = hits.iter().map(|h| (h.x.clone(), h.y.clone())).collect();
        got.sort();
        let mut want: Vec<(BigInt, BigInt)> =
            expect.iter().map(|&(x, y)| (BigInt::from(x), BigInt::from(y))).collect();
        want.sort();
        assert_eq!(got, want);
        for h in &hits {
            let c2d = h.y.pow(5) - &h.x * &h.x;
            assert!(factor_smooth(&c2d, &[2, 3, 5, 7, 11]).unwrap().is_some());
        }
    }

    #[test]
    fn yodd_search_box1_subset() {
        let hits = yodd_search(1);
        let classes: Vec<(u64, i64, i64)> = hits.iter().map(|h| (h.d, h.u, h.v)).collect();
        assert_eq!(classes, vec![(2, 1, 1), (10, 1, 1), (30, 1, 1)]);
    }

    #[test]
    fn defective_shapes() {
        assert!(defective_pair_check(&pair(7, 1, 1, 1)));
        assert!(defective_pair_check(&pair(19, 1, -1, 1)));
        assert!(!defective_pair_check(&pair(2, 1, 1, 0)));
    }

    #[test]
    fn class_number_gate_for_the_32_fields() {
        let allowed = [1u32, 2, 4, 8, 12, 32];
        let ds = squarefree_d_values();
        assert_eq!(ds.len(), 32);
        for d in ds {
            let h = crate::quadfield::class_number(d);
            assert!(allowed.contains(&h), "d = {d} has h = {h}");
        }
    }
}
