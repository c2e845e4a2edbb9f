//! Weierstrass invariants, Laska-Kraus-Connell minimal models, and
//! conductors of semistable curves.

use super::EcurveError;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

#[derive(Debug, Clone)]
pub struct CInvariants {
    pub b2: BigInt,
    pub b4: BigInt,
    pub b6: BigInt,
    pub b8: BigInt,
    pub c4: BigInt,
    pub c6: BigInt,
    pub disc: BigInt,
}

pub fn c_invariants(a: &[BigInt; 5]) -> CInvariants {
    let [a1, a2, a3, a4, a6] = a.clone();
    let b2: BigInt = &a1 * &a1 + &a2 * 4;
    let b4: BigInt = &a4 * 2 + &a1 * &a3;
    let b6: BigInt = &a3 * &a3 + &a6 * 4;
    let b8: BigInt = &a1 * &a1 * &a6 + &a2 * &a6 * 4 - &a1 * &a3 * &a4 + &a2 * &a3 * &a3 - &a4 * &a4;
    let c4: BigInt = &b2 * &b2 - &b4 * 24;
    let c6: BigInt = &b2 * &b2 * &b2 * (-1) + &b2 * &b4 * 36 - &b6 * 216;
    let disc: BigInt = &b2 * &b2 * &b8 * (-1) - &b4 * &b4 * &b4 * 8 - &b6 * &b6 * 27 + &b2 * &b4 * &b6 * 9;
    CInvariants { b2, b4, b6, b8, c4, c6, disc }
}

pub fn discriminant(a: &[BigInt; 5]) -> BigInt {
    c_invariants(a).disc
}

/// Kraus' criterion: (c4, c6) arise from an integral Weierstrass model
/// iff ord_3(c6) != 2 and either c6 = -1 mod 4, or 16 | c4 and
/// c6 = 0 or 8 mod 32.
pub fn kraus_valid(c4: &BigInt, c6: &BigInt) -> bool {
    let three = BigInt::from(3);
    let mut t = c6.clone();
    let mut v3 = 0;
    while (&t % &three).is_zero() {
        t /= &three;
        v3 += 1;
        if v3 > 2 {
            break;
        }
    }
    if v3 == 2 {
        return false;
    }
    let m4 = c6.mod_floor(&BigInt::from(4));
    if m4 == BigInt::from(3) {
        return true;
    }
    let m16 = c4.mod_floor(&BigInt::from(16));
    let m32 = c6.mod_floor(&BigInt::from(32));
    m16.is_zero() && (m32.is_zero() || m32 == BigInt::from(8))
}

/// Divide (c4, c6) by the largest admissible u^4, u^6 with u supported on
/// `prime_candidates`, keeping Kraus validity. Returns (c4', c6', u).
pub fn minimal_c4c6(c4: &BigInt, c6: &BigInt, prime_candidates: &[u64]) -> (BigInt, BigInt, BigInt) {
    let mut c4m = c4.clone();
    let mut c6m = c6.clone();
    let mut u = BigInt::one();
    let mut ps: Vec<u64> = prime_candidates.to_vec();
    ps.sort_unstable();
    ps.dedup();
    for &p in &ps {
        let p4 = BigInt::from(p).pow(4);
        let p6 = BigInt::from(p).pow(6);
        loop {
            if (&c4m % &p4).is_zero() && (&c6m % &p6).is_zero() {
                let n4 = &c4m / &p4;
                let n6 = &c6m / &p6;
                if kraus_valid(&n4, &n6) {
                    c4m = n4;
                    c6m = n6;
                    u *= p;
                    continue;
                }
            }
            break;
        }
    }
    (c4m, c6m, u)
}

/// Reconstruct a reduced integral model [a1,a2,a3,a4,a6] from Kraus-valid
/// invariants (c4, c6), yielding the standard reduced form (a1, a3 in
/// {0,1}, |a2| <= 1). The candidate b2 in (-6, 6] is found by scanning:
/// it must make b4, b6 and the a-invariants integral simultaneously.
pub fn model_from_c4c6(c4: &BigInt, c6: &BigInt) -> [BigInt; 5] {
    debug_assert!(kraus_valid(c4, c6));
    for b2s in -5i64..=6 {
        let b2 = BigInt::from(b2s);
        // a2 = (b2 - a1)/4 with a1 = b2 mod 2 requires b2 = 0 or 1 mod 4
        if !matches!(b2s.rem_euclid(4), 0 | 1) {
            continue;
        }
        let b4_num: BigInt = &b2 * &b2 - c4;
        if !(&b4_num % BigInt::from(24)).is_zero() {
            continue;
        }
        let b4: BigInt = b4_num / 24;
        let b6_num: BigInt = &b2 * &b2 * &b2 * (-1) + &b2 * &b4 * 36 - c6;
        if !(&b6_num % BigInt::from(216)).is_zero() {
            continue;
        }
        let b6: BigInt = b6_num / 216;
        let a1 = b2.mod_floor(&BigInt::from(2));
        let a3 = b6.mod_floor(&BigInt::from(2));
        let a4_num: BigInt = &b4 - &a1 * &a3;
        let a6_num: BigInt = &b6 - &a3 * &a3;
        if !(&a4_num % BigInt::from(2)).is_zero() || !(&a6_num % BigInt::from(4)).is_zero() {
            continue;
        }
        let a2: BigInt = (&b2 - &a1 * &a1) / 4;
        let a4: BigInt = a4_num / 2;
        let a6: BigInt = a6_num / 4;
        let model = [a1, a2, a3, a4, a6];
        let ci = c_invariants(&model);
        if &ci.c4 == c4 && &ci.c6 == c6 {
            return model;
        }
    }
    panic!("no integral model for Kraus-valid (c4, c6) = ({c4}, {c6})");
}

/// Conductor of a semistable curve with minimal invariants (c4, disc):
/// product of the primes dividing disc. Errors out if some p divides both
/// c4 and disc (additive reduction).
pub fn semistable_conductor(
    c4: &BigInt,
    disc: &BigInt,
    disc_primes: &[u64],
) -> Result<u64, EcurveError> {
    let mut n = 1u64;
    for &p in disc_primes {
        let pb = BigInt::from(p);
        if (disc % &pb).is_zero() {
            if (c4 % &pb).is_zero() {
                return Err(EcurveError::Additive(p));
            }
            n *= p;
        }
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn invariants_of_known_curve() {
        // y^2 + xy = x^3 - 3x^2 + 2x, the Frey model for 11^2 + 7 = 2^7
        // (x normalized to -11, y = 2, n = 7): disc must be -2^2 * 7.
        let a = [bi(1), bi(-3), bi(0), bi(2), bi(0)];
        let ci = c_invariants(&a);
        assert_eq!(ci.disc, bi(-28));
        // reduction leaves it minimal and lands on the classical model
        let (c4m, c6m, u) = minimal_c4c6(&ci.c4, &ci.c6, &[2, 3, 5, 7]);
        assert_eq!(u, bi(1));
        let m = model_from_c4c6(&c4m, &c6m);
        assert_eq!(m, [bi(1), bi(0), bi(1), bi(-1), bi(0)]);
        assert_eq!(discriminant(&m), bi(-28));
        assert_eq!(semistable_conductor(&c4m, &bi(-28), &[2, 3, 5, 7, 11]).unwrap(), 14);
    }

    #[test]
    fn reduction_strips_u_twelve() {
        // scale the above minimal model by u = 2: (c4, c6) -> (16 c4, 64 c6)
        let a = [bi(1), bi(0), bi(1), bi(-1), bi(0)];
        let ci = c_invariants(&a);
        let c4s = &ci.c4 * 16;
        let c6s = &ci.c6 * 64;
        let (c4m, c6m, u) = minimal_c4c6(&c4s, &c6s, &[2, 3]);
        assert_eq!(u, bi(2));
        assert_eq!(c4m, ci.c4);
        assert_eq!(c6m, ci.c6);
    }

    #[test]
    fn kraus_conditions() {
        // c6 = -1 mod 4 cases pass
        assert!(kraus_valid(&bi(25), &bi(-253)));
        // ord_3(c6) = 2 fails
        assert!(!kraus_valid(&bi(0), &bi(9)));
        // even case needs 16 | c4 and c6 in {0, 8} mod 32
        assert!(!kraus_valid(&bi(8), &bi(0)));
    }

    #[test]
    fn additive_reduction_detected() {
        // y^2 = x^3 + 5x^2: c4 = 16*25, disc divisible by 5 too
        let a = [bi(0), bi(5), bi(0), bi(0), bi(0)];
        let ci = c_invariants(&a);
        assert!(ci.disc.is_zero()); // actually singular; use a real additive curve
        // y^2 = x^3 + x^2 + 5x: 50a-like? just check the gcd guard fires
        let a = [bi(0), bi(0), bi(0), bi(25), bi(0)];
        let ci = c_invariants(&a);
        assert!(!ci.disc.is_zero());
        assert!(semistable_conductor(&ci.c4, &ci.disc, &[2, 3, 5]).is_err());
    }
}
