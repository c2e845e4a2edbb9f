//! The symplectic two-prime criterion: when two curves have isomorphic
//! mod-n representations and q1, q2 are multiplicative for both, the
//! ratio of the products of discriminant valuations is a square mod n.

use super::{ExponentVector, SieveError};
use crate::arith::{invmod, mulmod, powmod};
use crate::ecurve::CurveRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HkVerdict {
    Eliminated,
    Inconclusive,
}

/// ord_q(Delta_F) mod n from a sieve survivor vector: -12 at q = 2,
/// 2 beta_q + ord_q(d) at the odd sieve primes.
pub fn ord_disc_frey_mod(beta: &ExponentVector, d: u64, n: u64, q: u64) -> u64 {
    match q {
        2 => (n - 12 % n) % n,
        3 | 5 | 7 | 11 => {
            let i = [3u64, 5, 7, 11].iter().position(|&p| p == q).unwrap();
            (2 * beta[i] + u64::from(d % q == 0)) % n
        }
        _ => unreachable!("sieve primes only"),
    }
}

fn is_square_mod(x: u64, n: u64) -> bool {
    // n odd prime
    x % n == 0 || powmod(x, (n - 1) / 2, n) == 1
}

/// Eliminated iff ord_{q1}(D1) ord_{q2}(D1) / (ord_{q1}(D2) ord_{q2}(D2))
/// is a nonsquare mod n. The F-side residues come from the survivor
/// vector; the E-side from the record's minimal discriminant.
pub fn hk_test(
    ord_f: (u64, u64),
    e: &CurveRecord,
    n: u64,
    q1: u64,
    q2: u64,
) -> Result<HkVerdict, SieveError> {
    let pre = |m: String| Err(SieveError::Precondition(m));
    if q1 == q2 || q1 == n || q2 == n {
        return pre(format!("q1 = {q1}, q2 = {q2} must be distinct primes != n"));
    }
    for q in [q1, q2] {
        if !e.has_multiplicative_reduction(q) {
            return pre(format!("{} is not multiplicative at {q}", e.label));
        }
    }
    let oe1 = e.ord_disc(q1) as u64 % n;
    let oe2 = e.ord_disc(q2) as u64 % n;
    let (of1, of2) = (ord_f.0 % n, ord_f.1 % n);
    if of1 == 0 || of2 == 0 || oe1 == 0 || oe2 == 0 {
        return pre("discriminant valuation vanishes mod n".into());
    }
    let num = mulmod(of1, of2, n);
    let den = mulmod(oe1, oe2, n);
    let ratio = mulmod(num, invmod(den, n), n);
    if is_square_mod(ratio, n) {
        Ok(HkVerdict::Inconclusive)
    } else {
        Ok(HkVerdict::Eliminated)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ecurve::ingest_curves_str;

    #[test]
    fn ratio_builder_values() {
        // ord_2(Delta_F) = -12 = 1 mod 13
        assert_eq!(ord_disc_frey_mod(&[10, 5, 22, 8], 231, 13, 2), 1);
        // ord_3 = 2*10 + 1 = 21 = 8 mod 13
        assert_eq!(ord_disc_frey_mod(&[10, 5, 22, 8], 231, 13, 3), 8);
        // the n = 13 solution vector at d = 15: ord_3 = 2*1 + 1 = 3
        assert_eq!(ord_disc_frey_mod(&[1, 0, 1, 1], 15, 13, 3), 3);
    }

    #[test]
    fn symmetric_under_swap() {
        // swapping the two curves inverts the ratio; square iff square
        for x in 1..13u64 {
            let inv = invmod(x, 13);
            assert_eq!(is_square_mod(x, 13), is_square_mod(inv, 13));
        }
    }

    #[test]
    fn eliminates_nonsquare_ratio() {
        // a stand-in record with minimal discriminant 2^4 3^12 5^3 7 11
        // (the published one for the fourth sieve survivor); ratio
        // (1*8)/(4*12) = 11 mod 13 is a nonsquare
        let line = "e1 2310 [0,-1,0,-4080400,3152160000] 1 [[2,4],[3,12],[5,3],[7,1],[11,1]]";
        // the model above is synthetic; bypass model validation by
        // constructing the record directly
        let mut rec = ingest_curves_str(
            "2310o1 2310 [1,-2036,0,1048576,0] -1 [[2,40],[3,3],[5,1],[7,2],[11,2]]",
        )
        .unwrap()
        .remove(0);
        let _ = line;
        rec.disc_factors = vec![(2, 4), (3, 12), (5, 3), (7, 1), (11, 1)];
        rec.disc_sign = 1;
        let ordf = (
            ord_disc_frey_mod(&[10, 5, 22, 8], 231, 13, 2),
            ord_disc_frey_mod(&[10, 5, 22, 8], 231, 13, 3),
        );
        assert_eq!(ordf, (1, 8));
        assert_eq!(hk_test(ordf, &rec, 13, 2, 3).unwrap(), HkVerdict::Eliminated);
        // ratio 1 is inconclusive: use the curve's own valuations
        let ord_same = (rec.ord_disc(2) as u64, rec.ord_disc(3) as u64);
        assert_eq!(hk_test(ord_same, &rec, 13, 2, 3).unwrap(), HkVerdict::Inconclusive);
    }

    #[test]
    fn precondition_failures() {
        let rec = ingest_curves_str(
            "2310o1 2310 [1,-2036,0,1048576,0] -1 [[2,40],[3,3],[5,1],[7,2],[11,2]]",
        )
        .unwrap()
        .remove(0);
        // q = 13 is not multiplicative for the curve
        assert!(hk_test((1, 8), &rec, 13, 2, 13).is_err());
        // zero residue rejected: ord_2(Delta_E) = 40 = 1 mod 13 is fine,
        // but a vanishing F-side residue is not
        assert!(hk_test((0, 8), &rec, 13, 2, 3).is_err());
    }
}
