//! The modular sieves: curve invariants attached to a solution, the
//! one-auxiliary-prime elimination test, the refined multi-prime sieve
//! with its intersection engine, the symplectic two-prime criterion,
//! and the campaign driver that runs them over (E, d, n) triples.

mod campaign;
mod eigen;
mod hk;
mod intersect;
mod kraus;
mod phi;

pub use campaign::{run_campaign, CampaignConfig, CampaignReport, TripleOutcome, TripleStatus};
pub use eigen::{eigen_bound, exponent_bound_b};
pub use hk::{hk_test, ord_disc_frey_mod, HkVerdict};
pub use intersect::{psi_preimage_intersect, Constraint, IntersectOutcome};
pub use kraus::{kraus_search, kraus_test, theta_set, KrausVerdict, SieveCache};
pub use phi::{phi_classes, psi_exponents, PhiData};

use crate::arith::factor_smooth;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SieveError {
    #[error("not a valid solution: {0}")]
    InvalidSolution(String),
    #[error("invariant must be integral: {0}")]
    NonIntegralInvariant(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("missing Hecke data at {0}")]
    MissingHecke(u64),
    #[error(transparent)]
    Curve(#[from] crate::ecurve::EcurveError),
    #[error("checkpoint corrupt at byte offset {offset}: {msg}")]
    Checkpoint { offset: u64, msg: String },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// A putative solution x^2 + 3^a3 5^a5 7^a7 11^a11 = y^n with y even,
/// normalized so that x = 1 mod 4.
#[derive(Debug, Clone)]
pub struct FreySolution {
    pub x: BigInt,
    pub y: BigInt,
    pub n: u64,
    /// exponents (a3, a5, a7, a11)
    pub alpha: [u32; 4],
}

pub const ODD_SIEVE_PRIMES: [u64; 4] = [3, 5, 7, 11];

impl FreySolution {
    pub fn new(x: BigInt, y: BigInt, n: u64, alpha: [u32; 4]) -> Result<Self, SieveError> {
        let s = FreySolution { x, y, n, alpha };
        let inv = |m: String| Err(SieveError::InvalidSolution(m));
        if s.y.is_odd() || s.y < BigInt::from(2) {
            return inv("y must be even and >= 2".into());
        }
        if s.x.mod_floor(&BigInt::from(4)) != BigInt::one() {
            return inv("x must be 1 mod 4".into());
        }
        if s.x.gcd(&s.y) != BigInt::one() {
            return inv("x and y must be coprime".into());
        }
        let lhs: BigInt = &s.x * &s.x + s.coeff_sq_d();
        if lhs != s.y.pow(s.n as u32) {
            return inv("x^2 + c^2 d != y^n".into());
        }
        Ok(s)
    }

    /// 3^a3 5^a5 7^a7 11^a11 as an integer.
    pub fn coeff_sq_d(&self) -> BigInt {
        let mut v = BigInt::one();
        for (i, p) in ODD_SIEVE_PRIMES.iter().enumerate() {
            v *= BigInt::from(*p).pow(self.alpha[i]);
        }
        v
    }

    /// The squarefree part d of c^2 d; always one of 7, 15, 55, 231.
    pub fn d(&self) -> u64 {
        squarefree_d(&self.alpha)
    }

    /// (beta_3, beta_5, beta_7, beta_11) with c = prod p^beta_p.
    pub fn beta(&self) -> [u32; 4] {
        let mut b = self.alpha;
        for v in &mut b {
            *v /= 2;
        }
        b
    }
}

/// Squarefree part of 3^a3 5^a5 7^a7 11^a11 determined by exponent parity.
pub fn squarefree_d(alpha: &[u32; 4]) -> u64 {
    let mut d = 1u64;
    for (i, p) in ODD_SIEVE_PRIMES.iter().enumerate() {
        if alpha[i] % 2 == 1 {
            d *= p;
        }
    }
    d
}

/// Exponent tuple (beta_3, beta_5, beta_7, beta_11) mod 2n, the object
/// the refined sieve constrains.
pub type ExponentVector = [u64; 4];

/// c4, c6 and the minimal discriminant factorization of the curve
/// Y^2 + XY = X^3 + ((x-1)/4) X^2 + (y^n/64) X attached to a solution.
#[derive(Debug, Clone)]
pub struct FreyInvariants {
    pub c4: BigInt,
    pub c6: BigInt,
    pub disc_sign: i8,
    /// exponents of 2, 3, 5, 7, 11 and the odd-part-of-y contribution:
    /// ord_2 = 2 n ord_2(y) - 12, ord_ell = alpha_ell + 2 n ord_ell(y)
    pub disc_factors: Vec<(u64, u64)>,
    /// leftover y-part not supported on the sieve primes, as (odd part)^2n
    pub disc_cofactor: BigInt,
}

pub fn frey_invariants(sol: &FreySolution) -> Result<FreyInvariants, SieveError> {
    let yn = sol.y.pow(sol.n as u32);
    let c4_num: BigInt = 4 * &sol.x * &sol.x - 3 * &yn;
    let (c4, r4) = c4_num.div_rem(&BigInt::from(4));
    if !r4.is_zero() {
        return Err(SieveError::NonIntegralInvariant("c4".into()));
    }
    let c6_num: BigInt = -8 * (&sol.x * &sol.x * &sol.x) + 9 * &sol.x * &yn;
    let (c6, r6) = c6_num.div_rem(&BigInt::from(8));
    if !r6.is_zero() {
        return Err(SieveError::NonIntegralInvariant("c6".into()));
    }
    // disc = -2^{-12} c^2 d y^{2n}
    let ord2_y = sol.y.trailing_zeros().unwrap_or(0) as u64;
    let ord2 = 2 * sol.n * ord2_y;
    if ord2 < 12 {
        return Err(SieveError::NonIntegralInvariant("ord_2(disc) < 0".into()));
    }
    let mut factors = vec![(2u64, ord2 - 12)];
    let mut y_rest: BigInt = &sol.y >> (ord2_y as usize);
    for (i, &p) in ODD_SIEVE_PRIMES.iter().enumerate() {
        let mut e = sol.alpha[i] as u64;
        let pb = BigInt::from(p);
        while (&y_rest % &pb).is_zero() {
            y_rest /= &pb;
            e += 2 * sol.n;
        }
        factors.push((p, e));
    }
    Ok(FreyInvariants {
        c4,
        c6,
        disc_sign: -1,
        disc_factors: factors,
        disc_cofactor: y_rest.pow(2 * sol.n as u32),
    })
}

/// Odd primes dividing the lowered level: {ell : alpha_ell != 0 mod n}.
pub fn conductor_support(alpha: &[u32; 4], n: u64) -> Vec<u64> {
    ODD_SIEVE_PRIMES
        .iter()
        .enumerate()
        .filter(|&(i, _)| alpha[i] as u64 % n != 0)
        .map(|(_, &p)| p)
        .collect()
}

/// The conductor-consistency filter on a sieve survivor vector: each odd
/// sieve prime must divide the curve conductor exactly when
/// 2 beta_ell + ord_ell(d) != 0 mod n.
pub fn vector_conductor_consistent(beta: &ExponentVector, d: u64, n: u64, conductor: u64) -> bool {
    for (i, &p) in ODD_SIEVE_PRIMES.iter().enumerate() {
        let ord_d = u64::from(d % p == 0);
        let alpha = (2 * beta[i] + ord_d) % n;
        let divides = conductor % p == 0;
        if (alpha == 0) == divides {
            return false;
        }
    }
    true
}

/// Check x^2 + s = y^n for a smooth s; used by tests and the enumerator.
pub fn is_smooth_value(v: &BigInt) -> bool {
    matches!(factor_smooth(v, &crate::arith::SIEVE_PRIMES), Ok(Some(_)))
}
