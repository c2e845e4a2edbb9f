//! The one-auxiliary-prime elimination test: for q = kn + 1 with
//! (-d/q) = 1, compare a_q(E)^2 mod n against the traces of the curves
//! Y^2 = X(X+1)(X+theta) for theta in the descent-constrained set.

use super::SieveError;
use crate::arith::{generator, is_prime, kronecker, mulmod, powmod, sqrt_mod};
use crate::ecurve::{a_ell, trace_with_ctx, CountCtx, CurveFq, CurveRecord};
use crate::quadfield::{descent_constants, epsilon_n};
#[cfg(test)]
use crate::quadfield::kappa_m;
use std::collections::{HashMap, HashSet};
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KrausVerdict {
    Eliminated,
    Undecided,
}

/// Shared scratch for one (d, n) ladder: theta data per q and curve
/// traces per (label, q).
#[derive(Default)]
pub struct SieveCache {
    theta: HashMap<u64, Arc<ThetaInfo>>,
    pub(crate) phi: HashMap<u64, Arc<super::phi::PhiData>>,
    aq: HashMap<(String, u64), i64>,
}

pub struct ThetaInfo {
    /// a_q(H_theta)^2 mod n for every theta
    pub trace_sq_mod_n: HashSet<u64>,
}

impl SieveCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn a_q(&mut self, e: &CurveRecord, q: u64) -> Result<i64, SieveError> {
        if let Some(&a) = self.aq.get(&(e.label.clone(), q)) {
            return Ok(a);
        }
        let a = a_ell(e, q).map_err(SieveError::Curve)?;
        // comparisons must never see a trace outside the Hasse interval
        assert!((a as i128) * (a as i128) <= 4 * q as i128, "Hasse violation for {}", e.label);
        self.aq.insert((e.label.clone(), q), a);
        Ok(a)
    }

    fn theta_info(&mut self, d: u64, n: u64, q: u64) -> Result<Arc<ThetaInfo>, SieveError> {
        if let Some(t) = self.theta.get(&q) {
            return Ok(t.clone());
        }
        let thetas = theta_set(d, n, q)?;
        let mut ctx = CountCtx::new(q);
        let mut set = HashSet::new();
        for &t in &thetas {
            let c = CurveFq::from_thetas(q, 1, t).map_err(SieveError::Curve)?;
            let a = trace_with_ctx(&c, &mut ctx).map_err(SieveError::Curve)?;
            set.insert(mulmod(a.unsigned_abs(), a.unsigned_abs(), n));
        }
        let info = Arc::new(ThetaInfo { trace_sq_mod_n: set });
        self.theta.insert(q, info.clone());
        Ok(info)
    }
}

fn check_admissible(d: u64, n: u64, q: u64) -> Result<u64, SieveError> {
    if !is_prime(q) || (q - 1) % n != 0 {
        return Err(SieveError::Precondition(format!("q = {q} is not a prime 1 mod n")));
    }
    if [2u64, 3, 5, 7, 11].contains(&q) {
        return Err(SieveError::Precondition(format!("q = {q} divides 2*3*5*7*11")));
    }
    if kronecker(-(d as i128), q as i128).unwrap() != 1 {
        return Err(SieveError::Precondition(format!("-{d} is not a square mod {q}")));
    }
    Ok(sqrt_mod((q - d % q) % q, q).expect("split prime has a root of -d"))
}

/// The set Theta_q of Lemma-style candidate reductions: the coset
/// gamma-bar * (F_q^*)^n (or its (2 + eps_n n)/3 power for d = 231),
/// minus {0, 1}.
pub fn theta_set(d: u64, n: u64, q: u64) -> Result<Vec<u64>, SieveError> {
    let a_root = check_admissible(d, n, q)?;
    let dc = descent_constants(d).map_err(|e| SieveError::Precondition(e.to_string()))?;
    let base0 = dc
        .gamma
        .reduce_mod_split(q, a_root)
        .map_err(|e| SieveError::Precondition(e.to_string()))?
        .value;
    let base = if d == 231 {
        // exponent (2 + eps_n n)/3 with eps_n = +-1; a negative exponent
        // inverts the base: (2 - n)/3 = -(n - 2)/3
        if epsilon_n(n) == 1 {
            powmod(base0, (2 + n) / 3, q)
        } else {
            powmod(crate::arith::invmod(base0, q), (n - 2) / 3, q)
        }
    } else {
        base0
    };
    let g0 = generator(q).value;
    let g = powmod(g0, n, q);
    let k = (q - 1) / n;
    let mut out = Vec::with_capacity(k as usize);
    let mut cur = base;
    for _ in 0..k {
        if cur != 0 && cur != 1 {
            out.push(cur);
        }
        cur = mulmod(cur, g, q);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Lemma-style one-prime test. Eliminated iff a_q(E)^2 is neither 4 nor
/// any a_q(H_theta)^2 mod n.
pub fn kraus_test(
    e: &CurveRecord,
    d: u64,
    n: u64,
    q: u64,
    cache: &mut SieveCache,
) -> Result<KrausVerdict, SieveError> {
    let info = cache.theta_info(d, n, q)?;
    let a_e = cache.a_q(e, q)?;
    let a2 = mulmod(a_e.unsigned_abs(), a_e.unsigned_abs(), n);
    if a2 == 4 % n {
        return Ok(KrausVerdict::Undecided);
    }
    if info.trace_sq_mod_n.contains(&a2) {
        return Ok(KrausVerdict::Undecided);
    }
    Ok(KrausVerdict::Eliminated)
}

/// Diagnostic record for one attempted auxiliary prime.
#[derive(Debug, Clone)]
pub struct KrausAttempt {
    pub q: u64,
    pub k: u64,
    /// heuristic success probability (1 - 2/n)^k of this q
    pub success_prob: f64,
}

/// Walk k = k_from..k_max looking for the smallest admissible q = kn + 1
/// that eliminates (E, d, n). Returns the witness and the failed attempts.
pub fn kraus_search(
    e: &CurveRecord,
    d: u64,
    n: u64,
    k_max: u64,
    cache: &mut SieveCache,
) -> Result<(Option<u64>, Vec<KrausAttempt>), SieveError> {
    let mut attempts = Vec::new();
    for k in 1..k_max {
        let q = match n.checked_mul(k).and_then(|v| v.checked_add(1)) {
            Some(q) => q,
            None => break,
        };
        if !is_prime(q) || kronecker(-(d as i128), q as i128).unwrap() != 1 {
            continue;
        }
        match kraus_test(e, d, n, q, cache)? {
            KrausVerdict::Eliminated => return Ok((Some(q), attempts)),
            KrausVerdict::Undecided => {
                attempts.push(KrausAttempt {
                    q,
                    k,
                    success_prob: (1.0 - 2.0 / n as f64).powf(k as f64),
                });
            }
        }
    }
    Ok((None, attempts))
}
