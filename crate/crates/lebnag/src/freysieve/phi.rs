//! The refined sieve's local data at an auxiliary prime q = 1 mod n:
//! candidate reductions theta, their traces, and the classes of
//! (theta_1 - theta_2)/sqrt(-d) in F_q^* / (F_q^*)^{2n}.

use super::kraus::SieveCache;
use super::SieveError;
use crate::arith::{
    dlog_in_quotient, gcd_u64, generator, generator_ext, invmod, is_prime, kronecker, mulmod,
    powmod, sqrt_mod, submod,
};
use crate::ecurve::{trace_with_ctx, CountCtx, CurveFq};
use crate::quadfield::{descent_constants, kappa_m, sqrt_minus_d_ext};
use std::collections::BTreeSet;
use std::sync::Arc;

/// Local sieve data at q, independent of the target curve E.
pub struct PhiData {
    pub q: u64,
    pub n: u64,
    /// order of F_q^*/(F_q^*)^{2n}: gcd(2n, q-1)
    pub g: u64,
    pub g0: u64,
    pub split: bool,
    /// (a_q(H) mod n, witness value in F_q^*) for each admissible theta
    pub entries: Vec<(u64, u64)>,
    /// the four extra witness values rho1/a, rho1 g/a, -rho2/a, -rho2 g/a
    /// admitted when a_q(E)^2 = 4 mod n (split case only)
    pub special: Vec<u64>,
    /// dlog classes of the bases (-3, 5, -7, -11)
    pub psi_e: [u64; 4],
}

impl PhiData {
    /// The allowed class set for a curve with trace a_e at q.
    pub fn allowed_classes(&self, a_e: i64) -> BTreeSet<u64> {
        let am = a_e.rem_euclid(self.n as i64) as u64;
        let mut out = BTreeSet::new();
        for &(a_h, v) in &self.entries {
            if a_h == am {
                out.insert(self.class_of(v));
            }
        }
        let a2 = mulmod(am, am, self.n);
        if a2 == 4 % self.n {
            for &v in &self.special {
                out.insert(self.class_of(v));
            }
        }
        out
    }

    pub fn class_of(&self, v: u64) -> u64 {
        dlog_in_quotient(v, self.g0, self.g, self.q).expect("nonzero witness")
    }
}

/// Dlog classes of the four sign-adjusted bases (-3, 5, -7, -11).
pub fn psi_exponents(q: u64, g0: u64, g: u64) -> [u64; 4] {
    let m3 = q - 3 % q;
    let m7 = q - 7 % q;
    let m11 = q - 11 % q;
    [
        dlog_in_quotient(m3, g0, g, q).unwrap(),
        dlog_in_quotient(5 % q, g0, g, q).unwrap(),
        dlog_in_quotient(m7, g0, g, q).unwrap(),
        dlog_in_quotient(m11, g0, g, q).unwrap(),
    ]
}

/// Build (or fetch) the local data at q for the pair (d, n).
pub fn phi_classes(
    d: u64,
    n: u64,
    q: u64,
    cache: &mut SieveCache,
) -> Result<Arc<PhiData>, SieveError> {
    if let Some(p) = cache.phi.get(&q) {
        return Ok(p.clone());
    }
    if !is_prime(q) || (q - 1) % n != 0 || q <= 11 {
        return Err(SieveError::Precondition(format!("q = {q} is not an admissible prime")));
    }
    let split = kronecker(-(d as i128), q as i128).unwrap() == 1;
    let data = if split { phi_split(d, n, q)? } else { phi_inert(d, n, q)? };
    let arc = Arc::new(data);
    cache.phi.insert(q, arc.clone());
    Ok(arc)
}

fn rho_pair(d: u64, n: u64, q: u64, a_root: u64) -> Result<(u64, u64), SieveError> {
    let dc = descent_constants(d).map_err(|e| SieveError::Precondition(e.to_string()))?;
    let (_, m) = kappa_m(d, n).map_err(|e| SieveError::Precondition(e.to_string()))?;
    let eta = dc
        .eta
        .reduce_mod_split(q, a_root)
        .map_err(|e| SieveError::Precondition(e.to_string()))?
        .value;
    let eta_bar = dc.eta.conj().reduce_mod_split(q, a_root).unwrap().value;
    Ok((powmod(eta, m, q), powmod(eta_bar, m, q)))
}

fn phi_split(d: u64, n: u64, q: u64) -> Result<PhiData, SieveError> {
    let a_root = sqrt_mod((q - d % q) % q, q)
        .ok_or_else(|| SieveError::Precondition(format!("-{d} must be a square mod {q}")))?;
    let (rho1, rho2) = rho_pair(d, n, q, a_root)?;
    let g0 = generator(q).value;
    let gpow = powmod(g0, n, q);
    let k = (q - 1) / n;
    let g = gcd_u64(2 * n, q - 1);
    let inv_a = invmod(a_root, q);
    let mut ctx = CountCtx::new(q);
    let mut entries = Vec::new();
    // theta_1 = rho1 g^i, theta_2 = rho2 g^j, j in {0, 1}
    let mut t1 = rho1;
    for _ in 0..k {
        for j in 0..2u64 {
            let t2 = mulmod(rho2, powmod(gpow, j, q), q);
            if t1 == 0 || t2 == 0 || t1 == t2 {
                continue;
            }
            let c = CurveFq::from_thetas(q, t1, t2).map_err(SieveError::Curve)?;
            let a_h = trace_with_ctx(&c, &mut ctx).map_err(SieveError::Curve)?;
            let v = mulmod(submod(t1, t2, q), inv_a, q);
            entries.push((a_h.rem_euclid(n as i64) as u64, v));
        }
        t1 = mulmod(t1, gpow, q);
    }
    let special = vec![
        mulmod(rho1, inv_a, q),
        mulmod(mulmod(rho1, gpow, q), inv_a, q),
        mulmod(q - rho2, inv_a, q),
        mulmod(mulmod(q - rho2, gpow, q), inv_a, q),
    ];
    let psi_e = psi_exponents(q, g0, g);
    Ok(PhiData { q, n, g, g0, split: true, entries, special, psi_e })
}

fn phi_inert(d: u64, n: u64, q: u64) -> Result<PhiData, SieveError> {
    let f = crate::arith::Fq2::new(q);
    let root = sqrt_minus_d_ext(q, d);
    let dc = descent_constants(d).map_err(|e| SieveError::Precondition(e.to_string()))?;
    let (_, m) = kappa_m(d, n).map_err(|e| SieveError::Precondition(e.to_string()))?;
    let rho1 = {
        let eta = dc
            .eta
            .reduce_mod_inert(&f, root)
            .map_err(|e| SieveError::Precondition(e.to_string()))?;
        f.pow(eta, m as u128)
    };
    let gext = generator_ext(q);
    let gpow = f.pow(gext, n as u128);
    let g0 = generator(q).value;
    let g = gcd_u64(2 * n, q - 1);
    // sqrt(-d) = (0, t): (theta - theta^q)/sqrt(-d) = 2 b / t in F_q
    let t_inv = invmod(root.b, q);
    let mut ctx = CountCtx::new(q);
    let mut entries = Vec::new();
    let mut theta = rho1;
    for _ in 0..(2 * q + 2) {
        if theta.b != 0 {
            // H: Y^2 = X(X + theta)(X + theta^q) over F_q via trace/norm
            let tr = f.trace(theta);
            let nm = f.norm(theta);
            let c = CurveFq::from_trace_norm(q, tr, nm).map_err(SieveError::Curve)?;
            let a_h = trace_with_ctx(&c, &mut ctx).map_err(SieveError::Curve)?;
            let v = mulmod(mulmod(2 % q, theta.b, q), t_inv, q);
            debug_assert_ne!(v, 0);
            entries.push((a_h.rem_euclid(n as i64) as u64, v));
        }
        theta = f.mul(theta, gpow);
    }
    let psi_e = psi_exponents(q, g0, g);
    Ok(PhiData { q, n, g, g0, split: false, entries, special: Vec::new(), psi_e })
}
