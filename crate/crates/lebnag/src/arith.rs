//! Exact integer, modular and finite-field primitives.
//!
//! Everything here is deterministic: primality is decided by a fixed
//! Miller-Rabin base set that is a proven certificate for all 64-bit
//! inputs, generators are the first candidate in a fixed enumeration
//! order, and square roots are canonicalized to the smaller root.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArithError {
    #[error("modulus must be nonzero")]
    ZeroModulus,
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error("result exceeds 64-bit range")]
    RangeOverflow,
}

pub const SIEVE_PRIMES: [u64; 5] = [2, 3, 5, 7, 11];

/// Element of F_q for a 64-bit prime q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    pub value: u64,
    pub modulus: u64,
}

impl FieldElement {
    pub fn new(value: u64, modulus: u64) -> Self {
        debug_assert!(modulus > 1);
        FieldElement { value: value % modulus, modulus }
    }
}

/// Element a + b*w of F_{q^2} where w^2 = r0, the smallest positive
/// quadratic nonresidue mod q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExtFieldElement {
    pub a: u64,
    pub b: u64,
    pub modulus: u64,
    pub nonresidue: u64,
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[inline]
pub fn mulmod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

#[inline]
pub fn addmod(a: u64, b: u64, q: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % q as u128) as u64
}

#[inline]
pub fn submod(a: u64, b: u64, q: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        q - (b - a)
    }
}

pub fn powmod(mut a: u64, mut e: u64, q: u64) -> u64 {
    a %= q;
    let mut acc: u64 = 1 % q;
    while e != 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, q);
        }
        a = mulmod(a, a, q);
        e >>= 1;
    }
    acc
}

/// Inverse mod an odd prime q via Fermat.
pub fn invmod(a: u64, q: u64) -> u64 {
    debug_assert!(a % q != 0);
    powmod(a, q - 2, q)
}

/// Deterministic Miller-Rabin, valid for every 64-bit input.
pub fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if m == p {
            return true;
        }
        if m % p == 0 {
            return false;
        }
    }
    // Certificate base set for n < 2^64 (Sinclair / Feitsma-verified).
    const BASES: [u64; 7] = [2, 325, 9375, 28178, 450775, 9780504, 1795265022];
    let d = m - 1;
    let s = d.trailing_zeros();
    let u = d >> s;
    'bases: for mut a in BASES {
        a %= m;
        if a == 0 {
            continue;
        }
        let mut x = powmod(a, u, m);
        if x == 1 || x == m - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, m);
            if x == m - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Kronecker symbol (a/m), extended to even and negative m.
pub fn kronecker(a: i128, m: i128) -> Result<i32, ArithError> {
    if m == 0 {
        return Err(ArithError::ZeroModulus);
    }
    let mut a = a;
    let mut m = m;
    let mut sign = 1i32;
    if m < 0 {
        m = -m;
        if a < 0 {
            sign = -sign;
        }
    }
    // (a/2) factor: 0 if a even, chi_8(a) otherwise.
    let twos = m.trailing_zeros();
    m >>= twos;
    if twos > 0 {
        if a & 1 == 0 {
            return Ok(0);
        }
        let r = (a.rem_euclid(8)) as u64;
        if twos % 2 == 1 && (r == 3 || r == 5) {
            sign = -sign;
        }
    }
    // Now m odd positive; standard Jacobi with reciprocity.
    a = a.rem_euclid(m.max(1));
    if m == 1 {
        return Ok(sign);
    }
    while a != 0 {
        let t = a.trailing_zeros();
        a >>= t;
        if t % 2 == 1 {
            let r = m % 8;
            if r == 3 || r == 5 {
                sign = -sign;
            }
        }
        if a % 4 == 3 && m % 4 == 3 {
            sign = -sign;
        }
        let tmp = a;
        a = m % tmp;
        m = tmp;
    }
    if m == 1 {
        Ok(sign)
    } else {
        Ok(0)
    }
}

/// Smallest positive quadratic nonresidue mod an odd prime q.
pub fn least_nonresidue(q: u64) -> u64 {
    let mut r = 2u64;
    loop {
        if powmod(r, (q - 1) / 2, q) == q - 1 {
            return r;
        }
        r += 1;
    }
}

/// Tonelli-Shanks. Returns the smaller of the two roots, None for a
/// nonresidue, 0 for 0.
pub fn sqrt_mod(a: u64, q: u64) -> Option<u64> {
    debug_assert!(is_prime(q));
    let a = a % q;
    if a == 0 {
        return Some(0);
    }
    if q == 2 {
        return Some(a);
    }
    if powmod(a, (q - 1) / 2, q) != 1 {
        return None;
    }
    let r = if q % 4 == 3 {
        powmod(a, (q + 1) / 4, q)
    } else {
        // q = 1 mod 4: full Tonelli-Shanks with the least nonresidue.
        let s = (q - 1).trailing_zeros();
        let d = (q - 1) >> s;
        let z = least_nonresidue(q);
        let mut c = powmod(z, d, q);
        let mut x = powmod(a, (d + 1) / 2, q);
        let mut t = powmod(a, d, q);
        let mut m = s;
        while t != 1 {
            let mut i = 0u32;
            let mut t2 = t;
            while t2 != 1 {
                t2 = mulmod(t2, t2, q);
                i += 1;
            }
            let b = powmod(c, 1u64 << (m - i - 1), q);
            x = mulmod(x, b, q);
            c = mulmod(b, b, q);
            t = mulmod(t, c, q);
            m = i;
        }
        x
    };
    Some(r.min(q - r))
}

/// Pollard rho + trial division for 64-bit integers; returns prime
/// factors with multiplicity, sorted.
pub fn factor_u64(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        while n % p == 0 {
            out.push(p);
            n /= p;
        }
    }
    fn rho(n: u64) -> u64 {
        // Brent's cycle variant with a deterministic constant schedule.
        for c in 1..64u64 {
            let f = |x: u64| addmod(mulmod(x, x, n), c, n);
            let mut x = 2u64;
            let mut y = 2u64;
            let mut d = 1u64;
            while d == 1 {
                x = f(x);
                y = f(f(y));
                d = gcd_u64(x.abs_diff(y), n);
            }
            if d != n {
                return d;
            }
        }
        unreachable!("rho failed for {n}");
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            out.push(m);
            continue;
        }
        let d = rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    out.sort_unstable();
    out
}

fn distinct_prime_factors(n: u64) -> Vec<u64> {
    let mut f = factor_u64(n);
    f.dedup();
    f
}

/// Multiplicative generator of F_q^*. Candidates are the primes
/// 2, 3, 5, ... in increasing order; the first with order q-1 wins.
pub fn generator(q: u64) -> FieldElement {
    debug_assert!(is_prime(q));
    if q == 2 {
        return FieldElement::new(1, 2);
    }
    let factors = distinct_prime_factors(q - 1);
    let mut cand = 2u64;
    loop {
        if cand % q != 0 && factors.iter().all(|&p| powmod(cand, (q - 1) / p, q) != 1) {
            return FieldElement::new(cand, q);
        }
        cand += 1;
        while !is_prime(cand) {
            cand += 1;
        }
    }
}

/// Quadratic extension context F_{q^2} = F_q(w), w^2 = r0.
#[derive(Debug, Clone, Copy)]
pub struct Fq2 {
    pub q: u64,
    pub r0: u64,
}

impl Fq2 {
    pub fn new(q: u64) -> Self {
        debug_assert!(is_prime(q) && q > 2);
        Fq2 { q, r0: least_nonresidue(q) }
    }

    pub fn elem(&self, a: u64, b: u64) -> ExtFieldElement {
        ExtFieldElement { a: a % self.q, b: b % self.q, modulus: self.q, nonresidue: self.r0 }
    }

    pub fn from_base(&self, a: u64) -> ExtFieldElement {
        self.elem(a, 0)
    }

    pub fn mul(&self, x: ExtFieldElement, y: ExtFieldElement) -> ExtFieldElement {
        let q = self.q;
        self.elem(
            addmod(mulmod(x.a, y.a, q), mulmod(mulmod(x.b, y.b, q), self.r0, q), q),
            addmod(mulmod(x.a, y.b, q), mulmod(x.b, y.a, q), q),
        )
    }

    pub fn pow(&self, mut x: ExtFieldElement, mut e: u128) -> ExtFieldElement {
        let mut acc = self.from_base(1);
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, x);
            }
            x = self.mul(x, x);
            e >>= 1;
        }
        acc
    }

    /// Frobenius x -> x^q, which is conjugation a + bw -> a - bw.
    pub fn frobenius(&self, x: ExtFieldElement) -> ExtFieldElement {
        self.elem(x.a, if x.b == 0 { 0 } else { self.q - x.b })
    }

    /// Norm to F_q: x * x^q = a^2 - r0 b^2.
    pub fn norm(&self, x: ExtFieldElement) -> u64 {
        submod(mulmod(x.a, x.a, self.q), mulmod(mulmod(x.b, x.b, self.q), self.r0, self.q), self.q)
    }

    pub fn trace(&self, x: ExtFieldElement) -> u64 {
        addmod(x.a, x.a, self.q)
    }

    pub fn is_zero(&self, x: ExtFieldElement) -> bool {
        x.a == 0 && x.b == 0
    }

    pub fn inv(&self, x: ExtFieldElement) -> ExtFieldElement {
        debug_assert!(!self.is_zero(x));
        let n = invmod(self.norm(x), self.q);
        let c = self.frobenius(x);
        self.elem(mulmod(c.a, n, self.q), mulmod(c.b, n, self.q))
    }
}

/// Multiplicative generator of F_{q^2}^*. Candidates (a, b) are tried
/// in order of increasing b then a, starting from (0, 1); the first
/// with order q^2 - 1 wins.
pub fn generator_ext(q: u64) -> ExtFieldElement {
    let f = Fq2::new(q);
    let order = (q as u128) * (q as u128) - 1;
    let mut factors: Vec<u64> = distinct_prime_factors(q - 1);
    factors.extend(distinct_prime_factors(q + 1));
    factors.sort_unstable();
    factors.dedup();
    for b in 1..q {
        for a in 0..q {
            let x = f.elem(a, b);
            if factors.iter().all(|&p| {
                let y = f.pow(x, order / p as u128);
                !(y.a == 1 && y.b == 0)
            }) {
                return x;
            }
        }
    }
    unreachable!("no generator found for q = {q}")
}

/// Smallest k >= k_from with q = k*n + 1 prime.
pub fn next_kn1_prime(n: u64, k_from: u64) -> Result<(u64, u64), ArithError> {
    debug_assert!(n >= 5 && is_prime(n));
    let mut k = k_from;
    loop {
        let q = n.checked_mul(k).and_then(|v| v.checked_add(1)).ok_or(ArithError::RangeOverflow)?;
        if is_prime(q) {
            return Ok((q, k));
        }
        k += 1;
    }
}

/// Exponent vector of m over the prime list `s` if m is s-smooth.
/// The sign of m is returned separately.
pub fn factor_smooth(m: &BigInt, s: &[u64]) -> Result<Option<(i8, Vec<u32>)>, ArithError> {
    if m.is_zero() {
        return Err(ArithError::ZeroArgument);
    }
    let sign = if m.is_negative() { -1 } else { 1 };
    let mut rest = m.abs();
    let mut exps = vec![0u32; s.len()];
    for (i, &p) in s.iter().enumerate() {
        let pb = BigInt::from(p);
        while (&rest % &pb).is_zero() {
            rest /= &pb;
            exps[i] += 1;
        }
    }
    if rest == BigInt::from(1) {
        Ok(Some((sign, exps)))
    } else {
        Ok(None)
    }
}

/// Class of x in the order-g quotient of F_q^*: the e in [0, g) with
/// x^((q-1)/g) = (g0^((q-1)/g))^e, by baby-step giant-step.
pub fn dlog_in_quotient(x: u64, g0: u64, g: u64, q: u64) -> Result<u64, ArithError> {
    if x % q == 0 {
        return Err(ArithError::ZeroArgument);
    }
    debug_assert!((q - 1) % g == 0);
    let xq = powmod(x, (q - 1) / g, q);
    let gq = powmod(g0, (q - 1) / g, q);
    if g == 1 {
        return Ok(0);
    }
    let m = (g as f64).sqrt().ceil() as u64;
    // baby steps: gq^j for j < m
    let mut table = std::collections::HashMap::with_capacity(m as usize);
    let mut cur = 1u64;
    for j in 0..m {
        table.entry(cur).or_insert(j);
        cur = mulmod(cur, gq, q);
    }
    // giant steps: xq * (gq^-m)^i
    let giant = invmod(cur, q); // cur = gq^m
    let mut y = xq;
    for i in 0..=m {
        if let Some(&j) = table.get(&y) {
            return Ok((i * m + j) % g);
        }
        y = mulmod(y, giant, q);
    }
    unreachable!("dlog not found: x has order not dividing g?")
}
