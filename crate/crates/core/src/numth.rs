//! Exact integer kernel: primality, modular powers, Legendre symbols,
//! multiplicative orders and bounded partitions.
//!
//! Everything here works on `u64` with `u128` intermediates, so no product
//! can overflow. Group orders live in [`num_bigint::BigUint`] elsewhere.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut b = base % m;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    acc
}

/// Reduce a signed integer into `0..m`.
pub fn rem_euclid(a: i128, m: u64) -> u64 {
    a.rem_euclid(m as i128) as u64
}

/// Deterministic Miller-Rabin; the witness set is exact for all of `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &SMALL {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&k| is_prime(k)).collect()
}

/// Trial-division factorisation, fine for the desk-scale inputs used here.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Split `q` as `p^f` when it is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    match factorize(q).as_slice() {
        [(p, f)] => Some((*p, *f)),
        _ => None,
    }
}

pub fn valuation(mut n: u64, r: u64) -> u32 {
    if n == 0 {
        return u32::MAX;
    }
    let mut v = 0;
    while n % r == 0 {
        n /= r;
        v += 1;
    }
    v
}

pub fn valuation_big(n: &BigUint, r: u64) -> u32 {
    if n.is_zero() {
        return u32::MAX;
    }
    let rr = BigUint::from(r);
    let mut m = n.clone();
    let mut v = 0;
    loop {
        let rem = &m % &rr;
        if !rem.is_zero() {
            return v;
        }
        m /= &rr;
        v += 1;
    }
}

/// Residue of a big integer modulo a word.
pub fn big_mod(n: &BigUint, m: u64) -> u64 {
    (n % BigUint::from(m)).to_u64().unwrap_or(0)
}

/// Legendre symbol `(a/p)` for an odd prime `p`.
pub fn legendre(a: i64, p: u64) -> Result<i8> {
    if p == 2 || !is_prime(p) {
        return Err(Error::pre(format!("legendre needs an odd prime, got {p}")));
    }
    let a = rem_euclid(a as i128, p);
    if a == 0 {
        return Ok(0);
    }
    Ok(if pow_mod(a, (p - 1) / 2, p) == 1 { 1 } else { -1 })
}

/// Least `i >= 1` with `r | q^i - 1`, found by stripping prime factors of
/// `r - 1` from the trivial exponent.
pub fn phi_rq(r: u64, q: u64) -> Result<u32> {
    if !is_prime(r) {
        return Err(Error::pre(format!("{r} is not prime")));
    }
    if q % r == 0 {
        return Err(Error::pre(format!("{r} divides q = {q}")));
    }
    let mut order = r - 1;
    for (l, _) in factorize(r - 1) {
        while order % l == 0 && pow_mod(q, order / l, r) == 1 {
            order /= l;
        }
    }
    Ok(order as u32)
}

/// Direct loop version of [`phi_rq`], kept as a cross-check.
pub fn phi_rq_naive(r: u64, q: u64) -> Option<u32> {
    if q % r == 0 {
        return None;
    }
    let qr = q % r;
    let mut acc = qr;
    let mut i = 1;
    while acc != 1 {
        acc = mul_mod(acc, qr, r);
        i += 1;
    }
    Some(i)
}

/// Multiplicative order of `a` modulo `m` for coprime inputs.
pub fn mult_order(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(1);
    }
    if gcd(a % m, m) != 1 {
        return None;
    }
    let mut acc = a % m;
    let mut k = 1;
    while acc != 1 {
        acc = mul_mod(acc, a, m);
        k += 1;
    }
    Some(k)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoundedPartition {
    pub parts: Vec<u32>,
    pub bound: u32,
}

impl BoundedPartition {
    pub fn total(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// The gcd of the parts, written d(λ) in the literature.
    pub fn d(&self) -> u64 {
        self.parts.iter().fold(0, |g, &x| gcd(g, x as u64))
    }
}

/// All partitions of `n` with parts at most `p`, in lexicographically
/// decreasing order.
pub fn p_bounded_partitions(n: u32, p: u32) -> Vec<BoundedPartition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(rem: u32, max: u32, cur: &mut Vec<u32>, bound: u32, out: &mut Vec<BoundedPartition>) {
        if rem == 0 {
            out.push(BoundedPartition { parts: cur.clone(), bound });
            return;
        }
        for part in (1..=max.min(rem)).rev() {
            cur.push(part);
            rec(rem - part, part, cur, bound, out);
            cur.pop();
        }
    }
    rec(n, p, &mut cur, p, &mut out);
    out
}
