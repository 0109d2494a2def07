//! Small extension fields `F_{p^k}` by exp/log tables, enough to read off
//! eigenvalue multiplicities of matrices defined over `F_p`.

use crate::error::{Error, Result};
use crate::oracle::matrix::Matrix;

/// Elements are integers `0..p^k` read as base-`p` coefficient vectors of a
/// polynomial in a primitive root `g`.
#[derive(Debug, Clone)]
pub struct Gf {
    pub p: u64,
    pub k: u32,
    pub size: u64,
    exp: Vec<u32>,
    log: Vec<u32>,
}

pub const MAX_FIELD: u64 = 1 << 20;

impl Gf {
    pub fn new(p: u64, k: u32) -> Result<Gf> {
        let size = p.checked_pow(k).filter(|&s| s <= MAX_FIELD).ok_or_else(|| Error::pre("field too large"))?;
        // Search monic degree-k polynomials for one with a primitive root.
        for tail in 0..size {
            let coeffs: Vec<u64> = digits(tail, p, k);
            if coeffs[0] == 0 {
                continue;
            }
            if let Some((exp, log)) = try_tables(p, k, size, &coeffs) {
                return Ok(Gf { p, k, size, exp, log });
            }
        }
        Err(Error::pre("no primitive polynomial found"))
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (a as u64, b as u64);
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.k {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out as u32
    }

    pub fn neg(&self, a: u32) -> u32 {
        let mut a = a as u64;
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.k {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out as u32
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let s = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % (self.size - 1);
        self.exp[s as usize]
    }

    pub fn inv(&self, a: u32) -> u32 {
        debug_assert!(a != 0);
        let l = self.log[a as usize] as u64;
        self.exp[((self.size - 1 - l) % (self.size - 1)) as usize]
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, a: u64) -> u32 {
        (a % self.p) as u32
    }

    pub fn generator_power(&self, e: u64) -> u32 {
        self.exp[(e % (self.size - 1)) as usize]
    }

    /// A primitive `r`-th root of unity, if `r` divides `|F^*|`.
    pub fn root_of_unity(&self, r: u64) -> Option<u32> {
        ((self.size - 1) % r == 0).then(|| self.generator_power((self.size - 1) / r))
    }

    pub fn rank(&self, rows: usize, cols: usize, mut a: Vec<u32>) -> usize {
        let mut rank = 0;
        for col in 0..cols {
            let Some(piv) = (rank..rows).find(|&r| a[r * cols + col] != 0) else { continue };
            for j in 0..cols {
                a.swap(piv * cols + j, rank * cols + j);
            }
            let inv = self.inv(a[rank * cols + col]);
            for j in 0..cols {
                a[rank * cols + j] = self.mul(a[rank * cols + j], inv);
            }
            for r in 0..rows {
                let f = a[r * cols + col];
                if r == rank || f == 0 {
                    continue;
                }
                let nf = self.neg(f);
                for j in 0..cols {
                    let t = self.mul(a[rank * cols + j], nf);
                    a[r * cols + j] = self.add(a[r * cols + j], t);
                }
            }
            rank += 1;
        }
        rank
    }

    /// `dim ker(M - w I)` for `M` over the prime field.
    pub fn eigenspace_dim(&self, m: &Matrix, w: u32) -> usize {
        let n = m.n;
        let nw = self.neg(w);
        let mut a = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                a[i * n + j] = self.from_int(m.get(i, j));
            }
            a[i * n + i] = self.add(a[i * n + i], nw);
        }
        n - self.rank(n, n, a)
    }
}

fn digits(mut x: u64, p: u64, k: u32) -> Vec<u64> {
    (0..k)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

/// Multiplying by `g` in the basis `1, g, .., g^{k-1}` given
/// `g^k = -(c_0 + c_1 g + ..)`.
fn try_tables(p: u64, k: u32, size: u64, coeffs: &[u64]) -> Option<(Vec<u32>, Vec<u32>)> {
    let k = k as usize;
    let mut exp = Vec::with_capacity((size - 1) as usize);
    let mut log = vec![u32::MAX; size as usize];
    let mut cur = vec![0u64; k];
    cur[0] = 1;
    for e in 0..size - 1 {
        let idx = cur.iter().rev().fold(0u64, |acc, &d| acc * p + d);
        if log[idx as usize] != u32::MAX {
            return None;
        }
        log[idx as usize] = e as u32;
        exp.push(idx as u32);
        let top = cur[k - 1];
        for j in (1..k).rev() {
            cur[j] = (cur[j - 1] + p * p - top * coeffs[j] % p) % p;
        }
        cur[0] = (p * p - top * coeffs[0] % p) % p;
    }
    let back = cur.iter().rev().fold(0u64, |acc, &d| acc * p + d);
    (back == 1).then_some((exp, log))
}
