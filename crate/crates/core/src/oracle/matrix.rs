//! Dense matrices over a prime field `F_p`, row-vector convention: a matrix
//! acts on the right, `v -> v M`.

use std::fmt;

use crate::error::{Error, Result};
use crate::numth::pow_mod;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    pub p: u64,
    pub n: usize,
    pub data: Vec<u64>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix over F_{} ({}x{})", self.p, self.n, self.n)?;
        for i in 0..self.n {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

impl Matrix {
    pub fn zero(p: u64, n: usize) -> Matrix {
        Matrix { p, n, data: vec![0; n * n] }
    }

    pub fn identity(p: u64, n: usize) -> Matrix {
        let mut m = Matrix::zero(p, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % p;
        }
        m
    }

    pub fn from_rows(p: u64, rows: &[Vec<i64>]) -> Matrix {
        let n = rows.len();
        let mut m = Matrix::zero(p, n);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), n, "matrix must be square");
            for (j, &x) in r.iter().enumerate() {
                m.data[i * n + j] = x.rem_euclid(p as i64) as u64;
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: u64) {
        self.data[i * self.n + j] = x % self.p;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let (n, p) = (self.n, self.p);
        let mut out = Matrix::zero(p, n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
            for j in 0..n {
                out.data[i * n + j] %= p;
            }
        }
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        let p = self.p;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| (a + p - b) % p).collect();
        Matrix { p, n: self.n, data }
    }

    pub fn transpose(&self) -> Matrix {
        let n = self.n;
        let mut t = Matrix::zero(self.p, n);
        for i in 0..n {
            for j in 0..n {
                t.data[j * n + i] = self.data[i * n + j];
            }
        }
        t
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        let mut acc = Matrix::identity(self.p, self.n);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        *self == Matrix::identity(self.p, self.n)
    }

    /// Row-echelon reduction in place; returns the rank and the product of
    /// pivots with the sign of the row swaps, i.e. the determinant when the
    /// matrix is square and of full rank.
    fn eliminate(&mut self) -> (usize, u64) {
        let (n, p) = (self.n, self.p);
        let mut rank = 0;
        let mut det = 1u64;
        for col in 0..n {
            let Some(piv) = (rank..n).find(|&r| self.data[r * n + col] != 0) else {
                det = 0;
                continue;
            };
            if piv != rank {
                for j in 0..n {
                    self.data.swap(piv * n + j, rank * n + j);
                }
                det = (p - det) % p;
            }
            let pv = self.data[rank * n + col];
            det = det * pv % p;
            let inv = inv_mod(pv, p);
            for j in 0..n {
                self.data[rank * n + j] = self.data[rank * n + j] * inv % p;
            }
            for r in 0..n {
                if r == rank {
                    continue;
                }
                let f = self.data[r * n + col];
                if f == 0 {
                    continue;
                }
                for j in 0..n {
                    let x = self.data[rank * n + j] * f % p;
                    self.data[r * n + j] = (self.data[r * n + j] + p - x) % p;
                }
            }
            rank += 1;
        }
        (rank, if rank == n { det } else { 0 })
    }

    pub fn rank(&self) -> usize {
        self.clone().eliminate().0
    }

    pub fn det(&self) -> u64 {
        self.clone().eliminate().1
    }

    pub fn inverse(&self) -> Result<Matrix> {
        let (n, p) = (self.n, self.p);
        let mut aug = Matrix::zero(p, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.data[i * 2 * n + j] = self.get(i, j);
            }
            aug.data[i * 2 * n + n + i] = 1;
        }
        // Reduce only the left half by hand; `eliminate` assumes square input.
        let w = 2 * n;
        for col in 0..n {
            let piv = (col..n).find(|&r| aug.data[r * w + col] != 0).ok_or_else(|| Error::pre("matrix is singular"))?;
            for j in 0..w {
                aug.data.swap(piv * w + j, col * w + j);
            }
            let inv = inv_mod(aug.data[col * w + col], p);
            for j in 0..w {
                aug.data[col * w + j] = aug.data[col * w + j] * inv % p;
            }
            for r in 0..n {
                let f = aug.data[r * w + col];
                if r == col || f == 0 {
                    continue;
                }
                for j in 0..w {
                    let x = aug.data[col * w + j] * f % p;
                    aug.data[r * w + j] = (aug.data[r * w + j] + p - x) % p;
                }
            }
        }
        let mut out = Matrix::zero(p, n);
        for i in 0..n {
            for j in 0..n {
                out.data[i * n + j] = aug.data[i * w + n + j];
            }
        }
        Ok(out)
    }

    /// `v M` for a row vector `v`.
    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        let n = self.n;
        let mut out = vec![0u64; n];
        for (i, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (o, &m) in out.iter_mut().zip(&self.data[i * n..(i + 1) * n]) {
                *o = (*o + a * m) % self.p;
            }
        }
        out
    }

    /// Bilinear form `u G v^T` with `self` as Gram matrix.
    pub fn form(&self, u: &[u64], v: &[u64]) -> u64 {
        let gv: u64 = (0..self.n)
            .map(|i| {
                let s: u64 = (0..self.n).map(|j| self.get(i, j) * v[j] % self.p).sum();
                u[i] * (s % self.p) % self.p
            })
            .sum();
        gv % self.p
    }

    /// Scale so the first nonzero entry is 1: a canonical representative of
    /// the projective class.
    pub fn normalize_projective(&mut self) {
        if let Some(&lead) = self.data.iter().find(|&&x| x != 0) {
            if lead != 1 {
                let inv = inv_mod(lead, self.p);
                for x in &mut self.data {
                    *x = *x * inv % self.p;
                }
            }
        }
    }
}

/// Jordan partition of a unipotent matrix from the ranks of `(M - I)^k`.
pub fn jordan_partition(m: &Matrix) -> Result<Vec<u32>> {
    let n = m.n;
    let nil = m.sub(&Matrix::identity(m.p, n));
    let mut ranks = vec![n];
    let mut acc = Matrix::identity(m.p, n);
    for _ in 0..n {
        acc = acc.mul(&nil);
        let r = acc.rank();
        ranks.push(r);
        if r == 0 {
            break;
        }
    }
    if *ranks.last().unwrap() != 0 {
        return Err(Error::pre("matrix is not unipotent"));
    }
    // Number of blocks of size >= k is rank_{k-1} - rank_k.
    let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let mut parts = Vec::new();
    for k in (1..=at_least.len()).rev() {
        let exact = at_least[k - 1] - at_least.get(k).copied().unwrap_or(0);
        parts.extend(std::iter::repeat_n(k as u32, exact));
    }
    Ok(parts)
}

/// Multiplicative order of an invertible matrix, up to `bound`.
pub fn matrix_order(m: &Matrix, bound: u64) -> Option<u64> {
    let id = Matrix::identity(m.p, m.n);
    let mut acc = m.clone();
    for k in 1..=bound {
        if acc == id {
            return Some(k);
        }
        acc = acc.mul(m);
    }
    None
}
