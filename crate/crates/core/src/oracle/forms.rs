//! Classification of nondegenerate quadratic forms over prime fields.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numth::{legendre, rem_euclid};
use crate::oracle::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormType {
    Plus,
    Minus,
    OddDim,
    Degenerate,
}

/// A form given by its Gram matrix (odd `p`) or, in characteristic two, by
/// its alternating polar form and the values `Q(e_i)` on the basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormData {
    Symmetric(Matrix),
    Quadratic { polar: Matrix, diag: Vec<u64> },
}

impl FormData {
    pub fn dim(&self) -> usize {
        match self {
            FormData::Symmetric(g) => g.n,
            FormData::Quadratic { polar, .. } => polar.n,
        }
    }

    /// Whether `y` preserves the form, acting on row vectors.
    pub fn preserved_by(&self, y: &Matrix) -> bool {
        match self {
            FormData::Symmetric(g) => y.mul(g).mul(&y.transpose()) == *g,
            FormData::Quadratic { polar, diag } => {
                if y.mul(polar).mul(&y.transpose()) != *polar {
                    return false;
                }
                (0..y.n).all(|i| quad_value(polar, diag, y.row(i)) == diag[i])
            }
        }
    }
}

/// `Q(v)` in characteristic two from the polar form and the basis values.
pub fn quad_value(polar: &Matrix, diag: &[u64], v: &[u64]) -> u64 {
    let mut s = 0;
    for i in 0..v.len() {
        if v[i] & 1 == 0 {
            continue;
        }
        s ^= diag[i] & 1;
        for (j, &x) in v.iter().enumerate().skip(i + 1) {
            if x & 1 == 1 {
                s ^= polar.get(i, j) & 1;
            }
        }
    }
    s
}

pub fn classify_quadratic_form(form: &FormData) -> Result<FormType> {
    let n = form.dim();
    if n < 2 {
        return Err(Error::pre("forms of dimension below 2 are not classified"));
    }
    match form {
        FormData::Symmetric(g) => {
            if g.p == 2 {
                return Err(Error::pre("characteristic two needs quadratic data"));
            }
            if *g != g.transpose() {
                return Err(Error::pre("Gram matrix is not symmetric"));
            }
            let det = g.det();
            if det == 0 {
                return Ok(FormType::Degenerate);
            }
            if n % 2 == 1 {
                return Ok(FormType::OddDim);
            }
            let sign: i128 = if (n / 2) % 2 == 0 { 1 } else { -1 };
            let disc = rem_euclid(sign * det as i128, g.p);
            Ok(if legendre(disc as i64, g.p)? == 1 { FormType::Plus } else { FormType::Minus })
        }
        FormData::Quadratic { polar, diag } => {
            if polar.p != 2 || diag.len() != n {
                return Err(Error::pre("quadratic data must be over F_2"));
            }
            if n % 2 == 1 {
                return Ok(FormType::OddDim);
            }
            if n > 24 {
                return Err(Error::pre("zero count limited to n <= 24"));
            }
            if polar.det() == 0 || (0..n).any(|i| polar.get(i, i) != 0) {
                return Ok(FormType::Degenerate);
            }
            let zeros = count_zeros(polar, diag);
            let base = 1u64 << (n - 1);
            let shift = 1u64 << (n / 2 - 1);
            Ok(if zeros == base + shift {
                FormType::Plus
            } else if zeros == base - shift {
                FormType::Minus
            } else {
                FormType::Degenerate
            })
        }
    }
}

/// Walk all vectors in Gray-code order, updating `Q` and `B(v, -)` one
/// basis flip at a time.
fn count_zeros(polar: &Matrix, diag: &[u64]) -> u64 {
    let n = polar.n;
    let rows: Vec<u32> =
        (0..n).map(|i| (0..n).fold(0u32, |acc, j| acc | (((polar.get(i, j) & 1) as u32) << j))).collect();
    let mut q = 0u64;
    let mut bv = 0u32;
    let mut zeros = 1;
    for step in 1u64..(1u64 << n) {
        let i = step.trailing_zeros() as usize;
        q ^= (diag[i] & 1) ^ ((bv >> i) & 1) as u64;
        bv ^= rows[i];
        if q == 0 {
            zeros += 1;
        }
    }
    zeros
}
