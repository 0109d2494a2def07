//! The fully deleted permutation module of `A_d` over `F_p`.
//!
//! `U` is the sum-zero submodule of `F_p^d`, `W` the line spanned by the
//! all-ones vector, and `V = U/(U ∩ W)` has dimension `d - 1`, or `d - 2`
//! when `p | d`. We always use the basis `e_i = v_i - v_{i+1}` (images in
//! `V`), whose Gram matrix is tridiagonal with 2 on the diagonal and -1 next
//! to it. A sum-zero vector `sum a_j v_j` has coordinates the partial sums
//! `c_k = a_1 + .. + a_k`; when `p | d` the all-ones vector is
//! `sum k e_k`, which lets us eliminate `e_{d-1}`.

use serde::{Deserialize, Serialize};

use crate::classes::{minus_one_in_omega, BlockSystem, ClassLabel, Decoration};
use crate::error::{Error, Result};
use crate::groups::{Family, GroupSpec};
use crate::numth::{is_prime, legendre};
use crate::oracle::forms::FormData;
use crate::oracle::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormKind {
    QuadraticOdd,
    QuadraticEven,
    Symplectic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum H0 {
    #[serde(rename = "S_d")]
    Symmetric,
    #[serde(rename = "A_d")]
    Alternating,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeletedModule {
    pub d: u32,
    pub p: u64,
    pub n: u32,
    /// Gram matrix of the bilinear form; for `p = 2` this is the polar form.
    pub gram: Matrix,
    pub form_kind: FormKind,
    pub epsilon: Option<i8>,
    /// `Q(e_i)` for `p = 2` when the quadratic form descends to `V`.
    pub q_diag: Option<Vec<u64>>,
}

pub fn module_dim(d: u32, p: u64) -> u32 {
    if d as u64 % p == 0 {
        d - 2
    } else {
        d - 1
    }
}

pub fn build(d: u32, p: u64) -> Result<DeletedModule> {
    if d < 5 {
        return Err(Error::pre("the deleted module needs d >= 5"));
    }
    if !is_prime(p) {
        return Err(Error::pre(format!("{p} is not prime")));
    }
    let n = module_dim(d, p);
    let mut gram = Matrix::zero(p, n as usize);
    for i in 0..n as usize {
        gram.set(i, i, 2);
        if i + 1 < n as usize {
            gram.set(i, i + 1, p - 1);
            gram.set(i + 1, i, p - 1);
        }
    }
    let form_kind = if p == 2 && d % 4 == 2 {
        FormKind::Symplectic
    } else if n % 2 == 1 {
        FormKind::QuadraticOdd
    } else {
        FormKind::QuadraticEven
    };
    let q_diag = (p == 2 && form_kind != FormKind::Symplectic).then(|| vec![1; n as usize]);
    let epsilon = match form_kind {
        FormKind::QuadraticEven => epsilon_type(d, p)?,
        _ => None,
    };
    Ok(DeletedModule { d, p, n, gram, form_kind, epsilon, q_diag })
}

/// Sign of the quadratic form on `V`, or `None` when `n` is odd.
pub fn epsilon_type(d: u32, p: u64) -> Result<Option<i8>> {
    if d < 5 {
        return Err(Error::pre("the deleted module needs d >= 5"));
    }
    let n = module_dim(d, p);
    if p == 2 {
        return match d % 8 {
            2 | 6 => Err(Error::pre("the form is symplectic when d = 2 mod 4")),
            0 | 1 | 7 => Ok(Some(1)),
            _ => Ok(Some(-1)),
        };
    }
    if n % 2 == 1 {
        return Ok(None);
    }
    if d as u64 % p == 0 {
        return Ok(Some(if d % 4 == 2 && p % 4 == 3 { -1 } else { 1 }));
    }
    let lhs = legendre((n + 1) as i64, p)?;
    let rhs: i8 = if (n as u64 * (p - 1) / 4) % 2 == 0 { 1 } else { -1 };
    Ok(Some(if lhs == rhs { 1 } else { -1 }))
}

pub fn h0_structure(d: u32, p: u64) -> Result<H0> {
    if d < 5 {
        return Err(Error::pre("the deleted module needs d >= 5"));
    }
    let n = module_dim(d, p);
    let sym = (p == 2 && d % 4 == 2) || (p % 2 == 1 && n % 2 == 1 && legendre(((n + 1) / 2) as i64, p)? == 1);
    Ok(if sym { H0::Symmetric } else { H0::Alternating })
}

impl DeletedModule {
    /// Coordinates in `β` of the sum-zero vector `a` of `F_p^d`.
    pub fn coordinates(&self, a: &[i64]) -> Vec<u64> {
        let p = self.p as i64;
        let mut c = Vec::with_capacity(a.len());
        let mut acc = 0i64;
        for &x in &a[..a.len() - 1] {
            acc = (acc + x).rem_euclid(p);
            c.push(acc as u64);
        }
        debug_assert_eq!((acc + a[a.len() - 1]).rem_euclid(p), 0, "vector must sum to zero");
        if self.n as usize == c.len() {
            return c;
        }
        let last = c.pop().unwrap();
        for (k, x) in c.iter_mut().enumerate() {
            *x = (*x + last * (k as u64 + 1)) % self.p;
        }
        c
    }

    /// The matrix of `v_i -> v_{perm[i]}` on `V`, acting on row vectors.
    pub fn permutation_matrix(&self, perm: &[usize]) -> Result<Matrix> {
        check_perm(perm, self.d)?;
        let n = self.n as usize;
        let mut m = Matrix::zero(self.p, n);
        for i in 0..n {
            let mut a = vec![0i64; self.d as usize];
            a[perm[i]] += 1;
            a[perm[i + 1]] -= 1;
            let row = self.coordinates(&a);
            for (j, x) in row.into_iter().enumerate() {
                m.set(i, j, x);
            }
        }
        Ok(m)
    }

    /// `Q(v)` for `p = 2`, computed by lifting to `U` and halving the weight.
    pub fn q_value(&self, v: &[u64]) -> Result<u64> {
        if self.p != 2 || self.form_kind == FormKind::Symplectic {
            return Err(Error::pre("Q is defined on V only for p = 2, d != 2 mod 4"));
        }
        let mut prev = 0u64;
        let mut weight = 0u64;
        for &c in v {
            weight += (c ^ prev) & 1;
            prev = c & 1;
        }
        weight += prev;
        Ok((weight / 2) % 2)
    }

    pub fn form_data(&self) -> Option<FormData> {
        match (self.form_kind, &self.q_diag) {
            (FormKind::Symplectic, _) => None,
            (_, Some(diag)) => Some(FormData::Quadratic { polar: self.gram.clone(), diag: diag.clone() }),
            (_, None) => Some(FormData::Symmetric(self.gram.clone())),
        }
    }

    /// The simple classical group this module realises, when the form is one.
    pub fn target(&self) -> Result<GroupSpec> {
        let fam = match self.form_kind {
            FormKind::Symplectic => Family::Psp,
            FormKind::QuadraticOdd => Family::OmegaOdd,
            FormKind::QuadraticEven => {
                if self.epsilon == Some(1) {
                    Family::POmegaPlus
                } else {
                    Family::POmegaMinus
                }
            }
        };
        GroupSpec::new(fam, self.n, self.p, 1)
    }
}

fn check_perm(perm: &[usize], d: u32) -> Result<()> {
    let mut seen = vec![false; d as usize];
    if perm.len() != d as usize {
        return Err(Error::pre("permutation has the wrong degree"));
    }
    for &x in perm {
        if x >= d as usize || seen[x] {
            return Err(Error::pre("not a permutation"));
        }
        seen[x] = true;
    }
    Ok(())
}

/// `compose(s, t)` first applies `s`, then `t`, matching the row action:
/// `M(compose(s, t)) = M(s) M(t)`.
pub fn compose(s: &[usize], t: &[usize]) -> Vec<usize> {
    s.iter().map(|&i| t[i]).collect()
}

/// A permutation of cycle shape `(r^h, 1^s)`, as an element of `S_d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleType {
    pub r: u64,
    pub h: u32,
    pub s: u32,
}

impl CycleType {
    pub fn new(r: u64, h: u32, s: u32) -> Result<CycleType> {
        if !is_prime(r) || h == 0 {
            return Err(Error::pre("cycle type needs a prime r and h >= 1"));
        }
        let ct = CycleType { r, h, s };
        if ct.d() < 5 {
            return Err(Error::pre("cycle types are taken in S_d with d >= 5"));
        }
        Ok(ct)
    }

    pub fn d(&self) -> u32 {
        self.r as u32 * self.h + self.s
    }

    pub fn is_even(&self) -> bool {
        self.r % 2 == 1 || self.h % 2 == 0
    }

    /// `(1, .., r)(r+1, .., 2r)..` with the remaining points fixed.
    pub fn representative(&self) -> Vec<usize> {
        let r = self.r as usize;
        let mut perm: Vec<usize> = (0..self.d() as usize).collect();
        for b in 0..self.h as usize {
            for k in 0..r {
                perm[b * r + k] = b * r + (k + 1) % r;
            }
        }
        perm
    }

    /// Parses `r^h,1^s`, `r^h` or `r`.
    pub fn parse(s: &str) -> Result<CycleType> {
        let bad = || Error::Parse { pos: 0, msg: format!("bad cycle type `{s}`") };
        let mut r = None;
        let mut h = 0;
        let mut fixed = 0;
        for part in s.split(',') {
            let (base, exp) = match part.trim().split_once('^') {
                Some((b, e)) => (b.trim(), e.trim().parse::<u32>().map_err(|_| bad())?),
                None => (part.trim(), 1),
            };
            let base: u64 = base.parse().map_err(|_| bad())?;
            if base == 1 {
                fixed += exp;
            } else if r.is_none() {
                r = Some(base);
                h = exp;
            } else {
                return Err(bad());
            }
        }
        CycleType::new(r.ok_or_else(bad)?, h, fixed)
    }
}

fn check_ct(ct: &CycleType, d: u32) -> Result<()> {
    if ct.d() != d {
        return Err(Error::pre(format!("cycle type moves {} points, not d = {d}", ct.d())));
    }
    Ok(())
}

/// Jordan form of an element of order `p` on `V`.
pub fn jordan_of_cycle_shape(ct: &CycleType, d: u32, p: u64) -> Result<ClassLabel> {
    check_ct(ct, d)?;
    if ct.r != p {
        return Err(Error::pre("Jordan forms are for r = p"));
    }
    let (h, s) = (ct.h, ct.s);
    let pu = p as u32;
    let divides = d as u64 % p == 0;
    let mut parts = Vec::new();
    let mut push = |size: u32, count: u32| parts.extend(std::iter::repeat_n(size, count as usize));
    if s >= 1 && !divides {
        push(pu, h);
        push(1, s - 1);
    } else if s >= 1 {
        push(pu, h);
        push(1, s - 2);
    } else if h as u64 % p != 0 {
        push(pu, h - 1);
        push(pu - 2, 1);
    } else if h != 2 {
        push(pu, h - 2);
        push(pu - 1, 2);
    } else {
        push(2, 1);
    }
    parts.retain(|&x| x > 0);
    Ok(ClassLabel::unipotent(p, parts))
}

/// Multiplicity of each nontrivial `r`-th root of unity, and of 1, as
/// eigenvalues of an element of shape `(r^h, 1^s)` on `V`.
pub fn eigen_multiplicity(ct: &CycleType, d: u32, p: u64) -> Result<(u32, u32)> {
    check_ct(ct, d)?;
    if ct.r == p {
        return Err(Error::pre("eigenvalue multiplicities are for r != p"));
    }
    let n = module_dim(d, p) as i64;
    let trivial = n - ct.h as i64 * (ct.r as i64 - 1);
    if trivial < 0 {
        return Err(Error::pre("h(r-1) exceeds the module dimension"));
    }
    Ok((ct.h, trivial as u32))
}

/// Aschbacher-Seitz type of a unipotent involution in characteristic two.
pub fn involution_decoration(gram: &Matrix, x: &Matrix, ell: u32) -> Decoration {
    let n = gram.n;
    let alternating = (0..n).all(|i| {
        let mut e = vec![0u64; n];
        e[i] = 1;
        gram.form(&e, &x.apply(&e)) == 0
    });
    if alternating {
        Decoration::A
    } else if ell % 2 == 1 {
        Decoration::B
    } else {
        Decoration::C
    }
}

/// The `T`-class containing the image of a permutation of shape `ct`.
pub fn fuse_cycle_type(ct: &CycleType, d: u32, p: u64, spec: &GroupSpec) -> Result<ClassLabel> {
    check_ct(ct, d)?;
    let dm = build(d, p)?;
    let target = dm.target()?;
    if spec.canonical() != target.canonical() {
        return Err(Error::pre(format!("{spec} is not the socle realised by A_{d} over F_{p}")));
    }
    let h0 = h0_structure(d, p)?;
    if !ct.is_even() && h0 == H0::Alternating {
        return Err(Error::pre("odd permutations do not lie in H_0 = A_d"));
    }
    let n = dm.n;
    if ct.r == p {
        let mut label = jordan_of_cycle_shape(ct, d, p)?;
        if p == 2 {
            let x = dm.permutation_matrix(&ct.representative())?;
            if let ClassLabel::Unipotent { jordan, decoration, .. } = &mut label {
                let ell = jordan.iter().filter(|&&j| j == 2).count() as u32;
                *decoration = Some(involution_decoration(&dm.gram, &x, ell));
            }
        }
        return Ok(label);
    }
    if ct.r == 2 {
        // Odd permutations have determinant -1; their class in T is that of
        // the negative, which exists since n is then odd.
        let mut k = if ct.is_even() { ct.h } else { n - ct.h };
        if let Some(eps) = spec.epsilon().filter(|_| spec.is_orthogonal() && n % 2 == 0) {
            if minus_one_in_omega(n, p, eps) {
                k = k.min(n - k);
            }
        }
        return Ok(ClassLabel::Involution { n, minus_dim: k, decoration: Decoration::T });
    }
    let (h, e) = eigen_multiplicity(ct, d, p)?;
    let bs = BlockSystem::new(spec, ct.r)?;
    let mult = (0..bs.blocks.len() as u32).map(|j| (j, h)).collect();
    let splits = e == 0 && matches!(spec.family, Family::POmegaPlus | Family::POmegaMinus);
    Ok(ClassLabel::Semisimple { r: ct.r, c: bs.c, mult, e, splits })
}
