//! Conjugacy classes of elements and subgroups of prime order `r` in the
//! finite classical groups.
//!
//! Semisimple classes (`r != p`, `r` odd) are labelled by how often each
//! block of eigenvalues occurs, where a block is an orbit of the group
//! `G_T <= (Z/r)^*` generated by the family's Galois twist:
//!
//! * linear: `<q>`
//! * unitary: `<-q>`
//! * symplectic and orthogonal: `<q, -1>`
//!
//! Every block has exactly `c` elements, so a label
//! `[X_1^{a_1}, ..., X_t^{a_t}, I_e]` satisfies `c * sum(a_j) + e = n`.
//! Two elements of order `r` generate conjugate subgroups exactly when their
//! labels differ by scaling all exponents by a unit mod `r`; subgroup classes
//! are the orbits of that scaling action.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{c_value, group_order, Family, GroupSpec};
use crate::numth::{gcd, is_prime, mul_mod, p_bounded_partitions, phi_rq, valuation_big};

/// Orbits of `w -> w^q` on the nontrivial `r`-th roots of unity, recorded by
/// exponent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusOrbitSystem {
    pub r: u64,
    pub q: u64,
    pub i: u32,
    pub t: u32,
    pub orbits: Vec<Vec<u32>>,
    pub inverse_pairing: Vec<usize>,
}

fn orbits_under(r: u64, gens: &[u64]) -> Vec<Vec<u32>> {
    let mut seen = vec![false; r as usize];
    let mut out = Vec::new();
    for start in 1..r {
        if seen[start as usize] {
            continue;
        }
        let mut orbit = BTreeSet::new();
        let mut stack = vec![start];
        while let Some(k) = stack.pop() {
            if orbit.insert(k as u32) {
                seen[k as usize] = true;
                for &g in gens {
                    stack.push(mul_mod(k, g, r));
                }
            }
        }
        out.push(orbit.into_iter().collect());
    }
    out
}

fn orbit_index(orbits: &[Vec<u32>], r: u64) -> Vec<usize> {
    let mut idx = vec![usize::MAX; r as usize];
    for (j, o) in orbits.iter().enumerate() {
        for &k in o {
            idx[k as usize] = j;
        }
    }
    idx
}

pub fn root_orbits(r: u64, q: u64) -> Result<FrobeniusOrbitSystem> {
    if r == 2 || !is_prime(r) {
        return Err(Error::pre(format!("r = {r} must be an odd prime")));
    }
    let i = phi_rq(r, q)?;
    let orbits = orbits_under(r, &[q % r]);
    let idx = orbit_index(&orbits, r);
    let inverse_pairing = orbits.iter().map(|o| idx[(r - o[0] as u64) as usize]).collect();
    Ok(FrobeniusOrbitSystem { r, q, i, t: orbits.len() as u32, orbits, inverse_pairing })
}

/// The eigenvalue blocks for `T` and an odd prime `r != p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSystem {
    pub r: u64,
    pub i: u32,
    pub c: u32,
    pub blocks: Vec<Vec<u32>>,
    index: Vec<usize>,
}

impl BlockSystem {
    pub fn new(spec: &GroupSpec, r: u64) -> Result<BlockSystem> {
        let c = c_value(spec, r)?;
        let q = spec.q() % r;
        let gens: Vec<u64> = match spec.family {
            Family::Psl => vec![q],
            Family::Psu => vec![(r - q) % r],
            _ => vec![q, r - 1],
        };
        let blocks = orbits_under(r, &gens);
        debug_assert!(blocks.iter().all(|b| b.len() as u32 == c));
        let index = orbit_index(&blocks, r);
        Ok(BlockSystem { r, i: phi_rq(r, spec.q())?, c, blocks, index })
    }

    pub fn block_of(&self, k: u64) -> usize {
        self.index[(k % self.r) as usize]
    }

    /// Sum of the exponents in block `j`, which governs the determinant.
    fn block_sum(&self, j: usize) -> u64 {
        self.blocks[j].iter().map(|&k| k as u64).sum::<u64>() % self.r
    }

    /// Permutation of block indices induced by `w -> w^k`.
    pub fn scale(&self, k: u64) -> Vec<usize> {
        self.blocks.iter().map(|b| self.block_of(b[0] as u64 * k)).collect()
    }
}

/// Involution decorations. `T` and `TPrime` separate involutions that square
/// to the identity from those whose preimage squares to `-I`; `A`, `B` and
/// `C` are the characteristic-two types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Decoration {
    #[serde(rename = "t")]
    T,
    #[serde(rename = "t'")]
    TPrime,
    #[serde(rename = "a")]
    A,
    #[serde(rename = "b")]
    B,
    #[serde(rename = "c")]
    C,
    #[serde(rename = "none")]
    Undecorated,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ClassLabel {
    /// Multiplicities of eigenvalue blocks. `mult` lists `(block, a_j)` for
    /// the nonzero `a_j`, with blocks numbered from 0 in order of their least
    /// exponent.
    Semisimple { r: u64, c: u32, mult: Vec<(u32, u32)>, e: u32, splits: bool },
    /// Jordan partition, parts in decreasing order. `classes` is how many
    /// `T`-classes share it where that is known (linear and unitary groups).
    Unipotent { p: u64, jordan: Vec<u32>, decoration: Option<Decoration>, classes: u32 },
    /// Odd-characteristic involution by the dimension of its `(-1)`-eigenspace.
    /// For `TPrime` the preimage has no real eigenvalues and `minus_dim` is `n/2`.
    Involution { n: u32, minus_dim: u32, decoration: Decoration },
}

impl ClassLabel {
    pub fn order(&self) -> u64 {
        match self {
            ClassLabel::Semisimple { r, .. } => *r,
            ClassLabel::Unipotent { p, .. } => *p,
            ClassLabel::Involution { .. } => 2,
        }
    }

    pub fn dim(&self) -> u32 {
        match self {
            ClassLabel::Semisimple { c, mult, e, .. } => c * mult.iter().map(|m| m.1).sum::<u32>() + e,
            ClassLabel::Unipotent { jordan, .. } => jordan.iter().sum(),
            ClassLabel::Involution { n, .. } => *n,
        }
    }

    pub fn unipotent(p: u64, mut jordan: Vec<u32>) -> ClassLabel {
        jordan.sort_unstable_by(|a, b| b.cmp(a));
        ClassLabel::Unipotent { p, jordan, decoration: None, classes: 1 }
    }
}

fn power_str(base: &str, k: u32) -> String {
    if k == 1 {
        base.to_string()
    } else {
        format!("{base}^{k}")
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self {
            ClassLabel::Semisimple { mult, e, .. } => {
                for &(b, a) in mult {
                    parts.push(power_str(&format!("X{}", b + 1), a));
                }
                if *e > 0 {
                    parts.push(format!("I{e}"));
                }
            }
            ClassLabel::Unipotent { jordan, decoration, .. } => {
                let mut k = 0;
                while k < jordan.len() {
                    let mut j = k;
                    while j < jordan.len() && jordan[j] == jordan[k] {
                        j += 1;
                    }
                    parts.push(power_str(&format!("J{}", jordan[k]), (j - k) as u32));
                    k = j;
                }
                if let Some(d) = decoration {
                    let tag = match d {
                        Decoration::A => "a",
                        Decoration::B => "b",
                        Decoration::C => "c",
                        _ => "",
                    };
                    let ell = jordan.iter().filter(|&&x| x == 2).count();
                    return write!(f, "{tag}{ell}[{}]", parts.join(", "));
                }
            }
            ClassLabel::Involution { n, minus_dim, decoration } => {
                if *decoration == Decoration::TPrime {
                    return write!(f, "t'{}", n / 2);
                }
                parts.push(format!("-I{minus_dim}"));
                if n > minus_dim {
                    parts.push(format!("I{}", n - minus_dim));
                }
            }
        }
        write!(f, "[{}]", parts.join(", "))
    }
}

pub(crate) fn r_divides_order(spec: &GroupSpec, r: u64) -> Result<()> {
    if valuation_big(&group_order(spec)?, r) == 0 {
        return Err(Error::pre(format!("{r} does not divide |{spec}|")));
    }
    Ok(())
}

/// Whether `r` divides the order of the scalar subgroup being factored out,
/// which is where preimages of order-`r` elements stop being of order `r`.
pub(crate) fn scalar_r_torsion(spec: &GroupSpec, r: u64) -> bool {
    let q = spec.q();
    let n = spec.n as u64;
    match spec.family {
        Family::Psl => gcd(n, q - 1) % r == 0,
        Family::Psu => gcd(n, q + 1) % r == 0,
        _ => false,
    }
}

/// For `i` even a block spans a minus-type space, for `i` odd a plus-type one.
fn block_sign(i: u32) -> i8 {
    if i % 2 == 0 {
        -1
    } else {
        1
    }
}

/// Semisimple labels, stopping once `limit` have been found. The flag is
/// true when the list is complete. The walk only tracks nonzero
/// multiplicities, so its depth is at most `n / c` however many blocks
/// there are.
fn semisimple_labels(spec: &GroupSpec, bs: &BlockSystem, limit: usize) -> (Vec<ClassLabel>, bool) {
    struct Walk<'a> {
        spec: &'a GroupSpec,
        bs: &'a BlockSystem,
        sums: Vec<u64>,
        sel: Vec<(u32, u32)>,
        out: Vec<ClassLabel>,
        limit: usize,
    }
    impl Walk<'_> {
        fn leaf(&mut self) {
            let used: u32 = self.sel.iter().map(|m| m.1).sum();
            if used == 0 {
                return;
            }
            let bs = self.bs;
            let e = self.spec.n - used * bs.c;
            let det = self.sel.iter().map(|&(k, x)| x as u64 * self.sums[k as usize]).sum::<u64>() % bs.r;
            if det != 0 {
                return;
            }
            if e == 0 {
                if let Some(eps) = self.spec.epsilon().filter(|_| self.spec.is_orthogonal()) {
                    let s = if block_sign(bs.i) < 0 && used % 2 == 1 { -1 } else { 1 };
                    if s != eps {
                        return;
                    }
                }
            }
            let splits = e == 0 && matches!(self.spec.family, Family::POmegaPlus | Family::POmegaMinus);
            self.out.push(ClassLabel::Semisimple { r: bs.r, c: bs.c, mult: self.sel.clone(), e, splits });
        }

        /// Visits every extension of `sel` by blocks from `start` on.
        /// Returns false once the limit is hit.
        fn rec(&mut self, start: usize, room: u32) -> bool {
            self.leaf();
            if self.out.len() >= self.limit {
                return false;
            }
            for k in start..self.sums.len() {
                for x in 1..=room {
                    self.sel.push((k as u32, x));
                    let go = self.rec(k + 1, room - x);
                    self.sel.pop();
                    if !go {
                        return false;
                    }
                }
            }
            true
        }
    }
    let sums = (0..bs.blocks.len()).map(|k| bs.block_sum(k)).collect();
    let mut w = Walk { spec, bs, sums, sel: Vec::new(), out: Vec::new(), limit };
    let complete = w.rec(0, spec.n / bs.c);
    let mut out = w.out;
    out.sort();
    (out, complete)
}

fn char2_involutions(spec: &GroupSpec) -> Vec<ClassLabel> {
    let n = spec.n;
    let m = n / 2;
    let mk = |ell: u32, d: Option<Decoration>| {
        let mut j = vec![2; ell as usize];
        j.extend(std::iter::repeat_n(1, (n - 2 * ell) as usize));
        ClassLabel::Unipotent { p: 2, jordan: j, decoration: d, classes: 1 }
    };
    let mut out = Vec::new();
    match spec.family {
        Family::Psl | Family::Psu => {
            for ell in 1..=m {
                out.push(mk(ell, None));
            }
        }
        Family::Psp => {
            for ell in 1..=m {
                if ell % 2 == 1 {
                    out.push(mk(ell, Some(Decoration::B)));
                } else {
                    out.push(mk(ell, Some(Decoration::A)));
                    out.push(mk(ell, Some(Decoration::C)));
                }
            }
        }
        Family::POmegaPlus | Family::POmegaMinus => {
            for ell in (2..=m).step_by(2) {
                if ell < m || spec.family == Family::POmegaPlus {
                    let mut l = mk(ell, Some(Decoration::A));
                    if ell == m {
                        if let ClassLabel::Unipotent { classes, .. } = &mut l {
                            *classes = 2;
                        }
                    }
                    out.push(l);
                }
                out.push(mk(ell, Some(Decoration::C)));
            }
        }
        Family::OmegaOdd => {}
    }
    out
}

/// Whether `-I` lies in `Omega^eps_n(p^f)` for odd `p` and even `n`.
pub fn minus_one_in_omega(n: u32, q: u64, eps: i8) -> bool {
    let t = crate::numth::pow_mod(q, (n / 2) as u64, 4);
    (eps > 0 && t == 1) || (eps < 0 && t == 3)
}

/// Whether `Omega^eps_n(q)`, `q` odd and `n` even, has an element squaring
/// to `-I`.
///
/// For `q = 1 mod 4` such an element acts as `i` and `-i` on a pair of
/// totally singular `n/2`-spaces, so the type is `+` and its spinor norm is
/// `i^{n/2}`. For `q = 3 mod 4` it turns `V` into a hermitian space over
/// `F_{q^2}` of dimension `n/2`, forcing type `(-)^{n/2}`, with spinor norm
/// trivial exactly when `n/2` is even or `q = 7 mod 8`.
pub fn omega_has_square_root_of_minus_one(n: u32, q: u64, eps: i8) -> bool {
    let half_even = (n / 2) % 2 == 0;
    if q % 4 == 1 {
        eps > 0 && (half_even || q % 8 == 1)
    } else {
        let want: i8 = if half_even { 1 } else { -1 };
        eps == want && (half_even || q % 8 == 7)
    }
}

fn odd_char_involutions(spec: &GroupSpec) -> Vec<ClassLabel> {
    let n = spec.n;
    let q = spec.q();
    let inv = |k: u32, d: Decoration| ClassLabel::Involution { n, minus_dim: k, decoration: d };
    let mut out = Vec::new();
    match spec.family {
        Family::OmegaOdd => {
            for k in (2..n).step_by(2) {
                out.push(inv(k, Decoration::T));
            }
        }
        Family::POmegaPlus | Family::POmegaMinus => {
            let eps = spec.epsilon().unwrap();
            let central = minus_one_in_omega(n, q, eps);
            let top = if central { n / 2 } else { n - 2 };
            for k in (2..=top).step_by(2) {
                out.push(inv(k, Decoration::T));
            }
            if central && omega_has_square_root_of_minus_one(n, q, eps) {
                out.push(inv(n / 2, Decoration::TPrime));
            }
        }
        Family::Psl | Family::Psu | Family::Psp => {
            let even_n = n % 2 == 0;
            let top = if even_n { n / 2 } else { n - 1 };
            for k in (2..=top).step_by(2) {
                out.push(inv(k, Decoration::Undecorated));
            }
            if even_n {
                out.push(inv(n / 2, Decoration::TPrime));
            }
        }
    }
    out
}

fn unipotent_labels(spec: &GroupSpec) -> Vec<ClassLabel> {
    let p = spec.p;
    let n = spec.n;
    let eps_q = match spec.family {
        Family::Psu => spec.q() + 1,
        _ => spec.q() - 1,
    };
    let mut out = Vec::new();
    for lam in p_bounded_partitions(n, p.min(n as u64) as u32) {
        if lam.parts.iter().all(|&x| x == 1) {
            continue;
        }
        let ok = match spec.family {
            Family::Psp => parity_ok(&lam.parts, 1),
            f if f.is_orthogonal() => parity_ok(&lam.parts, 0),
            _ => true,
        };
        if !ok {
            continue;
        }
        let classes = match spec.family {
            Family::Psl | Family::Psu => gcd(lam.d(), eps_q) as u32,
            _ => 1,
        };
        out.push(ClassLabel::Unipotent { p, jordan: lam.parts, decoration: None, classes });
    }
    out
}

/// Parts of size congruent to `bad_parity` mod 2 must occur an even number
/// of times.
fn parity_ok(parts: &[u32], bad_parity: u32) -> bool {
    let mut k = 0;
    while k < parts.len() {
        let mut j = k;
        while j < parts.len() && parts[j] == parts[k] {
            j += 1;
        }
        if parts[k] % 2 == bad_parity && (j - k) % 2 == 1 {
            return false;
        }
        k = j;
    }
    true
}

/// All classes of elements of order `r` in `T`, one label per class up to
/// the documented splittings.
pub fn enumerate_element_classes(spec: &GroupSpec, r: u64) -> Result<Vec<ClassLabel>> {
    Ok(enumerate_element_classes_bounded(spec, r, usize::MAX)?.0)
}

/// As [`enumerate_element_classes`], but stops after `limit` semisimple
/// labels. The flag reports whether the list is complete.
pub fn enumerate_element_classes_bounded(spec: &GroupSpec, r: u64, limit: usize) -> Result<(Vec<ClassLabel>, bool)> {
    spec.validate()?;
    if !is_prime(r) {
        return Err(Error::pre(format!("r = {r} is not prime")));
    }
    r_divides_order(spec, r)?;
    if r == spec.p {
        if r == 2 {
            return Ok((char2_involutions(spec), true));
        }
        return Ok((unipotent_labels(spec), true));
    }
    if r == 2 {
        return Ok((odd_char_involutions(spec), true));
    }
    if scalar_r_torsion(spec, r) {
        return Err(Error::unsupported(format!("{r} divides the order of the scalars factored out of {spec}")));
    }
    let bs = BlockSystem::new(spec, r)?;
    Ok(semisimple_labels(spec, &bs, limit))
}

/// Number of multiplicity vectors the semisimple enumeration would visit,
/// saturating at `u128::MAX`.
pub fn semisimple_search_space(spec: &GroupSpec, r: u64) -> Result<u128> {
    let bs = BlockSystem::new(spec, r)?;
    let t = bs.blocks.len() as u128;
    let m = (spec.n / bs.c) as u128;
    // Vectors in N^t with sum at most m: binomial(m + t, t).
    let mut acc: u128 = 1;
    for k in 1..=t {
        acc = acc.saturating_mul(m + k) / k;
    }
    Ok(acc)
}

/// Whether exhaustive enumeration is cheap enough to run.
pub fn enumeration_feasible(spec: &GroupSpec, r: u64) -> bool {
    if r == 2 || r == spec.p {
        return true;
    }
    semisimple_search_space(spec, r).map(|s| s <= 2_000_000).unwrap_or(false)
}

fn scale_label(label: &ClassLabel, perm: &[usize]) -> ClassLabel {
    match label {
        ClassLabel::Semisimple { r, c, mult, e, splits } => {
            let mut m: Vec<(u32, u32)> = mult.iter().map(|&(b, a)| (perm[b as usize] as u32, a)).collect();
            m.sort();
            ClassLabel::Semisimple { r: *r, c: *c, mult: m, e: *e, splits: *splits }
        }
        other => other.clone(),
    }
}

/// Classes of subgroups of order `r` (odd, not `p`), each given as the set
/// of element labels it contains.
pub fn enumerate_subgroup_classes(spec: &GroupSpec, r: u64) -> Result<Vec<Vec<ClassLabel>>> {
    if r == 2 || r == spec.p {
        return Err(Error::unsupported("subgroup classes are enumerated for odd r != p"));
    }
    let labels = enumerate_element_classes(spec, r)?;
    let bs = BlockSystem::new(spec, r)?;
    let perms: Vec<Vec<usize>> = (1..r).map(|k| bs.scale(k)).collect();
    let all: BTreeSet<ClassLabel> = labels.iter().cloned().collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for l in &labels {
        if seen.contains(l) {
            continue;
        }
        let orbit: BTreeSet<ClassLabel> = perms.iter().map(|p| scale_label(l, p)).collect();
        debug_assert!(orbit.is_subset(&all));
        seen.extend(orbit.iter().cloned());
        out.push(orbit.into_iter().collect());
    }
    Ok(out)
}

/// `κ(T, r)` by exhaustive enumeration, for odd `r != p`.
pub fn kappa_exact(spec: &GroupSpec, r: u64) -> Result<u64> {
    Ok(enumerate_subgroup_classes(spec, r)?.len() as u64)
}

/// Codimension of the largest eigenspace over the algebraic closure.
pub fn nu_of_label(label: &ClassLabel, _spec: &GroupSpec) -> u32 {
    match label {
        ClassLabel::Semisimple { mult, e, .. } => {
            let top = mult.iter().map(|m| m.1).max().unwrap_or(0).max(*e);
            label.dim() - top
        }
        ClassLabel::Unipotent { jordan, .. } => label.dim() - jordan.len() as u32,
        ClassLabel::Involution { n, minus_dim, decoration } => {
            if *decoration == Decoration::TPrime {
                n / 2
            } else {
                n - (*minus_dim).max(n - minus_dim)
            }
        }
    }
}

/// An order-`r` class whose `ν` is at most `max{2, √n/2}`, when one exists.
/// Such a class can never meet a subgroup covered by the Guralnick-Saxl
/// bound, so it witnesses a derangement.
pub fn guralnick_saxl_witness(spec: &GroupSpec, r: u64) -> Result<Option<ClassLabel>> {
    let n = spec.n;
    if n < 6 {
        return Err(Error::pre("the bound needs n >= 6"));
    }
    if r == spec.p {
        let mut j = vec![2, 2];
        j.extend(std::iter::repeat_n(1, (n - 4) as usize));
        let mut l = ClassLabel::unipotent(r, j);
        if r == 2 {
            if let ClassLabel::Unipotent { decoration, .. } = &mut l {
                *decoration = match spec.family {
                    Family::Psl | Family::Psu => None,
                    _ => Some(Decoration::A),
                };
            }
        }
        return Ok(Some(l));
    }
    if r == 2 {
        let d = if spec.is_orthogonal() { Decoration::T } else { Decoration::Undecorated };
        return Ok(Some(ClassLabel::Involution { n, minus_dim: 2, decoration: d }));
    }
    r_divides_order(spec, r)?;
    if scalar_r_torsion(spec, r) {
        return Err(Error::unsupported(format!("{r} divides the order of the scalars factored out of {spec}")));
    }
    let bs = BlockSystem::new(spec, r)?;
    let c = bs.c;
    let within = c <= 2 || 4 * c * c <= n;
    if !within {
        return Ok(None);
    }
    // For c = 1 pair an eigenvalue with its inverse; otherwise a single block
    // already has determinant 1.
    let mut mult = vec![(bs.block_of(1) as u32, 1)];
    if c == 1 {
        mult.push((bs.block_of(r - 1) as u32, 1));
        mult.sort();
    }
    let e = n - c * mult.len() as u32;
    Ok(Some(ClassLabel::Semisimple { r, c, mult, e, splits: false }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(f: Family, n: u32, q: u64) -> GroupSpec {
        GroupSpec::with_q(f, n, q).unwrap()
    }

    #[test]
    fn orbit_examples() {
        let s = root_orbits(5, 7).unwrap();
        assert_eq!((s.i, s.t), (4, 1));
        assert_eq!(s.orbits, vec![vec![1, 2, 3, 4]]);
        assert_eq!(s.inverse_pairing, vec![0]);
        let s = root_orbits(7, 2).unwrap();
        assert_eq!(s.orbits, vec![vec![1, 2, 4], vec![3, 5, 6]]);
        assert_eq!(s.inverse_pairing, vec![1, 0]);
        let s = root_orbits(5, 11).unwrap();
        assert_eq!(s.t, 4);
        assert_eq!(s.inverse_pairing, vec![3, 2, 1, 0]);
        assert!(root_orbits(5, 25).is_err());
    }

    #[test]
    fn psl2_11_order_five() {
        let ls = enumerate_element_classes(&g(Family::Psl, 2, 11), 5).unwrap();
        assert_eq!(ls.len(), 2);
        assert!(ls.iter().all(|l| matches!(l, ClassLabel::Semisimple { e: 0, .. })));
    }

    #[test]
    fn order_five_in_psl3() {
        // 5 divides |PSL3(4)| = 20160 with c = 2, so [X_j, I_1] classes exist.
        let ls = enumerate_element_classes(&g(Family::Psl, 3, 4), 5).unwrap();
        assert_eq!(ls.len(), 2);
        assert!(matches!(enumerate_element_classes(&g(Family::Psl, 3, 2), 5), Err(Error::Precondition(_))));
    }

    #[test]
    fn omega15_19_order_seven() {
        let s = g(Family::OmegaOdd, 15, 19);
        let ls = enumerate_element_classes(&s, 7).unwrap();
        let shown: Vec<String> = ls.iter().map(|l| l.to_string()).collect();
        assert_eq!(shown, vec!["[X1, I9]", "[X1^2, I3]"]);
        assert_eq!(kappa_exact(&s, 7).unwrap(), 2);
    }

    #[test]
    fn psl4_16_fusion() {
        // Blocks are {k, -k} mod 17; X2 and X8 are the blocks of 2 and 8.
        let s = g(Family::Psl, 4, 16);
        let classes = enumerate_subgroup_classes(&s, 17).unwrap();
        let bs = BlockSystem::new(&s, 17).unwrap();
        let lab = |a: u64, b: u64| {
            let mut m = vec![(bs.block_of(a) as u32, 1), (bs.block_of(b) as u32, 1)];
            m.sort();
            ClassLabel::Semisimple { r: 17, c: 2, mult: m, e: 0, splits: false }
        };
        let x12 = lab(1, 2);
        let x18 = lab(1, 8);
        let home = classes.iter().find(|c| c.contains(&x12)).unwrap();
        assert!(home.contains(&x18));
        assert_eq!(classes.len(), 6);
    }

    #[test]
    fn minus_type_half_dimension() {
        let s = g(Family::POmegaMinus, 12, 2);
        assert_eq!(kappa_exact(&s, 7).unwrap(), 1);
    }

    #[test]
    fn nu_examples() {
        let s = g(Family::Psl, 8, 5);
        let id = ClassLabel::unipotent(5, vec![1; 8]);
        assert_eq!(nu_of_label(&id, &s), 0);
        let j = ClassLabel::unipotent(5, vec![2, 2, 1, 1, 1, 1]);
        assert_eq!(nu_of_label(&j, &s), 2);
        let x = ClassLabel::Semisimple { r: 7, c: 3, mult: vec![(0, 1)], e: 5, splits: false };
        assert_eq!(nu_of_label(&x, &s), 3);
    }

    #[test]
    fn witnesses() {
        let s = g(Family::OmegaOdd, 9, 5);
        let w = guralnick_saxl_witness(&s, 5).unwrap().unwrap();
        assert_eq!(w.to_string(), "[J2^2, J1^5]");
        let w = guralnick_saxl_witness(&s, 2).unwrap().unwrap();
        assert_eq!(nu_of_label(&w, &s), 2);
        // 11 = 1 mod 5, so c = 2 for OmegaOdd and the witness has nu = 2.
        let w = guralnick_saxl_witness(&g(Family::OmegaOdd, 9, 11), 5).unwrap().unwrap();
        assert_eq!(nu_of_label(&w, &s), 2);
        // c = 6 > max{2, 3/2} for r = 7, q = 19, n = 9.
        assert_eq!(guralnick_saxl_witness(&g(Family::OmegaOdd, 9, 19), 7).unwrap(), None);
        let w = guralnick_saxl_witness(&g(Family::Psl, 6, 11), 5).unwrap().unwrap();
        assert_eq!(nu_of_label(&w, &s), 2);
        for (spec, r) in [(g(Family::Psl, 6, 11), 5), (g(Family::Psu, 7, 4), 5), (g(Family::Psp, 8, 11), 5)] {
            let w = guralnick_saxl_witness(&spec, r).unwrap().unwrap();
            assert!(enumerate_element_classes(&spec, r).unwrap().contains(&w), "{spec} {w}");
        }
    }

    #[test]
    fn bounded_enumeration() {
        let s = g(Family::Psl, 12, 23);
        let (ls, complete) = enumerate_element_classes_bounded(&s, 11, 10).unwrap();
        assert_eq!((ls.len(), complete), (10, false));
        assert!(!enumeration_feasible(&g(Family::Psl, 20, 47), 23));
        assert!(enumeration_feasible(&g(Family::OmegaOdd, 15, 19), 7));
    }
}
