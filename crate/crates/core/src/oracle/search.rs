//! Generators for small groups, the `A_5` search inside `PSL_2(q)`, and the
//! class-intersection derangement test.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::oracle::forms::FormData;
use crate::oracle::group::{small_group_closure, ProjGroup, DEFAULT_CAP};
use crate::oracle::matrix::Matrix;

/// `[[1,1],[0,1]]` and `[[0,-1],[1,0]]`, which generate `SL_2(p)`.
pub fn psl2_generators(p: u64) -> Vec<Matrix> {
    vec![Matrix::from_rows(p, &[vec![1, 1], vec![0, 1]]), Matrix::from_rows(p, &[vec![0, -1], vec![1, 0]])]
}

/// All elementary transvections `I + E_ij`, which generate `SL_n(p)`.
pub fn sl_generators(n: usize, p: u64) -> Vec<Matrix> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mut m = Matrix::identity(p, n);
                m.set(i, j, 1);
                out.push(m);
            }
        }
    }
    out
}

/// The first `A_5` found as `<a, b>` with `|a| = 2`, `|b| = 3`, `|ab| = 5`,
/// scanning elements in closure order.
pub fn find_a5(t: &ProjGroup) -> Option<ProjGroup> {
    let orders = t.element_orders();
    let twos: Vec<usize> = (0..t.order()).filter(|&i| orders[i] == 2).collect();
    let threes: Vec<usize> = (0..t.order()).filter(|&i| orders[i] == 3).collect();
    for &a in &twos {
        let hit = threes.par_iter().find_first(|&&b| {
            let ab = t.elements[a].mul(&t.elements[b]);
            t.index_of(&ab).map(|k| orders[k]) == Some(5)
        });
        if let Some(&b) = hit {
            let h = small_group_closure(&[t.elements[a].clone(), t.elements[b].clone()], DEFAULT_CAP).ok()?;
            if h.order() == 60 {
                return Some(h);
            }
        }
    }
    None
}

/// Representatives (indices into `t.elements`) of the classes of elements
/// of order `r` in `t` that miss `h`. Empty means `t` is `r`-elusive on the
/// cosets of `h`.
pub fn derangement_search(t: &ProjGroup, h: &ProjGroup, r: u64) -> Result<Vec<usize>> {
    if t.order() % h.order() != 0 || (t.order() / h.order()) as u64 % r != 0 {
        return Err(Error::pre(format!("{r} does not divide the index")));
    }
    let mut h_idx = Vec::with_capacity(h.order());
    for m in &h.elements {
        h_idx.push(t.index_of(m).ok_or_else(|| Error::pre("subgroup is not contained in the group"))?);
    }
    let orders = t.element_orders();
    let ids = t.conjugacy_class_ids();
    let met: BTreeSet<u32> = h_idx.iter().filter(|&&i| orders[i] == r).map(|&i| ids[i]).collect();
    let mut seen = BTreeSet::new();
    let mut reps = Vec::new();
    for i in 0..t.order() {
        if orders[i] == r && !met.contains(&ids[i]) && seen.insert(ids[i]) {
            reps.push(i);
        }
    }
    Ok(reps)
}

/// Number of conjugacy classes of elements of order `r`.
pub fn count_classes_of_order(t: &ProjGroup, r: u64) -> usize {
    let orders = t.element_orders();
    let ids = t.conjugacy_class_ids();
    (0..t.order()).filter(|&i| orders[i] == r).map(|i| ids[i]).collect::<BTreeSet<_>>().len()
}

/// Exhaustive search for an isometry `y` of a small form with `y^r = 1`,
/// `y != 1` and a fixed space of the given dimension.
pub fn find_isometry(form: &FormData, r: u64, fixed_dim: usize) -> Option<Matrix> {
    let (p, k) = match form {
        FormData::Symmetric(g) => (g.p, g.n),
        FormData::Quadratic { polar, .. } => (polar.p, polar.n),
    };
    let total = p.checked_pow((k * k) as u32).filter(|&t| t <= 50_000_000)?;
    (0..total)
        .into_par_iter()
        .find_first(|&code| {
            let mut y = Matrix::zero(p, k);
            let mut c = code;
            for x in y.data.iter_mut() {
                *x = c % p;
                c /= p;
            }
            if !form.preserved_by(&y) || y.is_identity() || y.det() == 0 {
                return false;
            }
            let id = Matrix::identity(p, k);
            y.pow(r).is_identity() && k - y.sub(&id).rank() == fixed_dim
        })
        .map(|code| {
            let mut y = Matrix::zero(p, k);
            let mut c = code;
            for x in y.data.iter_mut() {
                *x = c % p;
                c /= p;
            }
            y
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a5_in_psl2_11() {
        let t = small_group_closure(&psl2_generators(11), DEFAULT_CAP).unwrap();
        assert_eq!(t.order(), 660);
        let h = find_a5(&t).unwrap();
        assert_eq!(h.order(), 60);
        assert!(!derangement_search(&t, &h, 11).unwrap().is_empty());
        // The index is 11, so an involution always fixes a point.
        assert!(derangement_search(&t, &h, 2).is_err());
        let t31 = small_group_closure(&psl2_generators(31), DEFAULT_CAP).unwrap();
        let h31 = find_a5(&t31).unwrap();
        assert!(derangement_search(&t31, &h31, 2).unwrap().is_empty());
    }

    #[test]
    fn psl3_2_closure() {
        let t = small_group_closure(&sl_generators(3, 2), DEFAULT_CAP).unwrap();
        assert_eq!(t.order(), 168);
    }
}
