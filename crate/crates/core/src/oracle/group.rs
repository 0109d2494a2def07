//! Brute-force projective matrix groups: closure, element orders and
//! conjugacy classes.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::oracle::matrix::Matrix;

pub const DEFAULT_CAP: usize = 2_000_000;

/// A group of matrices modulo scalars, every element stored in the
/// normalised form where the first nonzero entry is 1.
#[derive(Debug, Clone)]
pub struct ProjGroup {
    pub p: u64,
    pub n: usize,
    pub gens: Vec<Matrix>,
    pub elements: Vec<Matrix>,
    index: HashMap<Vec<u8>, u32>,
}

fn key(m: &Matrix) -> Vec<u8> {
    m.data.iter().map(|&x| x as u8).collect()
}

pub fn normalized(m: &Matrix) -> Matrix {
    let mut m = m.clone();
    m.normalize_projective();
    m
}

/// Breadth-first closure of the generators. Products of a frontier are
/// computed in parallel but inserted in a fixed order, so the element
/// numbering does not depend on the thread count.
pub fn small_group_closure(gens: &[Matrix], cap: usize) -> Result<ProjGroup> {
    let first = gens.first().ok_or_else(|| Error::pre("need at least one generator"))?;
    let (p, n) = (first.p, first.n);
    if p > 255 {
        return Err(Error::pre("closure keys need p < 256"));
    }
    if gens.iter().any(|g| g.p != p || g.n != n || g.det() == 0) {
        return Err(Error::pre("generators must be invertible and of one shape"));
    }
    let gens: Vec<Matrix> = gens.iter().map(normalized).collect();
    let id = Matrix::identity(p, n);
    let mut g = ProjGroup { p, n, gens: gens.clone(), elements: vec![id.clone()], index: HashMap::new() };
    g.index.insert(key(&id), 0);
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let products: Vec<Matrix> = frontier
            .par_iter()
            .flat_map_iter(|&i| {
                let x = &g.elements[i];
                gens.iter().map(move |s| normalized(&x.mul(s)))
            })
            .collect();
        let mut next = Vec::new();
        for m in products {
            let k = key(&m);
            if g.index.contains_key(&k) {
                continue;
            }
            if g.elements.len() >= cap {
                return Err(Error::CapExceeded(cap));
            }
            g.index.insert(k, g.elements.len() as u32);
            next.push(g.elements.len());
            g.elements.push(m);
        }
        frontier = next;
    }
    Ok(g)
}

impl ProjGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, m: &Matrix) -> Option<usize> {
        self.index.get(&key(&normalized(m))).map(|&i| i as usize)
    }

    /// Order of an element modulo scalars.
    pub fn element_order(&self, i: usize) -> u64 {
        let x = &self.elements[i];
        let mut acc = x.clone();
        let mut k = 1;
        while !normalized(&acc).is_identity() {
            acc = acc.mul(x);
            k += 1;
        }
        k
    }

    pub fn element_orders(&self) -> Vec<u64> {
        (0..self.order()).into_par_iter().map(|i| self.element_order(i)).collect()
    }

    /// Class id of every element under conjugation by the group. Classes are
    /// numbered by their least element index.
    pub fn conjugacy_class_ids(&self) -> Vec<u32> {
        let invs: Vec<Matrix> = self.gens.iter().map(|g| g.inverse().expect("invertible")).collect();
        let mut ids = vec![u32::MAX; self.order()];
        let mut next = 0u32;
        for start in 0..self.order() {
            if ids[start] != u32::MAX {
                continue;
            }
            ids[start] = next;
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                let x = &self.elements[i];
                for (g, gi) in self.gens.iter().zip(&invs) {
                    let y = gi.mul(x).mul(g);
                    let j = self.index_of(&y).expect("closed under conjugation");
                    if ids[j] == u32::MAX {
                        ids[j] = next;
                        stack.push(j);
                    }
                }
            }
            next += 1;
        }
        ids
    }
}
