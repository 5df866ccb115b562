use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{FgAbGroup, GroupHom};
use crate::{Error, Result};

/// Every element of a finite group, as coordinates on canonical generators.
#[derive(Clone, Debug)]
pub struct FiniteElements {
    moduli: Vec<u64>,
    elements: Vec<Vec<u64>>,
    index: HashMap<Vec<u64>, usize>,
}

/// Lists all elements of `g`; fails on infinite groups or groups larger than `bound`.
pub fn enumerate_elements(g: &FgAbGroup, bound: u64) -> Result<FiniteElements> {
    let order = g.order().ok_or(Error::Infinite)?;
    if order > BigInt::from(bound) {
        return Err(Error::TooLarge { size: order.to_string(), bound });
    }
    let moduli: Vec<u64> = g.invariant_factors().iter().map(|d| d.to_u64().expect("bounded")).collect();
    let mut elements: Vec<Vec<u64>> = vec![vec![]];
    for &m in &moduli {
        elements = elements
            .into_iter()
            .flat_map(|e| {
                (0..m).map(move |x| {
                    let mut e = e.clone();
                    e.push(x);
                    e
                })
            })
            .collect();
    }
    let index = elements.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
    Ok(FiniteElements { moduli, elements, index })
}

impl FiniteElements {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Vec<u64>] {
        &self.elements
    }

    pub fn index_of(&self, e: &[u64]) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.moduli.len()]
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).zip(&self.moduli).map(|((x, y), m)| (x + y) % m).collect()
    }

    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter().zip(&self.moduli).map(|(x, m)| (m - x) % m).collect()
    }

    /// Addition table entry by element index.
    pub fn add_index(&self, i: usize, j: usize) -> usize {
        self.index[&self.add(&self.elements[i], &self.elements[j])]
    }

    /// Applies a hom whose source and target are canonical presentations,
    /// reducing into this (target) group.
    pub fn apply(&self, f: &GroupHom, x: &[u64]) -> Vec<u64> {
        let v: Vec<BigInt> = x.iter().map(|&c| BigInt::from(c)).collect();
        let img = f.matrix().mul_vec(&v);
        img.iter()
            .zip(&self.moduli)
            .map(|(y, &m)| num_integer::Integer::mod_floor(y, &BigInt::from(m)).to_u64().unwrap())
            .collect()
    }
}

/// Brute-force kernel and cokernel orders of `f: source → target`, both finite.
pub fn brute_force_orders(f: &GroupHom, source: &FiniteElements, target: &FiniteElements) -> (usize, usize) {
    let mut image = std::collections::HashSet::new();
    let mut kernel = 0;
    for x in source.elements() {
        let y = target.apply(f, x);
        if y.iter().all(|&c| c == 0) {
            kernel += 1;
        }
        image.insert(y);
    }
    (kernel, target.len() / image.len())
}
