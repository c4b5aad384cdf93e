use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::poly::{matrix, LinForm, Matrix};
use crate::scalar::{Field, Rat};

pub const DEFAULT_ELEMENT_CAP: usize = 10_000;

fn key<K: Field>(m: &Matrix<K>, order: u32) -> Vec<Rat> {
    m.iter().flatten().flat_map(|v| v.coords(order)).collect()
}

/// All products of the generators, identity first, in breadth-first order.
pub fn closure<K: Field>(generators: &[Matrix<K>], order: u32, cap: usize) -> Result<Vec<Matrix<K>>> {
    let n = generators.first().map_or(0, Vec::len);
    let id = matrix::identity::<K>(n);
    let mut seen: HashSet<Vec<Rat>> = HashSet::new();
    seen.insert(key(&id, order));
    let mut elements = vec![id];
    let mut head = 0;
    while head < elements.len() {
        let cur = elements[head].clone();
        head += 1;
        for g in generators {
            let next = matrix::mat_mul(&cur, g);
            if seen.insert(key(&next, order)) {
                if elements.len() == cap {
                    return Err(Error::NotClosedWithinBudget { cap });
                }
                elements.push(next);
            }
        }
    }
    Ok(elements)
}

pub fn is_unitary<K: Field>(m: &Matrix<K>) -> bool {
    matrix::mat_mul(&matrix::adjoint(m), m) == matrix::identity(m.len())
}

/// Normalized linear form cutting out the fixed hyperplane of `w`, if `w`
/// is a reflection (`rank(w - 1) = 1`).
pub fn reflecting_form<K: Field>(w: &Matrix<K>) -> Option<LinForm<K>> {
    let n = w.len();
    let d: Matrix<K> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { w[i][j].sub_ref(&K::one()) } else { w[i][j].clone() })
                .collect()
        })
        .collect();
    if matrix::rank(&d) != 1 {
        return None;
    }
    let row = d.into_iter().find(|r| r.iter().any(|v| !v.is_zero()))?;
    Some(LinForm::new(row).ok()?.normalized().0)
}

/// Multiplicative order of a matrix of finite order.
pub fn element_order<K: Field>(w: &Matrix<K>, cap: usize) -> Option<usize> {
    let id = matrix::identity::<K>(w.len());
    let mut p = w.clone();
    for k in 1..=cap {
        if p == id {
            return Some(k);
        }
        p = matrix::mat_mul(&p, w);
    }
    None
}
