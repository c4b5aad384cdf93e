//! Dense exact linear algebra over a field, and fraction-free determinants
//! over polynomial rings.

use super::poly::Poly;
use crate::error::{Error, Result};
use crate::scalar::Field;

pub type Matrix<K> = Vec<Vec<K>>;

pub fn identity<K: Field>(n: usize) -> Matrix<K> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { K::one() } else { K::zero() }).collect())
        .collect()
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn mat_mul<K: Field>(a: &[Vec<K>], b: &[Vec<K>]) -> Matrix<K> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner);
            (0..cols)
                .map(|j| {
                    (0..inner).fold(K::zero(), |acc, k| acc.add_ref(&row[k].mul_ref(&b[k][j])))
                })
                .collect()
        })
        .collect()
}

/// Conjugate transpose.
pub fn adjoint<K: Field>(m: &[Vec<K>]) -> Matrix<K> {
    transpose(m).into_iter().map(|r| r.iter().map(K::conj).collect()).collect()
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<K: Field>(m: &mut [Vec<K>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().unwrap();
        for v in m[r].iter_mut() {
            *v = v.mul_ref(&inv);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !pv.is_zero() {
                    *v = v.sub_ref(&f.mul_ref(pv));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<K: Field>(m: &[Vec<K>]) -> usize {
    rref(&mut m.to_vec()).len()
}

pub fn det<K: Field>(m: &[Vec<K>]) -> K {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = K::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return K::zero();
        };
        if p != c {
            a.swap(p, c);
            d = d.neg_ref();
        }
        d = d.mul_ref(&a[c][c]);
        let inv = a[c][c].inv().unwrap();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].mul_ref(&inv);
            for j in c..n {
                let t = f.mul_ref(&a[c][j]);
                a[i][j] = a[i][j].sub_ref(&t);
            }
        }
    }
    d
}

pub fn inverse<K: Field>(m: &[Vec<K>]) -> Result<Matrix<K>> {
    let n = m.len();
    let mut aug: Matrix<K> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { K::one() } else { K::zero() }));
            row
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return Err(Error::SingularMatrix);
    }
    Ok(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Basis of `{v : m v = 0}`.
pub fn nullspace<K: Field>(m: &[Vec<K>], cols: usize) -> Vec<Vec<K>> {
    let mut a = m.to_vec();
    let piv = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![K::zero(); cols];
            v[f] = K::one();
            for (r, &pc) in piv.iter().enumerate() {
                v[pc] = a[r][f].neg_ref();
            }
            v
        })
        .collect()
}

/// Solution set of `m v = b`: a particular solution and the nullspace.
/// `None` when inconsistent.
pub fn solve_affine<K: Field>(m: &[Vec<K>], b: &[K], cols: usize) -> Option<(Vec<K>, Vec<Vec<K>>)> {
    let mut aug: Matrix<K> = m
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut row = r.clone();
            row.push(bi.clone());
            row
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![K::zero(); cols];
    for (r, &pc) in piv.iter().enumerate() {
        x[pc] = aug[r][cols].clone();
    }
    let ker = nullspace(m, cols);
    Some((x, ker))
}

/// Determinant over `K[x]` by Bareiss elimination with exact division.
pub fn poly_det<K: Field>(m: &[Vec<Poly<K>>]) -> Poly<K> {
    let n = m.len();
    if n == 0 {
        panic!("determinant of an empty matrix needs nvars");
    }
    let nv = m[0][0].nvars();
    let (_, d) = bareiss(m.to_vec(), n);
    d.unwrap_or_else(|| Poly::zero(nv))
}

/// Fraction-free elimination of the first `ncols` columns of `a`.
///
/// Returns the pivot columns and, when they number `a.len()` (full row
/// rank), the maximal minor on those columns up to sign. The minor is
/// returned with the correct sign for square input.
pub fn bareiss<K: Field>(mut a: Vec<Vec<Poly<K>>>, ncols: usize) -> (Vec<usize>, Option<Poly<K>>) {
    let rows = a.len();
    let nv = a.first().and_then(|r| r.first()).map_or(0, Poly::nvars);
    let mut prev = Poly::one(nv);
    let mut sign = false;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows {
            break;
        }
        // Pick the pivot with the fewest terms to keep intermediate growth low.
        let Some(p) = (r..rows)
            .filter(|&i| !a[i][c].is_zero())
            .min_by_key(|&i| a[i][c].num_terms())
        else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            sign = !sign;
        }
        for i in r + 1..rows {
            for j in c + 1..ncols {
                let t = &(&a[r][c] * &a[i][j]) - &(&a[i][c] * &a[r][j]);
                a[i][j] = t.exact_divide(&prev).expect("Bareiss division is exact");
            }
            a[i][c] = Poly::zero(nv);
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    if pivots.len() == rows && rows > 0 {
        let d = if sign { -&prev } else { prev };
        (pivots, Some(d))
    } else {
        (pivots, None)
    }
}
