use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poly::{matrix, Matrix, Poly};
use crate::scalar::Field;

/// Coefficients `[c_0, ..., c_{n-1}]` of `det(1 - lambda w)`.
fn char_coeffs<K: Field>(w: &Matrix<K>) -> Vec<K> {
    let l = w.len();
    let lam = Poly::<K>::var(1, 0);
    let m: Vec<Vec<Poly<K>>> = (0..l)
        .map(|i| {
            (0..l)
                .map(|j| {
                    let d = if i == j { Poly::one(1) } else { Poly::zero(1) };
                    &d - &lam.scale(&w[i][j])
                })
                .collect()
        })
        .collect();
    let p = matrix::poly_det(&m);
    (0..=l)
        .map(|k| p.coefficient(&crate::poly::Monomial(vec![k as u32])))
        .collect()
}

/// Power series of `1 / p` to `len` terms; `p[0]` must be 1.
fn invert_series<K: Field>(p: &[K], len: usize) -> Vec<K> {
    let mut out = vec![K::zero(); len];
    out[0] = K::one();
    for n in 1..len {
        let mut s = K::zero();
        for k in 1..p.len().min(n + 1) {
            s = s.add_ref(&p[k].mul_ref(&out[n - k]));
        }
        out[n] = s.neg_ref();
    }
    out
}

/// Molien series `(1/|W|) sum_w 1/det(1 - lambda w)` truncated to `len`
/// coefficients.
pub fn molien_series<K: Field>(elements: &[Matrix<K>], len: usize) -> Vec<K> {
    let sum = elements
        .par_iter()
        .map(|w| invert_series(&char_coeffs(w), len))
        .reduce(
            || vec![K::zero(); len],
            |a, b| a.iter().zip(&b).map(|(x, y)| x.add_ref(y)).collect(),
        );
    let inv = K::from_i64(elements.len() as i64).inv().unwrap();
    sum.iter().map(|c| c.mul_ref(&inv)).collect()
}

/// Degrees `d_1 <= ... <= d_l` read off a series equal to
/// `prod 1/(1 - lambda^d_i)` by peeling one factor at a time.
pub fn degrees_from_series<K: Field>(series: &[K], rank: usize) -> Result<Vec<u32>> {
    let mut s = series.to_vec();
    let mut degs = Vec::with_capacity(rank);
    for _ in 0..rank {
        let d = (1..s.len())
            .find(|&k| !s[k].is_zero())
            .ok_or_else(|| Error::Catalog("Molien series truncated before all degrees appeared".into()))?;
        // multiply by (1 - lambda^d)
        for k in (d..s.len()).rev() {
            s[k] = s[k].sub_ref(&s[k - d]);
        }
        degs.push(d as u32);
    }
    if s.iter().skip(1).any(|c| !c.is_zero()) {
        return Err(Error::Catalog("Molien series is not a product of the peeled factors".into()));
    }
    Ok(degs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;

    #[test]
    fn peel_known_series() {
        // 1/((1-l^2)(1-l^3)) up to l^9
        let coeffs = [1, 0, 1, 1, 1, 1, 2, 1, 2, 2];
        let s: Vec<Rat> = coeffs.iter().map(|&c| Rat::from_i64(c)).collect();
        assert_eq!(degrees_from_series(&s, 2).unwrap(), vec![2, 3]);
    }
}
