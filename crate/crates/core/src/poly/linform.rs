use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::poly::{linear_poly, Poly};
use crate::error::{Error, Result};
use crate::scalar::Field;

/// Nonzero linear form `sum a_i x_i`.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "K: Serialize", deserialize = "K: Deserialize<'de>"))]
pub struct LinForm<K> {
    coeffs: Vec<K>,
}

impl<K: Field> LinForm<K> {
    pub fn new(coeffs: Vec<K>) -> Result<Self> {
        if coeffs.iter().all(Zero::is_zero) {
            return Err(Error::DivisionByZero);
        }
        Ok(LinForm { coeffs })
    }

    pub fn coordinate(nvars: usize, i: usize) -> Self {
        let mut c = vec![K::zero(); nvars];
        c[i] = K::one();
        LinForm { coeffs: c }
    }

    pub fn coeffs(&self) -> &[K] {
        &self.coeffs
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len()
    }

    /// Index of the first nonzero coefficient.
    pub fn pivot(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap()
    }

    /// Scalar multiple whose pivot coefficient is 1, together with the
    /// factor `c` such that `self = c * normalized`.
    pub fn normalized(&self) -> (Self, K) {
        let c = self.coeffs[self.pivot()].clone();
        let ci = c.inv().unwrap();
        (
            LinForm {
                coeffs: self.coeffs.iter().map(|a| a.mul_ref(&ci)).collect(),
            },
            c,
        )
    }

    pub fn is_normalized(&self) -> bool {
        self.coeffs[self.pivot()].is_one()
    }

    pub fn to_poly(&self) -> Poly<K> {
        linear_poly(&self.coeffs)
    }

    /// `self(v) = sum a_i v_i`.
    pub fn eval(&self, v: &[K]) -> K {
        self.coeffs
            .iter()
            .zip(v)
            .fold(K::zero(), |acc, (a, b)| acc.add_ref(&a.mul_ref(b)))
    }

    /// The dual vector `sum conj(a_i) e_i`: the normal direction of the
    /// hyperplane `ker self` under the standard Hermitian form.
    pub fn normal_vector(&self) -> Vec<K> {
        self.coeffs.iter().map(K::conj).collect()
    }

    /// Basis of the forms `b` with `sum conj(a_i) b_i = 0`, obtained by
    /// eliminating the pivot coordinate.
    pub fn orthogonal_complement(&self) -> Vec<LinForm<K>> {
        let p = self.pivot();
        let ca: Vec<K> = self.coeffs.iter().map(K::conj).collect();
        let inv = ca[p].inv().unwrap();
        let n = self.nvars();
        (0..n)
            .filter(|&j| j != p)
            .map(|j| {
                let mut b = vec![K::zero(); n];
                b[j] = K::one();
                b[p] = ca[j].mul_ref(&inv).neg_ref();
                LinForm { coeffs: b }
            })
            .collect()
    }

    /// Whether `self` and `other` define the same hyperplane.
    pub fn proportional(&self, other: &LinForm<K>) -> bool {
        self.normalized().0 == other.normalized().0
    }

    /// Invertible matrix `A` with `(self)(A y) = y_p` for the pivot `p`, so
    /// that the change of variables `x = A y` turns `self` into a coordinate.
    pub fn straightening_matrix(&self) -> Vec<Vec<K>> {
        let p = self.pivot();
        let n = self.nvars();
        let inv = self.coeffs[p].inv().unwrap();
        let mut a: Vec<Vec<K>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { K::one() } else { K::zero() }).collect())
            .collect();
        for j in 0..n {
            a[p][j] = if j == p {
                inv.clone()
            } else {
                self.coeffs[j].mul_ref(&inv).neg_ref()
            };
        }
        a
    }
}

impl<K: Field> fmt::Display for LinForm<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

impl<K: Field> fmt::Debug for LinForm<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinForm({})", self)
    }
}
