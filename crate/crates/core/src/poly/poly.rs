use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::matrix::{self, Matrix};
use super::monomial::Monomial;
use crate::error::{Error, Result};
use crate::scalar::Field;

/// Sparse multivariate polynomial with no stored zero coefficients.
#[derive(Clone, PartialEq)]
pub struct Poly<K> {
    nvars: usize,
    terms: BTreeMap<Monomial, K>,
}

impl<K: Field> Poly<K> {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, K::one())
    }

    pub fn constant(nvars: usize, c: K) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    /// The coordinate function `x_i` (0-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range");
        Self::term(nvars, Monomial::var(nvars, i), K::one())
    }

    pub fn term(nvars: usize, m: Monomial, c: K) -> Self {
        assert_eq!(m.0.len(), nvars);
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, K)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(Monomial(e), c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: K) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = v.add_ref(&c);
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &K)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> K {
        self.terms.get(m).cloned().unwrap_or_else(K::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &K)> {
        self.terms.iter().next_back()
    }

    /// Total degree; `None` is the degree of the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Common degree of all terms, or `None` for zero and non-homogeneous input.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(Monomial::degree);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// The value if the polynomial is constant (zero included).
    pub fn constant_value(&self) -> Option<K> {
        match self.terms.len() {
            0 => Some(K::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v.mul_ref(c))).collect(),
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(&K) -> K) -> Self {
        let mut p = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            p.add_term(m.clone(), f(c));
        }
        p
    }

    /// Coefficient-wise complex conjugate.
    pub fn conj(&self) -> Self {
        self.map_coeffs(K::conj)
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.mul_ref(c))).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative with respect to `x_i` (0-based).
    pub fn partial(&self, i: usize) -> Self {
        assert!(i < self.nvars, "variable index {i} out of range");
        let mut p = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[i] -= 1;
            p.add_term(m2, c.mul_ref(&K::from_i64(e as i64)));
        }
        p
    }

    /// Lowest exponent of `x_i` among the terms; `None` for zero.
    pub fn min_degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[i]).min()
    }

    /// Substitutes `x_i -> images[i]`. The images share a common `nvars`,
    /// which becomes the `nvars` of the result.
    pub fn compose(&self, images: &[Poly<K>]) -> Poly<K> {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let out_vars = images.first().map(|p| p.nvars).unwrap_or(0);
        let mut powers: Vec<Vec<Poly<K>>> = images.iter().map(|p| vec![Poly::one(p.nvars), p.clone()]).collect();
        let mut out = Poly::zero(out_vars);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(out_vars, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[i];
                while cache.len() <= e as usize {
                    let next = &cache[cache.len() - 1] * &cache[1];
                    cache.push(next);
                }
                t = &t * &cache[e as usize];
            }
            out = &out + &t;
        }
        out
    }

    /// `f(A x)`: every `x_i` is replaced by `sum_j A[i][j] x_j`.
    pub fn substitute_linear(&self, a: &Matrix<K>) -> Result<Poly<K>> {
        if a.len() != self.nvars || a.iter().any(|r| r.len() != self.nvars) {
            return Err(Error::DimensionMismatch("substitution matrix must be nvars x nvars".into()));
        }
        if matrix::det(a).is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(self.substitute_linear_unchecked(a))
    }

    pub(crate) fn substitute_linear_unchecked(&self, a: &Matrix<K>) -> Poly<K> {
        let images: Vec<Poly<K>> = a.iter().map(|row| linear_poly(row)).collect();
        self.compose(&images)
    }

    /// Exact quotient `self / g`.
    pub fn exact_divide(&self, g: &Poly<K>) -> Result<Poly<K>> {
        let (lm, lc) = g.leading_term().ok_or(Error::DivisionByZero)?;
        let lc_inv = lc.inv().expect("leading coefficient is nonzero");
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.nvars);
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.div(lm).ok_or(Error::NotDivisible)?;
            let qc = c.mul_ref(&lc_inv);
            rem = &rem - &g.mul_monomial(&qm, &qc);
            quot.add_term(qm, qc);
        }
        Ok(quot)
    }

    /// `self` with a trailing variable count change: appends zero exponents
    /// or drops variables that do not occur.
    pub fn with_nvars(&self, nvars: usize) -> Poly<K> {
        let mut p = Poly::zero(nvars);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            if nvars < e.len() {
                assert!(e[nvars..].iter().all(|&x| x == 0), "dropping a variable that occurs");
            }
            e.resize(nvars, 0);
            p.add_term(Monomial(e), c.clone());
        }
        p
    }

    pub fn display_with(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let cs = c.to_string();
            let compound = cs.contains(' ');
            let mono: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    let name = names.get(i).map(|s| s.to_string()).unwrap_or_else(|| format!("x{}", i + 1));
                    if e == 1 {
                        name
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) if !compound => (true, rest.to_string()),
                _ => (false, cs.clone()),
            };
            if idx > 0 {
                out.push_str(if neg { " - " } else { " + " });
            } else if neg {
                out.push('-');
            }
            let mag = if compound { format!("({mag})") } else { mag };
            if mono.is_empty() {
                out.push_str(&mag);
            } else {
                if mag != "1" {
                    out.push_str(&mag);
                    out.push('*');
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
}

/// `sum_j coeffs[j] x_j`.
pub fn linear_poly<K: Field>(coeffs: &[K]) -> Poly<K> {
    let n = coeffs.len();
    let mut p = Poly::zero(n);
    for (j, c) in coeffs.iter().enumerate() {
        p.add_term(Monomial::var(n, j), c.clone());
    }
    p
}

impl<K: Field> fmt::Display for Poly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&[]))
    }
}

impl<K: Field> fmt::Debug for Poly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

impl<'a, K: Field> Add<&'a Poly<K>> for &'a Poly<K> {
    type Output = Poly<K>;
    fn add(self, rhs: &'a Poly<K>) -> Poly<K> {
        assert_eq!(self.nvars, rhs.nvars, "nvars mismatch");
        let (big, small) = if self.terms.len() >= rhs.terms.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a, K: Field> Sub<&'a Poly<K>> for &'a Poly<K> {
    type Output = Poly<K>;
    fn sub(self, rhs: &'a Poly<K>) -> Poly<K> {
        assert_eq!(self.nvars, rhs.nvars, "nvars mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.neg_ref());
        }
        out
    }
}

impl<'a, K: Field> Mul<&'a Poly<K>> for &'a Poly<K> {
    type Output = Poly<K>;
    fn mul(self, rhs: &'a Poly<K>) -> Poly<K> {
        assert_eq!(self.nvars, rhs.nvars, "nvars mismatch");
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.mul_ref(cb));
            }
        }
        out
    }
}

impl<K: Field> Neg for &Poly<K> {
    type Output = Poly<K>;
    fn neg(self) -> Poly<K> {
        self.map_coeffs(K::neg_ref)
    }
}

impl<K: Field> Add for Poly<K> {
    type Output = Poly<K>;
    fn add(self, rhs: Poly<K>) -> Poly<K> {
        &self + &rhs
    }
}

impl<K: Field> Sub for Poly<K> {
    type Output = Poly<K>;
    fn sub(self, rhs: Poly<K>) -> Poly<K> {
        &self - &rhs
    }
}

impl<K: Field> Mul for Poly<K> {
    type Output = Poly<K>;
    fn mul(self, rhs: Poly<K>) -> Poly<K> {
        &self * &rhs
    }
}

impl<K: Field> Neg for Poly<K> {
    type Output = Poly<K>;
    fn neg(self) -> Poly<K> {
        -&self
    }
}

impl<K: Field> Poly<K> {
    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    use crate::scalar::{CycNum, Field, Rat};

    type P = Poly<Rat>;

    fn x(n: usize, i: usize) -> P {
        P::var(n, i)
    }

    fn c(v: i64) -> P {
        P::constant(2, Rat::from_i64(v))
    }

    #[test]
    fn partial_derivatives() {
        let (x1, x2) = (x(2, 0), x(2, 1));
        let f = &(&x1 * &x1) * &x2;
        assert_eq!(f.partial(0), &c(2) * &(&x1 * &x2));
        assert!(x1.pow(3).partial(1).is_zero());
        let g = &x1.pow(3) - &(&c(3) * &(&x1 * &x2.pow(2)));
        assert_eq!(g.partial(0), &(&c(3) * &x1.pow(2)) - &(&c(3) * &x2.pow(2)));
    }

    #[test]
    fn exact_division() {
        let (x1, x2) = (x(2, 0), x(2, 1));
        let f = &x1.pow(2) - &x2.pow(2);
        assert_eq!(f.exact_divide(&(&x1 - &x2)).unwrap(), &x1 + &x2);
        assert_eq!(x1.exact_divide(&x2), Err(Error::NotDivisible));
        assert_eq!(x1.exact_divide(&P::zero(2)), Err(Error::DivisionByZero));
    }

    #[test]
    fn linear_substitution() {
        let (x1, x2) = (x(2, 0), x(2, 1));
        let id = vec![vec![Rat::one(), Rat::zero()], vec![Rat::zero(), Rat::one()]];
        let f = &x1 * &x2.pow(2);
        assert_eq!(f.substitute_linear(&id).unwrap(), f);
        let swap = vec![vec![Rat::zero(), Rat::one()], vec![Rat::one(), Rat::zero()]];
        assert_eq!(f.substitute_linear(&swap).unwrap(), &x2 * &x1.pow(2));
        let singular = vec![vec![Rat::one(), Rat::one()], vec![Rat::one(), Rat::one()]];
        assert_eq!(f.substitute_linear(&singular), Err(Error::SingularMatrix));
    }

    #[test]
    fn quarter_rotation_fixes_quadric() {
        let z = CycNum::zero();
        let o = CycNum::one();
        let rot = vec![vec![z.clone(), -o.clone()], vec![o, z]];
        let x1 = Poly::<CycNum>::var(2, 0);
        let x2 = Poly::<CycNum>::var(2, 1);
        let q = &x1.pow(2) + &x2.pow(2);
        assert_eq!(q.substitute_linear(&rot).unwrap(), q);
        // The map (x1, x2) -> (i x2, i x1) is unitary but negates the quadric.
        let i = CycNum::root_of_unity(4, 1);
        let zero = CycNum::zero();
        let swap = vec![vec![zero.clone(), i.clone()], vec![i, zero]];
        assert_eq!(q.substitute_linear(&swap).unwrap(), -&q);
    }

    #[test]
    fn degrees() {
        assert_eq!(P::zero(2).degree(), None);
        assert_eq!(c(5).degree(), Some(0));
        let f = &x(2, 0).pow(3) + &x(2, 1);
        assert_eq!(f.degree(), Some(3));
        assert_eq!(f.homogeneous_degree(), None);
        assert_eq!(x(2, 0).pow(2).homogeneous_degree(), Some(2));
    }

    #[test]
    fn compose_into_other_ring() {
        // f(t1, t2) = t1 * t2 with t1 = x1 + x2, t2 = x1 - x2
        let f = &x(2, 0) * &x(2, 1);
        let img = vec![&x(2, 0) + &x(2, 1), &x(2, 0) - &x(2, 1)];
        assert_eq!(f.compose(&img), &x(2, 0).pow(2) - &x(2, 1).pow(2));
    }

    #[test]
    fn display() {
        let f = &(&c(3) * &x(2, 0).pow(2)) - &x(2, 1);
        assert_eq!(f.to_string(), "3*x1^2 - x2");
    }
}
