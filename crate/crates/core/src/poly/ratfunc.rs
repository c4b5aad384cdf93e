use std::fmt;

use num_traits::Zero;

use super::linform::LinForm;
use super::matrix::Matrix;
use super::poly::Poly;
use crate::error::{Error, Result};
use crate::scalar::Field;

/// Quotient `num / prod l^e` whose denominator is a product of normalized
/// linear forms.
///
/// After every operation the numerator is coprime to each denominator
/// factor, so the representation is canonical up to factor order.
#[derive(Clone)]
pub struct RatFunc<K> {
    num: Poly<K>,
    den: Vec<(LinForm<K>, u32)>,
}

impl<K: Field> RatFunc<K> {
    pub fn zero(nvars: usize) -> Self {
        Self::from_poly(Poly::zero(nvars))
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_poly(Poly::one(nvars))
    }

    pub fn constant(nvars: usize, c: K) -> Self {
        Self::from_poly(Poly::constant(nvars, c))
    }

    pub fn from_poly(num: Poly<K>) -> Self {
        RatFunc { num, den: Vec::new() }
    }

    /// `num / prod l^e`; the factors need not be normalized or distinct.
    pub fn new(num: Poly<K>, den: Vec<(LinForm<K>, u32)>) -> Self {
        let mut scale = K::one();
        let mut merged: Vec<(LinForm<K>, u32)> = Vec::new();
        for (l, e) in den {
            if e == 0 {
                continue;
            }
            assert_eq!(l.nvars(), num.nvars(), "nvars mismatch");
            let (n, c) = l.normalized();
            for _ in 0..e {
                scale = scale.mul_ref(&c);
            }
            push_factor(&mut merged, n, e);
        }
        let num = num.scale(&scale.inv().unwrap());
        let mut r = RatFunc { num, den: merged };
        r.reduce();
        r
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        for (l, e) in self.den.iter_mut() {
            let lp = l.to_poly();
            while *e > 0 {
                match self.num.exact_divide(&lp) {
                    Ok(q) => {
                        self.num = q;
                        *e -= 1;
                    }
                    Err(_) => break,
                }
            }
        }
        self.den.retain(|(_, e)| *e > 0);
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn num(&self) -> &Poly<K> {
        &self.num
    }

    pub fn den(&self) -> &[(LinForm<K>, u32)] {
        &self.den
    }

    pub fn den_poly(&self) -> Poly<K> {
        self.den
            .iter()
            .fold(Poly::one(self.nvars()), |acc, (l, e)| &acc * &l.to_poly().pow(*e))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn to_poly(&self) -> Option<Poly<K>> {
        self.is_polynomial().then(|| self.num.clone())
    }

    pub fn constant_value(&self) -> Option<K> {
        if self.is_polynomial() {
            self.num.constant_value()
        } else {
            None
        }
    }

    /// `deg num - deg den` when the numerator is homogeneous.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let dn = self.num.homogeneous_degree()? as i64;
        let dd: i64 = self.den.iter().map(|(_, e)| *e as i64).sum();
        Some(dn - dd)
    }

    /// Exponent of the (normalized) form `l` in the denominator.
    pub fn den_multiplicity(&self, l: &LinForm<K>) -> u32 {
        let n = l.normalized().0;
        self.den.iter().find(|(m, _)| *m == n).map_or(0, |(_, e)| *e)
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars());
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn mul_poly(&self, p: &Poly<K>) -> Self {
        let mut r = RatFunc {
            num: &self.num * p,
            den: self.den.clone(),
        };
        r.reduce();
        r
    }

    /// Division by `l^e`.
    pub fn div_linear(&self, l: &LinForm<K>, e: u32) -> Self {
        let mut den = self.den.clone();
        den.push((l.clone(), e));
        RatFunc::new(self.num.clone(), den)
    }

    /// Exact quotient, defined when `other`'s numerator is a scalar times a
    /// product of forms from `candidates` and its own denominator.
    pub fn try_div(&self, other: &RatFunc<K>, candidates: &[LinForm<K>]) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (c, factors) = split_linear(&other.num, candidates).ok_or(Error::UnsupportedDenominator)?;
        let num = self.num.mul_den_of(&other.den);
        let mut den = self.den.clone();
        den.extend(factors);
        Ok(RatFunc::new(num.scale(&c.inv().unwrap()), den))
    }

    /// Partial derivative in `x_i` by the logarithmic-derivative rule; each
    /// denominator exponent grows by at most one.
    pub fn partial(&self, i: usize) -> Self {
        if self.den.is_empty() {
            return Self::from_poly(self.num.partial(i));
        }
        let n = self.nvars();
        let base: Vec<Poly<K>> = self.den.iter().map(|(l, _)| l.to_poly()).collect();
        let all = base.iter().fold(Poly::one(n), |acc, p| &acc * p);
        let mut num = &self.num.partial(i) * &all;
        for (k, (l, e)) in self.den.iter().enumerate() {
            let a = &l.coeffs()[i];
            if a.is_zero() {
                continue;
            }
            let others = base
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != k)
                .fold(Poly::one(n), |acc, (_, p)| &acc * p);
            let coef = a.mul_ref(&K::from_i64(*e as i64));
            num = &num - &(&self.num * &others).scale(&coef);
        }
        let den = self.den.iter().map(|(l, e)| (l.clone(), e + 1)).collect();
        let mut r = RatFunc { num, den };
        r.reduce();
        r
    }

    /// Order of vanishing along `ker alpha`; `None` stands for `+infinity`.
    pub fn valuation(&self, alpha: &LinForm<K>) -> Option<i64> {
        let v = poly_valuation(&self.num, alpha)?;
        Some(v as i64 - self.den_multiplicity(alpha) as i64)
    }

    /// `f(A x)`.
    pub fn substitute_linear(&self, a: &Matrix<K>) -> Result<Self> {
        let num = self.num.substitute_linear(a)?;
        let den = self
            .den
            .iter()
            .map(|(l, e)| {
                let n = l.nvars();
                let coeffs: Vec<K> = (0..n)
                    .map(|j| {
                        (0..n).fold(K::zero(), |acc, i| acc.add_ref(&l.coeffs()[i].mul_ref(&a[i][j])))
                    })
                    .collect();
                (LinForm::new(coeffs).expect("invertible substitution"), *e)
            })
            .collect();
        Ok(RatFunc::new(num, den))
    }

    pub fn conj(&self) -> Self {
        RatFunc::new(
            self.num.conj(),
            self.den
                .iter()
                .map(|(l, e)| (LinForm::new(l.coeffs().iter().map(K::conj).collect()).unwrap(), *e))
                .collect(),
        )
    }

    pub fn display_with(&self, names: &[&str]) -> String {
        let n = self.num.display_with(names);
        if self.den.is_empty() {
            return n;
        }
        let d: Vec<String> = self
            .den
            .iter()
            .map(|(l, e)| {
                let s = format!("({})", l.to_poly().display_with(names));
                if *e == 1 {
                    s
                } else {
                    format!("{s}^{e}")
                }
            })
            .collect();
        format!("({n})/({})", d.join("*"))
    }
}

impl<K: Field> Poly<K> {
    fn mul_den_of(&self, den: &[(LinForm<K>, u32)]) -> Poly<K> {
        den.iter().fold(self.clone(), |acc, (l, e)| &acc * &l.to_poly().pow(*e))
    }
}

fn push_factor<K: Field>(v: &mut Vec<(LinForm<K>, u32)>, l: LinForm<K>, e: u32) {
    match v.iter_mut().find(|(m, _)| *m == l) {
        Some((_, f)) => *f += e,
        None => v.push((l, e)),
    }
}

/// Lowest power of `alpha` dividing `f`, via the change of variables that
/// turns `alpha` into a coordinate. `None` for `f = 0`.
pub fn poly_valuation<K: Field>(f: &Poly<K>, alpha: &LinForm<K>) -> Option<u32> {
    if f.is_zero() {
        return None;
    }
    let p = alpha.pivot();
    let g = f.substitute_linear_unchecked(&alpha.straightening_matrix());
    g.min_degree_in(p)
}

/// Writes `f = c * prod l^e` with `l` drawn from `candidates`.
pub fn split_linear<K: Field>(f: &Poly<K>, candidates: &[LinForm<K>]) -> Option<(K, Vec<(LinForm<K>, u32)>)> {
    if f.is_zero() {
        return None;
    }
    let mut rest = f.clone();
    let mut out = Vec::new();
    for l in candidates {
        let (n, _) = l.normalized();
        if out.iter().any(|(m, _): &(LinForm<K>, u32)| *m == n) {
            continue;
        }
        let lp = n.to_poly();
        let mut e = 0;
        while let Ok(q) = rest.exact_divide(&lp) {
            rest = q;
            e += 1;
        }
        if e > 0 {
            out.push((n, e));
        }
        if rest.degree() == Some(0) {
            break;
        }
    }
    rest.constant_value().map(|c| (c, out))
}

impl<K: Field> PartialEq for RatFunc<K> {
    fn eq(&self, other: &Self) -> bool {
        self.num == other.num
            && self.den.len() == other.den.len()
            && self.den.iter().all(|f| other.den.contains(f))
    }
}

impl<K: Field> Zero for RatFunc<K> {
    fn zero() -> Self {
        RatFunc::zero(0)
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl<K: Field> fmt::Display for RatFunc<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&[]))
    }
}

impl<K: Field> fmt::Debug for RatFunc<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({})", self)
    }
}

impl<'a, K: Field> std::ops::Add<&'a RatFunc<K>> for &'a RatFunc<K> {
    type Output = RatFunc<K>;
    fn add(self, rhs: &'a RatFunc<K>) -> RatFunc<K> {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        if self.den.is_empty() && rhs.den.is_empty() {
            return RatFunc::from_poly(&self.num + &rhs.num);
        }
        let mut den = self.den.clone();
        for (l, e) in &rhs.den {
            match den.iter_mut().find(|(m, _)| m == l) {
                Some((_, f)) => *f = (*f).max(*e),
                None => den.push((l.clone(), *e)),
            }
        }
        let lift = |r: &RatFunc<K>| {
            let missing: Vec<(LinForm<K>, u32)> = den
                .iter()
                .map(|(l, e)| (l.clone(), e - r.den_multiplicity(l)))
                .collect();
            r.num.mul_den_of(&missing)
        };
        let mut out = RatFunc {
            num: &lift(self) + &lift(rhs),
            den,
        };
        out.reduce();
        out
    }
}

impl<'a, K: Field> std::ops::Sub<&'a RatFunc<K>> for &'a RatFunc<K> {
    type Output = RatFunc<K>;
    fn sub(self, rhs: &'a RatFunc<K>) -> RatFunc<K> {
        self + &(-rhs)
    }
}

impl<'a, K: Field> std::ops::Mul<&'a RatFunc<K>> for &'a RatFunc<K> {
    type Output = RatFunc<K>;
    fn mul(self, rhs: &'a RatFunc<K>) -> RatFunc<K> {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero(self.nvars().max(rhs.nvars()));
        }
        let mut den = self.den.clone();
        for (l, e) in &rhs.den {
            push_factor(&mut den, l.clone(), *e);
        }
        let mut out = RatFunc {
            num: &self.num * &rhs.num,
            den,
        };
        out.reduce();
        out
    }
}

impl<K: Field> std::ops::Neg for &RatFunc<K> {
    type Output = RatFunc<K>;
    fn neg(self) -> RatFunc<K> {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl<K: Field> std::ops::Add for RatFunc<K> {
    type Output = RatFunc<K>;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<K: Field> std::ops::Sub for RatFunc<K> {
    type Output = RatFunc<K>;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<K: Field> std::ops::Mul for RatFunc<K> {
    type Output = RatFunc<K>;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<K: Field> std::ops::Neg for RatFunc<K> {
    type Output = RatFunc<K>;
    fn neg(self) -> Self {
        -&self
    }
}

impl<K: Field> From<Poly<K>> for RatFunc<K> {
    fn from(p: Poly<K>) -> Self {
        RatFunc::from_poly(p)
    }
}

/// Determinant of a matrix of rational functions: rows are cleared to
/// polynomials, the polynomial determinant is taken by Bareiss elimination,
/// and the row denominators are restored.
pub fn ratfunc_det<K: Field>(m: &[Vec<RatFunc<K>>]) -> RatFunc<K> {
    let n = m.len();
    let nv = m[0][0].nvars();
    let mut den_total: Vec<(LinForm<K>, u32)> = Vec::new();
    let rows: Vec<Vec<Poly<K>>> = m
        .iter()
        .map(|row| {
            assert_eq!(row.len(), n, "square matrix required");
            let mut den: Vec<(LinForm<K>, u32)> = Vec::new();
            for f in row {
                for (l, e) in &f.den {
                    match den.iter_mut().find(|(x, _)| x == l) {
                        Some((_, g)) => *g = (*g).max(*e),
                        None => den.push((l.clone(), *e)),
                    }
                }
            }
            let out = row
                .iter()
                .map(|f| {
                    let missing: Vec<(LinForm<K>, u32)> =
                        den.iter().map(|(l, e)| (l.clone(), e - f.den_multiplicity(l))).collect();
                    if f.is_zero() {
                        Poly::zero(nv)
                    } else {
                        f.num.mul_den_of(&missing)
                    }
                })
                .collect();
            for (l, e) in den {
                push_factor(&mut den_total, l, e);
            }
            out
        })
        .collect();
    RatFunc::new(super::matrix::poly_det(&rows), den_total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;

    type R = RatFunc<Rat>;

    fn lf(c: &[i64]) -> LinForm<Rat> {
        LinForm::new(c.iter().map(|&v| Rat::from_integer(v.into())).collect()).unwrap()
    }

    fn x(i: usize) -> Poly<Rat> {
        Poly::var(2, i)
    }

    #[test]
    fn valuations() {
        let f = R::new(&x(0).pow(2) * &x(1), vec![(lf(&[0, 1]), 3)]);
        assert_eq!(f.valuation(&lf(&[1, 0])), Some(2));
        let g = R::from_poly(&x(0) + &x(1));
        assert_eq!(g.valuation(&lf(&[1, 0])), Some(0));
        let h = R::new(lf(&[1, -1]).to_poly().pow(3), vec![(lf(&[1, 1]), 1)]);
        assert_eq!(h.valuation(&lf(&[1, -1])), Some(3));
        assert_eq!(R::zero(2).valuation(&lf(&[1, 0])), None);
    }

    #[test]
    fn cancellation_and_sum() {
        let a = R::new(&x(0) * &x(1), vec![(lf(&[2, 0]), 1)]);
        // x1 x2 / (2 x1) = x2 / 2
        assert!(a.is_polynomial());
        assert_eq!(a.num(), &x(1).scale(&Rat::new(1.into(), 2.into())));
        let b = R::new(Poly::one(2), vec![(lf(&[1, 0]), 1)]);
        let c = R::new(Poly::one(2), vec![(lf(&[0, 1]), 1)]);
        let s = &b + &c;
        assert_eq!(s, R::new(&x(0) + &x(1), vec![(lf(&[1, 0]), 1), (lf(&[0, 1]), 1)]));
        assert!((&b - &b).is_zero());
    }

    #[test]
    fn quotient_rule() {
        // d/dx1 (x2 / x1) = -x2 / x1^2
        let f = R::new(x(1), vec![(lf(&[1, 0]), 1)]);
        let d = f.partial(0);
        assert_eq!(d, R::new(-&x(1), vec![(lf(&[1, 0]), 2)]));
    }

    #[test]
    fn determinant_with_poles() {
        let inv = R::new(Poly::one(2), vec![(lf(&[1, 0]), 1)]);
        let m = vec![vec![inv.clone(), R::zero(2)], vec![R::zero(2), R::from_poly(x(0))]];
        assert_eq!(ratfunc_det(&m), R::one(2));
    }
}
