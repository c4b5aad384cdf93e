use std::collections::BTreeMap;
use std::sync::Mutex;

use rayon::prelude::*;

use crate::derivation::VField;
use crate::error::{Error, Result};
use crate::poly::{matrix, monomials_of_degree, weighted_monomials, Matrix, Monomial, Poly, RatFunc};
use crate::scalar::Field;

/// `(1/|W|) sum_w f(w x)`.
pub fn reynolds<K: Field>(elements: &[Matrix<K>], f: &Poly<K>) -> Poly<K> {
    let n = f.nvars();
    let sum = elements
        .par_iter()
        .map(|w| f.substitute_linear_unchecked(w))
        .reduce(|| Poly::zero(n), |a, b| &a + &b);
    sum.scale(&K::from_i64(elements.len() as i64).inv().unwrap())
}

/// `(1/|W|) sum_w w . theta` for a field with polynomial coefficients.
pub fn reynolds_field<K: Field>(elements: &[Matrix<K>], theta: &[Poly<K>]) -> Vec<Poly<K>> {
    let n = theta.len();
    let sum = elements
        .par_iter()
        .map(|w| act_poly_field(w, theta))
        .reduce(
            || vec![Poly::zero(n); n],
            |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect(),
        );
    let inv = K::from_i64(elements.len() as i64).inv().unwrap();
    sum.iter().map(|p| p.scale(&inv)).collect()
}

/// `w theta(w^-1 x)` on polynomial coefficient vectors.
pub fn act_poly_field<K: Field>(w: &Matrix<K>, theta: &[Poly<K>]) -> Vec<Poly<K>> {
    let n = theta.len();
    let winv = matrix::adjoint(w);
    let moved: Vec<Poly<K>> = theta.iter().map(|p| p.substitute_linear_unchecked(&winv)).collect();
    (0..n)
        .map(|i| {
            (0..n).fold(Poly::zero(n), |acc, j| {
                if w[i][j].is_zero() {
                    acc
                } else {
                    &acc + &moved[j].scale(&w[i][j])
                }
            })
        })
        .collect()
}

/// Invariants `t_1..t_l` as polynomials in `x`, with cached products so
/// that weighted polynomials in `t` can be evaluated and recovered.
pub struct InvariantRing<K: Field> {
    invariants: Vec<Poly<K>>,
    degrees: Vec<u32>,
    monomials: Mutex<BTreeMap<Monomial, Poly<K>>>,
}

impl<K: Field> Clone for InvariantRing<K> {
    fn clone(&self) -> Self {
        InvariantRing::new(self.invariants.clone())
    }
}

impl<K: Field> std::fmt::Debug for InvariantRing<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("InvariantRing").field("invariants", &self.invariants).finish()
    }
}

impl<K: Field> InvariantRing<K> {
    pub fn new(invariants: Vec<Poly<K>>) -> Self {
        let degrees = invariants
            .iter()
            .map(|t| t.homogeneous_degree().expect("homogeneous invariant"))
            .collect();
        InvariantRing {
            invariants,
            degrees,
            monomials: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn invariants(&self) -> &[Poly<K>] {
        &self.invariants
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn rank(&self) -> usize {
        self.invariants.len()
    }

    fn nvars_x(&self) -> usize {
        self.invariants[0].nvars()
    }

    /// `t^a` as a polynomial in `x`.
    pub fn t_monomial(&self, a: &Monomial) -> Poly<K> {
        if let Some(p) = self.monomials.lock().unwrap().get(a) {
            return p.clone();
        }
        // Peel one factor off the last nonzero exponent and recurse.
        let p = match a.0.iter().rposition(|&e| e > 0) {
            None => Poly::one(self.nvars_x()),
            Some(i) => {
                let mut b = a.clone();
                b.0[i] -= 1;
                &self.t_monomial(&b) * &self.invariants[i]
            }
        };
        self.monomials.lock().unwrap().insert(a.clone(), p.clone());
        p
    }

    /// `p(t_1(x), ..., t_l(x))`.
    pub fn eval(&self, p: &Poly<K>) -> Poly<K> {
        p.terms()
            .fold(Poly::zero(self.nvars_x()), |acc, (m, c)| &acc + &self.t_monomial(m).scale(c))
    }

    pub fn eval_rat(&self, p: &Poly<K>) -> RatFunc<K> {
        RatFunc::from_poly(self.eval(p))
    }

    /// Writes a homogeneous invariant `f(x)` as a polynomial in `t`.
    pub fn to_t(&self, f: &Poly<K>) -> Result<Poly<K>> {
        let l = self.rank();
        if f.is_zero() {
            return Ok(Poly::zero(l));
        }
        let d = f.homogeneous_degree().ok_or(Error::NotInvariant)?;
        let basis = weighted_monomials(&self.degrees, d);
        if basis.is_empty() {
            return Err(Error::NotInvariant);
        }
        let images: Vec<Poly<K>> = basis.iter().map(|a| self.t_monomial(a)).collect();
        let coeffs = solve_in_span(&images, f).ok_or(Error::NotInvariant)?;
        Ok(Poly::from_terms(
            l,
            basis.into_iter().zip(coeffs).map(|(m, c)| (m.0, c)),
        ))
    }
}

/// Coefficients `c` with `sum c_i span[i] = target`, if any.
pub fn solve_in_span<K: Field>(span: &[Poly<K>], target: &Poly<K>) -> Option<Vec<K>> {
    let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
    for p in span.iter().chain(std::iter::once(target)) {
        for (m, _) in p.terms() {
            let next = index.len();
            index.entry(m.clone()).or_insert(next);
        }
    }
    let rows = index.len();
    let mut a = vec![vec![K::zero(); span.len()]; rows];
    for (j, p) in span.iter().enumerate() {
        for (m, c) in p.terms() {
            a[index[m]][j] = c.clone();
        }
    }
    let mut b = vec![K::zero(); rows];
    for (m, c) in target.terms() {
        b[index[m]] = c.clone();
    }
    matrix::solve_affine(&a, &b, span.len()).map(|(x, _)| x)
}

/// Whether `target` lies in the linear span of `span`.
pub fn in_span<K: Field>(span: &[Poly<K>], target: &Poly<K>) -> bool {
    target.is_zero() || solve_in_span(span, target).is_some()
}

/// Fundamental invariants of the given degrees: Reynolds averages of
/// monomials in descending graded-lex order, keeping the first candidate of
/// each degree that is not generated by the invariants already chosen.
pub fn fundamental_invariants<K: Field>(elements: &[Matrix<K>], degrees: &[u32]) -> Result<Vec<Poly<K>>> {
    let n = elements[0].len();
    let mut chosen: Vec<Poly<K>> = Vec::new();
    for &d in degrees {
        // products of already chosen invariants landing in degree d
        let chosen_degs: Vec<u32> = chosen.iter().map(|p| p.homogeneous_degree().unwrap()).collect();
        let ring = (!chosen.is_empty()).then(|| InvariantRing::new(chosen.clone()));
        let mut span: Vec<Poly<K>> = match &ring {
            Some(r) => weighted_monomials(&chosen_degs, d).iter().map(|a| r.t_monomial(a)).collect(),
            None => Vec::new(),
        };
        let mut found = None;
        for m in monomials_of_degree(n, d) {
            let avg = reynolds(elements, &Poly::term(n, m, K::one()));
            if avg.is_zero() || in_span(&span, &avg) {
                continue;
            }
            found = Some(avg);
            break;
        }
        let p = found.ok_or_else(|| Error::SearchExhausted(format!("no new invariant in degree {d}")))?;
        let (_, lc) = p.leading_term().unwrap();
        let p = p.scale(&lc.inv().unwrap());
        span.push(p.clone());
        chosen.push(p);
    }
    let jac: Vec<Vec<Poly<K>>> = (0..n).map(|i| chosen.iter().map(|t| t.partial(i)).collect()).collect();
    if matrix::poly_det(&jac).is_zero() {
        return Err(Error::SearchExhausted("Jacobian of the selected invariants vanishes".into()));
    }
    Ok(chosen)
}

/// Homogeneous basis of the invariant polynomial vector fields: Reynolds
/// averages of `x^m d/dx_j`, degree by degree, keeping those outside the
/// span generated by the basis found so far. Returns `(pdeg, field)` pairs.
pub fn invariant_field_basis<K: Field>(
    elements: &[Matrix<K>],
    ring: &InvariantRing<K>,
    max_degree: u32,
) -> Result<Vec<(u32, Vec<Poly<K>>)>> {
    let n = elements[0].len();
    let mut basis: Vec<(u32, Vec<Poly<K>>)> = Vec::new();
    for p in 0..=max_degree {
        if basis.len() == n {
            break;
        }
        // span of invariant multiples of earlier basis fields, flattened into
        // one polynomial per field by tagging coordinates with an extra
        // variable
        let mut span: Vec<Poly<K>> = Vec::new();
        for (q, sigma) in &basis {
            for a in weighted_monomials(ring.degrees(), p - q) {
                let f = ring.t_monomial(&a);
                span.push(flatten_field(&sigma.iter().map(|c| c * &f).collect::<Vec<_>>()));
            }
        }
        for m in monomials_of_degree(n, p) {
            for j in 0..n {
                let mut seed = vec![Poly::zero(n); n];
                seed[j] = Poly::term(n, m.clone(), K::one());
                let avg = reynolds_field(elements, &seed);
                let flat = flatten_field(&avg);
                if flat.is_zero() || in_span(&span, &flat) {
                    continue;
                }
                span.push(flat);
                basis.push((p, avg));
                if basis.len() == n {
                    break;
                }
            }
            if basis.len() == n {
                break;
            }
        }
    }
    if basis.len() < n {
        return Err(Error::SearchExhausted(format!(
            "only {} invariant fields up to degree {max_degree}",
            basis.len()
        )));
    }
    Ok(basis)
}

/// Packs a coefficient vector into one polynomial in `n + 1` variables,
/// the extra variable's exponent recording the coordinate index.
fn flatten_field<K: Field>(theta: &[Poly<K>]) -> Poly<K> {
    let n = theta.len();
    let mut out = Poly::zero(n + 1);
    for (j, p) in theta.iter().enumerate() {
        let terms = p.terms().map(|(m, c)| {
            let mut e = m.0.clone();
            e.push(j as u32);
            (e, c.clone())
        });
        out = &out + &Poly::from_terms(n + 1, terms);
    }
    out
}

/// Vector field from polynomial coefficients.
pub fn to_vfield<K: Field>(theta: &[Poly<K>]) -> VField<K> {
    VField::from_polys(theta.to_vec())
}
