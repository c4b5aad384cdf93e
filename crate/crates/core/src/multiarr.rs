//! Integer multiplicities on an arrangement, membership in `D(A, nu)`, and
//! the Saito criterion with integer multiplicities.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::derivation::{wedge, VField};
use crate::error::{Error, Result};
use crate::group::Hyperplane;
use crate::poly::{matrix, monomials_of_degree, LinForm, Monomial, Poly, RatFunc};
use crate::scalar::Field;

/// `nu : A -> Z` on a fixed list of hyperplanes.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound(serialize = "K: Serialize"))]
pub struct Mult<K: Field> {
    arrangement: Vec<LinForm<K>>,
    values: Vec<i64>,
}

impl<K: Field> Mult<K> {
    pub fn new(arrangement: Vec<LinForm<K>>, values: Vec<i64>) -> Result<Self> {
        if arrangement.len() != values.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} hyperplanes but {} multiplicities",
                arrangement.len(),
                values.len()
            )));
        }
        Ok(Mult { arrangement, values })
    }

    pub fn constant(arrangement: Vec<LinForm<K>>, c: i64) -> Self {
        let n = arrangement.len();
        Mult {
            arrangement,
            values: vec![c; n],
        }
    }

    /// `k * omega + c`, where `omega(H) = e_H`.
    pub fn omega(hyperplanes: &[Hyperplane<K>], k: i64, c: i64) -> Self {
        Mult {
            arrangement: hyperplanes.iter().map(|h| h.alpha.clone()).collect(),
            values: hyperplanes.iter().map(|h| k * h.e_h as i64 + c).collect(),
        }
    }

    pub fn arrangement(&self) -> &[LinForm<K>] {
        &self.arrangement
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn nvars(&self) -> usize {
        self.arrangement[0].nvars()
    }

    /// `|nu| = sum nu(H)`.
    pub fn size(&self) -> i64 {
        self.values.iter().sum()
    }

    pub fn map(&self, f: impl Fn(usize, i64) -> i64) -> Self {
        Mult {
            arrangement: self.arrangement.clone(),
            values: self.values.iter().enumerate().map(|(i, &v)| f(i, v)).collect(),
        }
    }

    pub fn shift(&self, c: i64) -> Self {
        self.map(|_, v| v + c)
    }

    pub fn plus(&self, other: &Mult<K>) -> Self {
        self.map(|i, v| v + other.values[i])
    }

    /// Pointwise `self >= other`.
    pub fn dominates(&self, other: &Mult<K>) -> bool {
        self.values.iter().zip(&other.values).all(|(a, b)| a >= b)
    }

    pub fn q_data(&self) -> Qdata<K> {
        let n = self.nvars();
        let mut qplus = Poly::one(n);
        let mut qminus = Poly::one(n);
        for (l, &v) in self.arrangement.iter().zip(&self.values) {
            if v > 0 {
                qplus = &qplus * &l.to_poly().pow(v as u32);
            } else if v < 0 {
                qminus = &qminus * &l.to_poly().pow((-v) as u32);
            }
        }
        Qdata { qplus, qminus }
    }

    /// `Q(A, nu) = Q_+ / Q_-`.
    pub fn q_rational(&self) -> RatFunc<K> {
        let n = self.nvars();
        let mut num = Poly::one(n);
        let mut den = Vec::new();
        for (l, &v) in self.arrangement.iter().zip(&self.values) {
            if v > 0 {
                num = &num * &l.to_poly().pow(v as u32);
            } else if v < 0 {
                den.push((l.clone(), (-v) as u32));
            }
        }
        RatFunc::new(num, den)
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound(serialize = "K: Field + Serialize"))]
pub struct Qdata<K: Field> {
    pub qplus: Poly<K>,
    pub qminus: Poly<K>,
}

/// `theta(l)` for a linear form `l`.
fn apply_linear<K: Field>(theta: &VField<K>, l: &LinForm<K>) -> RatFunc<K> {
    let n = theta.nvars();
    theta
        .coeffs()
        .iter()
        .zip(l.coeffs())
        .fold(RatFunc::zero(n), |acc, (c, a)| if a.is_zero() { acc } else { &acc + &c.scale(a) })
}

/// `theta in D(A, infinity)`: poles only along the arrangement, and regular
/// tangential components along every hyperplane.
pub fn member_inf<K: Field>(theta: &VField<K>, arrangement: &[LinForm<K>]) -> bool {
    if theta.frame() != crate::derivation::Frame::X {
        return false;
    }
    let poles_ok = theta
        .coeffs()
        .iter()
        .all(|c| c.den().iter().all(|(l, _)| arrangement.iter().any(|a| a.proportional(l))));
    poles_ok
        && arrangement.par_iter().all(|alpha| {
            alpha
                .orthogonal_complement()
                .iter()
                .all(|beta| apply_linear(theta, beta).valuation(alpha).map_or(true, |v| v >= 0))
        })
}

/// `theta in D(A, nu)`.
pub fn member<K: Field>(theta: &VField<K>, nu: &Mult<K>) -> bool {
    member_inf(theta, &nu.arrangement)
        && nu
            .arrangement
            .par_iter()
            .zip(nu.values.par_iter())
            .all(|(alpha, &v)| apply_linear(theta, alpha).valuation(alpha).map_or(true, |val| val >= v))
}

/// Orders of vanishing `valuation(theta(alpha_H), alpha_H)`; `None` is
/// `+infinity`.
pub fn normal_valuations<K: Field>(theta: &VField<K>, arrangement: &[LinForm<K>]) -> Vec<Option<i64>> {
    arrangement
        .iter()
        .map(|alpha| apply_linear(theta, alpha).valuation(alpha))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Basis,
    NotBasis,
    NotMembers,
}

/// Outcome of the Saito criterion on `l` candidate fields.
#[derive(Clone, Debug, Serialize)]
#[serde(bound(serialize = "K: Field + Serialize"))]
pub struct BasisCert<K: Field> {
    pub derivations: Vec<VField<K>>,
    pub determinant: RatFunc<K>,
    pub target: Qdata<K>,
    /// `c` with `determinant = c * Q_+ / Q_-`.
    pub scalar: Option<K>,
    pub verdict: Verdict,
    /// Degree criterion: nonzero wedge and `sum pdeg = |nu|`; `None` when
    /// some field is not homogeneous or some field is not a member.
    pub route_iii: Option<bool>,
    pub pdegs: Vec<Option<i64>>,
    pub nu_size: i64,
}

impl<K: Field> BasisCert<K> {
    pub fn is_basis(&self) -> bool {
        self.verdict == Verdict::Basis
    }

    /// The determinant route and the degree route agree.
    pub fn routes_agree(&self) -> bool {
        match self.route_iii {
            None => true,
            Some(b) => b == (self.verdict == Verdict::Basis),
        }
    }

    /// Sorted polynomial degrees of a certified homogeneous basis.
    pub fn exponents(&self) -> Result<Vec<i64>> {
        if self.verdict != Verdict::Basis {
            return Err(Error::NotABasis);
        }
        let mut e = self.pdegs.iter().map(|p| p.ok_or(Error::NotABasis)).collect::<Result<Vec<_>>>()?;
        e.sort_unstable();
        Ok(e)
    }
}

pub fn saito_check<K: Field>(fields: &[VField<K>], nu: &Mult<K>) -> Result<BasisCert<K>> {
    let target = nu.q_data();
    let pdegs: Vec<Option<i64>> = fields.iter().map(VField::pdeg).collect();
    let determinant = wedge(fields)?;
    let members = fields.par_iter().all(|f| member(f, nu));
    let scalar = if determinant.is_zero() {
        None
    } else {
        determinant
            .try_div(&nu.q_rational(), nu.arrangement())
            .ok()
            .and_then(|r| r.constant_value())
            .filter(|c| !c.is_zero())
    };
    let verdict = if !members {
        Verdict::NotMembers
    } else if scalar.is_some() {
        Verdict::Basis
    } else {
        Verdict::NotBasis
    };
    let route_iii = (members && pdegs.iter().all(Option::is_some)).then(|| {
        !determinant.is_zero() && pdegs.iter().map(|p| p.unwrap()).sum::<i64>() == nu.size()
    });
    Ok(BasisCert {
        derivations: fields.to_vec(),
        determinant,
        target,
        scalar,
        verdict,
        route_iii,
        pdegs,
        nu_size: nu.size(),
    })
}

/// The field `Q_+ d_alpha` (or `alpha^nu(H) Q_+ d_alpha` when `nu(H) < 0`),
/// with `d_alpha` the Hermitian normal direction of `H`. It lies in
/// `D(A, nu)` but not in `D(A, mu)` for any `mu` exceeding `nu` at `H`.
pub fn strictness_witness<K: Field>(nu: &Mult<K>, h: usize) -> VField<K> {
    let alpha = &nu.arrangement[h];
    let q = nu.q_data();
    let normal = alpha.normal_vector();
    let v = nu.values[h];
    let coeff = if v >= 0 {
        RatFunc::from_poly(q.qplus)
    } else {
        RatFunc::new(q.qplus, vec![(alpha.clone(), (-v) as u32)])
    };
    VField::new(normal.iter().map(|c| coeff.scale(c)).collect())
}

/// Basis of the homogeneous elements of `D(A, nu)` of polynomial degree
/// `pdeg`, as a vector space.
pub fn homogeneous_members<K: Field>(nu: &Mult<K>, pdeg: i64) -> Vec<VField<K>> {
    let n = nu.nvars();
    let q = nu.q_data();
    let qminus_deg = q.qminus.degree().unwrap_or(0) as i64;
    let d = pdeg + qminus_deg;
    if d < 0 {
        return Vec::new();
    }
    let monos = monomials_of_degree(n, d as u32);
    let unknowns: Vec<(usize, Monomial)> = (0..n)
        .flat_map(|j| monos.iter().map(move |m| (j, m.clone())))
        .collect();
    let mut rows: Vec<Vec<K>> = Vec::new();
    for (alpha, &v) in nu.arrangement.iter().zip(&nu.values) {
        let q_ord = (-v).max(0) as u32;
        let a = alpha.straightening_matrix();
        let piv = alpha.pivot();
        let moved: Vec<Poly<K>> = monos
            .iter()
            .map(|m| Poly::term(n, m.clone(), K::one()).substitute_linear_unchecked(&a))
            .collect();
        let mut constrain = |form: &LinForm<K>, need: u32| {
            if need == 0 {
                return;
            }
            // coefficient of each low-order monomial in y_piv, per unknown
            let mut eqs: BTreeMap<Monomial, Vec<K>> = BTreeMap::new();
            for (col, (j, _)) in unknowns.iter().enumerate() {
                let c = &form.coeffs()[*j];
                if c.is_zero() {
                    continue;
                }
                let img = &moved[col % monos.len()];
                for (m, v) in img.terms() {
                    if m.0[piv] < need {
                        let row = eqs.entry(m.clone()).or_insert_with(|| vec![K::zero(); unknowns.len()]);
                        row[col] = row[col].add_ref(&v.mul_ref(c));
                    }
                }
            }
            rows.extend(eqs.into_values());
        };
        constrain(alpha, v.max(0) as u32);
        for beta in alpha.orthogonal_complement() {
            constrain(&beta, q_ord);
        }
    }
    let ns = if rows.is_empty() {
        (0..unknowns.len())
            .map(|i| (0..unknowns.len()).map(|k| if k == i { K::one() } else { K::zero() }).collect())
            .collect()
    } else {
        matrix::nullspace(&rows, unknowns.len())
    };
    let qminus_factors: Vec<(LinForm<K>, u32)> = nu
        .arrangement
        .iter()
        .zip(&nu.values)
        .filter(|(_, &v)| v < 0)
        .map(|(l, &v)| (l.clone(), (-v) as u32))
        .collect();
    ns.into_iter()
        .map(|sol| {
            let mut coeffs = vec![Poly::zero(n); n];
            for ((j, m), c) in unknowns.iter().zip(sol) {
                if !c.is_zero() {
                    coeffs[*j] = &coeffs[*j] + &Poly::term(n, m.clone(), c);
                }
            }
            VField::new(
                coeffs
                    .into_iter()
                    .map(|p| RatFunc::new(p, qminus_factors.clone()))
                    .collect(),
            )
        })
        .collect()
}

/// Searches a homogeneous basis of `D(A, nu)` degree by degree: in each
/// polynomial degree, keep members outside the span of polynomial multiples
/// of the fields already kept. Returns the Saito certificate of the result.
pub fn search_basis<K: Field>(nu: &Mult<K>) -> Result<BasisCert<K>> {
    let n = nu.nvars();
    let qminus_deg = nu.q_data().qminus.degree().unwrap_or(0) as i64;
    let p_min = -qminus_deg;
    let p_max = nu.size() - (n as i64 - 1) * p_min;
    let mut found: Vec<VField<K>> = Vec::new();
    for p in p_min..=p_max {
        if found.len() == n {
            break;
        }
        let mut span: Vec<Vec<RatFunc<K>>> = Vec::new();
        for f in &found {
            let q = f.pdeg().unwrap();
            for m in monomials_of_degree(n, (p - q) as u32) {
                let x = RatFunc::from_poly(Poly::term(n, m, K::one()));
                span.push(f.coeffs().iter().map(|c| c * &x).collect());
            }
        }
        for cand in homogeneous_members(nu, p) {
            if found.len() == n {
                break;
            }
            let v: Vec<RatFunc<K>> = cand.coeffs().to_vec();
            if !in_field_span(&span, &v, nu) {
                span.push(v);
                found.push(cand);
            }
        }
    }
    if found.len() < n {
        return Err(Error::NotABasis);
    }
    saito_check(&found, nu)
}

/// Linear membership over `K` of a coefficient vector in a list of vectors,
/// after clearing the common denominator `Q_-`.
fn in_field_span<K: Field>(span: &[Vec<RatFunc<K>>], v: &[RatFunc<K>], nu: &Mult<K>) -> bool {
    let qm = nu.q_data().qminus;
    let clear = |w: &[RatFunc<K>]| -> Vec<Poly<K>> {
        w.iter()
            .map(|c| c.mul_poly(&qm).to_poly().expect("Q_- clears every denominator"))
            .collect()
    };
    let target = clear(v);
    let vecs: Vec<Vec<Poly<K>>> = span.iter().map(|w| clear(w)).collect();
    let mut index: BTreeMap<(usize, Monomial), usize> = BTreeMap::new();
    for w in vecs.iter().chain(std::iter::once(&target)) {
        for (j, p) in w.iter().enumerate() {
            for (m, _) in p.terms() {
                let next = index.len();
                index.entry((j, m.clone())).or_insert(next);
            }
        }
    }
    let to_row = |w: &Vec<Poly<K>>| {
        let mut r = vec![K::zero(); index.len()];
        for (j, p) in w.iter().enumerate() {
            for (m, c) in p.terms() {
                r[index[&(j, m.clone())]] = c.clone();
            }
        }
        r
    };
    let mut rows: Vec<Vec<K>> = vecs.iter().map(to_row).collect();
    let base = matrix::rank(&rows);
    rows.push(to_row(&target));
    matrix::rank(&rows) == base
}

/// Parses a multiplicity spec: `k*omega+c` (also `omega`, `-omega+1`, `3`)
/// or a bracketed integer list, read per orbit, or per hyperplane when its
/// length equals the number of hyperplanes.
pub fn parse_nu<K: Field>(spec: &str, hyperplanes: &[Hyperplane<K>]) -> Result<Mult<K>> {
    let s: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("invalid multiplicity `{spec}`"));
    let arrangement: Vec<LinForm<K>> = hyperplanes.iter().map(|h| h.alpha.clone()).collect();
    if let Some(body) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
        let vals = body
            .split(',')
            .map(|t| t.parse::<i64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        let orbits = hyperplanes.iter().map(|h| h.orbit).max().map_or(0, |m| m + 1);
        let values = if vals.len() == hyperplanes.len() {
            vals
        } else if vals.len() == orbits {
            hyperplanes.iter().map(|h| vals[h.orbit]).collect()
        } else {
            return Err(Error::Parse(format!(
                "expected {} per-hyperplane or {orbits} per-orbit values",
                hyperplanes.len()
            )));
        };
        return Mult::new(arrangement, values);
    }
    let (k, c) = match s.find("omega") {
        None => (0, s.parse::<i64>().map_err(|_| bad())?),
        Some(pos) => {
            let head = &s[..pos];
            let tail = &s[pos + "omega".len()..];
            let k = match head.trim_end_matches('*') {
                "" | "+" => 1,
                "-" => -1,
                t => t.parse::<i64>().map_err(|_| bad())?,
            };
            let c = if tail.is_empty() {
                0
            } else {
                tail.strip_prefix('+').unwrap_or(tail).parse::<i64>().map_err(|_| bad())?
            };
            (k, c)
        }
    };
    Ok(Mult::omega(hyperplanes, k, c))
}
