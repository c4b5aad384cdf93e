//! Unitary reflection groups: enumeration, reflecting hyperplanes, degrees,
//! invariants, invariant vector fields and the associated polynomials.

pub mod catalog;
pub mod enumerate;
pub mod invariants;
pub mod molien;

use serde::Serialize;

use crate::derivation::{Chart, VField};
use crate::error::{Error, Result};
use crate::poly::{matrix, split_linear, LinForm, Matrix, Poly};
use crate::scalar::{CycNum, Field, Rat};

pub use catalog::{lookup, CatalogEntry};
pub use enumerate::DEFAULT_ELEMENT_CAP;
pub use invariants::{reynolds, InvariantRing};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound(serialize = "K: Serialize"))]
pub struct Hyperplane<K: Field> {
    /// Fixed representative, normalized so its first nonzero coefficient is 1.
    pub alpha: LinForm<K>,
    /// Order of the pointwise stabilizer.
    pub e_h: u32,
    /// Index of the `W`-orbit containing the hyperplane.
    pub orbit: usize,
}

/// Everything derived from a generating set of a unitary reflection group.
#[derive(Debug)]
pub struct GroupData<K: Field> {
    pub name: String,
    pub rank: usize,
    pub cyclotomic_order: u32,
    pub generators: Vec<Matrix<K>>,
    pub elements: Vec<Matrix<K>>,
    /// Indices into `elements`.
    pub reflections: Vec<usize>,
    pub hyperplanes: Vec<Hyperplane<K>>,
    pub degrees: Vec<u32>,
    pub coexponents: Vec<u32>,
    pub coxeter_h: Rat,
    pub ring: InvariantRing<K>,
    /// Homogeneous basis of the invariant vector fields, ordered by degree.
    pub field_basis: Vec<VField<K>>,
    pub chart: Chart<K>,
    /// `prod alpha_H^(e_H)` written in the invariants.
    pub discriminant: Poly<K>,
}

impl<K: Field> GroupData<K> {
    pub fn analyze(name: &str, generators: Vec<Matrix<K>>, cyclotomic_order: u32, cap: usize) -> Result<Self> {
        let rank = generators.first().map_or(0, Vec::len);
        if rank == 0 {
            return Err(Error::Catalog(format!("{name}: empty generator list")));
        }
        for g in &generators {
            if !enumerate::is_unitary(g) {
                return Err(Error::Catalog(format!("{name}: generator is not unitary")));
            }
        }
        let elements = enumerate::closure(&generators, cyclotomic_order, cap)?;

        let mut reflections = Vec::new();
        let mut hyperplanes: Vec<Hyperplane<K>> = Vec::new();
        for (idx, w) in elements.iter().enumerate() {
            if let Some(alpha) = enumerate::reflecting_form(w) {
                reflections.push(idx);
                match hyperplanes.iter_mut().find(|h| h.alpha == alpha) {
                    Some(h) => h.e_h += 1,
                    None => hyperplanes.push(Hyperplane { alpha, e_h: 2, orbit: 0 }),
                }
            }
        }
        assign_orbits(&mut hyperplanes, &generators);

        let len = elements.len() + 1;
        let series = molien::molien_series(&elements, len);
        let degrees = molien::degrees_from_series(&series, rank)?;
        let order: u64 = degrees.iter().map(|&d| d as u64).product();
        if order != elements.len() as u64 {
            return Err(Error::Catalog(format!(
                "{name}: |W| = {} but the degrees multiply to {order}",
                elements.len()
            )));
        }
        let coxeter_h = Rat::new(
            ((reflections.len() + hyperplanes.len()) as i64).into(),
            (rank as i64).into(),
        );

        let invs = invariants::fundamental_invariants(&elements, &degrees)?;
        let ring = InvariantRing::new(invs.clone());
        let max_deg = *degrees.last().unwrap();
        let basis = invariants::invariant_field_basis(&elements, &ring, max_deg)?;
        let coexponents = basis.iter().map(|(p, _)| *p).collect();
        let field_basis = basis.iter().map(|(_, f)| invariants::to_vfield(f)).collect();

        let alphas: Vec<LinForm<K>> = hyperplanes.iter().map(|h| h.alpha.clone()).collect();
        let chart = Chart::new(invs, &alphas)?;

        let q_omega = hyperplanes
            .iter()
            .fold(Poly::one(rank), |acc, h| &acc * &h.alpha.to_poly().pow(h.e_h));
        let discriminant = ring.to_t(&q_omega)?;

        Ok(GroupData {
            name: name.to_string(),
            rank,
            cyclotomic_order,
            generators,
            elements,
            reflections,
            hyperplanes,
            degrees,
            coexponents,
            coxeter_h,
            ring,
            field_basis,
            chart,
            discriminant,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn exponents(&self) -> Vec<u32> {
        self.degrees.iter().map(|d| d - 1).collect()
    }

    pub fn alphas(&self) -> Vec<LinForm<K>> {
        self.hyperplanes.iter().map(|h| h.alpha.clone()).collect()
    }

    /// `h` as an integer; every catalog group has an integral Coxeter number.
    pub fn h(&self) -> u32 {
        assert!(self.coxeter_h.is_integer(), "non-integral Coxeter number");
        u32::try_from(self.coxeter_h.to_integer()).expect("Coxeter number fits in u32")
    }

    pub fn invariants(&self) -> &[Poly<K>] {
        self.ring.invariants()
    }

    /// `e_i + e*_(l+1-i) = h` for all `i`.
    pub fn well_generated(&self) -> bool {
        let l = self.rank;
        let e = self.exponents();
        let h = self.coxeter_h.clone();
        (0..l).all(|i| Rat::from_integer(((e[i] + self.coexponents[l - 1 - i]) as i64).into()) == h)
    }

    /// `Q = prod alpha_H`.
    pub fn q(&self) -> Poly<K> {
        self.hyperplanes
            .iter()
            .fold(Poly::one(self.rank), |acc, h| &acc * &h.alpha.to_poly())
    }

    /// `prod alpha_H^(e_H - 1)`.
    pub fn j_poly(&self) -> Poly<K> {
        self.hyperplanes
            .iter()
            .fold(Poly::one(self.rank), |acc, h| &acc * &h.alpha.to_poly().pow(h.e_h - 1))
    }

    /// `Q(A, omega) = prod alpha_H^(e_H)`.
    pub fn q_omega(&self) -> Poly<K> {
        self.hyperplanes
            .iter()
            .fold(Poly::one(self.rank), |acc, h| &acc * &h.alpha.to_poly().pow(h.e_h))
    }

    /// Diagonal of `B_inf = (1/h) diag(e_i) - 1`.
    pub fn b_inf(&self) -> Vec<K> {
        let h = K::from_i64(self.h() as i64);
        self.exponents()
            .iter()
            .map(|&e| K::from_i64(e as i64).div_ref(&h).unwrap().sub_ref(&K::one()))
            .collect()
    }

    /// Real-valued character, i.e. the group is conjugate to a real
    /// reflection group whatever the chosen realization.
    pub fn is_real(&self) -> bool {
        self.elements.iter().all(|w| {
            let tr = (0..self.rank).fold(K::zero(), |acc, i| acc.add_ref(&w[i][i]));
            tr.conj() == tr
        })
    }

    pub fn contains(&self, w: &Matrix<K>) -> bool {
        self.elements.iter().any(|g| g == w)
    }

    /// Exact consistency checks on the catalog data.
    pub fn consistency(&self) -> Result<Consistency<K>> {
        let series = molien::molien_series(&self.elements, self.order() + 1);
        let molien_degrees = molien::degrees_from_series(&series, self.rank)?;
        let degree_product: u64 = self.degrees.iter().map(|&d| d as u64).product();
        let h_formula = Rat::new(
            ((self.reflections.len() + self.hyperplanes.len()) as i64).into(),
            (self.rank as i64).into(),
        );
        let jac = self.chart.jac_det();
        let alphas = self.alphas();
        let jac_split = split_linear(jac, &alphas);
        let det_j_witness = quotient_scalar(jac, &self.j_poly());
        let qj = &self.q() * jac;
        let q_omega_witness = quotient_scalar(&self.q_omega(), &qj);
        let disc_witness = quotient_scalar(&self.ring.eval(&self.discriminant), &self.q_omega());
        // Dimensions of the invariant spaces, computed by averaging every
        // monomial, against the Molien coefficients.
        let invariant_dims: Vec<usize> = (0..=self.h())
            .map(|d| {
                let avgs: Vec<Poly<K>> = crate::poly::monomials_of_degree(self.rank, d)
                    .into_iter()
                    .map(|m| reynolds(&self.elements, &Poly::term(self.rank, m, K::one())))
                    .collect();
                span_dimension(&avgs)
            })
            .collect();
        let molien_dims_match = invariant_dims
            .iter()
            .enumerate()
            .all(|(d, &n)| series[d] == K::from_i64(n as i64));
        let reflection_count_matches =
            self.reflections.len() as u32 == self.degrees.iter().map(|d| d - 1).sum::<u32>();
        Ok(Consistency {
            order: self.order(),
            degree_product,
            molien_degrees: molien_degrees.clone(),
            molien_matches: molien_degrees == self.degrees,
            invariant_dims,
            molien_dims_match,
            reflection_count_matches,
            reflections: self.reflections.len(),
            hyperplanes: self.hyperplanes.len(),
            h_formula,
            well_generated: self.well_generated(),
            unitary: self.generators.iter().all(enumerate::is_unitary),
            jacobian_splits: jac_split.is_some(),
            det_j_witness,
            q_omega_witness,
            discriminant_witness: disc_witness,
        })
    }
}

fn span_dimension<K: Field>(polys: &[Poly<K>]) -> usize {
    let mut index = std::collections::BTreeMap::new();
    for p in polys {
        for (m, _) in p.terms() {
            let next = index.len();
            index.entry(m.clone()).or_insert(next);
        }
    }
    let rows: Vec<Vec<K>> = polys
        .iter()
        .map(|p| {
            let mut r = vec![K::zero(); index.len()];
            for (m, c) in p.terms() {
                r[index[m]] = c.clone();
            }
            r
        })
        .collect();
    if index.is_empty() {
        0
    } else {
        matrix::rank(&rows)
    }
}

/// The constant `c` with `a = c * b`, if there is one.
pub fn quotient_scalar<K: Field>(a: &Poly<K>, b: &Poly<K>) -> Option<K> {
    let q = a.exact_divide(b).ok()?;
    let c = q.constant_value()?;
    (!c.is_zero()).then_some(c)
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound(serialize = "K: Serialize"))]
pub struct Consistency<K> {
    pub order: usize,
    pub degree_product: u64,
    pub molien_degrees: Vec<u32>,
    pub molien_matches: bool,
    /// `dim S^W_d` for `d = 0..=h`, from Reynolds averages of monomials.
    pub invariant_dims: Vec<usize>,
    pub molien_dims_match: bool,
    /// `|R| = sum (d_i - 1)`.
    pub reflection_count_matches: bool,
    pub reflections: usize,
    pub hyperplanes: usize,
    #[serde(serialize_with = "ser_rat")]
    pub h_formula: Rat,
    pub well_generated: bool,
    pub unitary: bool,
    pub jacobian_splits: bool,
    /// `det J(t,x) = c * prod alpha_H^(e_H - 1)`.
    pub det_j_witness: Option<K>,
    /// `Q(A, omega) = c * Q * det J(t,x)`.
    pub q_omega_witness: Option<K>,
    /// `Delta(t(x)) = c * Q(A, omega)`.
    pub discriminant_witness: Option<K>,
}

impl<K> Consistency<K> {
    pub fn all_pass(&self) -> bool {
        self.order as u64 == self.degree_product
            && self.molien_matches
            && self.molien_dims_match
            && self.reflection_count_matches
            && self.well_generated
            && self.unitary
            && self.jacobian_splits
            && self.det_j_witness.is_some()
            && self.q_omega_witness.is_some()
            && self.discriminant_witness.is_some()
    }
}

fn ser_rat<S: serde::Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::scalar::rat_to_string(r))
}

/// Labels hyperplanes by their `W`-orbit (orbits under the generators).
fn assign_orbits<K: Field>(hyperplanes: &mut [Hyperplane<K>], generators: &[Matrix<K>]) {
    let n = hyperplanes.len();
    let mut orbit = vec![usize::MAX; n];
    let mut next = 0;
    for start in 0..n {
        if orbit[start] != usize::MAX {
            continue;
        }
        orbit[start] = next;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for g in generators {
                // alpha o g^-1 cuts out g(H)
                let ginv = matrix::adjoint(g);
                let a = hyperplanes[i].alpha.coeffs();
                let img: Vec<K> = (0..a.len())
                    .map(|j| (0..a.len()).fold(K::zero(), |acc, k| acc.add_ref(&a[k].mul_ref(&ginv[k][j]))))
                    .collect();
                let img = LinForm::new(img).unwrap().normalized().0;
                if let Some(j) = hyperplanes.iter().position(|h| h.alpha == img) {
                    if orbit[j] == usize::MAX {
                        orbit[j] = next;
                        stack.push(j);
                    }
                }
            }
        }
        next += 1;
    }
    for (h, o) in hyperplanes.iter_mut().zip(orbit) {
        h.orbit = o;
    }
}

/// Loads and analyzes a catalog group.
pub fn load(name: &str, cap: usize) -> Result<GroupData<CycNum>> {
    let entry = catalog::lookup(name)?;
    if entry.rank != entry.generators[0].len() {
        return Err(Error::Catalog(format!("{}: rank field disagrees with generators", entry.name)));
    }
    GroupData::analyze(&entry.name, entry.generators, entry.cyclotomic_order, cap)
}
